use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::numerics::fd;
use crate::{Error, Result};

pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed interval `[lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.lo && r <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Analytic,
    FiniteDifference,
}

/// A real function of one variable with its first two derivatives.
///
/// Derivatives are either supplied in closed form or taken by
/// Richardson-extrapolated central differences of `value` (see
/// [`crate::numerics::fd`]); stencils that would leave the domain fail with
/// [`Error::Derivative`].
#[derive(Clone)]
pub struct RadialFunction {
    value: Fn1,
    derivs: Option<(Fn1, Fn1)>,
    domain: Interval,
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFunction")
            .field("domain", &self.domain)
            .field("provenance", &self.provenance())
            .finish()
    }
}

impl RadialFunction {
    pub fn analytic(
        domain: Interval,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { value: Arc::new(value), derivs: Some((Arc::new(d1), Arc::new(d2))), domain }
    }

    pub fn sampled(domain: Interval, value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), derivs: None, domain }
    }

    /// From a closure returning `(value, d1, d2)` at once.
    pub fn from_jet(domain: Interval, jet: impl Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static) -> Self {
        let j = Arc::new(jet);
        let (j1, j2) = (j.clone(), j.clone());
        Self::analytic(domain, move |r| j(r).0, move |r| j1(r).1, move |r| j2(r).2)
    }

    pub fn constant(c: f64) -> Self {
        Self::analytic(Interval::REAL_LINE, move |_| c, |_| 0.0, |_| 0.0)
    }

    pub fn identity() -> Self {
        Self::analytic(Interval::REAL_LINE, |r| r, |_| 1.0, |_| 0.0)
    }

    pub fn provenance(&self) -> Provenance {
        if self.derivs.is_some() {
            Provenance::Analytic
        } else {
            Provenance::FiniteDifference
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    /// Same values, derivatives forced through finite differences.
    pub fn to_finite_difference(&self) -> Self {
        Self { value: self.value.clone(), derivs: None, domain: self.domain }
    }

    fn check(&self, r: f64) -> Result<()> {
        if !self.domain.contains(r) {
            return Err(Error::Domain(format!(
                "r={r} outside [{}, {}]",
                self.domain.lo, self.domain.hi
            )));
        }
        Ok(())
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        let v = (self.value)(r);
        if !v.is_finite() {
            return Err(Error::Domain(format!("non-finite value at r={r}")));
        }
        Ok(v)
    }

    pub fn d1(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        match &self.derivs {
            Some((d1, _)) => Ok(d1(r)),
            None => fd::d1(&*self.value, r, self.domain.lo, self.domain.hi),
        }
    }

    pub fn d2(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        match &self.derivs {
            Some((_, d2)) => Ok(d2(r)),
            None => fd::d2(&*self.value, r, self.domain.lo, self.domain.hi),
        }
    }

    /// `(value, d1, d2)` at `r`.
    pub fn jet(&self, r: f64) -> Result<(f64, f64, f64)> {
        Ok((self.value(r)?, self.d1(r)?, self.d2(r)?))
    }

    /// Unchecked evaluation for hot loops that already validated the domain.
    pub fn raw(&self) -> &(dyn Fn(f64) -> f64 + Send + Sync) {
        &*self.value
    }

    /// Largest disagreement between the supplied derivatives and finite
    /// differences of `value` over `grid`; zero for finite-difference
    /// functions by definition.
    pub fn fd_discrepancy(&self, grid: &[f64]) -> Result<f64> {
        let fdv = self.to_finite_difference();
        let mut worst: f64 = 0.0;
        for &r in grid {
            worst = worst.max((self.d1(r)? - fdv.d1(r)?).abs());
            worst = worst.max((self.d2(r)? - fdv.d2(r)?).abs());
        }
        Ok(worst)
    }
}

/// Chain-rule helpers on `(value, d1, d2)` triples.
pub mod jet {
    pub type Jet = (f64, f64, f64);

    pub fn ln((a, a1, a2): Jet) -> Jet {
        (a.ln(), a1 / a, (a2 * a - a1 * a1) / (a * a))
    }

    pub fn sqrt((a, a1, a2): Jet) -> Jet {
        let s = a.sqrt();
        (s, 0.5 * a1 / s, 0.5 * a2 / s - 0.25 * a1 * a1 / (a * s))
    }

    pub fn neg((a, a1, a2): Jet) -> Jet {
        (-a, -a1, -a2)
    }

    pub fn scale(k: f64, (a, a1, a2): Jet) -> Jet {
        (k * a, k * a1, k * a2)
    }

    pub fn constant(c: f64) -> Jet {
        (c, 0.0, 0.0)
    }
}
