//! Pointwise weak, null and dominant energy conditions along a radial grid.

use serde::Serialize;

use crate::{Error, Result};

/// Values in `[−EC_EPS, 0)` count as zero.
pub const EC_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    Wec,
    Nec,
    Dec,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub r: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionScan {
    pub grid: Vec<f64>,
    pub wec: Vec<bool>,
    pub nec: Vec<bool>,
    pub dec: Vec<bool>,
    pub first_violation: Option<Violation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditSummary {
    pub points: usize,
    pub wec_fraction: f64,
    pub nec_fraction: f64,
    pub dec_fraction: f64,
    pub first_violation: Option<Violation>,
    pub chain_holds: bool,
}

fn nonneg(x: f64) -> bool {
    x >= -EC_EPS
}

/// `(wec, nec, dec)` at one point.
pub fn conditions(mu: f64, rho: f64) -> (bool, bool, bool) {
    let nec = nonneg(mu + rho);
    let wec = nonneg(mu) && nec;
    // μ ≥ |ρ| is μ − ρ ≥ 0 and μ + ρ ≥ 0; it implies μ ≥ 0
    let dec = nonneg(mu - rho) && nec && wec;
    (wec, nec, dec)
}

/// Scans `μ(r)`, `ρ(r)` over `grid`. Points where either function fails to
/// evaluate (or is NaN) satisfy no condition.
pub fn scan(mu: &dyn Fn(f64) -> Result<f64>, rho: &dyn Fn(f64) -> Result<f64>, grid: &[f64]) -> Result<ConditionScan> {
    if grid.is_empty() {
        return Err(Error::Domain("energy-condition scan needs a nonempty grid".into()));
    }
    let mut out = ConditionScan {
        grid: grid.to_vec(),
        wec: Vec::with_capacity(grid.len()),
        nec: Vec::with_capacity(grid.len()),
        dec: Vec::with_capacity(grid.len()),
        first_violation: None,
    };
    for &r in grid {
        let (w, n, d) = match (mu(r), rho(r)) {
            (Ok(m), Ok(p)) if m.is_finite() && p.is_finite() => conditions(m, p),
            _ => (false, false, false),
        };
        if out.first_violation.is_none() {
            let bad = [(Condition::Nec, n), (Condition::Wec, w), (Condition::Dec, d)]
                .into_iter()
                .find(|(_, ok)| !ok);
            if let Some((condition, _)) = bad {
                out.first_violation = Some(Violation { condition, r });
            }
        }
        out.wec.push(w);
        out.nec.push(n);
        out.dec.push(d);
    }
    Ok(out)
}

impl ConditionScan {
    /// DEC ⇒ WEC ⇒ NEC at every point.
    pub fn chain_holds(&self) -> bool {
        (0..self.grid.len()).all(|i| (!self.dec[i] || self.wec[i]) && (!self.wec[i] || self.nec[i]))
    }

    pub fn summary(&self) -> AuditSummary {
        let frac = |v: &[bool]| v.iter().filter(|b| **b).count() as f64 / v.len() as f64;
        AuditSummary {
            points: self.grid.len(),
            wec_fraction: frac(&self.wec),
            nec_fraction: frac(&self.nec),
            dec_fraction: frac(&self.dec),
            first_violation: self.first_violation.clone(),
            chain_holds: self.chain_holds(),
        }
    }

    /// Advisory flag: the weak energy condition fails somewhere.
    pub fn advisory(&self) -> bool {
        self.wec.iter().any(|w| !w)
    }
}
