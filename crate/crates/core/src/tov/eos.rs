use std::fmt;
use std::sync::Arc;

use crate::numerics::interp::Hermite;
use crate::{Error, Result};

/// Equation of state `μ(ρ)` closing the TOV system.
#[derive(Clone)]
pub enum EquationOfState {
    /// Volkoff's massive sphere, `μ ≡ c`.
    ConstantDensity { c: f64 },
    /// `μ = −c²/ρ`, signs as in the Chaplygin gas; energy-condition
    /// violations are allowed and reported elsewhere.
    Chaplygin { c: f64 },
    /// Monotone cubic through `(ρ, μ)` points sorted by `ρ`.
    Tabulated(Tabulated),
    Custom { name: String, mu: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

#[derive(Debug, Clone)]
pub struct Tabulated {
    interp: Hermite,
}

impl Tabulated {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        let rho: Vec<f64> = points.iter().map(|p| p.0).collect();
        let mu: Vec<f64> = points.iter().map(|p| p.1).collect();
        if rho.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadParams("tabulated EOS: rho must be strictly increasing".into()));
        }
        Ok(Self { interp: Hermite::pchip(rho, mu)? })
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.interp.nodes().iter().copied().zip(self.interp.values().iter().copied()).collect()
    }

    pub fn mu(&self, rho: f64) -> Result<f64> {
        self.interp.eval(rho)
    }
}

impl fmt::Debug for EquationOfState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl EquationOfState {
    /// Pure vacuum, `μ ≡ 0`.
    pub fn vacuum() -> Self {
        EquationOfState::ConstantDensity { c: 0.0 }
    }

    pub fn custom(name: &str, mu: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        EquationOfState::Custom { name: name.to_string(), mu: Arc::new(mu) }
    }

    /// Parses `constant:c=<x>`, `chaplygin:c=<x>`, `polytrope:K=<x>,gamma=<x>`
    /// or `vacuum`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut kv = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in EOS spec, got '{part}'")))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad number '{v}' in EOS spec")))?;
            kv.insert(k.trim().to_string(), v);
        }
        let get = |k: &str| kv.get(k).copied().ok_or_else(|| Error::Parse(format!("EOS '{kind}' needs {k}=<value>")));
        match kind {
            "vacuum" => Ok(Self::vacuum()),
            "constant" => Ok(Self::ConstantDensity { c: get("c")? }),
            "chaplygin" => Ok(Self::Chaplygin { c: get("c")? }),
            "polytrope" => {
                let (k, g) = (get("K")?, get("gamma")?);
                if !(k > 0.0 && g > 1.0) {
                    return Err(Error::BadParams("polytrope needs K > 0 and gamma > 1".into()));
                }
                // μ = (ρ/K)^{1/Γ} + ρ/(Γ−1), ρ the pressure
                Ok(Self::custom(&format!("polytrope:K={k:?},gamma={g:?}"), move |p| {
                    (p.max(0.0) / k).powf(1.0 / g) + p / (g - 1.0)
                }))
            }
            _ => Err(Error::Parse(format!("unknown EOS '{kind}' (constant, chaplygin, polytrope, vacuum)"))),
        }
    }

    /// Samples `n` points of `self` on `[lo, hi]` into a tabulated EOS.
    pub fn tabulate(&self, lo: f64, hi: f64, n: usize) -> Result<Self> {
        let pts = (0..n)
            .map(|k| {
                let rho = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                Ok((rho, self.mu(rho)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EquationOfState::Tabulated(Tabulated::new(&pts)?))
    }

    pub fn mu(&self, rho: f64) -> Result<f64> {
        let v = match self {
            EquationOfState::ConstantDensity { c } => *c,
            EquationOfState::Chaplygin { c } => -c * c / rho,
            EquationOfState::Tabulated(t) => t.mu(rho)?,
            EquationOfState::Custom { mu, .. } => mu(rho),
        };
        if !v.is_finite() {
            return Err(Error::Domain(format!("mu(rho={rho}) is not finite")));
        }
        Ok(v)
    }

    /// Short identifier, e.g. `constant:c=0.001`.
    pub fn describe(&self) -> String {
        match self {
            EquationOfState::ConstantDensity { c } => format!("constant:c={c:?}"),
            EquationOfState::Chaplygin { c } => format!("chaplygin:c={c:?}"),
            EquationOfState::Tabulated(t) => format!("tabulated:points={}", t.points().len()),
            EquationOfState::Custom { name, .. } if name.contains(':') => name.clone(),
            EquationOfState::Custom { name, .. } => format!("custom:{name}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chaplygin_is_exact() {
        let e = EquationOfState::Chaplygin { c: 0.3 };
        assert_eq!(e.mu(-0.3).unwrap(), 0.3);
        assert!(e.mu(0.0).is_err());
    }

    #[test]
    fn tabulated_rejects_unsorted_and_extrapolation() {
        assert!(Tabulated::new(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
        let t = EquationOfState::ConstantDensity { c: 2.0 }.tabulate(0.0, 1.0, 5).unwrap();
        assert_eq!(t.mu(0.37).unwrap(), 2.0);
        assert!(t.mu(1.5).is_err());
    }
}
