use serde::Serialize;

use super::eos::EquationOfState;
use super::profile::RadialProfile;
use crate::geometry::{Interval, RadialFunction};
use crate::numerics::interp::Hermite;
use crate::{Error, Result};

/// Interior profile matched at `r_b` to the Schwarzschild exterior of mass
/// `𝔐 = m(r_b)`.
#[derive(Debug, Clone)]
pub struct StellarModel {
    pub interior: RadialProfile,
    pub r_b: f64,
    pub total_mass: f64,
    pub eos: String,
    pub rho_center: f64,
    m: Hermite,
    rho: Hermite,
    mu: Hermite,
    v: Hermite,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelDescriptor {
    pub eos: String,
    pub rho_center: f64,
    pub r_b: f64,
    pub mass: f64,
    pub samples_csv: String,
}

/// Builds the matched model; the interior must already carry the lapse.
pub fn match_exterior(profile: &RadialProfile, r_b: f64, eos: &EquationOfState) -> Result<StellarModel> {
    let m_interp = profile.m_interp()?;
    let mass = m_interp.eval(r_b)?;
    if r_b <= 2.0 * mass {
        return Err(Error::HorizonHit { r: r_b, m: mass });
    }
    if !profile.has_lapse() {
        return Err(Error::BadParams("interior has no lapse; run integrate_lapse first".into()));
    }
    Ok(StellarModel {
        r_b,
        total_mass: mass,
        eos: eos.describe(),
        rho_center: profile.rho[0],
        m: m_interp,
        rho: profile.rho_interp()?,
        mu: profile.mu_interp()?,
        v: profile.v_interp()?,
        interior: profile.clone(),
    })
}

impl StellarModel {
    fn inside(&self, r: f64) -> Result<bool> {
        if r < self.interior.r_start() {
            return Err(Error::Domain(format!("r={r} below the regularized center")));
        }
        Ok(r <= self.r_b)
    }

    pub fn mass(&self, r: f64) -> Result<f64> {
        Ok(if self.inside(r)? { self.m.eval(r)? } else { self.total_mass })
    }

    pub fn exp_neg_gamma(&self, r: f64) -> Result<f64> {
        Ok(1.0 - 2.0 * self.mass(r)? / r)
    }

    pub fn exp_v(&self, r: f64) -> Result<f64> {
        Ok(if self.inside(r)? { self.v.eval(r)?.exp() } else { 1.0 - 2.0 * self.total_mass / r })
    }

    pub fn lapse(&self, r: f64) -> Result<f64> {
        Ok(self.exp_v(r)?.sqrt())
    }

    pub fn lapse_d1(&self, r: f64) -> Result<f64> {
        if self.inside(r)? {
            Ok(0.5 * self.lapse(r)? * self.v.deriv(r)?)
        } else {
            Ok(self.total_mass / (r * r * self.lapse(r)?))
        }
    }

    pub fn mu(&self, r: f64) -> Result<f64> {
        Ok(if self.inside(r)? { self.mu.eval(r)? } else { 0.0 })
    }

    pub fn rho(&self, r: f64) -> Result<f64> {
        Ok(if self.inside(r)? { self.rho.eval(r)? } else { 0.0 })
    }

    /// `(γ, v, μ, ρ)` as radial functions on `[r_start, ∞)`; interior and
    /// exterior pieces are joined at `r_b`, so finite-difference stencils
    /// must not straddle the junction.
    pub fn radial_functions(&self) -> [RadialFunction; 4] {
        let dom = Interval::new(self.interior.r_start(), f64::INFINITY);
        let s = self.clone();
        let gamma = RadialFunction::sampled(dom, move |r| -s.exp_neg_gamma(r).map_or(f64::NAN, f64::ln));
        let s = self.clone();
        let v = RadialFunction::sampled(dom, move |r| s.exp_v(r).map_or(f64::NAN, f64::ln));
        let s = self.clone();
        let mu = RadialFunction::sampled(dom, move |r| s.mu(r).unwrap_or(f64::NAN));
        let s = self.clone();
        let rho = RadialFunction::sampled(dom, move |r| s.rho(r).unwrap_or(f64::NAN));
        [gamma, v, mu, rho]
    }

    /// Lapse as a radial function; across `r_b` it is continuous with a
    /// continuous first derivative.
    pub fn lapse_function(&self) -> RadialFunction {
        let s = self.clone();
        RadialFunction::sampled(Interval::new(self.interior.r_start(), f64::INFINITY), move |r| {
            s.lapse(r).unwrap_or(f64::NAN)
        })
    }

    pub fn descriptor(&self, samples_csv: &str) -> ModelDescriptor {
        ModelDescriptor {
            eos: self.eos.clone(),
            rho_center: self.rho_center,
            r_b: self.r_b,
            mass: self.total_mass,
            samples_csv: samples_csv.to_string(),
        }
    }
}
