//! TOV integration, surface location and lapse quadrature.

use std::cell::Cell;
use std::f64::consts::PI;

use super::eos::EquationOfState;
use super::profile::RadialProfile;
use crate::geometry::ansatz::EPS_DOM;
use crate::numerics::quad::{adaptive_simpson, gauss_legendre};
use crate::numerics::roots::bisect;
use crate::ode::{self, Control, OdeOptions};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub atol: f64,
    pub rtol: f64,
    pub r_start: f64,
    pub r_max: f64,
    /// Relative pressure threshold that also counts as the surface.
    pub surface_rel: f64,
    /// Upper bound on the step; by default a fiftieth of the density scale
    /// `√(3/8π|μ_c|)`, which keeps Hermite interpolation of the samples
    /// well below the integration tolerance.
    pub h_max: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { atol: 1e-10, rtol: 1e-8, r_start: 1e-6, r_max: 1e3, surface_rel: 1e-12, h_max: None }
    }
}

/// `e^{−γ(r)} = 1 − (8πc/3) r² + k/r`.
pub fn volkoff_gamma(c: f64, k: f64, r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("r={r} is not positive")));
    }
    Ok(1.0 - 8.0 * PI * c / 3.0 * r * r + k / r)
}

// Inside the star μ follows the EOS; once a trial stage overshoots the
// surface of a positive-pressure star the EOS is evaluated at ρ = 0.
fn eos_mu(eos: &EquationOfState, rho: f64, rho_c: f64) -> Result<f64> {
    if rho_c > 0.0 && rho < 0.0 {
        eos.mu(0.0)
    } else {
        eos.mu(rho)
    }
}

fn tov_rhs(eos: &EquationOfState, rho_c: f64, r: f64, y: &[f64; 3]) -> Result<[f64; 3]> {
    let (m, rho) = (y[0], y[1]);
    let gap = r - 2.0 * m;
    if gap <= EPS_DOM {
        return Err(Error::HorizonHit { r, m });
    }
    let mu = eos_mu(eos, rho, rho_c).map_err(|e| Error::Rhs { r, msg: e.to_string() })?;
    let q = (m + 4.0 * PI * r * r * r * rho) / (r * gap);
    Ok([4.0 * PI * r * r * mu, -q * (mu + rho), 2.0 * q])
}

/// Integrates `m' = 4πr²μ`, `ρ' = −(m+4πr³ρ)(μ+ρ)/(r(r−2m))` and
/// `v' = 2(m+4πr³ρ)/(r(r−2m))` outward from the regularized center until
/// the surface, `r_max`, or failure.
///
/// The returned profile has `surface` set when the pressure reached zero
/// (or fell below `surface_rel·ρ_c`); lapse columns are left as NaN until
/// [`integrate_lapse`].
pub fn integrate_tov(eos: &EquationOfState, rho_center: f64, opts: &SolverOptions) -> Result<RadialProfile> {
    if !rho_center.is_finite() {
        return Err(Error::BadParams(format!("rho_center={rho_center} is not finite")));
    }
    let mu_c = eos.mu(rho_center).map_err(|_| Error::CenterSingularity { mu: f64::NAN })?;
    let r0 = opts.r_start;
    let y0 = [
        4.0 * PI / 3.0 * mu_c * r0.powi(3),
        rho_center - 2.0 * PI / 3.0 * (mu_c + rho_center) * (mu_c + 3.0 * rho_center) * r0 * r0,
        4.0 * PI / 3.0 * (mu_c + 3.0 * rho_center) * r0 * r0,
    ];
    let scale = if mu_c != 0.0 { (3.0 / (8.0 * PI * mu_c.abs())).sqrt() } else { opts.r_max };
    let h_max = opts.h_max.unwrap_or(scale / 50.0).min(opts.r_max / 16.0);
    let ode_opts = OdeOptions { atol: opts.atol, rtol: opts.rtol, h_max, ..Default::default() };
    let thresh = opts.surface_rel * rho_center;
    let tol_r = 1e-14;

    let sol = ode::integrate(
        |r, y: &[f64; 3]| tov_rhs(eos, rho_center, r, y),
        r0,
        y0,
        opts.r_max,
        &ode_opts,
        |s| {
            if rho_center <= 0.0 {
                return Control::Continue;
            }
            let (p0, p1) = (s.y0[1], s.y1[1]);
            if p1 <= 0.0 && p0 > 0.0 {
                let rb = bisect(&|r| s.eval(r)[1], s.t0, s.t1, tol_r * s.t1).unwrap_or(s.t1);
                Control::StopAt(rb)
            } else if p1 < thresh {
                let g = |r: f64| s.eval(r)[1] - 0.5 * thresh;
                let rb = bisect(&g, s.t0, s.t1, tol_r * s.t1).unwrap_or(s.t1);
                Control::StopAt(rb)
            } else {
                Control::Continue
            }
        },
    )?;

    let n = sol.t.len();
    let mut p = RadialProfile {
        r: sol.t.clone(),
        m: sol.y.iter().map(|y| y[0]).collect(),
        mu: Vec::with_capacity(n),
        rho: sol.y.iter().map(|y| y[1]).collect(),
        exp_neg_gamma: Vec::with_capacity(n),
        exp_v: vec![f64::NAN; n],
        f: vec![f64::NAN; n],
        dm: sol.dy.iter().map(|d| d[0]).collect(),
        drho: sol.dy.iter().map(|d| d[1]).collect(),
        dv: sol.dy.iter().map(|d| d[2]).collect(),
        v_direct: sol.y.iter().map(|y| y[2]).collect(),
        surface: None,
    };
    for k in 0..n {
        p.mu.push(eos_mu(eos, p.rho[k], rho_center)?);
        p.exp_neg_gamma.push(1.0 - 2.0 * p.m[k] / p.r[k]);
    }
    if sol.stopped {
        // the surface value is zero to within the bisection tolerance
        *p.rho.last_mut().unwrap() = p.rho.last().unwrap().max(0.0).min(thresh.max(0.0));
        p.surface = Some(p.r_end());
    }
    Ok(p)
}

/// Surface radius of a finished run.
pub fn detect_surface(profile: &RadialProfile) -> Result<f64> {
    profile.surface.ok_or(Error::NoSurface { r_max: profile.r_end() })
}

/// Where the lapse is pinned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LapseNormalization {
    /// `e^{v(r_b)} = 1 − 2𝔐/r_b` at the detected surface.
    MatchExterior,
    /// `f(r_ref) = 1`, for fluids without a surface.
    Reference(f64),
}

pub const DEGENERATE_FLUID_EPS: f64 = 1e-14;

/// Fills `e^{v}` and `f = e^{v/2}` from `v(r) = v(r_b) − 2∫_0^{ρ(r)} dρ/(μ(ρ)+ρ)`.
pub fn integrate_lapse(
    profile: &RadialProfile,
    eos: &EquationOfState,
    norm: LapseNormalization,
) -> Result<RadialProfile> {
    let n = profile.len();
    let rho_c = profile.rho[0];
    // at the surface ρ → 0 and μ may vanish too (polytropes); that endpoint
    // is an integrable singularity, handled by `piece`
    let checked = if profile.surface.is_some() { n - 1 } else { n };
    for k in 0..checked {
        let s = profile.mu[k] + profile.rho[k];
        if s.abs() < DEGENERATE_FLUID_EPS {
            return Err(Error::DegenerateFluid { rho: profile.rho[k] });
        }
    }
    let integrand = |rho: f64| -> f64 { 1.0 / (eos_mu(eos, rho, rho_c).unwrap_or(f64::NAN) + rho) };
    let bad = Cell::new(None);
    // ∫_0^a g(ρ) dρ with ρ = a t²: removes the ρ^{-1/Γ}-type endpoint singularity
    let from_zero = |a: f64| -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        let (t, w) = gauss_legendre(32);
        let v: f64 = t
            .iter()
            .zip(&w)
            .map(|(t, w)| {
                let u = 0.5 * (t + 1.0);
                0.5 * w * integrand(a * u * u) * 2.0 * a * u
            })
            .sum();
        if !v.is_finite() && bad.get().is_none() {
            bad.set(Some(0.0));
        }
        v
    };
    let singular_at_zero = !integrand(0.0).is_finite();
    let piece = |a: f64, b: f64| -> f64 {
        if a == b {
            return 0.0;
        }
        // pieces reaching (nearly) down to ρ = 0 go through the substitution
        if singular_at_zero && a >= 0.0 && b >= 0.0 && a.min(b) <= 1e-3 * a.max(b) {
            return from_zero(b) - from_zero(a);
        }
        let check = |x: f64| {
            let v = integrand(x);
            if (!v.is_finite() || 1.0 / v.abs() < DEGENERATE_FLUID_EPS) && bad.get().is_none() {
                bad.set(Some(x));
            }
            v
        };
        let tol = 1e-14 * (1.0 + (b - a).abs());
        adaptive_simpson(&check, a, b, tol)
    };
    // cumulative ∫_{ρ_{k}}^{ρ_{k+1}} along the run
    let mut cum = vec![0.0; n];
    for k in 1..n {
        cum[k] = cum[k - 1] + piece(profile.rho[k - 1], profile.rho[k]);
    }
    if let Some(rho) = bad.get() {
        return Err(Error::DegenerateFluid { rho });
    }
    // v(r_k) = v_ref − 2[cum_k − cum_ref]
    let (k_ref, v_ref) = match norm {
        LapseNormalization::MatchExterior => {
            let rb = detect_surface(profile)?;
            let mass = *profile.m.last().unwrap();
            if rb <= 2.0 * mass {
                return Err(Error::HorizonHit { r: rb, m: mass });
            }
            // integrate the tiny residual pressure at the surface to zero
            let tail = piece(profile.rho[n - 1], 0.0);
            (n - 1, (1.0 - 2.0 * mass / rb).ln() + 2.0 * tail)
        }
        LapseNormalization::Reference(r_ref) => {
            if !profile.domain().contains(r_ref) {
                return Err(Error::Domain(format!("reference radius {r_ref} outside the profile")));
            }
            let k = profile.r.partition_point(|&r| r < r_ref).min(n - 1);
            let rho_interp = profile.rho_interp()?;
            let rho_ref = rho_interp.eval(r_ref)?;
            let shift = piece(profile.rho[k], rho_ref);
            // v(r_ref) = 0 ⇒ v_k = 2 shift
            (k, 2.0 * shift)
        }
    };
    if let Some(rho) = bad.get() {
        return Err(Error::DegenerateFluid { rho });
    }
    let mut out = profile.clone();
    for k in 0..n {
        let v = v_ref - 2.0 * (cum[k] - cum[k_ref]);
        out.exp_v[k] = v.exp();
        out.f[k] = (0.5 * v).exp();
        let (r, m) = (profile.r[k], profile.m[k]);
        out.dv[k] = (2.0 * m + 8.0 * PI * r.powi(3) * profile.rho[k]) / (r * (r - 2.0 * m));
    }
    Ok(out)
}
