//! Wyman's interior with `e^{−γ} = 1 − r⁴/R⁴`.
//!
//! The catalog model uses the self-consistent member of the family: density
//! `8πμ = 5r²/R⁴` (what `e^{−γ}` forces through the first TOV relation),
//! lapse `f = a sinh(θ/2) + b cosh(θ/2)` with `θ = arcsin √(1 − r⁴/R⁴)`, and
//! the pressure implied by the lapse. The historically printed variant
//! (`8πμ = 5r²/R`, multiplier 2 inside the lapse, `+coth` pressure) is kept
//! alongside for diagnostics.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::models::{schwarzschild_a, schwarzschild_piece};
use super::{AnalyticModel, NativeForm, Piece};
use crate::geometry::radial::jet;
use crate::geometry::{Interval, RadialFunction};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WymanConstants {
    pub big_r: f64,
    pub mass: f64,
    pub r_b: f64,
    /// Lapse coefficients of the consistent interior.
    pub a: f64,
    pub b: f64,
    /// Coefficients of `a sinh 2θ + b cosh 2θ` in the printed interior.
    pub a_printed: f64,
    pub b_printed: f64,
    /// Phase of the printed pressure (zero pressure at `r_b` when possible).
    pub phase_printed: f64,
}

/// `θ(r) = arccos(r²/R²)` with first and second derivatives.
pub fn theta(big_r: f64, r: f64) -> (f64, f64, f64) {
    let s = r * r / (big_r * big_r);
    let (s1, s2) = (2.0 * r / (big_r * big_r), 2.0 / (big_r * big_r));
    let w = 1.0 - s * s;
    (s.acos(), -s1 / w.sqrt(), -(s2 * w + s * s1 * s1) / w.powf(1.5))
}

/// `a sinh(kθ) + b cosh(kθ)` as a function of `r`.
fn lapse_jet(big_r: f64, k: f64, a: f64, b: f64, r: f64) -> (f64, f64, f64) {
    let (t, t1, t2) = theta(big_r, r);
    let (sh, ch) = ((k * t).sinh(), (k * t).cosh());
    let f = a * sh + b * ch;
    let ft = k * (a * ch + b * sh);
    let ftt = k * k * f;
    (f, ft * t1, ftt * t1 * t1 + ft * t2)
}

fn match_linear(big_r: f64, k: f64, r_b: f64, mass: f64) -> (f64, f64) {
    let (t, t1, _) = theta(big_r, r_b);
    let (fb, fb1, _) = jet::sqrt(schwarzschild_a(mass, r_b));
    let (sh, ch) = ((k * t).sinh(), (k * t).cosh());
    // [sh ch; kθ'ch kθ'sh] (a, b) = (f, f')
    let det = k * t1 * (sh * sh - ch * ch);
    ((fb * k * t1 * sh - ch * fb1) / det, (sh * fb1 - k * t1 * ch * fb) / det)
}

pub fn constants(big_r: f64, mass: f64) -> Result<WymanConstants> {
    if !(big_r > 0.0) || !(mass > 0.0) || big_r <= 2.0 * mass {
        return Err(Error::BadParams("wyman needs R > 2M > 0".into()));
    }
    let r_b = (2.0 * mass * big_r.powi(4)).powf(0.2);
    let (a, b) = match_linear(big_r, 0.5, r_b, mass);
    let (a_printed, b_printed) = match_linear(big_r, 2.0, r_b, mass);
    let ab = 1.0 - (r_b / big_r).powi(4);
    let target = r_b * r_b * big_r / (2.0 * ab.sqrt());
    let phase_printed = if target.abs() > 1.0 {
        0.5 * ((target + 1.0) / (target - 1.0)).ln() - 0.5 * theta(big_r, r_b).0
    } else {
        0.0
    };
    Ok(WymanConstants { big_r, mass, r_b, a, b, a_printed, b_printed, phase_printed })
}

pub(super) fn model(p: BTreeMap<String, f64>) -> Result<AnalyticModel> {
    let k = constants(p["R"], p["M"])?;
    let (big_r, mass) = (k.big_r, k.mass);
    let inner = Interval::new(0.0, k.r_b);
    let a_in: Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync> = Arc::new(move |r| {
        let q = (r / big_r).powi(4);
        (1.0 - q, -4.0 * q / r, -12.0 * q / (r * r))
    });
    let f_in = move |r: f64| lapse_jet(big_r, 0.5, k.a, k.b, r);
    let interior = Piece {
        interval: inner,
        metric: RadialFunction::from_jet(inner, move |r| jet::neg(jet::ln(a_in(r)))),
        v: Some(RadialFunction::from_jet(inner, move |r| jet::scale(2.0, jet::ln(f_in(r))))),
        f: RadialFunction::from_jet(inner, f_in),
        mu: RadialFunction::from_jet(inner, move |r| {
            let s = 5.0 / (crate::units::EIGHT_PI * big_r.powi(4));
            (s * r * r, 2.0 * s * r, 2.0 * s)
        }),
        rho: RadialFunction::sampled(inner, move |r| consistent_pressure(&k, r) / crate::units::EIGHT_PI),
    };
    let outer = Interval::new(k.r_b, f64::INFINITY);
    let a_out: Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync> = Arc::new(move |r| schwarzschild_a(mass, r));
    let z = RadialFunction::constant(0.0);
    let exterior = schwarzschild_piece(outer, a_out.clone(), a_out, z.clone(), z);
    Ok(AnalyticModel {
        id: "wyman".into(),
        params: p,
        native: NativeForm::SchwarzschildForm,
        dim: 3,
        lambda: 0.0,
        pieces: vec![interior, exterior],
        expected_residual_tol: 1e-6,
        verify_interval: Interval::new(0.05 * k.r_b, k.r_b * (1.0 - 1e-3)),
        unbounded_fluid: false,
        surface: Some(k.r_b),
    })
}

/// `8πρ = −r²/R⁴ + 2e^{−γ} f'/(r f)` for the consistent interior.
pub fn consistent_pressure(k: &WymanConstants, r: f64) -> f64 {
    let a = 1.0 - (r / k.big_r).powi(4);
    let (f, f1, _) = lapse_jet(k.big_r, 0.5, k.a, k.b, r);
    -r * r / k.big_r.powi(4) + 2.0 * a * f1 / (r * f)
}

/// `8πρ` exactly as printed: `−r²/R + (2/R²)√(1−r⁴/R⁴) coth(θ/2 + B)`.
pub fn printed_pressure(k: &WymanConstants, r: f64) -> f64 {
    let a = 1.0 - (r / k.big_r).powi(4);
    let x = 0.5 * theta(k.big_r, r).0 + k.phase_printed;
    -r * r / k.big_r + 2.0 / (k.big_r * k.big_r) * a.sqrt() / x.tanh()
}

/// Printed interior as `(γ, v, μ, ρ)` radial functions on `[0, r_b]`.
pub fn printed_set(k: &WymanConstants) -> [RadialFunction; 4] {
    let dom = Interval::new(0.0, k.r_b);
    let kk = *k;
    let gamma = RadialFunction::sampled(dom, move |r| -(1.0 - (r / kk.big_r).powi(4)).ln());
    let v = RadialFunction::sampled(dom, move |r| {
        2.0 * lapse_jet(kk.big_r, 2.0, kk.a_printed, kk.b_printed, r).0.ln()
    });
    let mu = RadialFunction::sampled(dom, move |r| 5.0 * r * r / kk.big_r / crate::units::EIGHT_PI);
    let rho = RadialFunction::sampled(dom, move |r| printed_pressure(&kk, r) / crate::units::EIGHT_PI);
    [gamma, v, mu, rho]
}

/// Consistent interior with the printed-variant density `5r²/R⁴` and
/// multiplier ½, as `(γ, v, μ, ρ)`.
pub fn variant_set(model: &AnalyticModel) -> [RadialFunction; 4] {
    let p = &model.pieces[0];
    [p.metric.clone(), p.v.clone().unwrap(), p.mu.clone(), p.rho.clone()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lapse_matches_exterior_in_value_and_slope() {
        let k = constants(10.0, 1.0).unwrap();
        assert!((k.r_b.powi(5) - 2.0 * 1.0 * 1e4).abs() < 1e-9 * 2e4);
        let (f, f1, _) = lapse_jet(k.big_r, 0.5, k.a, k.b, k.r_b);
        let (g, g1, _) = jet::sqrt(schwarzschild_a(1.0, k.r_b));
        assert!((f - g).abs() < 1e-12 && (f1 - g1).abs() < 1e-12);
        assert!(consistent_pressure(&k, k.r_b).abs() < 1e-12);
    }

    #[test]
    fn theta_derivatives_match_fd() {
        let f = |r: f64| theta(3.0, r).0;
        let (_, t1, t2) = theta(3.0, 1.3);
        let d1 = crate::numerics::fd::d1(&f, 1.3, 0.0, 2.9).unwrap();
        let d2 = crate::numerics::fd::d2(&f, 1.3, 0.0, 2.9).unwrap();
        assert!((t1 - d1).abs() < 1e-9 && (t2 - d2).abs() < 1e-7);
    }
}
