//! Stellar model on the cigar-type warped product `dr² + tanh²r g_{S^{n−1}}`
//! with lapse `f = A sin(k log cosh r) + B cos(k log cosh r)`, `k = √(n−2)`.
//!
//! Density and pressure follow from the field equations: with
//! `L = log cosh r` and `g = A cos kL − B sin kL`,
//!
//! ```text
//! R   = (n−1)(n−2)(1 + sech²r) + 4(n−1) sech²r,     μ_geo = R/2,
//! Δf  = n k sech²r g − k² tanh²r f,
//! ρ_geo = (n−1)/n · Δf/f − (n−2)R/(2n).
//! ```
//!
//! For n = 3, A = 1, B = 0 this is `8πρ − Λ = −1 − sech²r + 2 sech²r cot L`.

use std::collections::BTreeMap;

use super::{AnalyticModel, NativeForm, Piece};
use crate::geometry::field::{BasicInvariant, Field};
use crate::geometry::{Interval, RadialFunction};
use crate::numerics::roots;
use crate::units;
use crate::{Error, Result};

/// Exclusion radius around zeros of the lapse.
pub const ZERO_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WittenParams {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
}

impl WittenParams {
    pub fn k(&self) -> f64 {
        ((self.n - 2) as f64).sqrt()
    }

    /// `(f, f', f'')` at `r`.
    pub fn lapse(&self, r: f64) -> (f64, f64, f64) {
        let k = self.k();
        let l = r.cosh().ln();
        let (s, c) = (k * l).sin_cos();
        let f = self.a * s + self.b * c;
        let g = self.a * c - self.b * s;
        let (th, sech2) = (r.tanh(), 1.0 / r.cosh().powi(2));
        (f, k * th * g, k * sech2 * g - k * k * th * th * f)
    }

    /// Lapse in the conformal chart, as a function of `ϱ = |x|² = sinh² r`;
    /// there `log cosh r = ½ log(1 + ϱ)`.
    pub fn lapse_invariant(&self, s: f64) -> (f64, f64, f64) {
        let k = self.k();
        let q = 1.0 + s;
        let (sn, cs) = (0.5 * k * q.ln()).sin_cos();
        let f = self.a * sn + self.b * cs;
        let g = k * (self.a * cs - self.b * sn);
        let (u1, u2) = (0.5 / q, -0.5 / (q * q));
        (f, g * u1, g * u2 - k * k * f * u1 * u1)
    }

    pub fn scalar_curvature(&self, r: f64) -> f64 {
        let m = self.n as f64 - 1.0;
        let sech2 = 1.0 / r.cosh().powi(2);
        m * (m - 1.0) * (1.0 + sech2) + 4.0 * m * sech2
    }

    /// Geometric `(μ, ρ)`.
    pub fn geometric(&self, r: f64) -> (f64, f64) {
        let nf = self.n as f64;
        let k = self.k();
        let l = r.cosh().ln();
        let (s, c) = (k * l).sin_cos();
        let f = self.a * s + self.b * c;
        let g = self.a * c - self.b * s;
        let (th, sech2) = (r.tanh(), 1.0 / r.cosh().powi(2));
        let lap = nf * k * sech2 * g - k * k * th * th * f;
        let big_r = self.scalar_curvature(r);
        (0.5 * big_r, (nf - 1.0) / nf * lap / f - (nf - 2.0) * big_r / (2.0 * nf))
    }

    /// Physical `(μ, ρ)`.
    pub fn physical(&self, r: f64) -> (f64, f64) {
        let (m, p) = self.geometric(r);
        units::to_physical(m, p, self.lambda)
    }

    /// Zeros of `f` in `(0, r_max]`, located where `kL = mπ − δ`.
    pub fn lapse_zeros(&self, r_max: f64) -> Vec<f64> {
        let k = self.k();
        let delta = self.b.atan2(self.a);
        let l_max = r_max.cosh().ln();
        let mut out = Vec::new();
        let mut m = (delta / std::f64::consts::PI).floor() as i64;
        loop {
            let x = m as f64 * std::f64::consts::PI - delta;
            let l = x / k;
            if l > l_max {
                break;
            }
            if l > 0.0 {
                out.push(l.exp().acosh());
            }
            m += 1;
        }
        out
    }

    /// First radial interval on which `f > 0`, zero neighborhoods removed.
    pub fn positive_interval(&self) -> Result<Interval> {
        let zeros = self.lapse_zeros(60.0);
        let mut edges = vec![0.0];
        edges.extend(zeros.iter().copied());
        for w in edges.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            if self.lapse(mid).0 > 0.0 {
                let lo = if w[0] == 0.0 { 0.0 } else { w[0] + ZERO_GAP };
                return Ok(Interval::new(lo, w[1] - ZERO_GAP));
            }
        }
        Err(Error::BadParams("lapse is never positive on (0, 60)".into()))
    }

    /// Radii where `ρ` diverges: the zeros of `f` at which `Δf ≠ 0`.
    pub fn pressure_poles(&self, r_max: f64) -> Vec<f64> {
        self.lapse_zeros(r_max)
            .into_iter()
            .filter(|&r| {
                let (_, f1, f2) = self.lapse(r);
                let nf = self.n as f64;
                (f2 + (nf - 1.0) * f1 / (r.tanh() * r.cosh().powi(2))).abs() > 1e-12
            })
            .collect()
    }
}

/// Zeros of `f` by bracketing and Brent, independent of the closed form.
pub fn lapse_zeros_numeric(p: &WittenParams, r_max: f64) -> Vec<f64> {
    // log cosh r underflows to 0 for tiny r, so start the scan away from 0
    roots::all_roots(&|r| p.lapse(r).0, 1e-3, r_max, 20_000, 1e-13)
}

/// Commonly quoted closed-form pressure for n = 3, A = 1, B = 0 (it does not
/// close the field equations; see the diagnostic entries in `verify`):
/// `8πρ = −[11/3 tanh²r + 2 sech²r − 2 sech²r / tan(log cosh r)] + Λ`.
pub fn printed_pressure(r: f64, lambda: f64) -> f64 {
    let sech2 = 1.0 / r.cosh().powi(2);
    -(11.0 / 3.0 * r.tanh().powi(2) + 2.0 * sech2 - 2.0 * sech2 / r.cosh().ln().tan()) + lambda
}

/// The same pressure in the chart `r̃ = 𝔐 cosh²r`:
/// `8πρ = 2𝔐/(r̃ tan log √(r̃/𝔐)) + 5𝔐/(3r̃) − 11/3 + Λ`.
pub fn printed_pressure_rtilde(rt: f64, mass: f64, lambda: f64) -> f64 {
    2.0 * mass / (rt * (rt / mass).sqrt().ln().tan()) + 5.0 * mass / (3.0 * rt) - 11.0 / 3.0 + lambda
}

/// `8πμ = 1 + 5𝔐/r̃ − Λ`.
pub fn density_rtilde(rt: f64, mass: f64, lambda: f64) -> f64 {
    1.0 + 5.0 * mass / rt - lambda
}

pub fn params_of(model: &AnalyticModel) -> WittenParams {
    WittenParams {
        n: model.param("n") as usize,
        a: model.param("A"),
        b: model.param("B"),
        lambda: model.param("lambda"),
    }
}

pub(super) fn model(p: BTreeMap<String, f64>) -> Result<AnalyticModel> {
    let n = p["n"];
    if n.fract() != 0.0 || n < 3.0 {
        return Err(Error::BadParams("witten_stellar needs an integer n ≥ 3".into()));
    }
    if p["A"] == 0.0 && p["B"] == 0.0 {
        return Err(Error::BadParams("witten_stellar needs (A, B) ≠ 0".into()));
    }
    if !(p["M"] > 0.0) {
        return Err(Error::BadParams("witten_stellar needs M > 0".into()));
    }
    let wp = WittenParams { n: n as usize, a: p["A"], b: p["B"], lambda: p["lambda"] };
    let dom = wp.positive_interval()?;
    let phi = RadialFunction::analytic(
        Interval::new(0.0, f64::INFINITY),
        f64::tanh,
        |r| 1.0 / r.cosh().powi(2),
        |r| -2.0 * r.tanh() / r.cosh().powi(2),
    );
    let f = RadialFunction::from_jet(dom, move |r| wp.lapse(r));
    let mu = RadialFunction::sampled(dom, move |r| wp.physical(r).0);
    let rho = RadialFunction::sampled(dom, move |r| wp.physical(r).1);
    // the warped chart is singular on the axis: keep samples off r = 0
    let lo = dom.lo.max(1e-3);
    Ok(AnalyticModel {
        id: "witten_stellar".into(),
        params: p,
        native: NativeForm::WarpedProduct,
        dim: n as usize,
        lambda: wp.lambda,
        pieces: vec![Piece { interval: dom, metric: phi.with_domain(dom), v: None, f, mu, rho }],
        expected_residual_tol: 1e-7,
        verify_interval: Interval::new(lo, dom.hi),
        unbounded_fluid: true,
        surface: None,
    })
}

/// Conformal factor `φ(x) = √(1 + |x|²)` of the model on ℝⁿ: the metric is
/// `δ/φ²` with `|x| = sinh r`.
pub fn conformal_factor(n: usize) -> Field {
    let p = RadialFunction::analytic(
        Interval::new(-0.5, f64::INFINITY),
        |s| (1.0 + s).sqrt(),
        |s| 0.5 / (1.0 + s).sqrt(),
        |s| -0.25 / (1.0 + s).powf(1.5),
    );
    Field::of_invariant(p, BasicInvariant::radial(n))
}

/// `(φ, f)` as fields on ℝⁿ.
pub fn conformal_chart(p: &WittenParams) -> (Field, Field) {
    let q = *p;
    let f = RadialFunction::from_jet(Interval::new(-0.5, f64::INFINITY), move |s| q.lapse_invariant(s));
    (conformal_factor(p.n), Field::of_invariant(f, BasicInvariant::radial(p.n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_matches_printed_example() {
        let p = WittenParams { n: 3, a: 1.0, b: 0.0, lambda: 0.3 };
        for &r in &[0.2, 1.0, 2.5] {
            let (mu, _) = p.physical(r);
            let c2 = r.cosh().powi(2);
            assert!((8.0 * std::f64::consts::PI * mu - ((c2 + 5.0) / c2 - 0.3)).abs() < 1e-13);
        }
    }

    #[test]
    fn consistent_pressure_closed_form_n3() {
        let p = WittenParams { n: 3, a: 1.0, b: 0.0, lambda: 0.0 };
        for &r in &[0.3f64, 1.1, 3.0] {
            let s2 = 1.0 / r.cosh().powi(2);
            let want = -1.0 - s2 + 2.0 * s2 / r.cosh().ln().tan();
            assert!((p.geometric(r).1 - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zeros_agree_with_root_finding() {
        let p = WittenParams { n: 3, a: 1.0, b: 0.0, lambda: 0.0 };
        let z = p.lapse_zeros(8.0);
        let zn = lapse_zeros_numeric(&p, 8.0);
        assert_eq!(z.len(), zn.len());
        for (a, b) in z.iter().zip(&zn) {
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
        let dom = p.positive_interval().unwrap();
        assert_eq!(dom.lo, 0.0);
        assert!((dom.hi - (std::f64::consts::PI.exp().acosh() - ZERO_GAP)).abs() < 1e-12);
    }
}
