use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{AnalyticModel, NativeForm, Piece};
use crate::geometry::radial::jet;
use crate::geometry::{Interval, RadialFunction};
use crate::{Error, Result};

type AJet = std::sync::Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>;

/// Piece with `e^{−γ} = a(r)` and `e^{v} = b(r)`.
pub(super) fn schwarzschild_piece(
    interval: Interval,
    a: AJet,
    b: AJet,
    mu: RadialFunction,
    rho: RadialFunction,
) -> Piece {
    let a1 = a.clone();
    let (b1, b2) = (b.clone(), b.clone());
    Piece {
        interval,
        metric: RadialFunction::from_jet(interval, move |r| jet::neg(jet::ln(a1(r)))),
        v: Some(RadialFunction::from_jet(interval, move |r| jet::ln(b1(r)))),
        f: RadialFunction::from_jet(interval, move |r| jet::sqrt(b2(r))),
        mu,
        rho,
    }
}

fn model(
    id: &str,
    params: BTreeMap<String, f64>,
    pieces: Vec<Piece>,
    verify_interval: Interval,
    unbounded_fluid: bool,
    surface: Option<f64>,
) -> AnalyticModel {
    AnalyticModel {
        id: id.to_string(),
        params,
        native: NativeForm::SchwarzschildForm,
        dim: 3,
        lambda: 0.0,
        pieces,
        expected_residual_tol: 1e-9,
        verify_interval,
        unbounded_fluid,
        surface,
    }
}

/// `1 − k r²` and its derivatives.
fn quadratic(k: f64) -> AJet {
    std::sync::Arc::new(move |r| (1.0 - k * r * r, -2.0 * k * r, -2.0 * k))
}

pub(super) fn schwarzschild_exterior(p: BTreeMap<String, f64>) -> Result<AnalyticModel> {
    let m = p["M"];
    if !(m > 0.0) {
        return Err(Error::BadParams("schwarzschild_exterior needs M > 0".into()));
    }
    let a: AJet = std::sync::Arc::new(move |r| schwarzschild_a(m, r));
    let dom = Interval::new(2.0 * m, f64::INFINITY);
    let z = RadialFunction::constant(0.0);
    let piece = schwarzschild_piece(dom, a.clone(), a, z.clone(), z);
    let mut mdl = model("schwarzschild_exterior", p, vec![piece], Interval::new(2.0 * m, 10.0 * m), false, None);
    mdl.expected_residual_tol = 1e-8;
    Ok(mdl)
}

/// `1 − 2M/r` and its derivatives.
pub(super) fn schwarzschild_a(m: f64, r: f64) -> (f64, f64, f64) {
    (1.0 - 2.0 * m / r, 2.0 * m / (r * r), -4.0 * m / (r * r * r))
}

fn horizon(k: f64) -> f64 {
    if k > 0.0 { 1.0 / k.sqrt() } else { f64::INFINITY }
}

pub(super) fn schwarzschild_interior(p: BTreeMap<String, f64>) -> Result<AnalyticModel> {
    let c = p["c"];
    let k = 8.0 * PI * c / 3.0;
    let rh = horizon(k);
    let dom = Interval::new(0.0, rh);
    let piece = schwarzschild_piece(
        dom,
        quadratic(k),
        quadratic(k),
        RadialFunction::constant(c),
        RadialFunction::constant(-c),
    );
    let hi = if rh.is_finite() { 0.95 * rh } else { 10.0 };
    Ok(model("schwarzschild_interior", p, vec![piece], Interval::new(0.05 * hi, hi), true, None))
}

pub(super) fn gamma_zero(p: BTreeMap<String, f64>) -> Result<AnalyticModel> {
    let (c1, c2) = (p["c1"], p["c2"]);
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::BadParams("gamma_zero needs c1 > 0 and c2 > 0".into()));
    }
    let dom = Interval::new(0.0, f64::INFINITY);
    // e^v = c2 (2πr² + c1)²
    let b: AJet = std::sync::Arc::new(move |r| {
        let q = 2.0 * PI * r * r + c1;
        (c2 * q * q, c2 * 2.0 * q * 4.0 * PI * r, c2 * (2.0 * (4.0 * PI * r).powi(2) + 2.0 * q * 4.0 * PI))
    });
    let rho = RadialFunction::from_jet(dom, move |r| {
        let q = 2.0 * PI * r * r + c1;
        let q1 = 4.0 * PI * r;
        (1.0 / q, -q1 / (q * q), -4.0 * PI / (q * q) + 2.0 * q1 * q1 / (q * q * q))
    });
    let piece = schwarzschild_piece(dom, std::sync::Arc::new(|_| (1.0, 0.0, 0.0)), b, RadialFunction::constant(0.0), rho);
    Ok(model("gamma_zero", p, vec![piece], Interval::new(0.05, 10.0), true, None))
}

pub(super) fn einstein_static(p: BTreeMap<String, f64>) -> Result<AnalyticModel> {
    let c = p["c"];
    let mu = 3f64.sqrt() * c;
    let k = 8.0 * PI * mu / 3.0;
    let rh = horizon(k);
    let dom = Interval::new(0.0, rh);
    let piece = schwarzschild_piece(
        dom,
        quadratic(k),
        std::sync::Arc::new(|_| (1.0, 0.0, 0.0)),
        RadialFunction::constant(mu),
        RadialFunction::constant(-c / 3f64.sqrt()),
    );
    let hi = if rh.is_finite() { 0.95 * rh } else { 10.0 };
    Ok(model("einstein_static", p, vec![piece], Interval::new(0.05 * hi, hi), true, None))
}
