//! Quasi-local masses and level-set identities on round coordinate spheres.
//!
//! Mean curvatures are reported twice: `h` with respect to the outward
//! normal (used by the masses) and `h_level`, taken along `−∇f/|∇f|`,
//! which is the orientation the topology identity and the Hawking
//! inequality are stated in.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::catalog::{witten, AnalyticModel, NativeForm};
use crate::geometry::field::{conformal_hessian, Field};
use crate::geometry::{mean_curvature_sphere, Interval, MetricAnsatz};
use crate::numerics::quad::SphereRule;
use crate::numerics::roots;
use crate::tov::StellarModel;
use crate::units::EIGHT_PI;
use crate::{Error, Result};

/// Below this `|f'|` a level is treated as critical.
pub const CRITICAL_EPS: f64 = 1e-14;
const ROOT_XTOL: f64 = 1e-12;
const SCAN_POINTS: usize = 4000;
const LEVEL_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SphereClass {
    SphereForced,
    TorusWindow,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiLocalReport {
    pub level: f64,
    pub r: f64,
    pub area: f64,
    pub h: f64,
    pub h_level: f64,
    pub h0: f64,
    pub willmore: f64,
    pub kappa: f64,
    pub rho0: f64,
    pub m_hawking: f64,
    pub m_brown_york: f64,
    /// `∫_Σ H` (level orientation) and `∫_Σ H₀`.
    pub integral_h: f64,
    pub integral_h0: f64,
    pub chi_identity_residual: f64,
    pub inequality_slack: f64,
    pub classification: SphereClass,
    /// Relative spread of `|∇f|` over sampled level-set points (conformally
    /// flat charts only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grad_rel_std: Option<f64>,
    /// Largest principal-curvature spread over the sampled points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub umbilicity_spread: Option<f64>,
}

/// `(φ, f)` on ℝⁿ and the map from the radial coordinate to `|x|`.
pub type ConformalChart = (Field, Field, fn(f64) -> f64);

/// Radial data a level-set computation needs.
pub trait LevelSetSource {
    fn search_interval(&self) -> Interval;
    fn lapse(&self, r: f64) -> Result<f64>;
    fn lapse_d1(&self, r: f64) -> Result<f64>;
    fn area(&self, r: f64) -> Result<f64>;
    /// `|∂_r|` in the metric.
    fn radial_scale(&self, r: f64) -> Result<f64>;
    /// Mean curvature of the coordinate sphere, outward normal.
    fn mean_curvature(&self, r: f64) -> Result<f64>;
    /// Geometric pressure `8πρ − Λ`.
    fn rho_geometric(&self, r: f64) -> Result<f64>;
    /// Conformally flat chart `(φ, f)` and the map from `r` to `|x|`.
    fn conformal_chart(&self) -> Option<ConformalChart> {
        None
    }
}

impl LevelSetSource for AnalyticModel {
    fn search_interval(&self) -> Interval {
        self.domain()
    }
    fn lapse(&self, r: f64) -> Result<f64> {
        AnalyticModel::lapse(self, r)
    }
    fn lapse_d1(&self, r: f64) -> Result<f64> {
        AnalyticModel::lapse_d1(self, r)
    }
    fn area(&self, r: f64) -> Result<f64> {
        AnalyticModel::area(self, r)
    }
    fn radial_scale(&self, r: f64) -> Result<f64> {
        AnalyticModel::radial_scale(self, r)
    }
    fn mean_curvature(&self, r: f64) -> Result<f64> {
        mean_curvature_sphere(&self.ansatz_at(r)?, r)
    }
    fn rho_geometric(&self, r: f64) -> Result<f64> {
        Ok(self.geometric(r)?.1)
    }
    fn conformal_chart(&self) -> Option<ConformalChart> {
        if self.id != "witten_stellar" || self.native != NativeForm::WarpedProduct {
            return None;
        }
        let (phi, f) = witten::conformal_chart(&witten::params_of(self));
        Some((phi, f, f64::sinh))
    }
}

impl LevelSetSource for StellarModel {
    fn search_interval(&self) -> Interval {
        Interval::new(self.interior.r_start(), f64::INFINITY)
    }
    fn lapse(&self, r: f64) -> Result<f64> {
        StellarModel::lapse(self, r)
    }
    fn lapse_d1(&self, r: f64) -> Result<f64> {
        StellarModel::lapse_d1(self, r)
    }
    fn area(&self, r: f64) -> Result<f64> {
        Ok(4.0 * PI * r * r)
    }
    fn radial_scale(&self, r: f64) -> Result<f64> {
        Ok(self.exp_neg_gamma(r)?.sqrt())
    }
    fn mean_curvature(&self, r: f64) -> Result<f64> {
        Ok(2.0 * self.exp_neg_gamma(r)?.sqrt() / r)
    }
    fn rho_geometric(&self, r: f64) -> Result<f64> {
        Ok(EIGHT_PI * self.rho(r)?)
    }
}

/// `√(|Σ|/16π)(1 − ∫H²/16π)`.
pub fn hawking_mass(area: f64, willmore: f64) -> Result<f64> {
    if !(area > 0.0) {
        return Err(Error::Domain(format!("surface area must be positive, got {area}")));
    }
    if willmore < 0.0 {
        return Err(Error::Domain(format!("Willmore energy must be nonnegative, got {willmore}")));
    }
    Ok((area / (16.0 * PI)).sqrt() * (1.0 - willmore / (16.0 * PI)))
}

/// Mean curvature of the round sphere of area `area` in ℝ³.
pub fn euclidean_h0(area: f64) -> f64 {
    2.0 / (area / (4.0 * PI)).sqrt()
}

/// `(1/8π)∫(H₀ − H)` for a round sphere with constant `H`.
pub fn brown_york_round(area: f64, h: f64) -> Result<f64> {
    if !(area > 0.0) {
        return Err(Error::Domain(format!("surface area must be positive, got {area}")));
    }
    Ok(area * (euclidean_h0(area) - h) / EIGHT_PI)
}

/// Brown-York mass of the coordinate sphere at `r` (three dimensions).
pub fn brown_york_sphere(ansatz: &MetricAnsatz, r: f64) -> Result<f64> {
    let area = match ansatz {
        MetricAnsatz::Schwarzschild { .. } => 4.0 * PI * r * r,
        MetricAnsatz::Warped { phi, n: 3 } => 4.0 * PI * phi.value(r)?.powi(2),
        _ => return Err(Error::Domain("Brown-York mass needs a round sphere in dimension 3".into())),
    };
    brown_york_round(area, mean_curvature_sphere(ansatz, r)?)
}

pub fn willmore_round(h: f64, area: f64) -> f64 {
    h * h * area
}

/// `∫H²` over the sphere of radius `radius` in ℝ³, `h` given on unit directions.
pub fn willmore_quadrature(rule: &SphereRule, radius: f64, h: impl Fn(&[f64; 3]) -> f64) -> f64 {
    radius * radius * rule.integrate(|p| h(p).powi(2))
}

/// Willmore energy of the unit sphere in flat space (`16π`), by quadrature.
pub fn flat_unit_sphere_willmore() -> f64 {
    willmore_quadrature(&SphereRule::degree35(), 1.0, |_| 2.0)
}

/// `2πχ − [H(H/4 − κ/c) − ρ₀]|Σ|`.
pub fn topology_identity_residual_chi(h: f64, kappa: f64, c: f64, rho0: f64, area: f64, chi: i32) -> Result<f64> {
    if c == 0.0 {
        return Err(Error::Domain("the identity divides by the level c; c = 0".into()));
    }
    if !(area > 0.0) {
        return Err(Error::Domain(format!("surface area must be positive, got {area}")));
    }
    Ok(2.0 * PI * chi as f64 - (h * (h / 4.0 - kappa / c) - rho0) * area)
}

/// The identity with `χ = 2` (coordinate spheres).
pub fn topology_identity_residual(h: f64, kappa: f64, c: f64, rho0: f64, area: f64) -> Result<f64> {
    topology_identity_residual_chi(h, kappa, c, rho0, area, 2)
}

/// `I± = (2/c)(κ ± √(κ² + c²ρ₀))`.
pub fn thresholds(kappa: f64, c: f64, rho0: f64) -> Result<(f64, f64)> {
    let disc = kappa * kappa + c * c * rho0;
    if disc < 0.0 {
        return Err(Error::ComplexThreshold { disc });
    }
    let s = disc.sqrt();
    let (a, b) = (2.0 / c * (kappa - s), 2.0 / c * (kappa + s));
    Ok((a.min(b), a.max(b)))
}

pub fn sphere_classification(h: f64, kappa: f64, c: f64, rho0: f64) -> Result<SphereClass> {
    let (lo, hi) = thresholds(kappa, c, rho0)?;
    Ok(if h < lo || h > hi { SphereClass::SphereForced } else { SphereClass::TorusWindow })
}

/// RHS − LHS of the Hawking-mass inequality in its stated form
/// (`∫_Σ H`, level orientation).
pub fn hawking_inequality_slack(rep: &QuasiLocalReport, chi: i32) -> f64 {
    let rhs = 2.0 - chi as f64 - rep.kappa / (2.0 * PI * rep.level) * rep.integral_h - rep.rho0 / (2.0 * PI) * rep.area;
    let lhs = 2.0 * (16.0 * PI / rep.area).sqrt() * rep.m_hawking;
    rhs - lhs
}

/// Every radius in the search interval where `f = c`, ascending.
pub fn level_radii(src: &dyn LevelSetSource, c: f64) -> Result<Vec<f64>> {
    let dom = src.search_interval();
    let lo = if dom.lo > 0.0 { dom.lo * (1.0 + 1e-12) } else { dom.lo.max(0.0) + 1e-9 };
    let hi = if dom.hi.is_finite() { dom.hi } else { lo.max(1.0) * 1e6 };
    let g = |r: f64| src.lapse(r).map(|f| f - c).unwrap_or(f64::NAN);
    // geometric spacing: levels near 1 sit far out in asymptotically flat models
    let (la, lb) = (lo.max(1e-9).ln(), hi.ln());
    let nodes: Vec<f64> = (0..=SCAN_POINTS)
        .map(|i| if i == 0 { lo } else { (la + (lb - la) * i as f64 / SCAN_POINTS as f64).exp() })
        .collect();
    let mut out = Vec::new();
    for w in nodes.windows(2) {
        let (ga, gb) = (g(w[0]), g(w[1]));
        if ga == 0.0 {
            out.push(w[0]);
        } else if ga * gb < 0.0 {
            out.push(roots::brent(&g, w[0], w[1], ROOT_XTOL * w[1].max(1.0))?);
        }
    }
    if g(hi) == 0.0 {
        out.push(hi);
    }
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * b.abs().max(1.0));
    if out.is_empty() {
        return Err(Error::NoLevelSet { c });
    }
    Ok(out)
}

/// Report for the innermost level set `f = c`.
pub fn level_set_data(src: &dyn LevelSetSource, c: f64) -> Result<QuasiLocalReport> {
    let r = level_radii(src, c)?[0];
    report_at(src, c, r)
}

/// Report for the coordinate sphere at `r`, taken as the level set `f = c`.
pub fn report_at(src: &dyn LevelSetSource, c: f64, r: f64) -> Result<QuasiLocalReport> {
    let fp = src.lapse_d1(r)?;
    if !(fp.abs() > CRITICAL_EPS) {
        return Err(Error::NotARegularValue { c, r });
    }
    let area = src.area(r)?;
    let h = src.mean_curvature(r)?;
    let h_level = -fp.signum() * h;
    let h0 = euclidean_h0(area);
    let kappa = fp.abs() * src.radial_scale(r)?;
    let rho0 = src.rho_geometric(r)?;
    let willmore = willmore_round(h, area);
    let mut rep = QuasiLocalReport {
        level: c,
        r,
        area,
        h,
        h_level,
        h0,
        willmore,
        kappa,
        rho0,
        m_hawking: hawking_mass(area, willmore)?,
        m_brown_york: brown_york_round(area, h)?,
        integral_h: h_level * area,
        integral_h0: h0 * area,
        chi_identity_residual: topology_identity_residual(h_level, kappa, c, rho0, area)?,
        inequality_slack: 0.0,
        classification: sphere_classification(h_level, kappa, c, rho0).unwrap_or(SphereClass::Indeterminate),
        grad_rel_std: None,
        umbilicity_spread: None,
    };
    rep.inequality_slack = hawking_inequality_slack(&rep, 2);
    if let Some((phi, f, radius)) = src.conformal_chart() {
        let (std, spread) = conformal_level_stats(&phi, &f, radius(r))?;
        rep.grad_rel_std = Some(std);
        rep.umbilicity_spread = Some(spread);
    }
    Ok(rep)
}

fn unit_directions(n: usize) -> Vec<Vec<f64>> {
    if n == 3 {
        return SphereRule::product(8, 8).points.iter().map(|p| p.to_vec()).collect();
    }
    crate::catalog::halton_points(n, LEVEL_SAMPLES, 1.0)
        .into_iter()
        .map(|x| {
            let s = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter().map(|v| v / s).collect()
        })
        .collect()
}

/// Samples the level set `|x| = radius` of `f` in the chart `δ/φ²`: returns
/// the relative standard deviation of `|∇f|` and the largest spread between
/// principal curvatures.
pub fn conformal_level_stats(phi: &Field, f: &Field, radius: f64) -> Result<(f64, f64)> {
    let mut grads = Vec::new();
    let mut spread: f64 = 0.0;
    for dir in unit_directions(phi.dim()) {
        let x: Vec<f64> = dir.iter().map(|d| d * radius).collect();
        let (jp, jf) = (phi.jet(&x)?, f.jet(&x)?);
        let gnorm = jf.grad.norm();
        if !(gnorm > 0.0) {
            return Err(Error::NotARegularValue { c: jf.value, r: radius });
        }
        grads.push(jp.value * gnorm);
        let nu: DVector<f64> = &jf.grad / gnorm;
        let p = DMatrix::identity(nu.len(), nu.len()) - &nu * nu.transpose();
        let s = &p * conformal_hessian(&jp, &jf)? * &p / (jp.value * gnorm);
        let eig = SymmetricEigen::new(s);
        let normal = (0..eig.eigenvalues.len())
            .max_by(|&a, &b| {
                let da = eig.eigenvectors.column(a).dot(&nu).abs();
                let db = eig.eigenvectors.column(b).dot(&nu).abs();
                da.total_cmp(&db)
            })
            .unwrap_or(0);
        let tang: Vec<f64> = (0..eig.eigenvalues.len()).filter(|&i| i != normal).map(|i| eig.eigenvalues[i]).collect();
        let (mn, mx) = tang.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        spread = spread.max(mx - mn);
    }
    let mean = grads.iter().sum::<f64>() / grads.len() as f64;
    let var = grads.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / grads.len() as f64;
    Ok((var.sqrt() / mean, spread))
}
