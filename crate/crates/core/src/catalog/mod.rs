//! Closed-form static perfect fluid solutions.

mod models;
mod verify;
pub mod witten;
pub mod wyman;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::geometry::{FluidData, Interval, MetricAnsatz, RadialFunction};
use crate::numerics::grid;
use crate::units;
use crate::{Error, Result};

pub use verify::{halton_points, verify, SECTIONAL_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NativeForm {
    SchwarzschildForm,
    WarpedProduct,
    ConformalFlat,
}

/// One smooth piece of a model.
#[derive(Debug, Clone)]
pub struct Piece {
    pub interval: Interval,
    /// `γ` for the Schwarzschild form, `φ` for warped products.
    pub metric: RadialFunction,
    /// Lapse exponent, `f = e^{v/2}`, when the model is written that way.
    pub v: Option<RadialFunction>,
    pub f: RadialFunction,
    /// Physical density and pressure (`8πμ`, `8πρ` convention).
    pub mu: RadialFunction,
    pub rho: RadialFunction,
}

#[derive(Debug, Clone)]
pub struct AnalyticModel {
    pub id: String,
    pub params: BTreeMap<String, f64>,
    pub native: NativeForm,
    pub dim: usize,
    pub lambda: f64,
    pub pieces: Vec<Piece>,
    pub expected_residual_tol: f64,
    /// Interval on which `verify` samples by default.
    pub verify_interval: Interval,
    /// Fluids without a surface ("unbounded fluid") skip matching checks.
    pub unbounded_fluid: bool,
    pub surface: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelInfo {
    pub id: &'static str,
    pub native_form: NativeForm,
    pub params: Vec<(&'static str, f64)>,
    pub description: &'static str,
}

pub fn list() -> Vec<ModelInfo> {
    use NativeForm::*;
    vec![
        ModelInfo {
            id: "schwarzschild_exterior",
            native_form: SchwarzschildForm,
            params: vec![("M", 1.0)],
            description: "vacuum exterior, e^v = e^-gamma = 1 - 2M/r",
        },
        ModelInfo {
            id: "schwarzschild_interior",
            native_form: SchwarzschildForm,
            params: vec![("c", 0.01)],
            description: "constant density and pressure (mu = c, rho = -c), e^v = e^-gamma = 1 - 8 pi c r^2/3",
        },
        ModelInfo {
            id: "gamma_zero",
            native_form: SchwarzschildForm,
            params: vec![("c1", 1.0), ("c2", 1.0)],
            description: "gamma = 0, mu = 0, rho = 1/(2 pi r^2 + c1), e^v = c2 rho^-2 (unbounded fluid)",
        },
        ModelInfo {
            id: "einstein_static",
            native_form: SchwarzschildForm,
            params: vec![("c", 0.01)],
            description: "Einstein static universe, mu = c sqrt3, rho = -c/sqrt3",
        },
        ModelInfo {
            id: "wyman",
            native_form: SchwarzschildForm,
            params: vec![("R", 10.0), ("M", 1.0)],
            description: "Wyman interior e^-gamma = 1 - r^4/R^4 matched at r_b^5 = 2 M R^4",
        },
        ModelInfo {
            id: "witten_stellar",
            native_form: WarpedProduct,
            params: vec![("n", 3.0), ("A", 1.0), ("B", 0.0), ("lambda", 0.0), ("M", 1.0)],
            description: "dr^2 + tanh^2 r g_S, f = A sin(sqrt(n-2) log cosh r) + B cos(...)",
        },
    ]
}

/// Fills missing parameters from the defaults of `id`.
pub fn with_defaults(id: &str, params: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    let info = list().into_iter().find(|m| m.id == id).ok_or_else(|| Error::UnknownModel(id.into()))?;
    let mut out = BTreeMap::new();
    for (k, v) in info.params {
        out.insert(k.to_string(), params.get(k).copied().unwrap_or(v));
    }
    if let Some(k) = params.keys().find(|k| !out.contains_key(*k)) {
        return Err(Error::BadParams(format!("{id} has no parameter '{k}'")));
    }
    Ok(out)
}

pub fn get(id: &str, params: &BTreeMap<String, f64>) -> Result<AnalyticModel> {
    let p = with_defaults(id, params)?;
    match id {
        "schwarzschild_exterior" => models::schwarzschild_exterior(p),
        "schwarzschild_interior" => models::schwarzschild_interior(p),
        "gamma_zero" => models::gamma_zero(p),
        "einstein_static" => models::einstein_static(p),
        "wyman" => wyman::model(p),
        "witten_stellar" => witten::model(p),
        _ => Err(Error::UnknownModel(id.into())),
    }
}

/// `get` with parameters given as `(name, value)` pairs.
pub fn get_with(id: &str, params: &[(&str, f64)]) -> Result<AnalyticModel> {
    get(id, &params.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

impl Piece {
    pub fn ansatz(&self, native: NativeForm, dim: usize) -> MetricAnsatz {
        match native {
            NativeForm::SchwarzschildForm => MetricAnsatz::Schwarzschild {
                gamma: self.metric.clone(),
                v: self.v.clone().unwrap_or_else(|| RadialFunction::constant(0.0)),
            },
            _ => MetricAnsatz::Warped { phi: self.metric.clone(), n: dim },
        }
    }

    pub fn fluid(&self, lambda: f64) -> FluidData {
        FluidData::new(self.f.clone(), self.mu.clone(), self.rho.clone(), lambda)
    }
}

impl AnalyticModel {
    pub fn param(&self, k: &str) -> f64 {
        self.params[k]
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.pieces[0].interval.lo, self.pieces.last().unwrap().interval.hi)
    }

    pub fn piece_at(&self, r: f64) -> Result<&Piece> {
        self.pieces
            .iter()
            .find(|p| p.interval.contains(r))
            .ok_or_else(|| Error::Domain(format!("r={r} outside the domain of {}", self.id)))
    }

    pub fn default_grid(&self) -> Vec<f64> {
        grid::chebyshev(self.verify_interval.lo, self.verify_interval.hi, grid::DEFAULT_POINTS)
    }

    pub fn lapse(&self, r: f64) -> Result<f64> {
        self.piece_at(r)?.f.value(r)
    }

    pub fn lapse_d1(&self, r: f64) -> Result<f64> {
        self.piece_at(r)?.f.d1(r)
    }

    pub fn mu(&self, r: f64) -> Result<f64> {
        self.piece_at(r)?.mu.value(r)
    }

    pub fn rho(&self, r: f64) -> Result<f64> {
        self.piece_at(r)?.rho.value(r)
    }

    /// Geometric `(μ, ρ)` entering the static perfect fluid equations.
    pub fn geometric(&self, r: f64) -> Result<(f64, f64)> {
        Ok(units::to_geometric(self.mu(r)?, self.rho(r)?, self.lambda))
    }

    /// `e^{−γ}` (Schwarzschild form) or `φ` (warped product).
    pub fn metric_coefficient(&self, r: f64) -> Result<f64> {
        let p = self.piece_at(r)?;
        Ok(match self.native {
            NativeForm::SchwarzschildForm => (-p.metric.value(r)?).exp(),
            _ => p.metric.value(r)?,
        })
    }

    /// Lapse over the whole domain as one function (pieces joined).
    pub fn lapse_function(&self) -> RadialFunction {
        let m = self.clone();
        let m1 = self.clone();
        let m2 = self.clone();
        RadialFunction::analytic(
            self.domain(),
            move |r| m.lapse(r).unwrap_or(f64::NAN),
            move |r| m1.lapse_d1(r).unwrap_or(f64::NAN),
            move |r| m2.piece_at(r).and_then(|p| p.f.d2(r)).unwrap_or(f64::NAN),
        )
    }

    /// Ansatz of the piece containing `r`.
    pub fn ansatz_at(&self, r: f64) -> Result<MetricAnsatz> {
        Ok(self.piece_at(r)?.ansatz(self.native, self.dim))
    }

    /// Area of the coordinate sphere at `r` (n = 3).
    pub fn area(&self, r: f64) -> Result<f64> {
        Ok(match self.native {
            NativeForm::SchwarzschildForm => 4.0 * PI * r * r,
            _ => {
                let phi = self.metric_coefficient(r)?;
                4.0 * PI * phi * phi
            }
        })
    }

    /// Length of the unit radial vector relative to `∂_r`.
    pub fn radial_scale(&self, r: f64) -> Result<f64> {
        Ok(match self.native {
            NativeForm::SchwarzschildForm => self.metric_coefficient(r)?.sqrt(),
            _ => 1.0,
        })
    }
}
