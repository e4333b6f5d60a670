//! Metric ansätze for the Riemannian spatial factor and their curvature.

use nalgebra::DMatrix;

use super::field::{conformal_curvature, conformal_hessian, BasicInvariant, Field};
use super::radial::RadialFunction;
use crate::units;
use crate::{Error, Result};

/// Distance to a metric degeneracy below which points are rejected.
pub const EPS_DOM: f64 = 1e-9;

/// Fixed generic direction used to place samples of a conformally flat
/// model off every coordinate axis and hyperplane.
pub const SAMPLE_DIRECTION: [f64; 8] = [0.53, 0.29, 0.71, 0.37, 0.17, 0.61, 0.43, 0.23];

#[derive(Debug, Clone)]
pub enum MetricAnsatz {
    /// `e^{γ(r)} dr² + r² g_{S²}` with lapse exponent `v` (`f = e^{v/2}`).
    Schwarzschild { gamma: RadialFunction, v: RadialFunction },
    /// `dr² + φ(r)² g_{S^{n−1}}`.
    Warped { phi: RadialFunction, n: usize },
    /// `δ/φ²` on ℝⁿ; radial data are functions of the basic invariant,
    /// whose values serve as the grid coordinate.
    ConformalFlat { phi: Field, invariant: BasicInvariant },
}

impl MetricAnsatz {
    pub fn dim(&self) -> usize {
        match self {
            MetricAnsatz::Schwarzschild { .. } => 3,
            MetricAnsatz::Warped { n, .. } => *n,
            MetricAnsatz::ConformalFlat { invariant, .. } => invariant.dim(),
        }
    }

    pub fn sample_point(&self, level: f64) -> Result<Vec<f64>> {
        match self {
            MetricAnsatz::ConformalFlat { invariant, .. } => {
                let n = invariant.dim();
                let dir: Vec<f64> = (0..n).map(|i| SAMPLE_DIRECTION[i % 8]).collect();
                invariant.point_at(level, &dir)
            }
            _ => Err(Error::Domain("sample points exist only for conformally flat ansätze".into())),
        }
    }
}

/// Lapse, density and pressure of a static perfect fluid.
///
/// `mu` and `rho` are in the physical convention (`8πμ`, `8πρ` appear in
/// the TOV relations) and `lambda` is the cosmological constant; the field
/// equations see `units::to_geometric(μ, ρ, Λ)`. For conformally flat
/// ansätze all three profiles are functions of the basic invariant.
#[derive(Debug, Clone)]
pub struct FluidData {
    pub f: RadialFunction,
    pub mu: RadialFunction,
    pub rho: RadialFunction,
    pub lambda: f64,
}

impl FluidData {
    pub fn new(f: RadialFunction, mu: RadialFunction, rho: RadialFunction, lambda: f64) -> Self {
        Self { f, mu, rho, lambda }
    }

    pub fn vacuum(f: RadialFunction) -> Self {
        Self::new(f, RadialFunction::constant(0.0), RadialFunction::constant(0.0), 0.0)
    }

    /// Geometric `(μ, ρ)` at `r`.
    pub fn geometric(&self, r: f64) -> Result<(f64, f64)> {
        Ok(units::to_geometric(self.mu.value(r)?, self.rho.value(r)?, self.lambda))
    }
}

/// Frame components at one point of every term in the field equations.
#[derive(Debug, Clone)]
pub struct PointTerms {
    pub ric: DMatrix<f64>,
    pub hess_f: DMatrix<f64>,
    pub scalar: f64,
    pub f: f64,
    pub mu: f64,
    pub rho: f64,
}

impl PointTerms {
    pub fn laplacian_f(&self) -> f64 {
        self.hess_f.trace()
    }

    /// `f Ric − ∇²f − (μ−ρ)/(n−1) f g`.
    pub fn static_fluid(&self) -> DMatrix<f64> {
        let n = self.ric.nrows();
        &self.ric * self.f
            - &self.hess_f
            - DMatrix::identity(n, n) * ((self.mu - self.rho) / (n as f64 - 1.0) * self.f)
    }

    /// `Δf − [(n−2)μ + nρ]/(n−1) f`.
    pub fn lapse_laplacian(&self) -> f64 {
        let n = self.ric.nrows() as f64;
        self.laplacian_f() - ((n - 2.0) * self.mu + n * self.rho) / (n - 1.0) * self.f
    }

    /// `f R̊ic − ∇̊²f`; traceless by construction.
    pub fn traceless(&self) -> DMatrix<f64> {
        super::field::traceless(&(&self.ric * self.f - &self.hess_f))
    }
}

fn diag(n: usize, radial: f64, tangential: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => radial,
        (i, j) if i == j => tangential,
        _ => 0.0,
    })
}

/// Ricci components of `dr² + φ²g_{S^{n−1}}` in an orthonormal frame:
/// `(radial, tangential, scalar)`.
pub fn warped_frame(phi: (f64, f64, f64), n: usize) -> Result<(f64, f64, f64)> {
    let (p, p1, p2) = phi;
    if p <= EPS_DOM {
        return Err(Error::Domain(format!("warping function φ={p} is not positive")));
    }
    let m = n as f64 - 1.0;
    let rad = -m * p2 / p;
    let tan = ((m - 1.0) * (1.0 - p1 * p1) - p * p2) / (p * p);
    Ok((rad, tan, rad + m * tan))
}

/// `(R₁₁, coefficient of the round metric in R_ab, R)` for
/// `dr² + φ(r)² g_{S²}`: `R₁₁ = −2φ''/φ`, `R_ab = (1 − φ'² − φφ'')ḡ_ab`,
/// `R = 2(1 − φ'²)/φ² − 4φ''/φ`.
pub fn ricci_warped(phi: &RadialFunction, r: f64) -> Result<(f64, f64, f64)> {
    let (p, p1, p2) = phi.jet(r)?;
    let (rad, tan, scalar) = warped_frame((p, p1, p2), 3)?;
    Ok((rad, tan * p * p, scalar))
}

fn schwarzschild_a(gamma: &RadialFunction, r: f64) -> Result<(f64, f64)> {
    if r <= EPS_DOM {
        return Err(Error::Domain(format!("r={r} is not positive")));
    }
    let g = gamma.value(r)?;
    let a = (-g).exp();
    if a <= EPS_DOM {
        return Err(Error::Domain(format!("e^(-γ)={a} degenerate at r={r}")));
    }
    Ok((a, -gamma.d1(r)? * a))
}

/// Every term of the static perfect fluid equations at grid coordinate `r`.
pub fn point_terms(ansatz: &MetricAnsatz, fluid: &FluidData, r: f64) -> Result<PointTerms> {
    let (mu, rho) = fluid.geometric(r)?;
    match ansatz {
        MetricAnsatz::Schwarzschild { gamma, .. } => {
            let (a, a1) = schwarzschild_a(gamma, r)?;
            let (f, f1, f2) = fluid.f.jet(r)?;
            let rad = -a1 / r;
            let tan = (1.0 - a - 0.5 * r * a1) / (r * r);
            Ok(PointTerms {
                ric: diag(3, rad, tan),
                hess_f: diag(3, a * f2 + 0.5 * a1 * f1, a * f1 / r),
                scalar: rad + 2.0 * tan,
                f,
                mu,
                rho,
            })
        }
        MetricAnsatz::Warped { phi, n } => {
            let pj = phi.jet(r)?;
            let (rad, tan, scalar) = warped_frame(pj, *n)?;
            let (f, f1, f2) = fluid.f.jet(r)?;
            Ok(PointTerms {
                ric: diag(*n, rad, tan),
                hess_f: diag(*n, f2, pj.1 * f1 / pj.0),
                scalar,
                f,
                mu,
                rho,
            })
        }
        MetricAnsatz::ConformalFlat { phi, invariant } => {
            let x = ansatz.sample_point(r)?;
            conformal_point_terms(phi, invariant, fluid, &x)
        }
    }
}

/// As [`point_terms`] at an explicit point of ℝⁿ.
pub fn conformal_point_terms(
    phi: &Field,
    invariant: &BasicInvariant,
    fluid: &FluidData,
    x: &[f64],
) -> Result<PointTerms> {
    let s = invariant.eval(x);
    let (mu, rho) = fluid.geometric(s)?;
    let pj = phi.jet(x)?;
    if pj.value <= EPS_DOM {
        return Err(Error::Domain(format!("conformal factor φ={} not positive", pj.value)));
    }
    let fj = Field::of_invariant(fluid.f.clone(), invariant.clone()).jet(x)?;
    let (ric, scalar) = conformal_curvature(&pj)?;
    let hess_f = conformal_hessian(&pj, &fj)?;
    Ok(PointTerms { ric, hess_f, scalar, f: fj.value, mu, rho })
}

/// Mean curvature of the coordinate sphere (invariant level set for
/// conformally flat ansätze) with respect to the outward normal.
pub fn mean_curvature_sphere(ansatz: &MetricAnsatz, r: f64) -> Result<f64> {
    match ansatz {
        MetricAnsatz::Schwarzschild { gamma, .. } => {
            let (a, _) = schwarzschild_a(gamma, r)?;
            Ok(2.0 * a.sqrt() / r)
        }
        MetricAnsatz::Warped { phi, n } => {
            let (p, p1, _) = phi.jet(r)?;
            if p <= EPS_DOM {
                return Err(Error::Domain(format!("warping function φ={p} is not positive")));
            }
            Ok((*n as f64 - 1.0) * p1 / p)
        }
        MetricAnsatz::ConformalFlat { phi, invariant } => {
            let x = ansatz.sample_point(r)?;
            let pj = phi.jet(&x)?;
            if pj.value <= EPS_DOM {
                return Err(Error::Domain("conformal factor not positive".into()));
            }
            let n = invariant.dim() as f64;
            let g = invariant.grad(&x);
            let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            // Euclidean mean curvature of the level set of ϱ, then the
            // conformal change H_ḡ = φ H_δ − (n−1) ∂_ν φ
            let h_flat = 2.0 * (n - 1.0) * invariant.tau / gn;
            let dphi: f64 = g.iter().zip(pj.grad.iter()).map(|(a, b)| a * b).sum::<f64>() / gn;
            Ok(pj.value * h_flat - (n - 1.0) * dphi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::radial::Interval;

    #[test]
    fn ricci_warped_examples() {
        let flat = RadialFunction::identity();
        assert_eq!(ricci_warped(&flat, 1.0).unwrap(), (0.0, 0.0, 0.0));
        let sphere = RadialFunction::analytic(Interval::new(0.0, 3.0), f64::sin, f64::cos, |r| -r.sin());
        let (r11, rab, r) = ricci_warped(&sphere, std::f64::consts::FRAC_PI_4).unwrap();
        assert!((r - 6.0).abs() < 1e-14);
        assert!((r11 - 2.0).abs() < 1e-14);
        assert!((rab - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mean_curvature_flat_and_schwarzschild() {
        let flat = MetricAnsatz::Warped { phi: RadialFunction::identity(), n: 3 };
        assert!((mean_curvature_sphere(&flat, 2.0).unwrap() - 1.0).abs() < 1e-15);
        let gamma = RadialFunction::analytic(
            Interval::new(2.0, f64::INFINITY),
            |r| -(1.0 - 2.0 / r).ln(),
            |r| -2.0 / (r * r) / (1.0 - 2.0 / r),
            |_| f64::NAN,
        );
        let s = MetricAnsatz::Schwarzschild { gamma, v: RadialFunction::constant(0.0) };
        assert!((mean_curvature_sphere(&s, 4.0).unwrap() - 0.5 * 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn conformal_sphere_matches_warped_chart() {
        let phi = RadialFunction::analytic(
            Interval::new(-0.5, f64::INFINITY),
            |s| (1.0 + s).sqrt(),
            |s| 0.5 / (1.0 + s).sqrt(),
            |s| -0.25 / (1.0 + s).powf(1.5),
        );
        let inv = BasicInvariant::radial(3);
        let cf = MetricAnsatz::ConformalFlat { phi: Field::of_invariant(phi, inv), invariant: BasicInvariant::radial(3) };
        // level ϱ = sinh²t ↔ warped radius t
        let t: f64 = 0.8;
        let h = mean_curvature_sphere(&cf, t.sinh().powi(2)).unwrap();
        assert!((h - 2.0 / (t.sinh() * t.cosh())).abs() < 1e-13);
    }
}
