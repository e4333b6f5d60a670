//! Scalar fields on ℝⁿ and curvature of conformally flat metrics `ḡ = δ/φ²`.
//!
//! Tensors are returned in a ḡ-orthonormal frame `e_i = φ ∂_i`, so the
//! ḡ-trace is the ordinary matrix trace.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::radial::RadialFunction;
use crate::numerics::fd;
use crate::{Error, Result};

/// The quadratic `ϱ(x) = Σ_i τx_i² + α_i x_i + β_i` whose level sets are the
/// symmetry orbits of the conformal construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasicInvariant {
    pub tau: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// `C = Σ_i (α_i² − 4τβ_i)`
    pub c: f64,
}

impl BasicInvariant {
    pub fn new(tau: f64, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.len() != beta.len() || alpha.is_empty() {
            return Err(Error::BadParams("invariant: alpha and beta need the same dimension".into()));
        }
        let c = Self::compute_c(tau, &alpha, &beta);
        Ok(Self { tau, alpha, beta, c })
    }

    /// `τ = 1`, `α = β = 0`: the squared Euclidean radius.
    pub fn radial(n: usize) -> Self {
        Self { tau: 1.0, alpha: vec![0.0; n], beta: vec![0.0; n], c: 0.0 }
    }

    fn compute_c(tau: f64, alpha: &[f64], beta: &[f64]) -> f64 {
        alpha.iter().zip(beta).map(|(a, b)| a * a - 4.0 * tau * b).sum()
    }

    pub fn recomputed_c(&self) -> f64 {
        Self::compute_c(self.tau, &self.alpha, &self.beta)
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.tau == 0.0 && self.alpha.iter().all(|&a| a == 0.0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (0..self.dim())
            .map(|i| self.tau * x[i] * x[i] + self.alpha[i] * x[i] + self.beta[i])
            .sum()
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim()).map(|i| 2.0 * self.tau * x[i] + self.alpha[i]).collect()
    }

    /// `Σ_k ϱ_{,k}²`, which equals `4τϱ + C`.
    pub fn grad_sq(&self, x: &[f64]) -> f64 {
        self.grad(x).iter().map(|g| g * g).sum()
    }

    /// `Σ_k ϱ_{,kk} = 2nτ`.
    pub fn laplacian(&self) -> f64 {
        2.0 * self.dim() as f64 * self.tau
    }

    /// Smallest (τ > 0) or largest (τ < 0) value, attained at the center.
    pub fn extremum(&self) -> Option<f64> {
        (self.tau != 0.0).then(|| -self.c / (4.0 * self.tau))
    }

    /// A point with `ϱ(x) = level`, reached from the orbit center along
    /// `dir` (τ ≠ 0) or by moving along `α` and then off-axis along `dir`.
    pub fn point_at(&self, level: f64, dir: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        if dir.len() != n || norm == 0.0 {
            return Err(Error::BadParams("direction must be a nonzero n-vector".into()));
        }
        let e: Vec<f64> = dir.iter().map(|d| d / norm).collect();
        if self.tau != 0.0 {
            let s2 = (level - self.extremum().unwrap()) / self.tau;
            if s2 < 0.0 {
                return Err(Error::Domain(format!("level {level} is not attained by the invariant")));
            }
            let s = s2.sqrt();
            Ok((0..n).map(|i| -self.alpha[i] / (2.0 * self.tau) + s * e[i]).collect())
        } else {
            let a2: f64 = self.alpha.iter().map(|a| a * a).sum();
            if a2 == 0.0 {
                return Err(Error::Domain("constant invariant has no level sets".into()));
            }
            let b: f64 = self.beta.iter().sum();
            // component of e orthogonal to α keeps ϱ unchanged
            let ea: f64 = e.iter().zip(&self.alpha).map(|(x, a)| x * a).sum();
            Ok((0..n)
                .map(|i| (level - b) / a2 * self.alpha[i] + (e[i] - ea / a2 * self.alpha[i]))
                .collect())
        }
    }
}

/// Value, gradient and Hessian of a field at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

type FieldFn = Arc<dyn Fn(&[f64]) -> Result<FieldJet> + Send + Sync>;

/// A smooth scalar field on (a region of) ℝⁿ.
#[derive(Clone)]
pub struct Field {
    n: usize,
    jet: FieldFn,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field").field("n", &self.n).finish()
    }
}

impl Field {
    pub fn new(n: usize, jet: impl Fn(&[f64]) -> Result<FieldJet> + Send + Sync + 'static) -> Self {
        Self { n, jet: Arc::new(jet) }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::new(n, move |_| {
            Ok(FieldJet { value: c, grad: DVector::zeros(n), hess: DMatrix::zeros(n, n) })
        })
    }

    /// Field given by values only; derivatives by finite differences.
    pub fn sampled(n: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(n, move |x| {
            let g = fd::gradient(&f, x);
            let h = fd::hessian(&f, x);
            Ok(FieldJet {
                value: f(x),
                grad: DVector::from_vec(g),
                hess: DMatrix::from_fn(n, n, |i, j| h[i][j]),
            })
        })
    }

    /// `p∘ϱ` for a profile `p` of the basic invariant, by the chain rule
    /// `∂_i p = p'ϱ_i`, `∂_ij p = p''ϱ_iϱ_j + 2τp'δ_ij`.
    pub fn of_invariant(profile: RadialFunction, inv: BasicInvariant) -> Self {
        let n = inv.dim();
        Self::new(n, move |x| {
            let s = inv.eval(x);
            let (p, p1, p2) = profile.jet(s)?;
            let g = DVector::from_vec(inv.grad(x));
            let hess = &g * g.transpose() * p2 + DMatrix::identity(n, n) * (2.0 * inv.tau * p1);
            Ok(FieldJet { value: p, grad: g * p1, hess })
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn jet(&self, x: &[f64]) -> Result<FieldJet> {
        if x.len() != self.n {
            return Err(Error::Domain(format!("point has dimension {}, field {}", x.len(), self.n)));
        }
        (self.jet)(x)
    }
}

fn positive(phi: &FieldJet) -> Result<()> {
    if !(phi.value > 0.0) {
        return Err(Error::Domain(format!("conformal factor φ={} is not positive", phi.value)));
    }
    Ok(())
}

/// Ricci tensor (orthonormal frame) and scalar curvature of `δ/φ²`:
/// `Ric = (n−2)φ∇²φ + [φΔφ − (n−1)|∇φ|²] I`, `R = (n−1)(2φΔφ − n|∇φ|²)`.
pub fn conformal_curvature(phi: &FieldJet) -> Result<(DMatrix<f64>, f64)> {
    positive(phi)?;
    let n = phi.grad.len();
    let nf = n as f64;
    let lap = phi.hess.trace();
    let g2 = phi.grad.norm_squared();
    let ric = &phi.hess * ((nf - 2.0) * phi.value)
        + DMatrix::identity(n, n) * (phi.value * lap - (nf - 1.0) * g2);
    let r = (nf - 1.0) * (2.0 * phi.value * lap - nf * g2);
    Ok((ric, r))
}

/// Hessian of `f` in `δ/φ²`, orthonormal frame.
pub fn conformal_hessian(phi: &FieldJet, f: &FieldJet) -> Result<DMatrix<f64>> {
    positive(phi)?;
    let n = phi.grad.len();
    let pf = phi.grad.dot(&f.grad);
    let cross = &phi.grad * f.grad.transpose() + &f.grad * phi.grad.transpose();
    let coord = &f.hess + cross / phi.value - DMatrix::identity(n, n) * (pf / phi.value);
    Ok(coord * (phi.value * phi.value))
}

/// Sectional curvature of the coordinate plane `(i, j)` (0-based) for
/// `δ/φ²`: `K_ij = φ²[u_ii + u_jj − Σ_{ℓ≠i,j} u_ℓ²]`, `u = log φ`.
pub fn sectional_conformal(phi: &FieldJet, i: usize, j: usize) -> Result<f64> {
    let n = phi.grad.len();
    if i == j || i >= n || j >= n {
        return Err(Error::Index { i, j, n });
    }
    positive(phi)?;
    let p = phi.value;
    let u = |k: usize| phi.grad[k] / p;
    let uu = |k: usize| phi.hess[(k, k)] / p - u(k) * u(k);
    let rest: f64 = (0..n).filter(|&l| l != i && l != j).map(|l| u(l) * u(l)).sum();
    Ok(p * p * (uu(i) + uu(j) - rest))
}

/// Traceless part `A − (tr A / n) I`.
pub fn traceless(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    a - DMatrix::identity(n, n) * (a.trace() / n as f64)
}
