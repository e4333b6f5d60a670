//! Conformally flat static perfect fluids `δ/φ²` on ℝⁿ whose conformal
//! factor and lapse depend on a basic invariant
//! `ϱ = Σ_i τx_i² + α_i x_i + β_i`.
//!
//! Every radial quantity here is a function of `ϱ`: the lapse solves
//! `(n−2)fφ'' − f''φ − 2φ'f' = 0` and density and pressure follow from
//! `φ`, `f` and the invariant's constants.

use std::sync::Arc;

use serde::Serialize;

use crate::catalog::witten::WittenParams;
use crate::geometry::ansatz::{conformal_point_terms, EPS_DOM};
use crate::geometry::field::{conformal_curvature, BasicInvariant, Field, FieldJet};
use crate::geometry::{FluidData, Interval, MetricAnsatz, RadialFunction};
use crate::numerics::{fd, grid, roots};
use crate::ode::{self, Control, OdeOptions};
use crate::units::EIGHT_PI;
use crate::{Error, Result};

/// The ODE residual takes f'' as a finite difference of the dense f';
/// that difference carries noise of order 1e-9.
pub const ODE_TOL: f64 = 1e-8;
pub const CHECK_TOL: f64 = 1e-7;
const INVARIANT_TOL: f64 = 1e-12;

/// Named conformal factors.
#[derive(Debug, Clone)]
pub enum PhiProfile {
    /// `√(1 + ϱ)`: the Witten-type family, with a closed-form lapse.
    Sqrt1p,
    /// `1 + ϱ` (a round sphere for `ϱ = |x|²`).
    Sphere,
    /// `1 − ϱ` (hyperbolic ball for `ϱ = |x|²`).
    Hyperbolic,
    Constant(f64),
    Custom { name: String, phi: RadialFunction },
}

impl PhiProfile {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sqrt1p" | "witten" => Ok(Self::Sqrt1p),
            "sphere" => Ok(Self::Sphere),
            "hyperbolic" => Ok(Self::Hyperbolic),
            "one" | "flat" => Ok(Self::Constant(1.0)),
            _ => match s.strip_prefix("const:") {
                Some(v) => v
                    .parse()
                    .map(Self::Constant)
                    .map_err(|_| Error::Parse(format!("bad constant conformal factor '{s}'"))),
                None => Err(Error::Parse(format!(
                    "unknown conformal factor '{s}' (sqrt1p, sphere, hyperbolic, one, const:<c>)"
                ))),
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Sqrt1p => "sqrt1p".into(),
            Self::Sphere => "sphere".into(),
            Self::Hyperbolic => "hyperbolic".into(),
            Self::Constant(c) => format!("const:{c}"),
            Self::Custom { name, .. } => name.clone(),
        }
    }

    pub fn function(&self) -> RadialFunction {
        match self {
            Self::Sqrt1p => RadialFunction::analytic(
                Interval::new(-1.0, f64::INFINITY),
                |s| (1.0 + s).sqrt(),
                |s| 0.5 / (1.0 + s).sqrt(),
                |s| -0.25 / (1.0 + s).powf(1.5),
            ),
            Self::Sphere => RadialFunction::analytic(Interval::REAL_LINE, |s| 1.0 + s, |_| 1.0, |_| 0.0),
            Self::Hyperbolic => RadialFunction::analytic(Interval::REAL_LINE, |s| 1.0 - s, |_| -1.0, |_| 0.0),
            Self::Constant(c) => RadialFunction::constant(*c),
            Self::Custom { phi, .. } => phi.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TruncationReason {
    LapseSignLoss,
    ConformalFactorVanishes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub at: f64,
    pub reason: TruncationReason,
}

/// Numerical lapse on `domain` (possibly shorter than the requested span).
#[derive(Debug, Clone)]
pub struct LapseSolution {
    pub f: RadialFunction,
    pub domain: Interval,
    pub truncation: Option<Truncation>,
    /// Largest `|(n−2)fφ'' − f''φ − 2φ'f'|` on a check grid, with `f''`
    /// from differentiating the dense `f'`.
    pub residual: f64,
    pub steps: usize,
}

/// `(n−2)fφ'' − f''φ − 2φ'f'`.
pub fn lapse_ode_residual(phi: (f64, f64, f64), f: (f64, f64, f64), n: usize) -> f64 {
    (n as f64 - 2.0) * f.0 * phi.2 - f.2 * phi.0 - 2.0 * phi.1 * f.1
}

fn phi_positive_until(phi: &RadialFunction, span: Interval) -> Result<Option<f64>> {
    let g = |s: f64| phi.value(s).unwrap_or(f64::NAN) - EPS_DOM.sqrt();
    let nodes = grid::linspace(span.lo, span.hi, 2001);
    if !(g(span.lo) > 0.0) {
        return Err(Error::Domain(format!("conformal factor is not positive at ϱ={}", span.lo)));
    }
    for w in nodes.windows(2) {
        if !(g(w[1]) > 0.0) {
            let z = if g(w[1]) <= 0.0 { roots::brent(&g, w[0], w[1], 1e-14)? } else { w[0] };
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// Integrates the lapse equation over `span` from `(f, f')` at `span.lo`.
/// A sign change of `f`, or `φ` reaching zero, truncates the domain.
pub fn solve_lapse(phi: &RadialFunction, n: usize, span: Interval, ic: (f64, f64)) -> Result<LapseSolution> {
    if n < 3 {
        return Err(Error::BadParams(format!("dimension must be at least 3, got {n}")));
    }
    if !(span.hi > span.lo) {
        return Err(Error::BadParams("lapse span must have positive length".into()));
    }
    if ic == (0.0, 0.0) {
        return Err(Error::BadParams("initial data (0, 0) give f ≡ 0".into()));
    }
    let mut truncation = None;
    let mut hi = span.hi;
    if let Some(z) = phi_positive_until(phi, span)? {
        hi = z;
        truncation = Some(Truncation { at: z, reason: TruncationReason::ConformalFactorVanishes });
    }
    let nn = n as f64;
    let p1 = phi.clone();
    let rhs = move |t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let (p, dp, ddp) = p1.jet(t)?;
        Ok([y[1], ((nn - 2.0) * y[0] * ddp - 2.0 * dp * y[1]) / p])
    };
    let sign0 = if ic.0 != 0.0 { ic.0.signum() } else { ic.1.signum() };
    let opts = OdeOptions { atol: 1e-14, rtol: 1e-12, h_max: (hi - span.lo) / 16.0, ..Default::default() };
    let sol = ode::integrate(rhs.clone(), span.lo, [ic.0, ic.1], hi, &opts, |s| {
        if s.y1[0] * sign0 < 0.0 {
            let z = roots::brent(&|t| s.eval(t)[0], s.t0.max(span.lo + 1e-300), s.t1, 1e-14 * s.t1.abs().max(1.0));
            match z {
                Ok(z) if z > span.lo => Control::StopAt(z),
                _ => Control::StopAt(s.t1),
            }
        } else {
            Control::Continue
        }
    })?;
    if sol.stopped {
        let at = *sol.t.last().unwrap();
        hi = at;
        truncation = Some(Truncation { at, reason: TruncationReason::LapseSignLoss });
    }
    let domain = Interval::new(span.lo, hi);
    let sol = Arc::new(sol);
    let (s0, s1, s2) = (sol.clone(), sol.clone(), sol.clone());
    let clamp = move |t: f64| t.clamp(domain.lo, domain.hi);
    let f = RadialFunction::analytic(
        domain,
        move |t| s0.eval(clamp(t)).map_or(f64::NAN, |y| y[0]),
        move |t| s1.eval(clamp(t)).map_or(f64::NAN, |y| y[1]),
        move |t| s2.eval(clamp(t)).and_then(|y| rhs(t, &y).ok()).map_or(f64::NAN, |d| d[1]),
    );
    let residual = lapse_residual(phi, &f, n, domain)?;
    Ok(LapseSolution { f, domain, truncation, residual, steps: sol.steps.len() })
}

fn lapse_residual(phi: &RadialFunction, f: &RadialFunction, n: usize, dom: Interval) -> Result<f64> {
    let d1 = |t: f64| f.d1(t).unwrap_or(f64::NAN);
    let mut worst: f64 = 0.0;
    for t in grid::chebyshev(dom.lo, dom.hi, 128) {
        let h = fd::step_d1(t);
        if t - 2.0 * h < dom.lo || t + 2.0 * h > dom.hi {
            continue;
        }
        let f2 = fd::d1(&d1, t, dom.lo, dom.hi)?;
        let (p, fj) = (phi.jet(t)?, (f.value(t)?, f.d1(t)?, f2));
        let r = lapse_ode_residual(p, fj, n);
        // relative to the largest term once they exceed unity
        let scale = [(n as f64 - 2.0) * fj.0 * p.2, fj.2 * p.0, 2.0 * p.1 * fj.1]
            .iter()
            .fold(1.0f64, |m, v| m.max(v.abs()));
        worst = worst.max(r.abs() / scale);
    }
    Ok(worst)
}

/// `(f, f')` at `s` for the closed form `A sin(½√(n−2) log(1+ϱ)) + B cos(…)`.
pub fn witten_ic(n: usize, a: f64, b: f64, s: f64) -> (f64, f64) {
    let (f, f1, _) = WittenParams { n, a, b, lambda: 0.0 }.lapse_invariant(s);
    (f, f1)
}

/// `(A, B)` of the closed-form lapse through the data `(f, f')` at `s`.
pub fn witten_coefficients(n: usize, s: f64, ic: (f64, f64)) -> (f64, f64) {
    let k = (n as f64 - 2.0).sqrt();
    let (sn, cs) = (0.5 * k * (1.0 + s).ln()).sin_cos();
    let g = ic.1 * 2.0 * (1.0 + s) / k;
    (ic.0 * sn + g * cs, ic.0 * cs - g * sn)
}

/// `A sin(√(n−2) log cosh r) + B cos(√(n−2) log cosh r)` in the geodesic radius.
pub fn witten_lapse(n: usize, a: f64, b: f64, r: f64) -> f64 {
    WittenParams { n, a, b, lambda: 0.0 }.lapse(r).0
}

/// Value of the invariant at `x` together with `Σϱ_{,k}²` and `Σϱ_{,kk}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantEval {
    pub value: f64,
    pub grad_sq: f64,
    pub laplacian: f64,
}

/// Evaluates `ϱ(x)` and checks `Σϱ_{,k}² = 4τϱ + C`, `Σϱ_{,kk} = 2nτ`.
pub fn basic_invariant_eval(x: &[f64], inv: &BasicInvariant) -> Result<InvariantEval> {
    if x.len() != inv.dim() {
        return Err(Error::BadParams(format!("point has dimension {}, invariant {}", x.len(), inv.dim())));
    }
    let value = inv.eval(x);
    let grad_sq = inv.grad_sq(x);
    let laplacian: f64 = (0..inv.dim()).map(|_| 2.0 * inv.tau).sum();
    let ident = 4.0 * inv.tau * value + inv.c;
    let scale = 1.0 + grad_sq.abs().max(ident.abs());
    if (grad_sq - ident).abs() > INVARIANT_TOL * scale || (laplacian - inv.laplacian()).abs() > INVARIANT_TOL {
        return Err(Error::NoConvergence(format!(
            "invariant identities fail at {x:?}: |∇ϱ|²={grad_sq}, 4τϱ+C={ident}"
        )));
    }
    Ok(InvariantEval { value, grad_sq, laplacian })
}

/// `8πμ`, `8πρ` and the alternative pressure forms at one value of `ϱ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityPressure {
    pub eight_pi_mu: f64,
    /// From `Δf/f` and `R` directly (uses `f''`).
    pub eight_pi_rho: f64,
    /// `f''` eliminated with the lapse equation.
    pub eight_pi_rho_eliminated: f64,
    /// The closed form as usually printed; it differs from the other two
    /// unless `φ'' = φ'² = 0`.
    pub eight_pi_rho_printed: f64,
}

pub fn density_pressure_terms(
    phi: &RadialFunction,
    f: &RadialFunction,
    inv: &BasicInvariant,
    lambda: f64,
    n: usize,
    s: f64,
) -> Result<DensityPressure> {
    let (p, p1, p2) = phi.jet(s)?;
    let (fv, f1, f2) = f.jet(s)?;
    if !(fv > 0.0) {
        return Err(Error::Domain(format!("lapse must be positive, f({s}) = {fv}")));
    }
    let nn = n as f64;
    let (tau, w) = (inv.tau, 4.0 * inv.tau * s + inv.c);
    let r_half = 0.5 * (nn - 1.0) * (4.0 * nn * tau * p * p1 + (2.0 * p * p2 - nn * p1 * p1) * w);
    let eight_pi_mu = r_half - lambda;
    let lap_over_f = (f2 / fv * p * p - (nn - 2.0) * p * p1 * f1 / fv) * w + 2.0 * nn * tau * p * p * f1 / fv;
    let eight_pi_rho = (nn - 1.0) / nn * (lap_over_f - (nn - 2.0) / (nn - 1.0) * r_half) + lambda;
    let tail = 2.0 * nn * tau * p / fv * (f1 * p - (nn - 2.0) * fv * p1);
    let eliminated = (nn - 1.0) / nn
        * ((0.5 * nn * (nn - 2.0) * p1 * p1 - nn * p * p1 * f1 / fv) * w + tail)
        + lambda;
    let printed = (nn - 1.0) / nn
        * (((nn - 2.0) * p * p2 - 0.5 * nn * (nn - 2.0) * p1 * p1 - nn * p * p1 * f1 / fv) * w + tail)
        + lambda;
    Ok(DensityPressure {
        eight_pi_mu,
        eight_pi_rho,
        eight_pi_rho_eliminated: eliminated,
        eight_pi_rho_printed: printed,
    })
}

/// Physical `(μ, ρ)` at `ϱ = s`.
pub fn density_pressure(
    phi: &RadialFunction,
    f: &RadialFunction,
    inv: &BasicInvariant,
    lambda: f64,
    n: usize,
    s: f64,
) -> Result<(f64, f64)> {
    let d = density_pressure_terms(phi, f, inv, lambda, n, s)?;
    Ok((d.eight_pi_mu / EIGHT_PI, d.eight_pi_rho / EIGHT_PI))
}

/// Inputs of a conformally flat build.
#[derive(Debug, Clone)]
pub struct BuildSpec {
    pub phi: PhiProfile,
    pub n: usize,
    /// `(f, f')` at the start of the span; defaults to the closed form with
    /// `A = 1, B = 0` for `Sqrt1p` and to `(1, 0)` otherwise.
    pub ic: Option<(f64, f64)>,
    pub invariant: BasicInvariant,
    pub lambda: f64,
    /// Range of `ϱ`; defaults to ten units from the invariant's extremum
    /// (or from 0 when `τ = 0`).
    pub span: Option<Interval>,
    /// Use the closed-form lapse when `phi` is `Sqrt1p`.
    pub fast_path: bool,
}

impl BuildSpec {
    pub fn new(phi: PhiProfile, n: usize) -> Self {
        Self {
            phi,
            n,
            ic: None,
            invariant: BasicInvariant::radial(n),
            lambda: 0.0,
            span: None,
            fast_path: true,
        }
    }

    pub fn span(&self) -> Interval {
        self.span.unwrap_or_else(|| {
            let e = self.invariant.extremum().unwrap_or(0.0) + 0.0;
            if self.invariant.tau < 0.0 { Interval::new(e - 10.0, e) } else { Interval::new(e, e + 10.0) }
        })
    }

    pub fn initial_data(&self) -> (f64, f64) {
        self.ic.unwrap_or_else(|| match self.phi {
            PhiProfile::Sqrt1p => witten_ic(self.n, 1.0, 0.0, self.span().lo),
            _ => (1.0, 0.0),
        })
    }
}

/// Outcome of the automatic checks run by [`build_model`].
#[derive(Debug, Clone, Serialize)]
pub struct BuildChecks {
    pub ode_residual: f64,
    pub traceless_residual: f64,
    pub mu_vs_curvature: f64,
    pub hessian_offdiag_residual: f64,
    pub hessian_trace_residual: f64,
    /// Printed pressure minus the consistent one (informational).
    pub printed_pressure_gap: f64,
    pub samples: usize,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ConformalModel {
    pub profile: String,
    pub phi: RadialFunction,
    pub f: RadialFunction,
    pub invariant: BasicInvariant,
    pub lambda: f64,
    pub n: usize,
    pub domain: Interval,
    pub truncation: Option<Truncation>,
    pub fast_path: bool,
    pub checks: BuildChecks,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformalDescriptor {
    pub phi: String,
    pub n: usize,
    pub tau: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub c: f64,
    pub lambda: f64,
    pub domain: (f64, f64),
    pub truncation: Option<Truncation>,
    pub fast_path: bool,
    pub checks: BuildChecks,
    pub samples_csv: String,
}

pub const SAMPLE_CSV_HEADER: &str = "s,phi,f,mu,rho";

impl ConformalModel {
    pub fn mu(&self, s: f64) -> Result<f64> {
        Ok(density_pressure(&self.phi, &self.f, &self.invariant, self.lambda, self.n, s)?.0)
    }

    pub fn rho(&self, s: f64) -> Result<f64> {
        Ok(density_pressure(&self.phi, &self.f, &self.invariant, self.lambda, self.n, s)?.1)
    }

    pub fn fluid(&self) -> FluidData {
        let m = self.clone();
        let mu = RadialFunction::sampled(self.domain, move |s| m.mu(s).unwrap_or(f64::NAN));
        let m = self.clone();
        let rho = RadialFunction::sampled(self.domain, move |s| m.rho(s).unwrap_or(f64::NAN));
        FluidData::new(self.f.clone(), mu, rho, self.lambda)
    }

    pub fn phi_field(&self) -> Field {
        Field::of_invariant(self.phi.clone(), self.invariant.clone())
    }

    pub fn f_field(&self) -> Field {
        Field::of_invariant(self.f.clone(), self.invariant.clone())
    }

    pub fn ansatz(&self) -> MetricAnsatz {
        MetricAnsatz::ConformalFlat { phi: self.phi_field(), invariant: self.invariant.clone() }
    }

    /// Grid of invariant values strictly inside the domain.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        let (lo, hi) = (self.domain.lo, self.domain.hi);
        let pad = 1e-3 * (hi - lo);
        grid::chebyshev(lo + pad, hi - pad, points)
    }

    pub fn samples_csv(&self, points: usize) -> Result<String> {
        let mut out = String::from(SAMPLE_CSV_HEADER);
        out.push('\n');
        for s in self.grid(points) {
            let (mu, rho) = density_pressure(&self.phi, &self.f, &self.invariant, self.lambda, self.n, s)?;
            out.push_str(&format!("{s:?},{:?},{:?},{mu:?},{rho:?}\n", self.phi.value(s)?, self.f.value(s)?));
        }
        Ok(out)
    }

    pub fn descriptor(&self, points: usize) -> Result<ConformalDescriptor> {
        Ok(ConformalDescriptor {
            phi: self.profile.clone(),
            n: self.n,
            tau: self.invariant.tau,
            alpha: self.invariant.alpha.clone(),
            beta: self.invariant.beta.clone(),
            c: self.invariant.c,
            lambda: self.lambda,
            domain: (self.domain.lo, self.domain.hi),
            truncation: self.truncation,
            fast_path: self.fast_path,
            checks: self.checks.clone(),
            samples_csv: self.samples_csv(points)?,
        })
    }
}

/// Closed-form lapse for `φ = √(1+ϱ)` through the data `ic` at `span.lo`,
/// truncated at its first zero.
fn witten_fast_lapse(n: usize, span: Interval, ic: (f64, f64)) -> Result<LapseSolution> {
    let (a, b) = witten_coefficients(n, span.lo, ic);
    let p = WittenParams { n, a, b, lambda: 0.0 };
    let k = p.k();
    // zeros where ½k log(1+ϱ) + δ = mπ
    let delta = b.atan2(a);
    let u0 = 0.5 * k * (1.0 + span.lo).ln();
    let mut hi = span.hi;
    let mut truncation = None;
    let mut m = ((u0 + delta) / std::f64::consts::PI).floor() + 1.0;
    if ((u0 + delta) / std::f64::consts::PI).fract() == 0.0 && ic.0 == 0.0 {
        m = (u0 + delta) / std::f64::consts::PI + 1.0;
    }
    let z = ((2.0 * (m * std::f64::consts::PI - delta) / k).exp()) - 1.0;
    if z < hi && z > span.lo {
        hi = z;
        truncation = Some(Truncation { at: z, reason: TruncationReason::LapseSignLoss });
    }
    let domain = Interval::new(span.lo, hi);
    let f = RadialFunction::from_jet(domain, move |s| p.lapse_invariant(s));
    Ok(LapseSolution { f, domain, truncation, residual: 0.0, steps: 0 })
}

/// Points of ℝⁿ on the invariant levels of the domain, off every axis.
pub fn sample_points(inv: &BasicInvariant, domain: Interval, levels: usize, dirs: usize) -> Result<Vec<Vec<f64>>> {
    let n = inv.dim();
    let pad = 1e-2 * (domain.hi - domain.lo);
    let directions = crate::catalog::halton_points(n, dirs, 1.0);
    let mut out = Vec::new();
    for s in grid::chebyshev(domain.lo + pad, domain.hi - pad, levels) {
        for d in &directions {
            out.push(inv.point_at(s, d)?);
        }
    }
    Ok(out)
}

/// Off-diagonal and trace-free diagonal parts of
/// `(n−2)f ∂²φ − φ ∂²f − ∂φ⊗∂f − ∂f⊗∂φ` at one point.
pub fn hessian_residuals(phi: &FieldJet, f: &FieldJet) -> (f64, f64) {
    let n = phi.grad.len();
    let nn = n as f64;
    let mut off: f64 = 0.0;
    let diag: Vec<f64> = (0..n)
        .map(|i| (nn - 2.0) * f.value * phi.hess[(i, i)] - phi.value * f.hess[(i, i)] - 2.0 * phi.grad[i] * f.grad[i])
        .collect();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let e = (nn - 2.0) * f.value * phi.hess[(i, j)]
                    - phi.value * f.hess[(i, j)]
                    - phi.grad[i] * f.grad[j]
                    - phi.grad[j] * f.grad[i];
                off = off.max(e.abs());
            }
        }
    }
    let sum: f64 = diag.iter().sum();
    let on = diag.iter().map(|d| (nn * d - sum).abs()).fold(0.0, f64::max);
    (off, on)
}

/// Solves for the lapse, assembles the model and runs its checks.
pub fn build_model(spec: &BuildSpec) -> Result<ConformalModel> {
    let inv = &spec.invariant;
    if inv.dim() != spec.n {
        return Err(Error::BadParams(format!("invariant has dimension {}, model {}", inv.dim(), spec.n)));
    }
    if inv.is_degenerate() {
        return Err(Error::BadParams("invariant with τ = 0 and α = 0 is constant".into()));
    }
    if inv.recomputed_c() != inv.c {
        return Err(Error::BadParams("stored C does not match (τ, α, β)".into()));
    }
    let span = spec.span();
    let phi = spec.phi.function();
    let ic = spec.initial_data();
    let use_fast = spec.fast_path && matches!(spec.phi, PhiProfile::Sqrt1p);
    let lapse = if use_fast { witten_fast_lapse(spec.n, span, ic)? } else { solve_lapse(&phi, spec.n, span, ic)? };
    let mut model = ConformalModel {
        profile: spec.phi.name(),
        phi,
        f: lapse.f,
        invariant: inv.clone(),
        lambda: spec.lambda,
        n: spec.n,
        domain: lapse.domain,
        truncation: lapse.truncation,
        fast_path: use_fast,
        checks: BuildChecks {
            ode_residual: lapse.residual,
            traceless_residual: 0.0,
            mu_vs_curvature: 0.0,
            hessian_offdiag_residual: 0.0,
            hessian_trace_residual: 0.0,
            printed_pressure_gap: 0.0,
            samples: 0,
            pass: false,
        },
    };
    run_checks(&mut model)?;
    Ok(model)
}

fn run_checks(model: &mut ConformalModel) -> Result<()> {
    if model.fast_path {
        model.checks.ode_residual = lapse_residual(&model.phi, &model.f, model.n, model.domain)?;
    }
    let (phi_f, f_f) = (model.phi_field(), model.f_field());
    let fluid = model.fluid();
    let c = &mut model.checks;
    let pts = sample_points(&model.invariant, model.domain, 16, 4)?;
    for x in &pts {
        let s = model.invariant.eval(x);
        let t = conformal_point_terms(&phi_f, &model.invariant, &fluid, x)?;
        c.traceless_residual = c.traceless_residual.max(t.traceless().amax());
        let (pj, fj) = (phi_f.jet(x)?, f_f.jet(x)?);
        let (_, scalar) = conformal_curvature(&pj)?;
        let d = density_pressure_terms(&model.phi, &model.f, &model.invariant, model.lambda, model.n, s)?;
        c.mu_vs_curvature = c.mu_vs_curvature.max((d.eight_pi_mu + model.lambda - 0.5 * scalar).abs());
        c.printed_pressure_gap = c.printed_pressure_gap.max((d.eight_pi_rho_printed - d.eight_pi_rho).abs());
        let (e_off, e_trace) = hessian_residuals(&pj, &fj);
        c.hessian_offdiag_residual = c.hessian_offdiag_residual.max(e_off);
        c.hessian_trace_residual = c.hessian_trace_residual.max(e_trace);
    }
    c.samples = pts.len();
    c.pass = c.ode_residual < ODE_TOL
        && c.traceless_residual < CHECK_TOL
        && c.mu_vs_curvature < CHECK_TOL
        && c.hessian_offdiag_residual < 1e-8
        && c.hessian_trace_residual < 1e-8;
    Ok(())
}
