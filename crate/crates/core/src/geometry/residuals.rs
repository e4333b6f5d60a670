//! Pointwise residuals of the static perfect fluid and TOV equations.

use super::ansatz::{point_terms, FluidData, MetricAnsatz};
use super::radial::RadialFunction;
use super::report::ResidualReport;
use crate::units::EIGHT_PI;
use crate::{Error, Result};

/// Residuals of `f Ric = ∇²f + (μ−ρ)/(n−1) f g` (componentwise),
/// `Δf = [(n−2)μ + nρ]/(n−1) f`, `μ = R/2` and the traceless form
/// `f R̊ic = ∇̊²f`, in geometric units.
pub fn spf_residuals(
    ansatz: &MetricAnsatz,
    fluid: &FluidData,
    grid: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    let mut full = Vec::with_capacity(grid.len());
    let mut lapse_laplacian = Vec::with_capacity(grid.len());
    let mut half = Vec::with_capacity(grid.len());
    let mut tl = Vec::with_capacity(grid.len());
    for &r in grid {
        let t = point_terms(ansatz, fluid, r)?;
        if !(t.f > 0.0) {
            return Err(Error::Domain(format!("lapse f={} not positive at r={r}", t.f)));
        }
        full.push((r, t.static_fluid().amax()));
        lapse_laplacian.push((r, t.lapse_laplacian()));
        half.push((r, t.mu - 0.5 * t.scalar));
        tl.push((r, t.traceless().amax()));
    }
    let mut rep = ResidualReport::new(grid.to_vec());
    rep.push("static_fluid", tol, &full);
    rep.push("lapse_laplacian", tol, &lapse_laplacian);
    rep.push("mu_half_R", tol, &half);
    rep.push("traceless", tol, &tl);
    Ok(rep)
}

/// `f ρ' + (μ+ρ) f'` in geometric units; vanishes for every solution of the
/// static perfect fluid equations.
pub fn conservation_residuals(fluid: &FluidData, grid: &[f64], tol: f64) -> Result<ResidualReport> {
    let mut vals = Vec::with_capacity(grid.len());
    for &r in grid {
        let (mu, rho) = fluid.geometric(r)?;
        let drho = EIGHT_PI * fluid.rho.d1(r)?;
        vals.push((r, fluid.f.value(r)? * drho + (mu + rho) * fluid.f.d1(r)?));
    }
    let mut rep = ResidualReport::new(grid.to_vec());
    rep.push("conservation", tol, &vals);
    Ok(rep)
}

/// The three TOV relations at one radius, as `lhs − rhs`.
pub fn tolman_point(
    gamma: &RadialFunction,
    v: &RadialFunction,
    mu: &RadialFunction,
    rho: &RadialFunction,
    r: f64,
) -> Result<[f64; 3]> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("r={r} is not positive")));
    }
    let a = (-gamma.value(r)?).exp();
    let g1 = gamma.d1(r)?;
    let v1 = v.d1(r)?;
    let (m, p) = (mu.value(r)?, rho.value(r)?);
    let ir2 = 1.0 / (r * r);
    Ok([
        EIGHT_PI * m - (ir2 + a * (g1 / r - ir2)),
        EIGHT_PI * p - (-ir2 + a * (v1 / r + ir2)),
        2.0 * rho.d1(r)? + v1 * (p + m),
    ])
}

/// Residuals of
/// `8πμ = 1/r² + e^{−γ}(γ'/r − 1/r²)`,
/// `8πρ = −1/r² + e^{−γ}(v'/r + 1/r²)`,
/// `2ρ' = −v'(ρ+μ)`.
pub fn tolman_residuals(
    gamma: &RadialFunction,
    v: &RadialFunction,
    mu: &RadialFunction,
    rho: &RadialFunction,
    grid: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    let n = grid.len();
    let (mut t1, mut t2, mut t3) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for &r in grid {
        let [a, b, c] = tolman_point(gamma, v, mu, rho, r)?;
        t1.push((r, a));
        t2.push((r, b));
        t3.push((r, c));
    }
    let mut rep = ResidualReport::new(grid.to_vec());
    rep.push("tolman1", tol, &t1);
    rep.push("tolman2", tol, &t2);
    rep.push("tolman3", tol, &t3);
    Ok(rep)
}
