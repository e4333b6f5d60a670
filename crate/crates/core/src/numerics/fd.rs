//! Richardson-extrapolated central differences.
//!
//! Both stencils are fourth order; one halving step lifts them to sixth.
//! First derivatives use `h = max(1e-5, 1e-5|x|)`. Second derivatives use a
//! wider `h = max(1e-3, 1e-3|x|)`: at 1e-5 the 1/h² amplification of
//! roundoff alone is ~1e-5, far above the verification tolerances.

use crate::{Error, Result};

pub const FD_TOL: f64 = 1e-6;

pub fn step_d1(x: f64) -> f64 {
    1e-5f64.max(1e-5 * x.abs())
}

pub fn step_d2(x: f64) -> f64 {
    1e-3f64.max(1e-3 * x.abs())
}

fn check(x: f64, h: f64, lo: f64, hi: f64) -> Result<()> {
    if x - 2.0 * h < lo || x + 2.0 * h > hi {
        return Err(Error::Derivative { r: x, lo, hi });
    }
    Ok(())
}

fn d1_stencil(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

fn d2_stencil(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// First derivative of `f` at `x`; the stencil must stay inside `[lo, hi]`.
pub fn d1(f: &dyn Fn(f64) -> f64, x: f64, lo: f64, hi: f64) -> Result<f64> {
    d1_with_step(f, x, step_d1(x), lo, hi)
}

pub fn d1_with_step(f: &dyn Fn(f64) -> f64, x: f64, h: f64, lo: f64, hi: f64) -> Result<f64> {
    check(x, h, lo, hi)?;
    Ok((16.0 * d1_stencil(f, x, 0.5 * h) - d1_stencil(f, x, h)) / 15.0)
}

/// Second derivative of `f` at `x`.
pub fn d2(f: &dyn Fn(f64) -> f64, x: f64, lo: f64, hi: f64) -> Result<f64> {
    d2_with_step(f, x, step_d2(x), lo, hi)
}

pub fn d2_with_step(f: &dyn Fn(f64) -> f64, x: f64, h: f64, lo: f64, hi: f64) -> Result<f64> {
    check(x, h, lo, hi)?;
    Ok((16.0 * d2_stencil(f, x, 0.5 * h) - d2_stencil(f, x, h)) / 15.0)
}

/// Gradient of a scalar field on ℝⁿ.
pub fn gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let line = |t: f64| {
                let mut z = x.to_vec();
                z[i] = t;
                f(&z)
            };
            d1_with_step(&line, x[i], step_d1(x[i]), f64::NEG_INFINITY, f64::INFINITY)
                .expect("unbounded domain")
        })
        .collect()
}

/// Hessian of a scalar field on ℝⁿ, row-major `n×n`.
pub fn hessian(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut hm = vec![vec![0.0; n]; n];
    for i in 0..n {
        let line = |t: f64| {
            let mut z = x.to_vec();
            z[i] = t;
            f(&z)
        };
        hm[i][i] = d2_with_step(&line, x[i], step_d2(x[i]), f64::NEG_INFINITY, f64::INFINITY)
            .expect("unbounded domain");
        for j in (i + 1)..n {
            let plane = |a: f64, b: f64| {
                let mut z = x.to_vec();
                z[i] += a;
                z[j] += b;
                f(&z)
            };
            let cross = |h: f64| {
                (plane(h, h) - plane(h, -h) - plane(-h, h) + plane(-h, -h)) / (4.0 * h * h)
            };
            let h = step_d2(x[i]).max(step_d2(x[j]));
            let v = (4.0 * cross(0.5 * h) - cross(h)) / 3.0;
            hm[i][j] = v;
            hm[j][i] = v;
        }
    }
    hm
}
