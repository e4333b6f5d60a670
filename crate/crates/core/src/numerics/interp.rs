//! Piecewise cubic Hermite interpolation.

use crate::{Error, Result};

/// Cubic Hermite interpolant through `(x_k, y_k)` with node slopes `m_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermite {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Hermite {
    pub fn new(x: Vec<f64>, y: Vec<f64>, m: Vec<f64>) -> Result<Self> {
        if x.len() < 2 || x.len() != y.len() || x.len() != m.len() {
            return Err(Error::BadParams("hermite: need ≥2 nodes of equal length".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadParams("hermite: nodes must be strictly increasing".into()));
        }
        Ok(Self { x, y, m })
    }

    /// Monotonicity-preserving (Fritsch–Carlson / PCHIP) slopes.
    pub fn pchip(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let m = pchip_slopes(&x, &y)?;
        Self::new(x, y, m)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    fn locate(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.bounds();
        if !(t >= lo && t <= hi) {
            return Err(Error::Extrapolation { x: t, lo, hi });
        }
        let k = self.x.partition_point(|&v| v <= t);
        Ok(k.clamp(1, self.x.len() - 1) - 1)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let k = self.locate(t)?;
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        Ok(h00 * self.y[k] + h10 * h * self.m[k] + h01 * self.y[k + 1] + h11 * h * self.m[k + 1])
    }

    pub fn deriv(&self, t: f64) -> Result<f64> {
        let k = self.locate(t)?;
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let d00 = 6.0 * s * (s - 1.0) / h;
        let d10 = (1.0 - s) * (1.0 - 3.0 * s);
        let d11 = s * (3.0 * s - 2.0);
        Ok(d00 * (self.y[k] - self.y[k + 1]) + d10 * self.m[k] + d11 * self.m[k + 1])
    }
}

pub fn pchip_slopes(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::BadParams("pchip: need ≥2 points".into()));
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return Ok(vec![d[0], d[0]]);
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m[0] = end_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    Ok(m)
}

// One-sided three-point end condition, limited to keep monotonicity.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
