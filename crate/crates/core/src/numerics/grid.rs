//! Sample grids.

use std::f64::consts::PI;

pub const DEFAULT_POINTS: usize = 512;

/// Chebyshev–Gauss nodes on the open interval (a, b), ascending.
///
/// Endpoints are excluded, so the grid never sits on a junction or a
/// degenerate radius, while still clustering toward both ends.
pub fn chebyshev(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    (0..n)
        .rev()
        .map(|k| c + h * ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos())
        .collect()
}

/// `n` evenly spaced points including both ends.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_is_sorted_and_interior() {
        let g = chebyshev(1.0, 3.0, 512);
        assert_eq!(g.len(), 512);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(g[0] > 1.0 && g[511] < 3.0);
        assert!((g[0] - 1.0) < 1e-4);
    }
}
