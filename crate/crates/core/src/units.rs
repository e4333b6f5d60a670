//! Bridge between the two density/pressure conventions.
//!
//! The TOV relations and the conformal construction are written with
//! `8πμ`, `8πρ` and a cosmological constant `Λ`; the static perfect fluid
//! equations `f Ric = ∇²f + (μ−ρ)/(n−1) f g`, `Δf = [(n−2)μ + nρ]/(n−1) f`,
//! `μ = R/2` use bare symbols. The geometric quantities are
//!
//! ```text
//! μ_geo = 8πμ + Λ,    ρ_geo = 8πρ − Λ.
//! ```
//!
//! This is a convention chosen for this crate (the two are not reconciled
//! explicitly in the literature it follows); it is the unique affine map
//! that makes `μ = R/2` agree with `8πμ = R/2 − Λ`.

use std::f64::consts::PI;

pub const EIGHT_PI: f64 = 8.0 * PI;

/// Physical `(μ, ρ)` with cosmological constant `Λ` → geometric `(μ, ρ)`.
pub fn to_geometric(mu: f64, rho: f64, lambda: f64) -> (f64, f64) {
    (EIGHT_PI * mu + lambda, EIGHT_PI * rho - lambda)
}

/// Inverse of [`to_geometric`].
pub fn to_physical(mu_geo: f64, rho_geo: f64, lambda: f64) -> (f64, f64) {
    ((mu_geo - lambda) / EIGHT_PI, (rho_geo + lambda) / EIGHT_PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let (a, b) = to_geometric(0.3, -0.1, 0.7);
        let (mu, rho) = to_physical(a, b, 0.7);
        assert!((mu - 0.3).abs() < 1e-15 && (rho + 0.1).abs() < 1e-15);
    }

    #[test]
    fn lambda_vacuum_has_opposite_signs() {
        let (mu, rho) = to_physical(0.0, 0.0, 2.0);
        assert!((mu + 2.0 / EIGHT_PI).abs() < 1e-15);
        assert!((rho - 2.0 / EIGHT_PI).abs() < 1e-15);
    }
}
