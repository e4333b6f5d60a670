//! Tolman–Oppenheimer–Volkoff stellar structure.

pub mod eos;
pub mod model;
pub mod profile;
pub mod solver;

pub use eos::{EquationOfState, Tabulated};
pub use model::{match_exterior, ModelDescriptor, StellarModel};
pub use profile::{RadialProfile, CSV_HEADER};
pub use solver::{
    detect_surface, integrate_lapse, integrate_tov, volkoff_gamma, LapseNormalization, SolverOptions,
};

/// Integrate, locate the surface, fill the lapse and match the exterior.
pub fn solve_star(
    eos: &EquationOfState,
    rho_center: f64,
    opts: &SolverOptions,
) -> crate::Result<StellarModel> {
    let p = integrate_tov(eos, rho_center, opts)?;
    let rb = detect_surface(&p)?;
    let p = integrate_lapse(&p, eos, LapseNormalization::MatchExterior)?;
    match_exterior(&p, rb, eos)
}
