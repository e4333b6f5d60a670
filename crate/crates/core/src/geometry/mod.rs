//! Curvature of the three metric families and field-equation residuals.

pub mod ansatz;
pub mod field;
pub mod radial;
pub mod report;
pub mod residuals;

pub use ansatz::{mean_curvature_sphere, point_terms, ricci_warped, FluidData, MetricAnsatz, PointTerms};
pub use field::{conformal_curvature, conformal_hessian, sectional_conformal, BasicInvariant, Field, FieldJet};
pub use radial::{Interval, Provenance, RadialFunction};
pub use report::{ResidualEntry, ResidualReport};
pub use residuals::{conservation_residuals, spf_residuals, tolman_point, tolman_residuals};
