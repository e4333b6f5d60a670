use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("derivative stencil at r={r} leaves the domain [{lo}, {hi}]")]
    Derivative { r: f64, lo: f64, hi: f64 },
    #[error("bad axis pair ({i}, {j}) in dimension {n}")]
    Index { i: usize, j: usize, n: usize },
    #[error("equation of state is singular at the center (mu = {mu})")]
    CenterSingularity { mu: f64 },
    #[error("horizon reached at r={r} (m={m})")]
    HorizonHit { r: f64, m: f64 },
    #[error("step size underflow at r={r} (h={h})")]
    StepFailure { r: f64, h: f64 },
    #[error("right-hand side failed at r={r}: {msg}")]
    Rhs { r: f64, msg: String },
    #[error("no stellar surface before r_max={r_max}")]
    NoSurface { r_max: f64 },
    #[error("degenerate fluid: |mu+rho| below threshold at rho={rho}")]
    DegenerateFluid { rho: f64 },
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("level {c} is not a regular value (f'=0 at r={r})")]
    NotARegularValue { c: f64, r: f64 },
    #[error("no level set f={c} in the model domain")]
    NoLevelSet { c: f64 },
    #[error("complex thresholds: kappa^2 + c^2 rho0 = {disc} < 0")]
    ComplexThreshold { disc: f64 },
    #[error("interpolation outside the table: x={x} not in [{lo}, {hi}]")]
    Extrapolation { x: f64, lo: f64, hi: f64 },
    #[error("bracket [{a}, {b}] does not contain a sign change")]
    NoBracket { a: f64, b: f64 },
    #[error("failed to converge: {0}")]
    NoConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
