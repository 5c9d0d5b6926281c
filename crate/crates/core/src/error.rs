use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not attainable by straight-line evolution: sigma = {sigma}, lambda^2 = {lambda_sq} (need 1 - lambda^-2 < sigma)")]
    NotAttainable { sigma: f64, lambda_sq: f64 },

    /// No admissible padding radii or separation scale.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("geometry violation: {0}")]
    Geometry(String),

    #[error("incompatible Neumann data: flux mismatch {mismatch:e}")]
    Compatibility { mismatch: f64 },

    #[error("evolution inconsistency: {0}")]
    EvolutionInconsistency(String),

    #[error("point outside domain: {0}")]
    OutsideDomain(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("particle {particle} left the domain at t = {t} (excursion {excursion:e})")]
    Integration { particle: usize, t: f64, excursion: f64 },

    #[error("assembly mismatch {mismatch:e} exceeds limit {limit:e}")]
    Assembly { mismatch: f64, limit: f64 },

    #[error("linear solver failure: {0}")]
    Solver(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
