use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("origin norm {norm:.1} m is outside the Earth-surface range [6.2e6, 6.6e6] m")]
    InvalidOrigin { norm: f64 },
    #[error("zenith-degenerate geometry: elevation {elevation_deg:.4}° is at or above the {limit_deg}° guard")]
    ZenithDegenerate { elevation_deg: f64, limit_deg: f64 },
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("center lines are parallel (|sin Δθ| = {sin_delta:.3e})")]
    ParallelLines { sin_delta: f64 },
    #[error("critical point undefined: both range biases are zero")]
    UndefinedCriticalPoint,
    #[error("no multipath: every radius is zero")]
    NoMultipath,
    #[error("need at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("grids do not share a common specification")]
    GridMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
