use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which resource limit a construction ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapKind {
    StateVector,
    DensityMatrix,
    BruteForce,
}

impl std::fmt::Display for CapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CapKind::StateVector => f.write_str("state-vector dimension"),
            CapKind::DensityMatrix => f.write_str("density-matrix dimension"),
            CapKind::BruteForce => f.write_str("brute-force strategy space"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("invalid measurement setting {0} (expected 1 or 2)")]
    InvalidSetting(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("party index {index} out of range for {parties} parties")]
    InvalidParty { index: usize, parties: usize },
    #[error("duplicate party index {0}")]
    DuplicateParty(usize),
    #[error("partial trace needs at least one kept party")]
    EmptyKeep,
    #[error("{kind} cap exceeded: requested {requested}, cap {cap}")]
    CapExceeded {
        kind: CapKind,
        requested: usize,
        cap: usize,
    },
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("not a valid density operator: {0}")]
    InvalidDensity(String),
    #[error("improper coloring, violating edges: {0:?}")]
    ImproperColoring(Vec<(usize, usize)>),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("kernel never crosses the bound on [0, 1] (W(0) = {pure}, W(1) = {mixed}, bound = {bound})")]
    NoCrossing { pure: f64, mixed: f64, bound: f64 },
    #[error("postselected branch s2={s2}, s3={s3} has zero probability")]
    ZeroProbabilityBranch { s2: u8, s3: u8 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("invalid witness spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether this error stems from a resource limit rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    /// Whether this error is a numerical failure.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::ZeroProbabilityBranch { .. })
    }
}
