use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("interval endpoint {0} is a root of the polynomial")]
    EndpointIsRoot(String),

    #[error("polynomial has no real root")]
    NoRealRoot,

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("element is not invertible modulo the context polynomial")]
    NotInvertible,

    #[error("residue elements live in different contexts")]
    ModulusMismatch,

    #[error("invalid orbit data: {0}")]
    InvalidOrbitData(String),

    #[error("structure violation: {0}")]
    StructureViolation(String),

    #[error("vector is not a root: self-intersection {0}, expected -2")]
    InvalidRoot(String),

    #[error("index clash: {0}")]
    IndexClash(String),

    #[error("matrix does not preserve the intersection form")]
    NotAnIsometry,

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("only {found} members with entries <= {bound}, {wanted} requested")]
    BoundTooSmall {
        found: usize,
        wanted: usize,
        bound: u32,
    },

    #[error("tolerance not reached: achieved gap bound {achieved}")]
    ToleranceNotReached { achieved: String },

    #[error("census contradiction: {0}")]
    CensusContradiction(String),

    #[error("corrupt store record: {0}")]
    StoreCorrupt(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that signal a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::CensusContradiction(_) | Error::StructureViolation(_) | Error::NotInvertible
        )
    }
}
