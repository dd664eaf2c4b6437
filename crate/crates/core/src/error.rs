use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("{0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    /// A search ran past its node budget.
    #[error("search budget exhausted after {limit} nodes")]
    Resource { limit: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The pattern admits no k-partite realization. `nodes` is the size of the
    /// completed search tree that proves it.
    #[error("pattern is not {k}-partite (search exhausted after {nodes} nodes)")]
    NotPartite { k: usize, nodes: u64 },

    #[error("pattern has no edges, partiteness is not decidable")]
    Edgeless,

    #[error("Frobenius number undefined: gcd of the positive entries is {gcd}")]
    UndefinedFrobenius { gcd: u64 },

    /// Weight placed on a (vertex, edge) pair that is not an incidence.
    #[error("structural error: {0}")]
    Structural(String),
}

impl Error {
    /// Stable machine-readable code, used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidProfile(_) => "invalid_profile",
            Error::Domain(_) => "domain",
            Error::Shape(_) => "shape",
            Error::Resource { .. } => "resource",
            Error::Parse { .. } => "parse",
            Error::NotPartite { .. } => "not_partite",
            Error::Edgeless => "edgeless",
            Error::UndefinedFrobenius { .. } => "undefined_frobenius",
            Error::Structural(_) => "structural",
        }
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
