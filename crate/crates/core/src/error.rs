use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("unbound variable {0}")]
    UnboundVariable(String),

    #[error("dependencies are not functionally determined on this database: {0}")]
    NotFdet(String),

    #[error("dependencies are not linear")]
    NotLinear,

    #[error("dependencies are not acyclic")]
    NotAcyclic,

    #[error("method {method} is not applicable: {reason}")]
    MethodInapplicable { method: String, reason: String },

    #[error("instance too large: {size} facts exceeds the cap of {cap}")]
    InstanceTooLarge { size: usize, cap: usize },

    #[error("formula too large: {atom_sets} atom sets exceeds the limit of {limit}")]
    FormulaTooLarge { atom_sets: u128, limit: u128 },

    #[error("{0} is already auxiliary")]
    AlreadyAuxiliary(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
