use thiserror::Error;

use crate::policy::PolicyError;
use crate::store::StoreError;
use crate::workload::ValidationErrors;

/// Errors surfaced by configuration loading and simulation runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationErrors),

    #[error("unknown object id `{0}`")]
    UnknownObject(String),

    #[error(transparent)]
    Store(#[from] StoreError),

    #[error(transparent)]
    Policy(#[from] PolicyError),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
