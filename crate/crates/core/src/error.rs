use thiserror::Error;

use crate::ocs::{Guard, StateId};

/// Why a single transition could not be fired at a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FireError {
    #[error("transition leaves state {expected}, configuration is in state {found}")]
    WrongState { expected: StateId, found: StateId },
    #[error("{guard:?} guard cannot fire at counter {counter}")]
    GuardMismatch { guard: Guard, counter: u64 },
    #[error("firing would make the counter negative")]
    NegativeCounter,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("step {step} is not fireable: {reason}")]
    NotFireable { step: usize, reason: FireError },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search space of {needed} configurations exceeds the memory budget of {budget} bits")]
    ResourceExhausted { needed: u128, budget: u64 },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("unreachable")]
    Unreachable,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
