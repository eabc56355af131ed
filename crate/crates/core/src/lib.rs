pub mod error;
pub mod generators;
pub mod io;
pub mod normalize;
pub mod oca;
pub mod ocs;
pub mod oracle;
pub mod reach;
pub mod scc;
pub mod zcounter;

pub use error::{Error, FireError, Result};
pub use oca::{shortest_word, LabeledTransition, Oca};
pub use ocs::{Config, Guard, Ocs, OcsBuilder, Path, StateId, Transition, TransitionSeq};
pub use scc::{SccAnalysis, SccId};
pub use zcounter::{z_shortest_path, ZConfig, ZGuard, ZOcs, ZPath, ZTransition};
