//! Job setup and the verification suite behind the `modelset` binary.

pub mod jobs;
pub mod verify;

pub use jobs::{JobError, Model, SchemeChoice, SchemeSpec};
pub use verify::{run_verify, Check, VerifyConfig, VerifyReport};
