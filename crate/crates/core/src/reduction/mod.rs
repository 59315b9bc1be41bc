//! Reductions used as generators and test instruments: the PCP machine
//! that makes TO-security undecidable, and the final-action augmentation
//! that reduces TO-security to ITO-security.

pub mod augment;
pub mod pcp;

pub use augment::{augment_final, AugmentedSystem};
pub use pcp::{build_pcp_system, pcp_witness, PcpInstance, PcpWitness};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid PCP instance: {0}")]
    InvalidInstance(String),
    #[error("solution index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("empty solution")]
    EmptySolution,
    #[error("not a solution: concatenations differ at position {position} ({left} vs {right})")]
    NotASolution { position: usize, left: String, right: String },
}
