//! Deciders and bounded checkers for intransitive noninterference of
//! finite deterministic state-observed systems.
//!
//! * [`verifier`]: polynomial-time P-, IP- and TA-security with witnesses.
//! * [`oracle`]: bounded trace enumeration (the only tool for TO/ITO) and
//!   exact pair-automaton checks used for cross-validation.
//! * [`semantics`]: purge, ipurge, views and the information trees.
//! * [`reduction`]: the PCP machine and the final-action augmentation.
//! * [`gen`]: seeded random systems and the separating examples.
//! * [`format`], [`cli`], [`bench`]: file format, command line, timing.

pub mod bench;
pub mod cli;
pub mod format;
pub mod gen;
pub mod model;
pub mod notion;
pub mod oracle;
pub mod reduction;
pub mod semantics;
pub mod verifier;

pub use model::{ActionId, DomainId, DomainSet, Policy, StateId, System, SystemBuilder};
pub use notion::Notion;
pub use oracle::BoundedVerdict;
pub use verifier::{Verdict, Witness};
