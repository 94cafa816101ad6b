//! Synchronizing automata: exact reset thresholds, a rational-algebra
//! synchronization test, and reset-word synthesis with certified length
//! bounds for general, quasi-Eulerian, quasi-one-cluster and prefix-code
//! decoder automata.

pub mod automaton;
pub mod classes;
pub mod codes;
pub mod error;
pub mod induced;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod synthesis;

pub use automaton::{Automaton, StateSet, Word};
pub use error::{Error, Result};
