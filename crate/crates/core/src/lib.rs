//! Pre-opacity verification for partially observed finite automata.
//!
//! A system is an automaton with observable and unobservable events and a
//! set of secret states. An intruder sees only observable events and tries
//! to predict whether the system will be in a secret state some number of
//! steps ahead. This crate decides whether such predictions are ever certain:
//!
//! * instant pre-opacity: never certain that the system will be secret at
//!   some single instant `n ≥ K` ahead;
//! * trajectory pre-opacity: never certain that a secret state will be
//!   visited at some point after `K` steps;
//! * current-state opacity, and both properties for secret *patterns* given
//!   as a marked DFA.
//!
//! `no_std`; needs `alloc`.

#![no_std]

extern crate alloc;

pub mod automaton;
pub mod error;
pub mod fixtures;
pub mod indicator;
pub mod observer;
pub mod oracle;
pub mod pattern;
pub mod stateset;
pub mod verdict;
pub mod verifier;

pub use automaton::{Alphabet, Automaton, AutomatonBuilder, Event, EventId, ValidationReport};
pub use error::VerifyError;
pub use observer::{build_observer, estimate, Observer};
pub use pattern::{verify_pattern_instant, verify_pattern_trajectory, PatternKind, PatternSpec};
pub use stateset::StateSet;
pub use verdict::{Property, Verdict, Witness};
pub use verifier::{
    saturation_bound, verify_current_state_opacity, verify_instant, verify_trajectory, Analysis,
};
