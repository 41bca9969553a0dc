//! Outcome of a verification run.

use alloc::vec::Vec;
use core::fmt;

use crate::automaton::EventId;
use crate::StateSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    InstantPreOpacity,
    TrajectoryPreOpacity,
    CurrentStateOpacity,
    PatternInstant,
    PatternTrajectory,
    /// Only produced by the bounded reference oracle.
    KStepOpacity,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::InstantPreOpacity => "instant-pre-opacity",
            Property::TrajectoryPreOpacity => "trajectory-pre-opacity",
            Property::CurrentStateOpacity => "current-state-opacity",
            Property::PatternInstant => "pattern-instant",
            Property::PatternTrajectory => "pattern-trajectory",
            Property::KStepOpacity => "k-step-opacity",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub observation: Vec<EventId>,
    /// Violating instant for instant properties; `K` for trajectory
    /// properties (the reference oracle reports the instant at which the
    /// last secret-free continuation dies); 0 for current-state opacity.
    pub instant: u64,
    /// Estimate after `observation`. For current-state opacity this is the
    /// standard estimate, closed under unobservable moves.
    pub estimate: StateSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub k: Option<u64>,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds(property: Property, k: Option<u64>) -> Self {
        Self {
            property,
            k,
            holds: true,
            witness: None,
        }
    }

    pub fn violated(property: Property, k: Option<u64>, witness: Witness) -> Self {
        Self {
            property,
            k,
            holds: false,
            witness: Some(witness),
        }
    }
}
