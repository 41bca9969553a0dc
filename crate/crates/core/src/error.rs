use alloc::string::String;
use alloc::vec::Vec;

use crate::automaton::UnknownEvent;

/// Failures of the verification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    /// Every state needs an outgoing transition before prediction is meaningful.
    #[error("automaton is not live; dead states: {}", .dead_states.join(", "))]
    NotLive { dead_states: Vec<String> },
    #[error("observer exceeded the cap of {cap} states")]
    ObserverCap { cap: usize },
    #[error("indicator iteration exceeded the cap of {cap} steps without repeating")]
    IndicatorCap { cap: usize },
    #[error("event `{0}` is not observable")]
    NotObservable(String),
    #[error("observation is not producible by the system")]
    UnproducibleObservation,
    #[error(transparent)]
    UnknownEvent(#[from] UnknownEvent),
    #[error("pattern alphabet differs from the system alphabet (missing: [{}], extra: [{}])", .missing.join(", "), .extra.join(", "))]
    AlphabetMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("pattern automaton must have exactly one initial state, found {found}")]
    PatternInitial { found: usize },
    #[error("pattern automaton has no marked set")]
    PatternUnmarked,
}
