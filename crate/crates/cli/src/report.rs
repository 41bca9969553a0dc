//! Human and JSON renderings of verdicts.

use preopa_core::{Automaton, EventId, StateSet, Verdict};
use serde::Serialize;

use crate::dot::set_label;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub property: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub alpha: Vec<String>,
    pub n: u64,
    pub estimate: Vec<String>,
}

pub fn names(a: &Automaton, set: &StateSet) -> Vec<String> {
    set.iter().map(|x| a.state_name(x).to_string()).collect()
}

/// Space-separated event names, `ε` for the empty observation.
pub fn observation(a: &Automaton, w: &[EventId]) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.iter()
        .map(|&e| a.alphabet().name(e))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `estimate_owner` names the states in the witness estimate; for pattern
/// verdicts that is the product.
pub fn to_json(events: &Automaton, estimate_owner: &Automaton, v: &Verdict) -> VerdictJson {
    VerdictJson {
        property: v.property.to_string(),
        k: v.k,
        holds: v.holds,
        witness: v.witness.as_ref().map(|w| WitnessJson {
            alpha: w
                .observation
                .iter()
                .map(|&e| events.alphabet().name(e).to_string())
                .collect(),
            n: w.instant,
            estimate: names(estimate_owner, &w.estimate),
        }),
    }
}

pub fn to_text(events: &Automaton, estimate_owner: &Automaton, v: &Verdict) -> String {
    let head = match v.k {
        Some(k) => format!("{} (K = {k})", v.property),
        None => v.property.to_string(),
    };
    let Some(w) = &v.witness else {
        return format!("{head}: holds\n");
    };
    let mut s = format!("{head}: violated\n");
    s.push_str(&format!(
        "  observation: {}\n",
        observation(events, &w.observation)
    ));
    s.push_str(&format!("  n: {}\n", w.instant));
    s.push_str(&format!(
        "  estimate: {}\n",
        set_label(estimate_owner, &w.estimate)
    ));
    s
}
