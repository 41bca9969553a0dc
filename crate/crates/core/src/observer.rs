//! Observer whose states are the estimates *without* unobservable tail.
//!
//! The initial state is `X_0` itself and a transition on `σ` collects the
//! states entered by `σ` after any unobservable prefix; no unobservable
//! closure is taken after `σ`. States are numbered in BFS order with
//! observable events explored by name, so state `i`'s recorded access word
//! is its shortlex-least observation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::automaton::{Automaton, EventId};
use crate::error::VerifyError;
use crate::StateSet;

/// Default cap on the number of observer states.
pub const DEFAULT_OBSERVER_CAP: usize = 1 << 20;

/// States reachable from `q` by unobservable strings (including `q`).
pub fn unobservable_reach(a: &Automaton, q: &StateSet) -> StateSet {
    let mut seen = q.clone();
    let mut stack: Vec<usize> = q.iter().collect();
    while let Some(x) = stack.pop() {
        for (e, y) in a.successors(x) {
            if !a.alphabet().is_observable(e) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

/// `{ x : ∃ x' ∈ q, w ∈ E_uo*, f(x', wσ) = x }`. Empty when undefined.
pub fn observer_step(a: &Automaton, q: &StateSet, event: EventId) -> StateSet {
    debug_assert!(a.alphabet().is_observable(event));
    image(a, &unobservable_reach(a, q), event)
}

fn image(a: &Automaton, q: &StateSet, event: EventId) -> StateSet {
    let mut out = a.empty_set();
    for x in q {
        if let Some(y) = a.step(x, event) {
            out.insert(y);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Observer {
    states: Vec<StateSet>,
    index: BTreeMap<StateSet, usize>,
    /// Observable events in name order.
    events: Vec<EventId>,
    delta: Vec<Option<usize>>,
    parent: Vec<Option<(usize, EventId)>>,
}

/// Builds the reachable observer with the default state cap.
pub fn build_observer(a: &Automaton) -> Result<Observer, VerifyError> {
    build_observer_capped(a, DEFAULT_OBSERVER_CAP)
}

pub fn build_observer_capped(a: &Automaton, cap: usize) -> Result<Observer, VerifyError> {
    let events = a.alphabet().observable_by_name();
    let mut obs = Observer {
        states: Vec::new(),
        index: BTreeMap::new(),
        events,
        delta: Vec::new(),
        parent: Vec::new(),
    };
    let width = obs.events.len();
    if cap == 0 {
        return Err(VerifyError::ObserverCap { cap });
    }
    obs.push(a.initial().clone(), None);

    let mut next = 0;
    while next < obs.states.len() {
        // precompute the closure once per observer state
        let closure = unobservable_reach(a, &obs.states[next]);
        for k in 0..width {
            let e = obs.events[k];
            let succ = image(a, &closure, e);
            if succ.is_empty() {
                continue;
            }
            let target = match obs.index.get(&succ) {
                Some(&t) => t,
                None => {
                    if obs.states.len() >= cap {
                        return Err(VerifyError::ObserverCap { cap });
                    }
                    obs.push(succ, Some((next, e)))
                }
            };
            obs.delta[next * width + k] = Some(target);
        }
        next += 1;
    }
    Ok(obs)
}

impl Observer {
    fn push(&mut self, set: StateSet, parent: Option<(usize, EventId)>) -> usize {
        let id = self.states.len();
        self.index.insert(set.clone(), id);
        self.states.push(set);
        self.parent.push(parent);
        self.delta
            .extend(core::iter::repeat_n(None, self.events.len()));
        id
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index of the initial state (always 0).
    pub fn initial(&self) -> usize {
        0
    }

    pub fn state(&self, id: usize) -> &StateSet {
        &self.states[id]
    }

    pub fn states(&self) -> &[StateSet] {
        &self.states
    }

    pub fn find(&self, set: &StateSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// Observable events in exploration order.
    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn step(&self, from: usize, event: EventId) -> Option<usize> {
        let k = self.events.iter().position(|&e| e == event)?;
        self.delta[from * self.events.len() + k]
    }

    pub fn run(&self, observation: &[EventId]) -> Option<usize> {
        observation
            .iter()
            .try_fold(self.initial(), |q, &e| self.step(q, e))
    }

    /// Transitions `(from, event, to)` in (state, name-order) order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, EventId, usize)> + '_ {
        let width = self.events.len();
        (0..self.states.len()).flat_map(move |q| {
            (0..width)
                .filter_map(move |k| self.delta[q * width + k].map(|t| (q, self.events[k], t)))
        })
    }

    /// Shortlex-least observation reaching observer state `id`.
    pub fn access_word(&self, id: usize) -> Vec<EventId> {
        let mut word = Vec::new();
        let mut cur = id;
        while let Some((p, e)) = self.parent[cur] {
            word.push(e);
            cur = p;
        }
        word.reverse();
        word
    }

    /// BFS depth of every state (length of its access word).
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = alloc::vec![0usize; self.states.len()];
        for id in 0..self.states.len() {
            if let Some((p, _)) = self.parent[id] {
                // parents are always discovered first
                depth[id] = depth[p] + 1;
            }
        }
        depth
    }
}

/// Current-state estimate without unobservable tail for `observation`.
pub fn estimate<'o>(
    obs: &'o Observer,
    observation: &[EventId],
) -> Result<&'o StateSet, VerifyError> {
    obs.run(observation)
        .map(|q| obs.state(q))
        .ok_or(VerifyError::UnproducibleObservation)
}
