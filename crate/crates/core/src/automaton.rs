//! System model: alphabet with observability partition, deterministic partial
//! transition map, initial/secret/marked state sets.
//!
//! States are addressed by dense indices `0..state_count()`; names are kept
//! alongside for display and never influence the algorithms.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::StateSet;

/// Index of an event inside an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl EventId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub name: String,
    pub observable: bool,
}

/// Ordered event list; observable and unobservable events partition it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    events: Vec<Event>,
    by_name: BTreeMap<String, EventId>,
}

impl Alphabet {
    pub fn new(events: Vec<Event>) -> Result<Self, ModelError> {
        let mut diagnostics = Vec::new();
        let by_name = index_events(&events, &mut diagnostics);
        if diagnostics.is_empty() {
            Ok(Self { events, by_name })
        } else {
            Err(ModelError::new(diagnostics))
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len() as u32).map(EventId)
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id.index()]
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn name(&self, id: EventId) -> &str {
        &self.events[id.index()].name
    }

    pub fn find(&self, name: &str) -> Option<EventId> {
        self.by_name.get(name).copied()
    }

    #[inline]
    pub fn is_observable(&self, id: EventId) -> bool {
        self.events[id.index()].observable
    }

    pub fn observable(&self) -> impl Iterator<Item = EventId> + '_ {
        self.ids().filter(|&e| self.is_observable(e))
    }

    pub fn unobservable(&self) -> impl Iterator<Item = EventId> + '_ {
        self.ids().filter(|&e| !self.is_observable(e))
    }

    pub fn has_unobservable(&self) -> bool {
        self.events.iter().any(|e| !e.observable)
    }

    /// Observable events sorted by name; the canonical exploration order.
    pub fn observable_by_name(&self) -> Vec<EventId> {
        self.by_name
            .values()
            .copied()
            .filter(|&e| self.is_observable(e))
            .collect()
    }

    /// Resolves event names to ids.
    pub fn resolve<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<EventId>, UnknownEvent> {
        names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                self.find(n).ok_or_else(|| UnknownEvent(String::from(n)))
            })
            .collect()
    }

    /// Natural projection: erases every unobservable event, keeping order.
    pub fn project(&self, sequence: &[EventId]) -> Vec<EventId> {
        sequence
            .iter()
            .copied()
            .filter(|&e| self.is_observable(e))
            .collect()
    }

    /// Projection over event names.
    pub fn project_names<S: AsRef<str>>(
        &self,
        sequence: &[S],
    ) -> Result<Vec<EventId>, UnknownEvent> {
        Ok(self.project(&self.resolve(sequence)?))
    }

    /// Same event names in any order, regardless of observability flags.
    pub fn same_names(&self, other: &Alphabet) -> bool {
        self.by_name.len() == other.by_name.len()
            && self.by_name.keys().all(|k| other.by_name.contains_key(k))
    }
}

fn index_events(events: &[Event], diagnostics: &mut Vec<Diagnostic>) -> BTreeMap<String, EventId> {
    let mut by_name = BTreeMap::new();
    for (i, ev) in events.iter().enumerate() {
        if ev.name.is_empty() {
            diagnostics.push(Diagnostic::new(
                Location::Event(i),
                DiagnosticKind::EmptyName,
            ));
        } else if by_name.insert(ev.name.clone(), EventId(i as u32)).is_some() {
            diagnostics.push(Diagnostic::new(
                Location::Event(i),
                DiagnosticKind::DuplicateEvent(ev.name.clone()),
            ));
        }
    }
    by_name
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown event `{0}`")]
pub struct UnknownEvent(pub String);

/// Where in a model description a diagnostic points. Indices are positions
/// in the corresponding input list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Event(usize),
    State(usize),
    Transition(usize),
    Initial(usize),
    Secret(usize),
    Marked(usize),
    Model,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    EmptyName,
    DuplicateEvent(String),
    DuplicateState(String),
    UnknownState(String),
    UnknownEvent(String),
    /// Second transition out of the same (state, event); carries the index of the first.
    Nondeterministic {
        state: String,
        event: String,
        first: usize,
    },
    NoInitialState,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagnosticKind::EmptyName => write!(f, "empty name"),
            DiagnosticKind::DuplicateEvent(n) => write!(f, "duplicate event `{n}`"),
            DiagnosticKind::DuplicateState(n) => write!(f, "duplicate state `{n}`"),
            DiagnosticKind::UnknownState(n) => write!(f, "reference to undeclared state `{n}`"),
            DiagnosticKind::UnknownEvent(n) => write!(f, "reference to undeclared event `{n}`"),
            DiagnosticKind::Nondeterministic { state, event, first } => write!(
                f,
                "nondeterministic: second transition from `{state}` on `{event}` (first is transition {first})"
            ),
            DiagnosticKind::NoInitialState => write!(f, "no initial state"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: Location,
    pub kind: DiagnosticKind,
}

impl Diagnostic {
    pub fn new(location: Location, kind: DiagnosticKind) -> Self {
        Self { location, kind }
    }

    pub fn is_determinism(&self) -> bool {
        matches!(self.kind, DiagnosticKind::Nondeterministic { .. })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.location, self.kind)
    }
}

/// Construction failure carrying every diagnostic found.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid model ({} diagnostic(s)): {}", .diagnostics.len(), first_message(.diagnostics))]
pub struct ModelError {
    pub diagnostics: Vec<Diagnostic>,
}

fn first_message(d: &[Diagnostic]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    if let Some(first) = d.first() {
        let _ = write!(s, "{first}");
    }
    s
}

impl ModelError {
    fn new(diagnostics: Vec<Diagnostic>) -> Self {
        Self { diagnostics }
    }
}

/// Result of [`validate`]: structural diagnostics plus liveness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub deterministic: bool,
    pub live: bool,
    /// States with no outgoing transition.
    pub dead_states: StateSet,
    pub dangling_references: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.deterministic && self.dangling_references.is_empty()
    }
}

/// Deterministic finite automaton with a set of initial states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    state_index: BTreeMap<String, usize>,
    alphabet: Alphabet,
    // row-major: delta[state * |E| + event]
    delta: Vec<Option<u32>>,
    initial: StateSet,
    secret: StateSet,
    marked: Option<StateSet>,
}

impl Automaton {
    pub fn builder() -> AutomatonBuilder {
        AutomatonBuilder::default()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.states[state]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    /// Set of the named states; `None` if any name is undeclared.
    pub fn states_named<S: AsRef<str>>(&self, names: &[S]) -> Option<StateSet> {
        let mut set = self.empty_set();
        for n in names {
            set.insert(self.state(n.as_ref())?);
        }
        Some(set)
    }

    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    pub fn secret(&self) -> &StateSet {
        &self.secret
    }

    pub fn marked(&self) -> Option<&StateSet> {
        self.marked.as_ref()
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self.states.len())
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.states.len())
    }

    #[inline]
    pub fn step(&self, state: usize, event: EventId) -> Option<usize> {
        self.delta[state * self.alphabet.len() + event.index()].map(|t| t as usize)
    }

    /// Extended transition function; `None` as soon as a step is undefined.
    pub fn run(&self, state: usize, sequence: &[EventId]) -> Option<usize> {
        sequence.iter().try_fold(state, |x, &e| self.step(x, e))
    }

    /// Defined transitions out of `state` as `(event, target)`, in event order.
    pub fn successors(&self, state: usize) -> impl Iterator<Item = (EventId, usize)> + '_ {
        let width = self.alphabet.len();
        self.delta[state * width..(state + 1) * width]
            .iter()
            .enumerate()
            .filter_map(|(e, t)| t.map(|t| (EventId(e as u32), t as usize)))
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }

    /// `(from, event, to)` triples in (state, event) order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, EventId, usize)> + '_ {
        (0..self.states.len()).flat_map(move |x| self.successors(x).map(move |(e, y)| (x, e, y)))
    }

    pub fn dead_states(&self) -> StateSet {
        let mut dead = self.empty_set();
        for x in 0..self.states.len() {
            if self.successors(x).next().is_none() {
                dead.insert(x);
            }
        }
        dead
    }

    pub fn is_live(&self) -> bool {
        (0..self.states.len()).all(|x| self.successors(x).next().is_some())
    }

    /// Same structure with a different secret set.
    pub fn with_secret(&self, secret: StateSet) -> Automaton {
        assert_eq!(secret.universe(), self.states.len());
        Automaton {
            secret,
            ..self.clone()
        }
    }

    /// Same structure with a different initial set.
    ///
    /// # Panics
    /// If `initial` is empty.
    pub fn with_initial(&self, initial: StateSet) -> Automaton {
        assert_eq!(initial.universe(), self.states.len());
        assert!(!initial.is_empty(), "initial set must be non-empty");
        Automaton {
            initial,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Reports determinism, liveness and referential integrity of a built automaton.
///
/// A built [`Automaton`] is deterministic and fully resolved by construction,
/// so only liveness can fail here; use [`AutomatonBuilder::report`] to
/// inspect raw input.
pub fn validate(a: &Automaton) -> ValidationReport {
    let dead_states = a.dead_states();
    ValidationReport {
        deterministic: true,
        live: dead_states.is_empty(),
        dead_states,
        dangling_references: Vec::new(),
    }
}

/// Name-based staging area for an [`Automaton`].
#[derive(Debug, Clone, Default)]
pub struct AutomatonBuilder {
    events: Vec<Event>,
    states: Vec<String>,
    transitions: Vec<(String, String, String)>,
    initial: Vec<String>,
    secret: Vec<String>,
    marked: Option<Vec<String>>,
}

impl AutomatonBuilder {
    pub fn event(mut self, name: impl Into<String>, observable: bool) -> Self {
        self.events.push(Event {
            name: name.into(),
            observable,
        });
        self
    }

    pub fn observable(self, name: impl Into<String>) -> Self {
        self.event(name, true)
    }

    pub fn unobservable(self, name: impl Into<String>) -> Self {
        self.event(name, false)
    }

    pub fn events(mut self, events: impl IntoIterator<Item = Event>) -> Self {
        self.events.extend(events);
        self
    }

    pub fn state(mut self, name: impl Into<String>) -> Self {
        self.states.push(name.into());
        self
    }

    pub fn states<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn transition(
        mut self,
        from: impl Into<String>,
        event: impl Into<String>,
        to: impl Into<String>,
    ) -> Self {
        self.transitions
            .push((from.into(), event.into(), to.into()));
        self
    }

    pub fn initial<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.initial.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn secret<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.secret.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn marked<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.marked
            .get_or_insert_with(Vec::new)
            .extend(names.into_iter().map(Into::into));
        self
    }

    /// Declares an (initially empty) marked set.
    pub fn with_marked_set(mut self) -> Self {
        self.marked.get_or_insert_with(Vec::new);
        self
    }

    /// Checks the staged input without building. Dead states are reported
    /// against declared states only.
    pub fn report(&self) -> ValidationReport {
        match self.assemble() {
            Ok(a) => validate(&a),
            Err((diagnostics, dead)) => ValidationReport {
                deterministic: !diagnostics.iter().any(Diagnostic::is_determinism),
                live: dead.is_empty(),
                dead_states: dead,
                dangling_references: diagnostics
                    .into_iter()
                    .filter(|d| !d.is_determinism())
                    .collect(),
            },
        }
    }

    pub fn build(self) -> Result<Automaton, ModelError> {
        self.assemble().map_err(|(d, _)| ModelError::new(d))
    }

    fn assemble(&self) -> Result<Automaton, (Vec<Diagnostic>, StateSet)> {
        let mut diagnostics = Vec::new();
        let by_name = index_events(&self.events, &mut diagnostics);

        let mut state_index = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if s.is_empty() {
                diagnostics.push(Diagnostic::new(
                    Location::State(i),
                    DiagnosticKind::EmptyName,
                ));
            } else if state_index.insert(s.clone(), i).is_some() {
                diagnostics.push(Diagnostic::new(
                    Location::State(i),
                    DiagnosticKind::DuplicateState(s.clone()),
                ));
            }
        }

        let n = self.states.len();
        let width = self.events.len();
        let mut delta: Vec<Option<u32>> = alloc::vec![None; n * width];
        let mut origin: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, (from, ev, to)) in self.transitions.iter().enumerate() {
            let loc = Location::Transition(i);
            let x = state_index.get(from).copied();
            let e = by_name.get(ev).copied();
            let y = state_index.get(to).copied();
            if x.is_none() {
                diagnostics.push(Diagnostic::new(
                    loc,
                    DiagnosticKind::UnknownState(from.clone()),
                ));
            }
            if e.is_none() {
                diagnostics.push(Diagnostic::new(
                    loc,
                    DiagnosticKind::UnknownEvent(ev.clone()),
                ));
            }
            if y.is_none() {
                diagnostics.push(Diagnostic::new(
                    loc,
                    DiagnosticKind::UnknownState(to.clone()),
                ));
            }
            let (Some(x), Some(e), Some(y)) = (x, e, y) else {
                continue;
            };
            if let Some(&first) = origin.get(&(x, e.index())) {
                diagnostics.push(Diagnostic::new(
                    loc,
                    DiagnosticKind::Nondeterministic {
                        state: from.clone(),
                        event: ev.clone(),
                        first,
                    },
                ));
                continue;
            }
            origin.insert((x, e.index()), i);
            delta[x * width + e.index()] = Some(y as u32);
        }

        let resolve = |names: &[String], at: fn(usize) -> Location, diags: &mut Vec<Diagnostic>| {
            let mut set = StateSet::empty(n);
            for (i, name) in names.iter().enumerate() {
                match state_index.get(name) {
                    Some(&x) => {
                        set.insert(x);
                    }
                    None => diags.push(Diagnostic::new(
                        at(i),
                        DiagnosticKind::UnknownState(name.clone()),
                    )),
                }
            }
            set
        };
        let initial = resolve(&self.initial, Location::Initial, &mut diagnostics);
        let secret = resolve(&self.secret, Location::Secret, &mut diagnostics);
        let marked = self
            .marked
            .as_ref()
            .map(|m| resolve(m, Location::Marked, &mut diagnostics));
        if initial.is_empty() {
            diagnostics.push(Diagnostic::new(
                Location::Model,
                DiagnosticKind::NoInitialState,
            ));
        }

        let mut dead = StateSet::empty(n);
        for x in 0..n {
            if delta[x * width..(x + 1) * width]
                .iter()
                .all(Option::is_none)
            {
                dead.insert(x);
            }
        }

        if !diagnostics.is_empty() {
            return Err((diagnostics, dead));
        }
        Ok(Automaton {
            states: self.states.clone(),
            state_index,
            alphabet: Alphabet {
                events: self.events.clone(),
                by_name,
            },
            delta,
            initial,
            secret,
            marked,
        })
    }
}
