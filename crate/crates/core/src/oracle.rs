//! Brute-force reference implementations of the opacity definitions, plus a
//! seeded random automaton generator. Used only to cross-check the
//! algorithmic modules.
//!
//! Nothing here touches the observer, the indicator sets or the verifier;
//! every quantity is recomputed from the transition function.
//!
//! Observations are explored breadth first with observable events in name
//! order. For each observation the oracle keeps its *knowledge*: the set of
//! configurations the system can be in right after a string of `L_o` with
//! that projection. Identical knowledge sets are explored once, so the first
//! violating observation found is the shortlex-least one.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Automaton, EventId};
pub use crate::pattern::PatternKind;
use crate::pattern::PatternSpec;
use crate::verdict::{Property, Verdict, Witness};
use crate::StateSet;

/// Enumeration limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_observation_length: usize,
    pub max_instant: u64,
    pub max_string_length: usize,
}

impl OracleBudget {
    /// Defaults sized for `|X| ≤ 5`, `K ≤ 4`.
    pub fn for_k(k: u64) -> Self {
        Self {
            max_observation_length: 31,
            max_instant: k.saturating_add(31),
            max_string_length: 48,
        }
    }
}

/// A result together with whether enumeration ran to exhaustion.
/// `complete == false` means the value is only bounded-confidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounded<T> {
    pub value: T,
    pub complete: bool,
}

/// Estimate of `α` by enumerating strings `s ∈ L_o(G, X_0)` with
/// `P(s) = α` directly and collecting where they end.
///
/// Every such string can be shortened to length `≤ |α|·|X|` without changing
/// its endpoint, so the result is complete once `max_string_length` reaches
/// that, or when no string was cut short anyway.
pub fn oracle_estimate(
    a: &Automaton,
    alpha: &[EventId],
    budget: &OracleBudget,
) -> Bounded<StateSet> {
    let mut out = a.empty_set();
    let mut cut = false;
    // (state, matched) -> shortest length seen; longer revisits add nothing
    let mut best: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut stack: Vec<(usize, usize, usize)> = a.initial().iter().map(|x| (x, 0, 0)).collect();
    if alpha.is_empty() {
        return Bounded {
            value: a.initial().clone(),
            complete: true,
        };
    }
    while let Some((x, matched, len)) = stack.pop() {
        match best.get(&(x, matched)) {
            Some(&l) if l <= len => continue,
            _ => {
                best.insert((x, matched), len);
            }
        }
        for (e, y) in a.successors(x) {
            let observable = a.alphabet().is_observable(e);
            if observable && e != alpha[matched] {
                continue;
            }
            if len + 1 > budget.max_string_length {
                cut = true;
                continue;
            }
            if observable {
                if matched + 1 == alpha.len() {
                    out.insert(y);
                } else {
                    stack.push((y, matched + 1, len + 1));
                }
            } else {
                stack.push((y, matched, len + 1));
            }
        }
    }
    let complete = !cut || budget.max_string_length >= alpha.len() * a.state_count();
    Bounded {
        value: out,
        complete,
    }
}

// Where the pattern DFA is, if one is being tracked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Track {
    Off,
    At(usize),
    // undefined transition: the string has left the pattern's prefixes
    Dead,
}

type Config = (usize, Track);
type Knowledge = BTreeSet<Config>;
// (P(s), P(t)) -> (every split state secret so far, split states)
type SplitGroups = BTreeMap<(Vec<EventId>, Vec<EventId>), (bool, StateSet)>;

struct World<'a> {
    sys: &'a Automaton,
    pattern: Option<(&'a Automaton, Vec<Option<EventId>>, usize, &'a StateSet)>,
}

impl<'a> World<'a> {
    fn plain(sys: &'a Automaton) -> Self {
        Self { sys, pattern: None }
    }

    fn with_pattern(sys: &'a Automaton, p: &'a PatternSpec) -> Self {
        let dfa = p.dfa();
        let map = sys
            .alphabet()
            .ids()
            .map(|e| dfa.alphabet().find(sys.alphabet().name(e)))
            .collect();
        let init = dfa
            .initial()
            .iter()
            .next()
            .expect("pattern has one initial state");
        let marked = dfa.marked().expect("pattern has a marked set");
        Self {
            sys,
            pattern: Some((dfa, map, init, marked)),
        }
    }

    fn start(&self) -> Knowledge {
        let t = match &self.pattern {
            None => Track::Off,
            Some((_, _, init, _)) => Track::At(*init),
        };
        self.sys.initial().iter().map(|x| (x, t)).collect()
    }

    fn secret(&self, (x, t): Config) -> bool {
        match (&self.pattern, t) {
            (None, _) => self.sys.secret().contains(x),
            (Some((_, _, _, marked)), Track::At(y)) => marked.contains(y),
            _ => false,
        }
    }

    fn moves(&self, (x, t): Config) -> Vec<(EventId, Config)> {
        self.sys
            .successors(x)
            .map(|(e, y)| {
                let t2 = match (&self.pattern, t) {
                    (Some((dfa, map, _, _)), Track::At(p)) => {
                        match map[e.index()].and_then(|pe| dfa.step(p, pe)) {
                            Some(q) => Track::At(q),
                            None => Track::Dead,
                        }
                    }
                    _ => t,
                };
                (e, (y, t2))
            })
            .collect()
    }

    // Knowledge after one more observable `e`: unobservable paths from any
    // configuration, then `e`. Nothing unobservable afterwards.
    fn observe(&self, k: &Knowledge, e: EventId) -> Knowledge {
        let mut seen: Knowledge = k.clone();
        let mut stack: Vec<Config> = k.iter().copied().collect();
        let mut out = Knowledge::new();
        while let Some(c) = stack.pop() {
            for (f, c2) in self.moves(c) {
                if f == e {
                    out.insert(c2);
                } else if !self.sys.alphabet().is_observable(f) && seen.insert(c2) {
                    stack.push(c2);
                }
            }
        }
        out
    }

    fn layer(&self, k: &Knowledge) -> Knowledge {
        k.iter()
            .flat_map(|&c| self.moves(c))
            .map(|(_, c2)| c2)
            .collect()
    }

    fn states(&self, k: &Knowledge) -> StateSet {
        StateSet::from_members(self.sys.state_count(), k.iter().map(|&(x, _)| x))
    }
}

// Visits every distinct knowledge set in shortlex order of its first
// observation until `check` reports a violation.
fn explore<F>(
    w: &World,
    budget: &OracleBudget,
    mut check: F,
) -> Bounded<Option<(Vec<EventId>, Knowledge, u64)>>
where
    F: FnMut(&Knowledge) -> (Option<u64>, bool),
{
    let events = w.sys.alphabet().observable_by_name();
    let mut seen: BTreeSet<Knowledge> = BTreeSet::new();
    let mut queue: VecDeque<(Vec<EventId>, Knowledge)> = VecDeque::new();
    let start = w.start();
    seen.insert(start.clone());
    queue.push_back((Vec::new(), start));
    let mut complete = true;
    while let Some((word, k)) = queue.pop_front() {
        let (hit, exact) = check(&k);
        complete &= exact;
        if let Some(n) = hit {
            return Bounded {
                value: Some((word, k, n)),
                complete,
            };
        }
        for &e in &events {
            let next = w.observe(&k, e);
            if next.is_empty() || seen.contains(&next) {
                continue;
            }
            if word.len() >= budget.max_observation_length {
                complete = false;
                continue;
            }
            seen.insert(next.clone());
            let mut w2 = word.clone();
            w2.push(e);
            queue.push_back((w2, next));
        }
    }
    Bounded {
        value: None,
        complete,
    }
}

// Smallest n in [k, max_instant] such that every length-n continuation of
// `start` ends in a secret configuration. Layers are eventually periodic;
// once one repeats the search is exact.
fn instant_hit(w: &World, start: &Knowledge, k: u64, max_instant: u64) -> (Option<u64>, bool) {
    let mut index: BTreeMap<Knowledge, u64> = BTreeMap::new();
    let mut layers: Vec<bool> = Vec::new();
    let mut cur = start.clone();
    let mut n = 0u64;
    loop {
        if let Some(&first) = index.get(&cur) {
            // layer n equals layer `first`; the pattern repeats with period n - first
            let period = n - first;
            let lo = k.max(first);
            let hi = lo + period - 1;
            for m in k..=hi.min(max_instant) {
                let canon = if m < n {
                    m
                } else {
                    first + (m - first) % period
                };
                if layers[canon as usize] {
                    return (Some(m), true);
                }
            }
            return (None, hi <= max_instant);
        }
        if n > max_instant {
            return (None, false);
        }
        let all_secret = cur.iter().all(|&c| w.secret(c));
        if n >= k && all_secret {
            return (Some(n), true);
        }
        index.insert(cur.clone(), n);
        layers.push(all_secret);
        cur = w.layer(&cur);
        n += 1;
    }
}

// First instant n ≥ k at which no continuation has stayed out of the
// secret since instant k.
fn trajectory_hit(w: &World, start: &Knowledge, k: u64, max_instant: u64) -> (Option<u64>, bool) {
    let mut cur = start.clone();
    let mut n = 0u64;
    while n < k {
        if n >= max_instant {
            return (None, false);
        }
        cur = w.layer(&cur);
        n += 1;
    }
    let mut seen: BTreeSet<Knowledge> = BTreeSet::new();
    loop {
        cur.retain(|&c| !w.secret(c));
        if cur.is_empty() {
            return (Some(n), true);
        }
        if !seen.insert(cur.clone()) {
            return (None, true);
        }
        if n >= max_instant {
            return (None, false);
        }
        cur = w.layer(&cur);
        n += 1;
    }
}

fn run(
    w: &World,
    k: u64,
    budget: &OracleBudget,
    kind: PatternKind,
    property: Property,
) -> Bounded<Verdict> {
    let res = explore(w, budget, |know| match kind {
        PatternKind::Instant => instant_hit(w, know, k, budget.max_instant),
        PatternKind::Trajectory => trajectory_hit(w, know, k, budget.max_instant),
    });
    let value = match res.value {
        None => Verdict::holds(property, Some(k)),
        Some((observation, know, n)) => Verdict::violated(
            property,
            Some(k),
            Witness {
                observation,
                instant: n,
                estimate: w.states(&know),
            },
        ),
    };
    Bounded {
        value,
        complete: res.complete,
    }
}

/// Instant pre-opacity straight from its definition: for every observation
/// and every `n ≥ K`, some consistent run must be outside `X_S` exactly `n`
/// steps later. Without liveness a run that cannot be extended by `n`
/// steps counts as having no such continuation.
pub fn oracle_instant(a: &Automaton, k: u64, budget: &OracleBudget) -> Bounded<Verdict> {
    run(
        &World::plain(a),
        k,
        budget,
        PatternKind::Instant,
        Property::InstantPreOpacity,
    )
}

/// Trajectory pre-opacity from its definition. The witness instant is the
/// first `n` at which no continuation has avoided `X_S` since instant `K`.
pub fn oracle_trajectory(a: &Automaton, k: u64, budget: &OracleBudget) -> Bounded<Verdict> {
    run(
        &World::plain(a),
        k,
        budget,
        PatternKind::Trajectory,
        Property::TrajectoryPreOpacity,
    )
}

/// Pattern pre-opacity with `Ω` membership decided by running the pattern
/// DFA alongside the system. A missing pattern transition means non-member
/// from then on.
pub fn oracle_pattern(
    a: &Automaton,
    p: &PatternSpec,
    k: u64,
    kind: PatternKind,
    budget: &OracleBudget,
) -> Bounded<Verdict> {
    run(&World::with_pattern(a, p), k, budget, kind, kind.property())
}

/// K-step opacity by enumerating every run up to `max_string_length`.
///
/// Each split of a run into `s·t` with at most `K` observable events in `t`
/// is grouped by `(P(s), P(t))`; the property fails when some group only
/// ever splits at secret states. Runs are unbounded in general, so the
/// result is never marked complete. The witness observation is `P(s)P(t)`
/// and the instant is `|P(t)|`.
pub fn oracle_k_step_opacity(a: &Automaton, k: u64, budget: &OracleBudget) -> Bounded<Verdict> {
    let al = a.alphabet();
    let mut groups = SplitGroups::new();
    // each frame: current state, event path, state path
    let mut stack: Vec<(usize, Vec<EventId>, Vec<usize>)> = a
        .initial()
        .iter()
        .map(|x| (x, Vec::new(), alloc::vec![x]))
        .collect();
    while let Some((x, path, visited)) = stack.pop() {
        record_splits(a, &path, &visited, k, &mut groups);
        if path.len() >= budget.max_string_length {
            continue;
        }
        for (e, y) in a.successors(x) {
            let mut p2 = path.clone();
            p2.push(e);
            let mut v2 = visited.clone();
            v2.push(y);
            stack.push((y, p2, v2));
        }
    }
    let bad = groups
        .into_iter()
        .filter(|(_, (all_secret, _))| *all_secret)
        .min_by(|((a1, g1), _), ((a2, g2), _)| {
            let w1 = a1.len() + g1.len();
            let w2 = a2.len() + g2.len();
            w1.cmp(&w2).then_with(|| {
                let n1: Vec<&str> = a1.iter().chain(g1).map(|&e| al.name(e)).collect();
                let n2: Vec<&str> = a2.iter().chain(g2).map(|&e| al.name(e)).collect();
                n1.cmp(&n2)
            })
        });
    let value = match bad {
        None => Verdict::holds(Property::KStepOpacity, Some(k)),
        Some(((alpha, gamma), (_, states))) => {
            let instant = gamma.len() as u64;
            let mut observation = alpha;
            observation.extend(gamma);
            Verdict::violated(
                Property::KStepOpacity,
                Some(k),
                Witness {
                    observation,
                    instant,
                    estimate: states,
                },
            )
        }
    };
    Bounded {
        value,
        complete: false,
    }
}

fn record_splits(
    a: &Automaton,
    path: &[EventId],
    states: &[usize],
    k: u64,
    groups: &mut SplitGroups,
) {
    let al = a.alphabet();
    let full = al.project(path);
    // split after i events: state states[i], prefix path[..i]
    let mut observed_before = 0;
    for i in 0..=path.len() {
        if i > 0 && al.is_observable(path[i - 1]) {
            observed_before += 1;
        }
        if (full.len() - observed_before) as u64 > k {
            continue;
        }
        let key = (
            full[..observed_before].to_vec(),
            full[observed_before..].to_vec(),
        );
        let x = states[i];
        let entry = groups.entry(key).or_insert_with(|| (true, a.empty_set()));
        entry.0 &= a.secret().contains(x);
        entry.1.insert(x);
    }
}

/// Parameters of the random automaton generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub state_count: usize,
    pub event_count: usize,
    pub observable_fraction: f64,
    pub secret_fraction: f64,
    pub transition_density: f64,
    pub seed: u64,
    pub require_live: bool,
}

impl GeneratorParams {
    pub fn new(state_count: usize, event_count: usize, seed: u64) -> Self {
        Self {
            state_count,
            event_count,
            observable_fraction: 0.6,
            secret_fraction: 0.3,
            transition_density: 0.4,
            seed,
            require_live: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeneratorError {
    #[error("state_count and event_count must be positive")]
    Empty,
    #[error("{name} = {value} is not a fraction in [0, 1]")]
    Fraction { name: &'static str, value: f64 },
    #[error("require_live needs a positive transition density")]
    LiveWithoutTransitions,
}

fn check_fraction(name: &'static str, value: f64) -> Result<(), GeneratorError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(GeneratorError::Fraction { name, value })
    }
}

/// Deterministic in `params`. States are `0..n`, events `e0..`; state `0` is
/// always initial. With `require_live`, each dead state gets one random
/// outgoing transition.
pub fn generate_random(params: &GeneratorParams) -> Result<Automaton, GeneratorError> {
    if params.state_count == 0 || params.event_count == 0 {
        return Err(GeneratorError::Empty);
    }
    check_fraction("observable_fraction", params.observable_fraction)?;
    check_fraction("secret_fraction", params.secret_fraction)?;
    check_fraction("transition_density", params.transition_density)?;
    if params.require_live && params.transition_density == 0.0 {
        return Err(GeneratorError::LiveWithoutTransitions);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (n, m) = (params.state_count, params.event_count);
    let names: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
    let mut b = Automaton::builder().states(names.iter().cloned());
    for j in 0..m {
        b = b.event(format!("e{j}"), rng.random_bool(params.observable_fraction));
    }
    let mut initial = alloc::vec![names[0].clone()];
    let mut secret = Vec::new();
    for (i, name) in names.iter().enumerate() {
        if i > 0 && rng.random_bool(0.2) {
            initial.push(name.clone());
        }
        if rng.random_bool(params.secret_fraction) {
            secret.push(name.clone());
        }
    }
    for (i, from) in names.iter().enumerate() {
        let mut any = false;
        for j in 0..m {
            if rng.random_bool(params.transition_density) {
                let to = rng.random_range(0..n);
                b = b.transition(from.clone(), format!("e{j}"), names[to].clone());
                any = true;
            }
        }
        if params.require_live && !any {
            let j = rng.random_range(0..m);
            let to = rng.random_range(0..n);
            b = b.transition(names[i].clone(), format!("e{j}"), names[to].clone());
        }
    }
    Ok(b.initial(initial)
        .secret(secret)
        .build()
        .expect("generated model is well formed"))
}

/// A random pattern DFA over `alphabet` with states `p0..`, initial `p0`.
/// Transitions may be missing; each state is marked with probability
/// `marked_fraction`.
pub fn generate_random_pattern(
    a: &Automaton,
    state_count: usize,
    marked_fraction: f64,
    density: f64,
    seed: u64,
) -> Result<PatternSpec, GeneratorError> {
    if state_count == 0 || a.alphabet().is_empty() {
        return Err(GeneratorError::Empty);
    }
    check_fraction("marked_fraction", marked_fraction)?;
    check_fraction("transition_density", density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..state_count).map(|i| format!("p{i}")).collect();
    let mut b = Automaton::builder()
        .events(a.alphabet().events().iter().cloned())
        .states(names.iter().cloned())
        .initial([names[0].clone()])
        .with_marked_set();
    let marked: Vec<String> = names
        .iter()
        .filter(|_| rng.random_bool(marked_fraction))
        .cloned()
        .collect();
    b = b.marked(marked);
    for from in &names {
        for e in a.alphabet().events() {
            if rng.random_bool(density) {
                let to = rng.random_range(0..state_count);
                b = b.transition(from.clone(), e.name.clone(), names[to].clone());
            }
        }
    }
    let dfa = b.build().expect("generated pattern is well formed");
    Ok(PatternSpec::new(dfa).expect("one initial state and a marked set"))
}
