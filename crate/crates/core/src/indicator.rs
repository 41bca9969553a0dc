//! Exact-step reachability and the indicator / non-indicator state sets.
//!
//! * `ℑ_n`: states from which every run of length exactly `n` ends in a
//!   secret state, `ℑ_0 = X_S`, `ℑ_{n+1} = F(ℑ_n)`.
//! * `N`: non-secret states with an infinite run avoiding secret states.
//! * `N_K = W^K(N)`: states that can reach `N` in exactly `K` steps.
//!
//! `F` and `W` range over all events, observable or not.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::automaton::Automaton;
use crate::StateSet;

/// One-step image of `q` over every event.
pub fn post(a: &Automaton, q: &StateSet) -> StateSet {
    let mut out = a.empty_set();
    for x in q {
        for (_, y) in a.successors(x) {
            out.insert(y);
        }
    }
    out
}

/// `R_n(q)`: states reachable from `q` by a defined sequence of length exactly `n`.
pub fn reach_exact(a: &Automaton, q: &StateSet, n: usize) -> StateSet {
    let mut cur = q.clone();
    for _ in 0..n {
        if cur.is_empty() {
            break;
        }
        cur = post(a, &cur);
    }
    cur
}

/// Universal predecessor: `{ x : every defined transition from x leads into q }`.
///
/// Dead states qualify vacuously; callers are expected to reject non-live
/// automata first.
pub fn f_operator(a: &Automaton, q: &StateSet) -> StateSet {
    let mut out = a.empty_set();
    for x in 0..a.state_count() {
        if a.successors(x).all(|(_, y)| q.contains(y)) {
            out.insert(x);
        }
    }
    out
}

/// Existential predecessor: `{ x : some defined transition from x leads into q }`.
pub fn w_operator(a: &Automaton, q: &StateSet) -> StateSet {
    let mut out = a.empty_set();
    for x in 0..a.state_count() {
        if a.successors(x).any(|(_, y)| q.contains(y)) {
            out.insert(x);
        }
    }
    out
}

/// `ℑ_0, ℑ_1, …` stored up to the first repeat (or a caller-given limit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorSequence {
    sets: Vec<StateSet>,
    cycle: Option<Cycle>,
}

/// `ℑ_{start + length} = ℑ_start`, with `start + length` the first repeated index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cycle {
    pub start: usize,
    pub length: usize,
}

impl IndicatorSequence {
    /// Stored prefix `ℑ_0 ..`. When a cycle was found this holds exactly the
    /// distinct sets `ℑ_0 .. ℑ_{start+length-1}`.
    pub fn sets(&self) -> &[StateSet] {
        &self.sets
    }

    pub fn cycle(&self) -> Option<Cycle> {
        self.cycle
    }

    /// Index in the stored prefix equal to `ℑ_n`, if determined.
    pub fn canonical_index(&self, n: u64) -> Option<usize> {
        let stored = self.sets.len() as u64;
        if n < stored {
            return Some(n as usize);
        }
        let c = self.cycle?;
        let (start, len) = (c.start as u64, c.length as u64);
        Some((start + (n - start) % len) as usize)
    }

    /// `ℑ_n` for any `n`, resolved through the cycle when past the stored prefix.
    pub fn get(&self, n: u64) -> Option<&StateSet> {
        self.canonical_index(n).map(|i| &self.sets[i])
    }

    /// Index from which the sequence is periodic, when known.
    pub fn first_repeat(&self) -> Option<usize> {
        self.cycle.map(|c| c.start)
    }
}

/// Iterates `F` from `X_S` until a set repeats or `upto + 1` sets are stored.
pub fn indicator_sequence(a: &Automaton, upto: usize) -> IndicatorSequence {
    let mut sets = Vec::new();
    let mut seen: BTreeMap<StateSet, usize> = BTreeMap::new();
    let mut cur = a.secret().clone();
    loop {
        if let Some(&start) = seen.get(&cur) {
            let length = sets.len() - start;
            return IndicatorSequence {
                sets,
                cycle: Some(Cycle { start, length }),
            };
        }
        if sets.len() > upto {
            return IndicatorSequence { sets, cycle: None };
        }
        seen.insert(cur.clone(), sets.len());
        let next = f_operator(a, &cur);
        sets.push(cur);
        cur = next;
    }
}

/// Non-indicator states: non-secret states that reach, through non-secret
/// states only, a cycle of non-secret states (self-loops count).
///
/// SCCs of the non-secret induced subgraph come from Kosaraju's two-pass
/// algorithm; cyclic components are then propagated backwards.
pub fn non_indicator_set(a: &Automaton) -> StateSet {
    let n = a.state_count();
    let safe = a.secret().complement();
    let mut fwd: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    let mut rev: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    let mut self_loop = a.empty_set();
    for x in &safe {
        for (_, y) in a.successors(x) {
            if safe.contains(y) {
                fwd[x].push(y);
                rev[y].push(x);
                if x == y {
                    self_loop.insert(x);
                }
            }
        }
    }

    let order = finishing_order(&fwd, &safe);
    let mut comp = alloc::vec![usize::MAX; n];
    let mut comp_size: Vec<usize> = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = comp_size.len();
        let mut size = 0;
        let mut stack = alloc::vec![root];
        comp[root] = id;
        while let Some(x) = stack.pop() {
            size += 1;
            for &p in &rev[x] {
                if comp[p] == usize::MAX {
                    comp[p] = id;
                    stack.push(p);
                }
            }
        }
        comp_size.push(size);
    }

    let mut result = a.empty_set();
    let mut stack = Vec::new();
    for x in &safe {
        if comp_size[comp[x]] > 1 || self_loop.contains(x) {
            result.insert(x);
            stack.push(x);
        }
    }
    while let Some(x) = stack.pop() {
        for &p in &rev[x] {
            if result.insert(p) {
                stack.push(p);
            }
        }
    }
    result
}

// Iterative DFS post-order over the vertices in `within`.
fn finishing_order(adj: &[Vec<usize>], within: &StateSet) -> Vec<usize> {
    let mut visited = alloc::vec![false; adj.len()];
    let mut order = Vec::with_capacity(adj.len());
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in within {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            let (x, i) = *top;
            if i < adj[x].len() {
                top.1 += 1;
                let y = adj[x][i];
                if !visited[y] {
                    visited[y] = true;
                    stack.push((y, 0));
                }
            } else {
                order.push(x);
                stack.pop();
            }
        }
    }
    order
}

/// `N_K = W^K(N)`.
///
/// Since `N ⊆ W(N)` the iterates grow monotonically, so iteration stops at
/// the first fixpoint; this keeps huge `K` cheap.
pub fn n_k_set(a: &Automaton, k: u64) -> StateSet {
    n_k_from(a, non_indicator_set(a), k)
}

pub(crate) fn n_k_from(a: &Automaton, non_indicator: StateSet, k: u64) -> StateSet {
    let mut cur = non_indicator;
    for _ in 0..k {
        let next = w_operator(a, &cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::vec;
    use alloc::vec::Vec;

    fn set(a: &Automaton, names: &[&str]) -> StateSet {
        a.states_named(names).unwrap()
    }

    #[test]
    fn reach_zero_is_identity() {
        let a = fixtures::g1();
        let q = set(&a, &["1", "6"]);
        assert_eq!(reach_exact(&a, &q, 0), q);
    }

    #[test]
    fn one_step_from_first_indicators_is_secret() {
        let a = fixtures::g1();
        let r = reach_exact(&a, &set(&a, &["2", "5"]), 1);
        assert!(r.is_subset(a.secret()));
    }

    #[test]
    fn f_operator_examples() {
        let a = fixtures::g1();
        assert!(f_operator(&a, &a.empty_set()).is_empty());
        assert_eq!(f_operator(&a, a.secret()), set(&a, &["2", "5"]));
        assert_eq!(f_operator(&a, &a.all_states()), a.all_states());
    }

    #[test]
    fn g1_indicator_table() {
        let a = fixtures::g1();
        let seq = indicator_sequence(&a, 100);
        let expect: Vec<StateSet> = vec![
            set(&a, &["4", "7"]),
            set(&a, &["2", "5"]),
            set(&a, &["3"]),
            set(&a, &["1"]),
            a.empty_set(),
        ];
        assert_eq!(seq.sets(), &expect[..]);
        assert_eq!(
            seq.cycle(),
            Some(Cycle {
                start: 4,
                length: 1
            })
        );
        for n in 4..50 {
            assert!(seq.get(n).unwrap().is_empty());
        }
    }

    #[test]
    fn g2_indicator_table() {
        let a = fixtures::g2();
        let seq = indicator_sequence(&a, 100);
        assert_eq!(seq.sets().len(), 4);
        assert_eq!(seq.get(1).unwrap(), &set(&a, &["2", "5"]));
        assert_eq!(seq.get(2).unwrap(), &set(&a, &["3"]));
        assert!(seq.get(3).unwrap().is_empty());
        assert!(seq.get(1000).unwrap().is_empty());
    }

    #[test]
    fn upto_limits_storage() {
        let a = fixtures::g1();
        let seq = indicator_sequence(&a, 2);
        assert_eq!(seq.sets().len(), 3);
        assert_eq!(seq.cycle(), None);
        assert_eq!(seq.get(3), None);
    }

    #[test]
    fn empty_secret_gives_empty_indicators() {
        let a = fixtures::g1();
        let a = a.with_secret(a.empty_set());
        let seq = indicator_sequence(&a, 10);
        assert_eq!(seq.sets().len(), 1);
        assert!(seq.get(7).unwrap().is_empty());
    }

    #[test]
    fn w_operator_examples() {
        let a = fixtures::g1();
        assert!(w_operator(&a, &a.empty_set()).is_empty());
        let six = set(&a, &["6"]);
        let w2 = w_operator(&a, &w_operator(&a, &six));
        assert_eq!(w2, set(&a, &["2", "4", "5", "6", "7"]));
        assert_eq!(w_operator(&a, &a.all_states()), a.all_states());
    }

    #[test]
    fn g1_non_indicator_and_n_k() {
        let a = fixtures::g1();
        assert_eq!(non_indicator_set(&a), set(&a, &["6"]));
        assert_eq!(n_k_set(&a, 0), set(&a, &["6"]));
        assert_eq!(n_k_set(&a, 2), set(&a, &["2", "4", "5", "6", "7"]));
        assert_eq!(
            n_k_set(&a, 3),
            set(&a, &["0", "2", "3", "4", "5", "6", "7"])
        );
        assert_eq!(n_k_set(&a, 4), a.all_states());
        assert_eq!(n_k_set(&a, u64::MAX), a.all_states());
    }

    #[test]
    fn no_secret_means_everything_non_indicator() {
        let a = fixtures::g1();
        let a = a.with_secret(a.empty_set());
        assert_eq!(non_indicator_set(&a), a.all_states());
    }

    #[test]
    fn two_state_loop_through_secret() {
        let a = Automaton::builder()
            .observable("a")
            .states(["0", "1"])
            .initial(["0"])
            .secret(["1"])
            .transition("0", "a", "1")
            .transition("1", "a", "0")
            .build()
            .unwrap();
        assert!(non_indicator_set(&a).is_empty());
    }
}
