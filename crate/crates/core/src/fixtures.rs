//! Small reference systems used by the test suites, the acceptance suite and
//! the shipped JSON model files. Each one is pinned by hand-checked verdicts.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::automaton::Automaton;
use crate::pattern::PatternSpec;

/// Eight-state running example with one unobservable event `u`.
///
/// `0 -a-> 2 -b-> 4 -c-> 6 -a-> 6` and `0 -u-> 1 -a-> 3 -b-> 5 -c-> 7 -b-> 6`,
/// secret states `{4, 7}`.
pub fn g1() -> Automaton {
    g1_builder().build().expect("g1 is well formed")
}

fn g1_builder() -> crate::automaton::AutomatonBuilder {
    Automaton::builder()
        .observable("a")
        .observable("b")
        .observable("c")
        .unobservable("u")
        .states((0..8).map(|i| format!("{i}")))
        .initial(["0"])
        .secret(["4", "7"])
        .transition("0", "a", "2")
        .transition("0", "u", "1")
        .transition("1", "a", "3")
        .transition("2", "b", "4")
        .transition("3", "b", "5")
        .transition("4", "c", "6")
        .transition("5", "c", "7")
        .transition("6", "a", "6")
        .transition("7", "b", "6")
}

/// [`g1`] plus `0 -c-> 2` and `1 -c-> 5`: observing `c` pins the system to
/// `{2, 5}`, both one step away from a secret state.
pub fn g2() -> Automaton {
    g1_builder()
        .transition("0", "c", "2")
        .transition("1", "c", "5")
        .build()
        .expect("g2 is well formed")
}

/// Three states, secret `{1}`: `0 -a-> 1 -u-> 2 -a-> 1`.
///
/// Current-state opaque (after `a` the standard estimate is `{1, 2}`), but
/// from `0` every one-step run lands in the secret state.
pub fn current_state_but_not_instant() -> Automaton {
    Automaton::builder()
        .observable("a")
        .unobservable("u")
        .states(["0", "1", "2"])
        .initial(["0"])
        .secret(["1"])
        .transition("0", "a", "1")
        .transition("1", "u", "2")
        .transition("2", "a", "1")
        .build()
        .expect("well formed")
}

/// Fully unobservable system: from `0` the run enters one of three cycles of
/// lengths 2, 3 and 5. The last state of every cycle is secret, so after `n`
/// steps all runs are secret exactly when `n` is a positive multiple of 30.
pub fn coprime_cycles() -> Automaton {
    let mut b = Automaton::builder()
        .unobservable("u1")
        .unobservable("u2")
        .unobservable("u3")
        .unobservable("t")
        .state("0")
        .initial(["0"]);
    let mut next = 1;
    let mut secret = Vec::new();
    for (entry, len) in [("u1", 2), ("u2", 3), ("u3", 5)] {
        let first = next;
        for k in 0..len {
            b = b.state(format!("{}", first + k));
        }
        b = b.transition("0", entry, format!("{first}"));
        for k in 0..len {
            let from = first + k;
            let to = first + (k + 1) % len;
            b = b.transition(format!("{from}"), "t", format!("{to}"));
        }
        secret.push(format!("{}", first + len - 1));
        next += len;
    }
    b.secret(secret).build().expect("well formed")
}

/// Event names of the factory model: ten sensor events `a1..a10` and eight
/// silent moves `b1..b8`.
pub fn factory_events() -> Vec<(String, bool)> {
    let mut ev: Vec<(String, bool)> = (1..=10).map(|i| (format!("a{i}"), true)).collect();
    ev.extend((1..=8).map(|i| (format!("b{i}"), false)));
    ev
}

/// Person moving between nine regions of a building.
///
/// 0 outside, 1 warehouse, 2 corridor, 3 logistics, 4 finance office,
/// 5 canteen, 6 workshop 1, 7 workshop 2, 8 workshop 3. Entering the
/// warehouse (`a1`), workshop 2 (`a6`), the corridor or logistics is sensed;
/// every other move is silent. No secret states: the secret is the pattern
/// of [`factory_pattern`].
pub fn factory() -> Automaton {
    let mut b = Automaton::builder();
    for (name, obs) in factory_events() {
        b = b.event(name, obs);
    }
    b.states((0..9).map(|i| format!("{i}")))
        .initial(["0"])
        .transition("0", "a1", "1")
        .transition("0", "a2", "2")
        .transition("1", "a3", "2")
        .transition("4", "a4", "2")
        .transition("5", "a5", "2")
        .transition("6", "a6", "7")
        .transition("2", "a7", "3")
        .transition("8", "a8", "2")
        .transition("6", "a9", "2")
        .transition("5", "a10", "3")
        .transition("2", "b1", "4")
        .transition("1", "b2", "6")
        .transition("7", "b3", "8")
        .transition("2", "b4", "5")
        .transition("3", "b5", "0")
        .transition("2", "b6", "0")
        .transition("4", "b7", "5")
        .transition("2", "b8", "6")
        .build()
        .expect("factory is well formed")
}

/// Total DFA over the factory alphabet marking the instants at which a run
/// completes "`a1` then later `b2`" (state F, G) or "`a1`, later `a6`, later
/// `b3`" (state H). Completing the second task clears all progress.
pub fn factory_pattern() -> PatternSpec {
    let names: Vec<String> = factory_events().into_iter().map(|(n, _)| n).collect();
    // (state, overrides, default target)
    type Row<'a> = (&'a str, &'a [(&'a str, &'a str)], &'a str);
    let table: [Row; 8] = [
        ("A", &[("a1", "B")], "A"),
        ("B", &[("a6", "C"), ("b2", "F")], "B"),
        ("C", &[("b3", "H"), ("b2", "G")], "C"),
        ("D", &[("a1", "B"), ("a6", "E")], "D"),
        ("E", &[("a1", "C"), ("b3", "H")], "E"),
        ("F", &[("a1", "B"), ("a6", "E")], "D"),
        ("G", &[("a1", "C"), ("b3", "H")], "E"),
        ("H", &[("a1", "B")], "A"),
    ];
    let mut b = Automaton::builder();
    for (name, obs) in factory_events() {
        b = b.event(name, obs);
    }
    b = b
        .states(table.iter().map(|(s, _, _)| *s))
        .initial(["A"])
        .marked(["F", "G", "H"]);
    for (state, overrides, default) in table {
        for ev in &names {
            let to = overrides
                .iter()
                .find(|(e, _)| e == ev)
                .map(|(_, t)| *t)
                .unwrap_or(default);
            b = b.transition(state, ev.as_str(), to);
        }
    }
    PatternSpec::new(b.build().expect("pattern is well formed")).expect("single initial state")
}
