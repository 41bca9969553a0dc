//! Graphviz rendering of the observer.
//!
//! Nodes are `q0, q1, …` in BFS order; labels list the estimate's states
//! in declaration order. Estimates inside the secret set are filled grey.

use std::fmt::Write;

use preopa_core::{Automaton, Observer, StateSet};

pub fn set_label(a: &Automaton, q: &StateSet) -> String {
    let names: Vec<&str> = q.iter().map(|x| a.state_name(x)).collect();
    format!("{{{}}}", names.join(","))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn observer_dot(a: &Automaton, obs: &Observer) -> String {
    let mut out = String::new();
    writeln!(out, "digraph observer {{").unwrap();
    writeln!(out, "    rankdir=LR;").unwrap();
    writeln!(out, "    node [shape=box];").unwrap();
    writeln!(out, "    init [shape=point];").unwrap();
    for (i, q) in obs.states().iter().enumerate() {
        let fill = if q.is_subset(a.secret()) {
            ", style=filled, fillcolor=lightgrey"
        } else {
            ""
        };
        writeln!(
            out,
            "    q{i} [label=\"{}\"{fill}];",
            escape(&set_label(a, q))
        )
        .unwrap();
    }
    writeln!(out, "    init -> q{};", obs.initial()).unwrap();
    for (from, e, to) in obs.transitions() {
        writeln!(
            out,
            "    q{from} -> q{to} [label=\"{}\"];",
            escape(a.alphabet().name(e))
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use preopa_core::{build_observer, fixtures};

    #[test]
    fn g1_observer_dot() {
        let a = fixtures::g1();
        let dot = observer_dot(&a, &build_observer(&a).unwrap());
        let expected = "\
digraph observer {
    rankdir=LR;
    node [shape=box];
    init [shape=point];
    q0 [label=\"{0}\"];
    q1 [label=\"{2,3}\"];
    q2 [label=\"{4,5}\"];
    q3 [label=\"{6,7}\"];
    q4 [label=\"{6}\"];
    init -> q0;
    q0 -> q1 [label=\"a\"];
    q1 -> q2 [label=\"b\"];
    q2 -> q3 [label=\"c\"];
    q3 -> q4 [label=\"a\"];
    q3 -> q4 [label=\"b\"];
    q4 -> q4 [label=\"a\"];
}
";
        assert_eq!(dot, expected);
    }
}
