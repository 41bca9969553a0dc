//! Secret sequence patterns, recognised by a marked DFA over the full
//! alphabet, reduced to state-based pre-opacity through a product.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::automaton::Automaton;
use crate::error::VerifyError;
use crate::verifier::{Analysis, Property, Verdict, VerifyOptions};

/// A deterministic pattern automaton with exactly one initial state and a
/// marked set; the pattern is its marked language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSpec {
    dfa: Automaton,
}

impl PatternSpec {
    pub fn new(dfa: Automaton) -> Result<Self, VerifyError> {
        let found = dfa.initial().len();
        if found != 1 {
            return Err(VerifyError::PatternInitial { found });
        }
        if dfa.marked().is_none() {
            return Err(VerifyError::PatternUnmarked);
        }
        Ok(Self { dfa })
    }

    pub fn dfa(&self) -> &Automaton {
        &self.dfa
    }

    pub fn initial(&self) -> usize {
        self.dfa
            .initial()
            .iter()
            .next()
            .expect("exactly one initial state")
    }

    pub fn marked(&self) -> &crate::StateSet {
        self.dfa.marked().expect("checked at construction")
    }

    /// Every (state, event) pair has a transition.
    pub fn is_total(&self) -> bool {
        self.dfa.transition_count() == self.dfa.state_count() * self.dfa.alphabet().len()
    }

    /// Membership of a string in the marked language.
    pub fn accepts(&self, word: &[crate::EventId]) -> bool {
        self.dfa
            .run(self.initial(), word)
            .is_some_and(|x| self.marked().contains(x))
    }
}

/// Adds an unmarked absorbing dump state for every missing transition.
/// Total inputs are returned unchanged.
pub fn complete_pattern_dfa(p: &PatternSpec) -> PatternSpec {
    if p.is_total() {
        return p.clone();
    }
    let dfa = &p.dfa;
    let mut dump = String::from("dump");
    while dfa.state(&dump).is_some() {
        dump.push('_');
    }
    let mut b = Automaton::builder()
        .events(dfa.alphabet().events().iter().cloned())
        .states(dfa.state_names().iter().cloned())
        .state(dump.clone())
        .initial([dfa.state_name(p.initial())])
        .secret(dfa.secret().iter().map(|x| dfa.state_name(x)))
        .marked(p.marked().iter().map(|x| dfa.state_name(x)));
    for x in 0..=dfa.state_count() {
        let from = if x < dfa.state_count() {
            dfa.state_name(x)
        } else {
            dump.as_str()
        };
        for e in dfa.alphabet().ids() {
            let to = if x < dfa.state_count() {
                dfa.step(x, e).map_or(dump.as_str(), |y| dfa.state_name(y))
            } else {
                dump.as_str()
            };
            b = b.transition(from, dfa.alphabet().name(e), to);
        }
    }
    PatternSpec {
        dfa: b.build().expect("completion preserves well-formedness"),
    }
}

fn check_alphabets(a: &Automaton, p: &PatternSpec) -> Result<(), VerifyError> {
    if a.alphabet().same_names(p.dfa.alphabet()) {
        return Ok(());
    }
    let names = |x: &Automaton| -> Vec<String> {
        x.alphabet()
            .events()
            .iter()
            .map(|e| e.name.clone())
            .collect()
    };
    let (sys, pat) = (names(a), names(&p.dfa));
    Err(VerifyError::AlphabetMismatch {
        missing: sys.iter().filter(|n| !pat.contains(n)).cloned().collect(),
        extra: pat.iter().filter(|n| !sys.contains(n)).cloned().collect(),
    })
}

/// Reachable part of `a × p`, with states named `(x,y)`, the system's
/// alphabet, and secret states those whose pattern component is marked.
pub fn product(a: &Automaton, p: &PatternSpec) -> Result<Automaton, VerifyError> {
    check_alphabets(a, p)?;
    let pd = &p.dfa;
    let to_pattern: Vec<_> = a
        .alphabet()
        .ids()
        .map(|e| {
            pd.alphabet()
                .find(a.alphabet().name(e))
                .expect("alphabets checked")
        })
        .collect();

    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let p0 = p.initial();
    for x in a.initial() {
        index.insert((x, p0), pairs.len());
        pairs.push((x, p0));
    }
    let mut edges = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (x, y) = pairs[next];
        for (e, x2) in a.successors(x) {
            let Some(y2) = pd.step(y, to_pattern[e.index()]) else {
                continue;
            };
            let id = *index.entry((x2, y2)).or_insert_with(|| {
                pairs.push((x2, y2));
                pairs.len() - 1
            });
            edges.push((next, e, id));
        }
        next += 1;
    }

    let name = |&(x, y): &(usize, usize)| format!("({},{})", a.state_name(x), pd.state_name(y));
    let names: Vec<String> = pairs.iter().map(name).collect();
    let mut b = Automaton::builder()
        .events(a.alphabet().events().iter().cloned())
        .states(names.iter().cloned())
        .initial(a.initial().iter().map(|x| names[index[&(x, p0)]].clone()))
        .secret(
            pairs
                .iter()
                .zip(&names)
                .filter(|((_, y), _)| p.marked().contains(*y))
                .map(|(_, n)| n.clone()),
        );
    for (from, e, to) in edges {
        b = b.transition(names[from].clone(), a.alphabet().name(e), names[to].clone());
    }
    Ok(b.build().expect("product is well formed"))
}

/// Which pattern property to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Instant,
    Trajectory,
}

impl PatternKind {
    pub fn property(self) -> Property {
        match self {
            PatternKind::Instant => Property::PatternInstant,
            PatternKind::Trajectory => Property::PatternTrajectory,
        }
    }
}

/// Pattern pre-opacity through the product with the completed pattern.
/// The witness estimate ranges over product states; observations use the
/// system's events.
pub fn verify_pattern_with_options(
    a: &Automaton,
    p: &PatternSpec,
    k: u64,
    kind: PatternKind,
    opts: &VerifyOptions,
) -> Result<Verdict, VerifyError> {
    crate::verifier::require_live(a)?;
    let prod = product(a, &complete_pattern_dfa(p))?;
    let an = Analysis::with_options(&prod, opts)?;
    let mut v = match kind {
        PatternKind::Instant => an.instant(k),
        PatternKind::Trajectory => an.trajectory(k),
    };
    v.property = kind.property();
    Ok(v)
}

/// K-step instant pattern pre-opacity.
pub fn verify_pattern_instant(
    a: &Automaton,
    p: &PatternSpec,
    k: u64,
) -> Result<Verdict, VerifyError> {
    verify_pattern_with_options(a, p, k, PatternKind::Instant, &VerifyOptions::default())
}

/// K-step trajectory pattern pre-opacity.
pub fn verify_pattern_trajectory(
    a: &Automaton,
    p: &PatternSpec,
    k: u64,
) -> Result<Verdict, VerifyError> {
    verify_pattern_with_options(a, p, k, PatternKind::Trajectory, &VerifyOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::vec;

    fn single_state_pattern(a: &Automaton, marked: bool, total: bool) -> PatternSpec {
        let mut b = Automaton::builder()
            .events(a.alphabet().events().iter().cloned())
            .state("p")
            .initial(["p"])
            .with_marked_set();
        if marked {
            b = b.marked(["p"]);
        }
        if total {
            for e in a.alphabet().events() {
                b = b.transition("p", e.name.as_str(), "p");
            }
        }
        PatternSpec::new(b.build().unwrap()).unwrap()
    }

    #[test]
    fn completion_of_total_is_identity() {
        let p = fixtures::factory_pattern();
        assert!(p.is_total());
        assert_eq!(complete_pattern_dfa(&p), p);
    }

    #[test]
    fn completion_adds_absorbing_dump() {
        let g = fixtures::g1();
        let p = single_state_pattern(&g, true, false);
        let c = complete_pattern_dfa(&p);
        assert!(c.is_total());
        assert_eq!(c.dfa().state_count(), 2);
        let dump = c.dfa().state("dump").unwrap();
        assert!(!c.marked().contains(dump));
        for e in c.dfa().alphabet().ids() {
            assert_eq!(c.dfa().step(0, e), Some(dump));
            assert_eq!(c.dfa().step(dump, e), Some(dump));
        }
        // only the empty string stays marked
        assert!(c.accepts(&[]));
        assert!(!c.accepts(&[crate::EventId(0)]));
    }

    #[test]
    fn factory_product_secret_states() {
        let prod = product(&fixtures::factory(), &fixtures::factory_pattern()).unwrap();
        let secret: Vec<_> = prod.secret().iter().map(|x| prod.state_name(x)).collect();
        assert_eq!(secret, vec!["(6,F)", "(8,H)"]);
        assert!(prod.is_live());
    }

    #[test]
    fn factory_pattern_verdicts() {
        let a = fixtures::factory();
        let p = fixtures::factory_pattern();
        assert!(verify_pattern_instant(&a, &p, 2).unwrap().holds);
        assert!(verify_pattern_trajectory(&a, &p, 2).unwrap().holds);
        let v = verify_pattern_instant(&a, &p, 1).unwrap();
        assert!(!v.holds);
        assert_eq!(v.property, Property::PatternInstant);
        assert!(!verify_pattern_trajectory(&a, &p, 1).unwrap().holds);
    }

    #[test]
    fn marking_everything_or_nothing() {
        let g = fixtures::g1();
        let all = single_state_pattern(&g, true, true);
        let prod = product(&g, &all).unwrap();
        assert_eq!(prod.secret(), &prod.all_states());
        let v = verify_pattern_trajectory(&g, &all, 0).unwrap();
        assert!(!v.holds);
        assert!(v.witness.unwrap().observation.is_empty());

        let none = single_state_pattern(&g, false, true);
        assert!(product(&g, &none).unwrap().secret().is_empty());
        for k in 0..5 {
            assert!(verify_pattern_instant(&g, &none, k).unwrap().holds);
            assert!(verify_pattern_trajectory(&g, &none, k).unwrap().holds);
        }
    }

    #[test]
    fn sub_alphabet_pattern_rejected() {
        let g = fixtures::g1();
        let p = Automaton::builder()
            .observable("a")
            .state("p")
            .initial(["p"])
            .marked(["p"])
            .transition("p", "a", "p")
            .build()
            .unwrap();
        let err = product(&g, &PatternSpec::new(p).unwrap()).unwrap_err();
        assert!(
            matches!(err, VerifyError::AlphabetMismatch { ref missing, .. } if missing.len() == 3)
        );
    }

    #[test]
    fn pattern_needs_single_initial() {
        let p = Automaton::builder()
            .observable("a")
            .states(["p", "q"])
            .initial(["p", "q"])
            .marked(["p"])
            .build()
            .unwrap();
        assert_eq!(
            PatternSpec::new(p),
            Err(VerifyError::PatternInitial { found: 2 })
        );
    }
}
