use preopa_core::indicator::indicator_sequence;
use preopa_core::oracle::{
    generate_random, generate_random_pattern, oracle_estimate, oracle_instant, oracle_pattern,
    oracle_trajectory, Bounded, GeneratorParams, OracleBudget, PatternKind,
};
use preopa_core::pattern::{complete_pattern_dfa, product};
use preopa_core::verifier::{VerifyOptions, Window};
use preopa_core::{
    build_observer, estimate, verify_current_state_opacity, verify_pattern_instant,
    verify_pattern_trajectory, Analysis, Automaton, EventId, PatternSpec, Verdict,
};
use proptest::prelude::*;

fn params(n: usize, m: usize, seed: u64) -> GeneratorParams {
    let mut p = GeneratorParams::new(n, m, seed);
    p.transition_density = 0.5;
    p
}

fn automaton(max_states: usize, max_events: usize) -> impl Strategy<Value = Automaton> {
    (1..=max_states, 1..=max_events, any::<u64>(), 0.0f64..=1.0).prop_map(|(n, m, seed, obs)| {
        let mut p = params(n, m, seed);
        p.observable_fraction = obs;
        generate_random(&p).unwrap()
    })
}

fn system_and_pattern() -> impl Strategy<Value = (Automaton, PatternSpec)> {
    (
        1usize..=5,
        1usize..=3,
        1usize..=4,
        any::<u64>(),
        0.3f64..=1.0,
    )
        .prop_map(|(n, m, pn, seed, dens)| {
            let a = generate_random(&params(n, m, seed)).unwrap();
            let pn = pn.min(20 / n).max(1);
            let p = generate_random_pattern(&a, pn, 0.4, dens, seed ^ 0x5eed).unwrap();
            (a, p)
        })
}

// the product configuration space can outgrow the default instant budget
fn pattern_oracle(a: &Automaton, p: &PatternSpec, k: u64, kind: PatternKind) -> Bounded<Verdict> {
    let o = oracle_pattern(a, p, k, kind, &OracleBudget::for_k(k));
    if o.complete {
        return o;
    }
    let wide = OracleBudget {
        max_instant: k + 4096,
        ..OracleBudget::for_k(k)
    };
    oracle_pattern(a, p, k, kind, &wide)
}

fn words_upto(a: &Automaton, len: usize) -> Vec<Vec<EventId>> {
    let obs: Vec<EventId> = a.alphabet().observable_by_name();
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for &e in &obs {
                let mut w2: Vec<EventId> = w.clone();
                w2.push(e);
                next.push(w2);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn observer_matches_string_enumeration(a in automaton(4, 3)) {
        let obs = build_observer(&a).unwrap();
        let len = obs.len().min(7);
        let budget = OracleBudget::for_k(0);
        for w in words_upto(&a, len) {
            let o = oracle_estimate(&a, &w, &budget);
            prop_assert!(o.complete);
            match estimate(&obs, &w) {
                Ok(q) => prop_assert_eq!(q, &o.value),
                Err(_) => prop_assert!(o.value.is_empty()),
            }
        }
    }

    #[test]
    fn verifier_agrees_with_oracle(a in automaton(5, 4)) {
        let an = Analysis::new(&a).unwrap();
        // the single-instant window decides correctly but may find a longer witness
        let general = Analysis::with_options(&a, &VerifyOptions { window: Window::General, ..Default::default() }).unwrap();
        for k in 0..=4u64 {
            let budget = OracleBudget::for_k(k);
            let o = oracle_instant(&a, k, &budget);
            prop_assert!(o.complete);
            prop_assert_eq!(&general.instant(k), &o.value, "instant K={}", k);
            prop_assert_eq!(an.instant(k).holds, o.value.holds);

            let tr = an.trajectory(k);
            let o = oracle_trajectory(&a, k, &budget);
            prop_assert!(o.complete);
            prop_assert_eq!(tr.holds, o.value.holds, "trajectory K={}", k);
            if let (Some(w1), Some(w2)) = (&tr.witness, &o.value.witness) {
                prop_assert_eq!(&w1.observation, &w2.observation);
                prop_assert_eq!(&w1.estimate, &w2.estimate);
                prop_assert!(w2.instant >= k);
            }
        }
    }

    #[test]
    fn implication_lattice(a in automaton(5, 4)) {
        let an = Analysis::new(&a).unwrap();
        let cso = verify_current_state_opacity(&a).unwrap().holds;
        for k in 0..=8u64 {
            let (i, t) = (an.instant(k).holds, an.trajectory(k).holds);
            prop_assert!(!t || i, "trajectory ⇒ instant at K={}", k);
            prop_assert!(!i || an.instant(k + 1).holds);
            prop_assert!(!t || an.trajectory(k + 1).holds);
        }
        prop_assert!(!an.instant(0).holds || cso);
        prop_assert!(!an.trajectory(0).holds || cso);
    }

    #[test]
    fn saturation(a in automaton(5, 4)) {
        let an = Analysis::new(&a).unwrap();
        let b = an.saturation_bound();
        prop_assert!(b < 1u64 << a.state_count());
        let v = an.instant(b).holds;
        for k in b..b + 6 {
            prop_assert_eq!(an.instant(k).holds, v);
        }
    }

    #[test]
    fn fully_observable_single_window(n in 1usize..=6, m in 1usize..=4, seed in any::<u64>()) {
        let mut p = params(n, m, seed);
        p.observable_fraction = 1.0;
        let a = generate_random(&p).unwrap();
        let single = Analysis::with_options(&a, &VerifyOptions { window: Window::SingleStep, ..Default::default() }).unwrap();
        let general = Analysis::with_options(&a, &VerifyOptions { window: Window::General, ..Default::default() }).unwrap();
        for k in 0..6 {
            prop_assert_eq!(single.instant(k).holds, general.instant(k).holds);
        }
    }

    #[test]
    fn witnesses_replay(a in automaton(5, 4), k in 0u64..6) {
        let an = Analysis::new(&a).unwrap();
        let obs = an.observer();
        let ins = an.instant(k);
        if let Some(w) = &ins.witness {
            prop_assert_eq!(estimate(obs, &w.observation).unwrap(), &w.estimate);
            prop_assert!(w.instant >= k);
            prop_assert!(w.estimate.is_subset(an.indicators().get(w.instant).unwrap()));
        }
        let tr = an.trajectory(k);
        if let Some(w) = &tr.witness {
            prop_assert_eq!(estimate(obs, &w.observation).unwrap(), &w.estimate);
            prop_assert_eq!(w.instant, k);
            prop_assert!(w.estimate.is_disjoint(&an.n_k(k)));
        }
        prop_assert_eq!(ins.witness.is_none(), ins.holds);
        prop_assert_eq!(tr.witness.is_none(), tr.holds);
    }

    #[test]
    fn pattern_reduction_agrees_with_oracle((a, p) in system_and_pattern(), k in 0u64..=3) {
        let ins = verify_pattern_instant(&a, &p, k).unwrap();
        let o = pattern_oracle(&a, &p, k, PatternKind::Instant);
        prop_assert!(o.complete);
        prop_assert_eq!(ins.holds, o.value.holds);
        let tr = verify_pattern_trajectory(&a, &p, k).unwrap();
        let o = pattern_oracle(&a, &p, k, PatternKind::Trajectory);
        prop_assert!(o.complete);
        prop_assert_eq!(tr.holds, o.value.holds);
    }

    #[test]
    fn product_language_and_secrecy((a, p) in system_and_pattern()) {
        let full = complete_pattern_dfa(&p);
        let prod = product(&a, &full).unwrap();
        let m = a.alphabet().len() as u32;
        let mut words = vec![Vec::new()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &words {
                for e in 0..m {
                    let mut w2: Vec<EventId> = w.clone();
                    w2.push(EventId(e));
                    next.push(w2);
                }
            }
            words.extend(next);
        }
        words.dedup();
        for w in &words {
            for x0 in a.initial() {
                let px0 = prod.state(&format!("({},{})", a.state_name(x0), full.dfa().state_name(full.initial()))).unwrap();
                let sys = a.run(x0, w);
                let pr = prod.run(px0, w);
                prop_assert_eq!(sys.is_some(), pr.is_some());
                if let (Some(x), Some(z)) = (sys, pr) {
                    let name = prod.state_name(z);
                    let prefix = format!("({},", a.state_name(x));
                    prop_assert!(name.starts_with(&prefix), "{} vs {}", name, prefix);
                    prop_assert_eq!(prod.secret().contains(z), p.accepts(w));
                }
            }
        }
    }
}

#[test]
fn indicator_cycle_bounds_the_window() {
    for seed in 0..50 {
        let a = generate_random(&params(5, 3, seed)).unwrap();
        let seq = indicator_sequence(&a, 1 << 12);
        let c = seq.cycle().unwrap();
        assert!(c.start + c.length <= 1 << 5);
    }
}
