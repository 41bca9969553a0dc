//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Verdict comparisons are exact.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use preopa::campaign::{self, params_for_seed};
use preopa::model::load;
use preopa_core::indicator::{indicator_sequence, n_k_set, non_indicator_set, reach_exact};
use preopa_core::oracle::{
    generate_random, generate_random_pattern, oracle_k_step_opacity, oracle_pattern, Bounded,
    GeneratorParams, OracleBudget,
};
use preopa_core::pattern::product;
use preopa_core::verifier::{VerifyOptions, Window};
use preopa_core::{
    build_observer, verify_current_state_opacity, verify_instant, verify_pattern_instant,
    verify_pattern_trajectory, verify_trajectory, Analysis, Automaton, EventId, PatternKind,
    PatternSpec, StateSet, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn model(name: &str) -> Automaton {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    load(Path::new(&p)).unwrap_or_else(|e| panic!("{e}"))
}

fn set(a: &Automaton, names: &[&str]) -> StateSet {
    a.states_named(names).expect("known state names")
}

fn holds(v: Result<Verdict, preopa_core::VerifyError>) -> Result<bool, String> {
    v.map(|v| v.holds).map_err(|e| e.to_string())
}

fn running_example() -> Check {
    let a = model("g1.json");
    ensure(
        holds(verify_current_state_opacity(&a))?,
        "not current-state opaque",
    )?;
    let k1 = oracle_k_step_opacity(&a, 1, &OracleBudget::for_k(1));
    ensure(!k1.value.holds, "bounded oracle finds it 1-step opaque")?;
    for k in 0..=10 {
        ensure(
            holds(verify_instant(&a, k))?,
            format!("instant fails at K={k}"),
        )?;
    }
    ensure(!holds(verify_trajectory(&a, 1))?, "trajectory holds at K=1")?;
    ensure(!holds(verify_trajectory(&a, 2))?, "trajectory holds at K=2")?;
    ensure(holds(verify_trajectory(&a, 3))?, "trajectory fails at K=3")
}

fn revealing_variant() -> Check {
    let a = model("g2.json");
    let v = verify_instant(&a, 1).map_err(|e| e.to_string())?;
    ensure(!v.holds, "instant holds at K=1")?;
    let w = v.witness.ok_or("no witness")?;
    ensure(
        w.observation == a.alphabet().resolve(&["c"]).unwrap(),
        "witness is not `c`",
    )?;
    for k in 2..=10 {
        ensure(
            holds(verify_instant(&a, k))?,
            format!("instant fails at K={k}"),
        )?;
    }
    Ok(())
}

fn indicator_table() -> Check {
    let a = model("g1.json");
    let seq = indicator_sequence(&a, 1 << 10);
    let expect = [
        set(&a, &["4", "7"]),
        set(&a, &["2", "5"]),
        set(&a, &["3"]),
        set(&a, &["1"]),
    ];
    for (n, e) in expect.iter().enumerate() {
        ensure(seq.get(n as u64) == Some(e), format!("I_{n} differs"))?;
    }
    for n in 4..64 {
        ensure(
            seq.get(n).is_some_and(|s| s.is_empty()),
            format!("I_{n} not empty"),
        )?;
    }
    ensure(non_indicator_set(&a) == set(&a, &["6"]), "N differs")?;
    ensure(
        n_k_set(&a, 2) == set(&a, &["2", "4", "5", "6", "7"]),
        "N_2 differs",
    )?;
    ensure(
        n_k_set(&a, 3) == set(&a, &["0", "2", "3", "4", "5", "6", "7"]),
        "N_3 differs",
    )
}

fn opaque_now_but_predictable() -> Check {
    let a = model("cso_not_instant.json");
    ensure(
        holds(verify_current_state_opacity(&a))?,
        "not current-state opaque",
    )?;
    ensure(!holds(verify_instant(&a, 0))?, "0-step instant pre-opaque")
}

fn coprime_cycles() -> Check {
    let a = model("coprime_cycles.json");
    let an = Analysis::new(&a).map_err(|e| e.to_string())?;
    for k in 0..=35 {
        ensure(!an.instant(k).holds, format!("instant holds at K={k}"))?;
    }
    let n = an.instant(0).witness.ok_or("no witness")?.instant;
    ensure(n == 30, format!("smallest violating instant is {n}"))
}

fn factory_pattern() -> Check {
    let a = model("factory.json");
    let p = PatternSpec::new(model("factory_pattern.json")).map_err(|e| e.to_string())?;
    ensure(
        holds(verify_pattern_instant(&a, &p, 2))?,
        "instant fails at K=2",
    )?;
    ensure(
        !holds(verify_pattern_instant(&a, &p, 1))?,
        "instant holds at K=1",
    )?;
    ensure(
        holds(verify_pattern_trajectory(&a, &p, 2))?,
        "trajectory fails at K=2",
    )?;
    ensure(
        !holds(verify_pattern_trajectory(&a, &p, 1))?,
        "trajectory holds at K=1",
    )?;
    let prod = product(&a, &p).map_err(|e| e.to_string())?;
    let secret: Vec<&str> = prod.secret().iter().map(|x| prod.state_name(x)).collect();
    ensure(
        secret == ["(6,F)", "(8,H)"],
        format!("product secret set {secret:?}"),
    )
}

fn corpus() -> Vec<(u64, Automaton)> {
    (0..200)
        .map(|seed| (seed, generate_random(&params_for_seed(seed, 5, 4)).unwrap()))
        .collect()
}

fn differential_campaign() -> Check {
    let mut bad = Vec::new();
    let mut total = 0;
    for (seed, a) in corpus() {
        ensure(
            a.state_count() <= 5 && a.alphabet().len() <= 4 && a.is_live(),
            "corpus out of range",
        )?;
        for row in campaign::compare(seed, &a, 3).map_err(|e| e.to_string())? {
            total += 1;
            if !row.agree {
                bad.push(format!("seed {} {} K={}", row.seed, row.property, row.k));
            }
        }
    }
    ensure(total == 200 * 4 * 2, format!("{total} comparisons"))?;
    ensure(
        bad.is_empty(),
        format!("{} disagreements: {:?}", bad.len(), bad),
    )
}

fn implication_lattice() -> Check {
    for (seed, a) in corpus() {
        let an = Analysis::new(&a).map_err(|e| e.to_string())?;
        let cso = holds(verify_current_state_opacity(&a))?;
        for k in 0..=3 {
            let (i, t) = (an.instant(k).holds, an.trajectory(k).holds);
            ensure(
                !t || i,
                format!("seed {seed}: trajectory without instant at K={k}"),
            )?;
            ensure(
                !i || an.instant(k + 1).holds,
                format!("seed {seed}: instant not monotone at K={k}"),
            )?;
            ensure(
                !t || an.trajectory(k + 1).holds,
                format!("seed {seed}: trajectory not monotone at K={k}"),
            )?;
        }
        ensure(
            !an.instant(0).holds || cso,
            format!("seed {seed}: instant(0) without CSO"),
        )?;
        ensure(
            !an.trajectory(0).holds || cso,
            format!("seed {seed}: trajectory(0) without CSO"),
        )?;
    }
    Ok(())
}

fn saturation() -> Check {
    for (seed, a) in corpus() {
        let an = Analysis::new(&a).map_err(|e| e.to_string())?;
        let b = an.saturation_bound();
        ensure(
            an.instant(b).holds == an.instant(b + 5).holds,
            format!("seed {seed}: verdict changes after bound {b}"),
        )?;
    }
    Ok(())
}

fn full_observability() -> Check {
    let single = VerifyOptions {
        window: Window::SingleStep,
        ..Default::default()
    };
    let general = VerifyOptions {
        window: Window::General,
        ..Default::default()
    };
    for seed in 0..100u64 {
        let mut p = params_for_seed(seed, 6, 4);
        p.observable_fraction = 1.0;
        let a = generate_random(&p).unwrap();
        ensure(
            !a.alphabet().has_unobservable(),
            "unobservable event generated",
        )?;
        let s = Analysis::with_options(&a, &single).map_err(|e| e.to_string())?;
        let g = Analysis::with_options(&a, &general).map_err(|e| e.to_string())?;
        for k in 0..=4 {
            ensure(
                s.instant(k).holds == g.instant(k).holds,
                format!("seed {seed}: windows differ at K={k}"),
            )?;
        }
    }
    Ok(())
}

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

fn pattern_reduction() -> Check {
    let mut bad = Vec::new();
    for seed in 0..50u64 {
        let mut params = params_for_seed(seed, 5, 3);
        params.seed = 10_000 + seed;
        let a = generate_random(&params).unwrap();
        let pn = (20 / a.state_count()).min(4);
        let p = generate_random_pattern(&a, pn, 0.4, 0.7, seed).unwrap();
        ensure(
            a.state_count() * p.dfa().state_count() <= 20,
            "pair too large",
        )?;
        for k in 0..=3 {
            for kind in [PatternKind::Instant, PatternKind::Trajectory] {
                let alg = match kind {
                    PatternKind::Instant => verify_pattern_instant(&a, &p, k),
                    PatternKind::Trajectory => verify_pattern_trajectory(&a, &p, k),
                };
                let alg = holds(alg)?;
                let o = pattern_oracle(&a, &p, k, kind);
                if !o.complete || o.value.holds != alg {
                    bad.push(format!("seed {seed} {kind:?} K={k}"));
                }
            }
        }
    }
    ensure(
        bad.is_empty(),
        format!("{} disagreements: {:?}", bad.len(), bad),
    )
}

fn observer_shape() -> Check {
    let a = model("g1.json");
    let obs = build_observer(&a).map_err(|e| e.to_string())?;
    let named = |names: &[&str]| set(&a, names);
    let ev = |n: &str| a.alphabet().find(n).unwrap();
    let expected: Vec<(StateSet, EventId, StateSet)> = vec![
        (named(&["0"]), ev("a"), named(&["2", "3"])),
        (named(&["2", "3"]), ev("b"), named(&["4", "5"])),
        (named(&["4", "5"]), ev("c"), named(&["6", "7"])),
        (named(&["6", "7"]), ev("a"), named(&["6"])),
        (named(&["6", "7"]), ev("b"), named(&["6"])),
        (named(&["6"]), ev("a"), named(&["6"])),
    ];
    let mut got: Vec<(StateSet, EventId, StateSet)> = obs
        .transitions()
        .map(|(x, e, y)| (obs.state(x).clone(), e, obs.state(y).clone()))
        .collect();
    let mut want = expected;
    got.sort();
    want.sort();
    ensure(obs.len() == 5, format!("{} observer states", obs.len()))?;
    ensure(
        obs.state(obs.initial()) == &named(&["0"]),
        "initial estimate",
    )?;
    ensure(got == want, "transition structure differs")
}

// all states reached by some defined word of length exactly n
fn brute_reach(a: &Automaton, q: &StateSet, n: usize) -> StateSet {
    let mut frontier: Vec<(usize, usize)> = q.iter().map(|x| (x, 0)).collect();
    let mut out = a.empty_set();
    while let Some((x, d)) = frontier.pop() {
        if d == n {
            out.insert(x);
            continue;
        }
        for e in a.alphabet().ids() {
            if let Some(y) = a.step(x, e) {
                frontier.push((y, d + 1));
            }
        }
    }
    out
}

fn operator_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for probe in 0..1000 {
        let mut p = GeneratorParams::new(
            rng.random_range(1..=6),
            rng.random_range(1..=3),
            rng.random(),
        );
        p.secret_fraction = rng.random_range(0.1..0.8);
        let a = generate_random(&p).unwrap();
        let q = StateSet::from_members(
            a.state_count(),
            (0..a.state_count()).filter(|_| rng.random_bool(0.5)),
        );
        let (n, k) = (rng.random_range(0..6usize), rng.random_range(0..6usize));
        ensure(
            reach_exact(&a, &q, n + k) == reach_exact(&a, &reach_exact(&a, &q, k), n),
            format!("probe {probe}: composition"),
        )?;
        ensure(
            brute_reach(&a, &q, n) == reach_exact(&a, &q, n),
            format!("probe {probe}: R_n"),
        )?;
        let seq = indicator_sequence(&a, 1 << 12);
        let ind = seq
            .get(n as u64)
            .ok_or("indicator sequence did not repeat")?;
        for x in 0..a.state_count() {
            let sure =
                brute_reach(&a, &StateSet::singleton(a.state_count(), x), n).is_subset(a.secret());
            ensure(
                ind.contains(x) == sure,
                format!("probe {probe}: indicator membership of {x}"),
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("running example verdicts", running_example),
        (
            "revealing variant: instant violated at K=1 by `c`, holds for K=2..10",
            revealing_variant,
        ),
        (
            "running example indicator table, N, N_2, N_3",
            indicator_table,
        ),
        (
            "current-state opaque but not 0-step instant pre-opaque",
            opaque_now_but_predictable,
        ),
        (
            "coprime cycles: violated for K=0..35, first instant 30",
            coprime_cycles,
        ),
        (
            "factory pattern verdicts and product secret set",
            factory_pattern,
        ),
        (
            "differential campaign: 200 seeds, K=0..3, zero disagreements",
            differential_campaign,
        ),
        (
            "implication lattice on the campaign corpus",
            implication_lattice,
        ),
        ("saturation: verdict at bound equals bound+5", saturation),
        (
            "fully observable: single-instant window equals general window",
            full_observability,
        ),
        (
            "pattern reduction vs pattern oracle: 50 pairs, zero disagreements",
            pattern_reduction,
        ),
        ("running example observer structure", observer_shape),
        (
            "operator identities over 1000 random probes",
            operator_identities,
        ),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
