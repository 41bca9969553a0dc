//! Differential campaigns: algorithmic verdicts against the reference
//! oracle on seeded random automata, written as CSV.

use std::io::Write;

use preopa_core::oracle::{
    generate_random, oracle_instant, oracle_trajectory, Bounded, GeneratorParams, OracleBudget,
};
use preopa_core::{Analysis, Automaton, Verdict, VerifyError};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignParams {
    pub first_seed: u64,
    pub seeds: u64,
    pub max_states: usize,
    pub max_events: usize,
    pub max_k: u64,
}

impl Default for CampaignParams {
    fn default() -> Self {
        Self {
            first_seed: 0,
            seeds: 200,
            max_states: 5,
            max_events: 4,
            max_k: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignRow {
    pub seed: u64,
    pub states: usize,
    pub property: String,
    pub k: u64,
    pub algorithm: String,
    pub oracle: String,
    pub agree: bool,
}

fn label(v: &Verdict) -> String {
    if v.holds { "holds" } else { "violated" }.into()
}

/// Generator settings for one seed: sizes cycle through `1..=max`.
pub fn params_for_seed(seed: u64, max_states: usize, max_events: usize) -> GeneratorParams {
    let n = 1 + (seed % max_states as u64) as usize;
    let m = 1 + ((seed / max_states as u64) % max_events as u64) as usize;
    let mut p = GeneratorParams::new(n, m, seed);
    p.transition_density = 0.5;
    p
}

// Retries with a wide instant budget when the default one ran out.
fn oracle<F>(k: u64, f: F) -> Bounded<Verdict>
where
    F: Fn(&OracleBudget) -> Bounded<Verdict>,
{
    let first = f(&OracleBudget::for_k(k));
    if first.complete {
        return first;
    }
    f(&OracleBudget {
        max_instant: k + 4096,
        ..OracleBudget::for_k(k)
    })
}

pub fn compare(seed: u64, a: &Automaton, max_k: u64) -> Result<Vec<CampaignRow>, VerifyError> {
    let an = Analysis::new(a)?;
    let mut rows = Vec::new();
    for k in 0..=max_k {
        let pairs = [
            (an.instant(k), oracle(k, |b| oracle_instant(a, k, b))),
            (an.trajectory(k), oracle(k, |b| oracle_trajectory(a, k, b))),
        ];
        for (alg, orc) in pairs {
            rows.push(CampaignRow {
                seed,
                states: a.state_count(),
                property: alg.property.to_string(),
                k,
                algorithm: label(&alg),
                oracle: if orc.complete {
                    label(&orc.value)
                } else {
                    "incomplete".into()
                },
                agree: orc.complete && alg.holds == orc.value.holds,
            });
        }
    }
    Ok(rows)
}

pub fn run(params: &CampaignParams) -> Result<Vec<CampaignRow>, VerifyError> {
    let mut rows = Vec::new();
    for seed in params.first_seed..params.first_seed + params.seeds {
        let p = params_for_seed(seed, params.max_states, params.max_events);
        let a = generate_random(&p).expect("campaign parameters are feasible");
        rows.extend(compare(seed, &a, params.max_k)?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[CampaignRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaign_agrees() {
        let rows = run(&CampaignParams {
            seeds: 10,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(rows.len(), 10 * 4 * 2);
        assert!(rows.iter().all(|r| r.agree));
        let mut buf = Vec::new();
        write_csv(&rows[..1], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("seed,states,property,k,algorithm,oracle,agree\n0,1,"));
    }
}
