use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use preopa::campaign::{self, CampaignParams};
use preopa::dot::{observer_dot, set_label};
use preopa::model::{self, ModelDocument, ModelFileError};
use preopa::report;
use preopa_core::oracle::{generate_random, GeneratorParams};
use preopa_core::pattern::{complete_pattern_dfa, product, verify_pattern_with_options};
use preopa_core::verifier::{verify_current_state_opacity_capped, VerifyOptions};
use preopa_core::{Analysis, PatternKind, PatternSpec, VerifyError};
use serde::Serialize;

const OBSERVER_CAP_VAR: &str = "PREOPA_OBSERVER_CAP";
const MAX_K: u64 = (1 << 31) - 1;

#[derive(Parser)]
#[command(
    name = "preopa",
    version,
    about = "Pre-opacity verification for partially observed automata"
)]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file for structural errors and liveness.
    Validate { model: PathBuf },
    /// Decide a state-based property.
    Verify {
        model: PathBuf,
        #[arg(long, value_enum)]
        property: StateProperty,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_K))]
        k: Option<u64>,
    },
    /// Decide a pattern property through the product construction.
    PatternVerify {
        model: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, value_enum)]
        property: PatternProperty,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_K))]
        k: u64,
        /// Write the product model to this file.
        #[arg(long)]
        dump_product: Option<PathBuf>,
    },
    /// Print the observer (estimates without unobservable tail).
    Observer {
        model: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Print the indicator sequence, the non-indicator set and optionally N_K.
    Indicators {
        model: PathBuf,
        #[arg(long)]
        upto: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_K))]
        k: Option<u64>,
    },
    /// Emit a seeded random model.
    GenRandom {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        events: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.6)]
        observable_fraction: f64,
        #[arg(long, default_value_t = 0.3)]
        secret_fraction: f64,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        /// Allow states without outgoing transitions.
        #[arg(long)]
        allow_dead: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare algorithmic verdicts with the reference oracle; CSV output.
    Campaign {
        #[arg(long, default_value_t = 200)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=12))]
        max_states: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=8))]
        max_events: u64,
        #[arg(long, default_value_t = 3)]
        max_k: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StateProperty {
    Instant,
    Trajectory,
    Cso,
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternProperty {
    Instant,
    Trajectory,
}

enum Failure {
    Usage(String),
    Input(String),
    Cap(String),
}

impl From<ModelFileError> for Failure {
    fn from(e: ModelFileError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::ObserverCap { .. } | VerifyError::IndicatorCap { .. } => {
                Failure::Cap(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// 0 holds, 1 violated.
type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (2, m),
                Failure::Input(m) => (2, m),
                Failure::Cap(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn options() -> Result<VerifyOptions, Failure> {
    let mut opts = VerifyOptions::default();
    if let Ok(v) = std::env::var(OBSERVER_CAP_VAR) {
        opts.observer_cap = v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{OBSERVER_CAP_VAR} must be a non-negative integer, got `{v}`"
            ))
        })?;
    }
    Ok(opts)
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        );
    } else {
        print!("{}", text());
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { model } => validate(cli.json, model),
        Command::Verify { model, property, k } => verify(cli.json, model, *property, *k),
        Command::PatternVerify {
            model,
            pattern,
            property,
            k,
            dump_product,
        } => pattern_verify(
            cli.json,
            model,
            pattern,
            *property,
            *k,
            dump_product.as_deref(),
        ),
        Command::Observer { model, dot } => observer(cli.json, model, *dot),
        Command::Indicators { model, upto, k } => indicators(cli.json, model, *upto, *k),
        Command::GenRandom {
            states,
            events,
            seed,
            observable_fraction,
            secret_fraction,
            density,
            allow_dead,
            output,
        } => {
            let params = GeneratorParams {
                state_count: *states,
                event_count: *events,
                observable_fraction: *observable_fraction,
                secret_fraction: *secret_fraction,
                transition_density: *density,
                seed: *seed,
                require_live: !allow_dead,
            };
            let a = generate_random(&params).map_err(|e| Failure::Usage(e.to_string()))?;
            let doc = ModelDocument::from_automaton(&a, Some(format!("random model, seed {seed}")));
            write_out(output.as_deref(), doc.to_json().as_bytes())?;
            Ok(true)
        }
        Command::Campaign {
            seeds,
            first_seed,
            max_states,
            max_events,
            max_k,
            output,
        } => {
            let rows = campaign::run(&CampaignParams {
                first_seed: *first_seed,
                seeds: *seeds,
                max_states: *max_states as usize,
                max_events: *max_events as usize,
                max_k: *max_k,
            })?;
            let mut buf = Vec::new();
            campaign::write_csv(&rows, &mut buf).map_err(|e| Failure::Input(e.to_string()))?;
            write_out(output.as_deref(), &buf)?;
            let bad = rows.iter().filter(|r| !r.agree).count();
            eprintln!("{} comparisons, {bad} disagreements", rows.len());
            Ok(bad == 0)
        }
    }
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ValidateJson {
    deterministic: bool,
    live: bool,
    dead_states: Vec<String>,
    diagnostics: Vec<model::PositionedDiagnostic>,
}

fn validate(json: bool, path: &Path) -> Outcome {
    let doc = ModelDocument::read(path)?;
    let report = doc.report();
    let diagnostics = match doc.to_automaton(path) {
        Ok(_) => Vec::new(),
        Err(ModelFileError::Invalid { diagnostics, .. }) => diagnostics,
        Err(e) => return Err(e.into()),
    };
    let out = ValidateJson {
        deterministic: report.deterministic,
        live: report.live,
        dead_states: report
            .dead_states
            .iter()
            .map(|x| doc.states[x].clone())
            .collect(),
        diagnostics,
    };
    emit(json, &out, || {
        let mut s = String::new();
        for d in &out.diagnostics {
            s.push_str(&format!("{}: {d}\n", path.display()));
        }
        s.push_str(&format!("deterministic: {}\n", out.deterministic));
        s.push_str(&format!("live: {}\n", out.live));
        if !out.dead_states.is_empty() {
            s.push_str(&format!("dead states: {}\n", out.dead_states.join(", ")));
        }
        s
    });
    if !out.diagnostics.is_empty() {
        return Err(Failure::Input(format!("{}: invalid model", path.display())));
    }
    Ok(out.live)
}

fn verify(json: bool, path: &Path, property: StateProperty, k: Option<u64>) -> Outcome {
    let a = model::load(path)?;
    let opts = options()?;
    let v = match property {
        StateProperty::Cso => verify_current_state_opacity_capped(&a, opts.observer_cap)?,
        StateProperty::Instant | StateProperty::Trajectory => {
            let k = k.ok_or_else(|| {
                Failure::Usage("--k is required for instant and trajectory".into())
            })?;
            let an = Analysis::with_options(&a, &opts)?;
            if matches!(property, StateProperty::Instant) {
                an.instant(k)
            } else {
                an.trajectory(k)
            }
        }
    };
    emit(json, &report::to_json(&a, &a, &v), || {
        report::to_text(&a, &a, &v)
    });
    Ok(v.holds)
}

fn pattern_verify(
    json: bool,
    path: &Path,
    pattern_path: &Path,
    property: PatternProperty,
    k: u64,
    dump: Option<&Path>,
) -> Outcome {
    let a = model::load(path)?;
    let p = PatternSpec::new(model::load(pattern_path)?)?;
    let opts = options()?;
    let prod = product(&a, &complete_pattern_dfa(&p))?;
    if let Some(out) = dump {
        let doc = ModelDocument::from_automaton(
            &prod,
            Some("product of system and completed pattern".into()),
        );
        write_out(Some(out), doc.to_json().as_bytes())?;
    }
    let kind = match property {
        PatternProperty::Instant => PatternKind::Instant,
        PatternProperty::Trajectory => PatternKind::Trajectory,
    };
    let v = verify_pattern_with_options(&a, &p, k, kind, &opts)?;
    emit(json, &report::to_json(&a, &prod, &v), || {
        report::to_text(&a, &prod, &v)
    });
    Ok(v.holds)
}

#[derive(Serialize)]
struct ObserverJson {
    states: Vec<Vec<String>>,
    transitions: Vec<(usize, String, usize)>,
}

fn observer(json: bool, path: &Path, dot: bool) -> Outcome {
    let a = model::load(path)?;
    let obs = preopa_core::observer::build_observer_capped(&a, options()?.observer_cap)?;
    if dot {
        print!("{}", observer_dot(&a, &obs));
        return Ok(true);
    }
    let out = ObserverJson {
        states: obs.states().iter().map(|q| report::names(&a, q)).collect(),
        transitions: obs
            .transitions()
            .map(|(x, e, y)| (x, a.alphabet().name(e).to_string(), y))
            .collect(),
    };
    emit(json, &out, || {
        let mut s = String::new();
        for (i, q) in obs.states().iter().enumerate() {
            s.push_str(&format!("q{i} {}\n", set_label(&a, q)));
        }
        for (x, e, y) in &out.transitions {
            s.push_str(&format!("q{x} -{e}-> q{y}\n"));
        }
        s
    });
    Ok(true)
}

#[derive(Serialize)]
struct IndicatorsJson {
    indicators: Vec<Vec<String>>,
    cycle_start: usize,
    cycle_length: usize,
    non_indicator: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_k: Option<Vec<String>>,
}

fn indicators(json: bool, path: &Path, upto: Option<u64>, k: Option<u64>) -> Outcome {
    let a = model::load(path)?;
    let an = Analysis::with_options(&a, &options()?)?;
    let seq = an.indicators();
    let cycle = seq.cycle().expect("analysis guarantees a cycle");
    let last = upto.unwrap_or((seq.sets().len() - 1) as u64);
    let sets: Vec<_> = (0..=last)
        .map(|n| seq.get(n).expect("cycle resolves every index"))
        .collect();
    let out = IndicatorsJson {
        indicators: sets.iter().map(|q| report::names(&a, q)).collect(),
        cycle_start: cycle.start,
        cycle_length: cycle.length,
        non_indicator: report::names(&a, an.non_indicator()),
        n_k: k.map(|k| report::names(&a, &an.n_k(k))),
    };
    emit(json, &out, || {
        let mut s = String::new();
        for (n, q) in sets.iter().enumerate() {
            s.push_str(&format!("I_{n} = {}\n", set_label(&a, q)));
        }
        s.push_str(&format!(
            "I_{} = I_{} (periodic from {} with period {})\n",
            cycle.start + cycle.length,
            cycle.start,
            cycle.start,
            cycle.length
        ));
        s.push_str(&format!("N = {}\n", set_label(&a, an.non_indicator())));
        if let Some(k) = k {
            s.push_str(&format!("N_{k} = {}\n", set_label(&a, &an.n_k(k))));
        }
        s
    });
    Ok(true)
}
