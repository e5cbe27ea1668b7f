//! The `fournet` command-line tool.
//!
//! Exit codes: 0 success, 1 invalid input or failed run, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::Config;
use crate::decision::{decide, ranked_options, Decision, DecisionPolicy};
use crate::estimators::{estimate_network, DefaultEstimators};
use crate::io::{self, IoError, RunManifest};
use crate::sequence::{efficiency, most_balanced, pareto_frontier, security, PossessionSequence};
use crate::simulate::{
    monte_carlo_compare, run_trials, Parallelism, Rollout, SimulationConfig, StyleReport,
};
use crate::state::MatchState;
use crate::style::LinearStyle;

#[derive(Debug, Parser)]
#[command(
    name = "fournet",
    version,
    about = "Shoot-or-pass decisions and possession simulation on 4-networks"
)]
struct Cli {
    /// TOML config file (falls back to $FOURNET_CONFIG, then built-in defaults).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide what the ball holder should do.
    Decide(DecideArgs),
    /// Simulate possessions from a state and write a sequence log.
    Simulate(SimulateArgs),
    /// Report efficiency and security of logged sequences.
    Analyze(LogArgs),
    /// Compare game styles by Monte Carlo simulation.
    Compare(CompareArgs),
    /// Efficiency/security Pareto frontier of logged sequences.
    Frontier(FrontierArgs),
    /// Regenerate an output from its run manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[arg(long)]
    state: PathBuf,
    /// Game style as x:y.
    #[arg(long, default_value = "1:1", value_parser = parse_style)]
    style: LinearStyle,
    #[arg(long)]
    threshold: Option<f64>,
    /// Also write the 4-network as a DOT graph.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value = "1:1", value_parser = parse_style)]
    style: LinearStyle,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    /// Sequence log path; a manifest is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated styles, e.g. 3:1,1:3,2:2.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_style)]
    styles: Vec<LinearStyle>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    /// Also write the report as CSV; a manifest is written next to it.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LogArgs {
    #[arg(long)]
    log: PathBuf,
}

#[derive(Debug, Args)]
struct FrontierArgs {
    #[arg(long)]
    log: PathBuf,
    /// Efficiency target for picking the most balanced sequence.
    #[arg(long, default_value_t = 0.8)]
    s_target: f64,
    /// Security target for picking the most balanced sequence.
    #[arg(long, default_value_t = 0.8)]
    p_target: f64,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn parse_style(s: &str) -> Result<LinearStyle, String> {
    s.parse()
        .map_err(|e: crate::error::ModelError| e.to_string())
}

/// Runs the tool on `argv` (including the program name).
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), IoError> {
    let config = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Decide(a) => cmd_decide(a, &config, cli.json, out),
        Command::Simulate(a) => cmd_simulate(a, &config, cli.json, out),
        Command::Analyze(a) => cmd_analyze(a, cli.json, out),
        Command::Compare(a) => cmd_compare(a, &config, cli.json, out),
        Command::Frontier(a) => cmd_frontier(a, cli.json, out),
        Command::Replay(a) => cmd_replay(a, out),
    }
}

fn load_config(explicit: Option<&Path>) -> Result<Config, IoError> {
    match Config::resolve_path(explicit) {
        None => Ok(Config::default()),
        Some(path) => {
            let text = io::read_file(&path)?;
            let text = String::from_utf8_lossy(&text);
            Config::from_toml(&text).map_err(|e| IoError::Invalid {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        }
    }
}

fn load_state(path: &Path) -> Result<(MatchState, Vec<u8>), IoError> {
    let bytes = io::read_file(path)?;
    let state = io::parse_match_state(&bytes).map_err(|e| match e {
        IoError::Invalid { path: p, message } => IoError::Invalid {
            path: format!("{}: {p}", path.display()),
            message,
        },
        other => other,
    })?;
    Ok((state, bytes))
}

fn sim_config(
    config: &Config,
    style: LinearStyle,
    threshold: Option<f64>,
    seed: u64,
) -> Result<SimulationConfig, IoError> {
    let policy = DecisionPolicy::new(style, threshold.unwrap_or(config.simulation.threshold))?
        .with_tie_break(config.simulation.tie_break);
    let mut cfg = SimulationConfig::new(policy, DefaultEstimators::new(config.estimators)?, seed);
    cfg.max_steps = config.simulation.max_steps;
    cfg.movement = config.simulation.movement;
    Ok(cfg)
}

fn parallelism(threads: usize) -> Parallelism {
    match threads {
        0 => Parallelism::Global,
        1 => Parallelism::Sequential,
        n => Parallelism::Threads(n),
    }
}

/// Up to six decimals, trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), IoError> {
    out.write_all(text.as_bytes())
        .map_err(|source| IoError::File {
            path: "<stdout>".into(),
            source,
        })
}

fn cmd_decide(
    a: &DecideArgs,
    config: &Config,
    as_json: bool,
    out: &mut dyn Write,
) -> Result<(), IoError> {
    let (state, _) = load_state(&a.state)?;
    let est = DefaultEstimators::new(config.estimators)?;
    let network = estimate_network(&state, &est)?;
    let policy = DecisionPolicy::new(a.style, a.threshold.unwrap_or(config.simulation.threshold))?
        .with_tie_break(config.simulation.tie_break);
    let decision = decide(&network, &policy);
    let ranked = ranked_options(&network, &policy);
    if let Some(dot) = &a.dot {
        io::write_atomic(dot, io::export_network_dot(&network).as_bytes())?;
    }
    if as_json {
        let decision_json = match decision {
            Decision::Shoot => json!({"type": "shoot"}),
            Decision::Pass {
                target,
                score,
                degenerate,
            } => json!({
                "type": "pass", "target": target.index(), "score": score, "degenerate": degenerate
            }),
        };
        let v = json!({
            "style": a.style.to_string(),
            "class": a.style.classify(),
            "threshold": policy.threshold(),
            "network": network,
            "decision": decision_json,
            "ranked": ranked.iter().map(|(j, s)| json!({"to": j.index(), "score": s})).collect::<Vec<_>>(),
        });
        return emit(out, &io::to_canonical_string(&v));
    }
    let mut text = format!(
        "holder {}  s={}  tau={}  style {} ({:?})  threshold {}\n",
        network.holder(),
        fmt_num(network.s()),
        fmt_num(network.tau()),
        a.style,
        a.style.classify(),
        fmt_num(policy.threshold())
    );
    match decision {
        Decision::Shoot => text.push_str("decision: shoot\n"),
        Decision::Pass {
            target,
            score,
            degenerate,
        } => {
            text.push_str(&format!(
                "decision: pass to {target} (score {})",
                fmt_num(score)
            ));
            if degenerate {
                text.push_str(" [degenerate: no teammate scores above zero]");
            }
            text.push('\n');
        }
    }
    text.push_str("\nrank  to    p         r   score\n");
    for (k, (j, score)) in ranked.iter().enumerate() {
        let e = network.edge(*j)?;
        text.push_str(&format!(
            "{:>4}  {:<4}  {:<8}  {:>2}  {}\n",
            k + 1,
            j.to_string(),
            fmt_num(e.p()),
            e.r(),
            fmt_num(*score)
        ));
    }
    emit(out, &text)
}

fn simulate_log(
    state: &MatchState,
    config: &Config,
    style: LinearStyle,
    threshold: Option<f64>,
    seed: u64,
    trials: u32,
    threads: usize,
) -> Result<Vec<Rollout>, IoError> {
    let cfg = sim_config(config, style, threshold, seed)?;
    Ok(run_trials(state, &cfg, 0, trials, parallelism(threads))?)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn cmd_simulate(
    a: &SimulateArgs,
    config: &Config,
    as_json: bool,
    out: &mut dyn Write,
) -> Result<(), IoError> {
    let (state, bytes) = load_state(&a.run.state)?;
    let rollouts = simulate_log(
        &state,
        config,
        a.style,
        a.run.threshold,
        a.run.seed,
        a.trials,
        a.run.threads,
    )?;
    let seqs: Vec<PossessionSequence> = rollouts.iter().map(|r| r.sequence.clone()).collect();
    if let Some(path) = &a.out {
        let manifest = RunManifest::new("simulate", *config, Some(a.run.seed))
            .arg("state", a.run.state.display())
            .arg("style", a.style)
            .arg(
                "threshold",
                a.run.threshold.unwrap_or(config.simulation.threshold),
            )
            .arg("trials", a.trials)
            .input(&a.run.state.display().to_string(), &bytes);
        io::write_atomic(path, io::serialize_sequence_log(&seqs).as_bytes())?;
        io::write_atomic(
            &manifest_path(path),
            io::to_canonical_string(&manifest).as_bytes(),
        )?;
    }
    let report = StyleReport::from_rollouts(a.style, &rollouts);
    if as_json {
        return emit(out, &io::to_canonical_string(&report));
    }
    let mut text = format!(
        "style {}  trials {}  seed {}\nmean efficiency {}  mean security {}  goal rate {}  mean length {}\n",
        a.style,
        a.trials,
        a.run.seed,
        fmt_num(report.mean_efficiency),
        fmt_num(report.mean_security),
        fmt_num(report.goal_rate),
        fmt_num(report.mean_length)
    );
    if let [q] = seqs.as_slice() {
        text.push('\n');
        text.push_str(&describe_sequence(q));
    }
    emit(out, &text)
}

fn describe_sequence(q: &PossessionSequence) -> String {
    let mut text = String::new();
    for (k, st) in q.steps().iter().enumerate() {
        let action = match st.decision() {
            Decision::Shoot => "shoot".to_string(),
            Decision::Pass { target, .. } => format!("pass to {target}"),
        };
        text.push_str(&format!(
            "{:>3}  {}  s={}  {}  -> {}\n",
            k + 1,
            st.network().holder(),
            fmt_num(st.network().s()),
            action,
            st.outcome()
        ));
    }
    text
}

fn load_log(path: &Path) -> Result<Vec<PossessionSequence>, IoError> {
    io::parse_sequence_log(&io::read_file(path)?)
}

fn cmd_analyze(a: &LogArgs, as_json: bool, out: &mut dyn Write) -> Result<(), IoError> {
    let seqs = load_log(&a.log)?;
    if as_json {
        let v: Vec<_> = seqs
            .iter()
            .map(|q| {
                json!({
                    "efficiency": efficiency(q),
                    "security": security(q),
                    "steps": q.len(),
                    "terminal": q.terminal_outcome().as_str(),
                })
            })
            .collect();
        return emit(out, &io::to_canonical_string(&v));
    }
    let mut text = String::from("seq  efficiency  security  steps  terminal\n");
    for (k, q) in seqs.iter().enumerate() {
        text.push_str(&format!(
            "{:>3}  {:<10}  {:<8}  {:>5}  {}\n",
            k,
            fmt_num(efficiency(q)),
            fmt_num(security(q)),
            q.len(),
            q.terminal_outcome()
        ));
    }
    emit(out, &text)
}

fn compare_reports(
    state: &MatchState,
    config: &Config,
    styles: &[LinearStyle],
    threshold: Option<f64>,
    seed: u64,
    trials: u32,
    threads: usize,
) -> Result<Vec<StyleReport>, IoError> {
    let base = sim_config(config, styles[0], threshold, seed)?;
    Ok(monte_carlo_compare(
        state,
        styles,
        trials,
        &base,
        parallelism(threads),
    )?)
}

pub fn reports_csv(reports: &[StyleReport]) -> String {
    let mut s =
        String::from("style,class,trials,mean_efficiency,mean_security,goal_rate,mean_length\n");
    for r in reports {
        s.push_str(&format!(
            "{},{:?},{},{},{},{},{}\n",
            r.style,
            r.class,
            r.trials,
            fmt_num(r.mean_efficiency),
            fmt_num(r.mean_security),
            fmt_num(r.goal_rate),
            fmt_num(r.mean_length)
        ));
    }
    s
}

fn cmd_compare(
    a: &CompareArgs,
    config: &Config,
    as_json: bool,
    out: &mut dyn Write,
) -> Result<(), IoError> {
    let (state, bytes) = load_state(&a.run.state)?;
    let reports = compare_reports(
        &state,
        config,
        &a.styles,
        a.run.threshold,
        a.run.seed,
        a.trials,
        a.run.threads,
    )?;
    if let Some(path) = &a.csv {
        let styles: Vec<String> = a.styles.iter().map(ToString::to_string).collect();
        let manifest = RunManifest::new("compare", *config, Some(a.run.seed))
            .arg("state", a.run.state.display())
            .arg("styles", styles.join(","))
            .arg(
                "threshold",
                a.run.threshold.unwrap_or(config.simulation.threshold),
            )
            .arg("trials", a.trials)
            .input(&a.run.state.display().to_string(), &bytes);
        io::write_atomic(path, reports_csv(&reports).as_bytes())?;
        io::write_atomic(
            &manifest_path(path),
            io::to_canonical_string(&manifest).as_bytes(),
        )?;
    }
    if as_json {
        return emit(out, &io::to_canonical_string(&reports));
    }
    let mut text = String::from("style  class       efficiency  security  goal_rate  length\n");
    for r in &reports {
        text.push_str(&format!(
            "{:<5}  {:<10}  {:<10}  {:<8}  {:<9}  {}\n",
            r.style.to_string(),
            format!("{:?}", r.class),
            fmt_num(r.mean_efficiency),
            fmt_num(r.mean_security),
            fmt_num(r.goal_rate),
            fmt_num(r.mean_length)
        ));
    }
    emit(out, &text)
}

fn cmd_frontier(a: &FrontierArgs, as_json: bool, out: &mut dyn Write) -> Result<(), IoError> {
    let seqs = load_log(&a.log)?;
    let front = pareto_frontier(&seqs)?;
    let balanced = most_balanced(&seqs, a.s_target, a.p_target)?;
    if as_json {
        let v = json!({"frontier": front, "most_balanced": balanced});
        return emit(out, &io::to_canonical_string(&v));
    }
    let mut text = String::from("seq  efficiency  security\n");
    for f in &front {
        text.push_str(&format!(
            "{:>3}  {:<10}  {}\n",
            f.index,
            fmt_num(f.s),
            fmt_num(f.p)
        ));
    }
    text.push_str(&format!(
        "most balanced for targets ({}, {}): seq {balanced}\n",
        fmt_num(a.s_target),
        fmt_num(a.p_target)
    ));
    emit(out, &text)
}

fn manifest_arg<'a>(m: &'a RunManifest, key: &str) -> Result<&'a str, IoError> {
    m.args
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| IoError::Invalid {
            path: format!("$.args.{key}"),
            message: "missing field".into(),
        })
}

fn parse_arg<T: std::str::FromStr>(m: &RunManifest, key: &str) -> Result<T, IoError> {
    manifest_arg(m, key)?.parse().map_err(|_| IoError::Invalid {
        path: format!("$.args.{key}"),
        message: "unparseable value".into(),
    })
}

fn cmd_replay(a: &ReplayArgs, out: &mut dyn Write) -> Result<(), IoError> {
    let m: RunManifest = serde_json::from_slice(&io::read_file(&a.manifest)?)?;
    m.config.validate()?;
    let state_path = PathBuf::from(manifest_arg(&m, "state")?);
    let (state, bytes) = load_state(&state_path)?;
    if let Some(digest) = m.inputs.get(&state_path.display().to_string()) {
        if *digest != io::sha256_hex(&bytes) {
            return Err(IoError::Invalid {
                path: state_path.display().to_string(),
                message: "input changed since the manifest was written".into(),
            });
        }
    }
    let seed = m.seed.unwrap_or(0);
    let threshold = Some(parse_arg::<f64>(&m, "threshold")?);
    let trials: u32 = parse_arg(&m, "trials")?;
    let contents = match m.command.as_str() {
        "simulate" => {
            let style = parse_arg::<LinearStyle>(&m, "style")?;
            {
                let rollouts = simulate_log(&state, &m.config, style, threshold, seed, trials, 0)?;
                let seqs: Vec<_> = rollouts.into_iter().map(|r| r.sequence).collect();
                io::serialize_sequence_log(&seqs)
            }
        }
        "compare" => {
            let styles = manifest_arg(&m, "styles")?
                .split(',')
                .map(str::parse)
                .collect::<Result<Vec<LinearStyle>, _>>()?;
            reports_csv(&compare_reports(
                &state, &m.config, &styles, threshold, seed, trials, 0,
            )?)
        }
        other => {
            return Err(IoError::Invalid {
                path: "$.command".into(),
                message: format!("cannot replay {other:?}"),
            })
        }
    };
    io::write_atomic(&a.out, contents.as_bytes())?;
    emit(out, &format!("wrote {}\n", a.out.display()))
}
