//! `pcosim` — scenario runner and analysis CLI for pulse-coupled
//! oscillator networks.
//!
//! Subcommands:
//!
//! * `run`      — simulate a scenario file, write events/samples CSVs and a
//!   JSON report, exit 0 when all enabled checks pass, 2 on any violation,
//!   1 on configuration errors;
//! * `classify` — connectivity classification of a scenario's graph;
//! * `certify`  — contraction certification of oscillator profiles (from a
//!   scenario or an inline spec);
//! * `estimate` — Monte Carlo estimators for the contraction constant and
//!   the minimal first-firing delay.
//!
//! The output directory for `run` resolves in order: `--out`, the
//! `PCOSIM_OUT_DIR` environment variable, the scenario's `output_dir`
//! field, the current directory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pcosim::monitors::{
    contraction_window, estimate_contraction_epsilon, estimate_first_fire_delay, run_monitors,
    CheckStatus,
};
use pcosim::output::{build_report, write_events_csv, write_report_json, write_samples_csv};
use pcosim::{
    run, Error, NetworkConfig, OscillatorProfile, PhaseResponseCurve, ScenarioFile,
    DEFAULT_CERT_GRID,
};

const ENV_OUT_DIR: &str = "PCOSIM_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "pcosim",
    version,
    about = "Exact event-driven simulation of pulse-coupled oscillator networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write events CSV, samples CSV and a JSON
    /// report.
    Run(RunArgs),
    /// Report rootedness, strong connectivity, witness roots and isolated
    /// source groups of a scenario's graph.
    Classify {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Certify oscillator profiles against the delay-advance contraction
    /// bounds.
    Certify(CertifyArgs),
    /// Monte Carlo estimators over random initial conditions.
    Estimate(EstimateArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory (overrides PCOSIM_OUT_DIR and the scenario file).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the scenario's time horizon, in seconds.
    #[arg(long)]
    t_max: Option<f64>,
    /// Override the scenario's sampling interval, in seconds.
    #[arg(long)]
    sample_dt: Option<f64>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Certify every oscillator of a scenario file.
    #[arg(long, conflicts_with_all = ["kind", "gain"])]
    scenario: Option<PathBuf>,
    /// Inline PRC kind: sawtooth | triangle | negative_sine.
    #[arg(long, requires = "gain")]
    kind: Option<String>,
    /// Coupling gain for the inline spec.
    #[arg(long)]
    gain: Option<f64>,
    /// Override the PRC value at the discontinuity point pi.
    #[arg(long)]
    value_at_pi: Option<f64>,
    /// Certification grid size.
    #[arg(long, default_value_t = DEFAULT_CERT_GRID)]
    grid: usize,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(subcommand)]
    which: EstimateCommand,
}

#[derive(Subcommand)]
enum EstimateCommand {
    /// Empirical lower bound on the diameter drop over a window, for
    /// random initial diameters in [d1, d2].
    Contraction {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        d1: f64,
        #[arg(long)]
        d2: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Window length in seconds; defaults to 3T(N-1)/2.
        #[arg(long)]
        window: Option<f64>,
    },
    /// Empirical lower bound on the first-firing time of one oscillator
    /// started at least delta below 2 pi, with initial diameter below
    /// d_star.
    FirstFire {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        d_star: f64,
        /// Designated oscillator, 1-indexed.
        #[arg(long, default_value_t = 1)]
        osc: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Run(args) => cmd_run(args),
        Command::Classify { scenario } => cmd_classify(&scenario),
        Command::Certify(args) => cmd_certify(args),
        Command::Estimate(args) => cmd_estimate(args.which),
    }
}

fn load_config(path: &PathBuf) -> Result<(ScenarioFile, NetworkConfig), Error> {
    let scenario = ScenarioFile::from_path(path)?;
    let config = scenario.build_config()?;
    Ok((scenario, config))
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, Error> {
    let (scenario, config) = load_config(&args.scenario)?;
    let settings = scenario.monitor_settings()?;

    let mut stop = scenario.stop_rule();
    if let Some(t_max) = args.t_max {
        stop.t_max = Some(t_max);
    }
    let sample_dt = args.sample_dt.or(scenario.sample_dt);

    let out_dir = args
        .out
        .or_else(|| std::env::var_os(ENV_OUT_DIR).map(PathBuf::from))
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)?;

    let trace = run(&config, &stop, sample_dt)?;
    let monitors = run_monitors(&trace, &settings);

    let name = scenario.display_name();
    write_events_csv(&trace, &out_dir.join(format!("{name}_events.csv")))?;
    write_samples_csv(&trace, &out_dir.join(format!("{name}_samples.csv")))?;
    let report = build_report(name, &trace, monitors, settings.cert_grid);
    write_report_json(&report, &out_dir.join(format!("{name}_report.json")))?;

    println!(
        "{name}: {} events over {:.3} s ({})",
        trace.events().len(),
        trace.t_end(),
        report.termination
    );
    println!(
        "topology: rooted = {}, strongly connected = {}, roots = {:?}",
        report.topology.rooted, report.topology.strongly_connected, report.topology.roots
    );
    for cert in &report.certification {
        println!(
            "certification oscillator {}: {}",
            cert.oscillator,
            if cert.passed { "pass" } else { "FAIL" }
        );
    }
    let mut violated = false;
    for check in &report.monitors.checks {
        let verdict = match &check.status {
            CheckStatus::Pass => "pass".to_string(),
            CheckStatus::Fail => {
                violated = true;
                "FAIL".to_string()
            }
            CheckStatus::Skipped { reason } => format!("skipped ({reason})"),
        };
        println!("check {}: {verdict}", check.name);
    }
    match report.monitors.sync_time {
        Some(t) => println!("sync detected at {t:.6} s"),
        None => println!("sync not detected"),
    }

    Ok(ExitCode::from(if violated { 2 } else { 0 }))
}

fn cmd_classify(path: &PathBuf) -> Result<ExitCode, Error> {
    let scenario = ScenarioFile::from_path(path)?;
    let topology = scenario.build_topology()?;
    let roots: Vec<usize> = topology.roots().iter().map(|r| r + 1).collect();
    println!("rooted: {}", topology.is_rooted());
    println!("strongly_connected: {}", topology.is_strongly_connected());
    println!("roots: {roots:?}");
    let groups: Vec<Vec<usize>> = topology
        .isolated_source_groups()
        .iter()
        .map(|g| g.iter().map(|v| v + 1).collect())
        .collect();
    println!("isolated_source_groups: {groups:?}");
    Ok(ExitCode::from(0))
}

fn inline_profile(args: &CertifyArgs) -> Result<OscillatorProfile, Error> {
    let kind = args.kind.as_deref().unwrap_or_default();
    let mut prc = match kind {
        "sawtooth" => PhaseResponseCurve::sawtooth(),
        "triangle" => PhaseResponseCurve::triangle(),
        "negative_sine" => PhaseResponseCurve::negative_sine(),
        other => {
            return Err(Error::Config(format!(
                "unknown PRC kind `{other}` (expected sawtooth, triangle or negative_sine)"
            )))
        }
    };
    if let Some(v) = args.value_at_pi {
        prc = prc.with_value_at_pi(v);
    }
    OscillatorProfile::new(prc, args.gain.expect("clap enforces --gain"))
}

fn cmd_certify(args: CertifyArgs) -> Result<ExitCode, Error> {
    let profiles: Vec<(String, OscillatorProfile)> = if let Some(path) = &args.scenario {
        let (_, config) = load_config(path)?;
        config
            .profiles()
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("oscillator {}", i + 1), p.clone()))
            .collect()
    } else if args.kind.is_some() {
        vec![("profile".to_string(), inline_profile(&args)?)]
    } else {
        return Err(Error::Config(
            "pass --scenario PATH or an inline --kind/--gain spec".into(),
        ));
    };

    let mut failed = false;
    for (label, profile) in &profiles {
        let report = profile.certify(args.grid);
        let da = profile.prc().is_delay_advance(args.grid);
        if report.passed {
            println!(
                "{label}: pass (worst margin {:.6e} at theta {:.6}, delay-advance: {}, {} samples)",
                report.worst_margin, report.worst_theta, da.holds, report.samples_checked
            );
        } else {
            failed = true;
            let first = &report.violations[0];
            println!(
                "{label}: FAIL ({} violations; first at theta {:.6}, psi {:.6}, margin {:.6e})",
                report.violations.len(),
                first.theta,
                first.psi,
                first.margin
            );
        }
    }
    Ok(ExitCode::from(if failed { 2 } else { 0 }))
}

fn cmd_estimate(which: EstimateCommand) -> Result<ExitCode, Error> {
    match which {
        EstimateCommand::Contraction {
            scenario,
            d1,
            d2,
            samples,
            seed,
            window,
        } => {
            let (_, config) = load_config(&scenario)?;
            let window =
                window.unwrap_or_else(|| contraction_window(config.n(), config.period()));
            let estimate = estimate_contraction_epsilon(&config, d1, d2, samples, window, seed)?;
            println!(
                "contraction over window {:.6} s: min drop {:.6e} ({} samples, worst sample {}, seed {seed})",
                estimate.window, estimate.min_drop, estimate.samples, estimate.worst_sample
            );
            Ok(ExitCode::from(0))
        }
        EstimateCommand::FirstFire {
            scenario,
            delta,
            d_star,
            osc,
            samples,
            seed,
        } => {
            let (_, config) = load_config(&scenario)?;
            if osc == 0 || osc > config.n() {
                return Err(Error::Config(format!(
                    "oscillator {osc} out of range 1..={}",
                    config.n()
                )));
            }
            let estimate =
                estimate_first_fire_delay(&config, delta, d_star, osc - 1, samples, seed)?;
            println!(
                "first firing of oscillator {osc}: min {:.6e} s ({} samples, {} rejected draws, \
                 {} ordering violations, seed {seed})",
                estimate.min_first_fire, estimate.samples, estimate.rejected,
                estimate.ordering_violations
            );
            Ok(ExitCode::from(0))
        }
    }
}
