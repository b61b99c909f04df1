//! Command-line front end.
//!
//! Six subcommands cover the toolkit end to end: `design-q` sizes the
//! filter numerator, `analyze` runs the full robust-stability check,
//! `poles` exports eigenvalue loci against their asymptotic targets,
//! `simulate` integrates the linear loop, `simulate-nl` the nonlinear one,
//! and `compare-transient` sweeps the filter time constant and tabulates
//! recovery metrics.
//!
//! Contract: configs and reports are JSON, traces and tables are CSV,
//! progress goes to standard error, data to files or standard output.
//! Exit codes: 0 success, 1 bad config or numerical guard, 2 no feasible
//! filter gain, 3 stability condition failed, 4 divergence.

pub mod config;

use crate::analysis::{pole_asymptotics, verify_robust_stability, AsymptoticsTable, PoleClass};
use crate::error::{Error, Result};
use crate::linsim::simulate_linear;
use crate::nonlin::sim::{simulate_nonlinear, transient_tau_sweep};
use crate::qfilter::{design_a0, nyquist_disk_test_auto, DiskTestReport};
use crate::ss::closed_loop_statespace;
use crate::qfilter::q_transfer;
use crate::signal::SignalSpec;
use clap::{Args, Parser, Subcommand};
use config::{
    parse_tau_grid, read_json, AnalyzeConfig, DesignQConfig, LinearLoopConfig,
    NonlinearRunConfig, PolesConfig, SimulateConfig,
};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "dob",
    version,
    about = "Design and verification toolkit for disturbance-observer loops"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Size the Q-filter numerator: largest a0 passing the disk test
    DesignQ(DesignQArgs),
    /// Check the robust-stability conditions and sweep the closed loop
    Analyze(AnalyzeArgs),
    /// Export closed-loop eigenvalue loci with their asymptotic targets
    Poles(PolesArgs),
    /// Integrate the linear loop under reference, disturbance and noise
    Simulate(SimulateArgs),
    /// Integrate the nonlinear loop with its nominal co-simulation
    SimulateNl(SimulateNlArgs),
    /// Sweep the filter time constant and tabulate recovery metrics
    CompareTransient(CompareTransientArgs),
}

#[derive(Debug, Args)]
struct DesignQArgs {
    /// JSON config: {"gain": {...}, "nu": int, "a_tail": [...], "a0_initial": float}
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Report destination; standard output when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print the resolved config as JSON and exit without running
    #[arg(long)]
    emit_config: bool,
    /// Accepted for uniformity; this command is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Full JSON config; individual flags below override its fields
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Plant family JSON (alternative to --config)
    #[arg(long, value_name = "PATH")]
    family: Option<PathBuf>,
    /// Controller transfer function JSON
    #[arg(long, value_name = "PATH")]
    controller: Option<PathBuf>,
    /// Q-filter spec JSON
    #[arg(long, value_name = "PATH")]
    qfilter: Option<PathBuf>,
    /// Tau grid: "1e-1:1e-4:log10" or a comma list, strictly descending
    #[arg(long, value_name = "GRID")]
    tau_grid: Option<String>,
    /// Interior random samples on top of the vertex set
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for the interior samples
    #[arg(long)]
    seed: Option<u64>,
    /// Report destination; standard output when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also export per-sample pole loci as CSV (needs >= 3 grid points)
    #[arg(long, value_name = "PATH")]
    poles_csv: Option<PathBuf>,
    #[arg(long)]
    emit_config: bool,
}

#[derive(Debug, Args)]
struct PolesArgs {
    /// Full JSON config; individual flags below override its fields
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Plant sample JSON (alternative to --config)
    #[arg(long, value_name = "PATH")]
    plant: Option<PathBuf>,
    /// Nominal plant sample JSON
    #[arg(long, value_name = "PATH")]
    nominal: Option<PathBuf>,
    /// Controller transfer function JSON
    #[arg(long, value_name = "PATH")]
    controller: Option<PathBuf>,
    /// Q-filter spec JSON
    #[arg(long, value_name = "PATH")]
    qfilter: Option<PathBuf>,
    /// Tau sequence, at least 3 strictly descending values
    #[arg(long, value_name = "GRID")]
    tau_grid: Option<String>,
    /// CSV destination; standard output when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    emit_config: bool,
    /// Accepted for uniformity; this command is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Full JSON config; individual flags below override its fields
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Loop JSON: {"plant": tf, "nominal": tf, "controller": tf, "qfilter": spec}
    #[arg(long = "loop", value_name = "PATH")]
    loop_path: Option<PathBuf>,
    /// Reference signal JSON; zero when omitted
    #[arg(long, value_name = "PATH")]
    r: Option<PathBuf>,
    /// Input disturbance signal JSON; zero when omitted
    #[arg(long, value_name = "PATH")]
    d: Option<PathBuf>,
    /// Measurement noise signal JSON; zero when omitted
    #[arg(long, value_name = "PATH")]
    n: Option<PathBuf>,
    #[arg(long, value_name = "SECONDS")]
    t_end: Option<f64>,
    #[arg(long, value_name = "SECONDS")]
    dt: Option<f64>,
    /// Trace CSV destination; standard output when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    emit_config: bool,
    /// Accepted for uniformity; this command is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SimulateNlArgs {
    /// Run config: a benchmark reference and/or inline loop blocks
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Override the filter time constant from the config
    #[arg(long)]
    tau: Option<f64>,
    /// Trace CSV destination; standard output when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    emit_config: bool,
    /// Accepted for uniformity; this command is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct CompareTransientArgs {
    /// Run config: a benchmark reference and/or inline loop blocks
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Tau values to sweep, comma separated
    #[arg(long, value_name = "LIST")]
    tau_sweep: String,
    /// Sweep CSV destination; standard output when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    emit_config: bool,
    /// Accepted for uniformity; this command is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

/// Parses the process arguments, runs the selected command, and returns
/// the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Same as [`run`] but over explicit arguments, so tests can drive the
/// CLI in process.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version through this path with status 0
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::DesignQ(a) => cmd_design_q(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Poles(a) => cmd_poles(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::SimulateNl(a) => cmd_simulate_nl(a),
        Command::CompareTransient(a) => cmd_compare_transient(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoFeasibleA0 { .. } => 2,
        Error::Divergence { .. } => 4,
        _ => 1,
    }
}

fn note_unused_seed(seed: Option<u64>) {
    if seed.is_some() {
        eprintln!("note: --seed has no effect on this command");
    }
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn write_out(out: Option<&Path>, data: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, data)?,
        None => print!("{data}"),
    }
    Ok(())
}

fn csv_string(trace: &crate::trace::SimulationTrace) -> Result<String> {
    let mut buf = Vec::new();
    trace.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ascii"))
}

#[derive(Debug, Serialize)]
struct DesignQReport {
    a0: f64,
    disk: DiskTestReport,
}

fn cmd_design_q(args: DesignQArgs) -> Result<i32> {
    let cfg: DesignQConfig = read_json(&args.config)?;
    if args.emit_config {
        print!("{}", to_pretty(&cfg)?);
        return Ok(0);
    }
    note_unused_seed(args.seed);
    let a0 = design_a0(cfg.nu, &cfg.a_tail, &cfg.gain, cfg.a0_initial)?;
    let mut a = vec![a0];
    a.extend_from_slice(&cfg.a_tail);
    let disk = nyquist_disk_test_auto(cfg.nu, &a, &cfg.gain)?;
    eprintln!("designed a0 = {a0} (margin {:.4})", disk.min_distance);
    write_out(args.out.as_deref(), &to_pretty(&DesignQReport { a0, disk })?)?;
    Ok(0)
}

fn missing(field: &str) -> Error {
    Error::InvalidParameter {
        field: field.into(),
        reason: "required (pass the flag or provide it via --config)".into(),
    }
}

fn resolve_analyze(args: &AnalyzeArgs) -> Result<AnalyzeConfig> {
    let mut cfg: AnalyzeConfig = match &args.config {
        Some(path) => read_json(path)?,
        None => AnalyzeConfig {
            family: read_json(args.family.as_deref().ok_or_else(|| missing("family"))?)?,
            controller: read_json(
                args.controller.as_deref().ok_or_else(|| missing("controller"))?,
            )?,
            qfilter: read_json(args.qfilter.as_deref().ok_or_else(|| missing("qfilter"))?)?,
            tau_grid: parse_tau_grid(
                args.tau_grid.as_deref().ok_or_else(|| missing("tau-grid"))?,
            )?,
            samples: 200,
            seed: 7,
        },
    };
    if args.config.is_some() {
        if let Some(path) = &args.family {
            cfg.family = read_json(path)?;
        }
        if let Some(path) = &args.controller {
            cfg.controller = read_json(path)?;
        }
        if let Some(path) = &args.qfilter {
            cfg.qfilter = read_json(path)?;
        }
        if let Some(grid) = &args.tau_grid {
            cfg.tau_grid = parse_tau_grid(grid)?;
        }
    }
    if let Some(samples) = args.samples {
        cfg.samples = samples;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32> {
    let cfg = resolve_analyze(&args)?;
    if args.emit_config {
        print!("{}", to_pretty(&cfg)?);
        return Ok(0);
    }
    let samples = crate::family::sample_family(&cfg.family, cfg.samples, cfg.seed)?;
    eprintln!(
        "analyzing {} samples over {} tau values",
        samples.len(),
        cfg.tau_grid.len()
    );
    let pn = cfg.family.nominal();
    let report = verify_robust_stability(
        &cfg.family,
        &pn,
        &cfg.controller,
        &cfg.qfilter,
        &cfg.tau_grid,
        &samples,
    )?;

    if let Some(path) = &args.poles_csv {
        let mut csv = String::from(POLE_CSV_HEADER);
        for (sample_id, sample) in samples.iter().enumerate() {
            let table =
                pole_asymptotics(sample, &pn, &cfg.controller, &cfg.qfilter, &cfg.tau_grid)?;
            push_pole_rows(&mut csv, sample_id, &table);
        }
        std::fs::write(path, csv)?;
    }

    write_out(args.out.as_deref(), &to_pretty(&report)?)?;
    if report.conditions_hold() && report.sweep_clean() {
        Ok(0)
    } else {
        eprintln!("stability conditions not satisfied; see report");
        Ok(3)
    }
}

const POLE_CSV_HEADER: &str = "sample_id,tau,re,im,class,match_target,match_error\n";

fn fmt_complex(z: num_complex::Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

fn push_pole_rows(csv: &mut String, sample_id: usize, table: &AsymptoticsTable) {
    use std::fmt::Write;
    for row in &table.rows {
        let class = match row.class {
            PoleClass::Fast => "fast",
            PoleClass::Slow => "slow",
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            sample_id,
            row.tau,
            row.eigenvalue.re,
            row.eigenvalue.im,
            class,
            fmt_complex(row.target),
            row.error
        );
    }
}

fn resolve_poles(args: &PolesArgs) -> Result<PolesConfig> {
    let mut cfg: PolesConfig = match &args.config {
        Some(path) => read_json(path)?,
        None => PolesConfig {
            plant: read_json(args.plant.as_deref().ok_or_else(|| missing("plant"))?)?,
            nominal: read_json(args.nominal.as_deref().ok_or_else(|| missing("nominal"))?)?,
            controller: read_json(
                args.controller.as_deref().ok_or_else(|| missing("controller"))?,
            )?,
            qfilter: read_json(args.qfilter.as_deref().ok_or_else(|| missing("qfilter"))?)?,
            tau_grid: parse_tau_grid(
                args.tau_grid.as_deref().ok_or_else(|| missing("tau-grid"))?,
            )?,
        },
    };
    if args.config.is_some() {
        if let Some(grid) = &args.tau_grid {
            cfg.tau_grid = parse_tau_grid(grid)?;
        }
    }
    Ok(cfg)
}

fn cmd_poles(args: PolesArgs) -> Result<i32> {
    let cfg = resolve_poles(&args)?;
    if args.emit_config {
        print!("{}", to_pretty(&cfg)?);
        return Ok(0);
    }
    note_unused_seed(args.seed);
    let table = pole_asymptotics(
        &cfg.plant,
        &cfg.nominal,
        &cfg.controller,
        &cfg.qfilter,
        &cfg.tau_grid,
    )?;
    let mut csv = String::from(POLE_CSV_HEADER);
    push_pole_rows(&mut csv, 0, &table);
    write_out(args.out.as_deref(), &csv)?;
    Ok(0)
}

fn read_signal(path: Option<&Path>) -> Result<SignalSpec> {
    match path {
        Some(p) => read_json(p),
        None => Ok(SignalSpec::Zero),
    }
}

fn resolve_simulate(args: &SimulateArgs) -> Result<SimulateConfig> {
    let mut cfg: SimulateConfig = match &args.config {
        Some(path) => read_json(path)?,
        None => SimulateConfig {
            loop_def: read_json(args.loop_path.as_deref().ok_or_else(|| missing("loop"))?)?,
            r: read_signal(args.r.as_deref())?,
            d: read_signal(args.d.as_deref())?,
            n: read_signal(args.n.as_deref())?,
            t_end: args.t_end.ok_or_else(|| missing("t-end"))?,
            dt: args.dt.ok_or_else(|| missing("dt"))?,
        },
    };
    if args.config.is_some() {
        if let Some(path) = &args.loop_path {
            cfg.loop_def = read_json(path)?;
        }
        if let Some(path) = &args.r {
            cfg.r = read_json(path)?;
        }
        if let Some(path) = &args.d {
            cfg.d = read_json(path)?;
        }
        if let Some(path) = &args.n {
            cfg.n = read_json(path)?;
        }
        if let Some(t) = args.t_end {
            cfg.t_end = t;
        }
        if let Some(dt) = args.dt {
            cfg.dt = dt;
        }
    }
    Ok(cfg)
}

fn cmd_simulate(args: SimulateArgs) -> Result<i32> {
    let cfg = resolve_simulate(&args)?;
    if args.emit_config {
        print!("{}", to_pretty(&cfg)?);
        return Ok(0);
    }
    note_unused_seed(args.seed);
    let LinearLoopConfig {
        plant,
        nominal,
        controller,
        qfilter,
    } = &cfg.loop_def;
    let loop_ss = closed_loop_statespace(plant, nominal, controller, &q_transfer(qfilter)?)?;
    eprintln!(
        "integrating {} states for {} s at dt = {}",
        loop_ss.order(),
        cfg.t_end,
        cfg.dt
    );
    let trace = simulate_linear(&loop_ss, &cfg.r, &cfg.d, &cfg.n, cfg.t_end, cfg.dt)?;
    write_out(args.out.as_deref(), &csv_string(&trace)?)?;
    Ok(0)
}

fn cmd_simulate_nl(args: SimulateNlArgs) -> Result<i32> {
    let mut cfg: NonlinearRunConfig = read_json(&args.config)?;
    if let Some(tau) = args.tau {
        cfg.tau = Some(tau);
    }
    if args.emit_config {
        print!("{}", to_pretty(&cfg)?);
        return Ok(0);
    }
    note_unused_seed(args.seed);
    let run = cfg.resolve()?;
    let b = &run.bench;
    eprintln!(
        "integrating nonlinear loop: tau = {}, dt = {}, t_end = {}",
        b.params.qspec.tau, run.dt, b.t_end
    );
    let trace = simulate_nonlinear(
        &b.plant,
        &b.nominal,
        &b.controller,
        &b.params,
        &b.envelope,
        &b.x0z0eta0,
        &b.dob0,
        b.t_end,
        run.dt,
    )?;
    write_out(args.out.as_deref(), &csv_string(&trace)?)?;
    Ok(0)
}

fn cmd_compare_transient(args: CompareTransientArgs) -> Result<i32> {
    let cfg: NonlinearRunConfig = read_json(&args.config)?;
    let taus = parse_tau_grid(&args.tau_sweep)?;
    if args.emit_config {
        print!("{}", to_pretty(&cfg)?);
        return Ok(0);
    }
    note_unused_seed(args.seed);
    let run = cfg.resolve()?;
    let b = &run.bench;
    eprintln!("sweeping {} tau values to t_end = {}", taus.len(), b.t_end);
    let metrics = transient_tau_sweep(
        &b.plant,
        &b.nominal,
        &b.controller,
        &b.params,
        &b.envelope,
        &b.x0z0eta0,
        &b.dob0,
        b.t_end,
        &taus,
    )?;
    let mut csv = String::from("tau,sup_dev,sup_u_err,max_abs_u,z_max\n");
    {
        use std::fmt::Write;
        for m in &metrics {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                m.tau, m.sup_dev, m.sup_u_err, m.max_abs_u, m.z_max
            );
        }
    }
    write_out(args.out.as_deref(), &csv)?;
    Ok(0)
}
