//! Thin command-line front end; all logic lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qd_relay::sweep::{
    apply_preset, emit_outputs, parse_config, resolve_sweep, resolve_template, run_point,
    run_sweep, ConfigDoc, PresetName,
};
use qd_relay::validation::{run_validation, write_report};
use qd_relay::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qd-relay",
    version,
    about = "Quantum-dot photon-pair relay chains: sweeps, point diagnostics, self checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a two-axis parameter sweep and write CSV, JSON, and
    /// per-depth PPM heatmaps.
    Sweep {
        /// TOML configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Figure preset: fig2a | fig2b | fig2c (locks the published values).
        #[arg(long)]
        preset: Option<String>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Lattice points per axis (overrides the config).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Evaluate the configured fixed parameter point with the full
    /// diagnostic breakdown (mode overlap per measurement, κ per link,
    /// per-stage fidelities).
    Point {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the self-check suite and write validation_report.txt.
    Validate {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn parse_preset(name: &str) -> Result<PresetName> {
    match name {
        "fig2a" => Ok(PresetName::Fig2a),
        "fig2b" => Ok(PresetName::Fig2b),
        "fig2c" => Ok(PresetName::Fig2c),
        "custom" => Ok(PresetName::Custom),
        other => Err(Error::Config(format!(
            "unknown preset {other:?}; expected fig2a, fig2b, fig2c, or custom"
        ))),
    }
}

fn load_doc(config: &Option<PathBuf>, preset: &Option<String>) -> Result<ConfigDoc> {
    let mut doc = match config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => ConfigDoc::default(),
    };
    if let Some(name) = preset {
        apply_preset(&mut doc, parse_preset(name)?);
    }
    Ok(doc)
}

fn init_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("--threads must be ≥ 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn cmd_sweep(
    config: &Option<PathBuf>,
    preset: &Option<String>,
    out: &PathBuf,
    grid: Option<usize>,
) -> Result<()> {
    let doc = load_doc(config, preset)?;
    let spec = resolve_sweep(&doc, grid)?;
    let table = run_sweep(&spec)?;
    let written = emit_outputs(&table, out)?;
    println!(
        "swept {} × {} cells at depths {:?} ({} rows)",
        spec.axis1.values.len(),
        spec.axis2.values.len(),
        spec.depths,
        table.rows.len()
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_point(config: &Option<PathBuf>, preset: &Option<String>) -> Result<()> {
    let doc = load_doc(config, preset)?;
    let template = resolve_template(&doc)?;
    let results = run_point(&template, &doc.sweep.depths)?;
    for (depth, outcome, rate) in &results {
        println!("L = {depth}");
        println!("  fidelity        {:.9}", outcome.fidelity);
        println!("  success prob    {:.6e}", outcome.success_prob);
        println!("  pair rate       {:.6e} Hz", rate);
        println!("  transmission    {:.9}", outcome.transmission_product);
        for b in &outcome.bsm {
            println!(
                "  bsm layer {} #{}: overlap M = {:.9}, herald p = {:.9}, fidelity after = {:.9}",
                b.layer, b.index, b.mode_overlap, b.herald_prob, b.fidelity_after
            );
        }
        for (i, k) in outcome.link_kappas.iter().enumerate() {
            println!("  link {i}: κ = {k:.9}");
        }
        for (i, f) in outcome.per_layer_fidelity.iter().enumerate() {
            println!("  after layer {}: fidelity = {f:.9}", i + 1);
        }
        for w in &outcome.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}

fn cmd_validate(out: &PathBuf) -> Result<bool> {
    let report = run_validation()?;
    print!("{}", report.render());
    let path = write_report(&report, out)?;
    println!("wrote {}", path.display());
    Ok(report.all_passed())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Sweep {
            config,
            preset,
            out,
            threads,
            grid,
        } => {
            init_threads(*threads)?;
            cmd_sweep(config, preset, out, *grid)?;
            Ok(true)
        }
        Cmd::Point {
            config,
            preset,
            threads,
        } => {
            init_threads(*threads)?;
            cmd_point(config, preset)?;
            Ok(true)
        }
        Cmd::Validate { out, threads } => {
            init_threads(*threads)?;
            cmd_validate(out)
        }
    }
}

fn main() -> ExitCode {
    // Die silently when a pipeline reader closes stdout early (`point | head`)
    // instead of panicking on the broken pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
