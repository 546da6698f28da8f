use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ggfront::config::{parse_config_with, RunConfig, MISSING_EXPERIMENT};
use ggfront::experiments::{self, builtin_names, epsilon_transition, refinement_study_with, InitialProfile, SweepSpec};
use ggfront::output;
use ggfront::{Error, Result};

/// Finite-volume runs of tumour invasion fronts.
#[derive(Parser)]
#[command(name = "ggfront", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write snapshots, speed series and report.
    Run(Common),
    /// Asymptotic speed over `sweep_values` of `sweep_parameter`.
    Sweep(Common),
    /// Relaxed-system speed and distance to the exact front per `epsilon_values`.
    Epsilon(Common),
    /// One-equation mesh refinement against the exact front over `meshes`.
    Refine(Common),
    /// List the builtin experiments.
    List,
}

#[derive(Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Also write a gnuplot script next to the CSVs.
    #[arg(long)]
    gnuplot: bool,
}

fn load(common: &Common, default_experiment: Option<&str>) -> Result<RunConfig> {
    let text = match &common.config {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.clone(),
            message: e.to_string(),
        })?,
        None => String::new(),
    };
    match (parse_config_with(&text, &common.set), default_experiment) {
        (Err(Error::UnknownExperiment(m)), Some(name)) if m == MISSING_EXPERIMENT => {
            let mut sets = vec![format!("experiment={name}")];
            sets.extend(common.set.iter().cloned());
            parse_config_with(&text, &sets)
        }
        (result, _) => result,
    }
}

fn output_dir(config: &RunConfig, fallback: &str) -> PathBuf {
    config
        .output_dir
        .clone()
        .unwrap_or_else(|| Path::new("ggfront-out").join(fallback))
}

fn run(common: &Common) -> Result<()> {
    let config = load(common, None)?;
    let result = experiments::run(&config.spec)?;
    let dir = output_dir(&config, &config.spec.name);
    let files = output::write_snapshots(&result, &dir)?;
    if common.gnuplot {
        output::write_gnuplot(&result, &dir)?;
    }
    print!("{}", output::report_text(&result));
    log::info!("wrote {} files to {}", files.len(), dir.display());
    Ok(())
}

fn sweep(common: &Common) -> Result<()> {
    let config = load(common, None)?;
    let parameter = config
        .sweep_parameter
        .ok_or_else(|| Error::InvalidSweep("`sweep_parameter` is not set".into()))?;
    let spec = SweepSpec {
        base: config.spec.clone(),
        parameter,
        values: config.sweep_values.clone(),
    };
    let rows = experiments::sweep(&spec)?;
    let csv = output::sweep_csv(parameter, &rows);
    output::write_table(&output_dir(&config, &config.spec.name), "sweep.csv", &csv)?;
    print!("{csv}");
    Ok(())
}

fn epsilon(common: &Common) -> Result<()> {
    let config = load(common, Some("epsilon_heterogeneous"))?;
    let rows = epsilon_transition(&config.epsilon_values, &config.spec)?;
    let csv = output::epsilon_csv(&rows);
    output::write_table(&output_dir(&config, "epsilon"), "epsilon.csv", &csv)?;
    print!("{csv}");
    Ok(())
}

fn refine(common: &Common) -> Result<()> {
    let config = load(common, Some("oneeq_heterogeneous"))?;
    let mut template = config.spec.clone();
    template.initial.profile = InitialProfile::ExactFront;
    let rows = refinement_study_with(&template, &config.meshes)?;
    let csv = output::refine_csv(&rows);
    output::write_table(&output_dir(&config, "refine"), "refine.csv", &csv)?;
    print!("{csv}");
    Ok(())
}

fn list() -> String {
    let names = builtin_names();
    let width = names.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (name, provenance) in names {
        let _ = writeln!(out, "{name:width$}  {provenance}");
    }
    out
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error kind=UsageError message={first}");
            return ExitCode::from(1);
        }
    };
    let outcome = match &cli.command {
        Command::Run(c) => run(c),
        Command::Sweep(c) => sweep(c),
        Command::Epsilon(c) => epsilon(c),
        Command::Refine(c) => refine(c),
        Command::List => {
            print!("{}", list());
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error kind={} message={message}", e.kind());
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
