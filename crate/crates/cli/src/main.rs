// SPDX-License-Identifier: Apache-2.0

//! `lattice-optics`: batch runner for tight-binding splitter experiments.
//!
//! Every subcommand writes one table (CSV by default) preceded by a
//! provenance header. A TOML file given with `--config` overrides flags.

mod config;
mod error;
mod experiments;
mod grid;
mod output;

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{ConfigFile, Format, Params};
use error::CliError;
use experiments::Experiment;
use output::Provenance;

/// Env var naming the default output directory.
const OUT_DIR_ENV: &str = "LATTICE_OPTICS_OUT";

#[derive(Parser, Debug)]
#[command(name = "lattice-optics", version, about = "Quantum-walk splitter experiments on tight-binding chains")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Default)]
struct Common {
    /// TOML config; its values override flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file, `-` for stdout [default: $LATTICE_OPTICS_OUT/<experiment>.<format>]
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Worker threads for grid scans
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Add a timestamp to the provenance header
    #[arg(long, global = true)]
    timestamp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// |R|, |T| and arg(R/T) against time
    RtCurve(Params),
    /// 50/50 impurity strength and transfer time over a length grid
    Calibrate(Params),
    /// Two-particle correlation map at one time
    CorrelationMap(Params),
    /// End-site correlators P_1L, P_11, P_LL against time
    Hom(Params),
    /// Optimized bosonic bunching against interaction strength
    BunchingTransition(Params),
    /// Weak-interaction variation of the bunching peak
    WeakU(Params),
    /// Interferometer routing against the step phase
    MachZehnder(Params),
    /// Jacobi-Anger coefficients c_m
    CmTable(Params),
    /// Analytic modes against the numerical spectrum
    AnalyticCheck(Params),
    /// Splitting imbalance under smeared impurities, walls or curvature
    Imperfections(Params),
    /// Three-boson probe over the third particle's start site
    ThreeBody(Params),
    /// Run the experiment named in the config file
    Run,
}

impl Command {
    fn split(self) -> (Option<Experiment>, Params) {
        use Command::*;
        let (e, p) = match self {
            RtCurve(p) => (Experiment::RtCurve, p),
            Calibrate(p) => (Experiment::Calibrate, p),
            CorrelationMap(p) => (Experiment::CorrelationMap, p),
            Hom(p) => (Experiment::Hom, p),
            BunchingTransition(p) => (Experiment::BunchingTransition, p),
            WeakU(p) => (Experiment::WeakU, p),
            MachZehnder(p) => (Experiment::MachZehnder, p),
            CmTable(p) => (Experiment::CmTable, p),
            AnalyticCheck(p) => (Experiment::AnalyticCheck, p),
            Imperfections(p) => (Experiment::Imperfections, p),
            ThreeBody(p) => (Experiment::ThreeBody, p),
            Run => return (None, Params::default()),
        };
        (Some(e), p)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help, --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Config(e.render().to_string().trim().to_string());
            eprintln!("{}", err.record(None));
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let mut name = None;
    match execute(cli, &mut name) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record(name.as_deref()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli, name: &mut Option<String>) -> Result<(), CliError> {
    let (sub, flags) = cli.command.split();
    let file = match &cli.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let from_file = match file.experiment.as_deref() {
        Some(n) => Some(Experiment::from_name(n).ok_or_else(|| CliError::Config(format!("unknown experiment '{n}'")))?),
        None => None,
    };
    let experiment = match (sub, from_file) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Config(format!(
                "config names experiment {} but the subcommand is {}",
                b.name(),
                a.name()
            )))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(CliError::Config("run needs a config file with an experiment key".into())),
    };
    *name = Some(experiment.name().to_string());

    let params = flags.overlay(&file.params);
    let format = file.format.or(cli.common.format).unwrap_or_default();
    let out = file.output.clone().or(cli.common.out.clone());
    let timestamp = file.timestamp.unwrap_or(cli.common.timestamp);
    if let Some(n) = file.workers.or(cli.common.workers) {
        if n == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    }

    let artifact = experiment.run(&params)?;
    let prov = Provenance {
        experiment: experiment.name().to_string(),
        config: json!({ "format": format.extension(), "params": params.echo() }),
        resolved: artifact.resolved.clone(),
        timestamp: timestamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())),
    };

    let target = out.unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
        dir.join(format!("{}.{}", experiment.name(), format.extension()))
    });
    if target.as_os_str() == "-" {
        match output::write(io::stdout().lock(), format, &prov, &artifact) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        }
    } else {
        if let Some(dir) = target.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        let f = File::create(&target).map_err(|e| CliError::Io(format!("{}: {e}", target.display())))?;
        output::write(BufWriter::new(f), format, &prov, &artifact)
            .map_err(|e| CliError::Io(format!("{}: {e}", target.display())))?;
        eprintln!("{}", json!({ "wrote": target.display().to_string(), "rows": artifact.table.rows.len() }));
    }
    Ok(())
}
