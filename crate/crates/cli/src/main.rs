use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use itframe_cli::output::write_outputs;
use itframe_cli::{run, ExperimentConfig, Task};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "itframe", version, about = "Frames of irregular translates: certificates, bounds, duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `[output] dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run only this task (overrides `[tasks] run`).
        #[arg(long)]
        task: Option<String>,
    },
    /// Run every `*.toml` config in a directory.
    Corpus {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_FAILED_VERDICT: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn run_one(path: &Path, out: Option<PathBuf>, task: Option<String>) -> anyhow::Result<bool> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(t) = task {
        Task::parse_list(std::slice::from_ref(&t))?;
        cfg.tasks.run = vec![t];
    }
    let result = run(&cfg)?;
    let dir = out.or_else(|| cfg.output.dir.clone());
    if let Some(dir) = dir {
        write_outputs(&dir, &result.report, &result.artifacts, cfg.output.matrices)
            .with_context(|| format!("writing outputs to {}", dir.display()))?;
    } else {
        println!("{}", result.report.to_json());
    }
    for t in &result.report.tasks {
        eprintln!(
            "{:<12} {:?}{}",
            t.task,
            t.status,
            t.skip_reason.as_ref().map(|s| format!(" ({s})")).unwrap_or_default()
        );
    }
    Ok(!result.report.failed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, task } => match run_one(&config, out, task) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(EXIT_FAILED_VERDICT),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Command::Corpus { dir, out } => {
            let mut paths: Vec<PathBuf> = match std::fs::read_dir(&dir) {
                Ok(rd) => rd
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "toml"))
                    .collect(),
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", dir.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            paths.sort();
            let results: Vec<(PathBuf, anyhow::Result<bool>)> = paths
                .into_par_iter()
                .map(|p| {
                    let sub = out.as_ref().map(|o| o.join(p.file_stem().unwrap_or_default()));
                    let r = if let Some(sub) = sub {
                        run_one(&p, Some(sub), None)
                    } else {
                        ExperimentConfig::load(&p).and_then(|c| run(&c)).map(|r| !r.report.failed()).map_err(Into::into)
                    };
                    (p, r)
                })
                .collect();
            let mut code = ExitCode::SUCCESS;
            for (p, r) in results {
                match r {
                    Ok(true) => println!("PASS  {}", p.display()),
                    Ok(false) => {
                        println!("FAIL  {}", p.display());
                        code = ExitCode::from(EXIT_FAILED_VERDICT);
                    }
                    Err(e) => {
                        println!("ERROR {}: {e:#}", p.display());
                        code = ExitCode::from(EXIT_CONFIG);
                    }
                }
            }
            code
        }
    }
}
