use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boehmian_cli::config::{ConfigError, RunConfig};
use boehmian_cli::report::{write_csv, Counts};
use boehmian_cli::scene::Scene;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "boehmian", about = "Run numerical checks on Boehmians and gluing scenes")]
struct Cli {
    /// JSON file with run settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated suite ids.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long = "grid-h")]
    grid_h: Option<f64>,
    /// Record per-suite wall time in the report.
    #[arg(long)]
    timings: bool,
    /// List registered suites and exit.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Glue the sections of a scene file and check the restriction contracts.
    Scene {
        path: PathBuf,
        /// Output directory for glued.json and report.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if !cli.suite.is_empty() {
        cfg.suites = cli.suite.clone();
    }
    if let Some(o) = &cli.out {
        cfg.output = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(h) = cli.horizon {
        cfg.horizon = h;
    }
    if let Some(h) = cli.grid_h {
        cfg.grid_h = h;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_counts(label: &str, c: &Counts) {
    println!(
        "{label}: {} cases, {} verified, {} refuted, {} inconclusive, {} errors",
        c.cases, c.verified, c.refuted, c.inconclusive, c.errors
    );
}

fn run_scene(path: &Path, out: Option<&PathBuf>) -> ExitCode {
    let scene = match Scene::from_file(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = scene.run();
    let json = serde_json::to_string_pretty(&outcome).expect("serializable outcome");
    match out {
        Some(dir) => {
            let written = std::fs::create_dir_all(dir)
                .and_then(|_| std::fs::write(dir.join("glued.json"), json + "\n"))
                .and_then(|_| write_csv(std::fs::File::create(dir.join("report.csv"))?, 0, &outcome.rows));
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => {
            println!("{json}");
            let _ = write_csv(std::io::stdout().lock(), 0, &outcome.rows);
        }
    }
    for r in outcome.rows.iter().filter(|r| r.message.is_some()) {
        eprintln!("{} {}: {}", r.suite, r.case_id, r.message.as_deref().unwrap_or_default());
    }
    ExitCode::from(outcome.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(Command::Scene { path, out }) = &cli.command {
        return run_scene(path, out.as_ref());
    }
    if cli.list {
        for (id, _) in boehmian_cli::suites::SUITES {
            println!("{id}");
        }
        return ExitCode::SUCCESS;
    }
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (rows, summary) = boehmian_cli::run(&cfg, cli.timings);
    if let Err(e) = boehmian_cli::report::write_all(&cfg.output, cfg.seed, &rows, &summary) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    for s in &summary.suites {
        print_counts(&s.id, &s.counts);
    }
    print_counts("total", &summary.totals);
    for r in rows.iter().filter(|r| r.message.is_some()) {
        eprintln!("{} {}: {}", r.suite, r.case_id, r.message.as_deref().unwrap_or_default());
    }
    for r in rows.iter().filter(|r| r.status == boehmian_cli::report::RowStatus::Refuted) {
        eprintln!("refuted: {} {} residual {:e}", r.suite, r.case_id, r.max_residual);
    }
    println!("report written to {}", cfg.output.display());
    ExitCode::from(summary.exit_code as u8)
}
