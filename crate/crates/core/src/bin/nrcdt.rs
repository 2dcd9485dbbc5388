use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nrcdt::experiment::pipeline::{classify_dir, features_to_dir, generate_to_dir, report_csv};
use nrcdt::experiment::{
    load_config, run_experiment, run_phase_transition, selftest, write_csv, write_pgm, ExperimentConfig,
    SelftestOptions,
};
use nrcdt::nrcdt::FeatureKind;
use nrcdt::Error;

#[derive(Parser)]
#[command(name = "nrcdt", version, about = "Normalized Radon-CDT features and experiments")]
struct Cli {
    /// Experiment configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset directory of PGM images and a manifest.
    Gen,
    /// Extract features from a dataset directory.
    Features {
        #[arg(long)]
        input: PathBuf,
    },
    /// Nearest-template classification of a features directory.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "mnrcdt")]
        representation: String,
    },
    /// Run the configured accuracy table.
    Experiment,
    /// Run the salt-noise phase transition of the configured `[phase]` grid.
    Phase,
    /// Run the built-in invariant suites.
    Selftest {
        /// Override the degeneracy guard (0 disables it, a negative control).
        #[arg(long)]
        std_guard: Option<f64>,
    },
}

fn config(cli: &Cli) -> nrcdt::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.dataset.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> nrcdt::Result<bool> {
    let say = |msg: String| {
        if !cli.quiet {
            eprintln!("{msg}");
        }
    };
    match &cli.command {
        Command::Gen => {
            let n = generate_to_dir(&config(cli)?, &cli.out)?;
            say(format!("wrote {n} samples to {}", cli.out.display()));
        }
        Command::Features { input } => {
            let n = features_to_dir(&config(cli)?, input, &cli.out)?;
            say(format!("wrote features of {n} images to {}", cli.out.display()));
        }
        Command::Classify { input, representation } => {
            let cfg = config(cli)?;
            let kind: FeatureKind = representation.parse()?;
            let report = classify_dir(&cfg, input, kind)?;
            std::fs::create_dir_all(&cli.out)?;
            std::fs::write(cli.out.join("report.csv"), report_csv(&report, kind, &cfg.hash()))?;
            say(format!("{kind}: accuracy {:.4}", report.accuracy));
        }
        Command::Experiment => {
            let cfg = config(cli)?;
            let rows = run_experiment(&cfg)?;
            std::fs::create_dir_all(&cli.out)?;
            write_csv(&rows, cli.out.join("results.csv"))?;
            for r in &rows {
                say(format!(
                    "M={:<4} {:<10} {:<5} {:.4}",
                    r.angles, r.representation, r.metric, r.accuracy_mean
                ));
            }
        }
        Command::Phase => {
            let cfg = config(cli)?;
            let res = run_phase_transition(&cfg)?;
            std::fs::create_dir_all(&cli.out)?;
            std::fs::write(cli.out.join("phase.csv"), res.to_csv())?;
            let comment = format!("seed={} config={}", res.seed, res.config_hash);
            for (kind, m) in &res.accuracy {
                write_pgm(m, cli.out.join(format!("phase_{kind}.pgm")), 16, &comment)?;
            }
            say(format!("wrote phase grid to {}", cli.out.display()));
        }
        Command::Selftest { std_guard } => {
            let mut opts = SelftestOptions::default();
            if let Some(seed) = cli.seed {
                opts.seed = seed;
            }
            if let Some(g) = std_guard {
                opts.std_guard = *g;
            }
            let report = selftest(&opts);
            for s in &report.suites {
                say(format!("{:<14} {}  {}", s.name, if s.passed { "ok" } else { "FAILED" }, s.detail));
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Format { .. } | Error::TruncatedFile { .. } | Error::BadMagic(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}
