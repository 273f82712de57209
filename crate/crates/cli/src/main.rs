use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use zfsim_core::harness::output::diagnostics_csv_string;
use zfsim_core::harness::{
    diagnostics_path, figure_preset, format_oracle_table, load_config, mse_oracle_table, parse_csv,
    run_power_sweep_with_workers, run_verify, to_csv_string, write_csv, write_diagnostics, Metric,
    ScenarioConfig, SweepResult, WorkerPool,
};
use zfsim_core::prelude::{Estimator, PrecoderScheme};

/// Monte-Carlo sweeps of ZF/MF precoding with LS and LMMSE channel estimates.
#[derive(Debug, Parser)]
#[command(name = "zfsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the power sweep described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: SweepOpts,
    },
    /// Run one of the built-in figure scenarios (fig1..fig8).
    Preset {
        name: String,
        #[command(flatten)]
        opts: SweepOpts,
        /// Shrink the trial counts to 20 covariance x 50 channel draws.
        #[arg(long)]
        quick: bool,
        /// Print the preset as config text instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Run the analytic-identity checks and print one PASS/FAIL line each.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Compare closed-form and Monte-Carlo estimation MSE for a config.
    MseOracle {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print `power_db mean stderr` columns of one curve of a sweep CSV (gnuplot input).
    Columns {
        csv: PathBuf,
        #[arg(long)]
        estimator: Estimator,
        #[arg(long)]
        precoder: PrecoderScheme,
        #[arg(long, default_value = "sum_rate")]
        metric: Metric,
    },
}

#[derive(Debug, Args)]
struct SweepOpts {
    /// Output CSV; a `.diagnostics.csv` sidecar is written next to it. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long)]
    workers: Option<usize>,
}

fn workers(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

fn report_failures(result: &SweepResult) {
    let mut totals: BTreeMap<(String, String), (usize, usize)> = BTreeMap::new();
    for d in &result.diagnostics {
        let t = totals
            .entry((d.estimator.to_string(), d.precoder.to_string()))
            .or_default();
        t.0 += d.rank_deficient;
        t.1 += d.n;
    }
    for ((estimator, precoder), (failed, total)) in totals {
        if failed > 0 {
            eprintln!(
                "note: {estimator}-{precoder}: {failed}/{total} trials rank deficient, counted as zero rate \
                 (per-power counts in the diagnostics file)"
            );
        }
    }
}

fn sweep(cfg: &ScenarioConfig, workers: usize, out: Option<&Path>) -> Result<()> {
    let result = run_power_sweep_with_workers(cfg, workers)?;
    report_failures(&result);
    match out {
        Some(path) => {
            write_csv(&result, path).with_context(|| format!("writing {}", path.display()))?;
            write_diagnostics(&result, &diagnostics_path(path))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(to_csv_string(&result).as_bytes())?;
            if result.diagnostics.iter().any(|d| d.rank_deficient > 0) {
                eprint!("{}", diagnostics_csv_string(&result));
            }
        }
    }
    Ok(())
}

/// `fig5.csv` -> `fig5_tdl16.csv`
fn per_pilot_path(base: &Path, num_pilots: usize) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = base
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    base.with_file_name(format!("{stem}_tdl{num_pilots}.{ext}"))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, opts } => {
            let mut cfg =
                load_config(&config).with_context(|| format!("loading {}", config.display()))?;
            if let Some(seed) = opts.seed {
                cfg.master_seed = seed;
            }
            sweep(&cfg, workers(opts.workers), opts.out.as_deref())?;
        }
        Command::Preset {
            name,
            opts,
            quick,
            print_config,
        } => {
            let mut preset = figure_preset(&name)?;
            if quick {
                preset = preset.quick();
            }
            if let Some(seed) = opts.seed {
                preset = preset.with_seed(seed);
            }
            if print_config {
                for s in &preset.scenarios {
                    println!("{}", s.to_config_string());
                }
                return Ok(true);
            }
            let n = workers(opts.workers);
            if preset.scenarios.len() == 1 {
                sweep(preset.config(), n, opts.out.as_deref())?;
            } else {
                let base = opts
                    .out
                    .unwrap_or_else(|| PathBuf::from(format!("{}.csv", preset.name)));
                for s in &preset.scenarios {
                    sweep(s, n, Some(&per_pilot_path(&base, s.num_pilots)))?;
                }
            }
        }
        Command::Verify { seed } => {
            let outcomes = run_verify(seed);
            let mut all = true;
            for o in &outcomes {
                println!(
                    "{} {}: {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.detail
                );
                all &= o.passed;
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            println!("{passed}/{} checks passed", outcomes.len());
            return Ok(all);
        }
        Command::MseOracle {
            config,
            seed,
            workers: w,
        } => {
            let mut cfg =
                load_config(&config).with_context(|| format!("loading {}", config.display()))?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            let pool = WorkerPool::new(workers(w))?;
            let rows = pool.install(|| mse_oracle_table(&cfg))?;
            print!("{}", format_oracle_table(&rows));
        }
        Command::Columns {
            csv,
            estimator,
            precoder,
            metric,
        } => {
            let text =
                fs::read_to_string(&csv).with_context(|| format!("reading {}", csv.display()))?;
            let rows: Vec<_> = parse_csv(&text)?
                .into_iter()
                .filter(|r| {
                    r.estimator == estimator && r.precoder == precoder && r.metric == metric
                })
                .collect();
            if rows.is_empty() {
                bail!(
                    "no rows for {estimator}/{precoder}/{metric} in {}",
                    csv.display()
                );
            }
            println!("# {estimator} {precoder} {metric}: power_db mean stderr");
            for r in rows {
                println!("{} {:.10e} {:.10e}", r.power_db, r.mean, r.stderr);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
