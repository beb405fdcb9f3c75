//! `sft` — solve, cross-check, tabulate and plot wind-aware facility
//! location scenarios.
//!
//! Exit codes: 0 success, 1 validation/parse error, 2 solver warning under
//! `--strict`, 3 i/o error.

use clap::{Parser, Subcommand, ValueEnum};
use sft::experiment::{self, TableFormat};
use sft::oracle::{grid_min, GridSpec};
use sft::scenario::{CaseSet, Scenario};
use sft::solver::multistart_solve;
use sft::{Error, Vec2};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sft", version, about = "Wind-aware single-facility location")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and print the optimum.
    Solve {
        scenario: PathBuf,
        /// Override the scenario wind, as "sx,sy".
        #[arg(long, value_parser = parse_wind)]
        wind: Option<Vec2>,
        /// Override the iteration budget.
        #[arg(long)]
        iters: Option<usize>,
        /// Override the step constant (the k-th step is C/k).
        #[arg(long)]
        step: Option<f64>,
        /// Print every iterate as CSV on stdout.
        #[arg(long)]
        trace: bool,
        /// Escalate solver warnings to exit code 2.
        #[arg(long)]
        strict: bool,
    },
    /// Run a case suite and write its results table.
    Table {
        /// Case-set file (e.g. scenarios/table2.toml).
        set: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Escalate solver warnings to exit code 2.
        #[arg(long)]
        strict: bool,
    },
    /// Brute-force grid minimum of a scenario's objective.
    Oracle {
        scenario: PathBuf,
        #[arg(long, value_parser = parse_wind)]
        wind: Option<Vec2>,
    },
    /// Render one case (neglected vs included optima) as SVG.
    Plot {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_wind)]
        wind: Option<Vec2>,
    },
    /// Run the full invariant suite.
    Check {
        /// Seed for the randomized draws.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn parse_wind(s: &str) -> Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"sx,sy\", got {s:?}"));
    }
    let x: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Vec2::new(x, y))
}

fn init_threads() {
    if let Ok(v) = std::env::var("SFT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> sft::Result<ExitCode> {
    match cli.command {
        Command::Solve {
            scenario,
            wind,
            iters,
            step,
            trace,
            strict,
        } => {
            let s = Scenario::load(&scenario)?;
            let wind = wind.unwrap_or(s.wind);
            let problem = s.problem_with_wind(wind)?;
            let mut cfg = s.solver_config(&problem);
            if let Some(k) = iters {
                cfg.max_iters = k;
            }
            if let Some(c) = step {
                cfg.step_c = c;
            }
            cfg.record_trace = trace;
            let res = multistart_solve(&problem, &cfg, &s.default_starts())?;
            println!("scenario: {} ({})", s.name, problem.shape());
            println!("wind: ({}, {})", wind.x, wind.y);
            println!(
                "best: ({:.3}, {:.3})  value: {:.3} s  iterations: {}",
                res.best_x.x, res.best_x.y, res.best_value, res.iterations_run
            );
            print!("{}", problem.check_uniqueness());
            for w in &res.warnings {
                eprintln!("warning: {w}");
            }
            if trace {
                println!("iter,x1,x2,value");
                for pt in res.trace.as_deref().unwrap_or(&[]) {
                    println!("{},{},{},{}", pt.iter, pt.x.x, pt.x.y, pt.value);
                }
            }
            if strict && !res.warnings.is_empty() {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table {
            set,
            out,
            format,
            strict,
        } => {
            let set = CaseSet::load(&set)?;
            let reports = experiment::run_set(&set)?;
            let format = match format {
                FormatArg::Csv => TableFormat::Csv,
                FormatArg::Markdown => TableFormat::Markdown,
            };
            experiment::emit_table(&reports, format, &out)?;
            println!("{} cases -> {}", reports.len(), out.display());
            let mut warned = false;
            for r in &reports {
                for w in &r.warnings {
                    eprintln!("warning: case {}: {w}", r.case_id);
                    warned = true;
                }
            }
            if strict && warned {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { scenario, wind } => {
            let s = Scenario::load(&scenario)?;
            let wind = wind.unwrap_or(s.wind);
            let problem = s.problem_with_wind(wind)?;
            let (value, argmin) = grid_min(&problem, &GridSpec::for_problem(&problem))?;
            println!(
                "grid minimum: {value:.4} s at ({:.3}, {:.3})",
                argmin.x, argmin.y
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot {
            scenario,
            out,
            wind,
        } => {
            let s = Scenario::load(&scenario)?;
            let report = experiment::run_case(&s, wind)?;
            sft::plot::emit_plot(&s, &report, &out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { seed } => {
            let mut ok = true;
            for outcome in sft::validate::run_all(seed) {
                println!(
                    "{} {} ({})",
                    if outcome.passed { "PASS" } else { "FAIL" },
                    outcome.name,
                    outcome.detail
                );
                ok &= outcome.passed;
            }
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::invalid("invariant suite failed"))
            }
        }
    }
}
