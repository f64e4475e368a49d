//! Command-line front end. Exit codes: 0 success, 1 infeasible instance or
//! failed verification or construction, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::builder::build_family_randomized;
use crate::builder::{build_family_traced, BuildConfig, RandomOutcome, RandomizedConfig};
use crate::io::{
    bench_csv, read_family, read_instance, run_bench, write_family, write_solution, RunReport,
    SolutionSummary,
};
use crate::label::Variant;
use crate::sndp::{
    solve_single_source, solve_vcsndp, ElementSubsolver, ExactSubsolver, ReverseDeleteSubsolver,
    SndpError,
};
use crate::verify::{
    verify_strong_goodness, verify_weak_goodness_bruteforce, verify_weak_goodness_ss_bruteforce,
    DEFAULT_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "vcsndp",
    version,
    about = "Good families of terminal subsets and VC-SNDP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    General,
    Ss,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::General => Variant::General,
            VariantArg::Ss => Variant::SingleSource,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SubsolverArg {
    Exact,
    ReverseDelete,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a strongly good family with the deterministic local search.
    BuildFamily {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "general")]
        variant: VariantArg,
        #[arg(long, default_value_t = 2)]
        c_mult: u32,
        #[arg(long, default_value_t = 1.0)]
        zeta: f64,
        #[arg(long, default_value_t = 8)]
        max_escalations: u32,
        /// Family file to write; the report goes to stdout either way.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a family file for strong (and optionally weak) goodness.
    VerifyFamily {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        weak_bruteforce: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Solve an instance through a family's subsets.
    SolveSndp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        subsolver: SubsolverArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep (n, k) and write family sizes and step counts as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "16,64,128,256")]
        n_grid: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        k_grid: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "general")]
        variant: Vec<VariantArg>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Uniformly random labels judged against relaxed thresholds.
    RandomBaseline {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, value_enum, default_value = "general")]
        variant: VariantArg,
        #[arg(long, default_value_t = 1)]
        gamma_factor: u32,
        #[arg(long)]
        beta_budget: Option<u32>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAILED,
        message: message.into(),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Runs the command line and returns the exit code. `args` includes the
/// program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::BuildFamily {
            n,
            k,
            variant,
            c_mult,
            zeta,
            max_escalations,
            out: path,
        } => {
            let config = BuildConfig {
                c_mult,
                zeta,
                max_escalations,
                ..BuildConfig::default()
            };
            let (result, trace) = build_family_traced(n, k, variant.into(), &config);
            let family = result.map_err(|e| match e {
                crate::builder::BuildError::Param(p) => usage(p.to_string()),
                other => failed(other.to_string()),
            })?;
            if let Some(path) = path {
                write_file(&path, &write_family(&family))?;
            }
            let _ = out.write_all(RunReport::for_build(&family, &trace).render().as_bytes());
            Ok(())
        }
        Command::VerifyFamily {
            input,
            weak_bruteforce,
            budget,
        } => {
            let text = read_file(&input)?;
            let fam = read_family(&text).map_err(|e| usage(format!("{}: {e}", input.display())))?;
            let mut report = RunReport::for_family(&fam);
            let violations = verify_strong_goodness(&fam);
            for v in &violations {
                let _ = writeln!(out, "violation {v}");
            }
            let mut weak_failure = None;
            if weak_bruteforce {
                let k = fam.params().k;
                let found = match fam.params().variant {
                    Variant::General => verify_weak_goodness_bruteforce(&fam, k, budget).map(|c| {
                        c.map(|c| format!("pair {:?} blocked by {:?}", c.pair, c.blockers))
                    }),
                    Variant::SingleSource => verify_weak_goodness_ss_bruteforce(&fam, k, budget)
                        .map(|c| {
                            c.map(|c| {
                                format!("terminal {} blocked by {:?}", c.terminal, c.blockers)
                            })
                        }),
                }
                .map_err(|e| usage(format!("{e}; raise --budget")))?;
                report.weak_ok = Some(found.is_none());
                weak_failure = found;
            }
            let _ = out.write_all(report.render().as_bytes());
            if let Some(c) = weak_failure {
                return Err(failed(format!("weak goodness fails: {c}")));
            }
            if !violations.is_empty() {
                return Err(failed(format!(
                    "{} strong-goodness violations",
                    violations.len()
                )));
            }
            Ok(())
        }
        Command::SolveSndp {
            graph,
            family,
            subsolver,
            out: path,
        } => {
            let inst = read_instance(&read_file(&graph)?)
                .map_err(|e| usage(format!("{}: {e}", graph.display())))?;
            let fam = read_family(&read_file(&family)?)
                .map_err(|e| usage(format!("{}: {e}", family.display())))?;
            let solver: Box<dyn ElementSubsolver> = match subsolver {
                SubsolverArg::Exact => Box::new(ExactSubsolver::default()),
                SubsolverArg::ReverseDelete => Box::new(ReverseDeleteSubsolver),
            };
            let result = match inst.variant() {
                Variant::General => solve_vcsndp(&inst, &fam, solver.as_ref()),
                Variant::SingleSource => solve_single_source(&inst, &fam, solver.as_ref()),
            };
            let report = result.map_err(|e| match e {
                SndpError::Infeasible { .. }
                | SndpError::VerificationFailed { .. }
                | SndpError::SubsolverInfeasible { .. } => failed(e.to_string()),
                other => usage(other.to_string()),
            })?;
            if let Some(path) = path {
                write_file(&path, &write_solution(&report, &inst))?;
            }
            let mut run = RunReport::for_family(&fam);
            run.solution = Some(SolutionSummary::from(&report));
            let _ = out.write_all(run.render().as_bytes());
            Ok(())
        }
        Command::Bench {
            n_grid,
            k_grid,
            trials,
            variant,
            csv,
        } => {
            let variants: Vec<Variant> = variant.into_iter().map(Variant::from).collect();
            let rows = run_bench(&n_grid, &k_grid, &variants, trials, &BuildConfig::default());
            let text = bench_csv(&rows);
            match csv {
                Some(path) => write_file(&path, &text)?,
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            Ok(())
        }
        Command::RandomBaseline {
            n,
            k,
            seeds,
            variant,
            gamma_factor,
            beta_budget,
        } => {
            let cfg = RandomizedConfig {
                gamma_factor,
                beta_budget,
                ..RandomizedConfig::default()
            };
            let mut successes = 0u64;
            for seed in 0..seeds {
                let outcome = build_family_randomized(n, k, variant.into(), &cfg, seed)
                    .map_err(|e| usage(e.to_string()))?;
                match outcome {
                    RandomOutcome::Success { .. } => {
                        successes += 1;
                        let _ = writeln!(out, "seed {seed}: ok");
                    }
                    RandomOutcome::Failure(r) => {
                        let _ = writeln!(
                            out,
                            "seed {seed}: {} violations, {} duplicates",
                            r.violations.len(),
                            r.duplicates.len()
                        );
                    }
                }
            }
            let _ = writeln!(out, "success {successes}/{seeds}");
            Ok(())
        }
    }
}
