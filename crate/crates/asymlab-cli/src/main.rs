//! Batch CLI for the asymlab toolkit.
//!
//! Exit codes: 0 when everything passed, 1 when a verification check or a
//! computation failed, 2 for usage or input errors. The default seed is 0,
//! overridable by `ASYMLAB_SEED` or `--seed`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use asymlab::io;
use asymlab::kernel::symmetric_kernel;
use asymlab::measures::{blaschke_measure, validate_measure};
use asymlab::plot;
use asymlab::projection::{projection_body, schneider_p, schneider_r, zonotope_volume};
use asymlab::search::{search_extremal, Objective};
use asymlab::suites::run_verify_suite;
use asymlab::wulff::{blaschke_body, solve_minkowski};
use asymlab::Error;

#[derive(Parser)]
#[command(name = "asymlab", version, about = "Asymmetry functionals of convex polytopes")]
struct Cli {
    /// Seed for every randomized component (default: ASYMLAB_SEED or 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric kernel, pseudo-center and m(K) of a body.
    Kernel {
        /// Input body: a polytope JSON file or a builtin name
        /// (simplex-N, cube-N, cross-N, regular-K-gon).
        #[arg(long = "in")]
        input: String,
        /// Optional path for the kernel body JSON.
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Blaschke body of a body (Minkowski solve of the even measure).
    Blaschke {
        #[arg(long = "in")]
        input: String,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Reconstruct a polytope from a surface measure JSON.
    MinkowskiSolve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Projection body of a body, as a zonotope generator list.
    Projbody {
        #[arg(long = "in")]
        input: String,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Schneider's P and R and related quantities for a body.
    Invariants {
        #[arg(long = "in")]
        input: String,
        /// Quadrature sample count for the polar volume.
        #[arg(long, default_value_t = 65536)]
        samples: usize,
    },
    /// Run a named verification suite and write its report.
    Verify {
        /// One of: planar, simplex, inequalities, asymptotics, problem3.
        #[arg(long)]
        suite: String,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Simulated-annealing search for extremal bodies.
    Search {
        #[arg(long)]
        dim: usize,
        /// `min-m` or `max-blaschke-ratio`.
        #[arg(long)]
        objective: String,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Render a planar body (or suite report) to SVG.
    Plot {
        /// Polytope JSON / builtin name, or a report JSON with --report.
        #[arg(long = "in")]
        input: String,
        #[arg(long, default_value_t = false)]
        report: bool,
        #[arg(long = "out")]
        output: PathBuf,
        /// Overlay the symmetric kernel and the Blaschke body.
        #[arg(long, default_value_t = false)]
        overlays: bool,
    },
}

fn seed_of(cli: &Cli) -> u64 {
    cli.seed
        .or_else(|| std::env::var("ASYMLAB_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(Error::from),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let seed = seed_of(&cli);
    match cli.command {
        Command::Kernel { input, output } => {
            let k = io::load_polytope_or_builtin(&input)?;
            let r = symmetric_kernel(&k)?;
            let summary = serde_json::json!({
                "m": r.m_value,
                "q": r.q_value,
                "center": r.center.as_slice(),
                "kernel": serde_json::from_str::<serde_json::Value>(&io::polytope_to_json(&r.kernel))
                    .expect("kernel json"),
            });
            write_or_print(&output, &serde_json::to_string_pretty(&summary).unwrap())?;
            Ok(true)
        }
        Command::Blaschke { input, output } => {
            let k = io::load_polytope_or_builtin(&input)?;
            let nabla = blaschke_body(&k)?;
            write_or_print(&output, &io::polytope_to_json(&nabla))?;
            eprintln!("volume ratio |∇K|/|K| = {:.9}", nabla.volume() / k.volume());
            Ok(true)
        }
        Command::MinkowskiSolve { input, output } => {
            let s = io::load_measure(&input)?;
            let diag = validate_measure(&s);
            if !diag.feasible {
                eprintln!(
                    "measure diagnostics: centroid {:.3e} (rel), rank {}/{}, even: {}",
                    diag.centroid_rel, diag.rank, s.dim, diag.even
                );
            }
            let p = solve_minkowski(&s)?;
            write_or_print(&output, &io::polytope_to_json(&p))?;
            Ok(true)
        }
        Command::Projbody { input, output } => {
            let k = io::load_polytope_or_builtin(&input)?;
            let z = projection_body(&k);
            let doc = serde_json::json!({
                "dim": z.dim,
                "generators": z.generators.iter().map(|g| g.as_slice().to_vec()).collect::<Vec<_>>(),
            });
            write_or_print(&output, &serde_json::to_string_pretty(&doc).unwrap())?;
            Ok(true)
        }
        Command::Invariants { input, samples } => {
            let k = io::load_polytope_or_builtin(&input)?;
            let z = projection_body(&k);
            let p = schneider_p(&k)?;
            let (r, r_err) = schneider_r(&k, samples, seed)?;
            let doc = serde_json::json!({
                "volume": k.volume(),
                "projection_body_volume": zonotope_volume(&z)?,
                "schneider_p": p,
                "schneider_r": { "estimate": r, "stderr": r_err, "samples": samples },
                "blaschke_measure_atoms": blaschke_measure(&k).atoms.len(),
                "seed": seed,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(true)
        }
        Command::Verify { suite, output } => {
            let report = run_verify_suite(&suite, seed)?;
            write_or_print(&output, &report.to_json())?;
            for c in &report.checks {
                eprintln!(
                    "[{}] {} (expected {:.6e}, observed {:.6e})",
                    if c.pass { "pass" } else { "FAIL" },
                    c.id,
                    c.expected,
                    c.observed
                );
            }
            Ok(report.all_pass())
        }
        Command::Search { dim, objective, budget, output } => {
            let obj: Objective = objective.parse()?;
            let out = search_extremal(dim, obj, budget, seed)?;
            let doc = serde_json::json!({
                "objective": obj.as_str(),
                "best_value": out.best_value,
                "evaluations": out.evaluations,
                "budget_exhausted": out.budget_exhausted,
                "trace_len": out.trace.len(),
                "best": serde_json::from_str::<serde_json::Value>(&io::polytope_to_json(&out.best))
                    .expect("body json"),
            });
            write_or_print(&output, &serde_json::to_string_pretty(&doc).unwrap())?;
            eprintln!("best value {:.6} after {} evaluations", out.best_value, out.evaluations);
            Ok(true)
        }
        Command::Plot { input, report, output, overlays } => {
            let svg = if report {
                let text = std::fs::read_to_string(&input)?;
                let rep: asymlab::report::Report =
                    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                plot::report_svg(&rep)
            } else {
                let k = io::load_polytope_or_builtin(&input)?;
                if overlays {
                    let kr = symmetric_kernel(&k)?;
                    let nabla = blaschke_body(&k)?;
                    let neg = k.negate();
                    plot::polygons_svg(&[
                        ("K", &k),
                        ("-K", &neg),
                        ("kernel", &kr.kernel),
                        ("blaschke", &nabla),
                    ])?
                } else {
                    plot::polygons_svg(&[("K", &k)])?
                }
            };
            std::fs::write(&output, svg)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; classify help/version as success.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Parse(_) | Error::UnknownSuite(_) | Error::DimOutOfRange(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
