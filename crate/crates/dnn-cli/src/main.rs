use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dnn_cli::output::{self, Measure};
use dnn_cli::suite;
use dnn_core::bench;
use dnn_core::bounds;
use dnn_core::problem::{parse_dimacs, DnnProblem, Graph};
use dnn_core::solver::{self, Direction, LineSearch, Method, SolverConfig, Status};

/// Solvers for the doubly nonnegative relaxation of the stable set
/// problem, with certified dual bounds.
#[derive(Parser)]
#[command(name = "dnn", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    #[value(name = "adal+")]
    AdalPlus,
    #[value(name = "dadal+")]
    DadalPlus,
    #[value(name = "conic3c")]
    Conic3c,
    #[value(name = "dadmm3c")]
    Dadmm3c,
}

impl From<SolverArg> for Method {
    fn from(s: SolverArg) -> Method {
        match s {
            SolverArg::AdalPlus => Method::AdalPlus,
            SolverArg::DadalPlus => Method::DadalPlus,
            SolverArg::Conic3c => Method::ConicAdmm3c,
            SolverArg::Dadmm3c => Method::Dadmm3c,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Grad,
    Scaled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LineSearchArg {
    Grid,
    Quartic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    Time,
    Iters,
}

#[derive(Args)]
struct SolverOpts {
    /// Stopping tolerance on the residual error.
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 3600.0)]
    time_limit: f64,
    /// Iteration budget (unbounded by default).
    #[arg(long)]
    max_iter: Option<u64>,
    /// Passes of the factorized (y, V) update per iteration.
    #[arg(long, default_value_t = 2)]
    inner_iters: usize,
    /// Ascent direction for the factorized update.
    #[arg(long, value_enum, default_value_t = DirectionArg::Grad)]
    direction: DirectionArg,
    /// Stepsize rule for the factorized update.
    #[arg(long, value_enum, default_value_t = LineSearchArg::Grid)]
    line_search: LineSearchArg,
    /// Treat the input graph as the stable-set instance itself instead of
    /// complementing it (DIMACS clique files are complemented by default).
    #[arg(long)]
    no_complement: bool,
}

impl SolverOpts {
    fn config(&self, trace: bool) -> SolverConfig {
        SolverConfig {
            epsilon: self.eps,
            time_limit_s: self.time_limit,
            max_iter: self.max_iter,
            inner_iters: self.inner_iters,
            direction: match self.direction {
                DirectionArg::Grad => Direction::Gradient,
                DirectionArg::Scaled => Direction::ScaledGradient,
            },
            line_search: match self.line_search {
                LineSearchArg::Grid => LineSearch::Grid1000,
                LineSearchArg::Quartic => LineSearch::QuarticRoots,
            },
            trace,
            ..SolverConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the theta-plus relaxation of one instance with one solver.
    Solve {
        /// DIMACS .clq file.
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::AdalPlus)]
        solver: SolverArg,
        #[command(flatten)]
        opts: SolverOpts,
        /// Write a per-iteration trace CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the run report here (format per --format).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Exit with code 3 if the solver stops on a budget.
        #[arg(long)]
        strict: bool,
    },
    /// Solve, then certify: error bound and Nightjet bound at the final
    /// iterate.
    Bound {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::AdalPlus)]
        solver: SolverArg,
        #[command(flatten)]
        opts: SolverOpts,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Run a directory of .clq instances through a set of solvers and
    /// write a results CSV.
    Bench {
        /// Directory containing .clq files.
        dir: PathBuf,
        /// Solvers to run; repeat to select several (default: all four).
        #[arg(long, value_enum)]
        solver: Vec<SolverArg>,
        #[command(flatten)]
        opts: SolverOpts,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Turn a bench results CSV into performance-profile curves.
    Profile {
        results: PathBuf,
        #[arg(long, value_enum, default_value_t = MeasureArg::Time)]
        measure: MeasureArg,
        /// Keep rows with budget-exceeded runs at an infinite ratio
        /// instead of dropping them.
        #[arg(long)]
        include_timeouts: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_problem(path: &Path, no_complement: bool) -> Result<(String, Graph, DnnProblem)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let clique_graph = parse_dimacs(&text)
        .with_context(|| format!("cannot parse {}", path.display()))?;
    let g = if no_complement {
        clique_graph
    } else {
        clique_graph.complement()
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let p = DnnProblem::theta_plus(&g);
    Ok((name, g, p))
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)
            .with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn print_summary(name: &str, method: Method, rep: &solver::SolveReport) {
    let r = &rep.residuals;
    println!("instance {name}  solver {}", method.name());
    println!("theta+ estimate (-dual_ofv): {:.6}", -rep.dual_ofv);
    print!(
        "residuals: r_P {:.3e}  r_D {:.3e}  r_PP {:.3e}  r_CS {:.3e}",
        r.r_p, r.r_d, r.r_pp, r.r_cs
    );
    if let (Some(pd), Some(cz)) = (r.r_pd, r.r_cz) {
        print!("  r_PD {pd:.3e}  r_CZ {cz:.3e}");
    }
    println!();
    println!(
        "status {}  iterations {}  time {:.3}s",
        rep.status.as_str(),
        rep.iterations,
        rep.elapsed_s
    );
}

fn report_row(name: &str, method: Method, rep: &solver::SolveReport) -> suite::SuiteRow {
    suite::SuiteRow {
        instance: name.to_string(),
        solver: method,
        dual_ofv: Some(-rep.dual_ofv),
        eb: None,
        nb: None,
        nb_failure: None,
        iterations: Some(rep.iterations),
        elapsed_s: Some(rep.elapsed_s),
        status: Some(rep.status),
        error: None,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve {
            instance,
            solver,
            opts,
            trace,
            out,
            format,
            strict,
        } => {
            let method: Method = solver.into();
            let cfg = opts.config(trace.is_some());
            let (name, _g, p) = load_problem(&instance, opts.no_complement)?;
            let rep = solver::solve(&p, method, &cfg)?;
            print_summary(&name, method, &rep);
            if let Some(path) = &trace {
                let rows = rep.trace.as_deref().unwrap_or(&[]);
                std::fs::write(path, output::trace_csv(rows))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            if let Some(path) = &out {
                let content = match format {
                    FormatArg::Csv => output::results_csv(&[report_row(&name, method, &rep)]),
                    FormatArg::Json => {
                        let v = output::json_report(&name, method, &rep, None, None);
                        format!("{}\n", serde_json::to_string_pretty(&v)?)
                    }
                };
                write_or_print(Some(path), &content)?;
            }
            if strict && rep.status != Status::Converged {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bound {
            instance,
            solver,
            opts,
            out,
            format,
        } => {
            let method: Method = solver.into();
            let cfg = opts.config(false);
            let (name, _g, p) = load_problem(&instance, opts.no_complement)?;
            let rep = solver::solve(&p, method, &cfg)?;
            print_summary(&name, method, &rep);
            let eb = bounds::error_bound(&p, &rep.state.y, &rep.state.s, 1.0)?;
            println!(
                "error bound: upper bound on α(G) = {:.6}",
                -eb.value.expect("error bound always produces a value")
            );
            let nb = bounds::nightjet_theta_plus(&p, &rep.state.z)?;
            match nb.value {
                Some(v) => println!("Nightjet bound: upper bound on α(G) = {:.6}", -v),
                None => println!(
                    "Nightjet bound: {}",
                    nb.failure.expect("failed result carries a reason").message()
                ),
            }
            if let Some(path) = &out {
                let content = match format {
                    FormatArg::Csv => {
                        let mut row = report_row(&name, method, &rep);
                        row.eb = eb.value.map(|v| -v);
                        row.nb = nb.value.map(|v| -v);
                        row.nb_failure =
                            nb.failure.map(dnn_core::bounds::BoundFailure::message);
                        output::results_csv(&[row])
                    }
                    FormatArg::Json => {
                        let v = output::json_report(&name, method, &rep, Some(&eb), Some(&nb));
                        format!("{}\n", serde_json::to_string_pretty(&v)?)
                    }
                };
                write_or_print(Some(path), &content)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bench {
            dir,
            solver,
            opts,
            out,
            jobs,
        } => {
            let methods: Vec<Method> = if solver.is_empty() {
                Method::ALL.to_vec()
            } else {
                solver.into_iter().map(Method::from).collect()
            };
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
                .with_context(|| format!("cannot read directory {}", dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "clq"))
                .collect();
            paths.sort();
            if paths.is_empty() {
                bail!("no .clq files in {}", dir.display());
            }
            let mut instances = Vec::new();
            for path in &paths {
                let (name, _g, p) = load_problem(path, opts.no_complement)?;
                instances.push((name, p));
            }
            let cfg = opts.config(false);
            let rows = suite::run_suite(&instances, &methods, &cfg, jobs);
            write_or_print(out.as_deref(), &output::results_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Profile {
            results,
            measure,
            include_timeouts,
            out,
        } => {
            let text = std::fs::read_to_string(&results)
                .with_context(|| format!("cannot read {}", results.display()))?;
            let measure = match measure {
                MeasureArg::Time => Measure::Time,
                MeasureArg::Iters => Measure::Iters,
            };
            let m = output::parse_results_csv(&text, measure)?;
            let curves = bench::performance_profiles(&m.matrix, include_timeouts)?;
            write_or_print(out.as_deref(), &output::profile_csv(&curves, &m.solver_names))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
