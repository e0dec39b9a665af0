//! Command-line interface of the `gse` binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gse_core::envfile::EnvFile;
use gse_core::planners::{GsePlanner, PlannerConfig, PrmStar, RunTrace, Variant};
use gse_core::promenade::{run_automaton_study, PromenadeSpec, SolutionType};
use gse_core::roadmap::Roadmap;

use crate::study::{run_completeness_study, run_convergence_study, StudyKind, StudySpec, CSV_VERSION_LINE};
use crate::workspace::random_workspace;
use crate::BenchError;

#[derive(Debug, Parser)]
#[command(name = "gse", version, about = "Generalized-shape motion planners and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one planner on an environment file and write its cost trace.
    Plan(PlanArgs),
    /// Run a convergence or completeness study described by a JSON spec.
    Bench {
        kind: BenchKind,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the automaton study on the promenade instance.
    Promenade(PromenadeArgs),
    /// Environment file utilities.
    #[command(subcommand)]
    Env(EnvCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    Convergence,
    Completeness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlannerArg {
    Gse,
    GseStar,
    PrmStar,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub env: PathBuf,
    #[arg(long, value_enum, default_value = "gse-star")]
    pub planner: PlannerArg,
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Trace CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional JSON dump of the final roadmap.
    #[arg(long)]
    pub roadmap: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PromenadeArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long = "gamma-f", default_value_t = 0.3)]
    pub gamma_f: f64,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum EnvCommand {
    /// Generate a seeded random workspace with start and goal.
    Gen {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        obstacles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Plan(args) => plan(&args),
        Command::Bench { kind, spec, out } => bench(kind, &spec, &out),
        Command::Promenade(args) => promenade(&args),
        Command::Env(EnvCommand::Gen { dim, obstacles, seed, out }) => {
            if !(2..=3).contains(&dim) {
                return Err(BenchError::Config(format!("dim must be 2 or 3, got {dim}")));
            }
            let problem = random_workspace(dim, obstacles, seed).map_err(|e| BenchError::Config(e.to_string()))?;
            write(&out, &EnvFile::from_problem(&problem).to_json())
        }
    }
}

fn read(path: &Path) -> Result<String, BenchError> {
    fs::read_to_string(path).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), BenchError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| BenchError::Runtime(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| BenchError::Runtime(format!("{}: {e}", path.display())))
}

fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<(), BenchError> {
    for (name, contents) in files {
        write(&dir.join(name), contents)?;
    }
    Ok(())
}

fn plan(args: &PlanArgs) -> Result<(), BenchError> {
    let problem = EnvFile::parse(&read(&args.env)?)
        .and_then(|f| f.to_problem())
        .map_err(|e| BenchError::Config(format!("{}: {e}", args.env.display())))?;
    let defaults = PlannerConfig::<f64>::default();
    let cfg = PlannerConfig {
        eta: args.eta,
        phi: args.phi.unwrap_or(defaults.phi),
        rho: args.rho.unwrap_or(defaults.rho),
        gamma_override: args.gamma,
        iterations: args.iters,
        seed: args.seed,
        ..defaults
    };
    let (trace, roadmap): (RunTrace<f64>, Roadmap<f64>) = match args.planner {
        PlannerArg::Gse | PlannerArg::GseStar => {
            let variant = if args.planner == PlannerArg::Gse { Variant::Gse } else { Variant::GseStar };
            let mut planner = GsePlanner::new(&problem, &cfg, variant)?;
            (planner.run()?, planner.roadmap().clone())
        }
        PlannerArg::PrmStar => {
            let mut planner = PrmStar::new(&problem, &cfg)?;
            (planner.run()?, planner.roadmap().clone())
        }
    };
    write(&args.out, &format!("{CSV_VERSION_LINE}\n{}", trace.to_csv()))?;
    if let Some(path) = &args.roadmap {
        let dump = serde_json::to_string_pretty(&roadmap.dump()).map_err(|e| BenchError::Runtime(e.to_string()))?;
        write(path, &dump)?;
    }
    println!(
        "iterations {} vertices {} edges {} best_cost {} wall_time_s {:.3}",
        args.iters,
        roadmap.vertex_count(),
        roadmap.edge_count(),
        trace.final_cost(),
        trace.wall_time.as_secs_f64()
    );
    Ok(())
}

fn bench(kind: BenchKind, spec_path: &Path, out: &Path) -> Result<(), BenchError> {
    let spec = StudySpec::parse(&read(spec_path)?)?;
    let expected = match kind {
        BenchKind::Convergence => StudyKind::Convergence,
        BenchKind::Completeness => StudyKind::Completeness,
    };
    if spec.kind != expected {
        return Err(BenchError::Config(format!("spec kind {:?} does not match subcommand {:?}", spec.kind, kind)));
    }
    let files = match kind {
        BenchKind::Convergence => run_convergence_study(&spec)?.outputs(),
        BenchKind::Completeness => run_completeness_study(&spec)?.outputs(),
    };
    write_all(out, &files)
}

fn promenade(args: &PromenadeArgs) -> Result<(), BenchError> {
    let spec = PromenadeSpec { alpha: args.alpha, epsilon: args.eps, gamma_f: args.gamma_f };
    spec.validate()?;
    let cfg = PlannerConfig::default().with_iterations(args.iters);
    let study = run_automaton_study(&spec, &cfg, args.trials, args.seed)?;
    let (type_b, (b_lo, b_hi)) = study.type_b_interval();
    let (budget_b, _) = study.budget_type_b_interval();
    let (viol_l, viol_b) = study.lemma_violations();
    let type_l = study.trials.iter().filter(|t| t.result_type == Some(SolutionType::TypeL)).count();
    let summary = format!(
        "{CSV_VERSION_LINE}\nkey,value\ntrials,{}\naccept_rate,{}\nreject_rate,{}\nundecided_rate,{}\n\
         accept_wilson_lo,{}\naccept_wilson_hi,{}\ntype_b,{type_b}\ntype_l,{type_l}\n\
         type_b_wilson_lo,{b_lo}\ntype_b_wilson_hi,{b_hi}\nbudget_type_b,{budget_b}\n\
         violations_type_l,{viol_l}\nviolations_type_b,{viol_b}\n",
        args.trials,
        study.accept_rate,
        study.reject_rate,
        study.undecided_rate,
        study.accept_interval.0,
        study.accept_interval.1,
    );
    write_all(
        &args.out,
        &[("promenade_trials.csv", format!("{CSV_VERSION_LINE}\n{}", study.to_csv())), ("promenade_summary.csv", summary)],
    )?;
    println!(
        "trials {} type_b {type_b} accept_rate {} wilson95 [{:.4}, {:.4}]",
        args.trials, study.accept_rate, study.accept_interval.0, study.accept_interval.1
    );
    Ok(())
}
