//! Convergence and completeness studies over seeded workspaces.

use std::fmt::Write as _;

use gse_core::geometry::Problem;
use gse_core::planners::{prm_star_plan, GsePlanner, PlannerConfig, RunTrace, Variant};
use gse_core::promenade::{build_promenade, PromenadeSpec};
use gse_core::stats::{derive_seed, wilson_interval};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::workspace::random_workspace;
use crate::BenchError;

/// First line of every CSV the harness writes.
pub const CSV_VERSION_LINE: &str = "# gse-bench v1";

/// Trial index reserved for the reference PRM* run of each workspace.
const REFERENCE_TRIAL: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlannerKind {
    Gse,
    GseStar,
    PrmStar,
}

impl PlannerKind {
    pub fn label(self) -> &'static str {
        match self {
            PlannerKind::Gse => "gse",
            PlannerKind::GseStar => "gse-star",
            PlannerKind::PrmStar => "prm-star",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Convergence,
    Completeness,
    Promenade,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PromenadeParams {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_gamma_f")]
    pub gamma_f: f64,
}

fn default_alpha() -> f64 {
    2.0
}

fn default_epsilon() -> f64 {
    0.05
}

fn default_gamma_f() -> f64 {
    0.3
}

impl Default for PromenadeParams {
    fn default() -> Self {
        Self { alpha: default_alpha(), epsilon: default_epsilon(), gamma_f: default_gamma_f() }
    }
}

impl From<PromenadeParams> for PromenadeSpec<f64> {
    fn from(p: PromenadeParams) -> Self {
        PromenadeSpec { alpha: p.alpha, epsilon: p.epsilon, gamma_f: p.gamma_f }
    }
}

fn default_dim() -> usize {
    2
}

/// Study description, read from JSON.
///
/// With `promenade` set the study runs on that single promenade instance and
/// `dim`, `obstacles` and `workspace_seeds` are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySpec {
    pub kind: StudyKind,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default)]
    pub obstacles: usize,
    #[serde(default)]
    pub workspace_seeds: Vec<u64>,
    pub trials: usize,
    pub iterations: usize,
    pub planners: Vec<PlannerKind>,
    #[serde(default)]
    pub master_seed: u64,
    /// PRM* budget for the reference cost; defaults to 8 × `iterations`.
    #[serde(default)]
    pub reference_iterations: Option<usize>,
    #[serde(default)]
    pub promenade: Option<PromenadeParams>,
}

impl StudySpec {
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let spec: Self = serde_json::from_str(text).map_err(|e| BenchError::Config(format!("study spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.trials == 0 || self.iterations == 0 {
            return bad("trials and iterations must be at least 1");
        }
        if self.planners.is_empty() {
            return bad("planner list is empty");
        }
        if self.promenade.is_none() {
            if self.workspace_seeds.is_empty() {
                return bad("workspace_seeds is empty");
            }
            if !(2..=3).contains(&self.dim) {
                return bad("generated workspaces need dim 2 or 3");
            }
        }
        if self.reference_iterations == Some(0) {
            return bad("reference_iterations must be at least 1");
        }
        Ok(())
    }

    pub fn reference_iterations(&self) -> usize {
        self.reference_iterations.unwrap_or(8 * self.iterations)
    }

    /// `(index, seed, problem)` for every workspace of the study.
    pub fn workspaces(&self) -> Result<Vec<(usize, u64, Problem<f64>)>, BenchError> {
        if let Some(p) = self.promenade {
            let pr = build_promenade(&PromenadeSpec::from(p)).map_err(|e| BenchError::Config(e.to_string()))?;
            return Ok(vec![(0, 0, pr.problem)]);
        }
        self.workspace_seeds
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                random_workspace(self.dim, self.obstacles, s)
                    .map(|p| (i, s, p))
                    .map_err(|e| BenchError::Config(format!("workspace seed {s}: {e}")))
            })
            .collect()
    }
}

/// Runs one planner for `iterations` iterations.
pub fn run_planner(kind: PlannerKind, problem: &Problem<f64>, iterations: usize, seed: u64) -> Result<RunTrace<f64>, BenchError> {
    let cfg = PlannerConfig::default().with_iterations(iterations).with_seed(seed);
    let trace = match kind {
        PlannerKind::Gse => GsePlanner::new(problem, &cfg, Variant::Gse)?.run()?,
        PlannerKind::GseStar => GsePlanner::new(problem, &cfg, Variant::GseStar)?.run()?,
        PlannerKind::PrmStar => prm_star_plan(problem, iterations, seed)?,
    };
    Ok(trace)
}

/// Best cost per iteration of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRun {
    pub planner: PlannerKind,
    pub workspace_index: usize,
    pub workspace_seed: u64,
    pub trial: usize,
    pub trial_seed: u64,
    pub costs: Vec<f64>,
}

impl TrialRun {
    pub fn first_solution_iteration(&self) -> Option<usize> {
        self.costs.iter().position(|c| c.is_finite()).map(|i| i + 1)
    }
}

/// Runs every planner × workspace × trial. Trials sharing a workspace and
/// trial index use the same seed for every planner.
fn run_trials(spec: &StudySpec, workspaces: &[(usize, u64, Problem<f64>)]) -> Result<Vec<TrialRun>, BenchError> {
    let jobs: Vec<(PlannerKind, usize, usize)> = spec
        .planners
        .iter()
        .flat_map(|&p| (0..workspaces.len()).flat_map(move |w| (0..spec.trials).map(move |t| (p, w, t))))
        .collect();
    jobs.into_par_iter()
        .map(|(planner, w, trial)| {
            let (index, ws_seed, problem) = &workspaces[w];
            let trial_seed = derive_seed(spec.master_seed, *index as u64, trial as u64);
            let trace = run_planner(planner, problem, spec.iterations, trial_seed)?;
            Ok(TrialRun {
                planner,
                workspace_index: *index,
                workspace_seed: *ws_seed,
                trial,
                trial_seed,
                costs: trace.records.iter().map(|r| r.best_cost).collect(),
            })
        })
        .collect()
}

fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x.is_nan() {
        "none".into()
    } else {
        "inf".into()
    }
}

fn raw_csv(runs: &[TrialRun]) -> String {
    let mut out = format!("{CSV_VERSION_LINE}\nplanner,workspace_index,workspace_seed,trial,trial_seed,iteration,best_cost\n");
    for r in runs {
        for (i, c) in r.costs.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.planner.label(),
                r.workspace_index,
                r.workspace_seed,
                r.trial,
                r.trial_seed,
                i + 1,
                fmt_f64(*c)
            );
        }
    }
    out
}

/// Mean best cost of one planner on one workspace at one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub planner: PlannerKind,
    pub workspace_index: usize,
    pub workspace_seed: u64,
    pub iteration: usize,
    /// Mean over the trials with a finite cost; NaN when there are none.
    pub mean_best_cost: f64,
    pub trials_aggregated: usize,
    /// Trials still without a path, left out of the mean.
    pub excluded: usize,
}

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub spec: StudySpec,
    /// `(index, seed, c*)` per workspace.
    pub references: Vec<(usize, u64, f64)>,
    pub runs: Vec<TrialRun>,
}

pub fn run_convergence_study(spec: &StudySpec) -> Result<ConvergenceStudy, BenchError> {
    spec.validate()?;
    let workspaces = spec.workspaces()?;
    let reference_budget = spec.reference_iterations();
    let references = workspaces
        .par_iter()
        .map(|(index, seed, problem)| {
            let trace = prm_star_plan(problem, reference_budget, derive_seed(spec.master_seed, *index as u64, REFERENCE_TRIAL))?;
            Ok((*index, *seed, trace.final_cost()))
        })
        .collect::<Result<Vec<_>, BenchError>>()?;
    let runs = run_trials(spec, &workspaces)?;
    Ok(ConvergenceStudy { spec: spec.clone(), references, runs })
}

impl ConvergenceStudy {
    pub fn aggregate(&self) -> Vec<ConvergenceRecord> {
        let mut out = Vec::new();
        for &planner in &self.spec.planners {
            for &(index, seed, _) in &self.references {
                let runs: Vec<&TrialRun> =
                    self.runs.iter().filter(|r| r.planner == planner && r.workspace_index == index).collect();
                for it in 0..self.spec.iterations {
                    let finite: Vec<f64> = runs.iter().map(|r| r.costs[it]).filter(|c| c.is_finite()).collect();
                    let mean =
                        if finite.is_empty() { f64::NAN } else { finite.iter().sum::<f64>() / finite.len() as f64 };
                    out.push(ConvergenceRecord {
                        planner,
                        workspace_index: index,
                        workspace_seed: seed,
                        iteration: it + 1,
                        mean_best_cost: mean,
                        trials_aggregated: finite.len(),
                        excluded: runs.len() - finite.len(),
                    });
                }
            }
        }
        out
    }

    /// Mean over workspaces of `mean_cost / c* - 1` at `iteration` (1-based).
    /// `None` when some workspace has no finite mean or reference yet.
    pub fn relative_gap(&self, planner: PlannerKind, iteration: usize) -> Option<f64> {
        let agg = self.aggregate();
        self.relative_gap_from(&agg, planner, iteration)
    }

    fn relative_gap_from(&self, agg: &[ConvergenceRecord], planner: PlannerKind, iteration: usize) -> Option<f64> {
        let mut sum = 0.0;
        for &(index, _, c_star) in &self.references {
            let rec = agg.iter().find(|r| r.planner == planner && r.workspace_index == index && r.iteration == iteration)?;
            if !(rec.mean_best_cost.is_finite() && c_star.is_finite()) {
                return None;
            }
            sum += rec.mean_best_cost / c_star - 1.0;
        }
        Some(sum / self.references.len() as f64)
    }

    pub fn raw_csv(&self) -> String {
        raw_csv(&self.runs)
    }

    pub fn aggregate_csv(&self) -> String {
        let mut out = format!(
            "{CSV_VERSION_LINE}\nplanner,workspace_index,workspace_seed,iteration,mean_best_cost,trials_aggregated,excluded\n"
        );
        for r in self.aggregate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.planner.label(),
                r.workspace_index,
                r.workspace_seed,
                r.iteration,
                fmt_f64(r.mean_best_cost),
                r.trials_aggregated,
                r.excluded
            );
        }
        out
    }

    pub fn reference_csv(&self) -> String {
        let mut out = format!("{CSV_VERSION_LINE}\nworkspace_index,workspace_seed,c_star,reference_iterations\n");
        for &(i, s, c) in &self.references {
            let _ = writeln!(out, "{i},{s},{},{}", fmt_f64(c), self.spec.reference_iterations());
        }
        out
    }

    pub fn gap_csv(&self) -> String {
        let agg = self.aggregate();
        let mut out = format!("{CSV_VERSION_LINE}\nplanner,iteration,mean_relative_gap\n");
        for &planner in &self.spec.planners {
            for it in 1..=self.spec.iterations {
                let gap = self.relative_gap_from(&agg, planner, it).unwrap_or(f64::NAN);
                let _ = writeln!(out, "{},{it},{}", planner.label(), fmt_f64(gap));
            }
        }
        out
    }

    /// `(file name, contents)` of every output file.
    pub fn outputs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("raw.csv", self.raw_csv()),
            ("aggregate.csv", self.aggregate_csv()),
            ("reference.csv", self.reference_csv()),
            ("gap.csv", self.gap_csv()),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct CompletenessStudy {
    pub spec: StudySpec,
    pub runs: Vec<TrialRun>,
}

pub fn run_completeness_study(spec: &StudySpec) -> Result<CompletenessStudy, BenchError> {
    spec.validate()?;
    let workspaces = spec.workspaces()?;
    let runs = run_trials(spec, &workspaces)?;
    Ok(CompletenessStudy { spec: spec.clone(), runs })
}

impl CompletenessStudy {
    /// Pooled success count per iteration (1-based index `i` at position `i-1`)
    /// and the number of trials.
    pub fn successes(&self, planner: PlannerKind) -> (Vec<usize>, usize) {
        let runs: Vec<&TrialRun> = self.runs.iter().filter(|r| r.planner == planner).collect();
        let counts =
            (0..self.spec.iterations).map(|it| runs.iter().filter(|r| r.costs[it].is_finite()).count()).collect();
        (counts, runs.len())
    }

    pub fn success_csv(&self) -> String {
        let mut out =
            format!("{CSV_VERSION_LINE}\nplanner,iteration,successes,trials,success_rate,wilson_lo,wilson_hi\n");
        for &planner in &self.spec.planners {
            let (counts, n) = self.successes(planner);
            for (i, &k) in counts.iter().enumerate() {
                let (lo, hi) = wilson_interval(k, n);
                let _ = writeln!(out, "{},{},{k},{n},{},{lo},{hi}", planner.label(), i + 1, k as f64 / n as f64);
            }
        }
        out
    }

    pub fn first_solution_csv(&self) -> String {
        let mut out = format!(
            "{CSV_VERSION_LINE}\nplanner,workspace_index,workspace_seed,trial,trial_seed,first_solution_iteration,final_cost\n"
        );
        for r in &self.runs {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.planner.label(),
                r.workspace_index,
                r.workspace_seed,
                r.trial,
                r.trial_seed,
                r.first_solution_iteration().map_or_else(|| "none".to_string(), |i| i.to_string()),
                fmt_f64(*r.costs.last().unwrap_or(&f64::INFINITY))
            );
        }
        out
    }

    pub fn outputs(&self) -> Vec<(&'static str, String)> {
        vec![("completeness.csv", self.success_csv()), ("trials.csv", self.first_solution_csv())]
    }
}
