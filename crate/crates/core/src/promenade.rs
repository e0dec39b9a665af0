//! The promenade benchmark: a square room with a square pillar, start and goal
//! low on either side. Short (Type-L) solutions pass below the pillar, long
//! (Type-B) ones above it. A five-state automaton watching the vertices GSE
//! adds detects runs that are locked into the long class.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{Aabb, Environment, GeometryError, Obstacle, Point, Problem};
use crate::planners::{GsePlanner, PlannerConfig, PlannerError, Variant};
use crate::roadmap::PathResult;
use crate::scalar::Scalar;
use crate::shape::build_shape;
use crate::stats::{derive_seed, wilson_interval};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PromenadeError {
    #[error("invalid promenade configuration: {0}")]
    Config(String),
    #[error("path not found")]
    PathNotFound,
    #[error(transparent)]
    Planner(#[from] PlannerError),
}

impl From<GeometryError> for PromenadeError {
    fn from(e: GeometryError) -> Self {
        PromenadeError::Planner(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PromenadeSpec<T> {
    /// Pillar side; the room side is `alpha + 2`.
    pub alpha: T,
    /// Offset of start and goal from the pillar's lower corners.
    pub epsilon: T,
    /// Side of the forward squares.
    pub gamma_f: T,
}

impl<T: Scalar> Default for PromenadeSpec<T> {
    fn default() -> Self {
        Self { alpha: T::lit(2.0), epsilon: T::lit(0.05), gamma_f: T::lit(0.3) }
    }
}

impl<T: Scalar> PromenadeSpec<T> {
    pub fn validate(&self) -> Result<(), PromenadeError> {
        let Self { alpha, epsilon, gamma_f } = *self;
        if !(alpha.is_finite() && alpha >= T::lit(2.0)) {
            return Err(PromenadeError::Config(format!("alpha must be at least 2, got {alpha}")));
        }
        if !(epsilon > T::zero() && epsilon < T::lit(0.25) * alpha.min(T::one())) {
            return Err(PromenadeError::Config(format!("epsilon must lie in (0, 0.25), got {epsilon}")));
        }
        if !(gamma_f > T::zero() && gamma_f < T::lit(2.0) / T::lit(3.0)) {
            return Err(PromenadeError::Config(format!("gamma_f must lie in (0, 2/3), got {gamma_f}")));
        }
        Ok(())
    }

    /// Cost of the short solution around the two lower pillar corners.
    pub fn type_l_optimum(&self) -> T {
        self.alpha + T::lit(2.0) * self.epsilon * T::lit(5.0).sqrt()
    }
}

/// Labelled regions of the promenade room.
#[derive(Clone, Debug, PartialEq)]
pub struct Regions<T> {
    pub alpha: T,
    pub b1: Aabb<T>,
    pub b2: Aabb<T>,
    pub f_init: Aabb<T>,
    pub f1: Aabb<T>,
    pub f2: Aabb<T>,
}

impl<T: Scalar> Regions<T> {
    pub fn new(alpha: T, gamma_f: T) -> Result<Self, GeometryError> {
        let one = T::one();
        let two = T::lit(2.0);
        let top = alpha + two;
        let g = gamma_f;
        let mid = alpha / two + one;
        Ok(Self {
            alpha,
            b1: Aabb::new(vec![T::zero(), alpha + one], vec![one, top])?,
            b2: Aabb::new(vec![alpha + one, alpha + one], vec![top, top])?,
            f_init: Aabb::new(vec![one - g, top - g], vec![one, top])?,
            f1: Aabb::new(vec![mid - g / two, top - T::lit(1.5) * g], vec![mid + g / two, top - g / two])?,
            f2: Aabb::new(vec![alpha + one, top - g], vec![alpha + one + g, top])?,
        })
    }

    /// Mirror image about the vertical line through the pillar's center.
    pub fn reflect(&self, p: &[T]) -> Vec<T> {
        let mut q = p.to_vec();
        q[0] = self.alpha + T::lit(2.0) - p[0];
        q
    }

    /// `x + y <= 2`: the lower-left corner triangle.
    pub fn in_l1(&self, p: &[T]) -> bool {
        p[0] + p[1] <= T::lit(2.0)
    }

    pub fn in_l2(&self, p: &[T]) -> bool {
        self.in_l1(&self.reflect(p))
    }
}

/// Environment, start, goal and regions of a promenade instance.
#[derive(Clone, Debug)]
pub struct Promenade<T> {
    pub spec: PromenadeSpec<T>,
    pub problem: Problem<T>,
    pub regions: Regions<T>,
}

pub fn build_promenade<T: Scalar>(spec: &PromenadeSpec<T>) -> Result<Promenade<T>, PromenadeError> {
    spec.validate()?;
    let PromenadeSpec { alpha, epsilon, gamma_f } = *spec;
    let one = T::one();
    let two = T::lit(2.0);
    let bounds = Aabb::cube(2, alpha + two)?;
    let pillar = Obstacle::axis_box(vec![one, one], vec![alpha + one, alpha + one])?;
    let env = Environment::new(bounds, vec![pillar])?;
    let init = Point::new(vec![one - epsilon, one + two * epsilon]);
    let goal = Point::new(vec![alpha + one + epsilon, one + two * epsilon]);
    let problem = Problem::new(env, init, goal)?;
    let regions = Regions::new(alpha, gamma_f)?;
    check_forward_visibility(&problem.env, &regions)?;
    Ok(Promenade { spec: *spec, problem, regions })
}

/// Every point of F1 must see all of F2 through its shape; checked on a grid
/// over F1 against the corners and center of F2.
fn check_forward_visibility<T: Scalar>(env: &Environment<T>, regions: &Regions<T>) -> Result<(), PromenadeError> {
    const GRID: usize = 12;
    let mut targets: Vec<Point<T>> = regions.f2.corners().map(Point::new).collect();
    targets.push(Point::new(regions.f2.lo().iter().zip(regions.f2.hi()).map(|(&l, &h)| (l + h) / T::lit(2.0)).collect()));
    let (lo, hi) = (regions.f1.lo(), regions.f1.hi());
    for i in 0..=GRID {
        for j in 0..=GRID {
            let s = T::from_usize_lossy(i) / T::from_usize_lossy(GRID);
            let t = T::from_usize_lossy(j) / T::from_usize_lossy(GRID);
            let x = Point::new(vec![lo[0] + (hi[0] - lo[0]) * s, lo[1] + (hi[1] - lo[1]) * t]);
            let shape = build_shape(env, &x)?;
            if !targets.iter().all(|q| shape.contains(q)) {
                return Err(PromenadeError::Config("F2 is not inside the shape of every F1 point".into()));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutomatonState {
    Init,
    S1,
    S2,
    Accepting,
    Rejecting,
}

impl AutomatonState {
    pub fn is_absorbing(self) -> bool {
        matches!(self, AutomatonState::Accepting | AutomatonState::Rejecting)
    }

    pub fn label(self) -> &'static str {
        match self {
            AutomatonState::Init => "s_init",
            AutomatonState::S1 => "s_1",
            AutomatonState::S2 => "s_2",
            AutomatonState::Accepting => "s_accepting",
            AutomatonState::Rejecting => "s_rejecting",
        }
    }
}

impl fmt::Display for AutomatonState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Feeds one added vertex to the automaton. A vertex in L1 rejects; otherwise
/// a vertex in the current state's forward region advances the state.
pub fn automaton_step<T: Scalar>(state: AutomatonState, vertex: &[T], regions: &Regions<T>) -> AutomatonState {
    use AutomatonState::*;
    if state.is_absorbing() {
        return state;
    }
    if regions.in_l1(vertex) {
        return Rejecting;
    }
    let (forward, next) = match state {
        Init => (&regions.f_init, S1),
        S1 => (&regions.f1, S2),
        S2 => (&regions.f2, Accepting),
        Accepting | Rejecting => unreachable!(),
    };
    if forward.contains(vertex) {
        next
    } else {
        state
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolutionType {
    TypeL,
    TypeB,
    Other,
}

impl SolutionType {
    pub fn label(self) -> &'static str {
        match self {
            SolutionType::TypeL => "TypeL",
            SolutionType::TypeB => "TypeB",
            SolutionType::Other => "Other",
        }
    }
}

impl fmt::Display for SolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies a polyline: Type-B when it meets both upper corner boxes,
/// Type-L when it meets both lower corner triangles.
pub fn classify_polyline<T: Scalar>(polyline: &[Point<T>], regions: &Regions<T>) -> SolutionType {
    let segments = || polyline.windows(2).map(|w| (w[0].coords(), w[1].coords()));
    let single = polyline.len() == 1;
    let meets_box = |b: &Aabb<T>| {
        (single && b.contains(polyline[0].coords())) || segments().any(|(a, c)| b.intersects_segment(a, c))
    };
    if meets_box(&regions.b1) && meets_box(&regions.b2) {
        return SolutionType::TypeB;
    }
    // a segment meets a half-plane iff one of its endpoints does
    let l1 = polyline.iter().any(|p| regions.in_l1(p.coords()));
    let l2 = polyline.iter().any(|p| regions.in_l2(p.coords()));
    if l1 && l2 {
        SolutionType::TypeL
    } else {
        SolutionType::Other
    }
}

pub fn classify_path<T: Scalar>(
    path: &PathResult<T>,
    points: &[Point<T>],
    regions: &Regions<T>,
) -> Result<SolutionType, PromenadeError> {
    if !path.found {
        return Err(PromenadeError::PathNotFound);
    }
    let polyline: Vec<Point<T>> = path.vertices.iter().map(|&v| points[v].clone()).collect();
    Ok(classify_polyline(&polyline, regions))
}

/// Outcome of one GSE run on the promenade.
///
/// GSE is single-query: it stops and returns the first start-to-goal path.
/// The `budget_*` fields describe the least-cost path had the run continued
/// to the full iteration budget.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord<T> {
    pub trial: usize,
    pub seed: u64,
    /// Class of the returned (first) path.
    pub result_type: Option<SolutionType>,
    /// Automaton state when the run stops.
    pub automaton_final_state: AutomatonState,
    /// Cost of the returned path, `+inf` when none was found.
    pub final_cost: T,
    pub iterations_to_first_path: Option<usize>,
    pub budget_type: Option<SolutionType>,
    pub budget_cost: T,
    pub budget_automaton_state: AutomatonState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutomatonStudy<T> {
    pub trials: Vec<TrialRecord<T>>,
    pub accept_rate: f64,
    pub reject_rate: f64,
    pub undecided_rate: f64,
    /// 95% Wilson interval of the acceptance probability.
    pub accept_interval: (f64, f64),
}

impl<T: Scalar> AutomatonStudy<T> {
    fn count(&self, f: impl Fn(&TrialRecord<T>) -> bool) -> usize {
        self.trials.iter().filter(|t| f(t)).count()
    }

    /// Number of Type-B returned paths and the 95% Wilson interval of their share.
    pub fn type_b_interval(&self) -> (usize, (f64, f64)) {
        let k = self.count(|t| t.result_type == Some(SolutionType::TypeB));
        (k, wilson_interval(k, self.trials.len()))
    }

    /// Same, for the least-cost path at the end of the iteration budget.
    pub fn budget_type_b_interval(&self) -> (usize, (f64, f64)) {
        let k = self.count(|t| t.budget_type == Some(SolutionType::TypeB));
        (k, wilson_interval(k, self.trials.len()))
    }

    /// Trials contradicting "Type-L path ⟹ rejected" and "accepted ⟹ Type-B
    /// path", judged on the returned path and the state when the run stops.
    pub fn lemma_violations(&self) -> (usize, usize) {
        let l = self.count(|t| {
            t.result_type == Some(SolutionType::TypeL) && t.automaton_final_state != AutomatonState::Rejecting
        });
        let b = self.count(|t| {
            t.automaton_final_state == AutomatonState::Accepting
                && t.result_type.is_some_and(|r| r != SolutionType::TypeB)
        });
        (l, b)
    }

    /// One row per trial: `trial,seed,result_type,automaton_final_state,final_cost,
    /// iterations_to_first_path,budget_type,budget_cost,budget_automaton_state`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "trial,seed,result_type,automaton_final_state,final_cost,iterations_to_first_path,budget_type,budget_cost,budget_automaton_state\n",
        );
        let opt_type = |t: Option<SolutionType>| t.map_or("none", |t| t.label());
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                t.trial,
                t.seed,
                opt_type(t.result_type),
                t.automaton_final_state,
                crate::planners::format_cost(t.final_cost),
                t.iterations_to_first_path.map_or_else(|| "none".to_string(), |i| i.to_string()),
                opt_type(t.budget_type),
                crate::planners::format_cost(t.budget_cost),
                t.budget_automaton_state,
            ));
        }
        out
    }
}

/// Runs one GSE trial for the full iteration budget, feeding every added
/// vertex to the automaton and recording the state at the first path.
pub fn run_trial<T: Scalar>(
    promenade: &Promenade<T>,
    config: &PlannerConfig<T>,
    trial: usize,
    seed: u64,
) -> Result<TrialRecord<T>, PromenadeError> {
    let cfg = PlannerConfig { seed, ..config.clone() };
    let mut planner = GsePlanner::new(&promenade.problem, &cfg, Variant::Gse)?;
    let mut state = AutomatonState::Init;
    let mut first: Option<(usize, SolutionType, T, AutomatonState)> = None;
    for it in 1..=cfg.iterations {
        let out = planner.step()?;
        for &v in &out.added {
            state = automaton_step(state, planner.roadmap().point(v).coords(), &promenade.regions);
        }
        if first.is_none() && planner.best_cost().is_finite() {
            let path = planner.best_path();
            let kind = classify_path(&path, planner.roadmap().points(), &promenade.regions)?;
            first = Some((it, kind, path.cost, state));
        }
    }
    let path = planner.best_path();
    let budget_type = if path.found {
        Some(classify_path(&path, planner.roadmap().points(), &promenade.regions)?)
    } else {
        None
    };
    Ok(TrialRecord {
        trial,
        seed,
        result_type: first.map(|f| f.1),
        automaton_final_state: first.map_or(state, |f| f.3),
        final_cost: first.map_or_else(T::infinity, |f| f.2),
        iterations_to_first_path: first.map(|f| f.0),
        budget_type,
        budget_cost: path.cost,
        budget_automaton_state: state,
    })
}

/// Runs `trials` independent GSE trials with seeds derived from `master_seed`.
pub fn run_automaton_study<T: Scalar>(
    spec: &PromenadeSpec<T>,
    config: &PlannerConfig<T>,
    trials: usize,
    master_seed: u64,
) -> Result<AutomatonStudy<T>, PromenadeError> {
    if trials == 0 {
        return Err(PromenadeError::Config("trials must be at least 1".into()));
    }
    let promenade = build_promenade(spec)?;
    let records = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(&promenade, config, t, derive_seed(master_seed, 0, t as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let n = trials as f64;
    let count = |s: AutomatonState| records.iter().filter(|r| r.automaton_final_state == s).count();
    let accepted = count(AutomatonState::Accepting);
    let rejected = count(AutomatonState::Rejecting);
    Ok(AutomatonStudy {
        accept_rate: accepted as f64 / n,
        reject_rate: rejected as f64 / n,
        undecided_rate: (trials - accepted - rejected) as f64 / n,
        accept_interval: wilson_interval(accepted, trials),
        trials: records,
    })
}
