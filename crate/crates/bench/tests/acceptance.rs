//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Run a subset with `cargo test -p gse-bench --test acceptance -- 3 6`.
//! Criteria listed in `KNOWN_RED` are reported as FAIL but do not fail the
//! target; any other FAIL does.

use std::process::ExitCode;
use std::time::Instant;

use gse_bench::study::{
    run_completeness_study, run_convergence_study, PlannerKind, PromenadeParams, StudyKind, StudySpec,
};
use gse_bench::workspace::random_workspace;
use gse_core::geometry::{Aabb, Environment, Point, Problem};
use gse_core::planners::{
    connection_radius, gamma_lower_bound, GsePlanner, PlannerConfig, SampleTape, Variant,
};
use gse_core::promenade::{build_promenade, run_automaton_study, PromenadeSpec};
use gse_core::roadmap::{Roadmap, VertexId};
use gse_core::shape::{build_shape, shapes_connect, GeneralizedShape};
use gse_core::stats::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criteria that are expected to fail as specified.
const KNOWN_RED: &[u32] = &[8, 9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

fn shape_at(env: &Environment<f64>, rng: &mut ChaCha8Rng) -> GeneralizedShape<f64> {
    loop {
        let x = env.sample_free(rng, 1_000_000).expect("workspace has free space");
        if let Ok(s) = build_shape(env, &x) {
            return s;
        }
    }
}

/// A member of `s`: uniform rejection in the bounds first, then a point on a
/// random ray inside the free length.
fn member(env: &Environment<f64>, s: &GeneralizedShape<f64>, rng: &mut ChaCha8Rng) -> Point<f64> {
    for _ in 0..50 {
        let p = env.sample_uniform(rng);
        if s.contains(&p) {
            return p;
        }
    }
    let u = random_direction(rng, env.dim());
    let t = s.free_length_along(&u) * rng.gen_range(0.0..1.0);
    s.center().offset(&Point::new(u), t)
}

/// Ten workspaces: d ∈ {2, 3} × m ∈ {4, 16}.
fn criterion_envs() -> Vec<Environment<f64>> {
    (0..10u64)
        .map(|i| {
            let d = 2 + (i as usize % 2);
            let m = if (i / 2) % 2 == 0 { 4 } else { 16 };
            random_workspace(d, m, 1000 + i).unwrap().env
        })
        .collect()
}

fn c1_shape_safety() -> Outcome {
    let envs = criterion_envs();
    let results: Vec<(usize, usize)> = envs
        .par_iter()
        .enumerate()
        .map(|(i, env)| {
            let mut rng = ChaCha8Rng::seed_from_u64(10 + i as u64);
            let step = 1e-3 * env.bounds().diagonal();
            let mut bad = 0;
            for _ in 0..10_000 {
                let s = shape_at(env, &mut rng);
                let p = member(env, &s, &mut rng);
                assert!(s.contains(&p));
                if !env.segment_collision_free(s.center(), &p, step) {
                    bad += 1;
                }
            }
            (bad, 10_000)
        })
        .collect();
    let bad: usize = results.iter().map(|r| r.0).sum();
    let total: usize = results.iter().map(|r| r.1).sum();
    outcome(bad == 0, format!("{bad} unsafe of {total} member segments"))
}

fn c2_star_convexity() -> Outcome {
    let envs = criterion_envs();
    let violations: usize = (0..1000usize)
        .into_par_iter()
        .map(|k| {
            let env = &envs[k % envs.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(20_000 + k as u64);
            let s = shape_at(env, &mut rng);
            let mut bad = 0;
            for _ in 0..100 {
                let p = member(env, &s, &mut rng);
                // depth-8 midpoint refinement: all dyadic points k/256
                for j in 1..256 {
                    if !s.contains(&Point::lerp(s.center(), &p, j as f64 / 256.0)) {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .sum();
    outcome(violations == 0, format!("{violations} violations over 1000 shapes x 100 members x 255 points"))
}

/// Joint membership of 10^4 evenly spaced points of the center segment.
fn brute_force_connect(a: &GeneralizedShape<f64>, b: &GeneralizedShape<f64>) -> bool {
    (0..=10_000).all(|k| {
        let q = Point::lerp(a.center(), b.center(), k as f64 / 10_000.0);
        a.contains(&q) || b.contains(&q)
    })
}

fn bellman_ford(n: usize, edges: &[(VertexId, VertexId, f64)], src: VertexId) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; n];
    d[src] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for &(a, b, w) in edges {
            for (u, v) in [(a, b), (b, a)] {
                if d[u] + w < d[v] {
                    d[v] = d[u] + w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

fn c3_oracle_equivalence() -> Outcome {
    let envs = criterion_envs();
    let pairs: Vec<(bool, bool)> = (0..1000usize)
        .into_par_iter()
        .map(|k| {
            let env = &envs[k % envs.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(30_000 + k as u64);
            let a = shape_at(env, &mut rng);
            // half the pairs are close enough that connection is likely
            let b = if k % 2 == 0 {
                shape_at(env, &mut rng)
            } else {
                loop {
                    let u = random_direction(&mut rng, env.dim());
                    let r = rng.gen_range(0.0..1.5) * a.free_length_along(&u).min(env.bounds().diagonal());
                    let x = a.center().offset(&Point::new(u), r);
                    if env.bounds().contains(x.coords()) && env.is_free(x.coords()) {
                        if let Ok(s) = build_shape(env, &x) {
                            break s;
                        }
                    }
                }
            };
            (shapes_connect(&a, &b), brute_force_connect(&a, &b))
        })
        .collect();
    let disagreements = pairs.iter().filter(|(a, b)| a != b).count();
    let connected = pairs.iter().filter(|p| p.0).count();

    let mut graph_failures = 0;
    for g in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + g);
        let d = 2 + (g as usize % 2);
        let bounds = Aabb::cube(d, 10.0).unwrap();
        let pt = |rng: &mut ChaCha8Rng| Point::new((0..d).map(|_| rng.gen_range(0.0..10.0)).collect());
        let mut rm = Roadmap::new(bounds, pt(&mut rng), None, pt(&mut rng), None);
        let n = rng.gen_range(2..=50);
        for _ in 2..n {
            rm.add_vertex(pt(&mut rng), None);
        }
        let m = rng.gen_range(0..=3 * n);
        for _ in 0..m {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            rm.add_edge(a, b);
        }
        for _ in 0..20 {
            let q = pt(&mut rng);
            let dist = |i: usize| rm.point(i).distance(&q);
            let lin = (0..n).min_by(|&i, &j| dist(i).partial_cmp(&dist(j)).unwrap().then(i.cmp(&j))).unwrap();
            let r = rng.gen_range(0.0..6.0);
            let lin_near: Vec<usize> = (0..n).filter(|&i| dist(i) <= r).collect();
            if rm.nearest(&q) != lin || rm.near(&q, r) != lin_near {
                graph_failures += 1;
            }
        }
        let bf = bellman_ford(n, rm.edges(), rm.init_id())[rm.goal_id()];
        let path = rm.min_path();
        let ok = if bf.is_finite() {
            let valid = path.vertices.first() == Some(&rm.init_id())
                && path.vertices.last() == Some(&rm.goal_id())
                && path.vertices.windows(2).all(|w| rm.has_edge(w[0], w[1]));
            path.found && valid && (path.cost - bf).abs() <= 1e-12 * bf.max(1.0) && (rm.best_cost() - bf).abs() <= 1e-12 * bf.max(1.0)
        } else {
            !path.found && !rm.best_cost().is_finite()
        };
        if !ok {
            graph_failures += 1;
        }
    }
    outcome(
        disagreements == 0 && graph_failures == 0,
        format!("{disagreements} shapes_connect disagreements of 1000 pairs ({connected} connected), {graph_failures} graph oracle mismatches"),
    )
}

fn c4_subgraph() -> Outcome {
    let failures: usize = (0..20u64)
        .into_par_iter()
        .map(|e| {
            let problem = random_workspace(2 + (e as usize % 2), 4 + 4 * (e as usize % 3), 500 + e).unwrap();
            let cfg = PlannerConfig::default().with_iterations(200);
            let tape = SampleTape::record(&problem.env, derive_seed(4, e, 0), 200, cfg.sample_attempts).unwrap();
            let mut gse = GsePlanner::with_source(&problem, &cfg, Variant::Gse, Box::new(tape.clone())).unwrap();
            let mut star = GsePlanner::with_source(&problem, &cfg, Variant::GseStar, Box::new(tape)).unwrap();
            let mut bad = 0;
            for _ in 0..200 {
                gse.step().unwrap();
                star.step().unwrap();
                let (g, s) = (gse.roadmap(), star.roadmap());
                let map = star.layer_vertices();
                let vertices_ok =
                    map.len() == g.vertex_count() && map.iter().enumerate().all(|(gi, &si)| g.point(gi) == s.point(si));
                let edges_ok = vertices_ok && g.edges().iter().all(|&(a, b, _)| s.has_edge(map[a], map[b]));
                if !(vertices_ok && edges_ok) {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    outcome(failures == 0, format!("{failures} iterations violating inclusion over 20 environments x 200"))
}

fn completeness_spec(promenade: bool) -> StudySpec {
    StudySpec {
        kind: StudyKind::Completeness,
        dim: 2,
        obstacles: 4,
        workspace_seeds: if promenade { vec![] } else { vec![71, 72, 73, 74] },
        trials: if promenade { 200 } else { 50 },
        iterations: 200,
        planners: vec![PlannerKind::Gse, PlannerKind::GseStar],
        master_seed: 5,
        reference_iterations: None,
        promenade: promenade.then(PromenadeParams::default),
    }
}

fn c5_completeness() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, promenade) in [("promenade", true), ("m=4 d=2", false)] {
        let study = run_completeness_study(&completeness_spec(promenade)).unwrap();
        for p in [PlannerKind::Gse, PlannerKind::GseStar] {
            let (counts, n) = study.successes(p);
            let monotone = counts.windows(2).all(|w| w[1] >= w[0]);
            let rate = counts[199] as f64 / n as f64;
            pass &= monotone && rate >= 0.99;
            detail.push(format!("{name} {} {}/{n} monotone={monotone}", p.label(), counts[199]));
        }
    }
    outcome(pass, detail.join("; "))
}

fn c6_non_optimality() -> Outcome {
    let spec = PromenadeSpec::<f64>::default();
    let study = run_automaton_study(&spec, &PlannerConfig::default().with_iterations(500), 500, 0).unwrap();
    let (type_b, (lo, _)) = study.type_b_interval();
    let (vl, vb) = study.lemma_violations();
    let o = outcome(
        lo > 0.0 && vl == 0 && vb == 0,
        format!("type-B {type_b}/500, Wilson lower bound {lo:.4}, lemma violations {vl}+{vb}"),
    );
    println!(
        "info  6a accept rate {:.4} (Wilson [{:.4}, {:.4}]), reject {:.4}, undecided {:.4}",
        study.accept_rate, study.accept_interval.0, study.accept_interval.1, study.reject_rate, study.undecided_rate
    );
    o
}

fn c7_convergence_trend() -> Outcome {
    let spec = StudySpec {
        kind: StudyKind::Convergence,
        dim: 2,
        obstacles: 4,
        workspace_seeds: vec![71, 72, 73, 74],
        trials: 25,
        iterations: 500,
        planners: vec![PlannerKind::Gse, PlannerKind::GseStar],
        master_seed: 7,
        reference_iterations: Some(4000),
        promenade: None,
    };
    let study = run_convergence_study(&spec).unwrap();
    let star_300 = study.relative_gap(PlannerKind::GseStar, 300);
    let star_end = study.relative_gap(PlannerKind::GseStar, 500);
    let gse_end = study.relative_gap(PlannerKind::Gse, 500);
    let within = star_300.is_some_and(|g| g <= 0.05);
    let ordered = matches!((gse_end, star_end), (Some(g), Some(s)) if g > s);
    let fmt = |g: Option<f64>| g.map_or_else(|| "none".to_string(), |g| format!("{:.4}", g));
    outcome(
        within && ordered,
        format!(
            "GSE* gap at 300 {}, final gaps GSE {} vs GSE* {}",
            fmt(star_300),
            fmt(gse_end),
            fmt(star_end)
        ),
    )
}

fn c8_promenade_optimum() -> Outcome {
    let spec = PromenadeSpec::<f64>::default();
    let pr = build_promenade(&spec).unwrap();
    let optimum = spec.type_l_optimum();
    let mut costs: Vec<f64> = (0..101u64)
        .into_par_iter()
        .map(|t| {
            let cfg = PlannerConfig::default().with_iterations(500).with_seed(derive_seed(8, 0, t));
            let mut planner = GsePlanner::new(&pr.problem, &cfg, Variant::GseStar).unwrap();
            planner.run().unwrap();
            planner.best_cost()
        })
        .collect();
    costs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = costs[costs.len() / 2];
    let rel = (median - optimum).abs() / optimum;
    outcome(rel <= 0.03, format!("median {median:.4} over 101 trials vs optimum {optimum:.4} ({:.2}% off)", 100.0 * rel))
}

fn c9_formulas() -> Outcome {
    let r: f64 = connection_radius(100, 2, 2.0, 0.5);
    let bound: f64 = gamma_lower_bound(2, 12.0, 0.5, 1.0);
    let mut defaults_ok = true;
    for seed in 0..10 {
        let problem: Problem<f64> = random_workspace(2 + seed as usize % 2, 4, seed).unwrap();
        let params = PlannerConfig::default().resolve(&problem.env).unwrap();
        defaults_ok &= params.gamma > params.gamma_bound;
    }
    let r_ok = (r - 0.42923).abs() <= 1e-5;
    let b_ok = (bound - 4.0 / 3.0).abs() <= 1e-12;
    outcome(
        r_ok && b_ok && defaults_ok,
        format!("radius {r:.7} (expected 0.42923 +- 1e-5), bound {bound:.15}, default gamma above bound: {defaults_ok}"),
    )
}

fn c10_reproducibility() -> Outcome {
    let conv = StudySpec {
        kind: StudyKind::Convergence,
        dim: 2,
        obstacles: 4,
        workspace_seeds: vec![1, 2],
        trials: 4,
        iterations: 120,
        planners: vec![PlannerKind::Gse, PlannerKind::GseStar, PlannerKind::PrmStar],
        master_seed: 10,
        reference_iterations: Some(400),
        promenade: None,
    };
    let comp = StudySpec { kind: StudyKind::Completeness, promenade: Some(PromenadeParams::default()), ..conv.clone() };
    let a = run_convergence_study(&conv).unwrap().outputs();
    let b = run_convergence_study(&conv).unwrap().outputs();
    let c = run_completeness_study(&comp).unwrap().outputs();
    let d = run_completeness_study(&comp).unwrap().outputs();
    let cfg = PlannerConfig::<f64>::default().with_iterations(150);
    let e = run_automaton_study(&PromenadeSpec::default(), &cfg, 20, 10).unwrap().to_csv();
    let f = run_automaton_study(&PromenadeSpec::default(), &cfg, 20, 10).unwrap().to_csv();
    let same = a == b && c == d && e == f;
    outcome(same, format!("{} convergence, {} completeness and 1 promenade CSV files compared", a.len(), c.len()))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: &[Criterion] = &[
    (1, "shape safety", c1_shape_safety),
    (2, "star-convexity", c2_star_convexity),
    (3, "oracle equivalence", c3_oracle_equivalence),
    (4, "subgraph property", c4_subgraph),
    (5, "probabilistic completeness trend", c5_completeness),
    (6, "non-optimality of GSE", c6_non_optimality),
    (7, "asymptotic optimality trend of GSE*", c7_convergence_trend),
    (8, "promenade optimum", c8_promenade_optimum),
    (9, "formula checks", c9_formulas),
    (10, "reproducibility", c10_reproducibility),
];

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for &(id, name, run) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_RED.contains(&id);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && known { " [known red]" } else { "" };
        println!("{verdict}  {id:>2} {name}: {} ({secs:.1}s){note}", o.detail);
        if !o.pass && !known {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
