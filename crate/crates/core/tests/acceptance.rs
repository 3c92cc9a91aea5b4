//! Acceptance criteria, one pass/fail line each. Exits non-zero on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use deliberation_core::dynamics::{adaptive_field, combined_field, independence_field};
use deliberation_core::geometry::{manifold_relation, ManifoldRelation};
use deliberation_core::simulate::{
    basin_sweep, mixed_equilibrium_causal, reconciliation_search, skyrms_equilibrium, sweep_starts,
    Grid, LambdaRange, REPORTED_RATIFIABLE_MIX,
};
use deliberation_core::{
    indifference_plane, integrate, AdaptiveRule, Anchor, Classification, Controls, CouplingCurves,
    DecisionProblem, DeliberationState, DynamicsConfig, IndependenceVariant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_dee1;
const CASES: usize = 1000;
const RUNTIME_BUDGET: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn state(p: f64, q1: f64, q2: f64) -> DeliberationState {
    DeliberationState { p, q1, q2 }
}

/// Evidential expected utilities straight from a payoff table.
fn eu_table(u: [[f64; 2]; 2], q1: f64, q2: f64) -> (f64, f64) {
    (
        u[0][0] * (1.0 - q1) + u[0][1] * q1,
        u[1][0] * (1.0 - q2) + u[1][1] * q2,
    )
}

const DID: [[f64; 2]; 2] = [[0.0, 10.0], [9.0, -1.0]];

fn indifference_plane_did() -> Outcome {
    let ip = *indifference_plane(&DecisionProblem::death_in_damascus())
        .as_plane()
        .ok_or("no plane")?;
    let plane = ip.plane();
    let err = (plane.alpha - 1.0)
        .abs()
        .max((plane.beta - 1.0).abs())
        .max((plane.gamma - 0.9).abs());
    check(err <= 1e-12, format!("plane {plane:?} deviates by {err:e}"))?;
    let ManifoldRelation::Intersecting { intersection_q, .. } = manifold_relation(&plane) else {
        return Err("plane does not meet the manifold".into());
    };
    check(
        (intersection_q - 0.45).abs() <= 1e-12,
        format!("intersection at {intersection_q}"),
    )?;
    let (e1, e2) = DecisionProblem::death_in_damascus()
        .eu_evidential(intersection_q, intersection_q)
        .map_err(|e| e.to_string())?;
    check(
        (e1 - 4.5).abs() <= 1e-12 && (e2 - 4.5).abs() <= 1e-12,
        format!("EU at intersection ({e1}, {e2})"),
    )?;
    Ok(format!(
        "plane {}*q1 + {}*q2 = {}, meets q1=q2={intersection_q} with EU {e1}/{e2}",
        plane.alpha, plane.beta, plane.gamma
    ))
}

fn geometry_theorems() -> Outcome {
    let did = indifference_plane(&DecisionProblem::death_in_damascus())
        .as_plane()
        .ok_or("no DiD plane")?
        .plane();
    let dot = did.normal_dot_manifold();
    check(dot == 0.0, format!("DiD normal dot product {dot}"))?;
    let newcomb = DecisionProblem::newcomb(1e6, 0.0, 1e3).map_err(|e| e.to_string())?;
    let plane = indifference_plane(&newcomb)
        .as_plane()
        .ok_or("no Newcomb plane")?
        .plane();
    let ManifoldRelation::Parallel { offset } = manifold_relation(&plane) else {
        return Err(format!("Newcomb relation {:?}", manifold_relation(&plane)));
    };
    check(
        (offset - 0.001).abs() <= 1e-12,
        format!("Newcomb offset {offset}"),
    )?;
    Ok(format!(
        "DiD dot product {dot}; Newcomb parallel at offset {offset}"
    ))
}

fn basin_theorem() -> Outcome {
    let start = Instant::now();
    let report = basin_sweep(
        &DecisionProblem::death_in_damascus(),
        &DynamicsConfig::default(),
        &Grid::cube(21),
        &Controls::default(),
    )
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let (mut above, mut below, mut crossings) = (0, 0, 0);
    for cell in &report.cells {
        let s = cell.initial;
        let (e1, e2) = eu_table(DID, s.q1, s.q2);
        crossings += cell.plane_crossings;
        if e1 > e2 {
            above += 1;
            check(
                cell.endpoint.p <= 1e-3,
                format!("above-plane start {s:?} ended at p = {}", cell.endpoint.p),
            )?;
        } else if e1 < e2 {
            below += 1;
            check(
                cell.endpoint.p >= 1.0 - 1e-3,
                format!("below-plane start {s:?} ended at p = {}", cell.endpoint.p),
            )?;
        } else {
            return Err(format!("grid node {s:?} lies on the plane"));
        }
    }
    check(crossings == 0, format!("{crossings} plane crossings"))?;
    check(
        above + below == 21 * 21 * 21,
        format!("{} cells", above + below),
    )?;
    check(elapsed <= RUNTIME_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!(
        "{above} above -> A1, {below} below -> A2, 0 crossings, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn newcomb_robustness() -> Outcome {
    let start = Instant::now();
    let problem = DecisionProblem::newcomb_problem();
    let variants = [
        IndependenceVariant::ShortestPath,
        IndependenceVariant::OneSided { anchor: Anchor::A2 },
        IndependenceVariant::Weighted { w: 0.25 },
    ];
    let mut finals = Vec::new();
    for variant in variants {
        let report = basin_sweep(
            &problem,
            &DynamicsConfig::default().with_independence(variant),
            &Grid::cube(11),
            &Controls::default(),
        )
        .map_err(|e| e.to_string())?;
        for cell in &report.cells {
            check(
                cell.classification == Classification::PureA2,
                format!(
                    "{} from {:?} classified {:?}",
                    variant.label(),
                    cell.initial,
                    cell.classification
                ),
            )?;
        }
        finals.push(
            report
                .cells
                .iter()
                .map(|c| c.endpoint.p)
                .collect::<Vec<_>>(),
        );
    }
    let elapsed = start.elapsed();
    check(elapsed <= RUNTIME_BUDGET, format!("took {elapsed:?}"))?;
    let spread = finals[0]
        .iter()
        .zip(&finals[1])
        .zip(&finals[2])
        .map(|((a, b), c)| (a - b).abs().max((a - c).abs()))
        .fold(0.0, f64::max);
    Ok(format!(
        "3 x 1331 trajectories all PureA2, max final-p spread across variants {spread:.1e}, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn on_plane_neutrality() -> Outcome {
    let mut starts = Vec::new();
    for i in 1..20 {
        for j in 0..=18 {
            let p = i as f64 / 20.0;
            let q1 = j as f64 * 0.05;
            let q2 = 0.9 - q1;
            if (0.0..=1.0).contains(&q2) && (q1 + q2 - 0.9).abs() <= 1e-9 {
                starts.push(state(p, q1, q2));
            }
        }
    }
    let report = sweep_starts(
        &DecisionProblem::death_in_damascus(),
        &DynamicsConfig::default(),
        &starts,
        &Controls::default(),
    )
    .map_err(|e| e.to_string())?;
    let mut worst_p: f64 = 0.0;
    let mut worst_q: f64 = 0.0;
    for cell in &report.cells {
        let dp = (cell.endpoint.p - cell.initial.p).abs();
        let dq = (cell.endpoint.q1 - 0.45)
            .abs()
            .max((cell.endpoint.q2 - 0.45).abs());
        worst_p = worst_p.max(dp);
        worst_q = worst_q.max(dq);
        check(dp <= 1e-3, format!("{:?} moved p by {dp:e}", cell.initial))?;
        check(
            dq <= 1e-6,
            format!("{:?} ended q off by {dq:e}", cell.initial),
        )?;
    }
    Ok(format!(
        "{} on-plane starts, max |dp| {worst_p:.1e}, max |q - 0.45| {worst_q:.1e}",
        starts.len()
    ))
}

fn shortest_path_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let problems = [
        DecisionProblem::death_in_damascus(),
        DecisionProblem::newcomb_problem(),
    ];
    let controls = Controls {
        max_time: 200.0,
        ..Controls::default()
    };
    let mut worst: f64 = 0.0;
    let runs = 200;
    for i in 0..runs {
        let s = state(rng.random(), rng.random(), rng.random());
        let traj = integrate(&problems[i % 2], &s, &DynamicsConfig::default(), &controls)
            .map_err(|e| e.to_string())?;
        let mid0 = 0.5 * (s.q1 + s.q2);
        for sample in &traj.samples {
            worst = worst.max((0.5 * (sample.state.q1 + sample.state.q2) - mid0).abs());
        }
    }
    check(worst <= 1e-8, format!("midpoint drifted by {worst:e}"))?;
    Ok(format!(
        "{runs} trajectories, max midpoint drift {worst:.1e}"
    ))
}

fn mixed_equilibrium_oracle() -> Outcome {
    // Independent oracle: bisect the tie point of the table, then invert the
    // linear marginal.
    let advantage = |s: f64| {
        let eu1 = DID[0][0] * (1.0 - s) + DID[0][1] * s;
        let eu2 = DID[1][0] * (1.0 - s) + DID[1][1] * s;
        eu2 - eu1
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if advantage(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s_oracle = 0.5 * (lo + hi);
    let p_oracle = (s_oracle - 0.01) / (0.99 - 0.01);

    let eq = mixed_equilibrium_causal(&DecisionProblem::death_in_damascus(), 0.01, 0.99)
        .map_err(|e| e.to_string())?;
    check(
        (eq.s2_star - 0.45).abs() <= 1e-12 && (eq.s2_star - s_oracle).abs() <= 1e-12,
        format!("s2* = {} (oracle {s_oracle})", eq.s2_star),
    )?;
    check(
        (eq.p_star - 0.448980).abs() <= 1e-6 && (eq.p_star - p_oracle).abs() <= 1e-6,
        format!("p* = {} (oracle {p_oracle})", eq.p_star),
    )?;
    Ok(format!(
        "s2* = {:.12}, p* = {:.6}; reference value {REPORTED_RATIFIABLE_MIX} is not reproduced \
         (its update rule is under-specified)",
        eq.s2_star, eq.p_star
    ))
}

fn fragility() -> Outcome {
    let problem = DecisionProblem::death_in_damascus();
    let target = mixed_equilibrium_causal(&problem, 0.01, 0.99)
        .map_err(|e| e.to_string())?
        .p_star;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut starts: Vec<DeliberationState> = (0..40)
        .map(|_| state(rng.random(), rng.random(), rng.random()))
        .collect();
    // Off-plane starts at the target probability, and on-plane starts at and
    // away from it.
    for q1 in [0.1, 0.3, 0.45, 0.7] {
        starts.push(state(target, q1, 0.9 - q1));
        starts.push(state(0.2, q1, 0.9 - q1));
        starts.push(state(target, q1, 0.6 - q1 / 2.0));
    }
    let found = reconciliation_search(
        &problem,
        target,
        &[IndependenceVariant::ShortestPath],
        &LambdaRange {
            min: 0.1,
            max: 10.0,
            n: 9,
        },
        &starts,
        &DynamicsConfig::default(),
        &Controls::default(),
        1e-3,
    )
    .map_err(|e| e.to_string())?;
    check(!found.is_empty(), "no findings at all")?;
    for f in &found {
        let s = f.initial;
        let (e1, e2) = eu_table(DID, s.q1, s.q2);
        check(
            (e1 - e2).abs() <= 1e-8,
            format!("off-plane start {s:?} reached the target"),
        )?;
        check(
            (s.p - target).abs() <= 1e-3,
            format!("on-plane start {s:?} is not at the target"),
        )?;
    }
    Ok(format!(
        "{} of {} starts reconcile, all on the plane at p = target",
        found.len(),
        starts.len()
    ))
}

fn random_table(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-100.0..100.0)))
}

fn random_state(rng: &mut ChaCha8Rng) -> DeliberationState {
    state(rng.random(), rng.random(), rng.random())
}

fn random_rule(rng: &mut ChaCha8Rng, k_lo: f64, k_hi: f64) -> AdaptiveRule {
    match rng.random_range(0..3) {
        0 => AdaptiveRule::SignProportional {
            k: rng.random_range(k_lo..k_hi),
        },
        1 => AdaptiveRule::Nash {
            k: rng.random_range(k_lo..k_hi),
        },
        _ => AdaptiveRule::BrownVonNeumann,
    }
}

fn random_variant(rng: &mut ChaCha8Rng) -> IndependenceVariant {
    match rng.random_range(0..4) {
        0 => IndependenceVariant::ShortestPath,
        1 => IndependenceVariant::OneSided { anchor: Anchor::A1 },
        2 => IndependenceVariant::OneSided { anchor: Anchor::A2 },
        _ => IndependenceVariant::Weighted { w: rng.random() },
    }
}

/// The combined field written out independently of the library.
fn oracle_field(u: [[f64; 2]; 2], cfg: &DynamicsConfig, y: [f64; 3]) -> [f64; 3] {
    let [p, q1, q2] = y;
    let (e1, e2) = eu_table(u, q1, q2);
    let flat = [u[0][0], u[0][1], u[1][0], u[1][1]];
    let span = flat.iter().cloned().fold(f64::MIN, f64::max)
        - flat.iter().cloned().fold(f64::MAX, f64::min);
    let d = if span > 0.0 { (e2 - e1) / span } else { 0.0 };
    // Covetability against the status quo p*eu2 + (1-p)*eu1, on the normalized scale.
    let cov2 = ((1.0 - p) * d).max(0.0);
    let cov1 = (-p * d).max(0.0);
    let dp = match cfg.adaptive_rule {
        AdaptiveRule::SignProportional { k } => k * d * p * (1.0 - p),
        AdaptiveRule::Nash { k } => (cov2 - p * (cov1 + cov2)) / (k + cov1 + cov2),
        AdaptiveRule::BrownVonNeumann => cov2 * cov2 - p * (cov1 * cov1 + cov2 * cov2),
    };
    let w = match cfg.independence {
        IndependenceVariant::ShortestPath => 0.5,
        IndependenceVariant::OneSided { anchor: Anchor::A1 } => 1.0,
        IndependenceVariant::OneSided { anchor: Anchor::A2 } => 0.0,
        IndependenceVariant::Weighted { w } => w,
    };
    [
        dp,
        cfg.kappa * (1.0 - w) * (q2 - q1),
        cfg.kappa * w * (q1 - q2),
    ]
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut lines = Vec::new();

    // Affineness of both expected utilities.
    for _ in 0..CASES {
        let problem = DecisionProblem::from_payoffs(random_table(&mut rng)).unwrap();
        let (lam, x1, x2, y1, y2): (f64, f64, f64, f64, f64) = (
            rng.random(),
            rng.random(),
            rng.random(),
            rng.random(),
            rng.random(),
        );
        let mix = |a: f64, b: f64| lam * a + (1.0 - lam) * b;
        let ex = problem.eu_evidential(x1, x2).unwrap();
        let ey = problem.eu_evidential(y1, y2).unwrap();
        let em = problem.eu_evidential(mix(x1, y1), mix(x2, y2)).unwrap();
        check(
            (em.0 - mix(ex.0, ey.0)).abs() <= 1e-10 && (em.1 - mix(ex.1, ey.1)).abs() <= 1e-10,
            "evidential EU not affine",
        )?;
        let cx = problem.eu_causal(x1).unwrap();
        let cy = problem.eu_causal(y1).unwrap();
        let cm = problem.eu_causal(mix(x1, y1)).unwrap();
        check(
            (cm.0 - mix(cx.0, cy.0)).abs() <= 1e-10 && (cm.1 - mix(cx.1, cy.1)).abs() <= 1e-10,
            "causal EU not affine",
        )?;
    }
    lines.push("affineness");

    // Evidential and causal agree on the manifold.
    for _ in 0..CASES {
        let problem = DecisionProblem::from_payoffs(random_table(&mut rng)).unwrap();
        let q: f64 = rng.random();
        check(
            problem.eu_evidential(q, q).unwrap() == problem.eu_causal(q).unwrap(),
            format!("manifold disagreement at q = {q}"),
        )?;
    }
    lines.push("manifold agreement");

    // Sign contract of every adaptive rule in the interior.
    for _ in 0..CASES {
        let u = random_table(&mut rng);
        let problem = DecisionProblem::from_payoffs(u).unwrap();
        let rule = random_rule(&mut rng, 0.1, 20.0);
        let mut s = random_state(&mut rng);
        s.p = s.p.clamp(1e-6, 1.0 - 1e-6);
        let (e1, e2) = eu_table(u, s.q1, s.q2);
        let dp = adaptive_field(&s, &problem, &rule);
        let ok = if e2 > e1 {
            dp > 0.0
        } else if e2 < e1 {
            dp < 0.0
        } else {
            dp == 0.0
        };
        check(ok, format!("{rule:?} at {s:?}: dp {dp}, EU ({e1}, {e2})"))?;
        // Forcing a tie on the manifold's indifference point.
        if let Some(ip) = indifference_plane(&problem).as_plane() {
            if let ManifoldRelation::Intersecting {
                intersection_q: q, ..
            } = manifold_relation(&ip.plane())
            {
                if (0.0..=1.0).contains(&q) {
                    let tie = state(s.p, q, q);
                    let (e1, e2) = problem.eu_evidential(q, q).unwrap();
                    if e1 == e2 {
                        check(
                            adaptive_field(&tie, &problem, &rule) == 0.0,
                            "non-zero rate at a tie",
                        )?;
                    }
                }
            }
        }
    }
    lines.push("sign contract");

    // |q2 - q1| never grows under the field.
    for _ in 0..CASES {
        let s = random_state(&mut rng);
        let variant = random_variant(&mut rng);
        let kappa = rng.random_range(0.0..50.0);
        let (dq1, dq2) = independence_field(&s, &variant, kappa);
        let gap = s.q2 - s.q1;
        let dgap = dq2 - dq1;
        check(
            gap * dgap <= 0.0 && (gap != 0.0 || dgap == 0.0),
            format!("{variant:?} widens gap {gap} at rate {dgap}"),
        )?;
        let tied = independence_field(&state(s.p, s.q1, s.q1), &variant, kappa);
        check(tied == (0.0, 0.0), "zero gap is not absorbing")?;
    }
    lines.push("correlation monotonicity");

    // On every face the field points inward or along the face.
    for _ in 0..CASES {
        let problem = DecisionProblem::from_payoffs(random_table(&mut rng)).unwrap();
        let cfg = DynamicsConfig::new(
            random_rule(&mut rng, 0.1, 20.0),
            random_variant(&mut rng),
            rng.random_range(0.0..20.0),
        );
        let mut s = random_state(&mut rng);
        let axis = rng.random_range(0..3);
        let face = if rng.random::<bool>() { 1.0 } else { 0.0 };
        match axis {
            0 => s.p = face,
            1 => s.q1 = face,
            _ => s.q2 = face,
        }
        let r = combined_field(&s, &problem, &cfg);
        let rate = [r.dp, r.dq1, r.dq2][axis];
        let inward = if face == 0.0 {
            rate >= 0.0
        } else {
            rate <= 0.0
        };
        check(
            inward,
            format!("{cfg:?} points out of the cube at {s:?}: {rate}"),
        )?;
    }
    lines.push("forward invariance");

    // Halving dt leaves converged endpoints unchanged to 1e-6.
    let order_cases = CASES;
    let mut worst_order: f64 = 0.0;
    let mut n = 0;
    while n < order_cases {
        let problem = DecisionProblem::from_payoffs(random_table(&mut rng)).unwrap();
        let cfg = DynamicsConfig::default().with_independence(random_variant(&mut rng));
        let s = random_state(&mut rng);
        let (e1, e2) = problem.eu_evidential(s.q1, s.q2).unwrap();
        let span = problem.payoff_span();
        // Near-ties take arbitrarily long to resolve; keep starts with a
        // clear initial preference.
        if (e1 - e2).abs() < 0.05 * span {
            continue;
        }
        let coarse =
            integrate(&problem, &s, &cfg, &Controls::default()).map_err(|e| e.to_string())?;
        let fine = integrate(
            &problem,
            &s,
            &cfg,
            &Controls {
                dt: 0.025,
                ..Controls::default()
            },
        )
        .map_err(|e| e.to_string())?;
        if !coarse.classification.is_converged() || !fine.classification.is_converged() {
            continue;
        }
        let a = coarse.endpoint;
        let b = fine.endpoint;
        let diff = (a.p - b.p)
            .abs()
            .max((a.q1 - b.q1).abs())
            .max((a.q2 - b.q2).abs());
        worst_order = worst_order.max(diff);
        check(diff <= 1e-6, format!("dt vs dt/2 from {s:?}: {diff:e}"))?;
        n += 1;
    }
    lines.push("order check");

    // RK4 at dt = 0.01 against explicit Euler at dt = 1e-5 over t in [0, 2].
    let mut worst_euler: f64 = 0.0;
    for _ in 0..CASES {
        let u = random_table(&mut rng);
        let problem = DecisionProblem::from_payoffs(u).unwrap();
        let cfg = DynamicsConfig::new(
            random_rule(&mut rng, 0.5, 2.0),
            random_variant(&mut rng),
            rng.random_range(0.5..2.0),
        );
        let s = random_state(&mut rng);
        let horizon = 2.0;
        let traj = integrate(
            &problem,
            &s,
            &cfg,
            &Controls {
                dt: 0.01,
                max_time: horizon,
                stop_at_convergence: false,
                sample_stride: 0,
                ..Controls::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let steps = 200_000;
        let h = horizon / steps as f64;
        let mut y = [s.p, s.q1, s.q2];
        for _ in 0..steps {
            let f = oracle_field(u, &cfg, y);
            for i in 0..3 {
                y[i] = (y[i] + h * f[i]).clamp(0.0, 1.0);
            }
        }
        let e = traj.endpoint;
        let diff = (e.p - y[0])
            .abs()
            .max((e.q1 - y[1]).abs())
            .max((e.q2 - y[2]).abs());
        worst_euler = worst_euler.max(diff);
        check(
            diff <= 1e-4,
            format!("{cfg:?} from {s:?}: RK4 vs Euler {diff:e}"),
        )?;
    }
    lines.push("Euler oracle");

    Ok(format!(
        "{} x {CASES} cases ({}); worst dt/2 diff {worst_order:.1e}, worst Euler diff {worst_euler:.1e}",
        lines.len(),
        lines.join(", ")
    ))
}

fn skyrms_mode() -> Outcome {
    let out = skyrms_equilibrium(
        &DecisionProblem::newcomb_problem(),
        &AdaptiveRule::SignProportional { k: 10.0 },
        &CouplingCurves::default(),
        0.5,
        &Controls::default(),
    )
    .map_err(|e| e.to_string())?;
    check(out.converged, "coupled dynamics did not converge")?;
    check(
        out.p_star > 0.0 && out.p_star < 0.5,
        format!("p* = {} is not interior below 1/2", out.p_star),
    )?;
    let (e1, e2) = eu_table([[0.0, 1e6], [1e3, 1e6 + 1e3]], out.q1, out.q2);
    check(
        (e1 - e2).abs() <= 1e-9,
        format!("EU residual {:e} at p* = {}", e1 - e2, out.p_star),
    )?;
    Ok(format!(
        "p* = {:.6e}, EU residual {:.1e}",
        out.p_star,
        e1 - e2
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "indifference plane, Death in Damascus",
            indifference_plane_did,
        ),
        ("perpendicular and parallel planes", geometry_theorems),
        ("basin theorem, 21^3 grid", basin_theorem),
        ("Newcomb robustness across variants", newcomb_robustness),
        ("on-plane neutrality", on_plane_neutrality),
        (
            "shortest-path midpoint conservation",
            shortest_path_conservation,
        ),
        ("causal mixed equilibrium", mixed_equilibrium_oracle),
        ("reconciliation fragility", fragility),
        ("randomized property suites", property_suites),
        ("coupled mode interior equilibrium", skyrms_mode),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
