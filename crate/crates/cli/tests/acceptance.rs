//! Acceptance criteria 1 to 11. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use coarsehyp::boundary::{boundary_n_to_1_check, capacity_cover_check, explicit_boundary_map, CapacityCover, CellMetric};
use coarsehyp::checkers::{check_coarsely_n_to_1, check_visual, fit_radial, lsl_mu, LinearCeiling, RadialOptions};
use coarsehyp::cone::{
    build_cone, c_fn_table, cantor_to_interval, cone_boundary_product_check, lift_boundary_map, CompactModel, GraphMap,
    TupleScan,
};
use coarsehyp::maps::{cantor_distance, cantor_map, cantor_points, comb_counterexample, jump_bound, measured_jump, ExplicitMap};
use coarsehyp::metric::{estimate_delta, PairSample, PointTable, QuadrupleSample};
use coarsehyp::plane::{reduce_angle, HyperbolicPlane};
use coarsehyp::sample::{FiniteMap, SampledMap};
use coarsehyp::suites;
use coarsehyp::tree::{self, FreeGroupTree, Word};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", t.elapsed()))
}

fn tree_delta() -> Outcome {
    let t = Instant::now();
    let table = PointTable::enumerate(&FreeGroupTree, 4);
    let e = estimate_delta(&table, QuadrupleSample::Exhaustive).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(30))?;
    ensure(e.exhaustive && e.delta_hat == 0.0, || format!("delta_hat = {}", e.delta_hat))?;
    Ok(format!("delta_hat = 0 over {} quadruples of {} vertices", e.quadruples, table.len()))
}

fn radiality() -> Outcome {
    let t = Instant::now();
    let f = suites::explicit_sample(8).map_err(|e| e.to_string())?;
    let family = suites::geodesic_family(&f.points, &Word::root(), &tree::sphere(8)).map_err(|e| e.to_string())?;
    let fit = fit_radial(&f, &family, &[0.5, 0.9, 1.0, 1.1], RadialOptions { growth: 0.05, tolerance: 1e-9 })
        .map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(60))?;
    ensure(fit.lambda2 == 1.0 && fit.mu2 <= 1e-9 && fit.violations == 0, || {
        format!("(λ₂, μ₂) = ({}, {}), {} violations", fit.lambda2, fit.mu2, fit.violations)
    })?;
    Ok(format!("(λ₂, μ₂) = (1, 0), 0 violations over {} pairs", fit.pairs))
}

fn jump_bounds() -> Outcome {
    let oracle = |n: usize| 2.0 * PI * (n as f64).sinh() / (4.0 * 3f64.powi(n as i32 - 1));
    let mut sup = (0, f64::NEG_INFINITY);
    for n in 1..=10 {
        let b = jump_bound(n).map_err(|e| e.to_string())?;
        let m = measured_jump(n).map_err(|e| e.to_string())?;
        ensure((b - oracle(n)).abs() < 1e-12, || format!("bound({n}) = {b}, oracle {}", oracle(n)))?;
        ensure(m <= b, || format!("measured({n}) = {m} > bound {b}"))?;
        if b > sup.1 {
            sup = (n, b);
        }
    }
    ensure(sup.0 == 2 && (sup.1 - 1.8991).abs() <= 1e-3, || format!("sup at n = {} is {}", sup.0, sup.1))?;
    Ok(format!("measured ≤ bound for n ≤ 10; sup bound {:.6} at n = 2", sup.1))
}

fn lsl() -> Outcome {
    let f = suites::explicit_sample(7).map_err(|e| e.to_string())?;
    let (_, bp) = suites::b_prime().map_err(|e| e.to_string())?;
    let (mu, pair) = lsl_mu(&f, &PairSample::Exhaustive, 1.0 + bp).map_err(|e| e.to_string())?;
    ensure(bp <= 1.90, || format!("B′ = {bp}"))?;
    ensure(mu <= bp, || format!("μ₁(1 + B′) = {mu} > B′ = {bp} at {:?}", f.witness(&[pair.0, pair.1])))?;
    Ok(format!("B′ = {bp:.6}, μ₁(1 + B′) = {mu:.6} ≤ B′ over all depth-7 pairs"))
}

fn two_to_one() -> Outcome {
    let f = suites::explicit_sample(7).map_err(|e| e.to_string())?;
    let grid: Vec<f64> = (1..=6).map(f64::from).collect();
    let t = check_coarsely_n_to_1(&f, 2, &grid, TupleScan::Exhaustive, LinearCeiling::default()).map_err(|e| e.to_string())?;
    let s: Vec<f64> = t.rows.iter().map(|r| r.s).collect();
    ensure(t.exhaustive && s.iter().all(|v| v.is_finite()), || "table not exhaustive or not finite".into())?;
    ensure(s.windows(2).all(|w| w[0] <= w[1]), || format!("S(R) not monotone: {s:?}"))?;
    ensure(t.counterexample.is_none(), || format!("counterexample {:?}", t.counterexample))?;
    Ok(format!("S(1..6) = {s:?} over {} triples, no counterexample", t.tuples))
}

fn boundary_map() -> Outcome {
    let limit = -(PI / 12.0).sin().ln();
    let mut bs = Vec::new();
    for k in 3..=7 {
        let cells = 4 * 3usize.pow(k as u32 - 1);
        let gap = 2.0 * PI / cells as f64;
        let mut angles: Vec<f64> = ExplicitMap.angles_at_depth(k).iter().map(|&a| reduce_angle(a)).collect();
        angles.sort_by(f64::total_cmp);
        let dev = angles.iter().enumerate().map(|(i, a)| (a - i as f64 * gap).abs()).fold(0.0, f64::max);
        ensure(angles.len() == cells && dev < 1e-9, || format!("k = {k}: angle deviation {dev}"))?;
        let (source, target, map) = explicit_boundary_map(k, 2).map_err(|e| e.to_string())?;
        ensure(map.is_surjective(), || format!("k = {k}: cell map misses {:?}", map.missed()))?;
        let v = boundary_n_to_1_check(&source, &target, &map, 2, 2.0, 5.0).map_err(|e| e.to_string())?;
        ensure(v.pass, || format!("k = {k}: minimal B {:?}", v.minimal_b))?;
        bs.push(v.minimal_b.ok_or("no admissible triple")?);
    }
    ensure(bs.windows(2).all(|w| w[0] <= w[1]) && bs.iter().all(|&b| b <= limit + 1e-12), || {
        format!("B(k) = {bs:?} not monotone below {limit}")
    })?;
    let last = *bs.last().expect("five depths");
    ensure((last - limit).abs() < 0.01, || format!("B(7) = {last}, limit {limit}"))?;
    Ok(format!("exact angles and surjective for k = 3..7; minimal B = {bs:.4?} → −ln sin(π/12) = {limit:.4}"))
}

fn comb() -> Outcome {
    let (comb, images) = comb_counterexample(12).map_err(|e| e.to_string())?;
    let f = SampledMap::with_images(&comb, &HyperbolicPlane, comb.points(), images, 0).map_err(|e| e.to_string())?;
    let vis = check_visual(&f, &PairSample::Exhaustive, &[0.0, 1.0, 2.0, 3.0], LinearCeiling::default())
        .map_err(|e| e.to_string())?;
    ensure(!vis.pass && !vis.violations.is_empty(), || "visual check passed".into())?;
    let family = suites::comb_witness_family(12).map_err(|e| e.to_string())?;
    let far: Vec<_> = family.iter().filter(|(n, _, _)| *n >= 8).collect();
    ensure(far.iter().all(|(_, sp, ip)| *sp >= 8.0 && *ip <= 0.35), || format!("witness family {far:?}"))?;
    let (spine, teeth) = comb.ray_family();
    let mut rays = vec![spine];
    rays.extend(teeth);
    let fit = fit_radial(&f, &rays, &[1.0], RadialOptions::default()).map_err(|e| e.to_string())?;
    // Tooth lengths are rounded, so the ray-wise bound holds up to the ½ rounding defect.
    ensure(fit.pass && fit.lambda2 == 1.0 && fit.mu2 <= 0.5, || format!("ray-wise fit ({}, {})", fit.lambda2, fit.mu2))?;
    let w = &vis.violations[0];
    Ok(format!(
        "visual fails at r = {} (s = {}, products {} / {:.3}); {} pairs with source product ≥ 8 and image product ≤ 0.35; ray-wise μ₂ = {:.3}",
        w.r,
        w.s,
        w.source_product,
        w.image_product,
        far.len(),
        fit.mu2
    ))
}

fn separation() -> Outcome {
    let t = Instant::now();
    let v = suites::cantor_separation_verdict(8).map_err(|e| e.to_string())?;
    // Independent oracle: every triple, every r.
    let pts = cantor_points(8);
    let img: Vec<f64> = pts.iter().map(cantor_map).collect();
    let radii: Vec<f64> = (1..=7).map(|k| 0.5f64.powi(k)).collect();
    let mut brute = 0u64;
    let mut triples = 0u64;
    let m = pts.len();
    for a in 0..m {
        for b in a + 1..m {
            let dab = cantor_distance(&pts[a], &pts[b]);
            for c in b + 1..m {
                triples += 1;
                let src = dab.min(cantor_distance(&pts[a], &pts[c])).min(cantor_distance(&pts[b], &pts[c]));
                let far = (img[a] - img[b]).abs().max((img[a] - img[c]).abs()).max((img[b] - img[c]).abs());
                brute += radii.iter().filter(|&&r| src > r && far < r / 2.0).count() as u64;
            }
        }
    }
    within(t, Duration::from_secs(300))?;
    let violations = v.constants["violations"].as_u64().unwrap_or(u64::MAX);
    ensure(v.pass && violations == 0 && brute == 0, || format!("violations: suite {violations}, brute force {brute}"))?;
    Ok(format!("0 violations over {triples} triples and 7 radii"))
}

fn capacity() -> Outcome {
    let mut out = Vec::new();
    for n in 2..=4usize {
        let k = n + 3;
        let cover = CapacityCover::cantor_cylinders(n, k).map_err(|e| e.to_string())?;
        let v = capacity_cover_check(&cover, &CellMetric::cantor(k)).map_err(|e| e.to_string())?;
        let expected = 0.5f64.powi(n as i32 - 1);
        ensure((cover.c * cover.s - expected).abs() < 1e-15, || format!("n = {n}: bound {}", cover.c * cover.s))?;
        ensure(v.diameters.iter().all(|d| (d - expected).abs() <= 1e-12), || format!("n = {n}: diameters {:?}", v.diameters))?;
        ensure(v.multiplicity <= 1, || format!("n = {n}: multiplicity {}", v.multiplicity))?;
        out.push(format!("n={n}: {} members, diam {expected}", cover.cover.len()));
    }
    Ok(out.join("; "))
}

/// Pinned from the first run: `max_r (c_{f,2}(r) − r)` on levels 1..8.
const PINNED_M: f64 = 0.0;

fn cone_fidelity() -> Outcome {
    let cantor = build_cone(&CompactModel::Cantor, 8).map_err(|e| e.to_string())?;
    let interval = build_cone(&CompactModel::Interval, 8).map_err(|e| e.to_string())?;
    let mut devs = Vec::new();
    for g in [&cantor, &interval] {
        let v = cone_boundary_product_check(g, None, 2.0).map_err(|e| e.to_string())?;
        ensure(v.pass, || format!("{}: deviation {}", g.model.name(), v.worst_deviation))?;
        devs.push(format!("{} {:.3}", g.model.name(), v.worst_deviation));
    }
    let table = lift_boundary_map(&cantor, &interval, cantor_to_interval).map_err(|e| e.to_string())?;
    let f = GraphMap { source: &cantor, target: &interval, table };
    let grid: Vec<f64> = (1..=6).map(f64::from).collect();
    let t = check_coarsely_n_to_1(&f, 2, &grid, TupleScan::Exhaustive, LinearCeiling::default()).map_err(|e| e.to_string())?;
    ensure(t.pass && t.exhaustive, || format!("lifted map counterexample {:?}", t.counterexample))?;
    let r8: Vec<f64> = (1..=8).map(f64::from).collect();
    let c = c_fn_table(&f, 2, &r8, TupleScan::Exhaustive).map_err(|e| e.to_string())?;
    let m = c.excess().ok_or("c_f,2 undefined on the whole grid")?;
    ensure(m == PINNED_M, || format!("M = {m}, pinned {PINNED_M}"))?;
    Ok(format!("product deviations {}; lifted map 2-to-1 over {} triples; M = {m}", devs.join(", "), t.tuples))
}

fn determinism() -> Outcome {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_coarsehyp"))
            .args(["verify", "example8", "--depth", "6", "--seed", "7"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
        Ok::<_, String>(out.stdout)
    };
    let (a, b) = (run()?, run()?);
    ensure(a == b, || "reports differ".into())?;
    let report: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
    ensure(report["version"].is_string() && report["verdicts"].is_array(), || "malformed report".into())?;
    Ok(format!("two runs produced identical {}-byte reports", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("tree hyperbolicity", tree_delta),
        ("radiality", radiality),
        ("jump bounds", jump_bounds),
        ("LSL", lsl),
        ("coarsely 2-to-1", two_to_one),
        ("induced boundary map", boundary_map),
        ("comb counterexample", comb),
        ("Cantor separation", separation),
        ("capacity cover", capacity),
        ("cone fidelity", cone_fidelity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
