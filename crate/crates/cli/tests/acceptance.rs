//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsegeom::ann::{AnnConfig, Backend};
use sparsegeom::book::BookIndex;
use sparsegeom::geometry::linalg::{dist, solve_square, sub};
use sparsegeom::geometry::{orbit_point, point_segment_distance, BaseSet, Point, PointSet};
use sparsegeom::offline::{spherical_project, spherical_reflect};
use sparsegeom::oracle::nearest_segment;
use sparsegeom::reductions::{detect_affine_degeneracy, hopcroft_lift, ksum_trial, solve_ksum, DegeneracyConfig, KSumConfig, KSumInstance};
use sparsegeom::star::OnlineSegmentIndex;
use sparsegeom::{subsets, DEFAULT_STRUCTURE_BUDGET};
use sparsegeom_cli::bench::bench;
use sparsegeom_cli::config::{CliVariant, RunConfig};
use sparsegeom_cli::run::oracle_check;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Absolute slack on every approximation bound.
const SLACK: f64 = 1e-9;
const MONOTONE_SLACK: f64 = 1e-9;
const HOPCROFT_REL_TOL: f64 = 1e-9;
const KSUM_SIGMAS: f64 = 3.0;
const KSUM_RECALL: f64 = 0.99;
const DEGENERACY_RECALL: f64 = 0.98;
const SLOPE_RANGE: (f64, f64) = (0.7, 1.5);
/// Independent bench instances whose median slope is tested.
const SCALING_RUNS: u64 = 5;

fn rand_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn run_cfg(variant: CliVariant, k: usize, epsilon: f64, backend: Backend, seed: u64) -> RunConfig {
    RunConfig {
        variant,
        k,
        ann: AnnConfig::new(epsilon, backend).unwrap(),
        budget: DEFAULT_STRUCTURE_BUDGET,
        seed,
    }
}

/// Runs `oracle-check` and requires zero violations within `limit`.
fn oracle_criterion(runs: &[(RunConfig, usize, usize, usize)], limit: Duration) -> (bool, String) {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (cfg, trials, n, dim) in runs {
        let rep = oracle_check(cfg, *trials, *n, *dim).unwrap();
        pass &= rep.pass && rep.max_factor <= rep.bound + SLACK;
        parts.push(format!("k={} max factor {:.4} (bound {:.3}, {} violations)", rep.k, rep.max_factor, rep.bound, rep.violations));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < limit;
    (pass, format!("{}; {:.1}s", parts.join(", "), elapsed.as_secs_f64()))
}

fn anif_sandwich() -> (bool, String) {
    oracle_criterion(
        &[
            (run_cfg(CliVariant::Anif, 2, 0.25, Backend::Exact, 1), 200, 25, 6),
            (run_cfg(CliVariant::Anif, 3, 0.25, Backend::Exact, 2), 200, 25, 6),
        ],
        Duration::from_secs(120),
    )
}

fn anlf_sandwich() -> (bool, String) {
    oracle_criterion(
        &[
            (run_cfg(CliVariant::Anlf, 2, 0.25, Backend::Exact, 3), 200, 25, 6),
            (run_cfg(CliVariant::Anlf, 3, 0.25, Backend::Exact, 4), 200, 25, 6),
        ],
        Duration::from_secs(120),
    )
}

fn anis_bound() -> (bool, String) {
    oracle_criterion(&[(run_cfg(CliVariant::Anis, 3, 0.2, Backend::Exact, 5), 300, 20, 5)], Duration::from_secs(300))
}

fn online_segment() -> (bool, String) {
    let eps = 0.25;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let set = PointSet::new((0..40).map(|_| rand_vec(&mut rng, 5)).collect()).unwrap();
    let idx = OnlineSegmentIndex::build(&set, AnnConfig::exact(eps).unwrap()).unwrap();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for _ in 0..200 {
        let q: Vec<f64> = rand_vec(&mut rng, 5).iter().map(|x| 1.5 * x).collect();
        let got = idx.query(&q).unwrap().distance;
        let want = nearest_segment(&set, &q).unwrap().distance;
        pass &= got <= (1.0 + eps) * want + SLACK && got >= want - SLACK;
        if want > 1e-12 {
            worst = worst.max(got / want);
        }
    }
    (pass, format!("200 queries, max factor {worst:.4} (bound {:.2})", 1.0 + eps))
}

fn offline_segment() -> (bool, String) {
    let (ok, detail) = oracle_criterion(
        &[(run_cfg(CliVariant::SegmentOffline, 2, 0.2, Backend::Exact, 7), 200, 200, 4)],
        Duration::from_secs(600),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut sandwich = true;
    let mut drawn = 0;
    while drawn < 100_000 {
        let d = rng.gen_range(2..6);
        let q = rand_vec(&mut rng, d);
        let p = rand_vec(&mut rng, d);
        let u: Vec<f64> = rand_vec(&mut rng, d).iter().map(|x| 3.0 * x).collect();
        let r = dist(&p, &q);
        if dist(&u, &q) < r || r < 1e-6 {
            continue;
        }
        drawn += 1;
        let f = point_segment_distance(&p, &u, &q).0;
        let g = dist(&spherical_reflect(&q, r, &p).unwrap(), &spherical_project(&q, r, &u).unwrap());
        sandwich &= f <= g + SLACK && g <= 2.0 * f + SLACK;
    }
    (ok && sandwich, format!("{detail}; chord sandwich on 1e5 triples {}", if sandwich { "holds" } else { "violated" }))
}

fn monotonicity() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = 0;
    for _ in 0..10_000 {
        let m = rng.gen_range(0..4);
        let qb = rand_vec(&mut rng, m);
        let r = rng.gen_range(0.01..3.0);
        let mut p = rand_vec(&mut rng, m);
        p.push(rng.gen_range(0.0..3.0));
        p.push(0.0);
        let l1 = rng.gen_range(0.0..r);
        let l2 = rng.gen_range(l1..=r);
        let (_, h1) = orbit_point(&qb, r, l1).unwrap();
        let (_, h2) = orbit_point(&qb, r, l2).unwrap();
        if dist(&h1, &p) > dist(&h2, &p) + MONOTONE_SLACK {
            violations += 1;
        }
    }
    (violations == 0, format!("10000 draws, {violations} violations"))
}

/// Containment of `x` in the page of `slot`, by barycentric coordinates; `None` on the boundary.
fn page_contains(book: &BookIndex, slot: usize, x: &[f64]) -> Option<bool> {
    let mut verts: Vec<Vec<f64>> = book
        .frame()
        .base_coords()
        .iter()
        .map(|y| {
            let mut c = y.clone();
            c.push(0.0);
            c
        })
        .collect();
    verts.push(book.canonical_coords()[slot].clone());
    let m = x.len();
    let rows: Vec<Vec<f64>> = (0..m).map(|r| (1..=m).map(|c| verts[c][r] - verts[0][r]).collect()).collect();
    let t = solve_square(&rows, &sub(x, &verts[0]))?;
    let min = t.iter().copied().fold(1.0 - t.iter().sum::<f64>(), f64::min);
    (min.abs() >= 1e-9).then_some(min > 0.0)
}

/// Sorted union of canonical sets, or `None` if two of them overlap.
fn disjoint_union(book: &BookIndex, handles: &[usize]) -> Option<Vec<usize>> {
    let mut ids: Vec<usize> = handles.iter().flat_map(|&h| book.handle_ids(h)).collect();
    let total = ids.len();
    ids.sort_unstable();
    ids.dedup();
    (ids.len() == total).then_some(ids)
}

fn range_tree_exactness() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let pts: Vec<Point> = (0..100).map(|i| Point::new(i, rand_vec(&mut rng, 4)).unwrap()).collect();
    let base = BaseSet::new(pts[..2].to_vec()).unwrap();
    let book = BookIndex::build(base, &pts, AnnConfig::exact(0.2).unwrap()).unwrap();
    let (mut checked, mut mismatches) = (0, 0);
    for _ in 0..500 {
        let low = book.frame().to_halfflat(&rand_vec(&mut rng, 4));
        let mut high = low.clone();
        high[1] += rng.gen_range(0.0..0.5);
        let mut expect_in = Vec::new();
        let mut expect_between = Vec::new();
        let mut boundary = false;
        for (slot, &id) in book.ids().iter().enumerate() {
            match (page_contains(&book, slot, &low), page_contains(&book, slot, &high)) {
                (Some(a), Some(b)) => {
                    if a {
                        expect_in.push(id);
                    }
                    if a && !b {
                        expect_between.push(id);
                    }
                }
                _ => boundary = true,
            }
        }
        if boundary {
            continue;
        }
        checked += 1;
        let got_in = disjoint_union(&book, &book.simplices_containing(&low));
        let got_between = disjoint_union(&book, &book.simplices_between(&low, &high).unwrap());
        if got_in != Some(expect_in) || got_between != Some(expect_between) {
            mismatches += 1;
        }
    }
    (mismatches == 0 && checked >= 450, format!("{checked} of 500 queries off-boundary, {mismatches} mismatches"))
}

fn zero_triples(numbers: &[i64]) -> usize {
    subsets(numbers.len(), 3).iter().filter(|s| s.iter().map(|&i| numbers[i]).sum::<i64>() == 0).count()
}

fn planted_instance(rng: &mut ChaCha8Rng) -> (KSumInstance, Vec<usize>) {
    loop {
        let mut v: Vec<i64> = (0..12).map(|_| rng.gen_range(-10_000..10_000)).collect();
        let mut slots: Vec<usize> = rand::seq::index::sample(rng, 12, 3).into_vec();
        slots.sort_unstable();
        v[slots[2]] = -(v[slots[0]] + v[slots[1]]);
        if zero_triples(&v) == 1 {
            return (KSumInstance::new(v, 3).unwrap(), slots);
        }
    }
}

fn ksum_reduction() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = KSumConfig::default();
    let (inst, planted) = planted_instance(&mut rng);
    let runs = 2000;
    let mut hits = 0;
    for _ in 0..runs {
        if let Some(found) = ksum_trial(&inst, rng.gen(), &cfg).unwrap() {
            hits += usize::from(found == planted);
        }
    }
    let p = 6.0 / 27.0;
    let sigma = (runs as f64 * p * (1.0 - p)).sqrt();
    let rate_ok = (hits as f64 - runs as f64 * p).abs() <= KSUM_SIGMAS * sigma;
    let mut recovered = 0;
    for rep in 0..100 {
        let (inst, planted) = planted_instance(&mut rng);
        let found = solve_ksum(&inst, &KSumConfig { seed: rep, ..cfg }).unwrap();
        recovered += usize::from(found == Some(planted));
    }
    let mut false_hits = 0;
    for rep in 0..10 {
        let numbers: Vec<i64> = (0..12).map(|_| rng.gen_range(1..=10_000)).collect();
        let inst = KSumInstance::new(numbers, 3).unwrap();
        false_hits += usize::from(solve_ksum(&inst, &KSumConfig { seed: rep, ..cfg }).unwrap().is_some());
    }
    let pass = rate_ok && recovered as f64 >= KSUM_RECALL * 100.0 && false_hits == 0;
    (
        pass,
        format!(
            "single-trial rate {:.4} vs 6/27 = {p:.4} (±{:.4}); solved {recovered}/100; positive instances answered {false_hits} times",
            hits as f64 / runs as f64,
            KSUM_SIGMAS * sigma / runs as f64
        ),
    )
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(cols: [&[f64]; 4]) -> f64 {
    (0..4)
        .map(|c| {
            let mut minor = [[0.0; 3]; 3];
            for r in 1..4 {
                for (slot, c2) in (0..4).filter(|&c2| c2 != c).enumerate() {
                    minor[r - 1][slot] = cols[c2][r];
                }
            }
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * cols[c][0] * det3(minor)
        })
        .sum()
}

fn hopcroft() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let v: Vec<Vec<f64>> = (0..4).map(|_| rand_vec(&mut rng, 4)).collect();
        let (u, w) = hopcroft_lift(&v[0], &v[1], &v[2], &v[3]).unwrap();
        let inner: f64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
        let det = det4([&v[0], &v[1], &v[2], &v[3]]);
        worst = worst.max((inner - det).abs() / det.abs().max(1e-12));
    }
    (worst <= HOPCROFT_REL_TOL, format!("1000 tuples, max relative error {worst:.2e}"))
}

fn degeneracy() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut false_positives, mut found) = (0, 0);
    for i in 0..100u64 {
        let mut rows: Vec<Vec<f64>> = (0..60).map(|_| rand_vec(&mut rng, 3)).collect();
        let planted = i % 2 == 0;
        if planted {
            let ids = rand::seq::index::sample(&mut rng, 60, 4).into_vec();
            let (s, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            rows[ids[3]] = (0..3).map(|j| rows[ids[0]][j] + s * (rows[ids[1]][j] - rows[ids[0]][j]) + t * (rows[ids[2]][j] - rows[ids[0]][j])).collect();
        }
        let set = PointSet::new(rows).unwrap();
        let report = detect_affine_degeneracy(&set, &DegeneracyConfig { seed: i, ..Default::default() }).unwrap();
        match (planted, report.degenerate) {
            (true, true) => found += 1,
            (false, true) => false_positives += 1,
            _ => {}
        }
    }
    let pass = false_positives == 0 && found as f64 >= DEGENERACY_RECALL * 50.0;
    (pass, format!("planted recall {found}/50, false positives {false_positives}/50"))
}

fn scaling() -> (bool, String) {
    let mut slopes = Vec::new();
    let mut times = Vec::new();
    for seed in 14..14 + SCALING_RUNS {
        let cfg = run_cfg(CliVariant::Anif, 2, 0.25, Backend::Tree, seed);
        let (_, summary) = bench(&cfg, &[100, 200, 400, 800], 3, 200).unwrap();
        slopes.push(summary.loglog_slope);
        times = summary.median_query_ms;
    }
    let mut sorted = slopes.clone();
    sorted.sort_by(f64::total_cmp);
    let s = sorted[sorted.len() / 2];
    let times: Vec<String> = times.iter().map(|t| format!("{t:.3}")).collect();
    let slopes: Vec<String> = slopes.iter().map(|s| format!("{s:.3}")).collect();
    (
        (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s),
        format!(
            "median log-log slope {s:.3} over [{}]; last run median query ms [{}]",
            slopes.join(", "),
            times.join(", ")
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> (bool, String)); 11] = [
        ("ANIF sandwich", anif_sandwich),
        ("ANLF sandwich", anlf_sandwich),
        ("ANIS bound", anis_bound),
        ("online segment", online_segment),
        ("offline segment", offline_segment),
        ("orbit monotonicity", monotonicity),
        ("range-tree exactness", range_tree_exactness),
        ("k-sum reduction", ksum_reduction),
        ("Hopcroft lift", hopcroft),
        ("degeneracy detection", degeneracy),
        ("scaling sanity", scaling),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| (false, "panicked".to_string()));
        failed += usize::from(!pass);
        println!(
            "{} [{:>2}] {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
