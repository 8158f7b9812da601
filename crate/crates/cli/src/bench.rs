use crate::config::RunConfig;
use crate::record::{BenchRow, BenchSummary};
use crate::run::Engine;
use crate::CliError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsegeom::geometry::PointSet;
use std::time::Instant;

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Builds one random instance per size and records the median query time.
pub fn bench(cfg: &RunConfig, sizes: &[usize], dim: usize, queries: usize) -> Result<(Vec<BenchRow>, BenchSummary), CliError> {
    if sizes.len() < 2 || queries == 0 || dim == 0 {
        return Err(CliError::Config("bench needs at least two sizes, --queries-per-n >= 1 and --dim >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let points = PointSet::new((0..n).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect())?;
        let qs: Vec<Vec<f64>> = (0..queries).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let start = Instant::now();
        let engine = Engine::build(&points, cfg)?;
        let build_ms = start.elapsed().as_secs_f64() * 1e3;
        let mut times = Vec::with_capacity(queries);
        for (i, q) in qs.iter().enumerate() {
            let start = Instant::now();
            engine.query(q, cfg.seed, i)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
        }
        log::info!("n = {n}: build {build_ms:.1} ms");
        rows.push(BenchRow {
            variant: cfg.variant.to_string(),
            n,
            dim,
            k: cfg.k,
            epsilon: cfg.ann.epsilon,
            backend: cfg.ann.backend,
            build_ms,
            median_query_ms: median(times),
            queries,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_query_ms.max(1e-9)).collect();
    let summary = BenchSummary {
        variant: cfg.variant.to_string(),
        sizes: sizes.to_vec(),
        median_query_ms: ys.clone(),
        loglog_slope: loglog_slope(&xs, &ys),
        monotone: ys.windows(2).all(|w| w[0] <= w[1]),
    };
    Ok((rows, summary))
}
