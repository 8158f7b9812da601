use crate::bench::bench;
use crate::config::{Cli, CliVariant, Command, DegeneracyArgs, HopcroftArgs, KsumArgs, OracleArgs, QueryArgs, ReduceCommand, RunConfig, SolverArg};
use crate::io::{load_integers, load_pointset, load_rows};
use crate::record::{OracleReport, ResultRecord};
use crate::CliError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use sparsegeom::book::AnisIndex;
use sparsegeom::bouquet::{AnifIndex, AnlfIndex};
use sparsegeom::geometry::PointSet;
use sparsegeom::offline::offline_nearest_segment;
use sparsegeom::oracle::{nearest_flat, nearest_linear_flat, nearest_segment, nearest_simplex};
use sparsegeom::reductions::{detect_affine_degeneracy, hopcroft_lift, solve_ksum, DegeneracyConfig, KSumConfig, KSumInstance, Solver};
use sparsegeom::star::OnlineSegmentIndex;
use sparsegeom::QueryResult;
use std::io::Write;
use std::time::Instant;

/// Absolute slack allowed on top of the multiplicative bound.
const ORACLE_SLACK: f64 = 1e-9;

/// A built structure for one variant.
pub enum Engine {
    Slr { points: PointSet, k: usize },
    Anlf(AnlfIndex),
    Anif(AnifIndex),
    Anis(AnisIndex),
    Segment(OnlineSegmentIndex),
    SegmentOffline { points: PointSet, cfg: sparsegeom::ann::AnnConfig },
}

impl Engine {
    pub fn build(points: &PointSet, cfg: &RunConfig) -> Result<Self, CliError> {
        Ok(match cfg.variant {
            CliVariant::Slr => Engine::Slr {
                points: points.clone(),
                k: cfg.k,
            },
            CliVariant::Anlf => Engine::Anlf(AnlfIndex::build(points, cfg.k, cfg.ann, cfg.budget)?),
            CliVariant::Anif => Engine::Anif(AnifIndex::build(points, cfg.k, cfg.ann, cfg.budget)?),
            CliVariant::Anis => Engine::Anis(AnisIndex::build(points, cfg.k, cfg.ann, cfg.budget)?.with_seed(cfg.seed)),
            CliVariant::Segment => Engine::Segment(OnlineSegmentIndex::build(points, cfg.ann)?),
            CliVariant::SegmentOffline => Engine::SegmentOffline {
                points: points.clone(),
                cfg: cfg.ann,
            },
        })
    }

    /// Answers query number `i`; `i` only selects the random stream.
    pub fn query(&self, q: &[f64], seed: u64, i: usize) -> Result<QueryResult, CliError> {
        Ok(match self {
            Engine::Slr { points, k } => nearest_linear_flat(points, *k, q)?,
            Engine::Anlf(idx) => idx.query(q)?,
            Engine::Anif(idx) => idx.query(q)?,
            Engine::Anis(idx) => idx.query_seeded(q, seed.wrapping_add(i as u64))?,
            Engine::Segment(idx) => idx.query(q)?,
            Engine::SegmentOffline { points, cfg } => offline_nearest_segment(points, q, *cfg)?,
        })
    }
}

/// Exhaustive answer for the problem a variant approximates.
pub fn oracle(variant: CliVariant, points: &PointSet, k: usize, q: &[f64]) -> Result<QueryResult, CliError> {
    Ok(match variant {
        CliVariant::Slr | CliVariant::Anlf => nearest_linear_flat(points, k, q)?,
        CliVariant::Anif => nearest_flat(points, k, q)?,
        CliVariant::Anis => nearest_simplex(points, k, q)?,
        CliVariant::Segment | CliVariant::SegmentOffline => nearest_segment(points, q)?,
    })
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn emit<T: Serialize>(out: &mut dyn Write, record: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Answers every query of `args.queries`, in file order.
pub fn run_query(args: &QueryArgs, seed: u64, timings: bool) -> Result<Vec<ResultRecord>, CliError> {
    let cfg = RunConfig::new(&args.index, seed)?;
    let points = load_pointset(&args.input)?;
    let queries = load_rows(&args.queries)?;
    if let Some(bad) = queries.iter().position(|q| q.len() != points.dim()) {
        return Err(CliError::DimensionMismatch {
            path: args.queries.display().to_string(),
            row: bad + 1,
            expected: points.dim(),
            got: queries[bad].len(),
        });
    }
    let start = Instant::now();
    let engine = Engine::build(&points, &cfg)?;
    let build_ms = timings.then(|| millis(start));
    queries
        .par_iter()
        .enumerate()
        .map(|(i, q)| {
            let start = Instant::now();
            let result = engine.query(q, seed, i)?;
            let query_ms = timings.then(|| millis(start));
            Ok(ResultRecord::new(result, &cfg, build_ms, query_ms))
        })
        .collect()
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

/// Compares `cfg.variant` against the exhaustive oracle on `trials` random
/// instances of `n` points in `[-1, 1]^dim`, one query each.
pub fn oracle_check(cfg: &RunConfig, trials: usize, n: usize, dim: usize) -> Result<OracleReport, CliError> {
    if trials == 0 || dim == 0 {
        return Err(CliError::Config("--trials and --dim must be positive".into()));
    }
    let bound = cfg.variant.bound(cfg.ann.epsilon);
    let mut max_factor: f64 = 0.0;
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(t as u64);
        let points = PointSet::new(random_rows(&mut rng, n, dim))?;
        let q: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let engine = Engine::build(&points, cfg)?;
        let got = engine.query(&q, cfg.seed, t)?.distance;
        let want = oracle(cfg.variant, &points, cfg.k, &q)?.distance;
        let factor = if want > 1e-12 {
            got / want
        } else if got <= ORACLE_SLACK {
            1.0
        } else {
            f64::INFINITY
        };
        max_factor = max_factor.max(factor);
        if got > bound * want + ORACLE_SLACK || got < want - ORACLE_SLACK {
            log::warn!("trial {t}: reported {got} against exact {want}");
            violations += 1;
        }
    }
    Ok(OracleReport {
        variant: cfg.variant.to_string(),
        trials,
        n,
        dim,
        k: cfg.k,
        epsilon: cfg.ann.epsilon,
        backend: cfg.ann.backend,
        seed: cfg.seed,
        max_factor,
        bound,
        violations,
        pass: violations == 0,
        version: crate::VERSION.to_string(),
    })
}

fn run_ksum(args: &KsumArgs, seed: u64) -> Result<serde_json::Value, CliError> {
    let numbers = match (&args.input, &args.numbers) {
        (Some(path), _) => load_integers(path)?,
        (None, Some(v)) => v.clone(),
        (None, None) => return Err(CliError::Config("ksum needs --input or --numbers".into())),
    };
    let inst = KSumInstance::new(numbers, args.k)?;
    let cfg = KSumConfig {
        ann: sparsegeom::ann::AnnConfig::new(args.epsilon, args.backend)?,
        solver: match args.solver {
            SolverArg::Anis => Solver::Anis,
            SolverArg::Anif => Solver::Anif,
        },
        trials: args.trials,
        seed,
        budget: args.budget_structures,
    };
    let found = solve_ksum(&inst, &cfg)?;
    let values = found.as_ref().map(|ids| ids.iter().map(|&i| inst.numbers[i]).collect::<Vec<_>>());
    Ok(json!({
        "reduction": "ksum",
        "k": inst.k,
        "n": inst.numbers.len(),
        "trials": args.trials.unwrap_or_else(|| sparsegeom::reductions::default_trials(inst.k)),
        "found": found,
        "values": values,
        "seed": seed,
        "version": crate::VERSION,
    }))
}

fn run_hopcroft(args: &HopcroftArgs) -> Result<serde_json::Value, CliError> {
    let rows = load_rows(&args.input)?;
    if rows.len() != 4 {
        return Err(CliError::Config(format!("hopcroft needs 4 rows, got {}", rows.len())));
    }
    let (u, v) = hopcroft_lift(&rows[0], &rows[1], &rows[2], &rows[3])?;
    let inner: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    Ok(json!({
        "reduction": "hopcroft",
        "u": u,
        "v": v,
        "determinant": inner,
        "version": crate::VERSION,
    }))
}

fn run_degeneracy(args: &DegeneracyArgs, seed: u64) -> Result<serde_json::Value, CliError> {
    let points = load_pointset(&args.input)?;
    let cfg = DegeneracyConfig {
        ann: sparsegeom::ann::AnnConfig::new(args.epsilon, args.backend)?,
        seed,
        samples: args.samples,
    };
    let report = detect_affine_degeneracy(&points, &cfg)?;
    Ok(json!({
        "reduction": "degeneracy",
        "n": points.len(),
        "dim": points.dim(),
        "degenerate": report.degenerate,
        "witness": report.witness,
        "seed": seed,
        "version": crate::VERSION,
    }))
}

/// Runs one command, writing JSON Lines to `out`. Returns whether every check passed.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let timings = !cli.no_timings;
    match &cli.command {
        Command::Query(args) => {
            for record in run_query(args, cli.seed, timings)? {
                emit(out, &record)?;
            }
            Ok(true)
        }
        Command::OracleCheck(OracleArgs { index, trials, n, dim }) => {
            let cfg = RunConfig::new(index, cli.seed)?;
            let report = oracle_check(&cfg, *trials, *n, *dim)?;
            emit(out, &report)?;
            Ok(report.pass)
        }
        Command::Bench(args) => {
            let cfg = RunConfig::new(&args.index, cli.seed)?;
            let (rows, summary) = bench(&cfg, &args.n, args.dim, args.queries_per_n)?;
            for row in &rows {
                emit(out, row)?;
            }
            emit(out, &summary)?;
            Ok(true)
        }
        Command::Reduce(r) => {
            let value = match r {
                ReduceCommand::Ksum(a) => run_ksum(a, cli.seed)?,
                ReduceCommand::Hopcroft(a) => run_hopcroft(a)?,
                ReduceCommand::Degeneracy(a) => run_degeneracy(a, cli.seed)?,
            };
            emit(out, &value)?;
            Ok(true)
        }
    }
}
