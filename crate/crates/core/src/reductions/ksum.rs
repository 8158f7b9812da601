use crate::ann::{AnnConfig, Backend};
use crate::book::AnisIndex;
use crate::bouquet::AnifIndex;
use crate::geometry::PointSet;
use crate::{Error, Result, DEFAULT_STRUCTURE_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Distance below which a query hit counts as exact.
const ZERO_DISTANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSumInstance {
    pub numbers: Vec<i64>,
    pub k: usize,
}

impl KSumInstance {
    pub fn new(numbers: Vec<i64>, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK { k, min: 2, max: usize::MAX });
        }
        if numbers.len() < k {
            return Err(Error::TooFewPoints {
                needed: k,
                got: numbers.len(),
            });
        }
        Ok(Self { numbers, k })
    }

    /// Whether the given distinct indices pick `k` numbers summing to zero.
    pub fn is_solution(&self, ids: &[usize]) -> bool {
        let mut sorted = ids.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == self.k
            && sorted.len() == ids.len()
            && sorted.iter().all(|&i| i < self.numbers.len())
            && sorted.iter().map(|&i| self.numbers[i] as i128).sum::<i128>() == 0
    }
}

/// Vectors `(a_i, e_{s_i})` in `R^{k+1}` with query `(0, 1/k, ..., 1/k)`.
#[derive(Debug, Clone)]
pub struct LiftedInstance {
    pub vectors: PointSet,
    pub query: Vec<f64>,
    /// Coordinate (in `1..=k`) set to one for each number.
    pub slots: Vec<usize>,
    pub seed: u64,
}

/// Lift with one slot per number drawn uniformly from `1..=k`.
pub fn ksum_lift(inst: &KSumInstance, seed: u64) -> LiftedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slots = inst.numbers.iter().map(|_| rng.gen_range(1..=inst.k)).collect();
    LiftedInstance {
        seed,
        ..ksum_lift_with_slots(inst, slots)
    }
}

/// Lift with the given slots.
pub fn ksum_lift_with_slots(inst: &KSumInstance, slots: Vec<usize>) -> LiftedInstance {
    let k = inst.k;
    let rows = inst
        .numbers
        .iter()
        .zip(&slots)
        .map(|(&a, &s)| {
            let mut v = vec![0.0; k + 1];
            v[0] = a as f64;
            v[s] = 1.0;
            v
        })
        .collect();
    let mut query = vec![1.0 / k as f64; k + 1];
    query[0] = 0.0;
    LiftedInstance {
        vectors: PointSet::new(rows).expect("k >= 2 numbers"),
        query,
        slots,
        seed: 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Anis,
    Anif,
}

#[derive(Debug, Clone, Copy)]
pub struct KSumConfig {
    pub ann: AnnConfig,
    pub solver: Solver,
    /// Number of lifts; `None` uses [`default_trials`].
    pub trials: Option<usize>,
    pub seed: u64,
    pub budget: u64,
}

impl Default for KSumConfig {
    fn default() -> Self {
        Self {
            ann: AnnConfig {
                epsilon: 0.5,
                backend: Backend::Exact,
            },
            solver: Solver::Anis,
            trials: None,
            seed: 0,
            budget: DEFAULT_STRUCTURE_BUDGET,
        }
    }
}

/// `8 ceil(e^k)`.
pub fn default_trials(k: usize) -> usize {
    8 * (k as f64).exp().ceil() as usize
}

/// One lift and one query. Returns the sorted indices of a verified zero-sum subset.
pub fn ksum_trial(inst: &KSumInstance, seed: u64, cfg: &KSumConfig) -> Result<Option<Vec<usize>>> {
    let lifted = ksum_lift(inst, seed);
    let hit = match cfg.solver {
        Solver::Anis => AnisIndex::build(&lifted.vectors, inst.k, cfg.ann, cfg.budget)?
            .with_seed(seed)
            .query(&lifted.query)?,
        Solver::Anif => AnifIndex::build(&lifted.vectors, inst.k, cfg.ann, cfg.budget)?.query(&lifted.query)?,
    };
    Ok((hit.distance < ZERO_DISTANCE && inst.is_solution(&hit.witness_ids)).then_some(hit.witness_ids))
}

/// Repeated lifts until a verified zero-sum `k`-subset is found. `None` means no
/// trial found one; a returned subset always sums to zero.
pub fn solve_ksum(inst: &KSumInstance, cfg: &KSumConfig) -> Result<Option<Vec<usize>>> {
    let trials = cfg.trials.unwrap_or_else(|| default_trials(inst.k)).max(1);
    let mut seeds = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..trials {
        if let Some(found) = ksum_trial(inst, seeds.gen(), cfg)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}
