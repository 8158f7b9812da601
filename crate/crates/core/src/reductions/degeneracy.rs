use crate::ann::{AnnConfig, Backend};
use crate::bouquet::AnifIndex;
use crate::geometry::linalg::sub;
use crate::geometry::PointSet;
use crate::{Error, Result, DEFAULT_STRUCTURE_BUDGET};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative distance (to the spread of the input) below which a point counts as
/// lying on a hyperplane.
const HIT_THRESHOLD: f64 = 1e-9;
/// Relative smallest singular value below which `d + 1` points are affinely dependent.
const RANK_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct DegeneracyConfig {
    pub ann: AnnConfig,
    pub seed: u64,
    /// Number of half-density samples; `None` uses `8 ceil(log2 n)`.
    pub samples: Option<usize>,
}

impl Default for DegeneracyConfig {
    fn default() -> Self {
        Self {
            ann: AnnConfig {
                epsilon: 0.5,
                backend: Backend::Exact,
            },
            seed: 0,
            samples: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub degenerate: bool,
    /// Sorted ids of `d + 1` points lying on a common hyperplane.
    pub witness: Option<Vec<usize>>,
}

/// Exact check that the given points lie on a common hyperplane.
pub fn affinely_dependent(points: &PointSet, ids: &[usize]) -> bool {
    let d = points.dim();
    if ids.len() <= 1 {
        return false;
    }
    let o = points.coords(ids[0]);
    let cols: Vec<Vec<f64>> = ids[1..].iter().map(|&i| sub(points.coords(i), o)).collect();
    if cols.len() > d {
        return true;
    }
    let m = DMatrix::from_fn(d, cols.len(), |r, c| cols[c][r]);
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    max == 0.0 || min <= RANK_THRESHOLD * max
}

/// Searches for `d + 1` input points on a common hyperplane.
///
/// Each round indexes a random half of the points for nearest induced
/// `(d-1)`-flat queries and asks every left-out point for its nearest flat.
/// Candidate witnesses pass an exact rank test before being reported, so a
/// positive answer is never wrong.
pub fn detect_affine_degeneracy(points: &PointSet, cfg: &DegeneracyConfig) -> Result<DegeneracyReport> {
    let d = points.dim();
    let n = points.len();
    if n < d + 1 {
        return Err(Error::TooFewPoints { needed: d + 1, got: n });
    }
    let rounds = cfg.samples.unwrap_or(8 * (n as f64).log2().ceil().max(1.0) as usize);
    let threshold = HIT_THRESHOLD * points.spread();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..rounds {
        let inside: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let members: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
        if members.len() < d {
            continue;
        }
        let sample = PointSet::new(members.iter().map(|&i| points.coords(i).to_vec()).collect())?;
        let idx = match AnifIndex::build(&sample, d, cfg.ann, DEFAULT_STRUCTURE_BUDGET) {
            Ok(idx) if idx.structures() > 0 => idx,
            Ok(_) => continue,
            Err(e) => return Err(e),
        };
        for q in (0..n).filter(|&i| !inside[i]) {
            let hit = idx.query(points.coords(q))?;
            if hit.distance >= threshold {
                continue;
            }
            let mut witness: Vec<usize> = hit.witness_ids.iter().map(|&i| members[i]).collect();
            witness.push(q);
            witness.sort_unstable();
            witness.dedup();
            if witness.len() == d + 1 && affinely_dependent(points, &witness) {
                return Ok(DegeneracyReport {
                    degenerate: true,
                    witness: Some(witness),
                });
            }
        }
    }
    Ok(DegeneracyReport {
        degenerate: false,
        witness: None,
    })
}
