use super::BouquetIndex;
use crate::ann::{self, AnnConfig, AnnIndex};
use crate::geometry::{BaseSet, PointSet};
use crate::{binomial, subsets, Error, QueryResult, Result};
use rayon::prelude::*;

const MIN_K: usize = 2;
const MAX_K: usize = 6;
/// Bouquets whose index lookups are overlapped by [`ann::warm`].
const WARM_GROUP: usize = 16;

#[derive(Debug, Clone)]
struct Bouquets {
    dim: usize,
    k: usize,
    bouquets: Vec<BouquetIndex>,
    skipped: usize,
}

impl Bouquets {
    fn build(points: &PointSet, k: usize, cfg: AnnConfig, budget: u64, linear: bool) -> Result<Self> {
        if !(MIN_K..=MAX_K).contains(&k) {
            return Err(Error::InvalidK { k, min: MIN_K, max: MAX_K });
        }
        if points.len() < k {
            return Err(Error::TooFewPoints {
                needed: k,
                got: points.len(),
            });
        }
        let structures = binomial(points.len(), k - 1);
        if structures > budget {
            return Err(Error::InstanceTooLarge { structures, budget });
        }
        let built: Vec<Option<BouquetIndex>> = subsets(points.len(), k - 1)
            .into_par_iter()
            .map(|ids| {
                let members = ids.iter().map(|&i| points.get(i).clone()).collect();
                let base = if linear { BaseSet::linear(members) } else { BaseSet::new(members) };
                match base {
                    Ok(base) => BouquetIndex::build(base, points.points(), cfg).map(Some),
                    Err(Error::DegenerateBase { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        let skipped = built.iter().filter(|b| b.is_none()).count();
        if skipped > 0 {
            log::debug!("skipped {skipped} degenerate bases");
        }
        let mut bouquets: Vec<BouquetIndex> = built.into_iter().flatten().collect();
        // queries touch only the indexes; copy them into one run of memory
        let packed: Vec<Option<AnnIndex>> = bouquets.iter().map(|b| b.ann().cloned()).collect();
        for (b, a) in bouquets.iter_mut().zip(packed) {
            b.set_ann(a);
        }
        Ok(Self {
            dim: points.dim(),
            k,
            bouquets,
            skipped,
        })
    }

    fn query(&self, q: &[f64]) -> Result<QueryResult> {
        if q.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: q.len(),
            });
        }
        let scores: Vec<f64> = self
            .bouquets
            .par_chunks(WARM_GROUP)
            .map(|group| {
                let lifted: Vec<(f64, Vec<f64>)> = group.iter().map(|b| b.lift_direction(q)).collect();
                let batch: Vec<(&AnnIndex, &[f64])> = group
                    .iter()
                    .zip(&lifted)
                    .filter_map(|(b, (_, u))| b.ann().map(|a| (a, u.as_slice())))
                    .collect();
                ann::warm(&batch);
                group
                    .iter()
                    .zip(&lifted)
                    .map(|(b, (h, u))| b.query_distance(*h, u))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .concat();
        let best = scores.iter().copied().fold(f64::INFINITY, f64::min);
        if self.bouquets.is_empty() {
            return Err(Error::EmptySet);
        }
        // assemble only the bouquets that tie for the best score
        let slack = 1e-12 * best.max(1.0);
        scores
            .par_iter()
            .zip(&self.bouquets)
            .filter(|(&s, _)| s <= best + slack)
            .map(|(_, b)| b.query(q))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min_by(|a, b| a.cmp_rank(b))
            .ok_or(Error::EmptySet)
    }
}

macro_rules! enumeration_index {
    ($(#[$doc:meta])* $name:ident, $linear:expr) => {
        $(#[$doc])*
        #[derive(Debug, Clone)]
        pub struct $name(Bouquets);

        impl $name {
            /// Builds one bouquet per `(k-1)`-subset of `points`, refusing more than
            /// `budget` of them. Affinely dependent subsets are skipped.
            pub fn build(points: &PointSet, k: usize, cfg: AnnConfig, budget: u64) -> Result<Self> {
                Bouquets::build(points, k, cfg, budget, $linear).map(Self)
            }

            pub fn k(&self) -> usize {
                self.0.k
            }

            /// Number of bouquets built.
            pub fn structures(&self) -> usize {
                self.0.bouquets.len()
            }

            /// Number of degenerate bases left out.
            pub fn skipped(&self) -> usize {
                self.0.skipped
            }

            pub fn bouquets(&self) -> &[BouquetIndex] {
                &self.0.bouquets
            }

            pub fn query(&self, q: &[f64]) -> Result<QueryResult> {
                self.0.query(q)
            }
        }
    };
}

enumeration_index!(
    /// Approximate nearest induced `(k-1)`-flat: the affine hull of `k` input points.
    AnifIndex,
    false
);
enumeration_index!(
    /// Approximate nearest linear induced `k`-flat: the span of `k` input points.
    AnlfIndex,
    true
);
