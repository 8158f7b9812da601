use super::BookIndex;
use crate::ann::AnnConfig;
use crate::geometry::{simplex_distance_coords, BaseSet, PointSet};
use crate::{binomial, subsets, Error, QueryResult, Result, Variant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MIN_K: usize = 2;
const MAX_K: usize = 5;

/// Approximate nearest induced simplex: the convex hull of `k` input points.
///
/// One [`BookIndex`] per `(k-1)`-subset answers queries whose nearest point lies in
/// the relative interior of a page; all lower-dimensional faces are scanned exactly.
#[derive(Debug, Clone)]
pub struct AnisIndex {
    points: PointSet,
    k: usize,
    faces: Vec<Vec<usize>>,
    books: Vec<BookIndex>,
    seed: u64,
}

impl AnisIndex {
    pub fn build(points: &PointSet, k: usize, cfg: AnnConfig, budget: u64) -> Result<Self> {
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
        let faces = subsets(points.len(), k - 1);
        let books: Vec<Option<BookIndex>> = faces
            .par_iter()
            .map(|ids| {
                let members = ids.iter().map(|&i| points.get(i).clone()).collect();
                match BaseSet::new(members) {
                    Ok(base) => BookIndex::build(base, points.points(), cfg).map(Some),
                    Err(Error::DegenerateBase { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            points: points.clone(),
            k,
            faces,
            books: books.into_iter().flatten().collect(),
            seed: 0,
        })
    }

    /// Seed for the page searches.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn books(&self) -> &[BookIndex] {
        &self.books
    }

    pub fn query(&self, q: &[f64]) -> Result<QueryResult> {
        self.query_seeded(q, self.seed)
    }

    /// Each book draws from its own stream of a generator seeded with `seed`, so the
    /// answer does not depend on scheduling.
    pub fn query_seeded(&self, q: &[f64], seed: u64) -> Result<QueryResult> {
        if q.len() != self.points.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.points.dim(),
                got: q.len(),
            });
        }
        let faces = self
            .faces
            .par_iter()
            .map(|ids| {
                let verts: Vec<&[f64]> = ids.iter().map(|&i| self.points.coords(i)).collect();
                let w = simplex_distance_coords(&verts, ids, q);
                QueryResult::new(
                    Variant::Anis,
                    w.distance,
                    w.vertex_ids.iter().copied().zip(w.barycentric.iter().copied()).collect(),
                )
            })
            .min_by(|a, b| a.cmp_rank(b));
        let pages = self
            .books
            .par_iter()
            .enumerate()
            .filter(|(_, b)| b.in_prism(q))
            .map(|(i, b)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                b.page_query_with(q, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        let pages = pages.into_iter().min_by(|a, b| a.cmp_rank(b));
        QueryResult::best(faces, pages).ok_or(Error::EmptySet)
    }
}
