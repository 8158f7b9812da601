use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Which problem a [`QueryResult`] answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Exact nearest linear induced flat.
    Slr,
    /// Approximate nearest linear induced flat.
    Anlf,
    /// Exact nearest induced flat.
    AffineSlr,
    /// Approximate nearest induced flat.
    Anif,
    /// Exact nearest induced simplex.
    ConvexSlr,
    /// Approximate nearest induced simplex.
    Anis,
    /// Nearest induced segment.
    Segment,
}

/// Answer to a query: the distance, the supporting points and the sparse coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub variant: Variant,
    pub distance: f64,
    /// Sorted point ids of the witness subset.
    pub witness_ids: Vec<usize>,
    /// `(id, weight)` pairs; `sum weight * point` is the reported nearest point.
    pub tau: Vec<(usize, f64)>,
}

impl QueryResult {
    /// Builds a result from unsorted `(id, weight)` pairs.
    pub fn new(variant: Variant, distance: f64, mut tau: Vec<(usize, f64)>) -> Self {
        tau.sort_by_key(|&(id, _)| id);
        let witness_ids = tau.iter().map(|&(id, _)| id).collect();
        Self {
            variant,
            distance,
            witness_ids,
            tau,
        }
    }

    /// Total order used for deterministic reductions: distance first, then witness ids.
    pub fn cmp_rank(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then_with(|| self.witness_ids.cmp(&other.witness_ids))
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    /// Keeps the better of two optional results.
    pub fn best(a: Option<Self>, b: Option<Self>) -> Option<Self> {
        match (a, b) {
            (Some(a), Some(b)) => Some(if b.cmp_rank(&a) == Ordering::Less { b } else { a }),
            (a, None) => a,
            (None, b) => b,
        }
    }

    /// Evaluates `sum tau_i * p_i` with `coords(id)` supplying the points.
    pub fn reconstruct<'a>(&self, coords: impl Fn(usize) -> &'a [f64], dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for &(id, w) in &self.tau {
            for (o, c) in out.iter_mut().zip(coords(id)) {
                *o += w * c;
            }
        }
        out
    }

    pub fn weight_sum(&self) -> f64 {
        self.tau.iter().map(|&(_, w)| w).sum()
    }
}
