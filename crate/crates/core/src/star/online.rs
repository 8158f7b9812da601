use super::StarIndex;
use crate::ann::AnnConfig;
use crate::geometry::PointSet;
use crate::{Error, QueryResult, Result};
use rayon::prelude::*;

/// Approximate nearest induced segment: one star per input point.
#[derive(Debug, Clone)]
pub struct OnlineSegmentIndex {
    dim: usize,
    stars: Vec<StarIndex>,
}

impl OnlineSegmentIndex {
    pub fn build(points: &PointSet, cfg: AnnConfig) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: points.len(),
            });
        }
        let stars = points
            .points()
            .par_iter()
            .map(|c| {
                let others = points.iter().filter(|p| p.id != c.id).cloned().collect();
                StarIndex::build(c.clone(), others, cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: points.dim(), stars })
    }

    pub fn stars(&self) -> &[StarIndex] {
        &self.stars
    }

    pub fn query(&self, q: &[f64]) -> Result<QueryResult> {
        if q.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: q.len(),
            });
        }
        let found = self
            .stars
            .par_iter()
            .map(|s| s.query(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(found
            .into_iter()
            .min_by(|a, b| a.cmp_rank(b))
            .expect("at least two stars"))
    }
}
