use super::score_segment;
use crate::ann::{AnnConfig, AnnIndex};
use crate::geometry::linalg::{dist, sub};
use crate::geometry::Point;
use crate::{Error, QueryResult, Result, Tolerances};

/// Star whose points all lie on the unit sphere around the center.
#[derive(Debug, Clone)]
pub struct UniformStarIndex {
    base: Point,
    points: Vec<Point>,
    ann: AnnIndex,
}

fn check_unit(base: &[f64], p: &[f64]) -> Result<()> {
    let d = dist(base, p);
    if (d - 1.0).abs() > Tolerances::DEFAULT.rank {
        return Err(Error::NonUniformInput { distance: d });
    }
    Ok(())
}

impl UniformStarIndex {
    pub fn build(base: Point, points: Vec<Point>, cfg: AnnConfig) -> Result<Self> {
        for p in &points {
            if p.dim() != base.dim() {
                return Err(Error::DimensionMismatch {
                    expected: base.dim(),
                    got: p.dim(),
                });
            }
            check_unit(&base.coords, &p.coords)?;
        }
        let shifted = points.iter().enumerate().map(|(i, p)| (i, sub(&p.coords, &base.coords)));
        let ann = AnnIndex::build(base.dim(), shifted, cfg)?;
        Ok(Self { base, points, ann })
    }

    /// Distance from a query on the unit sphere around the center to the star,
    /// capped at 1 (the distance to the center itself).
    pub fn query(&self, q: &[f64]) -> Result<QueryResult> {
        if q.len() != self.base.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.base.dim(),
                got: q.len(),
            });
        }
        check_unit(&self.base.coords, q)?;
        let hit = self.ann.query(&sub(q, &self.base.coords))?;
        let a = &self.points[hit.id];
        let seg = score_segment((self.base.id, &self.base.coords), (a.id, &a.coords), q);
        if seg.distance <= 1.0 {
            Ok(seg)
        } else {
            Ok(QueryResult::new(seg.variant, 1.0, vec![(self.base.id, 1.0)]))
        }
    }
}
