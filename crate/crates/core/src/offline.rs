//! Single-shot `2(1+ε)`-approximate nearest induced segment.
//!
//! All points are projected onto a sphere around the query. For each point, the
//! nearest projection to its antipodal reflection names a partner, and the segment
//! to that partner is scored exactly.

use crate::ann::{AnnConfig, AnnIndex};
use crate::geometry::linalg::{dist, scale, sub};
use crate::geometry::{point_segment_distance, PointSet};
use crate::{Error, QueryResult, Result, Tolerances, Variant};
use rayon::prelude::*;

fn unit_offset(q: &[f64], r: f64, p: &[f64]) -> Result<Vec<f64>> {
    if q.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: q.len(),
            got: p.len(),
        });
    }
    let v = sub(p, q);
    let n = dist(p, q);
    if n <= Tolerances::DEFAULT.zero * r {
        return Err(Error::CoincidentWithQuery);
    }
    Ok(scale(&v, r / n))
}

/// Projection of `p` onto the sphere of radius `r` around `q`.
pub fn spherical_project(q: &[f64], r: f64, p: &[f64]) -> Result<Vec<f64>> {
    let u = unit_offset(q, r, p)?;
    Ok(q.iter().zip(&u).map(|(a, b)| a + b).collect())
}

/// The antipode of [`spherical_project`] through `q`.
pub fn spherical_reflect(q: &[f64], r: f64, p: &[f64]) -> Result<Vec<f64>> {
    let u = unit_offset(q, r, p)?;
    Ok(q.iter().zip(&u).map(|(a, b)| a - b).collect())
}

fn segment(points: &PointSet, a: usize, b: usize, q: &[f64]) -> QueryResult {
    let (d, t) = point_segment_distance(points.coords(a), points.coords(b), q);
    QueryResult::new(Variant::Segment, d, vec![(a, 1.0 - t), (b, t)])
}

/// [`offline_nearest_segment_with_radius`] on the unit sphere.
pub fn offline_nearest_segment(points: &PointSet, q: &[f64], cfg: AnnConfig) -> Result<QueryResult> {
    offline_nearest_segment_with_radius(points, q, cfg, 1.0)
}

/// Segment between two input points within `2(1+ε)` of the nearest one to `q`.
pub fn offline_nearest_segment_with_radius(points: &PointSet, q: &[f64], cfg: AnnConfig, r: f64) -> Result<QueryResult> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    points.check_query(q)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::OutOfRange { value: r, limit: f64::INFINITY });
    }
    // distinct locations, each represented by its lowest id
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points
            .coords(a)
            .iter()
            .zip(points.coords(b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut reps: Vec<usize> = Vec::new();
    let mut best: Option<QueryResult> = None;
    for w in order.windows(2) {
        if points.coords(w[0]) == points.coords(w[1]) {
            best = QueryResult::best(best, Some(segment(points, w[0], w[1], q)));
        }
    }
    for (i, &id) in order.iter().enumerate() {
        if i == 0 || points.coords(order[i - 1]) != points.coords(id) {
            reps.push(id);
        }
    }
    reps.sort_unstable();
    if let Some(&hit) = reps.iter().find(|&&id| dist(points.coords(id), q) <= Tolerances::DEFAULT.zero * r) {
        let other = reps.iter().copied().find(|&o| o != hit).unwrap_or(hit);
        let mut res = segment(points, hit, other, q);
        if other == hit {
            res = QueryResult::new(Variant::Segment, res.distance, vec![(hit, 1.0)]);
        }
        return Ok(res);
    }
    if reps.len() < 2 {
        return Ok(best.expect("duplicates give a candidate"));
    }
    let projected = reps
        .iter()
        .enumerate()
        .map(|(slot, &id)| spherical_project(q, r, points.coords(id)).map(|p| (slot, p)))
        .collect::<Result<Vec<_>>>()?;
    let ann = AnnIndex::build(points.dim(), projected, cfg)?;
    let found = reps
        .par_iter()
        .enumerate()
        .map(|(slot, &id)| {
            let hit = ann.query(&spherical_reflect(q, r, points.coords(id))?)?;
            let partner = if hit.id == slot { reps[(slot + 1) % reps.len()] } else { reps[hit.id] };
            Ok(segment(points, id.min(partner), id.max(partner), q))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found
        .into_iter()
        .fold(best, |acc, r| QueryResult::best(acc, Some(r)))
        .expect("at least two locations"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_examples() {
        assert_eq!(spherical_project(&[0.0, 0.0], 1.0, &[5.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(spherical_reflect(&[0.0, 0.0], 1.0, &[5.0, 0.0]).unwrap(), vec![-1.0, 0.0]);
        let p = [0.6, 0.8];
        let pi = spherical_project(&[0.0, 0.0], 1.0, &p).unwrap();
        assert!(dist(&pi, &p) < 1e-15);
        assert!(matches!(spherical_project(&[1.0], 1.0, &[1.0]), Err(Error::CoincidentWithQuery)));
    }

    #[test]
    fn query_on_data_point_and_duplicates() {
        let cfg = AnnConfig::exact(0.2).unwrap();
        let p = PointSet::new(vec![vec![0.0, 0.0], vec![4.0, 1.0], vec![2.0, 5.0]]).unwrap();
        assert_eq!(offline_nearest_segment(&p, &[4.0, 1.0], cfg).unwrap().distance, 0.0);
        let dup = PointSet::new(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let r = offline_nearest_segment(&dup, &[1.0, 2.0], cfg).unwrap();
        assert_eq!((r.distance, r.witness_ids), (1.0, vec![0, 1]));
        let one = PointSet::new(vec![vec![1.0]]).unwrap();
        assert!(matches!(offline_nearest_segment(&one, &[0.0], cfg), Err(Error::TooFewPoints { .. })));
    }
}
