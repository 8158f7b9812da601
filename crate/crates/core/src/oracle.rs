//! Exhaustive solvers used as ground truth.
//!
//! Each solver enumerates every `k`-subset of the input; rank-deficient subsets are
//! handled through minimum-norm least squares so nothing is skipped.

use crate::geometry::linalg::{dist, least_squares, sub};
use crate::geometry::{point_segment_distance, simplex_distance, PointSet};
use crate::{subsets, Error, QueryResult, Result, Variant};
use rayon::prelude::*;

fn check(points: &PointSet, k: usize, q: &[f64]) -> Result<()> {
    if k == 0 || points.len() < k {
        return Err(Error::TooFewPoints {
            needed: k.max(1),
            got: points.len(),
        });
    }
    points.check_query(q)
}

fn best_over<F>(points: &PointSet, k: usize, score: F) -> QueryResult
where
    F: Fn(&[usize]) -> QueryResult + Sync,
{
    subsets(points.len(), k)
        .par_iter()
        .map(|s| score(s))
        .min_by(|a, b| a.cmp_rank(b))
        .expect("at least one subset")
}

/// Distance from `q` to the affine hull (or the span, if `linear`) of the given points.
fn hull_result(points: &PointSet, ids: &[usize], q: &[f64], linear: bool, variant: Variant) -> QueryResult {
    let (anchor, rest) = if linear { (None, ids) } else { (Some(ids[0]), &ids[1..]) };
    let origin = anchor.map_or_else(|| vec![0.0; q.len()], |a| points.coords(a).to_vec());
    let cols: Vec<Vec<f64>> = rest.iter().map(|&i| sub(points.coords(i), &origin)).collect();
    let coef = least_squares(&cols, &sub(q, &origin));
    let mut proj = origin.clone();
    for (c, col) in coef.iter().zip(&cols) {
        for (p, x) in proj.iter_mut().zip(col) {
            *p += c * x;
        }
    }
    let mut tau: Vec<(usize, f64)> = rest.iter().copied().zip(coef.iter().copied()).collect();
    if let Some(a) = anchor {
        tau.push((a, 1.0 - coef.iter().sum::<f64>()));
    }
    QueryResult::new(variant, dist(q, &proj), tau)
}

/// Exact nearest linear flat spanned by `k` points.
pub fn nearest_linear_flat(points: &PointSet, k: usize, q: &[f64]) -> Result<QueryResult> {
    check(points, k, q)?;
    Ok(best_over(points, k, |s| hull_result(points, s, q, true, Variant::Slr)))
}

/// Exact nearest affine hull of `k` points.
pub fn nearest_flat(points: &PointSet, k: usize, q: &[f64]) -> Result<QueryResult> {
    check(points, k, q)?;
    Ok(best_over(points, k, |s| hull_result(points, s, q, false, Variant::AffineSlr)))
}

/// Exact nearest simplex spanned by `k` points.
pub fn nearest_simplex(points: &PointSet, k: usize, q: &[f64]) -> Result<QueryResult> {
    check(points, k, q)?;
    Ok(best_over(points, k, |s| {
        let verts: Vec<_> = s.iter().map(|&i| points.get(i).clone()).collect();
        let w = simplex_distance(&verts, q);
        QueryResult::new(
            Variant::ConvexSlr,
            w.distance,
            w.vertex_ids.iter().copied().zip(w.barycentric.iter().copied()).collect(),
        )
    }))
}

/// Exact nearest segment between two input points.
pub fn nearest_segment(points: &PointSet, q: &[f64]) -> Result<QueryResult> {
    check(points, 2, q)?;
    Ok(best_over(points, 2, |s| {
        let (d, t) = point_segment_distance(points.coords(s[0]), points.coords(s[1]), q);
        QueryResult::new(Variant::Segment, d, vec![(s[0], 1.0 - t), (s[1], t)])
    }))
}
