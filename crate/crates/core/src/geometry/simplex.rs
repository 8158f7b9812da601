use super::flat::point_segment_distance;
use super::linalg::{add_scaled, dist, least_squares, smallest_singular_value, sub};
use super::point::Point;
use crate::Tolerances;

/// Nearest point of a simplex `conv(S)` to a query.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWitness {
    /// Ids of the face carrying the nearest point.
    pub vertex_ids: Vec<usize>,
    pub nearest_point: Vec<f64>,
    /// Non-negative weights aligned with `vertex_ids`, summing to one.
    pub barycentric: Vec<f64>,
    pub distance: f64,
}

/// Exact distance from `q` to `conv(S)` by recursive face enumeration.
///
/// Projects onto `aff(S)`; when every barycentric coordinate is non-negative the
/// projection is the answer, otherwise the minimum over all facets is taken.
/// Duplicate and affinely dependent vertex sets fall through to their facets.
pub fn simplex_distance(s: &[Point], q: &[f64]) -> SimplexWitness {
    let verts: Vec<&[f64]> = s.iter().map(|p| p.coords.as_slice()).collect();
    let ids: Vec<usize> = s.iter().map(|p| p.id).collect();
    simplex_distance_coords(&verts, &ids, q)
}

pub(crate) fn simplex_distance_coords(verts: &[&[f64]], ids: &[usize], q: &[f64]) -> SimplexWitness {
    assert!(!verts.is_empty(), "simplex needs at least one vertex");
    // collapse exact duplicates
    let mut uniq: Vec<usize> = Vec::with_capacity(verts.len());
    for i in 0..verts.len() {
        if !uniq.iter().any(|&j| verts[j] == verts[i]) {
            uniq.push(i);
        }
    }
    let (distance, weights) = nearest(verts, &uniq, q);
    let mut vertex_ids = Vec::new();
    let mut barycentric = Vec::new();
    let mut nearest_point = vec![0.0; q.len()];
    for (&i, &w) in uniq.iter().zip(&weights) {
        if w > 0.0 {
            vertex_ids.push(ids[i]);
            barycentric.push(w);
            add_scaled(&mut nearest_point, w, verts[i]);
        }
    }
    if vertex_ids.is_empty() {
        // all weights vanished numerically; fall back to the first vertex
        vertex_ids.push(ids[uniq[0]]);
        barycentric.push(1.0);
        nearest_point = verts[uniq[0]].to_vec();
    }
    SimplexWitness {
        vertex_ids,
        nearest_point,
        barycentric,
        distance,
    }
}

/// Returns the distance and weights aligned with `idx`.
fn nearest(verts: &[&[f64]], idx: &[usize], q: &[f64]) -> (f64, Vec<f64>) {
    match idx.len() {
        1 => return (dist(verts[idx[0]], q), vec![1.0]),
        2 => {
            let (d, t) = point_segment_distance(verts[idx[0]], verts[idx[1]], q);
            return (d, vec![1.0 - t, t]);
        }
        _ => {}
    }
    let tol = Tolerances::DEFAULT;
    let o = verts[idx[0]];
    let cols: Vec<Vec<f64>> = idx[1..].iter().map(|&i| sub(verts[i], o)).collect();
    if smallest_singular_value(&cols, q.len()) > tol.rank {
        let t = least_squares(&cols, &sub(q, o));
        let mut w = Vec::with_capacity(idx.len());
        w.push(1.0 - t.iter().sum::<f64>());
        w.extend(t);
        if w.iter().all(|&x| x >= -tol.face) {
            for x in w.iter_mut() {
                *x = x.max(0.0);
            }
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= total);
            let mut p = vec![0.0; q.len()];
            for (&i, &x) in idx.iter().zip(&w) {
                add_scaled(&mut p, x, verts[i]);
            }
            return (dist(&p, q), w);
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for drop in 0..idx.len() {
        let facet: Vec<usize> = idx.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &i)| i).collect();
        let (d, wf) = nearest(verts, &facet, q);
        if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
            let mut w = wf;
            w.insert(drop, 0.0);
            best = Some((d, w));
        }
    }
    best.expect("facets exist for three or more vertices")
}
