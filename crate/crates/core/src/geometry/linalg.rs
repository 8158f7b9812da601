//! Small dense helpers over `f64` slices.

use nalgebra::{DMatrix, DVector};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_scaled(acc: &mut [f64], s: f64, v: &[f64]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += s * x;
    }
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

/// Removes the components of `v` along the orthonormal `basis`, with one
/// re-orthogonalization pass. Returns the residual.
pub fn orthogonalize(basis: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(&r, b);
            add_scaled(&mut r, -c, b);
        }
    }
    r
}

/// Modified Gram-Schmidt over `vectors` in order. Fails with the offending
/// residual norm when a vector is (numerically) dependent on its predecessors.
pub fn gram_schmidt(vectors: &[Vec<f64>], tol: f64) -> Result<Vec<Vec<f64>>, f64> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let r = orthogonalize(&basis, v);
        let n = norm(&r);
        if n <= tol {
            return Err(n);
        }
        basis.push(scale(&r, 1.0 / n));
    }
    Ok(basis)
}

/// Completes an orthonormal `basis` of a subspace of `R^dim` to an orthonormal
/// basis of its orthogonal complement, scanning the standard basis in order.
///
/// A unit vector `e_j` is accepted when its residual exceeds `1/sqrt(dim)`; the
/// residuals of the `e_j` sum (squared) to the complement dimension, so a single
/// pass always finds enough of them.
pub fn complement_basis(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let needed = dim.saturating_sub(basis.len());
    let threshold = 0.99 / (dim as f64).sqrt();
    let mut all: Vec<Vec<f64>> = basis.to_vec();
    let mut out = Vec::with_capacity(needed);
    for j in 0..dim {
        if out.len() == needed {
            break;
        }
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        let r = orthogonalize(&all, &e);
        let n = norm(&r);
        if n > threshold {
            let u = scale(&r, 1.0 / n);
            all.push(u.clone());
            out.push(u);
        }
    }
    debug_assert_eq!(out.len(), needed);
    out
}

fn column_matrix(columns: &[Vec<f64>], rows: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i])
}

/// Smallest singular value of the matrix whose columns are `columns`
/// (`+inf` for an empty column list).
pub fn smallest_singular_value(columns: &[Vec<f64>], rows: usize) -> f64 {
    if columns.is_empty() {
        return f64::INFINITY;
    }
    if columns.len() > rows {
        return 0.0;
    }
    let m = column_matrix(columns, rows);
    m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Minimum-norm least-squares solution of `A x = b` with `A` given by columns.
pub fn least_squares(columns: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    if columns.is_empty() {
        return Vec::new();
    }
    let m = column_matrix(columns, b.len());
    let svd = m.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd
        .solve(&DVector::from_column_slice(b), smax * 1e-13)
        .expect("u and v were computed");
    x.iter().copied().collect()
}

/// Solves a small square system; `None` when singular.
pub fn solve_square(rows: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    m.lu()
        .solve(&DVector::from_column_slice(b))
        .map(|x| x.iter().copied().collect())
}
