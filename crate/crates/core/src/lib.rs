//! Approximate nearest induced subspace queries.
//!
//! Given a point set `P` in `R^d` and a sparsity `k`, this crate answers queries of the form
//! "which `k` points of `P` span the flat (or simplex) closest to `q`?". Four families are
//! supported:
//!
//! * nearest linear induced flat (sparse linear regression), see [`bouquet::AnlfIndex`],
//! * nearest induced flat (affine sparse regression), see [`bouquet::AnifIndex`],
//! * nearest induced simplex (convex sparse regression), see [`book::AnisIndex`],
//! * nearest induced segment, online ([`star::OnlineSegmentIndex`]) and single-shot
//!   ([`offline::offline_nearest_segment`]).
//!
//! Every structure is built on top of a pluggable `(1+ε)` nearest neighbour index
//! ([`ann::AnnIndex`]). Exhaustive solvers live in [`oracle`] and the lower-bound
//! reductions (k-sum, Hopcroft, affine degeneracy) in [`reductions`].

pub mod ann;
pub mod book;
pub mod bouquet;
mod error;
pub mod geometry;
pub mod offline;
pub mod oracle;
pub mod reductions;
mod result;
pub mod star;
mod tolerance;

pub use error::{Error, Result};
pub use result::{QueryResult, Variant};
pub use tolerance::Tolerances;

/// Default cap on the number of per-base structures an enumeration index may build.
pub const DEFAULT_STRUCTURE_BUDGET: u64 = 10_000_000;

/// Number of `m`-subsets of an `n`-set, saturating at `u64::MAX`.
pub fn binomial(n: usize, m: usize) -> u64 {
    if m > n {
        return 0;
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for i in 0..m {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All `m`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - m + i {
                cur[i] += 1;
                for j in i + 1..m {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}
