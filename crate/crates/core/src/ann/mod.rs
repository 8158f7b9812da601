//! `(1+ε)`-approximate nearest neighbour indexes.
//!
//! Every query structure in the crate is assembled from [`AnnIndex`] instances. The
//! [`Backend::Exact`] backend is a linear scan and doubles as the reference for the
//! approximate [`Backend::Tree`] backend.

mod exact;
mod tree;

use crate::geometry::PointSet;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub use exact::ExactIndex;
pub use tree::TreeIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Exact,
    Tree,
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Backend::Exact),
            "tree" => Ok(Backend::Tree),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnConfig {
    pub epsilon: f64,
    pub backend: Backend,
}

impl AnnConfig {
    /// Largest accepted approximation parameter.
    pub const MAX_EPSILON: f64 = 8.0;

    pub fn new(epsilon: f64, backend: Backend) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= Self::MAX_EPSILON) {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        Ok(Self { epsilon, backend })
    }

    pub fn exact(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, Backend::Exact)
    }

    /// Same backend with `epsilon` divided by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            epsilon: self.epsilon / factor,
            ..self
        }
    }
}

/// A returned neighbour: the label it was indexed under and its distance to the query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub id: usize,
    pub distance: f64,
}

/// Immutable nearest neighbour index over labelled vectors.
#[derive(Debug, Clone)]
pub enum AnnIndex {
    Exact(ExactIndex),
    Tree(TreeIndex),
}

/// Row-major storage shared by the backends.
#[derive(Debug, Clone)]
pub(crate) struct Rows {
    pub dim: usize,
    pub data: Vec<f64>,
    pub labels: Vec<usize>,
}

impl Rows {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn dist_sq(&self, i: usize, q: &[f64]) -> f64 {
        self.row(i).iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
    }
}

impl AnnIndex {
    /// Builds an index over `(label, vector)` pairs of a common dimension `dim`.
    pub fn build<I, V>(dim: usize, items: I, cfg: AnnConfig) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, V)>,
        V: AsRef<[f64]>,
    {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut rows = Rows {
            dim,
            data: Vec::new(),
            labels: Vec::new(),
        };
        for (label, v) in items {
            let v = v.as_ref();
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            rows.data.extend_from_slice(v);
            rows.labels.push(label);
        }
        if rows.labels.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(match cfg.backend {
            Backend::Exact => AnnIndex::Exact(ExactIndex::new(rows)),
            Backend::Tree => AnnIndex::Tree(TreeIndex::new(rows, cfg.epsilon)),
        })
    }

    pub fn dim(&self) -> usize {
        self.rows().dim
    }

    pub fn len(&self) -> usize {
        self.rows().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Labels in insertion order.
    pub fn labels(&self) -> &[usize] {
        &self.rows().labels
    }

    fn rows(&self) -> &Rows {
        match self {
            AnnIndex::Exact(e) => &e.rows,
            AnnIndex::Tree(t) => &t.rows,
        }
    }

    pub fn query(&self, q: &[f64]) -> Result<Neighbor> {
        if q.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: q.len(),
            });
        }
        let (slot, d2) = match self {
            AnnIndex::Exact(e) => e.nearest(q),
            AnnIndex::Tree(t) => t.nearest(q),
        };
        Ok(Neighbor {
            id: self.rows().labels[slot],
            distance: d2.sqrt(),
        })
    }
}

/// Touches the memory that queries `q_i` on indexes `idx_i` will start with.
/// Issuing this for a group of independent indexes before querying them one by
/// one lets their cache misses overlap.
pub fn warm(batch: &[(&AnnIndex, &[f64])]) {
    let trees: Vec<(&TreeIndex, &[f64])> = batch
        .iter()
        .filter_map(|&(idx, q)| match idx {
            AnnIndex::Tree(t) if q.len() == t.rows.dim => Some((t, q)),
            _ => None,
        })
        .collect();
    std::hint::black_box(tree::warm(&trees));
}

/// Index over a [`PointSet`] labelled by point ids.
pub fn ann_build(points: &PointSet, cfg: AnnConfig) -> Result<AnnIndex> {
    AnnIndex::build(points.dim(), points.iter().map(|p| (p.id, &p.coords)), cfg)
}

pub fn ann_query(idx: &AnnIndex, q: &[f64]) -> Result<Neighbor> {
    idx.query(q)
}
