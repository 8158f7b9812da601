use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A point of `R^d` carrying a stable id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: usize,
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(id: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { id, coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// Points of a common dimension whose ids equal their positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    /// Builds a set from rows; ids are assigned by position.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).ok_or(Error::EmptySet)?;
        Self::with_dim(dim, rows)
    }

    /// Like [`PointSet::new`] but allows an empty set of known dimension.
    pub fn with_dim(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let points = rows
            .into_iter()
            .enumerate()
            .map(|(id, coords)| {
                if coords.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: coords.len(),
                    });
                }
                Point::new(id, coords)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, id: usize) -> &Point {
        &self.points[id]
    }

    pub fn coords(&self, id: usize) -> &[f64] {
        &self.points[id].coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub(crate) fn check_query(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: q.len(),
            });
        }
        Ok(())
    }

    /// Diagonal of the bounding box.
    pub fn spread(&self) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.dim {
            let (lo, hi) = self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.coords[j]), hi.max(p.coords[j]))
            });
            if hi >= lo {
                acc += (hi - lo) * (hi - lo);
            }
        }
        acc.sqrt()
    }
}
