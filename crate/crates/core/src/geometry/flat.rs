use super::linalg::{
    add_scaled, complement_basis, dot, gram_schmidt, norm, smallest_singular_value, solve_square,
    sub,
};
use super::point::Point;
use crate::{Error, Result, Tolerances};

/// An ordered, affinely independent base sequence `B = (p_1, ..., p_m)`.
///
/// A *linear* base has the origin adjoined in front, so its flat is the span of
/// the members rather than their affine hull.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSet {
    members: Vec<Point>,
    linear: bool,
}

impl BaseSet {
    pub fn new(members: Vec<Point>) -> Result<Self> {
        Self::build(members, false)
    }

    /// Base whose flat also passes through the origin.
    pub fn linear(members: Vec<Point>) -> Result<Self> {
        Self::build(members, true)
    }

    fn build(members: Vec<Point>, linear: bool) -> Result<Self> {
        let dim = members.first().map(Point::dim).ok_or(Error::EmptySet)?;
        if let Some(p) = members.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        let base = Self { members, linear };
        let sigma = smallest_singular_value(&base.difference_columns(), dim);
        if sigma <= Tolerances::DEFAULT.rank {
            return Err(Error::DegenerateBase { sigma });
        }
        Ok(base)
    }

    fn difference_columns(&self) -> Vec<Vec<f64>> {
        if self.linear {
            self.members.iter().map(|p| p.coords.clone()).collect()
        } else {
            let o = &self.members[0].coords;
            self.members[1..].iter().map(|p| sub(&p.coords, o)).collect()
        }
    }

    pub fn members(&self) -> &[Point] {
        &self.members
    }

    pub fn ids(&self) -> Vec<usize> {
        self.members.iter().map(|p| p.id).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// Dimension of the flat `F_B`.
    pub fn flat_dim(&self) -> usize {
        if self.linear {
            self.members.len()
        } else {
            self.members.len() - 1
        }
    }

    /// Point of `F_B` used as the frame origin.
    pub fn anchor(&self) -> Vec<f64> {
        if self.linear {
            vec![0.0; self.dim()]
        } else {
            self.members[0].coords.clone()
        }
    }

    pub fn frame(&self) -> FlatFrame {
        FlatFrame::new(self)
    }
}

/// Orthonormal coordinates for a flat `F_B`: an origin on the flat, a basis of
/// its direction space and (optionally) a basis of the orthogonal complement.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatFrame {
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
    complement: Vec<Vec<f64>>,
    /// Flat coordinates of the base members, used to recover coefficients.
    member_coords: Vec<Vec<f64>>,
    linear: bool,
}

impl FlatFrame {
    pub fn new(base: &BaseSet) -> Self {
        let basis = gram_schmidt(&base.difference_columns(), 0.0)
            .expect("base independence was checked on construction");
        let origin = base.anchor();
        let mut frame = Self {
            origin,
            basis,
            complement: Vec::new(),
            member_coords: Vec::new(),
            linear: base.is_linear(),
        };
        frame.member_coords = base.members.iter().map(|p| frame.local(&p.coords)).collect();
        frame
    }

    /// Same frame with the orthogonal complement basis filled in.
    pub fn with_complement(mut self) -> Self {
        self.complement = complement_basis(&self.basis, self.origin.len());
        self
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn complement(&self) -> &[Vec<f64>] {
        &self.complement
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    /// Coordinates of `x - origin` along the flat basis.
    pub fn local(&self, x: &[f64]) -> Vec<f64> {
        let v = sub(x, &self.origin);
        self.basis.iter().map(|b| dot(&v, b)).collect()
    }

    /// Nearest point of the flat to `x`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.from_local(&self.local(x))
    }

    pub fn from_local(&self, y: &[f64]) -> Vec<f64> {
        let mut p = self.origin.clone();
        for (c, b) in y.iter().zip(&self.basis) {
            add_scaled(&mut p, *c, b);
        }
        p
    }

    /// `x - project(x)`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = sub(x, &self.origin);
        for _ in 0..2 {
            for b in &self.basis {
                let c = dot(&r, b);
                add_scaled(&mut r, -c, b);
            }
        }
        r
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        norm(&self.residual(x))
    }

    pub(crate) fn set_complement(&mut self, complement: Vec<Vec<f64>>) {
        self.complement = complement;
    }

    /// Coordinates of an ambient vector along the complement basis.
    pub fn complement_coords(&self, v: &[f64]) -> Vec<f64> {
        self.complement.iter().map(|c| dot(v, c)).collect()
    }

    /// Weights on the base members whose combination is the flat point with
    /// local coordinates `y` (affine weights sum to one; linear weights are free).
    pub fn member_weights(&self, y: &[f64]) -> Vec<f64> {
        if self.linear {
            let rows = transpose(&self.member_coords);
            solve_square(&rows, y).unwrap_or_else(|| vec![0.0; y.len()])
        } else {
            let m = self.member_coords.len();
            if m == 1 {
                return vec![1.0];
            }
            let cols: Vec<Vec<f64>> = self.member_coords[1..].to_vec();
            let rows = transpose(&cols);
            let t = solve_square(&rows, y).unwrap_or_else(|| vec![0.0; m - 1]);
            let mut w = Vec::with_capacity(m);
            w.push(1.0 - t.iter().sum::<f64>());
            w.extend(t);
            w
        }
    }
}

fn transpose(cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = cols.first().map_or(0, Vec::len);
    (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Projection of a query onto a flat.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatProjection {
    pub distance: f64,
    pub projection: Vec<f64>,
    /// One weight per input point, in input order.
    pub coefficients: Vec<f64>,
}

fn project_onto(base: &BaseSet, q: &[f64]) -> FlatProjection {
    let frame = base.frame();
    let y = frame.local(q);
    let projection = frame.from_local(&y);
    FlatProjection {
        distance: super::linalg::dist(q, &projection),
        coefficients: frame.member_weights(&y),
        projection,
    }
}

/// Distance from `q` to the affine hull of `s`.
pub fn flat_distance(s: &[Point], q: &[f64]) -> Result<FlatProjection> {
    let base = BaseSet::new(s.to_vec())?;
    check_dim(base.dim(), q)?;
    Ok(project_onto(&base, q))
}

/// Distance from `q` to the linear span of `s` (the origin adjoined to `s`).
pub fn linear_flat_distance(s: &[Point], q: &[f64]) -> Result<FlatProjection> {
    let base = BaseSet::linear(s.to_vec())?;
    check_dim(base.dim(), q)?;
    Ok(project_onto(&base, q))
}

fn check_dim(dim: usize, q: &[f64]) -> Result<()> {
    if q.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: q.len(),
        });
    }
    Ok(())
}

/// Unit direction of `p` away from the flat, in complement coordinates.
pub fn direction(frame: &FlatFrame, p: &[f64]) -> Result<Vec<f64>> {
    let r = frame.residual(p);
    let n = norm(&r);
    if n <= Tolerances::DEFAULT.zero {
        return Err(Error::OnFlat { distance: n });
    }
    let u: Vec<f64> = r.iter().map(|x| x / n).collect();
    Ok(frame.complement_coords(&u))
}

/// Distance from `q` to the segment `ab`, and the parameter `t` of the nearest
/// point `a + t (b - a)`.
pub fn point_segment_distance(a: &[f64], b: &[f64], q: &[f64]) -> (f64, f64) {
    let ab = sub(b, a);
    let len_sq = dot(&ab, &ab);
    let t = if len_sq > 0.0 {
        (dot(&sub(q, a), &ab) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut p = a.to_vec();
    add_scaled(&mut p, t, &ab);
    (super::linalg::dist(&p, q), t)
}
