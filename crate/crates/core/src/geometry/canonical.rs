//! Canonical realization of pages `conv(B ∪ {p})` inside one common halfflat.
//!
//! With `B = (p_1, ..., p_{k-1})`, the halfflat `G` is `R^{k-2} x R^+`: the first
//! `k - 2` coordinates are local coordinates of `F_B = aff(B)` (origin `p_1`),
//! the last one is the distance from `F_B`. Any point `x` maps to `G` by keeping
//! its projection onto `F_B` and its distance to `F_B`; this rotates the positive
//! halfflat of `x` onto `G` and preserves distances to every point of `F_B`.

use super::flat::{BaseSet, FlatFrame};
use super::linalg::{add_scaled, dot, gram_schmidt, norm, orthogonalize, scale, solve_square, sub};
use crate::{Error, Result, Tolerances};

/// Dihedral angles between the facets through the apex and the base facet.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseAngles(pub Vec<f64>);

impl BaseAngles {
    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &BaseAngles) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Ridge {
    /// Unit normal of the base facet opposite member `i`, pointing at member `i`.
    normal: Vec<f64>,
    offset: f64,
    altitude: f64,
}

/// Orthonormal coordinates for a base flat `F_B`, the canonical halfflats `G`
/// and `H'`, and the orthogonal complement of `F_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalFrame {
    flat: FlatFrame,
    ext1: Vec<f64>,
    ext2: Option<Vec<f64>>,
    base_coords: Vec<Vec<f64>>,
    ridges: Vec<Ridge>,
}

/// Builds the canonical frame of `base` with `aux1` fixing `G` and `aux2` fixing `H'`.
///
/// Orthonormalization order is deterministic: base members in sequence, then
/// `aux1`, then `aux2`, then the standard basis for the rest of the complement.
pub fn orthonormal_frame(base: &BaseSet, aux1: &[f64], aux2: Option<&[f64]>) -> Result<CanonicalFrame> {
    let flat = base.frame();
    let b = flat.origin().to_vec();
    let mut basis = flat.basis().to_vec();
    let mut ext = Vec::new();
    for aux in std::iter::once(aux1).chain(aux2) {
        if aux.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: b.len(),
                got: aux.len(),
            });
        }
        let r = orthogonalize(&basis, &sub(aux, &b));
        let n = norm(&r);
        if n <= Tolerances::DEFAULT.rank {
            return Err(Error::DegenerateAux { distance: n });
        }
        let u = scale(&r, 1.0 / n);
        basis.push(u.clone());
        ext.push(u);
    }
    Ok(CanonicalFrame::assemble(base, flat, ext))
}

impl CanonicalFrame {
    /// Frame with the default auxiliary directions taken from the standard basis.
    pub fn new(base: &BaseSet) -> Result<Self> {
        if base.is_linear() {
            return Err(Error::DegenerateBase { sigma: 0.0 });
        }
        let flat = base.frame().with_complement();
        let comp = flat.complement().to_vec();
        if comp.is_empty() {
            return Err(Error::DegenerateAux { distance: 0.0 });
        }
        let ext = comp.into_iter().take(2).collect();
        Ok(Self::assemble(base, flat, ext))
    }

    fn assemble(base: &BaseSet, flat: FlatFrame, ext: Vec<Vec<f64>>) -> Self {
        let mut ext = ext.into_iter();
        let ext1 = ext.next().expect("at least one extension");
        let ext2 = ext.next();
        let mut lead = vec![ext1.clone()];
        lead.extend(ext2.clone());
        let mut all = flat.basis().to_vec();
        all.extend(lead.iter().cloned());
        let mut complement = lead;
        complement.extend(super::linalg::complement_basis(&all, flat.dim()));
        let flat = FlatFrame::with_explicit_complement(flat, complement);
        let base_coords: Vec<Vec<f64>> = base.members().iter().map(|p| flat.local(&p.coords)).collect();
        let ridges = if base_coords.len() >= 2 { ridges_of(&base_coords) } else { Vec::new() };
        Self {
            flat,
            ext1,
            ext2,
            base_coords,
            ridges,
        }
    }

    pub fn origin(&self) -> &[f64] {
        self.flat.origin()
    }

    pub fn flat_basis(&self) -> &[Vec<f64>] {
        self.flat.basis()
    }

    pub fn ext1(&self) -> &[f64] {
        &self.ext1
    }

    pub fn ext2(&self) -> Option<&[f64]> {
        self.ext2.as_deref()
    }

    /// Orthonormal basis of `F_B^⊥`, starting with `ext1` and `ext2`.
    pub fn complement_basis(&self) -> &[Vec<f64>] {
        self.flat.complement()
    }

    pub fn flat(&self) -> &FlatFrame {
        &self.flat
    }

    /// Number of base points (`k - 1`).
    pub fn base_len(&self) -> usize {
        self.base_coords.len()
    }

    /// Local coordinates of the base members.
    pub fn base_coords(&self) -> &[Vec<f64>] {
        &self.base_coords
    }

    /// Canonical `G` coordinates of an ambient point: its `F_B` coordinates
    /// followed by its distance from `F_B`.
    pub fn to_halfflat(&self, x: &[f64]) -> Vec<f64> {
        let mut c = self.flat.local(x);
        c.push(self.flat.distance(x));
        c
    }

    /// Ambient point of `G` with the given canonical coordinates.
    pub fn from_halfflat(&self, c: &[f64]) -> Vec<f64> {
        let (y, h) = c.split_at(c.len() - 1);
        let mut p = self.flat.from_local(y);
        add_scaled(&mut p, h[0], &self.ext1);
        p
    }

    /// The unique point of `G` at distances `lengths` from the base members.
    ///
    /// Differencing the squared-distance equations against `p_1` gives a linear
    /// system for the `F_B` coordinates; the height is what remains of `lengths[0]`.
    pub fn trilaterate(&self, lengths: &[f64]) -> Result<Vec<f64>> {
        let m = self.base_coords.len();
        if lengths.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: lengths.len(),
            });
        }
        if let Some(&bad) = lengths.iter().find(|l| !(**l >= 0.0)) {
            return Err(Error::OutOfRange {
                value: bad,
                limit: f64::INFINITY,
            });
        }
        let l0 = lengths[0] * lengths[0];
        let rows: Vec<Vec<f64>> = self.base_coords[1..].iter().map(|b| scale(b, 2.0)).collect();
        let rhs: Vec<f64> = self.base_coords[1..]
            .iter()
            .zip(&lengths[1..])
            .map(|(b, l)| dot(b, b) + l0 - l * l)
            .collect();
        let y = solve_square(&rows, &rhs).expect("base members are affinely independent");
        let height_sq = l0 - dot(&y, &y);
        if height_sq < -Tolerances::DEFAULT.realizable {
            return Err(Error::NotRealizable { height_sq });
        }
        let mut c = y;
        c.push(height_sq.max(0.0).sqrt());
        Ok(c)
    }

    /// Base angles of the page whose apex has canonical coordinates `p`.
    pub fn base_angles(&self, p: &[f64]) -> Result<BaseAngles> {
        let h = *p.last().expect("canonical point has a height");
        if h <= Tolerances::DEFAULT.rank {
            return Err(Error::DegenerateSimplex { height: h });
        }
        Ok(BaseAngles(self.angles(p)))
    }

    /// Base angles of any canonical point with non-negative height.
    ///
    /// Angle `i` is measured at the base facet opposite member `i`, from the
    /// inward base direction up to the point. A point of `G` lies in the page of
    /// `p` exactly when its angles are componentwise at most those of `p`. With a
    /// single base point the angle degenerates; `2 atan(h)` stands in for it since
    /// containment is then just a height comparison.
    pub(crate) fn angles(&self, p: &[f64]) -> Vec<f64> {
        let (y, h) = p.split_at(p.len() - 1);
        let h = h[0].max(0.0);
        if self.ridges.is_empty() {
            return vec![2.0 * h.atan()];
        }
        self.ridges
            .iter()
            .map(|r| h.atan2(dot(y, &r.normal) - r.offset))
            .collect()
    }

    /// Barycentric coordinates of local `F_B` coordinates `y` w.r.t. `conv(B)`.
    pub fn base_barycentric(&self, y: &[f64]) -> Vec<f64> {
        if self.ridges.is_empty() {
            return vec![1.0];
        }
        self.ridges
            .iter()
            .map(|r| (dot(y, &r.normal) - r.offset) / r.altitude)
            .collect()
    }

    /// Membership in the prism `Φ_B`: the projection of `q` onto `F_B` lies in
    /// the interior of `conv(B)`.
    pub fn in_prism(&self, q: &[f64]) -> bool {
        let y = self.flat.local(q);
        self.base_barycentric(&y)
            .iter()
            .all(|&l| l > Tolerances::DEFAULT.zero)
    }
}

fn ridges_of(base: &[Vec<f64>]) -> Vec<Ridge> {
    (0..base.len())
        .map(|i| {
            let others: Vec<&Vec<f64>> = base.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, b)| b).collect();
            let anchor = others[0];
            let dirs: Vec<Vec<f64>> = others[1..].iter().map(|b| sub(b, anchor)).collect();
            let basis = gram_schmidt(&dirs, 0.0).expect("base members are affinely independent");
            let r = orthogonalize(&basis, &sub(&base[i], anchor));
            let normal = scale(&r, 1.0 / norm(&r));
            let offset = dot(anchor, &normal);
            let altitude = dot(&base[i], &normal) - offset;
            Ridge {
                normal,
                offset,
                altitude,
            }
        })
        .collect()
}

/// Points on the orbit of a query: `q_G(len)` in `G` and `q_H'(len)` in `H'`.
///
/// `qb` holds the `F_B` coordinates of the query, `r` its distance from `F_B`.
pub fn orbit_point(qb: &[f64], r: f64, len: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(len >= 0.0) || len > r + Tolerances::DEFAULT.zero {
        return Err(Error::OutOfRange { value: len, limit: r });
    }
    let len = len.min(r);
    let h = (r * r - len * len).max(0.0).sqrt();
    let mut g = qb.to_vec();
    g.push(h);
    let mut hh = g.clone();
    hh.push(len);
    Ok((g, hh))
}

impl FlatFrame {
    pub(crate) fn with_explicit_complement(mut self, complement: Vec<Vec<f64>>) -> Self {
        self.set_complement(complement);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use std::f64::consts::PI;

    fn base(rows: &[&[f64]]) -> BaseSet {
        BaseSet::new(
            rows.iter()
                .enumerate()
                .map(|(i, r)| Point::new(i, r.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn axis_aligned_frame() {
        let b = base(&[&[0.0, 0.0, 0.0]]);
        let f = orthonormal_frame(&b, &[1.0, 0.0, 0.0], Some(&[0.0, 1.0, 0.0])).unwrap();
        assert!(f.flat_basis().is_empty());
        assert_eq!(f.ext1(), &[1.0, 0.0, 0.0]);
        assert_eq!(f.ext2().unwrap(), &[0.0, 1.0, 0.0]);
        assert_eq!(f.complement_basis().len(), 3);
    }

    #[test]
    fn orthogonal_input_frame() {
        let b = base(&[&[0.0, 0.0, 0.0], &[2.0, 0.0, 0.0]]);
        let f = orthonormal_frame(&b, &[0.0, 3.0, 0.0], None).unwrap();
        assert_eq!(f.flat_basis(), &[vec![1.0, 0.0, 0.0]]);
        assert_eq!(f.ext1(), &[0.0, 1.0, 0.0]);
        let e = orthonormal_frame(&b, &[5.0, 0.0, 0.0], None);
        assert!(matches!(e, Err(Error::DegenerateAux { .. })));
    }

    #[test]
    fn trilateration_examples() {
        let b = base(&[&[0.0, 0.0, 0.0], &[4.0, 0.0, 0.0]]);
        let f = CanonicalFrame::new(&b).unwrap();
        let c = f.trilaterate(&[3.0, 5.0]).unwrap();
        assert!(c[0].abs() < 1e-12 && (c[1] - 3.0).abs() < 1e-12);
        assert!(matches!(f.trilaterate(&[1.0, 10.0]), Err(Error::NotRealizable { height_sq }) if height_sq < 0.0));
        // single base point: circle meets the half line at height = length
        let b1 = base(&[&[0.0, 0.0]]);
        let f1 = CanonicalFrame::new(&b1).unwrap();
        assert_eq!(f1.trilaterate(&[5.0]).unwrap(), vec![5.0]);
        // tiny negative squared height clamps to zero
        let c = f.trilaterate(&[2.0, 2.0 + 1e-12]).unwrap();
        assert!(c[1].abs() < 1e-4);
    }

    #[test]
    fn isoceles_and_right_base_angles() {
        let b = base(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let f = CanonicalFrame::new(&b).unwrap();
        let a = f.base_angles(&[0.5, 0.5]).unwrap();
        assert!((a.0[0] - PI / 4.0).abs() < 1e-12 && (a.0[1] - PI / 4.0).abs() < 1e-12);
        // angle at p_1 is the one at the facet opposite p_2
        let a = f.base_angles(&[0.0, 1.0]).unwrap();
        assert!((a.0[1] - PI / 2.0).abs() < 1e-12);
        assert!(matches!(f.base_angles(&[0.3, 0.0]), Err(Error::DegenerateSimplex { .. })));
    }

    #[test]
    fn orbit_endpoints() {
        let (g, h) = orbit_point(&[1.0], 5.0, 3.0).unwrap();
        assert_eq!(g, vec![1.0, 4.0]);
        assert_eq!(h, vec![1.0, 4.0, 3.0]);
        let (g, h) = orbit_point(&[], 2.0, 0.0).unwrap();
        assert_eq!((g.clone(), h), (vec![2.0], vec![2.0, 0.0]));
        let (g, _) = orbit_point(&[], 2.0, 2.0).unwrap();
        assert_eq!(g, vec![0.0]);
        assert!(orbit_point(&[], 2.0, 2.1).is_err());
    }

    #[test]
    fn prism_membership() {
        let b = base(&[&[0.0, 0.0, 0.0], &[2.0, 0.0, 0.0]]);
        let f = CanonicalFrame::new(&b).unwrap();
        assert!(f.in_prism(&[1.0, 5.0, -3.0]));
        assert!(!f.in_prism(&[2.5, 1.0, 0.0]));
        assert!(!f.in_prism(&[0.0, 1.0, 0.0]));
    }
}
