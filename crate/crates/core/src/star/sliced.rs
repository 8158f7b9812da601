use super::{score_segment, segment_result, PrefixAnnIndex};
use crate::ann::{AnnConfig, AnnIndex, Neighbor};
use crate::geometry::linalg::{dist, scale, sub};
use crate::geometry::Point;
use crate::{Error, QueryResult, Result, Tolerances};

/// Star over arbitrary points, answered by sweeping spheres around the center.
///
/// Points are kept in decreasing distance from the center (ties by id) so that the
/// points reaching a sphere of radius `r` form a prefix of the order.
#[derive(Debug, Clone)]
pub struct StarIndex {
    center: Point,
    members: Vec<Point>,
    radii: Vec<f64>,
    directions: Option<PrefixAnnIndex>,
    points: Option<AnnIndex>,
    epsilon: f64,
}

impl StarIndex {
    /// `cfg.epsilon` must lie in `(0, 1]`; the inner indexes use `epsilon / 4`.
    /// Points coinciding with the center are dropped: their segment is the center itself.
    pub fn build(center: Point, points: Vec<Point>, cfg: AnnConfig) -> Result<Self> {
        if !(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0) {
            return Err(Error::InvalidEpsilon(cfg.epsilon));
        }
        let dim = center.dim();
        let mut members: Vec<(f64, Point)> = Vec::with_capacity(points.len());
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
            let d = dist(&p.coords, &center.coords);
            if d > Tolerances::DEFAULT.zero {
                members.push((d, p));
            }
        }
        members.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.id.cmp(&b.1.id)));
        let radii: Vec<f64> = members.iter().map(|m| m.0).collect();
        let members: Vec<Point> = members.into_iter().map(|m| m.1).collect();
        let inner = cfg.scaled(4.0);
        let (directions, points) = if members.is_empty() {
            (None, None)
        } else {
            let dirs: Vec<(usize, Vec<f64>)> = members
                .iter()
                .zip(&radii)
                .enumerate()
                .map(|(j, (p, r))| (j, scale(&sub(&p.coords, &center.coords), 1.0 / r)))
                .collect();
            (
                Some(PrefixAnnIndex::build(dim, &dirs, inner)?),
                Some(AnnIndex::build(dim, members.iter().enumerate().map(|(j, p)| (j, &p.coords)), inner)?),
            )
        };
        Ok(Self {
            center,
            members,
            radii,
            directions,
            points,
            epsilon: cfg.epsilon,
        })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Star points in sweep order.
    pub fn members(&self) -> &[Point] {
        &self.members
    }

    /// Number of sphere radii swept per query.
    pub fn slices(&self) -> usize {
        (32.0 / (self.epsilon * self.epsilon)).ceil() as usize
    }

    /// Number of points at distance at least `r` from the center.
    fn reach(&self, r: f64) -> usize {
        self.radii.partition_point(|&d| d >= r)
    }

    /// Approximate nearest point to `q` among the intersections of the star with the
    /// sphere of radius `r` around the center. Returns the id of the point whose
    /// segment carries it and the distance from `q` to that intersection.
    pub fn sliced_query(&self, q: &[f64], r: f64) -> Result<Neighbor> {
        if q.len() != self.center.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.center.dim(),
                got: q.len(),
            });
        }
        let i = self.reach(r);
        let dirs = match &self.directions {
            Some(d) if r > 0.0 && i > 0 => d,
            _ => return Err(Error::EmptySlice { radius: r }),
        };
        let t = scale(&sub(q, &self.center.coords), 1.0 / r);
        let hit = dirs.query(i, &t)?;
        Ok(Neighbor {
            id: self.members[hit.id].id,
            distance: hit.distance * r,
        })
    }

    fn position(&self, id: usize) -> usize {
        self.members.iter().position(|p| p.id == id).expect("id belongs to the star")
    }

    /// Approximate nearest point of the star to `q`, scored exactly over the
    /// candidate segments found by the point query and the sphere sweep.
    pub fn query(&self, q: &[f64]) -> Result<QueryResult> {
        if q.len() != self.center.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.center.dim(),
                got: q.len(),
            });
        }
        let r = dist(q, &self.center.coords);
        let mut best = segment_result(self.center.id, self.center.id, r, 0.0);
        let (Some(points), Some(_)) = (&self.points, &self.directions) else {
            return Ok(best);
        };
        if r == 0.0 {
            return Ok(best);
        }
        let mut seen = vec![false; self.members.len()];
        seen[points.query(q)?.id] = true;
        let step = self.epsilon * self.epsilon / 16.0 * r;
        for i in 1..=self.slices() {
            let ri = i as f64 * step;
            if ri > self.radii[0] {
                break;
            }
            let hit = self.sliced_query(q, ri)?;
            seen[self.position(hit.id)] = true;
        }
        for (j, _) in seen.iter().enumerate().filter(|(_, s)| **s) {
            let p = &self.members[j];
            let cand = score_segment((self.center.id, &self.center.coords), (p.id, &p.coords), q);
            if cand.cmp_rank(&best).is_lt() {
                best = cand;
            }
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_segment_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(id: usize, c: Vec<f64>) -> Point {
        Point::new(id, c).unwrap()
    }

    fn random_star(rng: &mut ChaCha8Rng, n: usize, d: usize) -> (Point, Vec<Point>) {
        let c = pt(0, (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let ps = (1..=n).map(|i| pt(i, (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())).collect();
        (c, ps)
    }

    #[test]
    fn sort_order_and_empty_slice() {
        let c = pt(9, vec![0.0, 0.0]);
        let ps = vec![pt(0, vec![1.0, 0.0]), pt(1, vec![0.0, 3.0]), pt(2, vec![-1.0, 0.0]), pt(3, vec![0.0, 0.0])];
        let idx = StarIndex::build(c, ps, AnnConfig::exact(0.5).unwrap()).unwrap();
        let ids: Vec<usize> = idx.members().iter().map(|p| p.id).collect();
        assert_eq!(ids, vec![1, 0, 2]);
        assert!(matches!(idx.sliced_query(&[0.0, 0.0], 3.5), Err(Error::EmptySlice { .. })));
        let hit = idx.sliced_query(&[0.0, 2.0], 2.0).unwrap();
        assert_eq!((hit.id, hit.distance), (1, 0.0));
    }

    #[test]
    fn unit_slice_matches_direction_query() {
        let c = pt(0, vec![0.0, 0.0]);
        let ps = vec![pt(1, vec![2.0, 0.0]), pt(2, vec![0.0, 1.5]), pt(3, vec![-1.0, -1.0])];
        let idx = StarIndex::build(c, ps, AnnConfig::exact(0.5).unwrap()).unwrap();
        let hit = idx.sliced_query(&[0.8, 0.6], 1.0).unwrap();
        let expected = ((0.8f64 - 1.0).powi(2) + 0.36).sqrt();
        assert_eq!(hit.id, 1);
        assert!((hit.distance - expected).abs() < 1e-12);
    }

    #[test]
    fn random_slices_against_explicit_sphere_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (c, ps) = random_star(&mut rng, 60, 3);
        let eps = 0.5;
        let idx = StarIndex::build(c.clone(), ps.clone(), AnnConfig::exact(eps).unwrap()).unwrap();
        for _ in 0..300 {
            let q: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let r = rng.gen_range(0.05..1.5);
            let clipped: Vec<Vec<f64>> = ps
                .iter()
                .filter(|p| dist(&p.coords, &c.coords) >= r)
                .map(|p| {
                    let u = sub(&p.coords, &c.coords);
                    let n = crate::geometry::linalg::norm(&u);
                    c.coords.iter().zip(&u).map(|(a, b)| a + r * b / n).collect()
                })
                .collect();
            match idx.sliced_query(&q, r) {
                Err(Error::EmptySlice { .. }) => assert!(clipped.is_empty()),
                Ok(hit) => {
                    let exact = clipped.iter().map(|x| dist(x, &q)).fold(f64::INFINITY, f64::min);
                    assert!(hit.distance >= exact - 1e-12 && hit.distance <= (1.0 + eps / 4.0) * exact + 1e-12);
                }
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn star_query_examples() {
        let c = pt(0, vec![0.0, 0.0]);
        let ps = vec![pt(1, vec![1.0, 0.0]), pt(2, vec![0.0, 2.0])];
        let idx = StarIndex::build(c, ps, AnnConfig::exact(0.5).unwrap()).unwrap();
        let r = idx.query(&[0.0, 0.0]).unwrap();
        assert_eq!((r.distance, r.witness_ids.clone()), (0.0, vec![0]));
        // beyond the end of a ray
        let r = idx.query(&[0.0, 5.0]).unwrap();
        assert!((r.distance - 3.0).abs() < 1e-12);
        assert_eq!(r.witness_ids, vec![0, 2]);
        assert!(matches!(
            StarIndex::build(pt(0, vec![0.0]), vec![], AnnConfig::exact(1.5).unwrap()),
            Err(Error::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn star_query_within_factor_of_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let eps = 0.5;
        let (c, ps) = random_star(&mut rng, 100, 4);
        let idx = StarIndex::build(c.clone(), ps.clone(), AnnConfig::exact(eps).unwrap()).unwrap();
        for _ in 0..100 {
            let q: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let exact = ps
                .iter()
                .map(|p| point_segment_distance(&c.coords, &p.coords, &q).0)
                .fold(f64::INFINITY, f64::min);
            let got = idx.query(&q).unwrap();
            assert!(got.distance >= exact - 1e-12);
            assert!(got.distance <= (1.0 + eps) * exact + 1e-12);
        }
    }
}
