use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsegeom::geometry::linalg::{dist, dot, norm, solve_square, sub};
use sparsegeom::geometry::{direction, flat_distance, orbit_point, orthonormal_frame, BaseSet, CanonicalFrame, Point};

fn rand_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn rand_base(rng: &mut ChaCha8Rng, m: usize, d: usize) -> BaseSet {
    BaseSet::new((0..m).map(|i| Point::new(i, rand_vec(rng, d)).unwrap()).collect()).unwrap()
}

/// Barycentric coordinates of `x` w.r.t. the simplex `verts` in `R^m` (`m + 1` vertices).
fn barycentric(verts: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let m = x.len();
    let rows: Vec<Vec<f64>> = (0..m).map(|r| (1..=m).map(|c| verts[c][r] - verts[0][r]).collect()).collect();
    let t = solve_square(&rows, &sub(x, &verts[0])).unwrap();
    let mut w = vec![1.0 - t.iter().sum::<f64>()];
    w.extend(t);
    w
}

fn page_vertices(frame: &CanonicalFrame, apex: &[f64]) -> Vec<Vec<f64>> {
    let mut v: Vec<Vec<f64>> = frame
        .base_coords()
        .iter()
        .map(|y| {
            let mut c = y.clone();
            c.push(0.0);
            c
        })
        .collect();
    v.push(apex.to_vec());
    v
}

#[test]
fn random_frames_are_orthonormal_and_span_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let base = rand_base(&mut rng, 3, 6);
        let aux1 = rand_vec(&mut rng, 6);
        let aux2 = rand_vec(&mut rng, 6);
        let f = orthonormal_frame(&base, &aux1, Some(&aux2)).unwrap();
        let mut all: Vec<Vec<f64>> = f.flat_basis().to_vec();
        all.extend(f.complement_basis().iter().cloned());
        assert_eq!(all.len(), 6);
        for i in 0..all.len() {
            for j in 0..all.len() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&all[i], &all[j]) - e).abs() < 1e-9);
            }
        }
        assert!(dist(&f.complement_basis()[0], f.ext1()) < 1e-12);
        assert!(dist(&f.complement_basis()[1], f.ext2().unwrap()) < 1e-12);
        let v = rand_vec(&mut rng, 6);
        let mut rec = vec![0.0; 6];
        for b in &all {
            let c = dot(&v, b);
            rec.iter_mut().zip(b).for_each(|(r, x)| *r += c * x);
        }
        assert!(dist(&rec, &v) < 1e-8);
    }
}

#[test]
fn halfflat_round_trip_preserves_distances_to_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let base = rand_base(&mut rng, 3, 5);
    let f = CanonicalFrame::new(&base).unwrap();
    for _ in 0..200 {
        let x = rand_vec(&mut rng, 5);
        let c = f.to_halfflat(&x);
        let back = f.from_halfflat(&c);
        for p in base.members() {
            assert!((dist(&x, &p.coords) - dist(&back, &p.coords)).abs() < 1e-9);
        }
        let lengths: Vec<f64> = base.members().iter().map(|p| dist(&x, &p.coords)).collect();
        let t = f.trilaterate(&lengths).unwrap();
        assert!(dist(&t, &c) < 1e-7);
    }
}

/// Interior dihedral angle between the base facet and the facet opposite `p_i`,
/// computed from outward facet normals in the 3-dimensional canonical space.
fn dihedral_from_normals(verts: &[Vec<f64>], i: usize) -> f64 {
    let cross = |a: &[f64], b: &[f64]| vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let facet: Vec<&Vec<f64>> = verts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).collect();
    let mut n = cross(&sub(facet[1], facet[0]), &sub(facet[2], facet[0]));
    if dot(&n, &sub(&verts[i], facet[0])) > 0.0 {
        n.iter_mut().for_each(|x| *x = -*x);
    }
    let base_normal = [0.0, 0.0, -1.0];
    let c = dot(&n, &base_normal) / norm(&n);
    std::f64::consts::PI - c.clamp(-1.0, 1.0).acos()
}

#[test]
fn base_angles_match_normal_computation_for_k4() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let base = rand_base(&mut rng, 3, 6);
        let f = CanonicalFrame::new(&base).unwrap();
        let apex = f.to_halfflat(&rand_vec(&mut rng, 6));
        if apex[2] < 1e-3 {
            continue;
        }
        let a = f.base_angles(&apex).unwrap();
        let verts = page_vertices(&f, &apex);
        for i in 0..3 {
            assert!((a.0[i] - dihedral_from_normals(&verts, i)).abs() < 1e-8);
            assert!(a.0[i] > 0.0 && a.0[i] < std::f64::consts::PI);
        }
    }
}

#[test]
fn containment_iff_angle_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut inside = 0;
    for draw in 0..10_000 {
        let m = 2 + draw % 2;
        let base = rand_base(&mut rng, m, 5);
        let f = CanonicalFrame::new(&base).unwrap();
        let apex = f.to_halfflat(&rand_vec(&mut rng, 5));
        let mut x = f.to_halfflat(&rand_vec(&mut rng, 5));
        let h = x.len() - 1;
        x[h] *= rng.gen_range(0.0..1.5);
        if apex[h] < 1e-6 || x[h] < 1e-6 {
            continue;
        }
        let w = barycentric(&page_vertices(&f, &apex), &x);
        let min = w.iter().copied().fold(f64::INFINITY, f64::min);
        if min.abs() < 1e-9 {
            continue;
        }
        let dominated = f.base_angles(&x).unwrap().dominated_by(&f.base_angles(&apex).unwrap());
        assert_eq!(dominated, min > 0.0);
        inside += dominated as usize;
    }
    assert!(inside > 100);
}

#[test]
fn orbit_distance_to_any_halfflat_point_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10_000 {
        let m = rng.gen_range(0..4);
        let qb = rand_vec(&mut rng, m);
        let r = rng.gen_range(0.01..3.0);
        let mut p = rand_vec(&mut rng, m);
        p.push(rng.gen_range(0.0..3.0));
        p.push(0.0);
        let l1 = rng.gen_range(0.0..r);
        let l2 = rng.gen_range(l1..=r);
        let (_, h1) = orbit_point(&qb, r, l1).unwrap();
        let (_, h2) = orbit_point(&qb, r, l2).unwrap();
        assert!(dist(&h1, &p) <= dist(&h2, &p) + 1e-9);
    }
}

#[test]
fn flat_distance_through_the_complement() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..1000 {
        let d = rng.gen_range(3..8);
        let m = rng.gen_range(1..d - 1);
        let base = rand_base(&mut rng, m, d);
        let p = Point::new(m, rand_vec(&mut rng, d)).unwrap();
        let q = rand_vec(&mut rng, d);
        let frame = base.frame().with_complement();
        let qc = frame.complement_coords(&frame.residual(&q));
        let u = direction(&frame, &p.coords).unwrap();
        let s = dot(&qc, &u);
        let projected = (dot(&qc, &qc) - s * s).max(0.0).sqrt();
        let mut hull = base.members().to_vec();
        hull.push(p);
        let direct = flat_distance(&hull, &q).unwrap().distance;
        assert!((projected - direct).abs() < 1e-8);
    }
}
