use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsegeom::ann::{ann_build, AnnConfig, Backend};
use sparsegeom::geometry::PointSet;

fn random_set(rng: &mut ChaCha8Rng, n: usize, d: usize) -> PointSet {
    PointSet::new((0..n).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()).unwrap()
}

#[test]
fn tree_within_factor_of_exact_on_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts = random_set(&mut rng, 1000, 3);
    for eps in [0.1, 0.5, 2.0] {
        let exact = ann_build(&pts, AnnConfig::exact(eps).unwrap()).unwrap();
        let tree = ann_build(&pts, AnnConfig::new(eps, Backend::Tree).unwrap()).unwrap();
        for _ in 0..1000 {
            let q: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let e = exact.query(&q).unwrap();
            let t = tree.query(&q).unwrap();
            assert!(t.distance >= e.distance);
            assert!(t.distance <= (1.0 + eps) * e.distance + 1e-12);
            let recomputed: f64 = pts.coords(t.id).iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            assert!((recomputed - t.distance).abs() < 1e-12);
        }
    }
}

#[test]
fn builds_and_queries_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pts = random_set(&mut rng, 300, 4);
    let cfg = AnnConfig::new(1.0, Backend::Tree).unwrap();
    let a = ann_build(&pts, cfg).unwrap();
    let b = ann_build(&pts, cfg).unwrap();
    for _ in 0..200 {
        let q: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        assert_eq!(a.query(&q).unwrap(), b.query(&q).unwrap());
    }
}

#[test]
fn exact_ties_go_to_lowest_id() {
    let pts = PointSet::new(vec![vec![2.0, 0.0], vec![-1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let idx = ann_build(&pts, AnnConfig::exact(0.1).unwrap()).unwrap();
    let n = idx.query(&[0.0, 0.0]).unwrap();
    assert_eq!((n.id, n.distance), (1, 1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]
    #[test]
    fn oracle_sandwich(seed in any::<u64>(), n in 1usize..40, d in 1usize..5, eps in 0.05f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_set(&mut rng, n, d);
        let exact = ann_build(&pts, AnnConfig::exact(eps).unwrap()).unwrap();
        let tree = ann_build(&pts, AnnConfig::new(eps, Backend::Tree).unwrap()).unwrap();
        let q: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let e = exact.query(&q).unwrap();
        let t = tree.query(&q).unwrap();
        prop_assert!(t.id < n);
        prop_assert!(t.distance >= e.distance);
        prop_assert!(t.distance <= (1.0 + eps) * e.distance + 1e-12);
    }
}
