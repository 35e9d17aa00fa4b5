mod common;

use common::*;
use mero_core::mpf::{with_precision, Mpf};
use mero_core::periods::{default_path, period_vector, tracked_pole_logs};
use mero_core::scalar::{gq, ComplexExt, Real, Scalar};
use mero_core::strata::residues;
use mero_core::torus::{detect_multiplicative_relations, embed, fiber_rank, twisted_period_map, AffineLattice};
use mero_core::BigComplex;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn example_family_torus_coordinates() {
    let mut r = rng(31);
    for _ in 0..50 {
        let cfg = example_family(random_alpha(&mut r), gq(1, 1)).canonicalize().unwrap();
        let tp = embed(&cfg).unwrap();
        assert_eq!(tp.w[0][0], gq(-1, 1));
        assert_eq!(tp.w[0][1].clone() * tp.w[0][2].clone(), gq(1, 1));
        assert!(tp.closure_relations_hold());
    }
}

#[test]
fn relation_lattice_of_example_family() {
    with_precision(640, || {
        let mut r = rng(32);
        let points: Vec<_> = (0..4)
            .map(|_| embed(&example_family(random_alpha(&mut r), gq(1, 1)).canonicalize().unwrap().to_numeric::<Mpf>()).unwrap())
            .collect();
        let rels = detect_multiplicative_relations(&points, 12).unwrap();
        let b = |v: [i64; 3]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(rels.basis, vec![b([1, 0, 0]), b([0, 1, 1])]);
        // A single sample sees w_1 = −1 only through w_1² = 1.
        let single = detect_multiplicative_relations(&points[..1], 12).unwrap();
        assert!(single.basis.contains(&b([2, 0, 0])));
    });
}

/// The relative period of the example family lies in `πi·Z·R_0 + 2πi·Z·R_1`:
/// `log(−1)` contributes odd multiples of `πi·R_0`.
#[test]
fn example_family_period_lattice() {
    with_precision(128, || {
        let alpha = g(q(1, 1), q(2, 1));
        let cfg = example_family(alpha, gq(1, 1)).canonicalize().unwrap();
        let res: Vec<BigComplex> = residues(&cfg).unwrap().finite.iter().map(|x| x.to_complex()).collect();
        let phi = period_vector(&cfg, &[default_path::<_, Mpf>(&cfg, 1)]).unwrap();
        let pi_i = <BigComplex as ComplexExt<Mpf>>::two_pi_i() * BigComplex::new(Mpf::from_f64(0.5), Mpf::from_i64(0));
        let mut found = None;
        for a in -5i64..=5 {
            for k in -5i64..=5 {
                let guess = pi_i.clone() * (res[0].clone() * Mpf::from_i64(a) + res[1].clone() * Mpf::from_i64(2 * k));
                if ComplexExt::abs(&(guess - phi.relative[0].clone())).to_f64() < 1e-9 {
                    found = Some((a, k));
                }
            }
        }
        let (a, _) = found.expect("period in the observed lattice");
        assert_eq!(a.rem_euclid(2), 1);
    });
}

#[test]
fn graph_of_twisted_map() {
    with_precision(128, || {
        let mut r = rng(33);
        for mu in [&[1, 1, -1, -1, -1, -1][..], &[1, 1, -1, -1, -2], &[1, 1, 1, -2, -1, -2]] {
            for _ in 0..8 {
                let cfg = random_config(&mut r, mu, true);
                let paths: Vec<_> = (1..cfg.zeros.len()).map(|j| default_path::<_, Mpf>(&cfg, j)).collect();
                let tpi = <BigComplex as ComplexExt<Mpf>>::two_pi_i();
                let v: Vec<Vec<BigComplex>> = paths
                    .iter()
                    .enumerate()
                    .map(|(j, p)| tracked_pole_logs(&cfg, j + 1, p).unwrap().0.into_iter().map(|l| l / tpi.clone()).collect())
                    .collect();
                let a = twisted_period_map(&cfg, &v).unwrap();
                let phi = period_vector(&cfg, &paths).unwrap().coordinates();
                for (x, y) in a.iter().zip(&phi) {
                    assert!(ComplexExt::abs(&(x.clone() - y.clone())).to_f64() < 1e-9);
                }
            }
        }
    });
}

#[test]
fn fiber_rank_is_scale_invariant() {
    let v = AffineLattice::from_basis(3, vec![vec![BigInt::from(0), BigInt::from(1), BigInt::from(-1)]]).unwrap();
    let r = vec![gq(1, 4), gq(3, 8), gq(3, 8)];
    let scaled: Vec<_> = r.iter().map(|x| x.clone() * g(q(2, 1), q(-5, 3))).collect();
    assert_eq!(fiber_rank(&r, &v).unwrap(), 0);
    assert_eq!(fiber_rank(&scaled, &v).unwrap(), 0);
    let r2 = vec![gq(1, 4), gq(3, 8), gq(1, 8)];
    assert_eq!(fiber_rank(&r2, &v).unwrap(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_relations(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let mu: &[i64] = if seed % 2 == 0 { &[1, 1, 1, -1, -1, -1, -1, -1] } else { &[2, 1, -2, -1, -2] };
        let cfg = random_config(&mut r, mu, true);
        let tp = embed(&cfg).unwrap();
        prop_assert!(tp.closure_relations_hold());
        prop_assert!(tp.w.iter().flatten().all(|w| !w.is_zero()));
    }
}
