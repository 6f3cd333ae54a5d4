//! Properties that span modules, checked against the brute-force oracle where one exists.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use slo_core::congruence::{
    abelianization, el_image_index, project, sl_order_formula, special_linear_group, FiniteMat,
    DEFAULT_ELEMENT_CAP,
};
use slo_core::hensel::{hensel_lift, Polynomial};
use slo_core::localring::{make_ring, Characteristic, RingDescriptor};
use slo_core::matgroup::{decompose_sl2, decompose_sln, RMatrix};
use slo_core::oracle;

fn ring(c: Characteristic, p: u32, n: u32) -> RingDescriptor {
    make_ring(c, p, n).unwrap()
}

#[test]
fn closure_orders_agree_with_naive_closure() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let p = (2..=q).find(|d| q % d == 0).unwrap();
        let m = (q as f64).log(p as f64).round() as u32;
        let g = special_linear_group(2, p as u32, m, DEFAULT_ELEMENT_CAP).unwrap();
        let naive = oracle::naive_closure(&oracle::elementary_set(2, 1, q), 2, q).len();
        assert_eq!(g.order(), naive, "SL2(Z/{q})");
        assert_eq!(g.order() as u128, sl_order_formula(2, p as u32, m));
    }
    let g = special_linear_group(3, 2, 2, DEFAULT_ELEMENT_CAP).unwrap();
    assert_eq!(g.order(), oracle::naive_closure(&oracle::elementary_set(3, 1, 4), 3, 4).len());
}

#[test]
fn abelianizations_agree_with_oracle() {
    for (n, p, m) in [(2usize, 2u32, 1u32), (2, 2, 2), (2, 2, 3), (2, 3, 1), (2, 3, 2), (2, 5, 1), (3, 2, 1)] {
        let g = special_linear_group(n, p, m, DEFAULT_ELEMENT_CAP).unwrap();
        let ab = abelianization(&g, DEFAULT_ELEMENT_CAP).unwrap();
        let (order, derived, factors) = oracle::sl_abelianization(n, p as u64, m);
        assert_eq!(ab.group_order as u64, order);
        assert_eq!(ab.derived_order as u64, derived);
        assert_eq!(ab.invariant_factors, factors);
    }
}

#[test]
fn abelianization_of_sl2_mod_8_has_order_4() {
    let g = special_linear_group(2, 2, 3, DEFAULT_ELEMENT_CAP).unwrap();
    assert_eq!(abelianization(&g, DEFAULT_ELEMENT_CAP).unwrap().invariant_factors, vec![4]);
}

#[test]
fn el_index_divides_along_k() {
    let m = 3;
    let idx: Vec<u64> = (0..m).map(|k| el_image_index(2, 3, k, m, DEFAULT_ELEMENT_CAP).unwrap()).collect();
    assert_eq!(idx[0], 1);
    for w in idx.windows(2) {
        assert_eq!(w[1] % w[0], 0, "{idx:?}");
    }
    for k in 0..m {
        assert_eq!(idx[k as usize], oracle::el_index(2, 3, k, m));
    }
}

#[test]
fn projection_of_decomposition_letters_is_consistent() {
    // reducing each letter and multiplying mod p^m agrees with reducing the product
    let r = ring(Characteristic::Zero, 3, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let m = RMatrix::random_sl(&r, 3, &mut rng);
        let w = decompose_sln(&m).unwrap();
        let target = project(&m, 4).unwrap();
        let space = target.space();
        let mut acc = FiniteMat::identity(space);
        for l in w.letters() {
            let e = RMatrix::elementary(3, l.i, l.j, &l.x).unwrap();
            acc = acc.mul(&project(&e, 4).unwrap()).unwrap();
        }
        assert_eq!(acc, target);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_a_homomorphism(seed in any::<u64>(), m in 1u32..=10) {
        let r = ring(Characteristic::Zero, 2, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RMatrix::random_sl(&r, 2, &mut rng);
        let b = RMatrix::random_sl(&r, 2, &mut rng);
        let lhs = project(&a.mul(&b).unwrap(), m).unwrap();
        let rhs = project(&a, m).unwrap().mul(&project(&b, m).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sl2_round_trip_in_both_characteristics(seed in any::<u64>(), which in 0usize..6) {
        let rings = [
            ring(Characteristic::Zero, 2, 12),
            ring(Characteristic::Zero, 3, 9),
            ring(Characteristic::Zero, 11, 4),
            ring(Characteristic::Positive, 2, 10),
            ring(Characteristic::Positive, 3, 6),
            ring(Characteristic::Positive, 5, 5),
        ];
        let r = &rings[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = RMatrix::random_sl(r, 2, &mut rng);
        let w = decompose_sl2(&m).unwrap();
        prop_assert!(w.len() <= 13);
        prop_assert_eq!(w.evaluate(), m);
    }

    #[test]
    fn hensel_matches_exhaustive_search(
        coeffs in proptest::collection::vec(-30i64..=30, 2..=5),
        a in 0u64..729,
        p_idx in 0usize..3,
    ) {
        let (p, n) = [(2u64, 10u32), (3, 6), (5, 4)][p_idx];
        let q = p.pow(n);
        let a = a % q;
        let r = ring(Characteristic::Zero, p as u32, n);
        let f = Polynomial::from_ints(&r, &coeffs);
        let deriv: Vec<i64> = coeffs.iter().enumerate().skip(1).map(|(i, &c)| i as i64 * c).collect();
        let vf = oracle::val_mod(oracle::eval_mod(&coeffs, a, q), p, n);
        let vd = oracle::val_mod(oracle::eval_mod(&deriv, a, q), p, n);
        let lifted = hensel_lift(&f, &r.from_i64(a as i64));
        if vf < n && vf <= 2 * vd {
            prop_assert!(lifted.is_err());
        } else {
            let root: u64 = lifted.unwrap().to_string().parse().unwrap();
            let brute = oracle::roots_in_lift_class(&coeffs, a, p, n);
            prop_assert!(brute.contains(&root), "root {} not among {:?}", root, brute);
            if vd == 0 {
                prop_assert_eq!(brute, vec![root]);
            }
        }
    }
}
