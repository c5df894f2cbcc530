use eiscong::arith;
use eiscong::formal::{mult_by_a_series, torsion_order};
use eiscong::LocalRing;
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_multiplication(
        p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
        a in 0i64..3125,
        b in 0i64..3125,
    ) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let fa = mult_by_a_series(&a, 12, p, 5).unwrap();
        let fb = mult_by_a_series(&b, 12, p, 5).unwrap();
        prop_assert_eq!(fa.compose(&fb).unwrap(), mult_by_a_series(&(&a * &b), 12, p, 5).unwrap());
    }
}

#[test]
fn p_power_endomorphisms_vanish() {
    for p in [2u64, 3, 5] {
        for m in 1..=4u32 {
            for d in [1usize, 4, 12] {
                let log_d = (1..).find(|&j| p.pow(j) >= d as u64).unwrap_or(0);
                let v = m + log_d;
                let s = mult_by_a_series(&arith::big_pow(p, v), d, p, m).unwrap();
                assert!(s.is_zero(), "p={p} M={m} D={d}");
            }
        }
    }
}

#[test]
fn torsion_order_is_multiplicative_on_coprime_ideals() {
    for (n, p) in [(4u64, 5u64), (5, 11), (3, 7), (8, 17)] {
        let ring = LocalRing::new(n, p, 6).unwrap();
        assert!(ring.factor_count() >= 2);
        for i in 1..=3 {
            for j in 1..=2 {
                let a = ring.prime_power(0, i);
                let b = ring.prime_power(1, j);
                let prod = a.mul(&b).unwrap();
                assert_eq!(
                    torsion_order(p, &prod).unwrap(),
                    torsion_order(p, &a).unwrap() * torsion_order(p, &b).unwrap()
                );
            }
        }
    }
}
