use eiscong::arith;
use eiscong::char::{factor_p_part, teichmuller};
use eiscong::DirichletCharacter;
use num_bigint::BigInt;

#[test]
fn character_count_is_phi() {
    for n in 1..=200u64 {
        assert_eq!(DirichletCharacter::all(n).len() as u64, arith::euler_phi(n), "modulus {n}");
    }
}

#[test]
fn complete_multiplicativity() {
    for n in 1..=50u64 {
        for chi in DirichletCharacter::all(n) {
            for a in 1..n as i64 {
                for b in 1..n as i64 {
                    let lhs = chi.value(a * b);
                    let rhs = &chi.value(a) * &chi.value(b);
                    assert_eq!(lhs, rhs, "{chi} at {a}*{b}");
                }
            }
        }
    }
}

#[test]
fn p_part_round_trip_and_conductors() {
    for f in 2..=60u64 {
        for chi in DirichletCharacter::primitive(f) {
            for (p, _) in arith::factorize(f) {
                let (cp, cq) = factor_p_part(&chi, p).unwrap();
                assert_eq!(cp.conductor() * cq.conductor(), chi.conductor());
                let n = chi.order();
                for a in 0..f as i64 {
                    let prod = &cp.value_in(a, n) * &cq.value_in(a, n);
                    assert_eq!(prod, chi.value(a), "{chi} split at {p}, residue {a}");
                }
            }
        }
    }
}

#[test]
fn teichmuller_compatibility() {
    for p in [3u64, 5, 7, 11, 13] {
        for m in 2..=10u32 {
            let q = arith::big_pow(p, m);
            let q_low = arith::big_pow(p, m - 1);
            for a in 1..p as i64 {
                let w = teichmuller(p, a, m).unwrap();
                assert_eq!(arith::big_mod(&w, &q_low), teichmuller(p, a, m - 1).unwrap());
                assert_eq!(w.modpow(&BigInt::from(p - 1), &q), BigInt::from(1));
            }
        }
    }
}
