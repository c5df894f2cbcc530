use eiscong::arith;
use eiscong::eisenstein::{eisenstein_normalized, eisenstein_qexp, sigma_chi};
use eiscong::{CyclotomicNumber, DirichletCharacter};

#[test]
fn divisor_sums_are_multiplicative() {
    let t = DirichletCharacter::trivial(1);
    for k in [2u32, 4, 6, 12] {
        for m in 1..=100u64 {
            for n in 1..=100u64 {
                if arith::gcd(m, n) == 1 {
                    let lhs = sigma_chi(k - 1, &t, m * n);
                    assert_eq!(lhs, &sigma_chi(k - 1, &t, m) * &sigma_chi(k - 1, &t, n));
                }
            }
        }
    }
}

#[test]
fn e4_squared_is_e8() {
    let t = DirichletCharacter::trivial(1);
    let e4 = eisenstein_normalized(4, &t, 50).unwrap().series;
    let e8 = eisenstein_normalized(8, &t, 50).unwrap().series;
    assert_eq!(e4.mul(&e4).unwrap().coeffs(), e8.coeffs());
}

/// a(n) of E_{k,chi1,chi2} is multiplicative, with Hecke recursion at primes.
#[test]
fn twisted_multiplicativity() {
    let cases: Vec<(u32, &str, &str)> = vec![
        (3, "1:1:[]", "4:2:[1]"),
        (4, "11:5:[4]", "1:1:[]"),
        (2, "5:4:[1]", "5:4:[3]"),
        (4, "3:2:[1]", "4:2:[1]"),
        (4, "11:5:[1]", "11:5:[1]"),
    ];
    for (k, c1, c2) in cases {
        let chi1: DirichletCharacter = c1.parse().unwrap();
        let chi2: DirichletCharacter = c2.parse().unwrap();
        assert_eq!(chi1.parity() * chi2.parity(), if k % 2 == 0 { 1 } else { -1 });
        let f = eisenstein_qexp(k, &chi1, &chi2, 1, 200).unwrap();
        let n_ring = f.n();
        let a = |i: u64| f.coeff(i as usize).clone();
        for m in 1..=200u64 {
            for n in 1..=200 / m {
                if arith::gcd(m, n) == 1 {
                    assert_eq!(a(m * n), &a(m) * &a(n), "{c1} {c2} k={k} at {m}*{n}");
                }
            }
        }
        for p in (2..=200u64).filter(|&p| arith::is_prime(p)) {
            let eps = &chi1.inverse().value_in(p as i64, n_ring) * &chi2.value_in(p as i64, n_ring);
            let w = CyclotomicNumber::from_int(n_ring, arith::big_pow(p, k - 1));
            let mut pr = p;
            while pr * p <= 200 {
                let prev = if pr == p { CyclotomicNumber::one(n_ring) } else { a(pr / p) };
                let rhs = &(&a(p) * &a(pr)) - &(&(&eps * &w) * &prev);
                assert_eq!(a(pr * p), rhs, "{c1} {c2} k={k} at {p}^r");
                pr *= p;
            }
        }
    }
}
