//! Classical and generalized Bernoulli numbers with exact arithmetic.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith;
use crate::char::DirichletCharacter;
use crate::cyclo::{local::pi_valuation, CyclotomicNumber, LocalRing};
use crate::error::{Error, Result};

fn cache() -> &'static RwLock<Vec<BigRational>> {
    static CACHE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// B_k with B_1 = -1/2.
pub fn bernoulli_rational(k: u64) -> BigRational {
    if let Some(b) = cache().read().unwrap().get(k as usize) {
        return b.clone();
    }
    let mut table = cache().write().unwrap();
    while table.len() <= k as usize {
        let m = table.len() as u64;
        let value = if m > 1 && m % 2 == 1 {
            BigRational::zero()
        } else {
            let s = (0..m).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer(binomial(m + 1, j)) * &table[j as usize]
            });
            -s / BigRational::from_integer(BigInt::from(m + 1))
        };
        table.push(value);
    }
    table[k as usize].clone()
}

/// Bernoulli polynomial B_k(x) = sum_j C(k, j) B_j x^{k-j}.
pub fn bernoulli_polynomial(k: u64, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    // accumulate from j = k down to 0 so that powers of x grow incrementally
    for j in (0..=k).rev() {
        let b = bernoulli_rational(j);
        if !b.is_zero() {
            acc += BigRational::from_integer(binomial(k, j)) * b * &xp;
        }
        xp *= x;
    }
    acc
}

/// B_{k, chi} together with its inputs.
#[derive(Clone, Debug, Serialize)]
pub struct GeneralizedBernoulli {
    pub k: u32,
    pub chi: DirichletCharacter,
    pub value: CyclotomicNumber,
}

/// B_{k,chi} = f^{k-1} sum_{a=1}^{f} chi(a) B_k(a/f) for primitive chi of conductor f.
pub fn generalized_bernoulli(k: u32, chi: &DirichletCharacter) -> Result<GeneralizedBernoulli> {
    if k == 0 {
        return Err(Error::InvalidArgument("weight must be at least 1".into()));
    }
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
    }
    let f = chi.modulus();
    let n = chi.order();
    let mut buckets = vec![BigRational::zero(); n as usize];
    let fr = BigInt::from(f);
    for a in 1..=f {
        if let Some(e) = chi.exponent_of(a as i64) {
            let x = BigRational::new(BigInt::from(a), fr.clone());
            buckets[e as usize] += bernoulli_polynomial(k as u64, &x);
        }
    }
    let scale = BigRational::from_integer(num_traits::pow(fr, k as usize - 1));
    let coeffs: Vec<BigRational> = buckets.into_iter().map(|b| b * &scale).collect();
    let value = CyclotomicNumber::from_rational_poly(n, &coeffs);
    Ok(GeneralizedBernoulli { k, chi: chi.clone(), value })
}

/// B_{k,chi} / 2k in Q(zeta_n).
pub fn bkchi_over_2k(k: u32, chi: &DirichletCharacter) -> Result<CyclotomicNumber> {
    let b = generalized_bernoulli(k, chi)?;
    Ok(b.value.div_int(&BigInt::from(2 * k)))
}

/// Valuation of B_{k,chi}/2k: the p-adic valuation when chi is rational
/// valued, the valuation at varpi = 1 - zeta_{p^s} when Z_p[chi] is totally
/// ramified of that shape. Other rings have several valuations; see
/// [`bkchi_over_2k_valuations`].
pub fn bkchi_over_2k_valuation(k: u32, chi: &DirichletCharacter, p: u64) -> Result<i64> {
    if !chi.parity_matches(k) {
        return Err(Error::ParityMismatch { k });
    }
    let x = bkchi_over_2k(k, chi)?;
    if x.is_zero() {
        return Err(Error::ZeroBernoulli { k });
    }
    let n = chi.order();
    if n <= 2 {
        let q = x.to_rational().expect("rational-valued character");
        return Ok(arith::val_p_big(q.numer(), p) as i64 - arith::val_p_big(q.denom(), p) as i64);
    }
    let (s, rest) = arith::split_p(n, p);
    if s == 0 || rest > 2 {
        return Err(Error::NotTotallyRamified { n, p });
    }
    Ok(pi_valuation(&x, p, s)?.expect("nonzero"))
}

/// Valuations of B_{k,chi}/2k in every factor of Z[zeta_n] (x) Z_p.
pub fn bkchi_over_2k_valuations(k: u32, chi: &DirichletCharacter, p: u64, m: u32) -> Result<Vec<i64>> {
    if !chi.parity_matches(k) {
        return Err(Error::ParityMismatch { k });
    }
    let x = bkchi_over_2k(k, chi)?;
    if x.is_zero() {
        return Err(Error::ZeroBernoulli { k });
    }
    let ring = LocalRing::new(chi.order(), p, m)?;
    Ok(ring.valuations(&x))
}

/// One row of the valuation table emitted by the command line.
#[derive(Clone, Debug, Serialize)]
pub struct ValuationRow {
    pub p: u64,
    pub conductor: u64,
    pub order: u64,
    pub k: u32,
    pub valuation: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn classical_values() {
        assert_eq!(bernoulli_rational(0), q(1, 1));
        assert_eq!(bernoulli_rational(1), q(-1, 2));
        assert_eq!(bernoulli_rational(2), q(1, 6));
        assert_eq!(bernoulli_rational(3), q(0, 1));
        assert_eq!(bernoulli_rational(4), q(-1, 30));
        assert_eq!(bernoulli_rational(12), q(-691, 2730));
    }

    /// Independent route: t e^{at}/(e^{ft} - 1) expanded as a power series.
    fn generating_function_oracle(k: u32, chi: &DirichletCharacter) -> CyclotomicNumber {
        let f = chi.modulus() as i64;
        let deg = k as usize + 1;
        let fact = |j: usize| (1..=j as i64).fold(BigRational::one(), |acc, i| acc * q(i, 1));
        // (e^{ft} - 1)/t = sum_{j>=0} f^{j+1} t^j/(j+1)!
        let den: Vec<BigRational> = (0..deg)
            .map(|j| BigRational::from_integer(num_traits::pow(BigInt::from(f), j + 1)) / fact(j + 1))
            .collect();
        let n = chi.order();
        let mut total = CyclotomicNumber::zero(n);
        for a in 1..=f {
            if chi.exponent_of(a).is_none() {
                continue;
            }
            let num: Vec<BigRational> = (0..deg)
                .map(|j| BigRational::from_integer(num_traits::pow(BigInt::from(a), j)) / fact(j))
                .collect();
            // series quotient num / den, coefficient of t^k
            let mut quo = vec![BigRational::zero(); deg];
            for i in 0..deg {
                let mut c = num[i].clone();
                for j in 0..i {
                    c -= &quo[j] * &den[i - j];
                }
                quo[i] = c / &den[0];
            }
            let coeff = &quo[k as usize] * fact(k as usize);
            total = &total + &(&chi.value(a) * &CyclotomicNumber::from_rational(n, &coeff));
        }
        total
    }

    #[test]
    fn generalized_matches_generating_function() {
        for m in [1u64, 3, 4, 5, 7, 8, 11, 12] {
            for chi in DirichletCharacter::primitive(m) {
                for k in 1..=6 {
                    let b = generalized_bernoulli(k, &chi).unwrap().value;
                    assert_eq!(b, generating_function_oracle(k, &chi), "{chi} k={k}");
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        let triv = DirichletCharacter::trivial(1);
        assert_eq!(generalized_bernoulli(4, &triv).unwrap().value.to_rational(), Some(q(-1, 30)));
        assert_eq!(generalized_bernoulli(1, &triv).unwrap().value.to_rational(), Some(q(1, 2)));
        let chi4 = DirichletCharacter::primitive(4).pop().unwrap();
        assert_eq!(generalized_bernoulli(1, &chi4).unwrap().value.to_rational(), Some(q(-1, 2)));
        assert_eq!(bkchi_over_2k_valuation(4, &triv, 5).unwrap(), -1);
        assert!(matches!(bkchi_over_2k_valuation(3, &triv, 5), Err(Error::ParityMismatch { .. })));
    }

    #[test]
    fn order_five_character_mod_eleven() {
        // frozen from the generating-function oracle above
        let chi: DirichletCharacter = "11:5:[1]".parse().unwrap();
        let b = generalized_bernoulli(2, &chi).unwrap().value;
        let expected = CyclotomicNumber::from_int_poly(5, &[40, 24, 4, 12]).div_int(&BigInt::from(11));
        assert_eq!(b, expected);
        assert!(bkchi_over_2k_valuation(2, &chi, 5).unwrap() >= 1);
        assert_eq!(bkchi_over_2k_valuation(4, &chi, 5).unwrap(), 0);
        let chi12: DirichletCharacter = "13:12:[1]".parse().unwrap();
        assert!(matches!(
            bkchi_over_2k_valuation(3, &chi12, 5),
            Err(Error::NotTotallyRamified { .. })
        ));
        assert_eq!(bkchi_over_2k_valuations(3, &chi12, 5, 8).unwrap().len(), 2);
    }

    #[test]
    fn parity_vanishing() {
        for m in 1..=25u64 {
            for chi in DirichletCharacter::primitive(m) {
                for k in 1..=12u32 {
                    let b = generalized_bernoulli(k, &chi).unwrap().value;
                    if !chi.parity_matches(k) && !(k == 1 && chi.is_trivial()) {
                        assert!(b.is_zero(), "{chi} k={k}");
                    }
                }
            }
        }
    }
}
