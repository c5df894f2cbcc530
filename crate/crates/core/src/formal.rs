//! Endomorphisms [a](t) = (1 + t)^a - 1 of the multiplicative formal group
//! and torsion orders of G_m (x) A.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith;
use crate::cyclo::IdealHNF;
use crate::error::{Error, Result};

/// c_1 t + ... + c_D t^D, over Z or Z/modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedSeries {
    #[serde(serialize_with = "ser_bigs")]
    coeffs: Vec<BigInt>,
    #[serde(serialize_with = "ser_opt_big")]
    modulus: Option<BigInt>,
}

fn ser_bigs<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_opt_big<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl TruncatedSeries {
    /// Coefficients of t^1..t^D; reduced into [0, modulus) when one is given.
    pub fn new(coeffs: Vec<BigInt>, modulus: Option<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("degree cap must be at least 1".into()));
        }
        if modulus.as_ref().is_some_and(|m| !m.is_positive()) {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut s = TruncatedSeries { coeffs, modulus };
        s.normalize();
        Ok(s)
    }

    fn normalize(&mut self) {
        if let Some(m) = &self.modulus {
            for c in &mut self.coeffs {
                *c = arith::big_mod(c, m);
            }
        }
    }

    pub fn degree_cap(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of t^j; zero for j = 0 and beyond the cap.
    pub fn coeff(&self, j: usize) -> BigInt {
        if j == 0 {
            return BigInt::zero();
        }
        self.coeffs.get(j - 1).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() || self.modulus != other.modulus {
            return Err(Error::InvalidArgument("series over different truncations".into()));
        }
        Ok(())
    }

    /// Product, truncated at the common cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.coeffs.len();
        let mut out = vec![BigInt::zero(); d];
        for i in 1..=d {
            if self.coeffs[i - 1].is_zero() {
                continue;
            }
            for j in 1..=d - i {
                out[i + j - 1] += &self.coeffs[i - 1] * &other.coeffs[j - 1];
            }
        }
        TruncatedSeries::new(out, self.modulus.clone())
    }

    /// self(other(t)).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.coeffs.len();
        let mut out = vec![BigInt::zero(); d];
        let mut power = other.clone();
        for i in 1..=d {
            let c = &self.coeffs[i - 1];
            if !c.is_zero() {
                for (o, x) in out.iter_mut().zip(&power.coeffs) {
                    *o += c * x;
                }
            }
            if i < d {
                power = power.mul(other)?;
            }
        }
        TruncatedSeries::new(out, self.modulus.clone())
    }

    pub fn reduce(&self, m: &BigInt) -> Result<Self> {
        TruncatedSeries::new(self.coeffs.clone(), Some(m.clone()))
    }
}

/// Binomial coefficient C(a, j) for any integer a.
pub fn binomial_signed(a: &BigInt, j: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j {
        num *= a - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

/// [a](t) = sum_{j=1}^D C(a, j) t^j modulo p^M; the integer a is used exactly.
pub fn mult_by_a_series(a: &BigInt, d: usize, p: u64, m: u32) -> Result<TruncatedSeries> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidArgument("degree cap and precision must be at least 1".into()));
    }
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let coeffs = (1..=d as u64).map(|j| binomial_signed(a, j)).collect();
    TruncatedSeries::new(coeffs, Some(arith::big_pow(p, m)))
}

/// [a](t) over Z.
pub fn mult_by_a_exact(a: &BigInt, d: usize) -> Result<TruncatedSeries> {
    let coeffs = (1..=d as u64).map(|j| binomial_signed(a, j)).collect::<Vec<_>>();
    TruncatedSeries::new(coeffs, None)
}

/// |(G_m (x) A)[I]| = |A/I| for A = Z_p[zeta_n] and I containing a power of p.
pub fn torsion_order(p: u64, ideal: &IdealHNF) -> Result<BigInt> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let content = ideal.integer_content();
    if !arith::is_power_of_big(&content, p) {
        return Err(Error::InvalidArgument(format!("ideal is not supported at {p} alone")));
    }
    Ok(ideal.norm().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CyclotomicNumber;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_endomorphisms() {
        let one = mult_by_a_series(&BigInt::from(1), 4, 5, 3).unwrap();
        assert_eq!(one.coeffs(), ints(&[1, 0, 0, 0]).as_slice());
        let two = mult_by_a_exact(&BigInt::from(2), 4).unwrap();
        assert_eq!(two.coeffs(), ints(&[2, 1, 0, 0]).as_slice());
        let five = mult_by_a_series(&BigInt::from(5), 6, 5, 1).unwrap();
        assert_eq!(five.coeffs(), ints(&[0, 0, 0, 0, 1, 0]).as_slice());
        // (1+t)^{-1} - 1 = -t + t^2 - t^3
        let inv = mult_by_a_exact(&BigInt::from(-1), 3).unwrap();
        assert_eq!(inv.coeffs(), ints(&[-1, 1, -1]).as_slice());
    }

    #[test]
    fn composition() {
        let a = mult_by_a_exact(&BigInt::from(3), 8).unwrap();
        let b = mult_by_a_exact(&BigInt::from(-4), 8).unwrap();
        assert_eq!(a.compose(&b).unwrap(), mult_by_a_exact(&BigInt::from(-12), 8).unwrap());
    }

    #[test]
    fn torsion_orders() {
        assert_eq!(torsion_order(5, &IdealHNF::from_int(1, 25)).unwrap(), BigInt::from(25));
        let varpi = &CyclotomicNumber::one(5) - &CyclotomicNumber::root_of_unity(5, 1);
        assert_eq!(torsion_order(5, &IdealHNF::principal(&varpi).unwrap()).unwrap(), BigInt::from(5));
        assert_eq!(torsion_order(5, &IdealHNF::unit(5)).unwrap(), BigInt::from(1));
        assert_eq!(torsion_order(5, &IdealHNF::zero(5)).unwrap_err(), Error::ZeroIdeal);
        assert!(torsion_order(5, &IdealHNF::from_int(1, 6)).is_err());
    }
}
