//! Exact arithmetic in the cyclotomic fields Q(zeta_n).
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(n)-1)` of
//! `Z[x]/Phi_n(x)` with one positive common denominator. Every constructor
//! reduces modulo `Phi_n` and normalizes so that the gcd of the numerator
//! entries and the denominator is 1, which makes derived equality canonical.

pub mod ideal;
pub mod local;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

pub use ideal::{ideal_compare, ideal_contains, ideal_from_generators, IdealHNF, IdealOrder};
pub use local::LocalRing;

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in arith::divisors(n) {
        if d == n {
            continue;
        }
        let div = cyclotomic_poly(d);
        poly = exact_div_monic(&poly, &div);
    }
    let poly = Arc::new(poly);
    phi_cache().write().unwrap().insert(n, poly.clone());
    poly
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Degree of Q(zeta_n) over Q.
pub fn degree(n: u64) -> usize {
    arith::euler_phi(n) as usize
}

/// Reduces an integer polynomial of any length modulo Phi_n in place.
fn reduce_poly(n: u64, mut a: Vec<BigInt>) -> Vec<BigInt> {
    let phi = cyclotomic_poly(n);
    let r = phi.len() - 1;
    if a.len() > r {
        for i in (r..a.len()).rev() {
            if a[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut a[i]);
            for j in 0..r {
                if !phi[j].is_zero() {
                    a[i - r + j] -= &c * &phi[j];
                }
            }
        }
    }
    a.resize(r, BigInt::zero());
    a
}

/// Exact element of Q(zeta_n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    n: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

/// Arithmetic selector for [`cyc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic; rejects mismatched rings and division by zero.
pub fn cyc_arith(a: &CyclotomicNumber, b: &CyclotomicNumber, op: ArithOp) -> Result<CyclotomicNumber> {
    if a.n != b.n {
        return Err(Error::RingMismatch(a.n, b.n));
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl CyclotomicNumber {
    /// Builds `(sum num[i] z^i) / den` from a polynomial of any length.
    pub fn from_poly(n: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut x = CyclotomicNumber { n, num: reduce_poly(n, num), den };
        x.normalize();
        x
    }

    pub fn from_int_poly(n: u64, num: &[i64]) -> Self {
        Self::from_poly(n, num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one())
    }

    /// Builds an element from rational power-basis coefficients.
    pub fn from_rational_poly(n: u64, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_poly(n, num, den)
    }

    pub fn zero(n: u64) -> Self {
        CyclotomicNumber { n, num: vec![BigInt::zero(); degree(n)], den: BigInt::one() }
    }

    pub fn one(n: u64) -> Self {
        Self::from_int(n, BigInt::one())
    }

    pub fn from_int(n: u64, v: impl Into<BigInt>) -> Self {
        let mut num = vec![BigInt::zero(); degree(n)];
        num[0] = v.into();
        CyclotomicNumber { n, num, den: BigInt::one() }
    }

    pub fn from_rational(n: u64, v: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); degree(n)];
        num[0] = v.numer().clone();
        let mut x = CyclotomicNumber { n, num, den: v.denom().clone() };
        x.normalize();
        x
    }

    /// `zeta_n^e`, with e taken modulo n.
    pub fn root_of_unity(n: u64, e: i64) -> Self {
        let e = arith::rem_euclid(e, n) as usize;
        let mut num = vec![BigInt::zero(); e + 1];
        num[e] = BigInt::one();
        Self::from_poly(n, num, BigInt::one())
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value, if the element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Rational power-basis coefficients.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let mut x = CyclotomicNumber {
            n: self.n,
            num: self.num.iter().map(|c| c * k).collect(),
            den: self.den.clone(),
        };
        x.normalize();
        x
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero(), "division by zero");
        let mut x = CyclotomicNumber { n: self.n, num: self.num.clone(), den: &self.den * k };
        x.normalize();
        x
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the inclusion Q(zeta_n) -> Q(zeta_m), zeta_n -> zeta_m^(m/n).
    pub fn embed(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.n) {
            return Err(Error::RingMismatch(self.n, m));
        }
        if m == self.n {
            return Ok(self.clone());
        }
        let step = (m / self.n) as usize;
        let mut poly = vec![BigInt::zero(); step * self.num.len().max(1)];
        for (i, c) in self.num.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(Self::from_poly(m, poly, self.den.clone()))
    }

    /// Galois conjugate under zeta -> zeta^a, gcd(a, n) = 1.
    pub fn galois(&self, a: u64) -> Self {
        let a = (a % self.n) as usize;
        let n = self.n as usize;
        let mut poly = vec![BigInt::zero(); n.max(1)];
        for (i, c) in self.num.iter().enumerate() {
            poly[(i * a) % n.max(1)] += c;
        }
        Self::from_poly(self.n, poly, self.den.clone())
    }

    /// Integer matrix whose row j holds the coordinates of `num * z^j`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<BigInt>> {
        let r = self.num.len();
        let mut rows = Vec::with_capacity(r);
        let mut cur = self.num.clone();
        for _ in 0..r {
            rows.push(cur.clone());
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(cur);
            cur = reduce_poly(self.n, shifted);
        }
        rows
    }

    /// Absolute norm N_{Q(zeta_n)/Q}.
    pub fn norm(&self) -> BigRational {
        let det = crate::linalg::det_bareiss(&self.multiplication_matrix());
        let r = self.num.len();
        BigRational::new(det, num_traits::pow(self.den.clone(), r))
    }

    /// Inverse via the extended Euclidean algorithm against Phi_n over Q.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(self.n, &q.recip()));
        }
        let to_q = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let mut r0 = to_q(&cyclotomic_poly(self.n));
        let mut r1 = trim(to_q(&self.num));
        let mut s0: Vec<BigRational> = vec![];
        let mut s1 = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, rem) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is the nonzero constant gcd
        let c = r0[0].clone();
        let coeffs: Vec<BigRational> = s0.into_iter().map(|x| x / &c).collect();
        let inv = Self::from_rational_poly(self.n, &coeffs);
        // fold the original denominator back in
        Ok(inv.scale_int(&self.den))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RingMismatch(self.n, other.n));
        }
        Ok(self * &other.inverse()?)
    }

    /// Numerator reduced into [0, q) coordinatewise, after inverting the
    /// denominator modulo q. Requires gcd(den, q) = 1.
    pub fn reduce_mod(&self, q: &BigInt) -> Option<Vec<BigInt>> {
        let inv = arith::big_inv_mod(&self.den, q)?;
        Some(self.num.iter().map(|c| arith::big_mod(&(c * &inv), q)).collect())
    }

    /// Builds an integral element from power-basis coordinates.
    pub fn from_coords(n: u64, coords: Vec<BigInt>) -> Self {
        Self::from_poly(n, coords, BigInt::one())
    }

    /// Compact text form: rational coefficient strings, constant first.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coefficients().iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coeff_strings(n: u64, coeffs: &[String]) -> Result<Self> {
        let parsed: Result<Vec<BigRational>> = coeffs
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
            .collect();
        let parsed = parsed?;
        if parsed.len() != degree(n) {
            return Err(Error::Parse(format!(
                "expected {} coefficients for Q(zeta_{n}), got {}",
                degree(n),
                parsed.len()
            )));
        }
        Ok(Self::from_rational_poly(n, &parsed))
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); len];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let lead = b[db].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] -= &c * y;
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.n, rhs.n, "mismatched cyclotomic rings");
        let num = if self.den == rhs.den {
            self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect()
        } else {
            self.num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| a * &rhs.den + b * &self.den)
                .collect()
        };
        let den = if self.den == rhs.den { self.den.clone() } else { &self.den * &rhs.den };
        let mut x = CyclotomicNumber { n: self.n, num, den };
        x.normalize();
        x
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            n: self.n,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.n, rhs.n, "mismatched cyclotomic rings");
        let r = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * r - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CyclotomicNumber::from_poly(self.n, prod, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            let coef = if i > 0 && c.is_one() {
                String::new()
            } else if i > 0 && (-c).is_one() {
                "-".to_string()
            } else if i > 0 {
                format!("{c}*")
            } else {
                c.to_string()
            };
            terms.push(format!("{coef}{mono}"));
        }
        let body = terms.join(" + ").replace("+ -", "- ");
        if self.den.is_one() {
            write!(f, "{body}")
        } else if terms.len() == 1 {
            write!(f, "{body}/{}", self.den)
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{}): {}", self.n, self)
    }
}

/// JSON wire form: ambient conductor plus rational coefficient strings.
#[derive(Serialize, Deserialize)]
struct CycWire {
    n: u64,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycWire { n: self.n, coeffs: self.to_coeff_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CycWire::deserialize(d)?;
        CyclotomicNumber::from_coeff_strings(w.n, &w.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Helper for small tests and fixtures: an integral element from i64 coordinates.
pub fn cyc(n: u64, coords: &[i64]) -> CyclotomicNumber {
    CyclotomicNumber::from_int_poly(n, coords)
}

/// True if the rational value of x, when rational, fits in i64.
pub fn small_int(x: &CyclotomicNumber) -> Option<i64> {
    x.to_rational()
        .filter(|q| q.is_integer())
        .and_then(|q| q.numer().to_i64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let p = |n| cyclotomic_poly(n).iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(p(1), vec![-1, 1]);
        assert_eq!(p(4), vec![1, 0, 1]);
        assert_eq!(p(6), vec![1, -1, 1]);
        assert_eq!(p(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(p(5), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn roots_of_unity_multiply() {
        let z = CyclotomicNumber::root_of_unity(5, 1);
        let z4 = CyclotomicNumber::root_of_unity(5, 4);
        assert!((&z * &z4).is_one());
    }

    #[test]
    fn product_of_one_minus_powers_is_five() {
        // Phi_5(1) = 5, computed here by expanding the polynomial product
        // prod_{j=1..4} (1 - x^j) mod Phi_5 with plain integer convolution.
        let mut acc = vec![1i64];
        for j in 1..5usize {
            let mut f = vec![0i64; j + 1];
            f[0] = 1;
            f[j] = -1;
            let mut out = vec![0i64; acc.len() + f.len() - 1];
            for (a, x) in acc.iter().enumerate() {
                for (b, y) in f.iter().enumerate() {
                    out[a + b] += x * y;
                }
            }
            acc = out;
        }
        assert_eq!(CyclotomicNumber::from_int_poly(5, &acc), CyclotomicNumber::from_int(5, 5));

        let one = CyclotomicNumber::one(5);
        let prod = (1..5).fold(one.clone(), |acc, j| {
            &acc * &(&one - &CyclotomicNumber::root_of_unity(5, j))
        });
        assert_eq!(prod, CyclotomicNumber::from_int(5, 5));
    }

    #[test]
    fn add_zero_and_errors() {
        let a = cyc(7, &[1, -2, 3]);
        assert_eq!(&a + &CyclotomicNumber::zero(7), a);
        assert_eq!(
            cyc_arith(&a, &cyc(5, &[1]), ArithOp::Add),
            Err(Error::RingMismatch(7, 5))
        );
        assert_eq!(
            cyc_arith(&a, &CyclotomicNumber::zero(7), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn inverse_round_trip() {
        for n in [3u64, 5, 8, 12, 15] {
            let a = cyc(n, &[2, -1, 3]);
            let inv = a.inverse().unwrap();
            assert!((&a * &inv).is_one(), "n = {n}");
        }
        let half = CyclotomicNumber::from_rational(7, &BigRational::new(1.into(), 2.into()));
        assert!((&half * &half.inverse().unwrap()).is_one());
        let frac = cyc(7, &[1, 1]).div_int(&BigInt::from(3));
        assert!((&frac * &frac.inverse().unwrap()).is_one());
    }

    #[test]
    fn norm_of_one_minus_zeta() {
        let x = &CyclotomicNumber::one(5) - &CyclotomicNumber::root_of_unity(5, 1);
        assert_eq!(x.norm(), BigRational::from_integer(5.into()));
        let y = &CyclotomicNumber::one(6) - &CyclotomicNumber::root_of_unity(6, 1);
        assert_eq!(y.norm(), BigRational::one());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let z3 = CyclotomicNumber::root_of_unity(3, 1);
        let e = z3.embed(12).unwrap();
        assert_eq!(e, CyclotomicNumber::root_of_unity(12, 4));
        assert!(e.pow(3).is_one());
    }

    #[test]
    fn serde_round_trip() {
        let a = cyc(12, &[1, -2, 0, 5]).div_int(&BigInt::from(6));
        let s = serde_json::to_string(&a).unwrap();
        let b: CyclotomicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
