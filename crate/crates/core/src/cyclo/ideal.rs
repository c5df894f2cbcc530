//! Integral ideals of Z[zeta_n] as Hermite-normal-form lattices.
//!
//! Rows of the basis are coordinate vectors in the power basis. The matrix is
//! upper triangular with positive pivots, and entries above each pivot lie in
//! [0, pivot). Every nonzero ideal contains a positive rational integer `d`
//! (a norm of one of its generators), so the lattice is built modulo d.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{degree, CyclotomicNumber};
use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct IdealHNF {
    n: u64,
    /// r x r upper triangular; all-zero for the zero ideal.
    basis: Vec<Vec<BigInt>>,
    norm: BigInt,
    /// A positive rational integer in the ideal (0 for the zero ideal).
    known_int: BigInt,
}

// the HNF is canonical, so equality of lattices is equality of bases
impl PartialEq for IdealHNF {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.basis == other.basis
    }
}
impl Eq for IdealHNF {}

impl std::hash::Hash for IdealHNF {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.basis.hash(state);
    }
}

/// Result of comparing two ideals as lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum IdealOrder {
    Equal,
    /// The left ideal is strictly contained in the right one.
    Subset,
    /// The right ideal is strictly contained in the left one.
    Superset,
    Incomparable,
}

/// Incremental HNF modulo a fixed positive integer d lying in the ideal.
#[derive(Clone, Debug)]
pub struct IdealBuilder {
    n: u64,
    d: BigInt,
    rows: Vec<Vec<BigInt>>,
}

impl IdealBuilder {
    /// Starts from the ideal (d) of Z[zeta_n].
    pub fn new(n: u64, d: BigInt) -> Self {
        assert!(d.is_positive(), "modulus must be positive");
        let r = degree(n);
        let rows = (0..r)
            .map(|i| (0..r).map(|j| if i == j { d.clone() } else { BigInt::zero() }).collect())
            .collect();
        IdealBuilder { n, d, rows }
    }

    /// Adds the lattice vector v (power-basis coordinates).
    pub fn add_vector(&mut self, v: &[BigInt]) {
        let r = self.rows.len();
        let mut v: Vec<BigInt> = v.iter().map(|x| arith::big_mod(x, &self.d)).collect();
        for c in 0..r {
            if v[c].is_zero() {
                continue;
            }
            let h = &self.rows[c];
            let e = h[c].extended_gcd(&v[c]);
            let (a, b) = (&h[c] / &e.gcd, &v[c] / &e.gcd);
            let mut new_h = Vec::with_capacity(r);
            let mut new_v = Vec::with_capacity(r);
            for j in 0..r {
                let hj = &h[j];
                let vj = &v[j];
                let top = &e.x * hj + &e.y * vj;
                let bot = &a * vj - &b * hj;
                if j == c {
                    new_h.push(e.gcd.clone());
                } else {
                    new_h.push(arith::big_mod(&top, &self.d));
                }
                new_v.push(arith::big_mod(&bot, &self.d));
            }
            self.rows[c] = new_h;
            v = new_v;
        }
    }

    /// Adds the principal ideal generated by x (all x * zeta^j).
    pub fn add_element(&mut self, x: &CyclotomicNumber) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::RingMismatch(self.n, x.n()));
        }
        if !x.is_integral() {
            return Err(Error::InvalidArgument(format!("generator {x} is not integral")));
        }
        for row in x.multiplication_matrix() {
            self.add_vector(&row);
        }
        Ok(())
    }

    /// Product of the current pivots, the index of the lattice.
    pub fn norm(&self) -> BigInt {
        self.rows.iter().enumerate().fold(BigInt::one(), |acc, (i, r)| acc * &r[i])
    }

    pub fn is_unit(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    pub fn finish(&self) -> IdealHNF {
        let mut h = self.rows.clone();
        let r = h.len();
        for j in 0..r {
            let pivot = h[j][j].clone();
            for i in 0..j {
                let q = h[i][j].div_floor(&pivot);
                if !q.is_zero() {
                    for c in j..r {
                        let t = &q * &h[j][c];
                        h[i][c] -= t;
                    }
                }
            }
        }
        let norm = self.norm();
        IdealHNF { n: self.n, basis: h, norm, known_int: self.d.clone() }
    }
}

/// HNF of the ideal generated by integral elements of Z[zeta_n].
pub fn ideal_from_generators(n: u64, gens: &[CyclotomicNumber]) -> Result<IdealHNF> {
    for g in gens {
        if g.n() != n {
            return Err(Error::RingMismatch(n, g.n()));
        }
        if !g.is_integral() {
            return Err(Error::InvalidArgument(format!("generator {g} is not integral")));
        }
    }
    let nonzero: Vec<&CyclotomicNumber> = gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(IdealHNF::zero(n));
    }
    // a rational integer in the ideal: rational generators directly, otherwise norms
    let mut d = BigInt::zero();
    for g in &nonzero {
        if let Some(q) = g.to_rational() {
            d = d.gcd(q.numer());
        }
    }
    if d.is_zero() {
        for g in &nonzero {
            d = d.gcd(g.norm().numer());
            if d.is_one() {
                break;
            }
        }
    }
    let mut b = IdealBuilder::new(n, d.abs());
    for g in nonzero {
        b.add_element(g)?;
    }
    Ok(b.finish())
}

pub fn ideal_contains(ideal: &IdealHNF, x: &CyclotomicNumber) -> bool {
    ideal.contains(x).unwrap_or(false)
}

pub fn ideal_compare(i: &IdealHNF, j: &IdealHNF) -> Result<IdealOrder> {
    if i.n != j.n {
        return Err(Error::RingMismatch(i.n, j.n));
    }
    let ij = j.contains_ideal(i);
    let ji = i.contains_ideal(j);
    Ok(match (ij, ji) {
        (true, true) => IdealOrder::Equal,
        (true, false) => IdealOrder::Subset,
        (false, true) => IdealOrder::Superset,
        (false, false) => IdealOrder::Incomparable,
    })
}

impl IdealHNF {
    pub fn zero(n: u64) -> Self {
        let r = degree(n);
        IdealHNF {
            n,
            basis: vec![vec![BigInt::zero(); r]; r],
            norm: BigInt::zero(),
            known_int: BigInt::zero(),
        }
    }

    pub fn unit(n: u64) -> Self {
        IdealBuilder::new(n, BigInt::one()).finish()
    }

    /// The principal ideal (m) for a rational integer m.
    pub fn from_int(n: u64, m: impl Into<BigInt>) -> Self {
        let m: BigInt = m.into();
        if m.is_zero() {
            Self::zero(n)
        } else {
            IdealBuilder::new(n, m.abs()).finish()
        }
    }

    pub fn principal(x: &CyclotomicNumber) -> Result<Self> {
        ideal_from_generators(x.n(), std::slice::from_ref(x))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Lattice index |Z[zeta_n] / I|; 0 for the zero ideal.
    pub fn norm(&self) -> &BigInt {
        &self.norm
    }

    pub fn is_zero(&self) -> bool {
        self.norm.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm.is_one()
    }

    /// Membership by back substitution; errors on a ring mismatch.
    pub fn contains(&self, x: &CyclotomicNumber) -> Result<bool> {
        if x.n() != self.n {
            return Err(Error::RingMismatch(self.n, x.n()));
        }
        if !x.is_integral() {
            return Ok(false);
        }
        Ok(self.contains_vector(x.numerator()))
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        if self.is_zero() {
            return v.iter().all(|c| c.is_zero());
        }
        let mut v = v.to_vec();
        for c in 0..v.len() {
            if v[c].is_zero() {
                continue;
            }
            let (q, rem) = v[c].div_rem(&self.basis[c][c]);
            if !rem.is_zero() {
                return false;
            }
            for j in c..v.len() {
                let t = &q * &self.basis[c][j];
                v[j] -= t;
            }
        }
        true
    }

    /// True if `other` is contained in `self`.
    pub fn contains_ideal(&self, other: &IdealHNF) -> bool {
        other.basis.iter().all(|row| self.contains_vector(row))
    }

    fn builder_with(&self, d: BigInt) -> IdealBuilder {
        let mut b = IdealBuilder::new(self.n, d);
        for row in &self.basis {
            b.add_vector(row);
        }
        b
    }

    /// I + J.
    pub fn add(&self, other: &IdealHNF) -> Result<IdealHNF> {
        if self.n != other.n {
            return Err(Error::RingMismatch(self.n, other.n));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut b = self.builder_with(self.known_int.gcd(&other.known_int));
        for row in &other.basis {
            b.add_vector(row);
        }
        Ok(b.finish())
    }

    /// I * J.
    pub fn mul(&self, other: &IdealHNF) -> Result<IdealHNF> {
        if self.n != other.n {
            return Err(Error::RingMismatch(self.n, other.n));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(IdealHNF::zero(self.n));
        }
        let mut b = IdealBuilder::new(self.n, &self.known_int * &other.known_int);
        for x in &self.basis {
            let xe = CyclotomicNumber::from_coords(self.n, x.clone());
            for y in &other.basis {
                let ye = CyclotomicNumber::from_coords(self.n, y.clone());
                b.add_vector((&xe * &ye).numerator());
            }
        }
        Ok(b.finish())
    }

    pub fn pow(&self, e: u32) -> IdealHNF {
        let mut acc = IdealHNF::unit(self.n);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Smallest positive rational integer in the ideal (0 for the zero ideal).
    pub fn integer_content(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let d = &self.known_int;
        let mut best = d.clone();
        let fac = factor_big(d);
        let mut divisors = vec![BigInt::one()];
        for (p, k) in fac {
            let mut next = Vec::new();
            for dv in &divisors {
                let mut pw = BigInt::one();
                for _ in 0..=k {
                    next.push(dv * &pw);
                    pw *= &p;
                }
            }
            divisors = next;
        }
        divisors.sort();
        let r = degree(self.n);
        for dv in divisors {
            let mut v = vec![BigInt::zero(); r];
            v[0] = dv.clone();
            if self.contains_vector(&v) {
                best = dv;
                break;
            }
        }
        best
    }

    /// Extension I * Z[zeta_m] for a multiple m of n.
    pub fn extend_to(&self, m: u64) -> Result<IdealHNF> {
        if !m.is_multiple_of(self.n) {
            return Err(Error::RingMismatch(self.n, m));
        }
        if self.is_zero() {
            return Ok(IdealHNF::zero(m));
        }
        let mut b = IdealBuilder::new(m, self.known_int.clone());
        for row in &self.basis {
            let x = CyclotomicNumber::from_coords(self.n, row.clone()).embed(m)?;
            b.add_element(&x)?;
        }
        Ok(b.finish())
    }

    /// Rebuilds the same ideal with another known integer; used when d must be small.
    pub fn with_known_int(&self, d: BigInt) -> Result<IdealHNF> {
        let mut v = vec![BigInt::zero(); degree(self.n)];
        v[0] = d.clone();
        if !self.contains_vector(&v) {
            return Err(Error::InvalidArgument(format!("{d} is not in the ideal")));
        }
        Ok(self.builder_with(d).finish())
    }
}

/// Trial-division factorization for the p-power-sized integers that occur here.
fn factor_big(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let mut k = 0;
            while (&n % &d).is_zero() {
                n /= &d;
                k += 1;
            }
            out.push((d.clone(), k));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

impl fmt::Display for IdealHNF {
    /// Canonical text: `n; [[row0], [row1], ...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "{}; [{}]", self.n, rows.join(","))
    }
}

impl fmt::Debug for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal(norm {}) {}", self.norm, self)
    }
}

impl FromStr for IdealHNF {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("ideal {s:?}: {m}"));
        let (n_str, rows) = s.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let n: u64 = n_str.trim().parse().map_err(|_| bad("bad conductor"))?;
        if n == 0 {
            return Err(bad("bad conductor"));
        }
        let rows: Vec<Vec<i128>> = serde_json::from_str(rows.trim()).map_err(|e| bad(&e.to_string()))?;
        let r = degree(n);
        if rows.len() != r || rows.iter().any(|row| row.len() != r) {
            return Err(bad("wrong matrix shape"));
        }
        let gens: Vec<CyclotomicNumber> = rows
            .into_iter()
            .map(|row| CyclotomicNumber::from_coords(n, row.into_iter().map(BigInt::from).collect()))
            .collect();
        // rows span the lattice; closing under zeta reproduces the canonical HNF
        ideal_from_generators(n, &gens)
    }
}

impl serde::Serialize for IdealHNF {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for IdealHNF {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::super::cyc;
    use super::*;

    fn one_minus_zeta(n: u64) -> CyclotomicNumber {
        &CyclotomicNumber::one(n) - &CyclotomicNumber::root_of_unity(n, 1)
    }

    #[test]
    fn norms_of_basic_ideals() {
        let i = IdealHNF::principal(&one_minus_zeta(5)).unwrap();
        assert_eq!(i.norm(), &BigInt::from(5));
        let j = ideal_from_generators(1, &[cyc(1, &[125])]).unwrap();
        assert_eq!(j.norm(), &BigInt::from(125));
        assert!(ideal_from_generators(5, &[CyclotomicNumber::zero(5)]).unwrap().is_zero());
        // Res(Phi_7, x - 2) = Phi_7(2) = 127
        let k = IdealHNF::principal(&cyc(7, &[-2, 1])).unwrap();
        assert_eq!(k.norm(), &BigInt::from(127));
    }

    #[test]
    fn membership_examples() {
        let pi = IdealHNF::principal(&one_minus_zeta(5)).unwrap();
        assert!(ideal_contains(&pi, &CyclotomicNumber::from_int(5, 5)));
        assert!(!ideal_contains(&pi, &CyclotomicNumber::one(5)));
        let five = IdealHNF::from_int(5, 5);
        assert!(!ideal_contains(&five, &one_minus_zeta(5)));
        assert!(ideal_contains(&IdealHNF::unit(5), &cyc(5, &[3, 7, -11])));
    }

    #[test]
    fn comparisons() {
        let pi = IdealHNF::principal(&one_minus_zeta(5)).unwrap();
        let five = IdealHNF::from_int(5, 5);
        assert_eq!(ideal_compare(&five, &pi.pow(4)).unwrap(), IdealOrder::Equal);
        assert_eq!(five.basis(), pi.pow(4).basis());
        assert_eq!(ideal_compare(&five, &pi).unwrap(), IdealOrder::Subset);
        assert_eq!(ideal_compare(&pi, &five).unwrap(), IdealOrder::Superset);
        assert_eq!(
            ideal_compare(&IdealHNF::zero(5), &IdealHNF::unit(5)).unwrap(),
            IdealOrder::Subset
        );
        // two distinct primes above 11 in Z[zeta_5]
        let p1 = ideal_from_generators(5, &[cyc(5, &[11]), cyc(5, &[-3, 1])]).unwrap();
        let p2 = ideal_from_generators(5, &[cyc(5, &[11]), cyc(5, &[-4, 1])]).unwrap();
        assert_eq!(p1.norm(), &BigInt::from(11));
        assert_eq!(ideal_compare(&p1, &p2).unwrap(), IdealOrder::Incomparable);
    }

    #[test]
    fn prime_to_p_roots_give_unit_ideals() {
        for n in [3u64, 4, 6, 7] {
            for p in [2u64, 3, 5, 7, 11] {
                if n % p == 0 {
                    continue;
                }
                let i = ideal_from_generators(n, &[one_minus_zeta(n), CyclotomicNumber::from_int(n, arith::big_pow(p, 12))]).unwrap();
                assert!(i.is_unit(), "n = {n}, p = {p}");
            }
        }
    }

    #[test]
    fn text_round_trip_and_extension() {
        let i = ideal_from_generators(12, &[cyc(12, &[1, -1]), cyc(12, &[4])]).unwrap();
        let s = i.to_string();
        assert_eq!(s.parse::<IdealHNF>().unwrap(), i);
        let pi3 = IdealHNF::principal(&one_minus_zeta(3)).unwrap();
        let ext = pi3.extend_to(9).unwrap();
        let pi9 = IdealHNF::principal(&one_minus_zeta(9)).unwrap();
        assert_eq!(ext, pi9.pow(3));
        assert_eq!(IdealHNF::from_int(5, 25).integer_content(), BigInt::from(25));
        assert_eq!(IdealHNF::principal(&one_minus_zeta(5)).unwrap().integer_content(), BigInt::from(5));
    }
}
