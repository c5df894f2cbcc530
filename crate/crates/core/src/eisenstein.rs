//! Truncated q-expansions of Eisenstein series with character.
//!
//! The raw series attached to a pair (chi1, chi2) of primitive characters is
//! sum_{n>=1} (sum_{d|n} chi1^{-1}(n/d) chi2(d) d^{k-1}) q^n; it has character
//! chi = chi2 / chi1. The series with chi1 trivial carries the constant term
//! -B_{k,chi}/2k and is normalized to coprime coefficients c0 + c1 * sum.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::bernoulli::bkchi_over_2k;
use crate::char::DirichletCharacter;
use crate::cyclo::{ideal_from_generators, CyclotomicNumber};
use crate::error::{Error, Result};

/// Coefficients of q^0 .. q^Q in Q(zeta_n).
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    n: u64,
    coeffs: Vec<CyclotomicNumber>,
}

impl QSeries {
    pub fn zero(n: u64, q: usize) -> Self {
        QSeries { n, coeffs: vec![CyclotomicNumber::zero(n); q + 1] }
    }

    pub fn from_coeffs(n: u64, coeffs: Vec<CyclotomicNumber>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least a constant term".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.n() != n) {
            return Err(Error::RingMismatch(n, c.n()));
        }
        Ok(QSeries { n, coeffs })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Precision Q: the last computed exponent.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &CyclotomicNumber {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    pub fn constant(&self) -> &CyclotomicNumber {
        &self.coeffs[0]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RingMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let q = self.precision().min(other.precision());
        Ok(QSeries { n: self.n, coeffs: (0..=q).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let q = self.precision().min(other.precision());
        Ok(QSeries { n: self.n, coeffs: (0..=q).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect() })
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Result<Self> {
        if c.n() != self.n {
            return Err(Error::RingMismatch(self.n, c.n()));
        }
        Ok(QSeries { n: self.n, coeffs: self.coeffs.iter().map(|x| x * c).collect() })
    }

    /// Product truncated at the smaller precision.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let q = self.precision().min(other.precision());
        let mut out = vec![CyclotomicNumber::zero(self.n); q + 1];
        for i in 0..=q {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=q - i {
                if !other.coeffs[j].is_zero() {
                    out[i + j] = &out[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
                }
            }
        }
        Ok(QSeries { n: self.n, coeffs: out })
    }

    /// f(q^t), keeping the precision.
    pub fn dilate(&self, t: usize) -> Self {
        assert!(t >= 1);
        let q = self.precision();
        let mut out = vec![CyclotomicNumber::zero(self.n); q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * t > q {
                break;
            }
            out[i * t] = c.clone();
        }
        QSeries { n: self.n, coeffs: out }
    }

    pub fn embed(&self, m: u64) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.embed(m)).collect::<Result<Vec<_>>>()?;
        Ok(QSeries { n: m, coeffs })
    }

    pub fn truncate(&self, q: usize) -> Self {
        QSeries { n: self.n, coeffs: self.coeffs[..=q.min(self.precision())].to_vec() }
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.coeffs.iter().take(6).map(|c| c.to_string()).collect();
        write!(f, "QSeries[Q(zeta_{}), O(q^{})]: {} ...", self.n, self.precision() + 1, shown.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesWire {
    n: u64,
    precision: usize,
    coeffs: Vec<Vec<String>>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesWire {
            n: self.n,
            precision: self.precision(),
            coeffs: self.coeffs.iter().map(|c| c.to_coeff_strings()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = QSeriesWire::deserialize(d)?;
        let coeffs = w
            .coeffs
            .iter()
            .map(|c| CyclotomicNumber::from_coeff_strings(w.n, c))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        if coeffs.len() != w.precision + 1 {
            return Err(serde::de::Error::custom("precision does not match coefficient count"));
        }
        QSeries::from_coeffs(w.n, coeffs).map_err(serde::de::Error::custom)
    }
}

/// sigma_{m,chi}(n) = sum_{d | n} chi(d) d^m.
pub fn sigma_chi(m: u32, chi: &DirichletCharacter, n: u64) -> CyclotomicNumber {
    assert!(n >= 1);
    let o = chi.order();
    let mut buckets = vec![BigInt::zero(); o as usize];
    for d in arith::divisors(n) {
        if let Some(e) = chi.exponent_of(d as i64) {
            buckets[e as usize] += num_traits::pow(BigInt::from(d), m as usize);
        }
    }
    CyclotomicNumber::from_poly(o, buckets, BigInt::one())
}

/// Coefficients sum_{d | n} psi(n/d) phi(d) d^{k-1} for n = 1..=len, in Q(zeta_l).
fn twisted_divisor_sums(k: u32, psi: &DirichletCharacter, phi: &DirichletCharacter, len: usize, l: u64) -> Vec<CyclotomicNumber> {
    let (sp, sf) = (l / psi.order(), l / phi.order());
    let mut acc = vec![vec![BigInt::zero(); l as usize]; len + 1];
    let psi_e: Vec<Option<u64>> = (0..=len).map(|j| psi.exponent_of(j as i64)).collect();
    for d in 1..=len {
        let Some(ed) = phi.exponent_of(d as i64) else { continue };
        let pw = num_traits::pow(BigInt::from(d), k as usize - 1);
        for j in 1..=len / d {
            if let Some(ej) = psi_e[j] {
                let idx = ((ej * sp + ed * sf) % l) as usize;
                acc[d * j][idx] += &pw;
            }
        }
    }
    acc.into_iter().map(|v| CyclotomicNumber::from_poly(l, v, BigInt::one())).collect()
}

/// The constant-free series E_{k,chi1,chi2}(q^t) to precision Q.
///
/// The coefficient of q^{nt} is sum_{d|n} chi1^{-1}(n/d) chi2(d) d^{k-1}, so the
/// coefficient of q^t is 1. Both characters trivial is rejected: that series
/// needs the normalized constant term.
pub fn eisenstein_qexp(k: u32, chi1: &DirichletCharacter, chi2: &DirichletCharacter, t: usize, q: usize) -> Result<QSeries> {
    if k == 0 || q == 0 || t == 0 {
        return Err(Error::InvalidArgument("weight, dilation and precision must be positive".into()));
    }
    if chi1.is_trivial() && chi2.is_trivial() {
        return Err(Error::InvalidArgument(
            "both characters trivial: use eisenstein_normalized".into(),
        ));
    }
    let l = arith::lcm(chi1.order(), chi2.order());
    let psi = chi1.inverse();
    let sums = twisted_divisor_sums(k, &psi, chi2, q / t, l);
    let mut coeffs = vec![CyclotomicNumber::zero(l); q + 1];
    for (n, c) in sums.into_iter().enumerate().skip(1) {
        coeffs[n * t] = c;
    }
    Ok(QSeries { n: l, coeffs })
}

/// c0 + c1 * sum_{n>=1} sigma_{k-1,chi}(n) q^n with c0/c1 = -B_{k,chi}/2k.
#[derive(Clone, Debug, Serialize)]
pub struct NormalizedEisenstein {
    pub k: u32,
    pub chi: DirichletCharacter,
    pub c0: CyclotomicNumber,
    pub c1: CyclotomicNumber,
    pub series: QSeries,
    /// Weight 2 with trivial character: only a p-adic modular form.
    pub quasi_modular: bool,
    pub diagnostics: Vec<String>,
}

/// E_{k,chi} scaled to coprime integral coefficients.
///
/// The integer content of (c0, c1) is cleared exactly. Common factors
/// 1 - zeta_{p^s} for p^s || n are then divided out. If the content ideal is
/// still not the unit ideal a "non-principal content" diagnostic is attached.
pub fn eisenstein_normalized(k: u32, chi: &DirichletCharacter, q: usize) -> Result<NormalizedEisenstein> {
    if k == 0 || q == 0 {
        return Err(Error::InvalidArgument("weight and precision must be positive".into()));
    }
    let chi = chi.primitive_version();
    if !chi.parity_matches(k) {
        return Err(Error::ParityMismatch { k });
    }
    let beta = -&bkchi_over_2k(k, &chi)?;
    if beta.is_zero() {
        return Err(Error::ZeroBernoulli { k });
    }
    let n = chi.order();
    let mut c0 = CyclotomicNumber::from_coords(n, beta.numerator().to_vec());
    let mut c1 = CyclotomicNumber::from_int(n, beta.denominator().clone());
    let mut diagnostics = Vec::new();
    for (p, e) in arith::factorize(n) {
        let pe = p.pow(e);
        if pe == 2 {
            continue;
        }
        let varpi = &CyclotomicNumber::one(n) - &CyclotomicNumber::root_of_unity(n, (n / pe) as i64);
        let inv = varpi.inverse()?;
        loop {
            let (a, b) = (&c0 * &inv, &c1 * &inv);
            if a.is_integral() && b.is_integral() {
                c0 = a;
                c1 = b;
            } else {
                break;
            }
        }
    }
    let content = ideal_from_generators(n, &[c0.clone(), c1.clone()])?;
    if !content.is_unit() {
        diagnostics.push(format!("non-principal content of norm {}", content.norm()));
    }
    if let Some(r) = c0.to_rational() {
        if r.is_negative() {
            c0 = -&c0;
            c1 = -&c1;
        }
    }
    let sums = twisted_divisor_sums(k, &DirichletCharacter::trivial(1), &chi, q, n);
    let mut coeffs = Vec::with_capacity(q + 1);
    coeffs.push(c0.clone());
    coeffs.extend(sums.into_iter().skip(1).map(|s| &c1 * &s));
    let quasi_modular = k == 2 && chi.is_trivial();
    if quasi_modular {
        diagnostics.push("weight 2, trivial character: p-adic modular form only".into());
    }
    Ok(NormalizedEisenstein { k, chi, c0, c1, series: QSeries { n, coeffs }, quasi_modular, diagnostics })
}

/// How a basis element was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisKind {
    /// Normalized E_{k,chi}(q^t) with constant term.
    Normalized,
    /// Constant-free E_{k,chi1,chi2}(q^t).
    Raw,
    /// E_2(q) - t E_2(q^t) at trivial character.
    WeightTwoDifference,
}

#[derive(Clone, Debug, Serialize)]
pub struct EisensteinBasisElement {
    pub k: u32,
    pub chi1: DirichletCharacter,
    pub chi2: DirichletCharacter,
    pub t: u64,
    pub kind: BasisKind,
    pub series: QSeries,
    pub diagnostics: Vec<String>,
}

/// Basis of the Eisenstein subspace of weight k, level Gamma_1(N) and
/// character chi: one element per (chi1, chi2, t) with chi1, chi2 primitive
/// of conductors N1, N2, chi2/chi1 = chi and N1 N2 t | N (in weight one
/// only one of each swapped pair). All series share
/// the cyclotomic ring generated by every character involved.
pub fn basis_enumeration(k: u32, level: u64, chi: &DirichletCharacter, q: usize) -> Result<Vec<EisensteinBasisElement>> {
    if level <= 1 {
        return Err(Error::InvalidArgument("level must exceed 1".into()));
    }
    if !level.is_multiple_of(chi.conductor()) {
        return Err(Error::InvalidArgument(format!(
            "conductor {} does not divide level {level}",
            chi.conductor()
        )));
    }
    if !chi.parity_matches(k) {
        return Err(Error::ParityMismatch { k });
    }
    let target = chi.primitive_version().extend(level)?;
    let mut pairs = Vec::new();
    for n1 in arith::divisors(level) {
        for chi1 in DirichletCharacter::primitive(n1) {
            let chi2 = target.mul(&chi1.extend(level)?)?.primitive_version();
            let n2 = chi2.modulus();
            if !level.is_multiple_of(n1 * n2) {
                continue;
            }
            // in weight one (chi1, chi2) and (chi2^-1, chi1^-1) give the same series
            if k == 1 && pairs.iter().any(|(a, b, _)| *a == chi2.inverse() && *b == chi1.inverse()) {
                continue;
            }
            for t in arith::divisors(level / (n1 * n2)) {
                pairs.push((chi1.clone(), chi2.clone(), t));
            }
        }
    }
    let common = pairs
        .iter()
        .fold(chi.order(), |acc, (a, b, _)| arith::lcm(acc, arith::lcm(a.order(), b.order())));
    let mut out = Vec::new();
    for (chi1, chi2, t) in pairs {
        let (kind, series, diagnostics) = if chi1.is_trivial() && chi2.is_trivial() && k == 2 {
            if t == 1 {
                continue;
            }
            let e2 = eisenstein_normalized(2, &chi2, q)?.series;
            let diff = e2.sub(&e2.dilate(t as usize).scale(&CyclotomicNumber::from_int(e2.n(), t))?)?;
            (BasisKind::WeightTwoDifference, diff, vec![])
        } else if chi1.is_trivial() {
            let e = eisenstein_normalized(k, &chi2, q)?;
            (BasisKind::Normalized, e.series.dilate(t as usize), e.diagnostics)
        } else {
            (BasisKind::Raw, eisenstein_qexp(k, &chi1, &chi2, t as usize, q)?, vec![])
        };
        out.push(EisensteinBasisElement { k, chi1, chi2, t, kind, series: series.embed(common)?, diagnostics });
    }
    Ok(out)
}

/// Basis at the level equal to the conductor of chi; for conductor 1 this is
/// the single level-one series E_k (E_2 included as a p-adic form).
pub fn eisenstein_space_basis(k: u32, chi: &DirichletCharacter, q: usize) -> Result<Vec<EisensteinBasisElement>> {
    let prim = chi.primitive_version();
    if prim.modulus() == 1 {
        let e = eisenstein_normalized(k, &prim, q)?;
        return Ok(vec![EisensteinBasisElement {
            k,
            chi1: prim.clone(),
            chi2: prim,
            t: 1,
            kind: BasisKind::Normalized,
            series: e.series,
            diagnostics: e.diagnostics,
        }]);
    }
    basis_enumeration(k, prim.modulus(), &prim, q)
}

/// Default q-precision max(200, 4k).
pub fn default_precision(k: u32) -> usize {
    200.max(4 * k as usize)
}
