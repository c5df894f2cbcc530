//! Maximal congruences f(q) in 1 + I q[[q]] over spans of Eisenstein series.
//!
//! Everything is computed per factor sigma of Z[zeta_n] (x) Z_p and
//! reassembled into a global ideal containing p^M. Valuations at or above
//! e * M are indistinguishable from zero at the working precision.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith;
use crate::char::DirichletCharacter;
use crate::cyclo::ideal::IdealBuilder;
use crate::cyclo::{CyclotomicNumber, IdealHNF, LocalRing};
use crate::eisenstein::{EisensteinBasisElement, QSeries};
use crate::error::{Error, Result};

/// The combination realizing a congruence in one local factor.
#[derive(Clone, Debug, Serialize)]
pub struct FactorWitness {
    pub factor: usize,
    /// Coefficients against the input series; the combination has constant term 1.
    pub coefficients: Vec<CyclotomicNumber>,
    /// Minimal valuation of the q-coefficients before clamping into [0, e M].
    pub raw_valuation: i64,
    pub stabilization_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceResult {
    pub ideal: IdealHNF,
    /// Exponent of the ideal in each local factor.
    pub exponents: Vec<i64>,
    pub stabilization_index: usize,
    pub precision: usize,
    pub p_precision: u32,
    /// Stabilization happened within the first half of the q-expansion.
    pub confirmed: bool,
    /// Every checked coefficient vanished modulo p^M.
    pub trivial_to_precision: bool,
    pub witness: Vec<FactorWitness>,
    pub diagnostics: Vec<String>,
}

impl CongruenceResult {
    /// The ideal exceeds the working precision in no factor.
    pub fn is_unit(&self) -> bool {
        self.ideal.is_unit()
    }
}

/// Ideal generated by a_1..a_Q and p^M after scaling f to constant term 1.
pub fn series_congruence_ideal(f: &QSeries, p: u64, m: u32) -> Result<CongruenceResult> {
    let n = f.n();
    let ring = LocalRing::new(n, p, m)?;
    if f.coeffs().iter().any(|c| arith::val_p_big(c.denominator(), p) > 0) {
        return Err(Error::InvalidArgument(format!("series is not {p}-integral")));
    }
    let c0 = f.constant();
    if c0.is_zero() || ring.valuations(c0).iter().any(|&v| v != 0) {
        return Err(Error::NonUnitConstant(p));
    }
    let inv = c0.inverse()?;
    let pm = arith::big_pow(p, m);
    let mut builder = IdealBuilder::new(n, pm.clone());
    let mut norms = Vec::with_capacity(f.precision());
    for a in &f.coeffs()[1..] {
        let scaled = a * &inv;
        let coords = scaled.reduce_mod(&pm).ok_or(Error::NonUnitConstant(p))?;
        for row in CyclotomicNumber::from_coords(n, coords).multiplication_matrix() {
            builder.add_vector(&row);
        }
        norms.push(builder.norm());
    }
    let ideal = builder.finish();
    let final_norm = ideal.norm().clone();
    let full = num_traits::pow(pm.clone(), arith::euler_phi(n) as usize);
    let trivial = final_norm == full;
    let stab = if trivial {
        0
    } else {
        norms.iter().position(|x| *x == final_norm).map_or(0, |i| i + 1)
    };
    let exponents = ring.exponents_of_ideal(&ideal);
    let mut diagnostics = Vec::new();
    if trivial {
        diagnostics.push("trivial to working precision".into());
    }
    let q = f.precision();
    Ok(CongruenceResult {
        ideal,
        exponents,
        stabilization_index: stab,
        precision: q,
        p_precision: m,
        confirmed: stab <= q / 2,
        trivial_to_precision: trivial,
        witness: vec![],
        diagnostics,
    })
}

struct Row {
    values: Vec<CyclotomicNumber>,
    coefs: Vec<CyclotomicNumber>,
}

impl Row {
    fn is_zero(&self) -> bool {
        self.values.iter().all(|c| c.is_zero())
    }

    fn scale(&mut self, c: &CyclotomicNumber) {
        for v in self.values.iter_mut().chain(self.coefs.iter_mut()) {
            if !v.is_zero() {
                *v = &*v * c;
            }
        }
    }

    /// self -= c * other
    fn axpy(&mut self, c: &CyclotomicNumber, other: &Row) {
        for (a, b) in self.values.iter_mut().zip(&other.values).chain(self.coefs.iter_mut().zip(&other.coefs)) {
            if !b.is_zero() {
                *a = &*a - &(c * b);
            }
        }
    }
}

/// Best e_sigma over {f in span : f_0 = 1} in one factor, by elimination
/// pivoting on the entry of least valuation.
fn search_factor(ring: &LocalRing, sigma: usize, w: &Row, others: &[Row]) -> FactorWitness {
    let cap = ring.cap();
    let p_m = CyclotomicNumber::from_int(ring.n(), arith::big_pow(ring.p(), ring.precision()));
    let p_m_inv = p_m.inverse().expect("nonzero");
    let val = |x: &CyclotomicNumber| ring.val_factor(sigma, x);
    let mut w = Row { values: w.values.clone(), coefs: w.coefs.clone() };
    let mut active: Vec<Row> = others
        .iter()
        .filter(|r| !r.is_zero())
        .map(|r| Row { values: r.values.clone(), coefs: r.coefs.clone() })
        .collect();
    let mut done: Vec<(usize, Row)> = Vec::new();
    let mut vals: Vec<Vec<i64>> = Vec::new();
    let refresh = |row: &mut Row| -> Vec<i64> {
        // rescale so that the least valuation is visible below the cap
        loop {
            let v: Vec<i64> = row.values.iter().map(|x| if x.is_zero() { i64::MAX } else { val(x) }).collect();
            if v.iter().any(|&t| t < cap) {
                return v;
            }
            row.scale(&p_m_inv);
        }
    };
    for r in active.iter_mut() {
        vals.push(refresh(r));
    }
    while !active.is_empty() {
        let mut best: Option<(i64, usize, usize)> = None;
        for (ri, v) in vals.iter().enumerate() {
            for (ci, &t) in v.iter().enumerate() {
                if best.is_none_or(|b| (t, ci, ri) < (b.0, b.2, b.1)) {
                    best = Some((t, ri, ci));
                }
            }
        }
        let (_, ri, ci) = best.expect("active rows are nonzero");
        let mut pivot = active.remove(ri);
        vals.remove(ri);
        let inv = pivot.values[ci].inverse().expect("nonzero pivot");
        pivot.scale(&inv);
        let mut keep_rows = Vec::new();
        let mut keep_vals = Vec::new();
        for (mut r, v) in active.drain(..).zip(vals.drain(..)) {
            let c = r.values[ci].clone();
            if c.is_zero() {
                keep_rows.push(r);
                keep_vals.push(v);
                continue;
            }
            r.axpy(&c, &pivot);
            if !r.is_zero() {
                keep_vals.push(refresh(&mut r));
                keep_rows.push(r);
            }
        }
        active = keep_rows;
        vals = keep_vals;
        for (_, r) in done.iter_mut() {
            let c = r.values[ci].clone();
            if !c.is_zero() {
                r.axpy(&c, &pivot);
            }
        }
        let c = w.values[ci].clone();
        if !c.is_zero() {
            w.axpy(&c, &pivot);
        }
        done.push((ci, pivot));
    }
    let wv: Vec<i64> = w.values.iter().map(|x| if x.is_zero() { cap } else { val(x) }).collect();
    let raw = wv.iter().copied().min().unwrap_or(cap);
    let target = raw.clamp(0, cap);
    let mut running = cap;
    let mut stab = 0;
    for (i, &v) in wv.iter().enumerate() {
        running = running.min(v);
        if running.clamp(0, cap) == target {
            stab = i + 1;
            break;
        }
    }
    if target == cap {
        stab = 0;
    }
    FactorWitness { factor: sigma, coefficients: w.coefs, raw_valuation: raw, stabilization_index: stab }
}

/// Smallest coefficient ideal over normalized combinations of the series.
pub fn max_congruence_search_series(series: &[QSeries], p: u64, m: u32) -> Result<CongruenceResult> {
    let first = series.first().ok_or_else(|| Error::InvalidArgument("empty basis".into()))?;
    let n = first.n();
    let q = first.precision();
    if let Some(s) = series.iter().find(|s| s.n() != n) {
        return Err(Error::RingMismatch(n, s.n()));
    }
    if series.iter().any(|s| s.precision() != q) {
        return Err(Error::InvalidArgument("series have different precisions".into()));
    }
    let ring = LocalRing::new(n, p, m)?;
    let k = series.len();
    let unit_vec = |i: usize| -> Vec<CyclotomicNumber> {
        (0..k).map(|j| if i == j { CyclotomicNumber::one(n) } else { CyclotomicNumber::zero(n) }).collect()
    };
    let mut diagnostics = Vec::new();
    let Some(pi) = series.iter().position(|s| !s.constant().is_zero()) else {
        diagnostics.push("no series in the span has a nonzero constant term".into());
        let factors = ring.factor_count();
        return Ok(CongruenceResult {
            ideal: IdealHNF::unit(n),
            exponents: vec![0; factors],
            stabilization_index: 0,
            precision: q,
            p_precision: m,
            confirmed: true,
            trivial_to_precision: false,
            witness: vec![],
            diagnostics,
        });
    };
    let c0inv = series[pi].constant().inverse()?;
    let mut w = Row { values: series[pi].coeffs()[1..].to_vec(), coefs: unit_vec(pi) };
    w.scale(&c0inv);
    let others: Vec<Row> = series
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pi)
        .map(|(i, s)| {
            let mut r = Row { values: s.coeffs()[1..].to_vec(), coefs: unit_vec(i) };
            let c = s.constant().clone();
            if !c.is_zero() {
                r.axpy(&c, &w);
            }
            r
        })
        .collect();
    let witness: Vec<FactorWitness> = (0..ring.factor_count())
        .map(|sigma| search_factor(&ring, sigma, &w, &others))
        .collect();
    let exponents: Vec<i64> = witness.iter().map(|f| f.raw_valuation.clamp(0, ring.cap())).collect();
    for f in &witness {
        if f.raw_valuation < 0 {
            diagnostics.push(format!(
                "factor {}: no integral normalized combination (valuation {})",
                f.factor, f.raw_valuation
            ));
        }
    }
    let ideal = ring.ideal_from_exponents(&exponents);
    let stab = witness.iter().map(|f| f.stabilization_index).max().unwrap_or(0);
    let trivial = exponents.iter().all(|&e| e == ring.cap());
    if trivial {
        diagnostics.push("trivial to working precision".into());
    }
    Ok(CongruenceResult {
        ideal,
        exponents,
        stabilization_index: stab,
        precision: q,
        p_precision: m,
        confirmed: stab <= q / 2,
        trivial_to_precision: trivial,
        witness,
        diagnostics,
    })
}

/// Search over an Eisenstein basis; `target`, when given, is reported on.
pub fn max_congruence_search(
    basis: &[EisensteinBasisElement],
    p: u64,
    target: Option<&IdealHNF>,
    m: u32,
) -> Result<CongruenceResult> {
    let series: Vec<QSeries> = basis.iter().map(|b| b.series.clone()).collect();
    let mut res = max_congruence_search_series(&series, p, m)?;
    for b in basis {
        res.diagnostics.extend(b.diagnostics.iter().cloned());
    }
    if let Some(t) = target {
        let t = t.extend_to(res.ideal.n())?;
        if t != res.ideal {
            res.diagnostics.push("differs from the target ideal".into());
        }
    }
    Ok(res)
}

/// Outcome of checking the factorization of a_n = sum_{d|n} (chi^{-1}(n/d) - chi(d)) d^{k-1}.
#[derive(Clone, Debug, Serialize)]
pub struct AnReport {
    pub checked: usize,
    pub closed_form_mismatches: Vec<u64>,
    pub outside_maximal_ideal: Vec<u64>,
}

impl AnReport {
    pub fn ok(&self) -> bool {
        self.closed_form_mismatches.is_empty() && self.outside_maximal_ideal.is_empty()
    }
}

/// Checks a_n = (chi^{-1}(n') l^{v(k-1)} - 1) sum_{d|n'} chi(d) d^{k-1} for
/// n = l^v n' and a_n in (1 - zeta_{p^m}), for 1 <= n <= Q.
pub fn verify_an_factorization(k: u32, chi: &DirichletCharacter, p: u64, q: usize) -> Result<AnReport> {
    let l = chi.modulus();
    if !chi.is_primitive() || !arith::is_prime(l) || l == p {
        return Err(Error::Hypothesis(format!("conductor must be a prime other than {p}")));
    }
    let order = chi.order();
    if order == 1 || !arith::is_power_of(order, p) {
        return Err(Error::Hypothesis(format!("image order {order} is not a power of {p} above 1")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    let varpi = &CyclotomicNumber::one(order) - &CyclotomicNumber::root_of_unity(order, 1);
    let maximal = IdealHNF::principal(&varpi)?;
    let inv = chi.inverse();
    let pow = |d: u64, e: u64| CyclotomicNumber::from_int(order, num_traits::pow(BigInt::from(d), e as usize));
    let mut report = AnReport { checked: q, closed_form_mismatches: vec![], outside_maximal_ideal: vec![] };
    for n in 1..=q as u64 {
        let mut direct = CyclotomicNumber::zero(order);
        for d in arith::divisors(n) {
            let term = &inv.value((n / d) as i64) - &chi.value(d as i64);
            if !term.is_zero() {
                direct = &direct + &(&term * &pow(d, (k - 1) as u64));
            }
        }
        let v = arith::val_p(n, l);
        let n_prime = n / l.pow(v);
        let mut sigma = CyclotomicNumber::zero(order);
        for d in arith::divisors(n_prime) {
            sigma = &sigma + &(&chi.value(d as i64) * &pow(d, (k - 1) as u64));
        }
        let lv = pow(l, v as u64 * (k - 1) as u64);
        let factor = &(&inv.value(n_prime as i64) * &lv) - &CyclotomicNumber::one(order);
        let closed = &factor * &sigma;
        if closed != direct {
            report.closed_form_mismatches.push(n);
        }
        if !maximal.contains(&direct)? {
            report.outside_maximal_ideal.push(n);
        }
    }
    Ok(report)
}

/// Exact comparison helper: both ideals extended to the ring of the larger conductor.
pub fn ideals_equal(a: &IdealHNF, b: &IdealHNF) -> Result<bool> {
    let m = arith::lcm(a.n(), b.n());
    Ok(a.extend_to(m)? == b.extend_to(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::{eisenstein_normalized, eisenstein_space_basis};

    #[test]
    fn level_one_series() {
        let triv = DirichletCharacter::trivial(1);
        let e4 = eisenstein_normalized(4, &triv, 200).unwrap().series;
        let r = series_congruence_ideal(&e4, 5, 12).unwrap();
        assert_eq!(r.ideal, IdealHNF::from_int(1, 5));
        assert_eq!(r.stabilization_index, 1);
        assert!(r.confirmed);
        let e6 = eisenstein_normalized(6, &triv, 200).unwrap().series;
        assert_eq!(series_congruence_ideal(&e6, 7, 12).unwrap().ideal, IdealHNF::from_int(1, 7));
        let mut c = vec![CyclotomicNumber::zero(1); 11];
        c[0] = CyclotomicNumber::one(1);
        let one = QSeries::from_coeffs(1, c).unwrap();
        let r = series_congruence_ideal(&one, 5, 12).unwrap();
        assert!(r.trivial_to_precision);
        assert_eq!(r.ideal, IdealHNF::from_int(1, arith::big_pow(5, 12)));
    }

    #[test]
    fn non_unit_constant_rejected() {
        let mut c = vec![CyclotomicNumber::zero(1); 5];
        c[0] = CyclotomicNumber::from_int(1, 5);
        c[1] = CyclotomicNumber::one(1);
        let f = QSeries::from_coeffs(1, c).unwrap();
        assert_eq!(series_congruence_ideal(&f, 5, 6).unwrap_err(), Error::NonUnitConstant(5));
    }

    #[test]
    fn single_element_search_matches_series_ideal() {
        let triv = DirichletCharacter::trivial(1);
        let basis = eisenstein_space_basis(4, &triv, 200).unwrap();
        let r = max_congruence_search(&basis, 5, None, 12).unwrap();
        assert_eq!(r.ideal, IdealHNF::from_int(1, 5));
    }

    #[test]
    fn order_five_mod_eleven() {
        let chi: DirichletCharacter = "11:5:[1]".parse().unwrap();
        let varpi = &CyclotomicNumber::one(5) - &CyclotomicNumber::root_of_unity(5, 1);
        let m_ideal = IdealHNF::principal(&varpi).unwrap()
            .add(&IdealHNF::from_int(5, arith::big_pow(5, 12))).unwrap();
        let basis = eisenstein_space_basis(4, &chi, 200).unwrap();
        let r = max_congruence_search(&basis, 5, None, 12).unwrap();
        assert_eq!(r.ideal, m_ideal);
        let basis = eisenstein_space_basis(2, &chi, 200).unwrap();
        let r = max_congruence_search(&basis, 5, None, 12).unwrap();
        assert!(r.ideal.is_unit());
    }

    #[test]
    fn an_factorization_small() {
        let chi: DirichletCharacter = "11:5:[1]".parse().unwrap();
        let rep = verify_an_factorization(4, &chi, 5, 60).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert!(verify_an_factorization(4, &chi, 3, 10).is_err());
    }
}
