//! The completion Z[zeta_n] (x) Z_p as a product of complete local rings.
//!
//! With n = p^s n' and p not dividing n', the algebra splits into one factor
//! per irreducible factor of Phi_{n'} mod p. Each factor is totally ramified
//! of degree phi(p^s) over an unramified ring, with uniformizer 1 - zeta_{p^s}
//! (or p when s = 0). No embedding into C_p is chosen: factors are indexed by
//! orthogonal idempotents, ordered deterministically.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ideal::IdealBuilder;
use super::{cyclotomic_poly, CyclotomicNumber, IdealHNF};
use crate::arith;
use crate::error::{Error, Result};

/// Extra p-adic digits carried by idempotents beyond the working precision.
const GUARD_DIGITS: u32 = 24;

#[derive(Debug)]
pub struct LocalRing {
    n: u64,
    p: u64,
    m: u32,
    w: u32,
    s: u32,
    n_prime: u64,
    ram: u32,
    residue_degree: u32,
    pw: BigInt,
    idempotents: Vec<CyclotomicNumber>,
    varpi: CyclotomicNumber,
    /// u with varpi * u = p; 1 when s = 0.
    cofactor: CyclotomicNumber,
    /// Idempotents lifted to higher precision on demand, keyed by digits.
    deep: RwLock<HashMap<u32, Arc<Vec<CyclotomicNumber>>>>,
}

impl Clone for LocalRing {
    fn clone(&self) -> Self {
        LocalRing {
            n: self.n,
            p: self.p,
            m: self.m,
            w: self.w,
            s: self.s,
            n_prime: self.n_prime,
            ram: self.ram,
            residue_degree: self.residue_degree,
            pw: self.pw.clone(),
            idempotents: self.idempotents.clone(),
            varpi: self.varpi.clone(),
            cofactor: self.cofactor.clone(),
            deep: RwLock::new(HashMap::new()),
        }
    }
}

impl LocalRing {
    /// Working precision m (ideals contain p^m); idempotents carry m + 24 digits.
    pub fn new(n: u64, p: u64, m: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        let (s, n_prime) = arith::split_p(n, p);
        let w = m + GUARD_DIGITS;
        let pw = arith::big_pow(p, w);
        let ram = arith::euler_phi(p.pow(s)) as u32;
        let residue_degree = arith::mult_order(p % n_prime.max(2), n_prime) as u32;
        let idempotents = lifted_idempotents(n_prime, p, w, &pw)
            .into_iter()
            .map(|e| e.embed(n).expect("n' divides n"))
            .collect();
        let (varpi, cofactor) = if s == 0 {
            (CyclotomicNumber::from_int(n, p), CyclotomicNumber::one(n))
        } else {
            let ps = p.pow(s);
            let step = (n / ps) as i64;
            let one = CyclotomicNumber::one(n);
            let varpi = &one - &CyclotomicNumber::root_of_unity(n, step);
            let mut u = one.clone();
            for a in 2..ps {
                if a % p != 0 {
                    u = &u * &(&one - &CyclotomicNumber::root_of_unity(n, step * a as i64));
                }
            }
            (varpi, u)
        };
        debug_assert_eq!(&varpi * &cofactor, CyclotomicNumber::from_int(n, p));
        Ok(LocalRing {
            n,
            p,
            m,
            w,
            s,
            n_prime,
            ram,
            residue_degree,
            pw,
            idempotents,
            varpi,
            cofactor,
            deep: RwLock::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn factor_count(&self) -> usize {
        self.idempotents.len()
    }

    /// Ramification index e = phi(p^s) of every factor.
    pub fn ramification(&self) -> u32 {
        self.ram
    }

    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    pub fn p_exponent(&self) -> u32 {
        self.s
    }

    pub fn prime_to_p_part(&self) -> u64 {
        self.n_prime
    }

    pub fn uniformizer(&self) -> &CyclotomicNumber {
        &self.varpi
    }

    pub fn idempotents(&self) -> &[CyclotomicNumber] {
        &self.idempotents
    }

    /// Valuation cap: p^m has valuation e * m in every factor.
    pub fn cap(&self) -> i64 {
        (self.ram * self.m) as i64
    }

    fn reduce(&self, x: &CyclotomicNumber, modulus: &BigInt) -> CyclotomicNumber {
        CyclotomicNumber::from_coords(self.n, x.numerator().iter().map(|c| arith::big_mod(c, modulus)).collect())
    }

    /// Count of exact divisions of an integral y by varpi, at most `cap`.
    /// `y` is only known modulo p^w; precision is tracked in varpi units.
    fn divide_out(&self, y: CyclotomicNumber, cap: i64, w: u32) -> i64 {
        let e = self.ram as i64;
        let mut prec = e * w as i64;
        let mut y = self.reduce(&y, &arith::big_pow(self.p, w));
        let pb = BigInt::from(self.p);
        let mut count = 0i64;
        while count < cap {
            if y.is_zero() {
                return cap;
            }
            let t = &y * &self.cofactor;
            if !t.numerator().iter().all(|c| c.is_multiple_of(&pb)) {
                break;
            }
            count += 1;
            prec -= 1;
            let digits = ((prec + e - 1) / e) as u32;
            let modulus = arith::big_pow(self.p, digits);
            let q = CyclotomicNumber::from_coords(self.n, t.numerator().iter().map(|c| c / &pb).collect());
            y = self.reduce(&q, &modulus);
        }
        count
    }

    /// Valuation of x in factor sigma, clamped above at `cap`; x may carry
    /// denominators (prime-to-p parts are units).
    pub fn val_factor_capped(&self, sigma: usize, x: &CyclotomicNumber, cap: i64) -> i64 {
        assert_eq!(x.n(), self.n, "element of another ring");
        if x.is_zero() {
            return cap;
        }
        let e = self.ram as i64;
        let shift = e * arith::val_p_big(x.denominator(), self.p) as i64;
        let int_cap = (cap + shift).max(0);
        // digits so that int_cap stays two uniformizer steps below the precision
        let w = (self.w as i64).max((int_cap + 2 * e + e - 1) / e + 1) as u32;
        let y = CyclotomicNumber::from_coords(self.n, x.numerator().to_vec());
        let y = self.isolate(sigma, &y, int_cap, w);
        (self.divide_out(y, int_cap, w) - shift).min(cap)
    }

    fn idempotents_at(&self, w: u32) -> Arc<Vec<CyclotomicNumber>> {
        if w <= self.w {
            return Arc::new(self.idempotents.clone());
        }
        if let Some(v) = self.deep.read().unwrap().get(&w) {
            return v.clone();
        }
        let pw = arith::big_pow(self.p, w);
        let v: Vec<CyclotomicNumber> = lifted_idempotents(self.n_prime, self.p, w, &pw)
            .into_iter()
            .map(|e| e.embed(self.n).expect("n' divides n"))
            .collect();
        let v = Arc::new(v);
        self.deep.write().unwrap().insert(w, v.clone());
        v
    }

    /// eps_sigma * y + (1 - eps_sigma) * varpi^cap, reduced mod p^w.
    fn isolate(&self, sigma: usize, y: &CyclotomicNumber, cap: i64, w: u32) -> CyclotomicNumber {
        let pw = arith::big_pow(self.p, w);
        if self.idempotents.len() == 1 {
            return self.reduce(y, &pw);
        }
        let idem = self.idempotents_at(w);
        let eps = &idem[sigma];
        let filler = &(&CyclotomicNumber::one(self.n) - eps) * &self.varpi.pow(cap.max(0) as u32);
        let y = self.reduce(y, &pw);
        self.reduce(&(&(eps * &y) + &filler), &pw)
    }

    pub fn val_factor(&self, sigma: usize, x: &CyclotomicNumber) -> i64 {
        self.val_factor_capped(sigma, x, self.cap())
    }

    /// Valuations in every factor, clamped at the default cap.
    pub fn valuations(&self, x: &CyclotomicNumber) -> Vec<i64> {
        (0..self.factor_count()).map(|s| self.val_factor(s, x)).collect()
    }

    /// The ideal (sum_sigma eps_sigma varpi^{e_sigma}, p^m); exponents are
    /// clamped into [0, e m].
    pub fn ideal_from_exponents(&self, exps: &[i64]) -> IdealHNF {
        assert_eq!(exps.len(), self.factor_count());
        let cap = self.cap();
        let mut gen = CyclotomicNumber::zero(self.n);
        for (eps, &e) in self.idempotents.iter().zip(exps) {
            let e = e.clamp(0, cap) as u32;
            gen = &gen + &(eps * &self.varpi.pow(e));
        }
        let gen = self.reduce(&gen, &self.pw);
        let mut b = IdealBuilder::new(self.n, arith::big_pow(self.p, self.m));
        b.add_element(&gen).expect("integral generator");
        b.finish()
    }

    /// Exponents e_sigma of an ideal containing p^m.
    pub fn exponents_of_ideal(&self, ideal: &IdealHNF) -> Vec<i64> {
        (0..self.factor_count())
            .map(|s| {
                ideal
                    .basis()
                    .iter()
                    .map(|row| self.val_factor(s, &CyclotomicNumber::from_coords(self.n, row.clone())))
                    .min()
                    .unwrap_or(self.cap())
            })
            .collect()
    }

    /// P_sigma^j as a global ideal containing p^m.
    pub fn prime_power(&self, sigma: usize, j: i64) -> IdealHNF {
        let mut exps = vec![0; self.factor_count()];
        exps[sigma] = j;
        self.ideal_from_exponents(&exps)
    }

    /// x reduced modulo p^m when its denominator is prime to p.
    pub fn reduce_mod_precision(&self, x: &CyclotomicNumber) -> Option<CyclotomicNumber> {
        let q = arith::big_pow(self.p, self.m);
        x.reduce_mod(&q).map(|c| CyclotomicNumber::from_coords(self.n, c))
    }
}

/// Primitive idempotents of Z_p[y]/Phi_{n'}(y) to precision p^w, as
/// elements of Q(zeta_{n'}) with integer coordinates.
fn lifted_idempotents(n_prime: u64, p: u64, w: u32, pw: &BigInt) -> Vec<CyclotomicNumber> {
    let phi = cyclotomic_poly(n_prime);
    let f: Vec<u64> = phi.iter().map(|c| arith::big_mod(c, &BigInt::from(p)).to_u64().unwrap()).collect();
    let modp = split_idempotents_mod_p(&f, p);
    let mut out: Vec<CyclotomicNumber> = modp
        .into_iter()
        .map(|e| {
            let mut x = CyclotomicNumber::from_coords(n_prime, e.into_iter().map(BigInt::from).collect());
            let three = BigInt::from(3);
            let two = BigInt::from(2);
            let mut iters = 0;
            loop {
                let x2 = &x * &x;
                let x3 = &x2 * &x;
                let next = &x2.scale_int(&three) - &x3.scale_int(&two);
                let next = CyclotomicNumber::from_coords(
                    n_prime,
                    next.numerator().iter().map(|c| arith::big_mod(c, pw)).collect(),
                );
                iters += 1;
                if next == x || iters > 2 * w + 8 {
                    break;
                }
                x = next;
            }
            x
        })
        .collect();
    out.sort_by(|a, b| a.numerator().cmp(b.numerator()));
    out
}

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Product modulo (f, p) with f monic.
fn polymulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let d = f.len() - 1;
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (d..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for j in 0..=d {
            prod[i - d + j] = (prod[i - d + j] + (p - c) * f[j] % p) % p;
        }
    }
    prod.truncate(d);
    poly_trim(prod)
}

fn polypowmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = polymulmod(&acc, &base, f, p);
        }
        base = polymulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

/// Berlekamp splitting of the squarefree algebra F_p[y]/f into primitive idempotents.
fn split_idempotents_mod_p(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let d = f.len() - 1;
    if d == 1 {
        return vec![vec![1]];
    }
    // rows: y^{p i} - y^i
    let yp = polypowmod(&[0, 1], p, f, p);
    let mut rows = Vec::with_capacity(d);
    let mut cur = vec![1u64];
    for i in 0..d {
        let mut r = cur.clone();
        r.resize(d, 0);
        r[i] = (r[i] + p - 1) % p;
        rows.push(r);
        cur = polymulmod(&cur, &yp, f, p);
    }
    let berlekamp = left_kernel_mod_p(&rows, d, p);
    let mut idems: Vec<Vec<u64>> = vec![vec![1]];
    for b in &berlekamp {
        if idems.len() == berlekamp.len() {
            break;
        }
        let b = poly_trim(b.clone());
        let mut next = Vec::new();
        for e in &idems {
            for lambda in 0..p {
                let mut shifted = b.clone();
                if shifted.is_empty() {
                    shifted.push(0);
                }
                shifted[0] = (shifted[0] + p - lambda) % p;
                let pw = polypowmod(&poly_trim(shifted), p - 1, f, p);
                // 1 - (b - lambda)^{p-1}
                let mut ind: Vec<u64> = pw.iter().map(|&c| (p - c) % p).collect();
                if ind.is_empty() {
                    ind.push(0);
                }
                ind[0] = (ind[0] + 1) % p;
                let piece = polymulmod(e, &poly_trim(ind), f, p);
                if !piece.is_empty() {
                    next.push(piece);
                }
            }
        }
        idems = next;
    }
    debug_assert_eq!(idems.len(), berlekamp.len());
    idems
}

/// Basis of {x : x * rows = 0} over F_p for a d x d matrix.
fn left_kernel_mod_p(rows: &[Vec<u64>], d: usize, p: u64) -> Vec<Vec<u64>> {
    // transpose, then ordinary right kernel by Gauss-Jordan
    let mut a: Vec<Vec<u64>> = (0..d).map(|j| (0..rows.len()).map(|i| rows[i][j]).collect()).collect();
    let cols = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = arith::inv_mod(a[r][c], p).unwrap();
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let t = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + (p - t) * a[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[ri][fc]) % p;
            }
            v
        })
        .collect()
}

/// Largest e with x in (varpi^e), varpi = 1 - zeta_{p^m}, extended to
/// fractions by v(y / D) = v(y) - v(D). None means x = 0.
pub fn pi_valuation(x: &CyclotomicNumber, p: u64, m: u32) -> Result<Option<i64>> {
    let n = x.n();
    let pm = p.pow(m);
    if m == 0 || !n.is_multiple_of(pm) {
        return Err(Error::InvalidArgument(format!(
            "Q(zeta_{n}) does not contain zeta_{pm}"
        )));
    }
    if x.is_zero() {
        return Ok(None);
    }
    let step = (n / pm) as i64;
    let one = CyclotomicNumber::one(n);
    let mut u = one.clone();
    for a in 2..pm {
        if a % p != 0 {
            u = &u * &(&one - &CyclotomicNumber::root_of_unity(n, step * a as i64));
        }
    }
    let pb = BigInt::from(p);
    let mut y = CyclotomicNumber::from_coords(n, x.numerator().to_vec());
    let mut v = 0i64;
    loop {
        let t = &y * &u;
        if !t.numerator().iter().all(|c| c.is_multiple_of(&pb)) {
            break;
        }
        y = CyclotomicNumber::from_coords(n, t.numerator().iter().map(|c| c / &pb).collect());
        v += 1;
    }
    let den_v = arith::val_p_big(x.denominator(), p) as i64;
    Ok(Some(v - den_v * arith::euler_phi(pm) as i64))
}

/// Integer helpers used by callers that work with rational p-adic valuations.
pub fn val_p_rational(num: &BigInt, den: &BigInt, p: u64) -> Option<i64> {
    if num.is_zero() {
        return None;
    }
    Some(arith::val_p_big(&num.abs(), p) as i64 - arith::val_p_big(&den.abs(), p) as i64)
}

#[allow(dead_code)]
fn is_one(x: &BigInt) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::super::cyc;
    use super::*;

    #[test]
    fn splitting_counts() {
        for (n, p) in [(5u64, 11u64), (5, 2), (12, 5), (7, 2), (13, 3), (6, 5), (1, 3), (4, 5), (11, 3)] {
            let r = LocalRing::new(n, p, 6).unwrap();
            assert_eq!(r.factor_count() as u64, crate::char::p_adic_factor_count(n, p), "n={n} p={p}");
        }
    }

    #[test]
    fn idempotents_are_orthogonal_and_complete() {
        let r = LocalRing::new(5, 11, 4).unwrap();
        let q = arith::big_pow(11, 4 + GUARD_DIGITS);
        let red = |x: &CyclotomicNumber| x.reduce_mod(&q).unwrap();
        let e = r.idempotents();
        let mut sum = CyclotomicNumber::zero(5);
        for (i, a) in e.iter().enumerate() {
            sum = &sum + a;
            for (j, b) in e.iter().enumerate() {
                let prod = red(&(a * b));
                if i == j {
                    assert_eq!(prod, red(a));
                } else {
                    assert!(prod.iter().all(|c| c.is_zero()));
                }
            }
        }
        assert_eq!(red(&sum), red(&CyclotomicNumber::one(5)));
    }

    #[test]
    fn valuations_of_uniformizer_and_p() {
        let r = LocalRing::new(5, 5, 8).unwrap();
        let varpi = r.uniformizer().clone();
        assert_eq!(r.valuations(&varpi), vec![1]);
        assert_eq!(r.valuations(&CyclotomicNumber::from_int(5, 5)), vec![4]);
        assert_eq!(r.valuations(&CyclotomicNumber::from_int(5, 0)), vec![r.cap()]);
        let half_fifth = CyclotomicNumber::from_int(5, 2).div_int(&BigInt::from(5));
        assert_eq!(r.valuations(&half_fifth), vec![-4]);
    }

    #[test]
    fn split_valuations_distinguish_primes() {
        // 11 splits in Q(zeta_5); N(zeta_5 - 3) = Phi_5(3) = 121 and zeta_5 - 3
        // lies in exactly one prime above 11
        let r = LocalRing::new(5, 11, 6).unwrap();
        let x = cyc(5, &[-3, 1]);
        let v = r.valuations(&x);
        assert_eq!(v.iter().filter(|&&t| t == 2).count(), 1);
        assert_eq!(v.iter().filter(|&&t| t == 0).count(), 3);
        let ideal = r.ideal_from_exponents(&v);
        assert_eq!(r.exponents_of_ideal(&ideal), v);
        // (zeta - 3, 11^6) has norm 11
        let direct = super::super::ideal_from_generators(5, &[x, CyclotomicNumber::from_int(5, arith::big_pow(11, 6))]).unwrap();
        assert_eq!(direct, ideal);
    }

    #[test]
    fn pi_valuation_examples() {
        let z = CyclotomicNumber::root_of_unity(5, 1);
        let varpi = &CyclotomicNumber::one(5) - &z;
        assert_eq!(pi_valuation(&varpi, 5, 1).unwrap(), Some(1));
        assert_eq!(pi_valuation(&CyclotomicNumber::from_int(5, 5), 5, 1).unwrap(), Some(4));
        assert_eq!(pi_valuation(&CyclotomicNumber::zero(5), 5, 1).unwrap(), None);
        assert!(pi_valuation(&varpi, 5, 2).is_err());
        let third = CyclotomicNumber::from_int(5, 1).div_int(&BigInt::from(25));
        assert_eq!(pi_valuation(&third, 5, 1).unwrap(), Some(-8));
    }
}
