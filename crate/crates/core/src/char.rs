//! Dirichlet characters stored as exponents against fixed unit-group generators.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use crate::arith;
use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};

/// One prime-power factor of the modulus and its discrete-log table.
#[derive(Debug)]
struct Component {
    p: u64,
    e: u32,
    q: u64,
    /// Index of the first generator belonging to this component.
    first_gen: usize,
    /// For each residue mod q: the exponents of its local generators, if a unit.
    dlog: Vec<Option<(u32, u32)>>,
}

/// Generators of (Z/N)^x with their orders, one or two per prime power,
/// each lifted by CRT to be 1 on the other prime-power factors.
#[derive(Debug)]
pub struct UnitGroupStructure {
    modulus: u64,
    generators: Vec<(u64, u64)>,
    is_cyclic: bool,
    components: Vec<Component>,
}

fn structure_cache() -> &'static RwLock<HashMap<u64, Arc<UnitGroupStructure>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<UnitGroupStructure>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Deterministic generators of (Z/N)^x, cached per modulus.
pub fn unit_group_generators(n: u64) -> Arc<UnitGroupStructure> {
    assert!(n >= 1, "modulus must be positive");
    if let Some(s) = structure_cache().read().unwrap().get(&n) {
        return s.clone();
    }
    let s = Arc::new(UnitGroupStructure::build(n));
    structure_cache().write().unwrap().insert(n, s.clone());
    s
}

impl UnitGroupStructure {
    fn build(n: u64) -> Self {
        let mut generators = Vec::new();
        let mut components = Vec::new();
        for (p, e) in arith::factorize(n) {
            let q = p.pow(e);
            let rest = n / q;
            let lift = |g: u64| if rest == 1 { g % q } else { arith::crt(g % q, q, 1, rest) };
            let first_gen = generators.len();
            let mut dlog = vec![None; q as usize];
            if p == 2 && e >= 3 {
                let ord3 = q / 4;
                generators.push((lift(q - 1), 2));
                generators.push((lift(3), ord3));
                let mut x = 1u64;
                for t in 0..ord3 {
                    dlog[x as usize] = Some((0, t as u32));
                    dlog[(q - x) as usize] = Some((1, t as u32));
                    x = x * 3 % q;
                }
            } else if q > 2 {
                let g = arith::primitive_root_prime_power(p, e);
                let ord = arith::euler_phi(q);
                generators.push((lift(g), ord));
                let mut x = 1u64;
                for t in 0..ord {
                    dlog[x as usize] = Some((t as u32, 0));
                    x = x * g % q;
                }
            } else {
                // q = 2: trivial group
                dlog[1] = Some((0, 0));
            }
            components.push(Component { p, e, q, first_gen, dlog });
        }
        let is_cyclic = generators.len() <= 1;
        UnitGroupStructure { modulus: n, generators, is_cyclic, components }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Pairs (residue mod N, order).
    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    pub fn is_cyclic(&self) -> bool {
        self.is_cyclic
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|g| g.1).product()
    }

    /// Exponent of the unit group: lcm of generator orders.
    pub fn exponent(&self) -> u64 {
        self.generators.iter().fold(1, |acc, g| arith::lcm(acc, g.1))
    }

    /// Exponents of a over the generators, or None when gcd(a, N) > 1.
    pub fn discrete_log(&self, a: i64) -> Option<Vec<u64>> {
        let a = arith::rem_euclid(a, self.modulus);
        if arith::gcd(a, self.modulus) != 1 {
            return None;
        }
        let mut out = vec![0u64; self.generators.len()];
        for c in &self.components {
            let (x, y) = c.dlog[(a % c.q) as usize]?;
            let local = self.local_gen_count(c);
            if local >= 1 {
                out[c.first_gen] = x as u64;
            }
            if local == 2 {
                out[c.first_gen + 1] = y as u64;
            }
        }
        Some(out)
    }

    fn local_gen_count(&self, c: &Component) -> usize {
        if c.p == 2 && c.e >= 3 {
            2
        } else if c.q > 2 {
            1
        } else {
            0
        }
    }

    /// Prime-power factors (p, e) with the generator index range for each.
    pub fn prime_power_blocks(&self) -> Vec<(u64, u32, std::ops::Range<usize>)> {
        self.components
            .iter()
            .map(|c| (c.p, c.e, c.first_gen..c.first_gen + self.local_gen_count(c)))
            .collect()
    }
}

/// Finite-order character of (Z/N)^x: chi(g_i) = zeta_n^{e_i} with n the
/// exact image order.
#[derive(Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    exponents: Vec<u64>,
    conductor: u64,
    group: Arc<UnitGroupStructure>,
}

impl PartialEq for DirichletCharacter {
    // order and exponents are canonical once reduced, so this is pointwise equality
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.order == other.order && self.exponents == other.exponents
    }
}
impl Eq for DirichletCharacter {}

impl std::hash::Hash for DirichletCharacter {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.order.hash(state);
        self.exponents.hash(state);
    }
}

impl DirichletCharacter {
    /// chi(g_i) = zeta_n^{exps[i]} for the generators of (Z/N)^x.
    /// The stored image order is reduced to the exact order.
    pub fn new(modulus: u64, n: u64, exps: &[i64]) -> Result<Self> {
        if modulus == 0 || n == 0 {
            return Err(Error::InvalidArgument("modulus and order must be positive".into()));
        }
        let group = unit_group_generators(modulus);
        if exps.len() != group.generators.len() {
            return Err(Error::InvalidArgument(format!(
                "modulus {modulus} has {} generators, got {} exponents",
                group.generators.len(),
                exps.len()
            )));
        }
        let mut e: Vec<u64> = exps.iter().map(|&x| arith::rem_euclid(x, n)).collect();
        for (ei, (_, ord)) in e.iter().zip(group.generators.iter()) {
            if !(*ei as u128 * *ord as u128).is_multiple_of(n as u128) {
                return Err(Error::InvalidArgument(format!(
                    "exponent {ei}/{n} is incompatible with a generator of order {ord}"
                )));
            }
        }
        let g = e.iter().fold(n, |acc, &x| arith::gcd(acc, x));
        let order = n / g;
        for x in &mut e {
            *x /= g;
        }
        let mut chi = DirichletCharacter { modulus, order, exponents: e, conductor: 0, group };
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    pub fn trivial(modulus: u64) -> Self {
        let k = unit_group_generators(modulus).generators.len();
        Self::new(modulus, 1, &vec![0; k]).unwrap()
    }

    /// All phi(N) characters modulo N in lexicographic exponent order.
    pub fn all(modulus: u64) -> Vec<Self> {
        let group = unit_group_generators(modulus);
        let l = group.exponent();
        let orders: Vec<u64> = group.generators.iter().map(|g| g.1).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u64; orders.len()];
        loop {
            let exps: Vec<i64> = cur
                .iter()
                .zip(&orders)
                .map(|(&c, &o)| (c * (l / o)) as i64)
                .collect();
            out.push(Self::new(modulus, l, &exps).unwrap());
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < orders[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Primitive characters of conductor exactly `modulus`.
    pub fn primitive(modulus: u64) -> Vec<Self> {
        Self::all(modulus).into_iter().filter(|c| c.is_primitive()).collect()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Exact order n of the image; values lie in Q(zeta_n).
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn group(&self) -> &UnitGroupStructure {
        &self.group
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    /// Exponent e with chi(a) = zeta_n^e, or None if gcd(a, N) > 1.
    pub fn exponent_of(&self, a: i64) -> Option<u64> {
        let logs = self.group.discrete_log(a)?;
        let n = self.order as u128;
        let s = logs
            .iter()
            .zip(&self.exponents)
            .fold(0u128, |acc, (&l, &e)| (acc + l as u128 * e as u128) % n);
        Some(s as u64)
    }

    /// chi(a) in Q(zeta_n), n the image order.
    pub fn value(&self, a: i64) -> CyclotomicNumber {
        self.value_in(a, self.order)
    }

    /// chi(a) in Q(zeta_m) for a multiple m of the image order.
    pub fn value_in(&self, a: i64, m: u64) -> CyclotomicNumber {
        assert!(m.is_multiple_of(self.order), "ring Q(zeta_{m}) does not contain the values");
        match self.exponent_of(a) {
            None => CyclotomicNumber::zero(m),
            Some(e) => CyclotomicNumber::root_of_unity(m, (e * (m / self.order)) as i64),
        }
    }

    /// chi(-1) as +1 or -1.
    pub fn parity(&self) -> i32 {
        match self.exponent_of(-1) {
            Some(0) => 1,
            _ => -1,
        }
    }

    /// True when (-1)^k = chi(-1).
    pub fn parity_matches(&self, k: u32) -> bool {
        (if k.is_multiple_of(2) { 1 } else { -1 }) == self.parity()
    }

    pub fn inverse(&self) -> Self {
        let e: Vec<i64> = self.exponents.iter().map(|&x| -(x as i64)).collect();
        Self::new(self.modulus, self.order, &e).unwrap()
    }

    /// Pointwise product of two characters with the same modulus.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::InvalidArgument(format!(
                "characters of moduli {} and {} cannot be multiplied",
                self.modulus, other.modulus
            )));
        }
        let l = arith::lcm(self.order, other.order);
        let (s, t) = (l / self.order, l / other.order);
        let e: Vec<i64> = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(&a, &b)| (a * s + b * t) as i64)
            .collect();
        Self::new(self.modulus, l, &e)
    }

    /// The character mod m (a multiple of the modulus) that this one induces.
    pub fn extend(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.modulus) {
            return Err(Error::InvalidArgument(format!("{} does not divide {m}", self.modulus)));
        }
        let group = unit_group_generators(m);
        let e: Vec<i64> = group
            .generators
            .iter()
            .map(|&(g, _)| self.exponent_of(g as i64).expect("generator is a unit") as i64)
            .collect();
        Self::new(m, self.order, &e)
    }

    /// The character mod f (a divisor of the modulus through which this one factors).
    pub fn restrict_to(&self, f: u64) -> Result<Self> {
        if !self.modulus.is_multiple_of(f) || !f.is_multiple_of(self.conductor) {
            return Err(Error::InvalidArgument(format!(
                "character of conductor {} does not factor through {f}",
                self.conductor
            )));
        }
        let group = unit_group_generators(f);
        let e: Vec<i64> = group
            .generators
            .iter()
            .map(|&(g, _)| self.exponent_of(lift_unit(g, f, self.modulus) as i64).unwrap() as i64)
            .collect();
        Self::new(f, self.order, &e)
    }

    /// The primitive character inducing this one.
    pub fn primitive_version(&self) -> Self {
        self.restrict_to(self.conductor).unwrap()
    }

    fn compute_conductor(&self) -> u64 {
        let mut f = 1u64;
        for block in self.group.prime_power_blocks() {
            let (p, e, range) = block;
            let q = p.pow(e);
            let rest = self.modulus / q;
            let mut c = e;
            // smallest c with chi trivial on {x = 1 mod p^c} inside this factor
            for cand in 0..=e {
                let step = p.pow(cand);
                let trivial = (0..q / step).all(|j| {
                    let x = (1 + j * step) % q;
                    if arith::gcd(x, p) != 1 {
                        return true;
                    }
                    let full = if rest == 1 { x } else { arith::crt(x, q, 1, rest) };
                    let logs = self.group.discrete_log(full as i64).unwrap();
                    let s = range
                        .clone()
                        .fold(0u128, |acc, i| acc + logs[i] as u128 * self.exponents[i] as u128);
                    s % self.order as u128 == 0
                });
                if trivial {
                    c = cand;
                    break;
                }
            }
            f *= p.pow(c);
        }
        f
    }

    /// Restriction to the prime-power factor p^e of the modulus, as a character mod p^e.
    fn local_part(&self, p: u64) -> (u64, Vec<i64>, Vec<i64>) {
        let mut local = Vec::new();
        let mut other = Vec::new();
        let mut q = 1;
        for (bp, be, range) in self.group.prime_power_blocks() {
            for i in range {
                if bp == p {
                    local.push(self.exponents[i] as i64);
                } else {
                    other.push(self.exponents[i] as i64);
                }
            }
            if bp == p {
                q = bp.pow(be);
            }
        }
        (q, local, other)
    }
}

/// Smallest integer congruent to g mod f and coprime to m.
fn lift_unit(g: u64, f: u64, m: u64) -> u64 {
    let mut a = g % f;
    if f == 1 {
        a = 1;
    }
    while arith::gcd(a, m) != 1 {
        a += f;
    }
    a
}

/// chi(a); zero for non-units.
pub fn char_value(chi: &DirichletCharacter, a: i64) -> CyclotomicNumber {
    chi.value(a)
}

pub fn conductor(chi: &DirichletCharacter) -> u64 {
    chi.conductor()
}

/// Splits a primitive chi of conductor p^v N' into (chi_p mod p^v, chi' mod N').
pub fn factor_p_part(chi: &DirichletCharacter, p: u64) -> Result<(DirichletCharacter, DirichletCharacter)> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus, conductor: chi.conductor });
    }
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let (q, local, other) = chi.local_part(p);
    let chi_p = DirichletCharacter::new(q, chi.order, &local)?;
    let chi_prime = DirichletCharacter::new(chi.modulus / q, chi.order, &other)?;
    Ok((chi_p, chi_prime))
}

/// The (p-1)-st root of unity in Z/p^M congruent to a mod p; for p = 2 the
/// value +-1 determined by a mod 4.
pub fn teichmuller(p: u64, a: i64, m: u32) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidArgument(format!("{a} is divisible by {p}")));
    }
    let modulus = arith::big_pow(p, m);
    if p == 2 {
        let v = if a.rem_euclid(4) == 1 { BigInt::from(1) } else { &modulus - 1 };
        return Ok(arith::big_mod(&v, &modulus));
    }
    let mut x = arith::big_mod(&BigInt::from(a), &modulus);
    let pb = BigInt::from(p);
    loop {
        let next = x.modpow(&pb, &modulus);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

/// Number of irreducible factors of Phi_n over Q_p.
pub fn p_adic_factor_count(n: u64, p: u64) -> u64 {
    let (_, n_prime) = arith::split_p(n, p);
    if n_prime == 1 {
        return 1;
    }
    arith::euler_phi(n_prime) / arith::mult_order(p % n_prime, n_prime)
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(|x| x.to_string()).collect();
        write!(f, "{}:{}:[{}]", self.modulus, self.order, e.join(","))
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi({self}, cond {})", self.conductor)
    }
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    /// Parses the canonical form `N:n:[e1,...,ek]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected N:n:[e1,...,ek], got {s:?}"));
        let mut parts = s.trim().splitn(3, ':');
        let modulus: u64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let order: u64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let list = parts.next().ok_or_else(bad)?.trim();
        let inner = list.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
        let exps: Vec<i64> = if inner.trim().is_empty() {
            vec![]
        } else {
            inner
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        DirichletCharacter::new(modulus, order, &exps)
    }
}

impl serde::Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
