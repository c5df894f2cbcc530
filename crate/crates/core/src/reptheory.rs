//! Maximal congruence of the rank-one representation
//! (a, b) -> chi_p(a) chi'(b) a^k of Z_p^x x (Z/N')^x.
//!
//! `predict_max_congruence` dispatches to the seven closed-form cases;
//! `oracle_max_congruence` evaluates 1 - rho(gen) on an explicit
//! topological generating set and takes the ideal they span with p^M.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith;
use crate::char::{factor_p_part, unit_group_generators, DirichletCharacter};
use crate::cyclo::ideal::IdealBuilder;
use crate::cyclo::{CyclotomicNumber, IdealHNF, LocalRing};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl CaseTag {
    pub const ALL: [CaseTag; 7] = [CaseTag::I, CaseTag::II, CaseTag::III, CaseTag::IV, CaseTag::V, CaseTag::VI, CaseTag::VII];
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruencePrediction {
    pub case_tag: CaseTag,
    pub p: u64,
    pub k: u32,
    /// Conductor of chi is p^v N'.
    pub v: u32,
    pub tame_level: u64,
    /// v_p of the image order of chi'.
    pub v_prime: u32,
    pub chi_p_order: u64,
    pub chi_prime_order: u64,
    /// The Teichmuller exponent a of chi_p on the torsion of Z_p^x, one per
    /// prime of Z[zeta_n] above p (the identification depends on the prime).
    pub a: Vec<u64>,
    /// Exponent of the ideal at each prime above p.
    pub exponents: Vec<i64>,
    pub ideal: IdealHNF,
}

/// Topological generators of Z_p^x x (Z/N')^x.
#[derive(Clone, Debug, Serialize)]
pub struct ProfiniteGeneratorSet {
    pub p: u64,
    /// Generator of Z_p^x (p odd) or of 1 + 4 Z_2.
    pub g: u64,
    /// -1 for p = 2, empty otherwise (g already covers the torsion).
    pub torsion_generators: Vec<i64>,
    pub tame_level: u64,
    pub tame_generators: Vec<u64>,
}

impl ProfiniteGeneratorSet {
    pub fn new(p: u64, tame_level: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if tame_level == 0 || tame_level.is_multiple_of(p) {
            return Err(Error::InvalidArgument(format!("tame level {tame_level} must be prime to {p}")));
        }
        let (g, torsion) = if p == 2 {
            (5, vec![-1])
        } else {
            let g = (2..p * p)
                .find(|&g| g % p != 0 && arith::mult_order(g, p * p) == p * (p - 1))
                .expect("primitive roots mod p^2 exist");
            (g, vec![])
        };
        let tame = unit_group_generators(tame_level).generators().iter().map(|&(b, _)| b).collect();
        Ok(ProfiniteGeneratorSet { p, g, torsion_generators: torsion, tame_level, tame_generators: tame })
    }

    /// The images generate (Z/p^m)^x x (Z/N')^x.
    pub fn generates_at(&self, m: u32) -> bool {
        let q = self.p.pow(m);
        let p_ok = if self.p == 2 {
            m <= 2 || arith::mult_order(self.g, q) == q / 4
        } else {
            arith::mult_order(self.g, q) == arith::euler_phi(q)
        };
        let group = unit_group_generators(self.tame_level);
        let tame_ok = group.order()
            == group.generators().iter().map(|&(_, o)| o).product::<u64>()
            && self.tame_generators.len() == group.generators().len();
        p_ok && tame_ok
    }
}

struct Split {
    v: u32,
    tame_level: u64,
    chi_p: DirichletCharacter,
    chi_prime: DirichletCharacter,
}

fn split(chi: &DirichletCharacter, p: u64) -> Result<Split> {
    let (chi_p, chi_prime) = factor_p_part(chi, p)?;
    let v = if chi_p.modulus() == 1 { 0 } else { arith::val_p(chi_p.modulus(), p) };
    Ok(Split { v, tame_level: chi_prime.modulus(), chi_p, chi_prime })
}

fn check_inputs(k: u32, chi: &DirichletCharacter, p: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
    }
    Ok(())
}

pub fn case_of(chi: &DirichletCharacter, p: u64) -> Result<CaseTag> {
    let s = split(chi, p)?;
    Ok(dispatch(p, &s))
}

fn dispatch(p: u64, s: &Split) -> CaseTag {
    if s.tame_level == 1 {
        match (p == 2, s.v) {
            (false, 0 | 1) => CaseTag::I,
            (false, _) => CaseTag::III,
            (true, 0..=2) => CaseTag::II,
            (true, _) => CaseTag::IV,
        }
    } else if !arith::is_power_of(s.chi_prime.order(), p) {
        CaseTag::V
    } else if p == 2 {
        CaseTag::VII
    } else {
        CaseTag::VI
    }
}

/// Teichmuller exponents of chi_p at each prime of Z[zeta_n] above p.
fn teichmuller_exponents(ring: &LocalRing, s: &Split, p: u64, g: u64) -> Vec<u64> {
    let n = ring.n();
    if p == 2 {
        let a = u64::from(s.chi_p.modulus() > 1 && s.chi_p.parity() == -1);
        return vec![a; ring.factor_count()];
    }
    let q = s.chi_p.modulus().max(1);
    // g^{p^{v-1}} is the Teichmuller representative of g modulo p^v
    let t = if q == 1 { 1 } else { arith::pow_mod(g, q / p, q) };
    let zeta = s.chi_p.value_in(t as i64, n);
    (0..ring.factor_count())
        .map(|sigma| {
            (0..p - 1)
                .find(|&a| {
                    let diff = &zeta - &CyclotomicNumber::from_int(n, arith::big_pow(g, a as u32));
                    ring.val_factor_capped(sigma, &diff, 1) >= 1
                })
                .expect("torsion values are Teichmuller powers")
        })
        .collect()
}

/// Closed-form maximal congruence ideal in Z[zeta_n], n the image order of chi.
pub fn predict_max_congruence(k: u32, chi: &DirichletCharacter, p: u64) -> Result<CongruencePrediction> {
    check_inputs(k, chi, p)?;
    let s = split(chi, p)?;
    let case_tag = dispatch(p, &s);
    let n = chi.order();
    let vk = arith::val_p(k as u64, p);
    let ring = LocalRing::new(n, p, vk + 3)?;
    let gens = ProfiniteGeneratorSet::new(p, s.tame_level)?;
    let a = teichmuller_exponents(&ring, &s, p, gens.g);
    let e = ring.ramification() as i64;
    let exponents: Vec<i64> = a
        .iter()
        .map(|&a| {
            let hit = (k as u64 + a).is_multiple_of((p - 1).max(1));
            match case_tag {
                CaseTag::I => {
                    if hit {
                        (vk as i64 + 1) * e
                    } else {
                        0
                    }
                }
                CaseTag::II => {
                    if (k as u64 + a).is_multiple_of(2) {
                        vk as i64 + 2
                    } else {
                        1
                    }
                }
                CaseTag::III | CaseTag::VI => i64::from(hit),
                CaseTag::IV | CaseTag::VII => 1,
                CaseTag::V => 0,
            }
        })
        .collect();
    let ideal = ring.ideal_from_exponents(&exponents);
    Ok(CongruencePrediction {
        case_tag,
        p,
        k,
        v: s.v,
        tame_level: s.tame_level,
        v_prime: if s.chi_prime.order() == 1 { 0 } else { arith::val_p(s.chi_prime.order(), p) },
        chi_p_order: s.chi_p.order(),
        chi_prime_order: s.chi_prime.order(),
        a,
        exponents,
        ideal,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub ideal: IdealHNF,
    pub generators: ProfiniteGeneratorSet,
    pub precision: u32,
    /// Every relation vanished modulo p^M.
    pub zero_to_precision: bool,
}

/// Ideal generated by 1 - chi_p(a) chi'(b) a^k over the generating set, plus p^M.
pub fn oracle_max_congruence(k: u32, chi: &DirichletCharacter, p: u64, m: u32) -> Result<OracleResult> {
    check_inputs(k, chi, p)?;
    if m == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let s = split(chi, p)?;
    let n = chi.order();
    let gens = ProfiniteGeneratorSet::new(p, s.tame_level)?;
    let pm = arith::big_pow(p, m);
    let one = CyclotomicNumber::one(n);
    let mut relations = Vec::new();
    let mut p_adic = vec![gens.g as i64];
    p_adic.extend(gens.torsion_generators.iter().copied());
    for &a in &p_adic {
        let ak = num_traits::pow(BigInt::from(a), k as usize);
        let rho = s.chi_p.value_in(a, n).scale_int(&ak);
        relations.push(&one - &rho);
    }
    for &b in &gens.tame_generators {
        relations.push(&one - &s.chi_prime.value_in(b as i64, n));
    }
    let mut builder = IdealBuilder::new(n, pm.clone());
    for r in &relations {
        let coords = r.reduce_mod(&pm).expect("relations are integral");
        builder.add_element(&CyclotomicNumber::from_coords(n, coords))?;
    }
    let ideal = builder.finish();
    let zero = ideal == IdealHNF::from_int(n, pm);
    Ok(OracleResult { ideal, generators: gens, precision: m, zero_to_precision: zero })
}
