//! H^1_c(Z_p^x x (Z/N')^x; Z_p^{(x)k}[chi]) through the fixed points of the
//! finite quotients M / p^m M, M = Z[zeta_n] (x) Z_p with the twisted action.
//!
//! The connecting map of 0 -> M -> M[1/p] -> M[1/p]/M -> 0 identifies H^1
//! with the colimit of (M/p^m)^G, which stabilizes at Z_p[chi]/I.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith;
use crate::char::{factor_p_part, unit_group_generators, DirichletCharacter};
use crate::cyclo::ideal::IdealBuilder;
use crate::cyclo::{CyclotomicNumber, IdealHNF};
use crate::error::{Error, Result};
use crate::linalg::{kernel_mod_prime_power, PrimePowerRing};
use crate::reptheory::ProfiniteGeneratorSet;

/// Z[zeta_n]/p^m as (Z/p^m)^phi(n) with one action matrix per group generator.
#[derive(Clone, Debug)]
pub struct FiniteQuotientModule {
    pub n: u64,
    pub p: u64,
    pub level: u32,
    /// Column convention: coords(rho(g) y) = A coords(y).
    pub actions: Vec<Vec<Vec<i128>>>,
}

/// Action of multiplication by x on coordinate columns, reduced mod p^m.
fn mult_action(x: &CyclotomicNumber, ring: PrimePowerRing) -> Vec<Vec<i128>> {
    let q = BigInt::from(ring.q);
    let rows = x.multiplication_matrix();
    let d = rows.len();
    let den = x.denominator().clone();
    let den_inv = arith::big_inv_mod(&den, &q).expect("p-integral action");
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let v = arith::big_mod(&(&rows[j][i] * &den_inv), &q);
                    v.to_i128().expect("reduced")
                })
                .collect()
        })
        .collect()
}

impl FiniteQuotientModule {
    /// The representation (a, b) -> chi_p(a) chi'(b) a^k at level m.
    pub fn new(k: u32, chi: &DirichletCharacter, p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("level must be at least 1".into()));
        }
        let (chi_p, chi_prime) = factor_p_part(chi, p)?;
        let n = chi.order();
        let gens = ProfiniteGeneratorSet::new(p, chi_prime.modulus())?;
        let ring = PrimePowerRing::new(p, m);
        let q = arith::big_pow(p, m);
        let mut actions = Vec::new();
        let mut p_adic = vec![gens.g as i64];
        p_adic.extend(gens.torsion_generators.iter().copied());
        for a in p_adic {
            let ak = BigInt::from(a).modpow(&BigInt::from(k), &q);
            actions.push(mult_action(&chi_p.value_in(a, n).scale_int(&ak), ring));
        }
        for &(b, _) in unit_group_generators(chi_prime.modulus()).generators() {
            actions.push(mult_action(&chi_prime.value_in(b as i64, n), ring));
        }
        Ok(FiniteQuotientModule { n, p, level: m, actions })
    }

    pub fn rank(&self) -> usize {
        arith::euler_phi(self.n) as usize
    }

    fn ring(&self) -> PrimePowerRing {
        PrimePowerRing::new(self.p, self.level)
    }

    fn matmul(&self, a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let ring = self.ring();
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| (0..r).fold(0, |acc, t| ring.reduce(acc + ring.mul(a[i][t], b[t][j])))).collect())
            .collect()
    }

    pub fn actions_commute(&self) -> bool {
        self.actions.iter().enumerate().all(|(i, a)| {
            self.actions[i + 1..].iter().all(|b| self.matmul(a, b) == self.matmul(b, a))
        })
    }

    /// Each action is invertible mod p, hence mod p^m.
    pub fn actions_invertible(&self) -> bool {
        let ring = PrimePowerRing::new(self.p, 1);
        self.actions.iter().all(|a| {
            let t: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| ring.reduce(x)).collect()).collect();
            // a unit of Z[zeta_n]/p has trivial kernel mod p
            kernel_mod_prime_power(&t, self.rank(), ring).0.is_empty()
        })
    }

    /// Stacked (A_g - 1) over all generators.
    pub fn relation_matrix(&self) -> Vec<Vec<i128>> {
        let ring = self.ring();
        let mut out = Vec::new();
        for a in &self.actions {
            for (i, row) in a.iter().enumerate() {
                out.push(row.iter().enumerate().map(|(j, &x)| ring.reduce(x - i128::from(i == j))).collect());
            }
        }
        out
    }

    /// Invariant-factor exponents and generators of M^G.
    pub fn fixed_points(&self) -> (Vec<u32>, Vec<Vec<i128>>) {
        kernel_mod_prime_power(&self.relation_matrix(), self.rank(), self.ring())
    }

    /// log_p of the cokernel order of the stacked (A_g - 1) restricted to one generator.
    pub fn cokernel_exponent(&self, generator: usize) -> u32 {
        let a = &self.actions[generator];
        let ring = self.ring();
        let b: Vec<Vec<i128>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, &x)| ring.reduce(x - i128::from(i == j))).collect())
            .collect();
        // |coker| = |ker| for an endomorphism of a finite group
        kernel_mod_prime_power(&b, self.rank(), ring).0.iter().sum()
    }
}

/// Finite abelian p-group Z/p^{e_1} x ... with e_i ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPoints {
    pub level: u32,
    pub invariant_factors: Vec<u32>,
    #[serde(skip)]
    generators: Vec<Vec<i128>>,
}

impl FixedPoints {
    pub fn log_order(&self) -> u32 {
        self.invariant_factors.iter().sum()
    }
}

pub fn fixed_points_finite_level(k: u32, chi: &DirichletCharacter, p: u64, m: u32) -> Result<FixedPoints> {
    let module = FiniteQuotientModule::new(k, chi, p, m)?;
    let (invariant_factors, generators) = module.fixed_points();
    Ok(FixedPoints { level: m, invariant_factors, generators })
}

/// Ann_R(K) + p^m for a submodule K of R/p^m given by generators.
fn annihilator(n: u64, p: u64, m: u32, gens: &[Vec<i128>]) -> Result<IdealHNF> {
    let ring = PrimePowerRing::new(p, m);
    let r = arith::euler_phi(n) as usize;
    let mut stacked = Vec::new();
    for g in gens {
        let x = CyclotomicNumber::from_coords(n, g.iter().map(|&c| BigInt::from(c)).collect());
        stacked.extend(mult_action(&x, ring));
    }
    let q = arith::big_pow(p, m);
    let mut builder = IdealBuilder::new(n, q);
    if stacked.is_empty() {
        return Ok(IdealHNF::unit(n));
    }
    let (_, kernel) = kernel_mod_prime_power(&stacked, r, ring);
    for v in kernel {
        builder.add_vector(&v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
    }
    Ok(builder.finish())
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Result {
    pub levels: Vec<FixedPoints>,
    /// First level from which three consecutive levels agree.
    pub stabilization_level: u32,
    /// H^1 = Z_p[chi]/ideal.
    pub ideal: IdealHNF,
    pub invariant_factors: Vec<u32>,
}

/// Iterates levels 1..=m_max until three consecutive fixed-point groups agree.
pub fn h1_stabilized(k: u32, chi: &DirichletCharacter, p: u64, m_max: u32) -> Result<H1Result> {
    if m_max < 2 {
        return Err(Error::InvalidArgument("need at least two levels".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    if !chi.parity_matches(k) {
        return Err(Error::ParityMismatch { k });
    }
    let mut levels: Vec<FixedPoints> = Vec::new();
    for m in 1..=m_max {
        levels.push(fixed_points_finite_level(k, chi, p, m)?);
        let t = levels.len();
        if t >= 3 && (t - 3..t).all(|i| levels[i].invariant_factors == levels[t - 1].invariant_factors) {
            let stable = &levels[t - 3];
            let ideal = annihilator(chi.order(), p, stable.level, &stable.generators)?;
            return Ok(H1Result {
                stabilization_level: stable.level,
                invariant_factors: stable.invariant_factors.clone(),
                ideal,
                levels,
            });
        }
    }
    Err(Error::NoStabilization(m_max))
}

/// Both twists chi and chi^{-1}; the two conventions for the coefficient
/// character differ by this inversion.
#[derive(Clone, Debug, Serialize)]
pub struct H1Orientations {
    pub chi: H1Result,
    pub chi_inverse: H1Result,
}

pub fn h1_both_orientations(k: u32, chi: &DirichletCharacter, p: u64, m_max: u32) -> Result<H1Orientations> {
    Ok(H1Orientations { chi: h1_stabilized(k, chi, p, m_max)?, chi_inverse: h1_stabilized(k, &chi.inverse(), p, m_max)? })
}
