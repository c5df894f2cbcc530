//! Grid verification: closed form, generator oracle, best Eisenstein
//! combination and stabilized H^1 must give the same ideal.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::char::DirichletCharacter;
use crate::cohomology::h1_stabilized;
use crate::congruence::max_congruence_search;
use crate::cyclo::IdealHNF;
use crate::eisenstein::{default_precision, eisenstein_space_basis};
use crate::error::Result;
use crate::reptheory::{oracle_max_congruence, predict_max_congruence, CaseTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CellStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellStatus::Pass => "PASS",
            CellStatus::Fail => "FAIL",
            CellStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyConfig {
    /// Number of q-coefficients; None picks max(200, 4k).
    pub q_precision: Option<usize>,
    pub p_precision: u32,
    pub m_max: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { q_precision: None, p_precision: 12, m_max: 8 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationCell {
    pub p: u64,
    pub level: u64,
    pub k: u32,
    pub character: String,
    pub case_tag: CaseTag,
    pub predicted: IdealHNF,
    pub oracle: IdealHNF,
    pub series: Option<IdealHNF>,
    pub cohomology: Option<IdealHNF>,
    pub stabilization_index: usize,
    pub status: CellStatus,
    pub notes: Vec<String>,
}

pub fn verify_cell(p: u64, chi: &DirichletCharacter, k: u32, cfg: &VerifyConfig) -> Result<VerificationCell> {
    let pred = predict_max_congruence(k, chi, p)?;
    let oracle = oracle_max_congruence(k, chi, p, cfg.p_precision)?;
    let q = cfg.q_precision.unwrap_or_else(|| default_precision(k));
    let mut notes = Vec::new();
    let mut caveat = false;
    let basis = eisenstein_space_basis(k, chi, q)?;
    let series = match max_congruence_search(&basis, p, None, cfg.p_precision) {
        Ok(r) => {
            if !r.confirmed || r.trivial_to_precision {
                caveat = true;
                notes.push(format!("series stabilized at {} of {}", r.stabilization_index, q));
            }
            notes.extend(r.diagnostics.iter().cloned());
            Some((r.ideal, r.stabilization_index))
        }
        Err(e) => {
            notes.push(format!("series search: {e}"));
            None
        }
    };
    let cohomology = match h1_stabilized(k, chi, p, cfg.m_max) {
        Ok(h) => Some(h.ideal),
        Err(e) => {
            caveat = true;
            notes.push(format!("cohomology: {e}"));
            None
        }
    };
    let mut agree = pred.ideal == oracle.ideal;
    if let Some((s, _)) = &series {
        agree &= *s == pred.ideal;
    }
    if let Some(c) = &cohomology {
        agree &= *c == pred.ideal;
    }
    let complete = series.is_some() && cohomology.is_some();
    let status = if !agree {
        CellStatus::Fail
    } else if caveat || !complete {
        CellStatus::Inconclusive
    } else {
        CellStatus::Pass
    };
    notes.sort();
    notes.dedup();
    Ok(VerificationCell {
        p,
        level: chi.modulus(),
        k,
        character: chi.to_string(),
        case_tag: pred.case_tag,
        predicted: pred.ideal,
        oracle: oracle.ideal,
        stabilization_index: series.as_ref().map_or(0, |s| s.1),
        series: series.map(|s| s.0),
        cohomology,
        status,
        notes,
    })
}

/// Weights k <= k_max with the parity of chi.
pub fn admissible_weights(chi: &DirichletCharacter, k_max: u32) -> Vec<u32> {
    (1..=k_max).filter(|&k| chi.parity_matches(k)).collect()
}

/// (p, chi, k) cells over the given conductors, one representative per
/// Galois orbit of primitive characters.
pub fn grid_cells(primes: &[u64], conductors: &[u64], weights: &[u32]) -> Vec<(u64, DirichletCharacter, u32)> {
    let mut out = Vec::new();
    for &f in conductors {
        let reps = orbit_representatives(f);
        for &p in primes {
            for chi in &reps {
                for &k in weights {
                    if chi.parity_matches(k) {
                        out.push((p, chi.clone(), k));
                    }
                }
            }
        }
    }
    out
}

/// Primitive characters of conductor f up to chi ~ chi^a, (a, order) = 1.
pub fn orbit_representatives(f: u64) -> Vec<DirichletCharacter> {
    let mut reps: Vec<DirichletCharacter> = Vec::new();
    for chi in DirichletCharacter::primitive(f) {
        let n = chi.order();
        let seen = reps.iter().any(|r| {
            r.order() == n && (1..=n).filter(|&a| arith::gcd(a, n) == 1).any(|a| {
                let exps: Vec<i64> = r.exponents().iter().map(|&e| (e * a) as i64).collect();
                DirichletCharacter::new(f, n, &exps).is_ok_and(|c| c == chi)
            })
        });
        if !seen {
            reps.push(chi);
        }
    }
    reps
}

/// The default grid: conductors {1, 4, 5, 7, 8, 9, 11, 12, 13, 25}, p in {2, 3, 5, 7}.
pub fn default_grid() -> Vec<(u64, DirichletCharacter, u32)> {
    grid_cells(&[2, 3, 5, 7], &[1, 4, 5, 7, 8, 9, 11, 12, 13, 25], &[1, 2, 3, 4, 5, 6, 8, 12, 20])
}

/// Runs cells in parallel; output order follows the input.
pub fn verify_grid(cells: &[(u64, DirichletCharacter, u32)], cfg: &VerifyConfig) -> Vec<Result<VerificationCell>> {
    cells.par_iter().map(|(p, chi, k)| verify_cell(*p, chi, *k, cfg)).collect()
}
