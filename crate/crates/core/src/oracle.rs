//! Brute-force ground truth: dimensions of ideal pieces as Macaulay-matrix
//! ranks, containment tests, and certification of random instances by
//! comparing Hilbert functions with the closed-form tables.
//!
//! Agreement over a finite window is a heuristic certificate of the expected
//! codimension, not a proof.

use serde::{Deserialize, Serialize};

use crate::betti::{self, BettiTable};
use crate::degmat::DegreeMatrix;
use crate::error::{Error, Result};
use crate::exactalg::{coefficient_matrix, count_monomials, Polynomial, PrimeField};
use crate::matgen::HomogeneousMatrix;

/// Default number of resampling attempts for degenerate draws.
pub const DEFAULT_ATTEMPTS: usize = 5;

/// dim I_v for the ideal generated by `gens`.
pub fn ideal_piece_dim(gens: &[(Polynomial, i64)], v: i64) -> Result<usize> {
    let Some((g0, _)) = gens.first() else { return Ok(0) };
    let active: Vec<(Polynomial, i64)> = gens.iter().filter(|g| g.1 <= v).cloned().collect();
    if active.is_empty() {
        return Ok(0);
    }
    let field = g0.field();
    Ok(coefficient_matrix(g0.n_vars(), &active, v)?.rank(&field))
}

/// Whether a table resolves the quotient R/I or the ideal I itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resolves {
    Quotient,
    Ideal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub v: i64,
    pub predicted: i64,
    pub observed: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertCheck {
    pub label: String,
    pub agree: bool,
    pub first_mismatch: Option<i64>,
    pub degrees: Vec<DegreeCheck>,
}

/// Compare the oracle Hilbert function of (gens) with the table on v_range.
pub fn hilbert_function_check(
    gens: &[(Polynomial, i64)],
    n_vars: usize,
    table: &BettiTable,
    resolves: Resolves,
    v_range: std::ops::RangeInclusive<i64>,
) -> Result<HilbertCheck> {
    let mut degrees = Vec::new();
    for v in v_range {
        let dim_i = ideal_piece_dim(gens, v)? as i64;
        let observed = match resolves {
            Resolves::Ideal => dim_i,
            Resolves::Quotient => count_monomials(n_vars, v) as i64 - dim_i,
        };
        degrees.push(DegreeCheck { v, predicted: betti::hilbert_function(table, v), observed });
    }
    let first_mismatch = degrees.iter().find(|d| d.predicted != d.observed).map(|d| d.v);
    Ok(HilbertCheck { label: table.kind.label().to_string(), agree: first_mismatch.is_none(), first_mismatch, degrees })
}

/// True iff every generator of `sub` of degree ≤ up_to lies in the ideal of
/// `sup`; that is the same as (sub)_v ⊆ (sup)_v for all v ≤ up_to.
pub fn containment_check(sub: &[(Polynomial, i64)], sup: &[(Polynomial, i64)], up_to: i64) -> Result<bool> {
    let mut degs: Vec<i64> = sub.iter().map(|g| g.1).filter(|&d| d <= up_to).collect();
    degs.sort_unstable();
    degs.dedup();
    for v in degs {
        let mut both: Vec<(Polynomial, i64)> = sup.to_vec();
        both.extend(sub.iter().filter(|g| g.1 == v).cloned());
        if ideal_piece_dim(&both, v)? != ideal_piece_dim(sup, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators Δ_iΔ_k (i ≤ k) of I_B².
pub fn square_generators(ib: &[(Polynomial, i64)]) -> Vec<(Polynomial, i64)> {
    let mut out = Vec::new();
    for i in 0..ib.len() {
        for k in i..ib.len() {
            out.push((ib[i].0.mul(&ib[k].0), ib[i].1 + ib[k].1));
        }
    }
    out
}

/// Certification of one matrix: I_B against HB and, when the GN table is
/// minimal, I_A against GN, for v in [0, s+3].
pub fn certify(a: &HomogeneousMatrix) -> Result<Vec<HilbertCheck>> {
    let dm = a.dm();
    let top = dm.det_degree() + 3;
    let nv = dm.n_vars();
    let mut out = vec![hilbert_function_check(
        &a.ib_generators()?,
        nv,
        &betti::hilbert_burch_table(dm)?,
        Resolves::Quotient,
        0..=top,
    )?];
    if let Ok(gn) = betti::gulliksen_negard_table(dm) {
        out.push(hilbert_function_check(&a.ia_generators()?, nv, &gn, Resolves::Quotient, 0..=top)?);
    }
    Ok(out)
}

/// A random general matrix that passes `certify`, resampling with seed+1 on
/// degenerate draws. Returns the matrix and the seed actually used.
pub fn certified_instance(
    dm: &DegreeMatrix,
    field: PrimeField,
    seed: u64,
    attempts: usize,
) -> Result<(HomogeneousMatrix, u64)> {
    let mut reason = String::new();
    for k in 0..attempts as u64 {
        let a = HomogeneousMatrix::random_general(dm, field, seed + k)?;
        let checks = certify(&a)?;
        match checks.iter().find(|c| !c.agree) {
            None => return Ok((a, seed + k)),
            Some(c) => reason = format!("{} mismatch at degree {}", c.label, c.first_mismatch.unwrap_or_default()),
        }
    }
    Err(Error::Degenerate { attempts, last_seed: seed + attempts as u64 - 1, reason })
}
