use std::collections::HashMap;

use super::dense::{self, DenseMat};
use super::field::PrimeField;
use super::monomial::{count_monomials, monomial_basis, monomial_index};
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Sparse matrix over F_p stored by rows; each row is sorted by column and
/// holds only nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Vec<(usize, u32)>>,
}

/// Below this many cells the dense path is always used.
const DENSE_CELLS: usize = 4_000_000;

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn from_triplets(rows: usize, cols: usize, t: &[(usize, usize, u32)], field: &PrimeField) -> Self {
        let mut m = Self::zeros(rows, cols);
        let mut acc: HashMap<(usize, usize), u32> = HashMap::new();
        for &(i, j, v) in t {
            assert!(i < rows && j < cols, "entry ({i},{j}) out of bounds");
            let e = acc.entry((i, j)).or_insert(0);
            *e = field.add(*e, v % field.p());
        }
        for ((i, j), v) in acc {
            if v != 0 {
                m.entries[i].push((j, v));
            }
        }
        for r in &mut m.entries {
            r.sort_unstable();
        }
        m
    }

    pub fn from_dense(d: &DenseMat) -> Self {
        let entries = (0..d.rows)
            .map(|i| {
                d.row(i).iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, &v)| (j, v)).collect()
            })
            .collect();
        ExactMatrix { rows: d.rows, cols: d.cols, entries }
    }

    pub fn to_dense(&self) -> DenseMat {
        let mut d = DenseMat::zeros(self.rows, self.cols);
        for (i, r) in self.entries.iter().enumerate() {
            for &(j, v) in r {
                d.set(i, j, v);
            }
        }
        d
    }

    pub fn row(&self, i: usize) -> &[(usize, u32)] {
        &self.entries[i]
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        match self.entries[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.entries[i][k].1,
            Err(_) => 0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }

    pub fn push_row(&mut self, mut row: Vec<(usize, u32)>) {
        row.retain(|e| e.1 != 0);
        row.sort_unstable();
        assert!(row.iter().all(|e| e.0 < self.cols));
        self.entries.push(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for (i, r) in self.entries.iter().enumerate() {
            for &(j, v) in r {
                t.entries[j].push((i, v));
            }
        }
        t
    }

    pub fn mul_vec(&self, field: &PrimeField, v: &[u32]) -> Vec<u32> {
        let p = field.p() as u64;
        self.entries
            .iter()
            .map(|r| (r.iter().map(|&(j, a)| a as u64 * v[j] as u64 % p).sum::<u64>() % p) as u32)
            .collect()
    }

    fn prefers_dense(&self) -> bool {
        let cells = self.rows * self.cols;
        cells <= DENSE_CELLS || self.nnz() * 20 > cells
    }

    /// Exact rank over F_p.
    pub fn rank(&self, field: &PrimeField) -> usize {
        if self.prefers_dense() {
            return dense::rank(field, &self.to_dense());
        }
        sparse_rank(field, self)
    }

    /// Basis of the right kernel.
    pub fn kernel_basis(&self, field: &PrimeField) -> Vec<Vec<u32>> {
        dense::rref(field, &self.to_dense()).kernel_basis(field)
    }
}

/// Row-by-row sparse elimination; pivots are kept normalized. Falls back to
/// the dense routine once the pivot rows fill in.
fn sparse_rank(field: &PrimeField, m: &ExactMatrix) -> usize {
    let p = field.p() as u64;
    let mut pivots: HashMap<usize, Vec<(usize, u32)>> = HashMap::new();
    let mut fill = 0usize;
    let budget = m.rows.min(m.cols) * m.cols / 8;
    for (idx, row) in m.entries.iter().enumerate() {
        let mut cur: Vec<(usize, u32)> = row.clone();
        loop {
            let Some(&(lead, c)) = cur.first() else { break };
            let Some(piv) = pivots.get(&lead) else {
                let inv = field.inv(c) as u64;
                for e in &mut cur {
                    e.1 = (e.1 as u64 * inv % p) as u32;
                }
                fill += cur.len();
                pivots.insert(lead, cur);
                break;
            };
            cur = axpy_sparse(field, &cur, field.neg(c), piv);
        }
        if fill > budget {
            // densify: current pivots plus the untouched rows
            let mut d = DenseMat::zeros(pivots.len() + m.rows - idx - 1, m.cols);
            for (k, pr) in pivots.values().enumerate() {
                for &(j, v) in pr {
                    d.set(k, j, v);
                }
            }
            for (k, r) in m.entries[idx + 1..].iter().enumerate() {
                for &(j, v) in r {
                    d.set(pivots.len() + k, j, v);
                }
            }
            return dense::rank(field, &d);
        }
    }
    pivots.len()
}

fn axpy_sparse(field: &PrimeField, x: &[(usize, u32)], a: u32, y: &[(usize, u32)]) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        if cx < cy {
            out.push(x[i]);
            i += 1;
        } else if cy < cx {
            out.push((cy, field.mul(a, y[j].1)));
            j += 1;
        } else {
            let v = field.add(x[i].1, field.mul(a, y[j].1));
            if v != 0 {
                out.push((cx, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Macaulay matrix: rows m·g for every generator g of degree e and every
/// monomial m of degree target − e (in basis order), columns the monomials of
/// degree `target`.
pub fn coefficient_matrix(
    n_vars: usize,
    generators: &[(Polynomial, i64)],
    target: i64,
) -> Result<ExactMatrix> {
    for (g, d) in generators {
        if !g.is_homogeneous_of(*d) {
            return Err(Error::NotHomogeneous { expected: *d });
        }
    }
    let cols = count_monomials(n_vars, target);
    let mut m = ExactMatrix::zeros(0, cols);
    for (g, d) in generators {
        for mono in monomial_basis(n_vars, target - d) {
            let row = g.terms().iter().map(|(t, &c)| (monomial_index(&t.mul(&mono).0), c)).collect();
            m.push_row(row);
        }
    }
    Ok(m)
}
