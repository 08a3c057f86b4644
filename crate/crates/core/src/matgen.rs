//! Concrete homogeneous matrices over F_p for a degree matrix: random general
//! instances, row deletion and adjunction, minors and determinants, and the
//! generators of I_A = I_{t−1}(𝒜) and I_B = I_{t−1}(𝒩).

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::degmat::DegreeMatrix;
use crate::error::{Error, Result};
use crate::exactalg::{monomial_basis, Polynomial, PrimeField};

/// A t×t matrix 𝒜, or a (t−1)×t matrix 𝒩 obtained from one by deleting a
/// row. `rows[k]` is the index into dm.a of row k's degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousMatrix {
    dm: DegreeMatrix,
    field: PrimeField,
    rows: Vec<usize>,
    entries: Vec<Vec<Polynomial>>,
}

/// A k×k minor with its row and column index sets and prescribed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub poly: Polynomial,
    pub degree: i64,
}

impl HomogeneousMatrix {
    /// Entry (j, i) is a random form of degree a_j − b_i, and zero when
    /// a_j ≤ b_i. Deterministic in (dm, prime, seed).
    pub fn random_general(dm: &DegreeMatrix, field: PrimeField, seed: u64) -> Result<Self> {
        dm.validate()?;
        dm.require_nonempty()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nv = dm.n_vars();
        let t = dm.t();
        let mut bases: HashMap<i64, Vec<_>> = HashMap::new();
        let mut entries = Vec::with_capacity(t);
        for j in 0..t {
            let mut row = Vec::with_capacity(t);
            for i in 0..t {
                let d = dm.entry_degree(j, i);
                if d <= 0 {
                    row.push(Polynomial::zero(field, nv));
                    continue;
                }
                let basis = bases.entry(d).or_insert_with(|| monomial_basis(nv, d));
                let terms = basis.iter().map(|m| (m.clone(), rng.gen_range(0..field.p())));
                row.push(Polynomial::from_terms(field, nv, terms));
            }
            entries.push(row);
        }
        Ok(HomogeneousMatrix { dm: dm.clone(), field, rows: (0..t).collect(), entries })
    }

    /// Build from explicit entries, checking every prescribed degree.
    pub fn from_entries(dm: &DegreeMatrix, rows: Vec<usize>, entries: Vec<Vec<Polynomial>>) -> Result<Self> {
        let t = dm.t();
        if entries.len() != rows.len() || !(rows.len() == t || rows.len() + 1 == t) {
            return Err(Error::InvalidDegreeMatrix(format!("{} rows do not fit t = {t}", entries.len())));
        }
        if rows.windows(2).any(|w| w[0] >= w[1]) || rows.iter().any(|&r| r >= t) {
            return Err(Error::InvalidDegreeMatrix("row indices must be increasing and < t".into()));
        }
        let field = entries
            .iter()
            .flatten()
            .next()
            .map(|p| p.field())
            .ok_or_else(|| Error::InvalidDegreeMatrix("empty matrix".into()))?;
        for (k, row) in entries.iter().enumerate() {
            if row.len() != t {
                return Err(Error::InvalidDegreeMatrix(format!("row {k} has {} entries", row.len())));
            }
            for (i, e) in row.iter().enumerate() {
                check_entry(dm, rows[k], i, e)?;
            }
        }
        Ok(HomogeneousMatrix { dm: dm.clone(), field, rows, entries })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: HomogeneousMatrix = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        HomogeneousMatrix::from_entries(&m.dm, m.rows, m.entries)
    }

    pub fn dm(&self) -> &DegreeMatrix {
        &self.dm
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.dm.n_vars()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.entries.len(), self.dm.t())
    }

    pub fn is_square(&self) -> bool {
        self.entries.len() == self.dm.t()
    }

    pub fn entry(&self, k: usize, i: usize) -> &Polynomial {
        &self.entries[k][i]
    }

    pub fn row(&self, k: usize) -> &[Polynomial] {
        &self.entries[k]
    }

    /// Degree of row k (its a_j).
    pub fn row_degree(&self, k: usize) -> i64 {
        self.dm.a()[self.rows[k]]
    }

    /// Prescribed degree of entry (k, i).
    pub fn entry_degree(&self, k: usize, i: usize) -> i64 {
        self.dm.entry_degree(self.rows[k], i)
    }

    /// Delete row j (0-based); the construction of B uses the last row.
    pub fn delete_row(&self, j: usize) -> Result<HomogeneousMatrix> {
        if !self.is_square() {
            return Err(Error::Unsupported("delete_row needs a square matrix".into()));
        }
        if j >= self.entries.len() {
            return Err(Error::InvalidDegreeMatrix(format!("row {j} out of range")));
        }
        let mut m = self.clone();
        m.rows.remove(j);
        m.entries.remove(j);
        Ok(m)
    }

    pub fn delete_last_row(&self) -> Result<HomogeneousMatrix> {
        self.delete_row(self.dm.t() - 1)
    }

    /// Put the missing row back; g_i must be homogeneous of degree a_j − b_i
    /// for the missing index j.
    pub fn adjoin_row(&self, g: Vec<Polynomial>) -> Result<HomogeneousMatrix> {
        if self.is_square() {
            return Err(Error::Unsupported("adjoin_row needs a (t−1)×t matrix".into()));
        }
        let t = self.dm.t();
        if g.len() != t {
            return Err(Error::InvalidDegreeMatrix(format!("row has {} entries, expected {t}", g.len())));
        }
        let j = (0..t).find(|j| !self.rows.contains(j)).expect("one row is missing");
        for (i, e) in g.iter().enumerate() {
            check_entry(&self.dm, j, i, e)?;
        }
        let mut m = self.clone();
        m.rows.insert(j, j);
        m.entries.insert(j, g);
        Ok(m)
    }

    /// A random row of the degrees missing from a (t−1)×t matrix.
    pub fn random_row(&self, seed: u64) -> Result<Vec<Polynomial>> {
        let full = HomogeneousMatrix::random_general(&self.dm, self.field, seed)?;
        let j = (0..self.dm.t()).find(|j| !self.rows.contains(j)).unwrap_or(self.dm.t() - 1);
        Ok(full.entries[j].clone())
    }

    /// All k×k minors, rows and columns in lexicographic order.
    pub fn minors(&self, k: usize) -> Result<Vec<Minor>> {
        let (r, c) = self.shape();
        if k == 0 || k > r.min(c) {
            return Err(Error::Unsupported(format!("no {k}×{k} minors of a {r}×{c} matrix")));
        }
        let mut memo = HashMap::new();
        let mut out = Vec::new();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let poly = self.minor_memo(&rows, &cols, &mut memo);
                let degree = rows.iter().map(|&k| self.row_degree(k)).sum::<i64>()
                    - cols.iter().map(|&i| self.dm.b()[i]).sum::<i64>();
                out.push(Minor { rows: rows.clone(), cols, poly, degree });
            }
        }
        Ok(out)
    }

    fn minor_memo(&self, rows: &[usize], cols: &[usize], memo: &mut HashMap<(u64, u64), Polynomial>) -> Polynomial {
        let key = (mask(rows), mask(cols));
        if let Some(p) = memo.get(&key) {
            return p.clone();
        }
        let nv = self.n_vars();
        let mut det = Polynomial::zero(self.field, nv);
        if rows.len() == 1 {
            det = self.entries[rows[0]][cols[0]].clone();
        } else {
            // expand along the first row
            for (pos, &c) in cols.iter().enumerate() {
                let e = &self.entries[rows[0]][c];
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let sub = self.minor_memo(&rows[1..], &sub_cols, memo);
                let term = e.mul(&sub);
                det = if pos % 2 == 0 { det.add(&term) } else { det.sub(&term) };
            }
        }
        memo.insert(key, det.clone());
        det
    }

    pub fn determinant(&self) -> Result<Polynomial> {
        if !self.is_square() {
            return Err(Error::Unsupported("determinant of a non-square matrix".into()));
        }
        let t = self.dm.t();
        let all: Vec<usize> = (0..t).collect();
        Ok(self.minor_memo(&all, &all, &mut HashMap::new()))
    }

    /// Generators of I_A: the t² submaximal minors of 𝒜; the minor omitting
    /// row j and column i has degree s − a_j + b_i.
    pub fn ia_generators(&self) -> Result<Vec<(Polynomial, i64)>> {
        if !self.is_square() {
            return Err(Error::Unsupported("I_A needs the square matrix".into()));
        }
        Ok(self.minors(self.dm.t() - 1)?.into_iter().map(|m| (m.poly, m.degree)).collect())
    }

    /// Signed maximal minors Δ_i = (−1)^i det(𝒩 without column i) (0-based),
    /// so that 𝒩·Δ = 0. Δ_i has degree n1_i.
    pub fn signed_maximal_minors(&self) -> Result<Vec<(Polynomial, i64)>> {
        if self.is_square() {
            return Err(Error::Unsupported("maximal minors need the (t−1)×t matrix".into()));
        }
        let t = self.dm.t();
        let rows: Vec<usize> = (0..t - 1).collect();
        let (n1, _) = self.dm.hb_twists();
        let mut memo = HashMap::new();
        Ok((0..t)
            .map(|i| {
                let cols: Vec<usize> = (0..t).filter(|&c| c != i).collect();
                let m = self.minor_memo(&rows, &cols, &mut memo);
                (if i % 2 == 0 { m } else { m.neg() }, n1[i])
            })
            .collect())
    }

    /// Generators of I_B: the signed maximal minors of 𝒩 (the last row of a
    /// square matrix is deleted first).
    pub fn ib_generators(&self) -> Result<Vec<(Polynomial, i64)>> {
        if self.is_square() {
            self.delete_last_row()?.signed_maximal_minors()
        } else {
            self.signed_maximal_minors()
        }
    }

    /// det 𝒜 = (−1)^{t−1} Σ_i 𝒜_{t,i} Δ_i, checked as a polynomial identity.
    pub fn last_row_expansion_holds(&self) -> Result<bool> {
        let t = self.dm.t();
        let det = self.determinant()?;
        let deltas = self.ib_generators()?;
        let mut sum = Polynomial::zero(self.field, self.n_vars());
        for (i, (d, _)) in deltas.iter().enumerate() {
            sum = sum.add(&self.entries[t - 1][i].mul(d));
        }
        if t.is_multiple_of(2) {
            sum = sum.neg();
        }
        Ok(sum == det)
    }
}

fn check_entry(dm: &DegreeMatrix, j: usize, i: usize, e: &Polynomial) -> Result<()> {
    let d = dm.entry_degree(j, i);
    if d <= 0 && !e.is_zero() {
        return Err(Error::NotHomogeneous { expected: d });
    }
    e.check_homogeneous(d)
}

fn mask(idx: &[usize]) -> u64 {
    idx.iter().fold(0, |m, &i| m | 1 << i)
}

/// k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(which: u8, s: i64, seed: u64) -> HomogeneousMatrix {
        let dm = DegreeMatrix::example(which, s).unwrap();
        HomogeneousMatrix::random_general(&dm, PrimeField::default(), seed).unwrap()
    }

    #[test]
    fn random_shape_and_determinism() {
        let a = ex(1, 5, 42);
        let degs: Vec<usize> = (0..4)
            .flat_map(|j| (0..4).map(move |i| (j, i)))
            .map(|(j, i)| a.entry(j, i).homogeneous_degree().unwrap())
            .collect();
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 12);
        assert_eq!(degs.iter().filter(|&&d| d == 2).count(), 4);
        assert_eq!(a, ex(1, 5, 42));
        assert_ne!(a, ex(1, 5, 43));
    }

    #[test]
    fn minimality_zero_entries() {
        let dm = DegreeMatrix::new(vec![0, 0, 1], vec![1, 2, 2], 5).unwrap();
        let m = HomogeneousMatrix::random_general(&dm, PrimeField::default(), 1).unwrap();
        assert!(m.entry(0, 2).is_zero());
        assert!(!m.entry(1, 2).is_zero());
    }

    #[test]
    fn delete_adjoin_roundtrip() {
        let a = ex(1, 5, 7);
        for j in 0..4 {
            let n = a.delete_row(j).unwrap();
            assert_eq!(n.shape(), (3, 4));
            let g = a.entries[j].clone();
            assert_eq!(n.adjoin_row(g).unwrap(), a);
        }
        let n = a.delete_last_row().unwrap();
        let bad = vec![Polynomial::var(a.field(), 6, 0); 4];
        assert!(n.adjoin_row(bad).is_err());
    }

    #[test]
    fn two_by_two_minors() {
        let f = PrimeField::default();
        let x = |i| Polynomial::var(f, 4, i);
        let dm = DegreeMatrix::new(vec![0, 0], vec![1, 1], 3).unwrap();
        let m = HomogeneousMatrix::from_entries(&dm, vec![0, 1], vec![vec![x(0), x(1)], vec![x(2), x(3)]]).unwrap();
        let m2 = m.minors(2).unwrap();
        assert_eq!(m2.len(), 1);
        assert_eq!(m2[0].poly, x(0).mul(&x(3)).sub(&x(1).mul(&x(2))));
        assert_eq!(m.minors(1).unwrap().len(), 4);
        assert!(m.minors(3).is_err());
    }

    #[test]
    fn submaximal_degrees() {
        let a = ex(1, 5, 3);
        let mut d: Vec<i64> = a.ia_generators().unwrap().iter().map(|g| g.1).collect();
        d.sort();
        assert_eq!(d, [vec![3; 4], vec![4; 12]].concat());
        for (p, deg) in a.ia_generators().unwrap() {
            assert!(p.is_homogeneous_of(deg));
        }
    }

    #[test]
    fn determinant_and_expansion() {
        for (w, s) in [(1, 5), (2, 4), (3, 6)] {
            let a = ex(w, s, 11);
            let det = a.determinant().unwrap();
            assert_eq!(det.homogeneous_degree(), Some(s as usize));
            assert!(a.last_row_expansion_holds().unwrap());
        }
        // a repeated row kills the determinant
        let a = ex(2, 3, 5);
        let n = a.delete_last_row().unwrap();
        let dup = n.adjoin_row(a.entries[0].clone()).unwrap();
        assert!(dup.determinant().unwrap().is_zero());
    }

    #[test]
    fn maximal_minors_are_syzygies_of_n() {
        let n = ex(1, 5, 9).delete_last_row().unwrap();
        let deltas = n.signed_maximal_minors().unwrap();
        for k in 0..3 {
            let mut s = Polynomial::zero(n.field(), 6);
            for i in 0..4 {
                s = s.add(&n.entry(k, i).mul(&deltas[i].0));
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn json_roundtrip() {
        let a = ex(2, 3, 1);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(HomogeneousMatrix::from_json(&s).unwrap(), a);
    }
}
