//! Graded quotient rings S = R/J handled one degree at a time.
//!
//! A degree-d piece stores its standard monomials (those that are not leading
//! monomials of J_d in graded-lex order) and, for every variable x_k, the
//! multiplication map S_{d-1} → S_d in that basis. S_d is obtained from
//! S_{d-1} as the span of the products x_k·b modulo the relations
//! x_k·(x_l·a) = x_l·(x_k·a) for a standard in degree d-2, together with the
//! generators of J of degree d. No Gröbner basis is ever formed.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use super::dense::{self, DenseMat};
use super::field::PrimeField;
use super::monomial::{count_monomials, monomial_basis, monomial_index, Monomial};
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Image of one standard monomial under multiplication by a variable.
#[derive(Clone, Debug)]
pub enum MulCol {
    Std(u32),
    Nf(Vec<(u32, u32)>),
}

#[derive(Debug)]
pub struct RingPiece {
    pub degree: usize,
    /// Standard monomials, largest first.
    pub std: Vec<Monomial>,
    /// For each monomial of R_d (by basis index), its position in `std`.
    std_pos: Vec<u32>,
    /// mul[k][b] = x_k · (standard monomial b of degree d-1), in this piece.
    mul: Vec<Vec<MulCol>>,
}

const NONE: u32 = u32::MAX;

impl RingPiece {
    pub fn dim(&self) -> usize {
        self.std.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        let p = self.std_pos[monomial_index(&m.0)];
        (p != NONE).then_some(p as usize)
    }

    pub fn mul_col(&self, k: usize, b: usize) -> &MulCol {
        &self.mul[k][b]
    }
}

pub struct QuotientRing {
    field: PrimeField,
    n_vars: usize,
    gens: Vec<(Polynomial, usize)>,
    pieces: RwLock<Vec<Arc<RingPiece>>>,
    mul_cache: Mutex<HashMap<(Polynomial, usize), Arc<DenseMat>>>,
}

impl std::fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuotientRing")
            .field("p", &self.field.p())
            .field("n_vars", &self.n_vars)
            .field("generators", &self.gens.len())
            .finish()
    }
}

impl QuotientRing {
    /// R/J for homogeneous generators of positive degree.
    pub fn new(field: PrimeField, n_vars: usize, gens: Vec<Polynomial>) -> Result<Self> {
        let mut g = Vec::new();
        for p in gens {
            if p.is_zero() {
                continue;
            }
            if p.n_vars() != n_vars {
                return Err(Error::Mismatch("generator has the wrong number of variables".into()));
            }
            let d = p.homogeneous_degree().ok_or(Error::NotHomogeneous { expected: -1 })?;
            if d == 0 {
                return Err(Error::Unsupported("unit ideal".into()));
            }
            g.push((p, d));
        }
        Ok(QuotientRing {
            field,
            n_vars,
            gens: g,
            pieces: RwLock::new(Vec::new()),
            mul_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn polynomial_ring(field: PrimeField, n_vars: usize) -> Self {
        Self::new(field, n_vars, Vec::new()).expect("no generators")
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn generators(&self) -> impl Iterator<Item = &Polynomial> {
        self.gens.iter().map(|g| &g.0)
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.gens.is_empty()
    }

    /// The degree-d piece (built on demand).
    pub fn piece(&self, d: usize) -> Arc<RingPiece> {
        {
            let r = self.pieces.read().expect("ring lock");
            if let Some(p) = r.get(d) {
                return Arc::clone(p);
            }
        }
        let mut w = self.pieces.write().expect("ring lock");
        while w.len() <= d {
            let next = self.build_piece(&w, w.len());
            w.push(Arc::new(next));
        }
        Arc::clone(&w[d])
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.piece(d as usize).dim()
        }
    }

    fn build_piece(&self, pieces: &[Arc<RingPiece>], d: usize) -> RingPiece {
        let nv = self.n_vars;
        let f = &self.field;
        let size = count_monomials(nv, d as i64);
        if d == 0 {
            return RingPiece { degree: 0, std: vec![Monomial::one(nv)], std_pos: vec![0], mul: Vec::new() };
        }
        let prev = &pieces[d - 1];
        if self.gens.is_empty() {
            let std = monomial_basis(nv, d as i64);
            let std_pos = (0..size as u32).collect();
            let mul = (0..nv)
                .map(|k| {
                    prev.std
                        .iter()
                        .map(|b| MulCol::Std(monomial_index(&b.mul_var(k).0) as u32))
                        .collect()
                })
                .collect();
            return RingPiece { degree: d, std, std_pos, mul };
        }
        // candidate columns: products of a variable with a standard monomial
        let mut col_of = vec![NONE; size];
        let mut prod_idx: Vec<Vec<usize>> = vec![Vec::with_capacity(prev.dim()); nv];
        for k in 0..nv {
            for b in &prev.std {
                let i = monomial_index(&b.mul_var(k).0);
                prod_idx[k].push(i);
                col_of[i] = 0;
            }
        }
        let mut cmons: Vec<usize> = (0..size).filter(|&i| col_of[i] == 0).collect();
        cmons.sort_unstable(); // basis index order = descending monomials
        for (c, &i) in cmons.iter().enumerate() {
            col_of[i] = c as u32;
        }
        let ncols = cmons.len();
        // x_k · v for v over std_{d-1}, as sparse C-columns
        let shift = |k: usize, v: &MulCol, out: &mut HashMap<usize, u32>, coef: u32| match v {
            MulCol::Std(j) => {
                let c = col_of[prod_idx[k][*j as usize]] as usize;
                let e = out.entry(c).or_insert(0);
                *e = f.add(*e, coef);
            }
            MulCol::Nf(list) => {
                for &(j, a) in list {
                    let c = col_of[prod_idx[k][j as usize]] as usize;
                    let e = out.entry(c).or_insert(0);
                    *e = f.add(*e, f.mul(a, coef));
                }
            }
        };
        let mut rows: Vec<HashMap<usize, u32>> = Vec::new();
        if d >= 2 {
            let prev2 = &pieces[d - 2];
            for a in 0..prev2.dim() {
                for k in 0..nv {
                    for l in k + 1..nv {
                        let ck = &prev.mul[k][a];
                        let cl = &prev.mul[l][a];
                        if matches!((ck, cl), (MulCol::Std(_), MulCol::Std(_))) {
                            continue;
                        }
                        let mut row = HashMap::new();
                        shift(k, cl, &mut row, 1);
                        shift(l, ck, &mut row, f.neg(1));
                        row.retain(|_, v| *v != 0);
                        if !row.is_empty() {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        for (g, gd) in &self.gens {
            if *gd != d {
                continue;
            }
            let mut row = HashMap::new();
            for (m, &c) in g.terms() {
                let i = monomial_index(&m.0);
                if col_of[i] != NONE {
                    let e = row.entry(col_of[i] as usize).or_insert(0);
                    *e = f.add(*e, c);
                    continue;
                }
                let k = m.first_var().expect("positive degree");
                let rest = m.div_var(k).expect("divisible");
                let v = nf_monomial(pieces, f, &rest);
                let list: Vec<(u32, u32)> =
                    v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j as u32, x)).collect();
                shift(k, &MulCol::Nf(list), &mut row, c);
            }
            row.retain(|_, v| *v != 0);
            if !row.is_empty() {
                rows.push(row);
            }
        }
        let mut mat = DenseMat::zeros(rows.len(), ncols);
        for (r, row) in rows.iter().enumerate() {
            for (&c, &v) in row {
                mat.set(r, c, v);
            }
        }
        let e = dense::rref(f, &mat);
        let mut pivot_row = vec![NONE; ncols];
        for (r, &c) in e.pivots.iter().enumerate() {
            pivot_row[c] = r as u32;
        }
        let free = e.free_columns();
        let mut free_pos = vec![NONE; ncols];
        for (t, &c) in free.iter().enumerate() {
            free_pos[c] = t as u32;
        }
        let all = monomial_basis(nv, d as i64);
        let std: Vec<Monomial> = free.iter().map(|&c| all[cmons[c]].clone()).collect();
        let mut std_pos = vec![NONE; size];
        for (t, &c) in free.iter().enumerate() {
            std_pos[cmons[c]] = t as u32;
        }
        let nf_of_col = |c: usize| -> MulCol {
            if free_pos[c] != NONE {
                return MulCol::Std(free_pos[c]);
            }
            let r = pivot_row[c] as usize;
            let row = e.rows.row(r);
            MulCol::Nf(
                free.iter()
                    .enumerate()
                    .filter(|(_, &fc)| row[fc] != 0)
                    .map(|(t, &fc)| (t as u32, f.neg(row[fc])))
                    .collect(),
            )
        };
        let mul = (0..nv)
            .map(|k| prod_idx[k].iter().map(|&i| nf_of_col(col_of[i] as usize)).collect())
            .collect();
        RingPiece { degree: d, std, std_pos, mul }
    }

    /// Dense normal form of a homogeneous polynomial in the basis of S_d.
    pub fn normal_form(&self, poly: &Polynomial) -> Result<Vec<u32>> {
        let Some(d) = poly.total_degree() else {
            return Ok(Vec::new());
        };
        if poly.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous { expected: d as i64 });
        }
        self.piece(d);
        let pieces = self.pieces.read().expect("ring lock");
        let f = &self.field;
        let mut out = vec![0u32; pieces[d].dim()];
        for (m, &c) in poly.terms() {
            let v = nf_monomial(&pieces, f, m);
            for (o, x) in out.iter_mut().zip(v) {
                *o = f.add(*o, f.mul(x, c));
            }
        }
        Ok(out)
    }

    /// Normal form of a homogeneous polynomial of known degree (zero allowed).
    pub fn normal_form_deg(&self, poly: &Polynomial, d: usize) -> Vec<u32> {
        if poly.is_zero() {
            return vec![0; self.dim(d as i64)];
        }
        self.normal_form(poly).expect("homogeneous input")
    }

    /// The standard-monomial combination with coefficient vector v.
    pub fn to_polynomial(&self, d: usize, v: &[u32]) -> Polynomial {
        let piece = self.piece(d);
        Polynomial::from_terms(
            self.field,
            self.n_vars,
            piece.std.iter().zip(v).filter(|(_, &c)| c != 0).map(|(m, &c)| (m.clone(), c)),
        )
    }

    /// Multiplication by `c` (homogeneous of degree e) as a dense matrix
    /// S_d → S_{d+e}: rows index S_{d+e}, columns S_d.
    pub fn mul_matrix(&self, c: &Polynomial, d: usize) -> Arc<DenseMat> {
        let key = (c.clone(), d);
        if let Some(m) = self.mul_cache.lock().expect("cache lock").get(&key) {
            return Arc::clone(m);
        }
        let n = self.dim(d as i64);
        let m = Arc::new(self.mul_batch(c, d, &DenseMat::identity(n)));
        self.mul_cache.lock().expect("cache lock").insert(key, Arc::clone(&m));
        m
    }

    /// c · X where the columns of X are vectors in S_d.
    pub fn mul_batch(&self, c: &Polynomial, d: usize, x: &DenseMat) -> DenseMat {
        let Some(e) = c.total_degree() else {
            return DenseMat::zeros(self.dim(d as i64), x.cols);
        };
        assert_eq!(x.rows, self.dim(d as i64), "vector length does not match S_d");
        self.piece(d + e);
        let terms: Vec<(&Monomial, u32)> = c.terms().iter().map(|(m, &v)| (m, v)).collect();
        let pieces = self.pieces.read().expect("ring lock");
        mul_terms(&pieces, &self.field, &terms, d, e, x)
    }

    /// x_k · v for v in S_d.
    pub fn mul_var_vec(&self, k: usize, d: usize, v: &[u32]) -> Vec<u32> {
        let piece = self.piece(d + 1);
        let mut acc = vec![0u64; piece.dim()];
        apply_mul(&piece.mul[k], v, &mut acc, &self.field);
        reduce_vec(&acc, &self.field)
    }

    /// Memory of the multiplication cache is released.
    pub fn clear_cache(&self) {
        self.mul_cache.lock().expect("cache lock").clear();
    }
}

fn reduce_vec(acc: &[u64], f: &PrimeField) -> Vec<u32> {
    let p = f.p() as u64;
    acc.iter().map(|&x| (x % p) as u32).collect()
}

/// acc += mul · v (accumulated without reduction; callers reduce).
fn apply_mul(mul: &[MulCol], v: &[u32], acc: &mut [u64], f: &PrimeField) {
    let p = f.p() as u64;
    for (b, col) in mul.iter().enumerate() {
        let x = v[b] as u64;
        if x == 0 {
            continue;
        }
        match col {
            MulCol::Std(j) => acc[*j as usize] += x,
            MulCol::Nf(list) => {
                for &(j, a) in list {
                    acc[j as usize] = (acc[j as usize] + a as u64 * x) % p;
                }
            }
        }
    }
}

fn nf_monomial(pieces: &[Arc<RingPiece>], f: &PrimeField, m: &Monomial) -> Vec<u32> {
    let d = m.degree();
    let piece = &pieces[d];
    let mut out = vec![0u32; piece.dim()];
    if let Some(pos) = piece.position(m) {
        out[pos] = 1;
        return out;
    }
    let k = m.first_var().expect("degree 0 monomial is standard");
    let rest = m.div_var(k).expect("divisible");
    let v = nf_monomial(pieces, f, &rest);
    let mut acc = vec![0u64; piece.dim()];
    apply_mul(&piece.mul[k], &v, &mut acc, f);
    reduce_vec(&acc, f)
}

/// Σ_t c_t · m_t · X where every m_t has degree e (after removing the first
/// variables already consumed by the recursion).
fn mul_terms(
    pieces: &[Arc<RingPiece>],
    f: &PrimeField,
    terms: &[(&Monomial, u32)],
    d: usize,
    e: usize,
    x: &DenseMat,
) -> DenseMat {
    let p = f.p() as u64;
    if e == 0 {
        let c = terms.iter().fold(0u32, |s, t| f.add(s, t.1));
        let mut out = x.clone();
        for v in &mut out.data {
            *v = (*v as u64 * c as u64 % p) as u32;
        }
        return out;
    }
    // split off one variable: the first variable of the remaining exponent
    let mut groups: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); pieces[0].std[0].n_vars()];
    for &(m, c) in terms {
        let k = m.first_var().expect("positive degree");
        groups[k].push((m.div_var(k).expect("divisible"), c));
    }
    let target = &pieces[d + e];
    let cols = x.cols;
    let mut acc = vec![0u64; target.dim() * cols];
    for (k, g) in groups.iter().enumerate() {
        if g.is_empty() {
            continue;
        }
        let refs: Vec<(&Monomial, u32)> = g.iter().map(|(m, c)| (m, *c)).collect();
        let y = mul_terms(pieces, f, &refs, d, e - 1, x);
        for (b, col) in target.mul[k].iter().enumerate() {
            let src = y.row(b);
            if src.iter().all(|&s| s == 0) {
                continue;
            }
            match col {
                MulCol::Std(j) => {
                    let dst = &mut acc[*j as usize * cols..(*j as usize + 1) * cols];
                    for (a, &s) in dst.iter_mut().zip(src) {
                        *a += s as u64;
                    }
                }
                MulCol::Nf(list) => {
                    for &(j, a) in list {
                        let dst = &mut acc[j as usize * cols..(j as usize + 1) * cols];
                        for (o, &s) in dst.iter_mut().zip(src) {
                            *o += a as u64 * s as u64;
                        }
                    }
                }
            }
        }
        // keep the accumulator far from overflow
        for a in &mut acc {
            *a %= p;
        }
    }
    DenseMat { rows: target.dim(), cols, data: acc.into_iter().map(|a| a as u32).collect() }
}
