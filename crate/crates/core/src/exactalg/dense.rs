//! Dense linear algebra over F_p.
//!
//! Elimination is blocked: a panel of columns is reduced with scalar code to
//! pick pivots, then the remaining columns are updated with one floating-point
//! GEMM per panel. Entries are kept as exact integers in `f64`; every GEMM
//! inner dimension is bounded so partial sums stay below 2^53.

use super::field::PrimeField;

const PANEL: usize = 64;

/// Row-major dense matrix with entries in [0, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl DenseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        DenseMat { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMat {
        let mut t = DenseMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Append the rows of `other` (same column count).
    pub fn append_rows(&mut self, other: &DenseMat) {
        assert_eq!(self.cols, other.cols);
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
    }

    /// Columns `idx` of every row, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> DenseMat {
        let mut out = DenseMat::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = &mut out.data[i * idx.len()..(i + 1) * idx.len()];
            for (d, &j) in dst.iter_mut().zip(idx) {
                *d = src[j];
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &PrimeField, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = (acc + *a as u64 * *b as u64) % p;
                }
                acc as u32
            })
            .collect()
    }
}

/// Largest GEMM inner dimension that keeps exact integer sums in f64.
fn max_inner(field: &PrimeField) -> usize {
    let pm = (field.p() - 1) as f64;
    let lim = ((1u64 << 52) as f64 / (pm * pm)).floor() as usize;
    lim.max(1)
}

#[inline]
fn reduce(x: f64, p: f64, pinv: f64) -> f64 {
    let q = (x * pinv) as i64 as f64;
    let mut y = x - q * p;
    if y < 0.0 {
        y += p;
    }
    if y >= p {
        y -= p;
    }
    y
}

fn reduce_slice(xs: &mut [f64], p: f64) {
    let pinv = 1.0 / p;
    for x in xs {
        *x = reduce(*x, p, pinv);
    }
}

/// C(m×n, row stride ldc) += alpha · A(m×k) · B(k×n), reduced into [0, p).
#[allow(clippy::too_many_arguments)]
fn gemm_mod(
    field: &PrimeField,
    m: usize,
    k: usize,
    n: usize,
    alpha: f64,
    a: &[f64],
    lda: usize,
    b: &[f64],
    ldb: usize,
    c: &mut [f64],
    ldc: usize,
) {
    if m == 0 || n == 0 || k == 0 {
        return;
    }
    let chunk = max_inner(field);
    let p = field.p() as f64;
    let mut k0 = 0;
    while k0 < k {
        let kk = chunk.min(k - k0);
        assert!(a.len() >= (m - 1) * lda + k0 + kk);
        assert!(b.len() >= (k0 + kk - 1) * ldb + n);
        assert!(c.len() >= (m - 1) * ldc + n);
        // SAFETY: the asserts above keep every accessed element in bounds.
        unsafe {
            matrixmultiply::dgemm(
                m,
                kk,
                n,
                alpha,
                a.as_ptr().add(k0),
                lda as isize,
                1,
                b.as_ptr().add(k0 * ldb),
                ldb as isize,
                1,
                1.0,
                c.as_mut_ptr(),
                ldc as isize,
                1,
            );
        }
        for i in 0..m {
            reduce_slice(&mut c[i * ldc..i * ldc + n], p);
        }
        k0 += kk;
    }
}

/// Product of dense matrices over F_p.
pub fn matmul(field: &PrimeField, a: &DenseMat, b: &DenseMat) -> DenseMat {
    assert_eq!(a.cols, b.rows, "matmul shape mismatch");
    let af: Vec<f64> = a.data.iter().map(|&x| x as f64).collect();
    let bf: Vec<f64> = b.data.iter().map(|&x| x as f64).collect();
    let mut cf = vec![0f64; a.rows * b.cols];
    gemm_mod(field, a.rows, a.cols, b.cols, 1.0, &af, a.cols, &bf, b.cols, &mut cf, b.cols);
    DenseMat { rows: a.rows, cols: b.cols, data: cf.into_iter().map(|x| x as u32).collect() }
}

/// Result of Gauss–Jordan elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub cols: usize,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
    /// The nonzero rows (rank × cols); each has a 1 at its pivot and zeros
    /// in every other pivot column.
    pub rows: DenseMat,
    /// Rows that ended up without a pivot (only kept when requested).
    pub residual: Option<DenseMat>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot, increasing.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_piv = vec![false; self.cols];
        for &c in &self.pivots {
            is_piv[c] = true;
        }
        (0..self.cols).filter(|&c| !is_piv[c]).collect()
    }

    /// For a free column f, the kernel vector with a 1 at f, zeros at the other
    /// free columns, and minus the RREF column at the pivots.
    pub fn kernel_vector(&self, field: &PrimeField, f: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.cols];
        v[f] = 1;
        for (r, &pc) in self.pivots.iter().enumerate() {
            v[pc] = field.neg(self.rows.get(r, f));
        }
        v
    }

    /// Basis of the right kernel of the eliminated matrix.
    pub fn kernel_basis(&self, field: &PrimeField) -> Vec<Vec<u32>> {
        self.free_columns().into_iter().map(|f| self.kernel_vector(field, f)).collect()
    }
}

/// Gauss–Jordan elimination of `m`. Pivots are only chosen among the first
/// `pivot_limit` columns; later columns are carried along (augmented systems).
/// With `full = false` rows above a pivot are not cleared (echelon form only).
pub fn eliminate(
    field: &PrimeField,
    m: &DenseMat,
    pivot_limit: usize,
    full: bool,
    keep_residual: bool,
) -> Rref {
    let rows = m.rows;
    let cols = m.cols;
    let mut a: Vec<f64> = m.data.iter().map(|&x| x as f64).collect();
    let (pivots, rank) = eliminate_in_place(field, &mut a, rows, cols, pivot_limit.min(cols), full);
    let to_u32 = |s: &[f64]| s.iter().map(|&x| x as u32).collect::<Vec<u32>>();
    let piv_rows = DenseMat { rows: rank, cols, data: to_u32(&a[..rank * cols]) };
    let residual = keep_residual
        .then(|| DenseMat { rows: rows - rank, cols, data: to_u32(&a[rank * cols..]) });
    Rref { cols, pivots, rows: piv_rows, residual }
}

pub fn rref(field: &PrimeField, m: &DenseMat) -> Rref {
    eliminate(field, m, m.cols, true, false)
}

pub fn rank(field: &PrimeField, m: &DenseMat) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // eliminate along the shorter side
    if m.rows > 2 * m.cols || m.cols > 2 * m.rows {
        let mut a: Vec<f64> = m.data.iter().map(|&x| x as f64).collect();
        if m.rows > m.cols {
            return eliminate_in_place(field, &mut a, m.rows, m.cols, m.cols, false).1;
        }
        let t = m.transpose();
        let mut a: Vec<f64> = t.data.iter().map(|&x| x as f64).collect();
        return eliminate_in_place(field, &mut a, t.rows, t.cols, t.cols, false).1;
    }
    let mut a: Vec<f64> = m.data.iter().map(|&x| x as f64).collect();
    eliminate_in_place(field, &mut a, m.rows, m.cols, m.cols, false).1
}

/// A row space grown incrementally, kept in reduced echelon form: every row
/// has a 1 at its pivot and zeros at all other pivots. Pivots are in order of
/// discovery, not sorted.
#[derive(Clone, Debug)]
pub struct RowBasis {
    pub cols: usize,
    pub pivots: Vec<usize>,
    pub rows: DenseMat,
}

impl RowBasis {
    pub fn new(cols: usize) -> Self {
        RowBasis { cols, pivots: Vec::new(), rows: DenseMat::zeros(0, cols) }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.cols
    }

    /// Add the rows of x; returns how many new pivots appeared.
    pub fn add_rows(&mut self, field: &PrimeField, x: &DenseMat) -> usize {
        assert_eq!(x.cols, self.cols, "row length mismatch");
        let mut x = x.clone();
        if self.rank() > 0 && x.rows > 0 {
            let prod = matmul(field, &x.select_cols(&self.pivots), &self.rows);
            sub_assign(field, &mut x, &prod);
        }
        let e = rref(field, &x);
        if e.rank() == 0 {
            return 0;
        }
        if self.rank() > 0 {
            let prod = matmul(field, &self.rows.select_cols(&e.pivots), &e.rows);
            sub_assign(field, &mut self.rows, &prod);
        }
        self.rows.append_rows(&e.rows);
        self.pivots.extend_from_slice(&e.pivots);
        e.rank()
    }
}

fn sub_assign(field: &PrimeField, a: &mut DenseMat, b: &DenseMat) {
    let p = field.p();
    for (x, &y) in a.data.iter_mut().zip(&b.data) {
        *x = if *x >= y { *x - y } else { *x + p - y };
    }
}

/// Solve A·X = B column by column. Returns None for a column without solution.
pub fn solve(field: &PrimeField, a: &DenseMat, b: &DenseMat) -> Vec<Option<Vec<u32>>> {
    assert_eq!(a.rows, b.rows);
    let n = a.cols;
    let mut aug = DenseMat::zeros(a.rows, n + b.cols);
    for i in 0..a.rows {
        aug.row_mut(i)[..n].copy_from_slice(a.row(i));
        aug.row_mut(i)[n..].copy_from_slice(b.row(i));
    }
    let e = eliminate(field, &aug, n, true, true);
    let res = e.residual.as_ref().expect("residual requested");
    (0..b.cols)
        .map(|j| {
            if (0..res.rows).any(|i| res.get(i, n + j) != 0) {
                return None;
            }
            let mut x = vec![0u32; n];
            for (r, &pc) in e.pivots.iter().enumerate() {
                x[pc] = e.rows.get(r, n + j);
            }
            Some(x)
        })
        .collect()
}

fn swap_rows(a: &mut [f64], cols: usize, i: usize, j: usize) {
    if i == j {
        return;
    }
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let (x, y) = a.split_at_mut(hi * cols);
    x[lo * cols..(lo + 1) * cols].swap_with_slice(&mut y[..cols]);
}

/// Core blocked elimination. After return, rows 0..rank hold the pivot rows.
fn eliminate_in_place(
    field: &PrimeField,
    a: &mut [f64],
    rows: usize,
    cols: usize,
    pivot_limit: usize,
    full: bool,
) -> (Vec<usize>, usize) {
    let p = field.p();
    let pf = p as f64;
    let pu = p as u64;
    let bw = PANEL.min(max_inner(field));
    let mut pivots = Vec::new();
    let mut r = 0usize;
    let mut c0 = 0usize;
    let mut panel: Vec<u64> = Vec::new();
    while c0 < pivot_limit && r < rows {
        let w = bw.min(pivot_limit - c0);
        let pr = rows - r;
        // scalar elimination on a copy of the panel to choose pivots
        panel.clear();
        panel.reserve(pr * w);
        for i in 0..pr {
            let base = (r + i) * cols + c0;
            panel.extend(a[base..base + w].iter().map(|&x| x as u64));
        }
        let mut used = vec![false; pr];
        let mut sel_rows: Vec<usize> = Vec::new();
        let mut sel_cols: Vec<usize> = Vec::new();
        for j in 0..w {
            let Some(i) = (0..pr).find(|&i| !used[i] && panel[i * w + j] != 0) else {
                continue;
            };
            used[i] = true;
            sel_rows.push(i);
            sel_cols.push(c0 + j);
            let inv = field.inv(panel[i * w + j] as u32) as u64;
            for x in &mut panel[i * w + j..(i + 1) * w] {
                *x = *x * inv % pu;
            }
            for i2 in 0..pr {
                if used[i2] {
                    continue;
                }
                let f = panel[i2 * w + j];
                if f == 0 {
                    continue;
                }
                let g = pu - f;
                for jj in j..w {
                    let v = panel[i * w + jj];
                    panel[i2 * w + jj] = (panel[i2 * w + jj] + g * v) % pu;
                }
            }
        }
        let k = sel_rows.len();
        if k == 0 {
            c0 += w;
            continue;
        }
        // move the selected rows to positions r..r+k, in pivot order
        let mut pos: Vec<usize> = (0..pr).collect(); // panel row -> current offset
        let mut at: Vec<usize> = (0..pr).collect(); // current offset -> panel row
        for (t, &i) in sel_rows.iter().enumerate() {
            let cur = pos[i];
            if cur != t {
                swap_rows(a, cols, r + t, r + cur);
                let other = at[t];
                at[t] = i;
                at[cur] = other;
                pos[i] = t;
                pos[other] = cur;
            }
        }
        // K = pivot block, invert it
        let mut kinv = invert_block(field, a, cols, r, &sel_cols);
        let ncols = cols - c0;
        // W = K^{-1} · pivot rows[c0..]
        let mut wmat = vec![0f64; k * ncols];
        {
            let src: Vec<f64> = (0..k)
                .flat_map(|t| a[(r + t) * cols + c0..(r + t + 1) * cols].iter().copied())
                .collect();
            let kf: Vec<f64> = kinv.drain(..).map(|x| x as f64).collect();
            gemm_mod(field, k, k, ncols, 1.0, &kf, k, &src, ncols, &mut wmat, ncols);
        }
        // update the other rows: row -= row[sel_cols] · W
        let update = |a: &mut [f64], lo: usize, hi: usize| {
            if lo >= hi {
                return;
            }
            let nr = hi - lo;
            let mut x = vec![0f64; nr * k];
            let mut any = false;
            for i in 0..nr {
                let row = &a[(lo + i) * cols..(lo + i + 1) * cols];
                for (t, &c) in sel_cols.iter().enumerate() {
                    let v = row[c];
                    x[i * k + t] = v;
                    any |= v != 0.0;
                }
            }
            if !any {
                return;
            }
            let neg = -1.0;
            let cslice = &mut a[lo * cols + c0..];
            gemm_mod(field, nr, k, ncols, neg, &x, k, &wmat, ncols, cslice, cols);
        };
        if full {
            update(a, 0, r);
        }
        update(a, r + k, rows);
        for t in 0..k {
            a[(r + t) * cols + c0..(r + t + 1) * cols]
                .copy_from_slice(&wmat[t * ncols..(t + 1) * ncols]);
        }
        let _ = pf;
        pivots.extend_from_slice(&sel_cols);
        r += k;
        c0 += w;
    }
    (pivots, r)
}

/// Inverse of the k×k block a[r..r+k][sel_cols], row-major.
fn invert_block(field: &PrimeField, a: &[f64], cols: usize, r: usize, sel_cols: &[usize]) -> Vec<u32> {
    let k = sel_cols.len();
    let w = 2 * k;
    let mut m = vec![0u32; k * w];
    for i in 0..k {
        for (t, &c) in sel_cols.iter().enumerate() {
            m[i * w + t] = a[(r + i) * cols + c] as u32;
        }
        m[i * w + k + i] = 1;
    }
    for j in 0..k {
        let piv = (j..k).find(|&i| m[i * w + j] != 0).expect("pivot block is invertible");
        if piv != j {
            for c in 0..w {
                m.swap(piv * w + c, j * w + c);
            }
        }
        let inv = field.inv(m[j * w + j]);
        for c in 0..w {
            m[j * w + c] = field.mul(m[j * w + c], inv);
        }
        for i in 0..k {
            if i == j {
                continue;
            }
            let f = m[i * w + j];
            if f == 0 {
                continue;
            }
            for c in 0..w {
                let v = field.mul(f, m[j * w + c]);
                m[i * w + c] = field.sub(m[i * w + c], v);
            }
        }
    }
    let mut out = vec![0u32; k * k];
    for i in 0..k {
        out[i * k..(i + 1) * k].copy_from_slice(&m[i * w + k..(i + 1) * w]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, rank_cap: usize, seed: u64, f: &PrimeField) -> DenseMat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut l = DenseMat::zeros(rows, rank_cap);
        let mut r = DenseMat::zeros(rank_cap, cols);
        for x in l.data.iter_mut().chain(r.data.iter_mut()) {
            *x = rng.gen_range(0..f.p());
        }
        matmul(f, &l, &r)
    }

    fn naive_rank(f: &PrimeField, m: &DenseMat) -> usize {
        let mut a = m.clone();
        let mut r = 0;
        for c in 0..a.cols {
            let Some(i) = (r..a.rows).find(|&i| a.get(i, c) != 0) else { continue };
            for j in 0..a.cols {
                let t = a.get(i, j);
                a.set(i, j, a.get(r, j));
                a.set(r, j, t);
            }
            let inv = f.inv(a.get(r, c));
            for i2 in r + 1..a.rows {
                let g = f.mul(a.get(i2, c), inv);
                for j in 0..a.cols {
                    let v = f.sub(a.get(i2, j), f.mul(g, a.get(r, j)));
                    a.set(i2, j, v);
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn row_basis_matches_rank() {
        let f = PrimeField::default();
        let m = random(300, 120, 90, 9, &f);
        let mut b = RowBasis::new(120);
        for chunk in 0..3 {
            let rows: Vec<Vec<u32>> = (chunk * 100..(chunk + 1) * 100).map(|i| m.row(i).to_vec()).collect();
            b.add_rows(&f, &DenseMat::from_rows(120, &rows));
        }
        assert_eq!(b.rank(), 90);
        // every original row reduces to zero against the basis
        let prod = matmul(&f, &m.select_cols(&b.pivots), &b.rows);
        assert_eq!(prod, m);
    }

    #[test]
    fn small_examples() {
        let f = PrimeField::default();
        assert_eq!(rank(&f, &DenseMat::identity(3)), 3);
        assert_eq!(rank(&f, &DenseMat::zeros(3, 4)), 0);
        let m = DenseMat::from_rows(2, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(rank(&f, &m), 1);
    }

    #[test]
    fn blocked_matches_naive() {
        let f = PrimeField::default();
        for (i, &(r, c, k)) in [(150, 170, 90), (200, 130, 130), (70, 300, 40), (129, 129, 129)]
            .iter()
            .enumerate()
        {
            let m = random(r, c, k, i as u64, &f);
            assert_eq!(rank(&f, &m), naive_rank(&f, &m));
            let e = rref(&f, &m);
            assert_eq!(e.rank(), naive_rank(&f, &m));
            for v in e.kernel_basis(&f) {
                assert!(m.mul_vec(&f, &v).iter().all(|&x| x == 0));
            }
            assert_eq!(e.kernel_basis(&f).len(), c - e.rank());
        }
    }

    #[test]
    fn small_prime_chunks_inner_products() {
        let f = PrimeField::new(7).unwrap();
        let m = random(90, 80, 50, 9, &f);
        assert_eq!(rank(&f, &m), naive_rank(&f, &m));
        let big = PrimeField::new(33554393).unwrap();
        let m = random(100, 90, 70, 10, &big);
        assert_eq!(rank(&big, &m), 70.min(naive_rank(&big, &m)));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = PrimeField::default();
        let a = DenseMat::from_rows(2, &[vec![1, 2], vec![2, 4], vec![0, 1]]);
        let b = DenseMat::from_rows(2, &[vec![5, 1], vec![10, 0], vec![2, 0]]);
        let s = solve(&f, &a, &b);
        assert_eq!(s[0], Some(vec![1, 2]));
        assert!(s[1].is_none());
    }
}
