//! Finitely presented graded modules over R, B = R/I_B and A = R/I_A.
//!
//! A module is the cokernel of ⊕_j S(−r_j) → ⊕_i S(−g_i), given by columns
//! of homogeneous polynomials. Everything is computed one degree at a time in
//! the standard-monomial bases of the quotient ring: graded pieces, Hom,
//! syzygies found by a stabilized degreewise search, and Ext¹/Ext² from the
//! resulting truncated resolution.

mod standard;

pub use standard::{generator_columns, std_module, ModuleContext, StdModule};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::dense::{self, matmul};
use crate::exactalg::quotient::{MulCol, RingPiece};
use crate::exactalg::{DenseMat, Polynomial, PrimeField, QuotientRing, RowBasis};

pub const DEFAULT_WINDOW: usize = 3;

/// Default degree bound 2s + 4 for the syzygy search.
pub fn default_bound(s: i64) -> i64 {
    2 * s + 4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseRing {
    R,
    B,
    A,
}

#[derive(Debug)]
pub struct Ring {
    pub kind: BaseRing,
    pub q: QuotientRing,
    max_gen_degree: i64,
}

impl Ring {
    pub fn new(kind: BaseRing, q: QuotientRing) -> Arc<Ring> {
        let max_gen_degree = q.generators().filter_map(|g| g.total_degree()).max().unwrap_or(0) as i64;
        Arc::new(Ring { kind, q, max_gen_degree })
    }

    pub fn field(&self) -> PrimeField {
        *self.q.field()
    }

    pub fn dim(&self, d: i64) -> usize {
        self.q.dim(d)
    }

    fn piece(&self, d: i64) -> Option<Arc<RingPiece>> {
        (d >= 0).then(|| self.q.piece(d as usize))
    }
}

/// An element of ⊕_i S(−g_i) of the given degree; coeffs[i] is homogeneous
/// of degree `degree − g_i` or zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub degree: i64,
    pub coeffs: Vec<Polynomial>,
}

/// Where the summands of ⊕_i S(−g_i) sit in degree w.
#[derive(Clone, Debug)]
struct Layout {
    offs: Vec<usize>,
    dims: Vec<usize>,
    total: usize,
}

fn layout(ring: &Ring, twists: &[i64], w: i64) -> Layout {
    let dims: Vec<usize> = twists.iter().map(|&g| ring.dim(w - g)).collect();
    let mut offs = Vec::with_capacity(dims.len());
    let mut total = 0;
    for &d in &dims {
        offs.push(total);
        total += d;
    }
    Layout { offs, dims, total }
}

/// x_k·src for src in (⊕ S(−g_i))_{w−1}, written into dst in degree w.
fn mul_var_into(
    pieces: &[Option<Arc<RingPiece>>],
    k: usize,
    from: &Layout,
    to: &Layout,
    src: &[u32],
    dst: &mut [u32],
    p: u64,
) {
    for (i, piece) in pieces.iter().enumerate() {
        let Some(piece) = piece else { continue };
        if from.dims[i] == 0 || piece.degree == 0 {
            continue;
        }
        let s = &src[from.offs[i]..from.offs[i] + from.dims[i]];
        let mut acc = vec![0u64; to.dims[i]];
        // products stay below 2^50; reduce them early for large primes
        let big = p > 1 << 20;
        for (b, &x) in s.iter().enumerate() {
            if x == 0 {
                continue;
            }
            match piece.mul_col(k, b) {
                MulCol::Std(j) => acc[*j as usize] += x as u64,
                MulCol::Nf(list) => {
                    for &(j, a) in list {
                        let t = a as u64 * x as u64;
                        acc[j as usize] += if big { t % p } else { t };
                    }
                }
            }
        }
        for (d, a) in dst[to.offs[i]..to.offs[i] + to.dims[i]].iter_mut().zip(acc) {
            *d = (a % p) as u32;
        }
    }
}

/// The map ⊕_j S(−r_j) → ⊕_i S(−g_i) given by columns, evaluated degree by
/// degree. Row (j, m) of the degree-w matrix is m·column_j, for m running over
/// the standard monomials of S_{w−r_j}; it is obtained from the row of m/x_k
/// in degree w−1 by one multiplication with a variable.
struct MapEval {
    ring: Arc<Ring>,
    twists: Vec<i64>,
    cols: Vec<Column>,
    cur: Option<(i64, DenseMat)>,
}

impl MapEval {
    fn new(ring: Arc<Ring>, twists: Vec<i64>, cols: Vec<Column>) -> Self {
        MapEval { ring, twists, cols, cur: None }
    }

    fn min_degree(&self) -> i64 {
        self.cols.iter().map(|c| c.degree).min().unwrap_or(0)
    }

    fn source_twists(&self) -> Vec<i64> {
        self.cols.iter().map(|c| c.degree).collect()
    }

    fn at(&mut self, w: i64) -> &DenseMat {
        if matches!(&self.cur, Some((d, _)) if *d > w) {
            self.cur = None;
        }
        let mut from = match &self.cur {
            Some((d, _)) => *d + 1,
            None => self.min_degree().min(w),
        };
        while from <= w {
            let next = self.step(from);
            self.cur = Some((from, next));
            from += 1;
        }
        &self.cur.as_ref().expect("computed").1
    }

    fn step(&self, w: i64) -> DenseMat {
        let ring = &self.ring;
        let field = ring.field();
        let p = field.p() as u64;
        let to = layout(ring, &self.twists, w);
        let from = layout(ring, &self.twists, w - 1);
        let src = self.source_twists();
        let rows: usize = src.iter().map(|&r| ring.dim(w - r)).sum();
        let mut out = DenseMat::zeros(rows, to.total);
        let prev = match &self.cur {
            Some((d, m)) if *d == w - 1 => Some(m),
            _ => None,
        };
        let pieces: Vec<Option<Arc<RingPiece>>> = self.twists.iter().map(|&g| ring.piece(w - g)).collect();
        let mut row = 0usize;
        let mut prev_off = 0usize;
        for col in &self.cols {
            let e = w - col.degree;
            if e < 0 {
                continue;
            }
            if e == 0 {
                let dst = out.row_mut(row);
                for (i, c) in col.coeffs.iter().enumerate() {
                    let d = w - self.twists[i];
                    if c.is_zero() || d < 0 {
                        continue;
                    }
                    let nf = ring.q.normal_form_deg(c, d as usize);
                    dst[to.offs[i]..to.offs[i] + to.dims[i]].copy_from_slice(&nf);
                }
                row += 1;
                continue;
            }
            let prev = prev.expect("degree w−1 evaluated first");
            let piece = ring.q.piece(e as usize);
            let below = ring.q.piece(e as usize - 1);
            for m in &piece.std {
                let k = m.first_var().expect("positive degree");
                let idx = below.position(&m.div_var(k).expect("divisible")).expect("standard monomials are closed under division");
                let src_row = prev.row(prev_off + idx).to_vec();
                mul_var_into(&pieces, k, &from, &to, &src_row, out.row_mut(row), p);
                row += 1;
            }
            prev_off += below.dim();
        }
        out
    }
}

/// A graded piece M_w = F0_w / image, with the free (non-pivot) coordinates
/// of the image's echelon form as basis.
#[derive(Debug)]
pub struct ModPiece {
    pub degree: i64,
    pub ambient: usize,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    /// −(echelon rows restricted to the free columns)ᵀ, |free| × rank.
    red_t: DenseMat,
}

impl ModPiece {
    fn from_image(field: &PrimeField, degree: i64, ambient: usize, img: &DenseMat) -> ModPiece {
        let e = if img.rows == 0 { None } else { Some(dense::rref(field, img)) };
        let pivots = e.as_ref().map(|e| e.pivots.clone()).unwrap_or_default();
        let mut is_piv = vec![false; ambient];
        for &c in &pivots {
            is_piv[c] = true;
        }
        let free: Vec<usize> = (0..ambient).filter(|&c| !is_piv[c]).collect();
        let mut red_t = DenseMat::zeros(free.len(), pivots.len());
        if let Some(e) = &e {
            for r in 0..pivots.len() {
                let row = e.rows.row(r);
                for (t, &f) in free.iter().enumerate() {
                    red_t.set(t, r, field.neg(row[f]));
                }
            }
        }
        ModPiece { degree, ambient, pivots, free, red_t }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates in M_w of the columns of y (vectors of F0_w).
    fn project(&self, field: &PrimeField, y: &DenseMat) -> DenseMat {
        let mut out = select_rows(y, &self.free);
        if !self.pivots.is_empty() && y.cols > 0 {
            let corr = matmul(field, &self.red_t, &select_rows(y, &self.pivots));
            let p = field.p();
            for (o, c) in out.data.iter_mut().zip(corr.data) {
                *o = (*o + c) % p;
            }
        }
        out
    }
}

fn select_rows(m: &DenseMat, idx: &[usize]) -> DenseMat {
    let mut out = DenseMat::zeros(idx.len(), m.cols);
    for (t, &i) in idx.iter().enumerate() {
        out.row_mut(t).copy_from_slice(m.row(i));
    }
    out
}

/// Stabilization record for a syzygy search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub bound: i64,
    pub window: usize,
    pub converged: bool,
    /// Last degree examined.
    pub last_degree: i64,
}

/// A value computed from a possibly truncated resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certified {
    pub value: i64,
    pub bound: i64,
    pub window: usize,
    pub converged: bool,
}

impl Certified {
    pub fn exact(value: i64) -> Self {
        Certified { value, bound: 0, window: 0, converged: true }
    }

    pub fn into_result(self) -> Result<i64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged { bound: self.bound, window: self.window, partial: Some(self.value) })
        }
    }
}

#[derive(Clone, Debug)]
pub struct Syzygies {
    /// Minimal generators of the kernel, as columns over the source twists.
    pub columns: Vec<Column>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    /// twists[k]: generator degrees of F_k.
    pub twists: Vec<Vec<i64>>,
    /// maps[k]: the columns of F_{k+1} → F_k.
    pub maps: Vec<Vec<Column>>,
    pub provenance: Vec<Provenance>,
}

impl Resolution {
    pub fn converged(&self) -> bool {
        self.provenance.iter().all(|p| p.converged)
    }
}

pub struct GradedModulePresentation {
    name: String,
    ring: Arc<Ring>,
    gens: Vec<i64>,
    rels: Vec<Column>,
    pieces: Mutex<HashMap<i64, Arc<ModPiece>>>,
    eval: Mutex<MapEval>,
    resolutions: Mutex<HashMap<(usize, i64, usize), Arc<Resolution>>>,
}

impl std::fmt::Debug for GradedModulePresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedModulePresentation")
            .field("name", &self.name)
            .field("base", &self.ring.kind)
            .field("gens", &self.gens)
            .field("relations", &self.rels.len())
            .finish()
    }
}

#[derive(Serialize)]
struct PresentationJson<'a> {
    name: &'a str,
    base: BaseRing,
    gen_twists: &'a [i64],
    relations: &'a [Column],
}

impl Serialize for GradedModulePresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationJson { name: &self.name, base: self.ring.kind, gen_twists: &self.gens, relations: &self.rels }
            .serialize(s)
    }
}

impl GradedModulePresentation {
    pub fn new(name: impl Into<String>, ring: Arc<Ring>, gens: Vec<i64>, rels: Vec<Column>) -> Result<Self> {
        let name = name.into();
        for (j, c) in rels.iter().enumerate() {
            if c.coeffs.len() != gens.len() {
                return Err(Error::Mismatch(format!("{name}: relation {j} has {} entries", c.coeffs.len())));
            }
            for (i, p) in c.coeffs.iter().enumerate() {
                if !p.is_zero() && !p.is_homogeneous_of(c.degree - gens[i]) {
                    return Err(Error::Mismatch(format!(
                        "{name}: relation {j} entry {i} is not homogeneous of degree {}",
                        c.degree - gens[i]
                    )));
                }
            }
        }
        let eval = MapEval::new(Arc::clone(&ring), gens.clone(), rels.clone());
        Ok(GradedModulePresentation {
            name,
            ring,
            gens,
            rels,
            pieces: Mutex::new(HashMap::new()),
            eval: Mutex::new(eval),
            resolutions: Mutex::new(HashMap::new()),
        })
    }

    /// The free module ⊕ S(−g_i).
    pub fn free(name: impl Into<String>, ring: Arc<Ring>, gens: Vec<i64>) -> Self {
        Self::new(name, ring, gens, Vec::new()).expect("no relations")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn base(&self) -> BaseRing {
        self.ring.kind
    }

    pub fn gen_twists(&self) -> &[i64] {
        &self.gens
    }

    pub fn relations(&self) -> &[Column] {
        &self.rels
    }

    /// M(c): the same module with degrees shifted so that M(c)_v = M_{v+c}.
    pub fn twisted(&self, c: i64) -> Self {
        let rels = self.rels.iter().map(|r| Column { degree: r.degree - c, coeffs: r.coeffs.clone() }).collect();
        let name = format!("{}({c})", self.name);
        Self::new(name, Arc::clone(&self.ring), self.gens.iter().map(|g| g - c).collect(), rels)
            .expect("twisting keeps homogeneity")
    }

    /// The same relations read over another base ring.
    pub fn over(&self, ring: Arc<Ring>) -> Self {
        Self::new(self.name.clone(), ring, self.gens.clone(), self.rels.clone()).expect("same data")
    }

    /// With relations added.
    pub fn with_relations(&self, name: impl Into<String>, extra: Vec<Column>) -> Result<Self> {
        let mut rels = self.rels.clone();
        rels.extend(extra);
        Self::new(name, Arc::clone(&self.ring), self.gens.clone(), rels)
    }

    pub fn mod_piece(&self, w: i64) -> Arc<ModPiece> {
        if let Some(p) = self.pieces.lock().expect("piece cache").get(&w) {
            return Arc::clone(p);
        }
        let lay = layout(&self.ring, &self.gens, w);
        let piece = if lay.total == 0 {
            ModPiece::from_image(&self.ring.field(), w, 0, &DenseMat::zeros(0, 0))
        } else {
            let mut ev = self.eval.lock().expect("evaluator");
            if ev.cols.iter().any(|c| c.degree <= w) {
                ModPiece::from_image(&self.ring.field(), w, lay.total, ev.at(w))
            } else {
                ModPiece::from_image(&self.ring.field(), w, lay.total, &DenseMat::zeros(0, lay.total))
            }
        };
        let piece = Arc::new(piece);
        self.pieces.lock().expect("piece cache").insert(w, Arc::clone(&piece));
        piece
    }

    /// dim M_w.
    pub fn piece_dim(&self, w: i64) -> usize {
        self.mod_piece(w).dim()
    }

    /// Minimal free resolution F_0 ← F_1 ← … ← F_len, with F_0, F_1 taken
    /// from the presentation and later terms found by the syzygy search.
    pub fn resolution(&self, len: usize, bound: i64, window: usize) -> Result<Arc<Resolution>> {
        let key = (len, bound, window);
        if let Some(r) = self.resolutions.lock().expect("resolution cache").get(&key) {
            return Ok(Arc::clone(r));
        }
        let mut res = Resolution {
            twists: vec![self.gens.clone(), self.rels.iter().map(|c| c.degree).collect()],
            maps: vec![self.rels.clone()],
            provenance: Vec::new(),
        };
        for k in 2..=len {
            let syz = syzygies(&self.ring, &res.twists[k - 2], &res.maps[k - 2], bound, window)?;
            res.twists.push(syz.columns.iter().map(|c| c.degree).collect());
            res.maps.push(syz.columns);
            res.provenance.push(syz.provenance);
        }
        let res = Arc::new(res);
        self.resolutions.lock().expect("resolution cache").insert(key, Arc::clone(&res));
        Ok(res)
    }
}

/// Matrix of Hom(F_src, N)_v → Hom(F_tgt, N)_v induced by `cols`, the images
/// of the generators of F_tgt in F_src. Returns (matrix, domain dimension).
fn hom_matrix(n: &GradedModulePresentation, src: &[i64], cols: &[Column], v: i64) -> (DenseMat, usize) {
    let field = n.ring.field();
    let dom: Vec<Arc<ModPiece>> = src.iter().map(|&g| n.mod_piece(g + v)).collect();
    let cod: Vec<Arc<ModPiece>> = cols.iter().map(|c| n.mod_piece(c.degree + v)).collect();
    let mut dom_off = Vec::with_capacity(dom.len());
    let mut dn = 0;
    for p in &dom {
        dom_off.push(dn);
        dn += p.dim();
    }
    let cn: usize = cod.iter().map(|p| p.dim()).sum();
    let mut h = DenseMat::zeros(cn, dn);
    let mut row = 0;
    for (j, c) in cols.iter().enumerate() {
        let q = &cod[j];
        if q.dim() > 0 {
            for (i, poly) in c.coeffs.iter().enumerate() {
                if poly.is_zero() || dom[i].dim() == 0 {
                    continue;
                }
                let y = mul_free(n, poly, src[i] + v, &dom[i].free, c.degree + v);
                let z = q.project(&field, &y);
                for r in 0..z.rows {
                    h.row_mut(row + r)[dom_off[i]..dom_off[i] + z.cols].copy_from_slice(z.row(r));
                }
            }
        }
        row += q.dim();
    }
    (h, dn)
}

/// poly · (unit vectors at positions `free` of N's F0 in degree w), as
/// columns of F0 in degree w_to.
fn mul_free(n: &GradedModulePresentation, poly: &Polynomial, w: i64, free: &[usize], w_to: i64) -> DenseMat {
    let ring = &n.ring;
    let from = layout(ring, &n.gens, w);
    let to = layout(ring, &n.gens, w_to);
    let mut y = DenseMat::zeros(to.total, free.len());
    let mut start = 0;
    for l in 0..n.gens.len() {
        let (lo, hi) = (from.offs[l], from.offs[l] + from.dims[l]);
        let end = start + free[start..].iter().take_while(|&&f| f < hi).count();
        let sel = &free[start..end];
        if !sel.is_empty() {
            let d = w - n.gens[l];
            let mut x = DenseMat::zeros(from.dims[l], sel.len());
            for (t, &f) in sel.iter().enumerate() {
                x.set(f - lo, t, 1);
            }
            let prod = ring.q.mul_batch(poly, d as usize, &x);
            for r in 0..prod.rows {
                y.row_mut(to.offs[l] + r)[start..end].copy_from_slice(prod.row(r));
            }
        }
        start = end;
    }
    y
}

fn same_ring(m: &GradedModulePresentation, n: &GradedModulePresentation) -> Result<()> {
    if Arc::ptr_eq(&m.ring, &n.ring) {
        Ok(())
    } else {
        Err(Error::Mismatch(format!("{} and {} live over different rings", m.name, n.name)))
    }
}

/// dim Hom(M, N)_v.
pub fn hom_dim(m: &GradedModulePresentation, n: &GradedModulePresentation, v: i64) -> Result<usize> {
    same_ring(m, n)?;
    let (h, dn) = hom_matrix(n, &m.gens, &m.rels, v);
    Ok(dn - dense::rank(&m.ring.field(), &h))
}

/// dim Ext^i(M, N)_v for i ∈ {1, 2}, from a resolution truncated by the
/// stabilized syzygy search. Fails with `NotConverged`, carrying the partial
/// value, when the search did not stabilize within `bound`.
pub fn ext_dim(
    m: &GradedModulePresentation,
    n: &GradedModulePresentation,
    i: usize,
    v: i64,
    bound: i64,
    window: usize,
) -> Result<Certified> {
    let c = ext_dim_partial(m, n, i, v, bound, window)?;
    c.into_result()?;
    Ok(c)
}

/// As `ext_dim`, but a non-converged search is returned with
/// `converged = false` instead of an error.
pub fn ext_dim_partial(
    m: &GradedModulePresentation,
    n: &GradedModulePresentation,
    i: usize,
    v: i64,
    bound: i64,
    window: usize,
) -> Result<Certified> {
    same_ring(m, n)?;
    if !(1..=2).contains(&i) {
        return Err(Error::Unsupported(format!("Ext^{i} is not implemented")));
    }
    let res = m.resolution(i + 1, bound, window)?;
    let field = m.ring.field();
    let (d_in, _) = hom_matrix(n, &res.twists[i - 1], &res.maps[i - 1], v);
    let (d_out, dim_i) = hom_matrix(n, &res.twists[i], &res.maps[i], v);
    let value = dim_i as i64 - dense::rank(&field, &d_out) as i64 - dense::rank(&field, &d_in) as i64;
    Ok(Certified { value, bound, window, converged: res.converged() })
}

/// Minimal generators of ker(⊕_j S(−r_j) → ⊕_i S(−g_i)), found degree by
/// degree. In degree w the kernel Z_w is compared with S_1·Z_{w−1}; a
/// complement gives the new minimal generators. The search stops at the
/// first w ≥ max r_j + max(entry degree, ring generator degree) such that
/// the last `window` degrees brought nothing new, or fails to converge by
/// `bound`.
pub fn syzygies(ring: &Arc<Ring>, twists: &[i64], cols: &[Column], bound: i64, window: usize) -> Result<Syzygies> {
    if cols.is_empty() {
        let provenance = Provenance { bound, window, converged: true, last_degree: bound };
        return Ok(Syzygies { columns: Vec::new(), provenance });
    }
    let field = ring.field();
    let p = field.p() as u64;
    let src: Vec<i64> = cols.iter().map(|c| c.degree).collect();
    let w0 = *src.iter().min().expect("nonempty");
    let max_entry = cols
        .iter()
        .flat_map(|c| c.coeffs.iter().zip(twists).filter(|(q, _)| !q.is_zero()).map(move |(_, g)| c.degree - g))
        .max()
        .unwrap_or(0);
    let floor = src.iter().max().expect("nonempty") + max_entry.max(ring.max_gen_degree);
    if bound < w0 {
        return Err(Error::Unsupported(format!("degree bound {bound} is below the first relation degree {w0}")));
    }
    let nv = ring.q.n_vars();
    let mut eval = MapEval::new(Arc::clone(ring), twists.to_vec(), cols.to_vec());
    let mut out = Vec::new();
    let mut prev_kernel: Option<DenseMat> = None;
    let mut quiet = 0usize;
    for w in w0..=bound {
        let img = eval.at(w);
        let here = layout(ring, &src, w);
        // kernel vector t has a 1 at free_cols[t] and 0 at the other free columns
        let (kernel, free_cols) = if img.rows == 0 {
            (DenseMat::zeros(0, 0), Vec::new())
        } else if img.cols == 0 {
            (DenseMat::identity(img.rows), (0..img.rows).collect())
        } else {
            let e = dense::rref(&field, &img.transpose());
            let free = e.free_columns();
            let mut k = DenseMat::zeros(free.len(), img.rows);
            for (t, &f) in free.iter().enumerate() {
                k.row_mut(t).copy_from_slice(&e.kernel_vector(&field, f));
            }
            (k, free)
        };
        let mut new_rows: Vec<usize> = (0..kernel.rows).collect();
        if let Some(prev) = prev_kernel.as_ref().filter(|k| k.rows > 0 && kernel.rows > 0) {
            let below = layout(ring, &src, w - 1);
            let pieces: Vec<Option<Arc<RingPiece>>> = src.iter().map(|&r| ring.piece(w - r)).collect();
            let mut basis = RowBasis::new(free_cols.len());
            let chunk = (free_cols.len() / nv + 16).max(32);
            let mut start = 0;
            while start < prev.rows && !basis.is_full() {
                let end = (start + chunk).min(prev.rows);
                let mut g = DenseMat::zeros((end - start) * nv, free_cols.len());
                let mut full = vec![0u32; here.total];
                for (t, z) in (start..end).enumerate() {
                    for k in 0..nv {
                        full.iter_mut().for_each(|x| *x = 0);
                        mul_var_into(&pieces, k, &below, &here, prev.row(z), &mut full, p);
                        let dst = g.row_mut(t * nv + k);
                        for (d, &c) in dst.iter_mut().zip(&free_cols) {
                            *d = full[c];
                        }
                    }
                }
                basis.add_rows(&field, &g);
                start = end;
            }
            let mut is_piv = vec![false; free_cols.len()];
            for &c in &basis.pivots {
                is_piv[c] = true;
            }
            new_rows = (0..free_cols.len()).filter(|&t| !is_piv[t]).collect();
        }
        for &t in &new_rows {
            let z = kernel.row(t);
            let coeffs = (0..src.len())
                .map(|j| {
                    let blk = &z[here.offs[j]..here.offs[j] + here.dims[j]];
                    if blk.is_empty() {
                        Polynomial::zero(field, nv)
                    } else {
                        ring.q.to_polynomial((w - src[j]) as usize, blk)
                    }
                })
                .collect();
            out.push(Column { degree: w, coeffs });
        }
        quiet = if new_rows.is_empty() { quiet + 1 } else { 0 };
        prev_kernel = Some(kernel);
        if w >= floor && quiet >= window {
            let provenance = Provenance { bound, window, converged: true, last_degree: w };
            return Ok(Syzygies { columns: out, provenance });
        }
    }
    let provenance = Provenance { bound, window, converged: false, last_degree: bound };
    Ok(Syzygies { columns: out, provenance })
}

#[cfg(test)]
mod tests;
