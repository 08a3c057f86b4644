//! The concrete modules attached to a square matrix 𝒜 and 𝒩 = 𝒜 minus its
//! last row: B = R/I_B, A = R/I_A, I_B, I_B², I_B/I_B², K_B, N_B, I_{A/B},
//! H₁ and I_A/I_A², each with an explicit presentation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{default_bound, syzygies, BaseRing, Column, GradedModulePresentation, Provenance, Ring, DEFAULT_WINDOW};
use crate::degmat::DegreeMatrix;
use crate::error::{Error, Result};
use crate::exactalg::{dense, monomial_basis, DenseMat, Polynomial, PrimeField, QuotientRing};
use crate::matgen::HomogeneousMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StdModule {
    /// B as a module over itself.
    B,
    /// A as a cyclic B-module.
    A,
    /// A as a module over itself.
    AOverA,
    /// I_B as an R-module.
    IB,
    /// I_B² as an R-module.
    IB2,
    /// I_B/I_B² over B.
    Conormal,
    /// The canonical module K_B over B.
    KB,
    /// N_B = Hom(I_B/I_B², B).
    NB,
    /// I_{A/B} = I_A/I_B over B.
    IAB,
    /// H₁ presented by the Koszul relations.
    H1,
    /// H₁ as the image of ⊕B(−n2_j) → ⊕B(−n1_i), presented by the syzygies
    /// of that map.
    H1Image,
    /// I_A/I_A² over A.
    ConormalA,
}

impl StdModule {
    pub const ALL: [StdModule; 12] = [
        StdModule::B,
        StdModule::A,
        StdModule::AOverA,
        StdModule::IB,
        StdModule::IB2,
        StdModule::Conormal,
        StdModule::KB,
        StdModule::NB,
        StdModule::IAB,
        StdModule::H1,
        StdModule::H1Image,
        StdModule::ConormalA,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StdModule::B => "B",
            StdModule::A => "A",
            StdModule::AOverA => "A/A",
            StdModule::IB => "I_B",
            StdModule::IB2 => "I_B^2",
            StdModule::Conormal => "I_B/I_B^2",
            StdModule::KB => "K_B",
            StdModule::NB => "N_B",
            StdModule::IAB => "I_A/B",
            StdModule::H1 => "H1",
            StdModule::H1Image => "H1-image",
            StdModule::ConormalA => "I_A/I_A^2",
        }
    }

    pub fn from_name(s: &str) -> Result<StdModule> {
        let norm: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let alias = match norm.as_str() {
            "I_B²" => "I_B^2",
            "I_B/I_B²" => "I_B/I_B^2",
            "I_{A/B}" | "IAB" => "I_A/B",
            "H₁" | "H_1" => "H1",
            "I_A/I_A²" => "I_A/I_A^2",
            other => other,
        };
        StdModule::ALL
            .into_iter()
            .find(|m| m.name() == alias)
            .ok_or_else(|| Error::Unsupported(format!("unknown module {s:?}")))
    }
}

/// Rings, matrices and memoized module presentations for one square matrix.
pub struct ModuleContext {
    a: HomogeneousMatrix,
    n: HomogeneousMatrix,
    r: Arc<Ring>,
    b: Arc<Ring>,
    a_ring: Arc<Ring>,
    bound: i64,
    window: usize,
    modules: Mutex<HashMap<StdModule, Arc<GradedModulePresentation>>>,
    provenance: Mutex<Vec<Provenance>>,
}

impl ModuleContext {
    pub fn new(a: &HomogeneousMatrix) -> Result<ModuleContext> {
        if !a.is_square() {
            return Err(Error::Mismatch("a square matrix 𝒜 is required".into()));
        }
        let field = a.field();
        let nv = a.n_vars();
        let n = a.delete_last_row()?;
        let ib: Vec<Polynomial> = n.signed_maximal_minors()?.into_iter().map(|g| g.0).collect();
        let ia: Vec<Polynomial> = a.ia_generators()?.into_iter().map(|g| g.0).collect();
        let r = Ring::new(BaseRing::R, QuotientRing::polynomial_ring(field, nv));
        let b = Ring::new(BaseRing::B, QuotientRing::new(field, nv, ib)?);
        let a_ring = Ring::new(BaseRing::A, QuotientRing::new(field, nv, ia)?);
        let bound = default_bound(a.dm().det_degree());
        Ok(ModuleContext {
            a: a.clone(),
            n,
            r,
            b,
            a_ring,
            bound,
            window: DEFAULT_WINDOW,
            modules: Mutex::new(HashMap::new()),
            provenance: Mutex::new(Vec::new()),
        })
    }

    /// Use a different degree bound and window for syzygy searches.
    pub fn with_search(mut self, bound: i64, window: usize) -> Self {
        self.bound = bound;
        self.window = window;
        self
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn dm(&self) -> &DegreeMatrix {
        self.a.dm()
    }

    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    pub fn matrix(&self) -> &HomogeneousMatrix {
        &self.a
    }

    pub fn n_matrix(&self) -> &HomogeneousMatrix {
        &self.n
    }

    pub fn ring(&self, kind: BaseRing) -> &Arc<Ring> {
        match kind {
            BaseRing::R => &self.r,
            BaseRing::B => &self.b,
            BaseRing::A => &self.a_ring,
        }
    }

    /// Provenance of the syzygy searches used while building modules.
    pub fn build_provenance(&self) -> Vec<Provenance> {
        self.provenance.lock().expect("provenance").clone()
    }

    pub fn module(&self, which: StdModule) -> Result<Arc<GradedModulePresentation>> {
        if let Some(m) = self.modules.lock().expect("module cache").get(&which) {
            return Ok(Arc::clone(m));
        }
        let m = Arc::new(self.build(which)?);
        self.modules.lock().expect("module cache").insert(which, Arc::clone(&m));
        Ok(m)
    }

    fn zero(&self) -> Polynomial {
        Polynomial::zero(self.field(), self.a.n_vars())
    }

    fn build(&self, which: StdModule) -> Result<GradedModulePresentation> {
        let dm = self.dm();
        let t = dm.t();
        let s = dm.det_degree();
        let (n1, n2) = dm.hb_twists();
        let nn = &self.n;
        let name = which.name();
        match which {
            StdModule::B => Ok(GradedModulePresentation::free(name, Arc::clone(&self.b), vec![0])),
            StdModule::AOverA => Ok(GradedModulePresentation::free(name, Arc::clone(&self.a_ring), vec![0])),
            StdModule::A => {
                let rels = self
                    .a
                    .ia_generators()?
                    .into_iter()
                    .map(|(p, d)| Column { degree: d, coeffs: vec![p] })
                    .collect();
                GradedModulePresentation::new(name, Arc::clone(&self.b), vec![0], rels)
            }
            StdModule::IB | StdModule::Conormal => {
                let ring = if which == StdModule::IB { &self.r } else { &self.b };
                GradedModulePresentation::new(name, Arc::clone(ring), n1.clone(), self.hb_relations())
            }
            StdModule::IB2 => {
                let mut idx = HashMap::new();
                let mut gens = Vec::new();
                for i in 0..t {
                    for k in i..t {
                        idx.insert((i, k), gens.len());
                        gens.push(n1[i] + n1[k]);
                    }
                }
                let mut rels = Vec::new();
                for i in 0..t {
                    for j in 0..t - 1 {
                        let mut coeffs = vec![self.zero(); gens.len()];
                        for k in 0..t {
                            let g = idx[&(i.min(k), i.max(k))];
                            coeffs[g] = coeffs[g].add(nn.entry(j, k));
                        }
                        rels.push(Column { degree: n1[i] + n2[j], coeffs });
                    }
                }
                GradedModulePresentation::new(name, Arc::clone(&self.r), gens, rels)
            }
            StdModule::KB => {
                let n = dm.n() as i64;
                let gens: Vec<i64> = n2.iter().map(|&d| n + 1 - d).collect();
                let rels = (0..t)
                    .map(|i| Column {
                        degree: n + 1 - n1[i],
                        coeffs: (0..t - 1).map(|j| nn.entry(j, i).clone()).collect(),
                    })
                    .collect();
                GradedModulePresentation::new(name, Arc::clone(&self.b), gens, rels)
            }
            StdModule::NB => {
                let (gens, rels) = self.nb_presentation(0);
                GradedModulePresentation::new(name, Arc::clone(&self.b), gens, rels)
            }
            StdModule::IAB => {
                let (gens, mut rels) = self.nb_presentation(s);
                let last = self.a.row(t - 1);
                for j in 0..t - 1 {
                    let mut coeffs = vec![self.zero(); gens.len()];
                    for i in 0..t {
                        coeffs[j * t + i] = last[i].clone();
                    }
                    rels.push(Column { degree: s + dm.a()[t - 1] - dm.a()[j], coeffs });
                }
                GradedModulePresentation::new(name, Arc::clone(&self.b), gens, rels)
            }
            StdModule::H1 => {
                let rels = self.koszul_lifts()?;
                GradedModulePresentation::new(name, Arc::clone(&self.b), n2.clone(), rels)
            }
            StdModule::H1Image => {
                let syz = syzygies(&self.b, &n1, &self.hb_relations(), self.bound, self.window)?;
                self.provenance.lock().expect("provenance").push(syz.provenance);
                GradedModulePresentation::new(name, Arc::clone(&self.b), n2.clone(), syz.columns)
            }
            StdModule::ConormalA => {
                let (gens, rels) = self.conormal_a_presentation();
                GradedModulePresentation::new(name, Arc::clone(&self.a_ring), gens, rels)
            }
        }
    }

    /// Columns of 𝒩ᵀ: relation j is Σ_i N_{ji} e_i, of degree n2_j.
    fn hb_relations(&self) -> Vec<Column> {
        let t = self.dm().t();
        let (_, n2) = self.dm().hb_twists();
        (0..t - 1).map(|j| Column { degree: n2[j], coeffs: self.n.row(j).to_vec() }).collect()
    }

    /// N_B(shift): generators E_{ji} (j < t, index j·t + i) of degree
    /// b_i − a_j + shift; relations Σ_j N_{ji} E_{jk} for every (i, k) and
    /// Σ_i N_{ji} E_{li} for every j, l < t.
    fn nb_presentation(&self, shift: i64) -> (Vec<i64>, Vec<Column>) {
        let dm = self.dm();
        let t = dm.t();
        let (a, b) = (dm.a(), dm.b());
        let mut gens = Vec::with_capacity((t - 1) * t);
        for j in 0..t - 1 {
            for i in 0..t {
                gens.push(b[i] - a[j] + shift);
            }
        }
        let mut rels = Vec::new();
        for i in 0..t {
            for k in 0..t {
                let mut coeffs = vec![self.zero(); gens.len()];
                for j in 0..t - 1 {
                    coeffs[j * t + k] = self.n.entry(j, i).clone();
                }
                rels.push(Column { degree: b[k] - b[i] + shift, coeffs });
            }
        }
        for j in 0..t - 1 {
            for l in 0..t - 1 {
                let mut coeffs = vec![self.zero(); gens.len()];
                for i in 0..t {
                    coeffs[l * t + i] = self.n.entry(j, i).clone();
                }
                rels.push(Column { degree: a[j] - a[l] + shift, coeffs });
            }
        }
        (gens, rels)
    }

    /// For i < k, the c ∈ ⊕R(−n2_j) with 𝒩ᵀc = Δ_i e_k − Δ_k e_i.
    fn koszul_lifts(&self) -> Result<Vec<Column>> {
        let dm = self.dm();
        let t = dm.t();
        let (n1, n2) = dm.hb_twists();
        let field = self.field();
        let nv = self.a.n_vars();
        let r = &self.r.q;
        let delta = self.n.signed_maximal_minors()?;
        let mut out = Vec::new();
        for i in 0..t {
            for k in i + 1..t {
                let deg = n1[i] + n1[k];
                let bases: Vec<_> = n2.iter().map(|&d| monomial_basis(nv, deg - d)).collect();
                let row_dims: Vec<usize> = n1.iter().map(|&d| r.dim(deg - d)).collect();
                let rows: usize = row_dims.iter().sum();
                let cols: usize = bases.iter().map(|b| b.len()).sum();
                let mut m = DenseMat::zeros(rows, cols);
                let mut c0 = 0;
                for (j, basis) in bases.iter().enumerate() {
                    for mono in basis {
                        let mut r0 = 0;
                        for ip in 0..t {
                            let e = self.n.entry(j, ip);
                            if !e.is_zero() {
                                let v = r.normal_form_deg(&e.mul_monomial(mono), (deg - n1[ip]) as usize);
                                for (x, val) in v.into_iter().enumerate() {
                                    m.set(r0 + x, c0, val);
                                }
                            }
                            r0 += row_dims[ip];
                        }
                        c0 += 1;
                    }
                }
                let mut rhs = DenseMat::zeros(rows, 1);
                let offs: Vec<usize> = (0..t).map(|ip| row_dims[..ip].iter().sum()).collect();
                let put = |rhs: &mut DenseMat, at: usize, p: &Polynomial, d: i64, neg: bool| {
                    for (x, val) in r.normal_form_deg(p, d as usize).into_iter().enumerate() {
                        rhs.set(at + x, 0, if neg { field.neg(val) } else { val });
                    }
                };
                put(&mut rhs, offs[k], &delta[i].0, deg - n1[k], false);
                put(&mut rhs, offs[i], &delta[k].0, deg - n1[i], true);
                let sol = dense::solve(&field, &m, &rhs)
                    .pop()
                    .flatten()
                    .ok_or_else(|| Error::Mismatch("Koszul relation is not in the image of 𝒩ᵀ".into()))?;
                let mut coeffs = Vec::with_capacity(t - 1);
                let mut c0 = 0;
                for basis in &bases {
                    let p = Polynomial::from_terms(
                        field,
                        nv,
                        basis.iter().zip(&sol[c0..c0 + basis.len()]).filter(|(_, &c)| c != 0).map(|(m, &c)| (m.clone(), c)),
                    );
                    coeffs.push(p);
                    c0 += basis.len();
                }
                out.push(Column { degree: deg, coeffs });
            }
        }
        Ok(out)
    }

    /// I_A/I_A² over A. Generator E_{ji} (index j·t + i) stands for the minor
    /// omitting row j and column i, of degree s − a_j + b_i. With
    /// C_{ij} = (−1)^{i+j} E_{ji}, the relations are the off-diagonal entries
    /// of C𝒜 and 𝒜C and the differences of their diagonal entries.
    fn conormal_a_presentation(&self) -> (Vec<i64>, Vec<Column>) {
        let dm = self.dm();
        let t = dm.t();
        let s = dm.det_degree();
        let (a, b) = (dm.a(), dm.b());
        let mut gens = Vec::with_capacity(t * t);
        for j in 0..t {
            for i in 0..t {
                gens.push(s - a[j] + b[i]);
            }
        }
        let sign = |p: &Polynomial, e: usize| if e.is_multiple_of(2) { p.clone() } else { p.neg() };
        // (C𝒜)_{ik} = Σ_j (−1)^{i+j} 𝒜_{jk} E_{ji}
        let ca = |i: usize, k: usize| -> Vec<Polynomial> {
            let mut c = vec![self.zero(); t * t];
            for j in 0..t {
                c[j * t + i] = sign(self.a.entry(j, k), i + j);
            }
            c
        };
        // (𝒜C)_{jl} = Σ_i 𝒜_{ji} (−1)^{i+l} E_{li}
        let ac = |j: usize, l: usize| -> Vec<Polynomial> {
            let mut c = vec![self.zero(); t * t];
            for i in 0..t {
                c[l * t + i] = sign(self.a.entry(j, i), i + l);
            }
            c
        };
        let diff = |x: Vec<Polynomial>, y: Vec<Polynomial>| -> Vec<Polynomial> {
            x.iter().zip(&y).map(|(p, q)| p.sub(q)).collect()
        };
        let mut rels = Vec::new();
        for i in 0..t {
            for k in 0..t {
                if i != k {
                    rels.push(Column { degree: s + b[i] - b[k], coeffs: ca(i, k) });
                }
            }
        }
        for j in 0..t {
            for l in 0..t {
                if j != l {
                    rels.push(Column { degree: s + a[j] - a[l], coeffs: ac(j, l) });
                }
            }
        }
        for i in 0..t - 1 {
            rels.push(Column { degree: s, coeffs: diff(ca(i, i), ca(t - 1, t - 1)) });
            rels.push(Column { degree: s, coeffs: diff(ac(i, i), ac(t - 1, t - 1)) });
        }
        (gens, rels)
    }
}

/// Presentation of a standard module from a square matrix.
pub fn std_module(name: &str, a: &HomogeneousMatrix) -> Result<Arc<GradedModulePresentation>> {
    let which = StdModule::from_name(name)?;
    ModuleContext::new(a)?.module(which)
}

/// The map R^k → R given by generators, as columns over a single twist 0.
pub fn generator_columns(gens: &[(Polynomial, i64)]) -> Vec<Column> {
    gens.iter().map(|(p, d)| Column { degree: *d, coeffs: vec![p.clone()] }).collect()
}
