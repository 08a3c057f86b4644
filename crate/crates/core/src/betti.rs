//! Closed-form graded free complexes attached to a degree matrix, and the
//! numbers read off from them: Hilbert functions and polynomials, η, ε and
//! the binomial dimension formula.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degmat::{DegreeMatrix, HypothesisReport};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComplexKind {
    /// Hilbert–Burch resolution of B = R/I_B.
    #[serde(rename = "HB")]
    HilbertBurch,
    /// Resolution of I_B² (terms indexed from the generators).
    #[serde(rename = "SQ")]
    IdealSquare,
    /// Gulliksen–Negård resolution of A = R/I_{t-1}.
    #[serde(rename = "GN")]
    GulliksenNegard,
    /// Resolution of the canonical module K_B.
    #[serde(rename = "KB")]
    CanonicalModule,
    /// Presentation (not a resolution) of the normal module N_B.
    #[serde(rename = "NB-pres")]
    NormalPresentation,
}

impl ComplexKind {
    pub fn label(&self) -> &'static str {
        match self {
            ComplexKind::HilbertBurch => "HB",
            ComplexKind::IdealSquare => "SQ",
            ComplexKind::GulliksenNegard => "GN",
            ComplexKind::CanonicalModule => "KB",
            ComplexKind::NormalPresentation => "NB-pres",
        }
    }
}

/// terms[k] is the multiset of d with a summand R(−d) in homological degree k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub kind: ComplexKind,
    /// Ambient P^n; R has n+1 variables.
    pub n: usize,
    pub terms: Vec<Vec<i64>>,
}

impl BettiTable {
    fn new(kind: ComplexKind, n: usize, mut terms: Vec<Vec<i64>>) -> Self {
        for t in &mut terms {
            t.sort_unstable();
        }
        BettiTable { kind, n, terms }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.len()).collect()
    }

    pub fn is_resolution(&self) -> bool {
        self.kind != ComplexKind::NormalPresentation
    }

    /// {"0":[..],"1":[..],..}
    pub fn to_json(&self) -> serde_json::Value {
        let m: BTreeMap<String, &Vec<i64>> =
            self.terms.iter().enumerate().map(|(k, t)| (k.to_string(), t)).collect();
        serde_json::to_value(m).expect("plain map")
    }

    /// The same table with every term shifted: R(−d) ↦ R(−d−c).
    pub fn twisted(&self, c: i64) -> BettiTable {
        BettiTable {
            kind: self.kind,
            n: self.n,
            terms: self.terms.iter().map(|t| t.iter().map(|d| d + c).collect()).collect(),
        }
    }

    /// The table with terms[0] removed (resolution of the ideal instead of
    /// the quotient); homological degrees shift down by one.
    pub fn ideal_part(&self) -> BettiTable {
        BettiTable { kind: self.kind, n: self.n, terms: self.terms[1..].to_vec() }
    }
}

impl fmt::Display for BettiTable {
    /// The R(−d)^k notation, highest homological degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for t in self.terms.iter().rev() {
            let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
            for &d in t {
                *counts.entry(d).or_insert(0) += 1;
            }
            if counts.is_empty() {
                parts.push("0".to_string());
                continue;
            }
            let summands: Vec<String> = counts
                .iter()
                .rev()
                .map(|(&d, &k)| {
                    let base = if d == 0 { "R".to_string() } else { format!("R({})", -d) };
                    if k == 1 {
                        base
                    } else {
                        format!("{base}^{k}")
                    }
                })
                .collect();
            parts.push(summands.join(" ⊕ "));
        }
        write!(f, "0 → {}", parts.join(" → "))
    }
}

/// C(x + n, n) = dim R_x with the convention that it vanishes for x < 0.
pub fn dim_r(x: i64, n: usize) -> i64 {
    if x < 0 {
        0
    } else {
        crate::exactalg::binomial(x as u64 + n as u64, n as u64) as i64
    }
}

pub fn hilbert_burch_table(dm: &DegreeMatrix) -> Result<BettiTable> {
    dm.require_nonempty()?;
    let (n1, n2) = dm.hb_twists();
    Ok(BettiTable::new(ComplexKind::HilbertBurch, dm.n(), vec![vec![0], n1, n2]))
}

pub fn ideal_square_table(dm: &DegreeMatrix) -> Result<BettiTable> {
    dm.require_nonempty()?;
    let (n1, n2) = dm.hb_twists();
    let mut s2 = Vec::new();
    for i in 0..n1.len() {
        for k in i..n1.len() {
            s2.push(n1[i] + n1[k]);
        }
    }
    let f1f2 = n1.iter().flat_map(|&x| n2.iter().map(move |&y| x + y)).collect();
    let mut w2 = Vec::new();
    for i in 0..n2.len() {
        for j in i + 1..n2.len() {
            w2.push(n2[i] + n2[j]);
        }
    }
    Ok(BettiTable::new(ComplexKind::IdealSquare, dm.n(), vec![s2, f1f2, w2]))
}

pub fn gulliksen_negard_table(dm: &DegreeMatrix) -> Result<BettiTable> {
    dm.require_nonempty()?;
    let (a, b) = (dm.a(), dm.b());
    let t = dm.t();
    let s = dm.det_degree();
    for j in 0..t {
        for i in 0..t {
            if a[j] == b[i] {
                return Err(Error::Unsupported(format!(
                    "non-minimal Gulliksen–Negård table: a_{} = b_{} = {}",
                    j + 1,
                    i + 1,
                    a[j]
                )));
            }
        }
    }
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    let mut t3 = Vec::new();
    for i in 0..t {
        for j in 0..t {
            t1.push(s - a[j] + b[i]);
            t2.push(s + b[i] - b[j]);
            t2.push(s + a[j] - a[i]);
            t3.push(s + a[j] - b[i]);
        }
    }
    for _ in 0..2 {
        let pos = t2.iter().position(|&d| d == s).expect("diagonal terms have degree s");
        t2.swap_remove(pos);
    }
    let table = BettiTable::new(ComplexKind::GulliksenNegard, dm.n(), vec![vec![0], t1, t2, t3, vec![2 * s]]);
    if let Some(d) = table.terms[1..].iter().flatten().find(|&&d| d <= 0) {
        return Err(Error::Unsupported(format!("non-minimal Gulliksen–Negård table: twist {d} ≤ 0")));
    }
    Ok(table)
}

/// Resolution of K_B: the dual of the Hilbert–Burch complex twisted by −(n+1).
pub fn canonical_module_table(dm: &DegreeMatrix) -> Result<BettiTable> {
    dm.require_nonempty()?;
    let (n1, n2) = dm.hb_twists();
    let c = dm.n() as i64 + 1;
    Ok(BettiTable::new(
        ComplexKind::CanonicalModule,
        dm.n(),
        vec![n2.iter().map(|d| c - d).collect(), n1.iter().map(|d| c - d).collect(), vec![c]],
    ))
}

/// Generators and relations of N_B as a cokernel over R:
/// generators R(a_j − b_i) (j < t), relations R(b_i − b_k) and R(a_j − a_l).
pub fn normal_presentation_table(dm: &DegreeMatrix) -> Result<BettiTable> {
    dm.require_nonempty()?;
    let (a, b) = (dm.a(), dm.b());
    let t = dm.t();
    let gens = (0..t - 1).flat_map(|j| (0..t).map(move |i| b[i] - a[j])).collect();
    let mut rels: Vec<i64> = Vec::new();
    for i in 0..t {
        for k in 0..t {
            rels.push(b[k] - b[i]);
        }
    }
    for j in 0..t - 1 {
        for l in 0..t - 1 {
            rels.push(a[l] - a[j]);
        }
    }
    Ok(BettiTable::new(ComplexKind::NormalPresentation, dm.n(), vec![gens, rels]))
}

/// Σ_k (−1)^k Σ_{d ∈ terms[k]} C(v − d + n, n).
pub fn hilbert_function(table: &BettiTable, v: i64) -> i64 {
    table
        .terms
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let s: i64 = t.iter().map(|&d| dim_r(v - d, table.n)).sum();
            if k % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .sum()
}

/// Integer-valued polynomial p(ν) = Σ_i c_i · C(ν, i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPolynomial {
    pub binomial_coords: Vec<i64>,
}

/// Generalized binomial C(x, k) for any integer x.
pub fn binom_poly(x: i64, k: usize) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k as i128 {
        num *= x as i128 - i;
        den *= i + 1;
    }
    num / den
}

impl HilbertPolynomial {
    /// From values at ν = 0..=deg via forward differences.
    pub fn from_values(values: &[i128]) -> Self {
        let mut diffs: Vec<i128> = values.to_vec();
        let mut coords = Vec::with_capacity(values.len());
        while !diffs.is_empty() {
            coords.push(diffs[0] as i64);
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        while coords.len() > 1 && *coords.last().expect("nonempty") == 0 {
            coords.pop();
        }
        HilbertPolynomial { binomial_coords: coords }
    }

    pub fn eval(&self, nu: i64) -> i128 {
        self.binomial_coords.iter().enumerate().map(|(i, &c)| c as i128 * binom_poly(nu, i)).sum()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let d = self.binomial_coords.len() - 1;
        (d > 0 || self.binomial_coords[0] != 0).then_some(d)
    }

    /// Coefficients in the power basis as (numerator, denominator) pairs,
    /// constant term first.
    pub fn power_coefficients(&self) -> Vec<(i128, i128)> {
        let deg = self.binomial_coords.len();
        // accumulate Σ c_i · ν(ν−1)…(ν−i+1) / i! over a common denominator
        let mut fact: i128 = 1;
        for i in 1..deg as i128 {
            fact *= i;
        }
        let mut acc = vec![0i128; deg.max(1)];
        for (i, &c) in self.binomial_coords.iter().enumerate() {
            // falling factorial coefficients
            let mut poly = vec![1i128];
            for r in 0..i as i128 {
                let mut next = vec![0i128; poly.len() + 1];
                for (e, &a) in poly.iter().enumerate() {
                    next[e + 1] += a;
                    next[e] -= r * a;
                }
                poly = next;
            }
            let mut ifact: i128 = 1;
            for r in 1..=i as i128 {
                ifact *= r;
            }
            for (e, &a) in poly.iter().enumerate() {
                acc[e] += c as i128 * a * (fact / ifact);
            }
        }
        acc.into_iter()
            .map(|num| {
                let g = gcd(num.abs(), fact);
                (num / g, fact / g)
            })
            .collect()
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// The polynomial agreeing with hilbert_function(table, ·) for large ν.
pub fn hilbert_polynomial(table: &BettiTable) -> HilbertPolynomial {
    let n = table.n;
    let value = |nu: i64| -> i128 {
        table
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let s: i128 = t.iter().map(|&d| binom_poly(nu - d + n as i64, n)).sum();
                if k % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .sum()
    };
    let vals: Vec<i128> = (0..=n as i64).map(value).collect();
    HilbertPolynomial::from_values(&vals)
}

/// (d, g) for a linear Hilbert polynomial p(ν) = dν + 1 − g.
pub fn degree_and_genus(p: &HilbertPolynomial) -> Result<(i64, i64)> {
    if p.degree() != Some(1) {
        return Err(Error::Unsupported(format!(
            "degree and genus need a polynomial of degree 1, got {:?}",
            p.degree()
        )));
    }
    Ok((p.binomial_coords[1], 1 - p.binomial_coords[0]))
}

/// η(v) = dim (I_B/I_B²)_v = dim (I_B)_v − dim (I_B²)_v.
pub fn eta(dm: &DegreeMatrix, v: i64) -> Result<i64> {
    let hb = hilbert_burch_table(dm)?.ideal_part();
    let sq = ideal_square_table(dm)?;
    Ok(hilbert_function(&hb, v) - hilbert_function(&sq, v))
}

/// ε = η(s) + Σ_j η(n2_j) − Σ_i η(n1_i).
pub fn epsilon(dm: &DegreeMatrix) -> Result<i64> {
    let (n1, n2) = dm.hb_twists();
    let mut e = eta(dm, dm.det_degree())?;
    for &d in &n2 {
        e += eta(dm, d)?;
    }
    for &d in &n1 {
        e -= eta(dm, d)?;
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimFormula {
    pub value: i64,
    pub hypotheses: HypothesisReport,
}

/// The eight-sum binomial expression for dim W, evaluated literally.
pub fn dim_w_formula(dm: &DegreeMatrix) -> Result<DimFormula> {
    let t = dm.t();
    if t <= 2 {
        return Err(Error::Unsupported("the dimension formula needs t > 2".into()));
    }
    let (a, b) = (dm.a(), dm.b());
    let n = dm.n();
    let s = dm.det_degree();
    let at = a[t - 1];
    let c = |x: i64| dim_r(x, n);
    let mut v = 0i64;
    for i in 0..t {
        for j in 0..t {
            v += c(a[j] - b[i]);
        }
    }
    for i in 0..t - 1 {
        for j in 0..t {
            v -= c(a[j] - a[i]);
        }
    }
    for i in 0..t {
        for j in 0..t {
            v -= c(b[i] - b[j]);
        }
    }
    for i in 0..t {
        for j in 0..t - 1 {
            v += c(b[i] - a[j]);
        }
    }
    for j in 0..t {
        for i in 0..t {
            for k in i..t {
                v -= c(at - s - b[i] - b[k] + a[j]);
            }
        }
    }
    for i in 0..t {
        for j in 0..t {
            for k in 0..t - 1 {
                v += c(at - s - b[i] - a[k] + a[j]);
            }
        }
    }
    for i in 0..t - 1 {
        for k in i + 1..t - 1 {
            for j in 0..t {
                v -= c(at - s - a[i] - a[k] + a[j]);
            }
        }
    }
    for i in 1..t {
        v += c(at - s + b[i] - 2 * b[0]);
    }
    Ok(DimFormula { value: v, hypotheses: dm.theorem_hypotheses() })
}
