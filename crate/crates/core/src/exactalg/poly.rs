use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Polynomial over F_p with sparse terms. Stored coefficients are nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: PrimeField,
    n_vars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(field: PrimeField, n_vars: usize) -> Self {
        Polynomial { field, n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(field: PrimeField, n_vars: usize, c: u32) -> Self {
        Self::term(field, Monomial::one(n_vars), c)
    }

    pub fn var(field: PrimeField, n_vars: usize, i: usize) -> Self {
        Self::term(field, Monomial::var(n_vars, i), 1)
    }

    pub fn term(field: PrimeField, m: Monomial, c: u32) -> Self {
        let n_vars = m.n_vars();
        let mut terms = BTreeMap::new();
        let c = c % field.p();
        if c != 0 {
            terms.insert(m, c);
        }
        Polynomial { field, n_vars, terms }
    }

    /// Build from (monomial, coefficient) pairs; repeated monomials are summed.
    pub fn from_terms<I>(field: PrimeField, n_vars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u32)>,
    {
        let mut p = Polynomial::zero(field, n_vars);
        for (m, c) in it {
            assert_eq!(m.n_vars(), n_vars, "monomial has the wrong number of variables");
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u32> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        let c = c % self.field.p();
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Largest total degree of a term; None for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Some(d) when every term has degree d. The zero polynomial is
    /// homogeneous of every degree and reports None.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let d = self.total_degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.keys().all(|m| m.degree() as i64 == d)
    }

    pub fn check_homogeneous(&self, d: i64) -> Result<()> {
        if self.is_homogeneous_of(d) {
            Ok(())
        } else {
            Err(Error::NotHomogeneous { expected: d })
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, &c) in &other.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.field;
        Polynomial {
            field: f,
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return Polynomial::zero(f, self.n_vars);
        }
        Polynomial {
            field: f,
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n_vars, other.n_vars);
        let f = self.field;
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        let p = f.p() as u64;
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let e = acc.entry(m1.mul(m2)).or_insert(0);
                *e = (*e + c1 as u64 * c2 as u64) % p;
            }
        }
        Polynomial {
            field: f,
            n_vars: self.n_vars,
            terms: acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(m, c)| (m, c as u32))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            field: self.field,
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(t, &c)| (t.mul(m), c)).collect(),
        }
    }

    /// Evaluate at a point of F_p^{n_vars}.
    pub fn eval(&self, point: &[u32]) -> u32 {
        let f = self.field;
        let mut s = 0u32;
        for (m, &c) in &self.terms {
            let mut v = c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v = f.mul(v, f.pow(point[i], e as u64));
                }
            }
            s = f.add(s, v);
        }
        s
    }
}

/// JSON form: {"p": 32003, "n_vars": 6, "terms": {"x0*x1": 5, ...}}.
#[derive(Serialize, Deserialize)]
struct RawPolynomial {
    p: u32,
    n_vars: usize,
    terms: BTreeMap<String, u32>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPolynomial {
            p: self.field.p(),
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, &c)| (m.to_string(), c)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawPolynomial::deserialize(d)?;
        let field = PrimeField::new(raw.p).map_err(D::Error::custom)?;
        let mut poly = Polynomial::zero(field, raw.n_vars);
        for (m, c) in raw.terms {
            let m = Monomial::parse(&m, raw.n_vars).map_err(D::Error::custom)?;
            poly.add_term(m, c);
        }
        Ok(poly)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            let c = self.field.to_i64(c);
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            if m.degree() == 0 {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}
