use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Binomial coefficient C(n, k) for non-negative arguments; zero when k > n.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// Number of monomials of degree `d` in `n_vars` variables (zero for d < 0).
pub fn count_monomials(n_vars: usize, d: i64) -> usize {
    if d < 0 || n_vars == 0 {
        return usize::from(d == 0 && n_vars == 0);
    }
    binomial(d as u64 + n_vars as u64 - 1, n_vars as u64 - 1) as usize
}

/// Exponent vector. Ordered by graded-lex: total degree first, then
/// lexicographically with x_0 the largest variable.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// Index of the first variable with a positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// Parse the Display form, e.g. "x0^2*x3" or "1".
    pub fn parse(s: &str, n_vars: usize) -> Result<Monomial, String> {
        let mut e = vec![0u16; n_vars];
        if s.trim() == "1" {
            return Ok(Monomial(e));
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (var, exp) = factor.split_once('^').unwrap_or((factor, "1"));
            let i: usize = var
                .strip_prefix('x')
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| format!("bad variable {var:?}"))?;
            let k: u16 = exp.parse().map_err(|_| format!("bad exponent {exp:?}"))?;
            if i >= n_vars {
                return Err(format!("variable x{i} out of range"));
            }
            e[i] += k;
        }
        Ok(Monomial(e))
    }

    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(Monomial(e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of degree `d`, largest first in graded-lex order.
pub fn monomial_basis(n_vars: usize, d: i64) -> Vec<Monomial> {
    assert!(n_vars > 0, "monomial_basis needs at least one variable");
    let mut out = Vec::with_capacity(count_monomials(n_vars, d));
    if d < 0 {
        return out;
    }
    let mut cur = vec![0u16; n_vars];
    fill(&mut out, &mut cur, 0, d as u16);
    out
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u16>, pos: usize, rem: u16) {
    if pos + 1 == cur.len() {
        cur[pos] = rem;
        out.push(Monomial(cur.clone()));
        return;
    }
    for e in (0..=rem).rev() {
        cur[pos] = e;
        fill(out, cur, pos + 1, rem - e);
    }
    cur[pos] = 0;
}

/// Position of an exponent vector inside `monomial_basis(n_vars, deg)`.
pub fn monomial_index(exps: &[u16]) -> usize {
    let v = exps.len();
    let mut rem: i64 = exps.iter().map(|&e| e as i64).sum();
    let mut idx = 0usize;
    for (i, &e) in exps.iter().enumerate().take(v.saturating_sub(1)) {
        // monomials agreeing before position i and larger at position i
        idx += count_monomials(v - i, rem - e as i64 - 1);
        rem -= e as i64;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(monomial_basis(6, 2).len(), 21);
        assert_eq!(monomial_basis(6, 0).len(), 1);
        assert!(monomial_basis(6, -1).is_empty());
        assert_eq!(monomial_basis(6, 7).len(), count_monomials(6, 7));
    }

    #[test]
    fn basis_is_descending_and_indexed() {
        for d in 0..6 {
            let b = monomial_basis(4, d);
            for w in b.windows(2) {
                assert!(w[0] > w[1]);
            }
            for (i, m) in b.iter().enumerate() {
                assert_eq!(monomial_index(&m.0), i);
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 5), 21);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
