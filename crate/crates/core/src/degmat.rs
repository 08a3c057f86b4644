//! Degree matrices (b; a): the integers prescribing the entry degrees
//! a_j − b_i of a t×t homogeneous matrix, and the numerical hypotheses of
//! the dimension formula.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeMatrix {
    b: Vec<i64>,
    a: Vec<i64>,
    n: usize,
}

#[derive(Deserialize)]
struct RawDegreeMatrix {
    b: Vec<i64>,
    a: Vec<i64>,
    n: usize,
}

impl<'de> Deserialize<'de> for DegreeMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDegreeMatrix::deserialize(d)?;
        DegreeMatrix::new(raw.b, raw.a, raw.n).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub nonempty: bool,
    pub t_gt_2: bool,
    /// a_i ≥ b_{i+3} for 1 ≤ i ≤ t−3, and a_1 ≥ b_t when t = 3.
    pub depth_condition: bool,
    /// Same, with the side condition a_1 ≥ b_t imposed whenever t ≤ 3.
    pub depth_condition_t_le_3: bool,
    pub at_condition: bool,
    pub ambient: bool,
    pub positive_dim: bool,
    pub theorem_applies: bool,
}

impl DegreeMatrix {
    pub fn new(b: Vec<i64>, a: Vec<i64>, n: usize) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidDegreeMatrix(format!(
                "b has {} entries but a has {}",
                b.len(),
                a.len()
            )));
        }
        if a.len() < 2 {
            return Err(Error::InvalidDegreeMatrix("t must be at least 2".into()));
        }
        if b.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidDegreeMatrix("b is not non-decreasing".into()));
        }
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidDegreeMatrix("a is not non-decreasing".into()));
        }
        if n == 0 {
            return Err(Error::InvalidDegreeMatrix("n must be positive".into()));
        }
        Ok(DegreeMatrix { b, a, n })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Re-check the invariants (a validated value passes unchanged).
    pub fn validate(&self) -> Result<Self> {
        DegreeMatrix::new(self.b.clone(), self.a.clone(), self.n)
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.a.len()
    }

    pub fn n_vars(&self) -> usize {
        self.n + 1
    }

    /// Degree a_j − b_i of the entry in row j, column i (0-based).
    pub fn entry_degree(&self, j: usize, i: usize) -> i64 {
        self.a[j] - self.b[i]
    }

    /// True iff a_{i−1} − b_i > 0 for i = 2..t.
    pub fn is_nonempty(&self) -> bool {
        self.first_empty_index().is_none()
    }

    fn first_empty_index(&self) -> Option<usize> {
        (1..self.t()).find(|&i| self.a[i - 1] - self.b[i] <= 0).map(|i| i + 1)
    }

    pub fn require_nonempty(&self) -> Result<()> {
        match self.first_empty_index() {
            Some(i) => Err(Error::EmptyLocus(i)),
            None => Ok(()),
        }
    }

    /// s = Σ a_j − Σ b_i, the degree of the determinant.
    pub fn det_degree(&self) -> i64 {
        self.a.iter().sum::<i64>() - self.b.iter().sum::<i64>()
    }

    /// (n1, n2): n1_i = s + b_i − a_t, n2_j = s + a_j − a_t for j < t.
    pub fn hb_twists(&self) -> (Vec<i64>, Vec<i64>) {
        let s = self.det_degree();
        let at = self.a[self.t() - 1];
        let n1 = self.b.iter().map(|&b| s + b - at).collect();
        let n2 = self.a[..self.t() - 1].iter().map(|&a| s + a - at).collect();
        (n1, n2)
    }

    pub fn theorem_hypotheses(&self) -> HypothesisReport {
        let t = self.t();
        let (a, b) = (&self.a, &self.b);
        let chain = (0..t.saturating_sub(3)).all(|i| a[i] >= b[i + 3]);
        let depth_condition = chain && (t != 3 || a[0] >= b[t - 1]);
        let depth_condition_t_le_3 = chain && (t > 3 || a[0] >= b[t - 1]);
        let at_condition = t >= 3 && a[t - 1] > a[t - 2] + a[t - 3] - b[0];
        let nonempty = self.is_nonempty();
        let t_gt_2 = t > 2;
        let ambient = self.n >= 5;
        let positive_dim = self.n >= 5;
        HypothesisReport {
            nonempty,
            t_gt_2,
            depth_condition,
            depth_condition_t_le_3,
            at_condition,
            ambient,
            positive_dim,
            theorem_applies: nonempty && t_gt_2 && depth_condition && at_condition && ambient && positive_dim,
        }
    }

    /// The same matrix with every a_j and b_i shifted by c.
    pub fn shifted(&self, c: i64) -> DegreeMatrix {
        DegreeMatrix {
            b: self.b.iter().map(|x| x + c).collect(),
            a: self.a.iter().map(|x| x + c).collect(),
            n: self.n,
        }
    }

    /// The three families of worked examples in P^5, parametrized by s.
    pub fn example(which: u8, s: i64) -> Result<DegreeMatrix> {
        match which {
            1 => DegreeMatrix::new(vec![0; 4], vec![1, 1, 1, s - 3], 5),
            2 => DegreeMatrix::new(vec![0; 3], vec![1, 1, s - 2], 5),
            3 => DegreeMatrix::new(vec![0; 3], vec![1, 2, s - 3], 5),
            _ => Err(Error::InvalidDegreeMatrix(format!("no example family {which}"))),
        }
    }
}

impl std::fmt::Display for DegreeMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "b={:?} a={:?} n={}", self.b, self.a, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonemptiness() {
        assert!(DegreeMatrix::new(vec![0; 4], vec![1, 1, 1, 2], 5).unwrap().is_nonempty());
        assert!(!DegreeMatrix::new(vec![0; 3], vec![0, 1, 2], 5).unwrap().is_nonempty());
        assert!(DegreeMatrix::new(vec![0; 3], vec![1, 1, 1], 5).unwrap().is_nonempty());
    }

    #[test]
    fn degrees_and_twists() {
        let e1 = DegreeMatrix::example(1, 5).unwrap();
        assert_eq!(e1.det_degree(), 5);
        assert_eq!(e1.hb_twists(), (vec![3; 4], vec![4; 3]));
        assert_eq!(DegreeMatrix::example(2, 4).unwrap().det_degree(), 4);
        assert_eq!(DegreeMatrix::example(3, 6).unwrap().det_degree(), 6);
        for s in 5..10 {
            assert_eq!(DegreeMatrix::example(3, s).unwrap().hb_twists(), (vec![3; 3], vec![4, 5]));
        }
        assert_eq!(DegreeMatrix::example(2, 3).unwrap().hb_twists(), (vec![2; 3], vec![3; 2]));
    }

    #[test]
    fn hypotheses() {
        let h = DegreeMatrix::example(1, 7).unwrap().theorem_hypotheses();
        assert!(h.at_condition && h.theorem_applies);
        let h = DegreeMatrix::example(1, 5).unwrap().theorem_hypotheses();
        assert!(!h.at_condition && !h.theorem_applies);
        assert!(!DegreeMatrix::example(3, 6).unwrap().theorem_hypotheses().at_condition);
        assert!(DegreeMatrix::example(3, 7).unwrap().theorem_hypotheses().at_condition);
    }

    #[test]
    fn parse_rejects_unsorted() {
        assert!(DegreeMatrix::from_json(r#"{"b":[0,0,0],"a":[2,1,1],"n":5}"#).is_err());
        let d = DegreeMatrix::from_json(r#"{"b":[0,0,0],"a":[1,1,2],"n":5}"#).unwrap();
        assert_eq!(d.validate().unwrap(), d);
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"b":[0,0,0],"a":[1,1,2],"n":5}"#);
    }
}
