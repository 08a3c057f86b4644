use proptest::prelude::*;
use subminor::betti::{self, BettiTable, HilbertPolynomial};
use subminor::exactalg::{dense, DenseMat, PrimeField};
use subminor::{DegreeMatrix, HomogeneousMatrix};

fn field() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

/// Non-decreasing (b; a) with t in 2..=5, kept only when nonempty.
fn nonempty_dm() -> impl Strategy<Value = DegreeMatrix> {
    (2usize..=5)
        .prop_flat_map(|t| (prop::collection::vec(-2i64..=3, t), prop::collection::vec(-1i64..=6, t)))
        .prop_filter_map("empty locus", |(mut b, mut a)| {
            b.sort_unstable();
            a.sort_unstable();
            let dm = DegreeMatrix::new(b, a, 5).ok()?;
            dm.is_nonempty().then_some(dm)
        })
}

/// Nonempty tables accepted by the GN constructor (no a_j = b_i).
fn minimal_dm() -> impl Strategy<Value = DegreeMatrix> {
    nonempty_dm().prop_filter("non-minimal", |dm| betti::gulliksen_negard_table(dm).is_ok())
}

fn all_tables(dm: &DegreeMatrix) -> Vec<BettiTable> {
    let mut out = vec![betti::hilbert_burch_table(dm).unwrap(), betti::ideal_square_table(dm).unwrap()];
    if let Ok(gn) = betti::gulliksen_negard_table(dm) {
        out.push(gn);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_laws(a in 0u32..32003, b in 0u32..32003, c in 1u32..32003) {
        let f = field();
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(c, f.inv(c)), 1);
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        prop_assert_eq!(f.from_i64(f.to_i64(a)), a);
    }

    #[test]
    fn rank_of_transpose(rows in 1usize..12, cols in 1usize..12, seed in any::<u64>()) {
        // low-rank products hit the interesting cases more often than uniform matrices
        let f = field();
        let k = (seed % 5) as usize + 1;
        let mut x = seed;
        let mut next = || { x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); ((x >> 33) % 32003) as u32 };
        let l: Vec<Vec<u32>> = (0..rows).map(|_| (0..k).map(|_| next()).collect()).collect();
        let r: Vec<Vec<u32>> = (0..k).map(|_| (0..cols).map(|_| next()).collect()).collect();
        let m = dense::matmul(&f, &DenseMat::from_rows(k, &l), &DenseMat::from_rows(cols, &r));
        let rk = dense::rank(&f, &m);
        prop_assert!(rk <= k.min(rows).min(cols));
        prop_assert_eq!(rk, dense::rank(&f, &m.transpose()));
        let rr = dense::rref(&f, &m);
        prop_assert_eq!(rr.free_columns().len(), cols - rk);
        for v in rr.kernel_basis(&f) {
            prop_assert!(m.mul_vec(&f, &v).iter().all(|&e| e == 0));
        }
    }

    #[test]
    fn gn_self_dual_and_rank_identity(dm in minimal_dm()) {
        let gn = betti::gulliksen_negard_table(&dm).unwrap();
        let s = dm.det_degree();
        let t = dm.t() as i64;
        prop_assert_eq!(gn.terms.len(), 5);
        for k in 0..5 {
            let mut dual: Vec<i64> = gn.terms[4 - k].iter().map(|d| 2 * s - d).collect();
            dual.sort_unstable();
            prop_assert_eq!(&gn.terms[k], &dual);
        }
        let r = gn.ranks();
        prop_assert_eq!(r[0] as i64 - r[1] as i64 + r[2] as i64 - r[3] as i64 + r[4] as i64, 0);
        prop_assert_eq!(r[1] as i64, t * t);
        prop_assert_eq!(r[2] as i64, 2 * t * t - 2);
    }

    #[test]
    fn hilbert_function_meets_polynomial(dm in nonempty_dm()) {
        for table in all_tables(&dm) {
            let hp = betti::hilbert_polynomial(&table);
            let top = table.terms.iter().flatten().copied().max().unwrap_or(0);
            for v in top - dm.n() as i64..top + 8 {
                prop_assert_eq!(betti::hilbert_function(&table, v) as i128, hp.eval(v), "{:?} at {}", table.kind, v);
            }
        }
    }

    #[test]
    fn twisting_shifts_hilbert_function(dm in nonempty_dm(), c in -4i64..=4, v in -6i64..=20) {
        let hb = betti::hilbert_burch_table(&dm).unwrap();
        prop_assert_eq!(betti::hilbert_function(&hb.twisted(c), v), betti::hilbert_function(&hb, v - c));
    }

    #[test]
    fn eta_is_nonnegative(dm in nonempty_dm(), v in -4i64..=25) {
        prop_assert!(betti::eta(&dm, v).unwrap() >= 0);
    }

    #[test]
    fn epsilon_matches_formula_under_hypotheses(dm in nonempty_dm()) {
        let Ok(f) = betti::dim_w_formula(&dm) else { return Ok(()) };
        if f.hypotheses.theorem_applies {
            prop_assert_eq!(betti::epsilon(&dm).unwrap(), f.value);
        }
    }

    #[test]
    fn json_roundtrips(dm in nonempty_dm()) {
        let text = serde_json::to_string(&dm).unwrap();
        prop_assert_eq!(&DegreeMatrix::from_json(&text).unwrap(), &dm);
        for table in all_tables(&dm) {
            let back: BettiTable = serde_json::from_str(&serde_json::to_string(&table).unwrap()).unwrap();
            prop_assert_eq!(&back, &table);
            let hp = betti::hilbert_polynomial(&table);
            let back: HilbertPolynomial = serde_json::from_str(&serde_json::to_string(&hp).unwrap()).unwrap();
            prop_assert_eq!(back, hp);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_matrices_are_reproducible(dm in nonempty_dm(), seed in any::<u64>()) {
        let f = field();
        let m = HomogeneousMatrix::random_general(&dm, f, seed).unwrap();
        prop_assert_eq!(&m, &HomogeneousMatrix::random_general(&dm, f, seed).unwrap());
        for j in 0..dm.t() {
            for i in 0..dm.t() {
                let d = dm.entry_degree(j, i);
                let e = m.entry(j, i);
                let ok = if d <= 0 { e.is_zero() } else { e.is_homogeneous_of(d) };
                prop_assert!(ok, "entry ({}, {}) of degree {}", j, i, d);
            }
        }
        let back = HomogeneousMatrix::from_json(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn ideal_rank_grows_with_generators(seed in any::<u64>(), v in 2i64..=5) {
        // monotonicity of dim I_v under adding generators, on Ex. 2 with s = 4
        let dm = DegreeMatrix::example(2, 4).unwrap();
        let a = HomogeneousMatrix::random_general(&dm, field(), seed).unwrap();
        let mut gens = a.ib_generators().unwrap();
        gens.extend(a.ia_generators().unwrap());
        let mut last = 0;
        for k in 0..=gens.len() {
            let d = subminor::oracle::ideal_piece_dim(&gens[..k], v).unwrap();
            prop_assert!(d >= last);
            last = d;
        }
    }
}
