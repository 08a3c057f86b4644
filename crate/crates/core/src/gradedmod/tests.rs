use super::*;
use crate::betti;
use crate::degmat::DegreeMatrix;
use crate::matgen::HomogeneousMatrix;
use crate::oracle::{ideal_piece_dim, square_generators};

fn ctx(which: u8, s: i64, seed: u64) -> ModuleContext {
    let dm = DegreeMatrix::example(which, s).unwrap();
    let a = HomogeneousMatrix::random_general(&dm, PrimeField::default(), seed).unwrap();
    ModuleContext::new(&a).unwrap()
}

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v
}

#[test]
fn koszul_syzygy() {
    let f = PrimeField::default();
    let r = Ring::new(BaseRing::R, QuotientRing::polynomial_ring(f, 3));
    let cols = generator_columns(&[(Polynomial::var(f, 3, 0), 1), (Polynomial::var(f, 3, 1), 1)]);
    let syz = syzygies(&r, &[0], &cols, 8, 3).unwrap();
    assert!(syz.provenance.converged);
    assert_eq!(syz.columns.len(), 1);
    assert_eq!(syz.columns[0].degree, 2);
}

#[test]
fn hilbert_burch_syzygies() {
    let c = ctx(1, 5, 1);
    let ib = c.n_matrix().signed_maximal_minors().unwrap();
    let syz = syzygies(c.ring(BaseRing::R), &[0], &generator_columns(&ib), 14, 3).unwrap();
    assert!(syz.provenance.converged);
    assert_eq!(sorted(syz.columns.iter().map(|c| c.degree).collect()), vec![4, 4, 4]);
}

#[test]
fn ia_syzygies_match_gn() {
    let c = ctx(2, 4, 2);
    let ia = c.matrix().ia_generators().unwrap();
    let syz = syzygies(c.ring(BaseRing::R), &[0], &generator_columns(&ia), 12, 3).unwrap();
    assert!(syz.provenance.converged);
    let gn = betti::gulliksen_negard_table(c.dm()).unwrap();
    assert_eq!(sorted(syz.columns.iter().map(|c| c.degree).collect()), gn.terms[2]);
}

#[test]
fn nb_low_degrees() {
    let c = ctx(1, 5, 3);
    let nb = c.module(StdModule::NB).unwrap();
    assert_eq!(nb.gen_twists(), &[-1; 12]);
    assert_eq!(nb.piece_dim(-1), 12);
    assert_eq!(nb.piece_dim(-2), 0);
    let kb = c.module(StdModule::KB).unwrap();
    assert_eq!(kb.piece_dim(6 - 10), 0);
}

#[test]
fn iab_matches_oracle() {
    let c = ctx(2, 3, 4);
    let iab = c.module(StdModule::IAB).unwrap();
    let ia = c.matrix().ia_generators().unwrap();
    let ib = c.matrix().ib_generators().unwrap();
    for v in 0..=6 {
        let want = ideal_piece_dim(&ia, v).unwrap() - ideal_piece_dim(&ib, v).unwrap();
        assert_eq!(iab.piece_dim(v), want, "degree {v}");
    }
}

#[test]
fn ideal_square_matches_oracle() {
    let c = ctx(2, 3, 5);
    let m = c.module(StdModule::IB2).unwrap();
    let sq = square_generators(&c.matrix().ib_generators().unwrap());
    for v in 0..=7 {
        assert_eq!(m.piece_dim(v), ideal_piece_dim(&sq, v).unwrap(), "degree {v}");
    }
}

#[test]
fn conormal_a_matches_oracle() {
    let c = ctx(2, 3, 6);
    let m = c.module(StdModule::ConormalA).unwrap();
    let ia = c.matrix().ia_generators().unwrap();
    let sq = square_generators(&ia);
    for v in 0..=7 {
        let want = ideal_piece_dim(&ia, v).unwrap() - ideal_piece_dim(&sq, v).unwrap();
        assert_eq!(m.piece_dim(v), want, "degree {v}");
    }
}

#[test]
fn conormal_b_matches_oracle() {
    let c = ctx(2, 3, 7);
    let m = c.module(StdModule::Conormal).unwrap();
    let ib = c.matrix().ib_generators().unwrap();
    let sq = square_generators(&ib);
    for v in 0..=7 {
        let want = ideal_piece_dim(&ib, v).unwrap() - ideal_piece_dim(&sq, v).unwrap();
        assert_eq!(m.piece_dim(v), want, "degree {v}");
    }
}

#[test]
fn identity_and_free_modules() {
    let c = ctx(2, 3, 8);
    let kb = c.module(StdModule::KB).unwrap();
    assert!(hom_dim(&kb, &kb, 0).unwrap() >= 1);
    let b = c.module(StdModule::B).unwrap();
    let e = ext_dim(&b, &kb, 1, 0, 10, 3).unwrap();
    assert_eq!(e.into_result().unwrap(), 0);
    let r = c.module(StdModule::IB).unwrap();
    assert!(hom_dim(&r, &kb, 0).is_err());
}

#[test]
fn twist_shifts_pieces() {
    let c = ctx(2, 3, 9);
    let kb = c.module(StdModule::KB).unwrap();
    let tw = kb.twisted(4);
    for v in -6..4 {
        assert_eq!(tw.piece_dim(v), kb.piece_dim(v + 4));
    }
}

#[test]
fn names_roundtrip() {
    for m in StdModule::ALL {
        assert_eq!(StdModule::from_name(m.name()).unwrap(), m);
    }
    assert_eq!(StdModule::from_name("I_{A/B}").unwrap(), StdModule::IAB);
    assert!(StdModule::from_name("Q").is_err());
}
