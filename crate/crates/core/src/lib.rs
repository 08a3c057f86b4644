//! Invariants of codimension-4 arithmetically Gorenstein schemes defined by
//! the submaximal minors of a homogeneous t×t matrix.

pub mod betti;
pub mod degmat;
pub mod error;
pub mod exactalg;
pub mod gradedmod;
pub mod invariants;
pub mod matgen;
pub mod oracle;

pub use degmat::{DegreeMatrix, HypothesisReport};
pub use error::{Error, Result};
pub use matgen::HomogeneousMatrix;
