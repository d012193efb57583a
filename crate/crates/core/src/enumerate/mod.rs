//! Finite censuses: irreducible matrices with bounded Perron root, cusp
//! matrix pairs (A, D), and gluing patterns of rectangles.

mod gluing;
mod matrices;
pub mod oracle;

pub use gluing::{canonical_pair, canonical_with, enumerate_gluings, label_automorphisms, GluingPattern};
pub use matrices::{
    entry_bound, enumerate_cusp_data, enumerate_irreducible, enumerate_pa_matrices, enumerate_symmetric,
    CuspMatrixPair,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("invalid gluing pattern: {0}")]
    InvalidPattern(String),
}
