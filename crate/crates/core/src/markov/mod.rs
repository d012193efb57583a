//! Markov partitions for pseudo-Anosov affine automorphisms of square-tiled
//! surfaces: construction from a singular horizontal segment and the
//! vertical separatrices hitting it, verification, intersection matrices,
//! refinements, and reconstruction of the metric from combinatorics.

mod eigen;
mod graph;
mod leaves;
mod partition;
mod reconstruct;
mod svg;

use thiserror::Error;

use crate::exactnum::{NFElement, Rational};
use crate::origami::Sl2z;
use crate::surface::SurfaceError;

pub use eigen::{to_eigenbasis, EigenSurface};
pub use graph::{Edge, EdgeKind, GraphVertex, Incidence, SegmentGluingGraph, Side};
pub use leaves::{trace_leaf, Germ, LeafDir, LeafHit, Leaves, Segment, SurfacePoint, TraceError};
pub use partition::{build_markov, intersection_matrix, refine_partition, verify_markov, Axis, MarkovPartition, MarkovRect};
pub use reconstruct::{reconstruct_from_markov, MarkovSurface};
pub use svg::render_partition_svg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarkovError {
    #[error("{0:?} is not hyperbolic")]
    NotHyperbolic(Sl2z),
    #[error("surface is not tiled by equal squares")]
    NotSquareTiled,
    #[error("affine automorphism does not preserve the surface")]
    InvalidAutomorphism,
    #[error("saddle connection from vertex {vertex} of length {length}")]
    SaddleConnectionFound { vertex: usize, length: NFElement },
    #[error("Markov property violated: {0}")]
    MarkovPropertyViolated(String),
    #[error("gluing graph incompatible with the matrix: {0}")]
    IncompatibleGraph(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// (k/4, 1 + k/2) with k = Σ k_σ.
pub fn markov_bounds(prongs: &[u64]) -> (Rational, Rational) {
    let k: u64 = prongs.iter().sum();
    let k = Rational::from_integer(k.into());
    let quarter = Rational::new(1.into(), 4.into());
    let half = Rational::new(1.into(), 2.into());
    (&k * quarter, Rational::from_integer(1.into()) + k * half)
}
