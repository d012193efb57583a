//! Exact computations on flat translation surfaces: Perron–Frobenius data of
//! integer matrices, enumeration of cusp data and gluing patterns, surface
//! reconstruction, Veech groups of origamis, Markov partitions for
//! pseudo-Anosov maps and horoball geometry in the upper half plane.

pub mod exactnum;
pub mod pfcore;
pub mod perm;
pub mod enumerate;
pub mod surface;
pub mod hyperbolic;
pub mod origami;
pub mod markov;
