//! Exact integer and rational linear algebra.

mod canonical;
mod lattice;
mod lll;
mod matrix;
mod rational;

pub use canonical::{
    canonical_gram, canonicalize, is_automorphism, short_vectors, Canonical, Equivalence,
    MAX_CANONICAL_DIM,
};
pub(crate) use lattice::{dot, frame_parts};
pub use lattice::{
    egcd, ext_complete, gcd_slice, kernel_basis, pair_reduce, reduce_against, IntVec,
};
pub use lll::lll_reduce_gram;
pub(crate) use matrix::narrow;
pub use matrix::IntMatrix;
pub use rational::{
    format_rational, frac, parse_rational, rat, rat_int, solve_rational, RatMatrix, RatVector,
};
