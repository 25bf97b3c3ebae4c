//! Exact arithmetic for primitive integer points on spheres and the lattices
//! orthogonal to them.
//!
//! For a primitive `v ∈ ℤ^d` with `‖v‖² = D` the crate builds
//!
//! * an oriented frame `(v₁, …, v_{d−1}, w)` of `ℤ^d` whose first `d − 1`
//!   columns span `Λ_v = ℤ^d ∩ v^⊥` and with `⟨w, v⟩ = 1` ([`ortho`]),
//! * the integral Gram matrix of `Λ_v` and its canonical class under
//!   unimodular change of basis, i.e. the *shape* of `Λ_v`,
//! * the *grid*: the shape together with the orthogonal projection of `w`
//!   as a rational point on the torus `ℝ^{d−1}/Λ_v`,
//!
//! together with the p-adic invariants of these forms ([`padic`]), the
//! enumeration and symmetry data of the spheres themselves ([`sphere`]), and
//! statistics measuring how far the empirical distribution of
//! (direction, shape, marked point) is from the uniform one ([`equistats`]).
//!
//! Everything up to the statistics layer is exact: integers never round and
//! rationals are kept in lowest terms.

#![allow(clippy::needless_range_loop)]

pub mod equistats;
mod error;
pub mod exactla;
pub mod ortho;
pub mod padic;
pub mod sphere;

pub use error::{Error, Result};
pub use exactla::{IntMatrix, RatMatrix, RatVector};
pub use ortho::{GramForm, GridClass, OrthoFrame, ShapeClass};
pub use padic::{Place, SquareClass};
pub use sphere::{Budget, OrbitInfo, PrimitiveVector};
