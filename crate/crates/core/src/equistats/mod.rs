//! Distance of the empirical distribution of `(v/√D, [Δ_v])` over a sphere
//! from the product of the uniform measures on the sphere, the shape space
//! and the torus fibres.
//!
//! Only `d = 3` has an exact shape reference (the hyperbolic measure on the
//! modular surface). For larger `d` the shape marginal is summarised by the
//! normalised first minimum and compared across norms.

mod batch;
mod measures;
mod stats;

pub use batch::{Mode, Record, SampleBatch, Seeds, StatConfig, StatReport};
pub use measures::{cap_area, hyperbolic_cell_measure, CapFamily};
pub use stats::{
    direction_cell, joint_independence, ks_uniform, shape_cell, shape_cells, shape_chi2_d3,
    torus_cell, torus_uniformity, CellRow, ShapeChi2, TorusStats, MIN_JOINT_POINTS,
    MIN_SHAPE_POINTS, MIN_TORUS_POINTS, SHAPE_Y_BANDS, TORUS_BINS,
};
