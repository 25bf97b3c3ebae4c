use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ShapeClass;
use crate::exactla::{rat, IntMatrix};
use crate::{Error, Result};

/// A point `x + iy` of the standard fundamental domain of `SL₂(ℤ)`, kept
/// exactly as the pair `(x, y²)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModularPoint {
    pub x: BigRational,
    pub y_squared: BigRational,
}

impl ModularPoint {
    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.x.to_f64().unwrap_or(f64::NAN),
            self.y_squared.to_f64().unwrap_or(f64::NAN).sqrt(),
        )
    }
}

/// Moves `x + iy` into `{|x| ≤ 1/2, x² + y² ≥ 1}` using `τ ↦ τ + n` and
/// `τ ↦ −1/τ` on exact `(x, y²)`. On the boundary the point with `x ≥ 0`
/// is chosen.
pub fn reduce_to_fundamental_domain(
    mut x: BigRational,
    mut y2: BigRational,
) -> Result<ModularPoint> {
    if !y2.is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let half = rat(1, 2);
    loop {
        // x ∈ (−1/2, 1/2]
        let shift = (&x + &half).ceil() - BigRational::one();
        x -= shift;
        let r2 = &x * &x + &y2;
        if r2 < BigRational::one() {
            x = -&x / &r2;
            y2 = &y2 / (&r2 * &r2);
            continue;
        }
        if r2.is_one() && x.is_negative() {
            x = -x;
        }
        debug_assert!(x.abs() <= half);
        return Ok(ModularPoint { x, y_squared: y2 });
    }
}

/// The point `τ = (b + i√(ac − b²))/a` of the Gram matrix `[[a, b], [b, c]]`,
/// reduced into the fundamental domain.
pub fn modular_point_of_gram(g: &IntMatrix) -> Result<ModularPoint> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::UnsupportedDimension(g.rows()));
    }
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let (a, b, c) = (
        g.get(0, 0) as i128,
        g.get(0, 1) as i128,
        g.get(1, 1) as i128,
    );
    let det = a * c - b * b;
    let a_big = num_bigint::BigInt::from(a);
    let x = BigRational::new(b.into(), a_big.clone());
    let y2 = BigRational::new(det.into(), &a_big * &a_big);
    reduce_to_fundamental_domain(x, y2)
}

/// Position of a two-dimensional shape on the modular surface.
pub fn modular_point(shape: &ShapeClass) -> Result<(f64, f64)> {
    if shape.dim() != 2 {
        return Err(Error::UnsupportedDimension(shape.dim()));
    }
    let p = modular_point_of_gram(shape.gram())?;
    debug_assert!(!p.y_squared.is_zero());
    Ok(p.to_f64())
}
