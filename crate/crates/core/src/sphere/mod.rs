//! Primitive integer points on spheres `‖v‖² = D`, admissibility of `D`, and
//! the action of the signed permutation group `Γ₁ = SO_d(ℤ)`.

mod enumerate;
mod symmetry;

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::exactla::gcd_slice;
use crate::{Error, Result};

pub use enumerate::{
    count_sphere, enumerate_sphere, enumerate_sphere_with, first_coordinates, for_each_in_ball,
    for_each_in_sphere, for_each_with_first, Budget,
};
pub use symmetry::{
    gamma1_elements, gamma1_order, orbit_elements, orbit_info, orbit_representatives,
    stabilizer_fraction, stabilizer_size_brute_force, OrbitInfo, SignedPermutation,
};

pub type Coords = SmallVec<[i64; 8]>;

/// Smallest and largest ambient dimension supported.
pub const MIN_DIM: usize = 3;
pub const MAX_DIM: usize = 8;

/// A primitive vector of `ℤ^d`, `d ≥ 3`, with its squared length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimitiveVector {
    coords: Coords,
    norm: u64,
}

impl PrimitiveVector {
    pub fn new(coords: &[i64]) -> Result<Self> {
        if coords.len() < MIN_DIM || coords.len() > MAX_DIM {
            return Err(Error::UnsupportedDimension(coords.len()));
        }
        match gcd_slice(coords) {
            0 => return Err(Error::ZeroVector),
            1 => {}
            _ => return Err(Error::NotPrimitive(coords.to_vec())),
        }
        let norm: i128 = coords.iter().map(|&x| x as i128 * x as i128).sum();
        let norm = u64::try_from(norm).map_err(|_| Error::Overflow("squared norm"))?;
        Ok(Self {
            coords: coords.iter().copied().collect(),
            norm,
        })
    }

    /// Skips validation; callers guarantee primitivity and the norm.
    pub(crate) fn from_parts_unchecked(coords: &[i64], norm: u64) -> Self {
        debug_assert_eq!(gcd_slice(coords), 1);
        Self {
            coords: coords.iter().copied().collect(),
            norm,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// `D = ‖v‖²`.
    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn unit(&self) -> Vec<f64> {
        let r = (self.norm as f64).sqrt();
        self.coords.iter().map(|&x| x as f64 / r).collect()
    }
}

impl fmt::Debug for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords.as_slice())
    }
}

impl fmt::Display for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Checks that `p` is an odd prime.
pub fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Whether `D` belongs to the set of squared radii along which the
/// equidistribution statement is made for dimension `d`, optionally
/// intersected with `{D : p ∤ D}`.
///
/// `d = 3`: `D mod 8 ∉ {0, 4, 7}`; `d = 4`: `8 ∤ D`; `d ≥ 5`: every `D ≥ 1`.
pub fn is_admissible(d: usize, norm: u64, p: Option<u64>) -> Result<bool> {
    if d < MIN_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    if let Some(p) = p {
        check_odd_prime(p)?;
    }
    if norm == 0 {
        return Ok(false);
    }
    let base = match d {
        3 => !matches!(norm % 8, 0 | 4 | 7),
        4 => norm % 8 != 0,
        _ => true,
    };
    Ok(base && p.map_or(true, |p| norm % p != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_vector_validation() {
        assert!(PrimitiveVector::new(&[1, 2, 3]).is_ok());
        assert_eq!(PrimitiveVector::new(&[1, 2, 3]).unwrap().norm(), 14);
        assert!(matches!(
            PrimitiveVector::new(&[2, 4, 6]),
            Err(Error::NotPrimitive(_))
        ));
        assert_eq!(PrimitiveVector::new(&[0, 0, 0]), Err(Error::ZeroVector));
        assert_eq!(
            PrimitiveVector::new(&[1, 1]),
            Err(Error::UnsupportedDimension(2))
        );
    }

    #[test]
    fn admissibility_examples() {
        assert!(!is_admissible(3, 7, None).unwrap());
        assert!(!is_admissible(4, 8, None).unwrap());
        assert!(!is_admissible(5, 10, Some(5)).unwrap());
        assert!(is_admissible(3, 3, None).unwrap());
        assert!(is_admissible(4, 12, None).unwrap());
        assert!(is_admissible(5, 16, None).unwrap());
        assert!(is_admissible(5, 16, Some(3)).unwrap());
        assert!(!is_admissible(3, 12, None).unwrap());
    }

    #[test]
    fn admissibility_rejects_bad_primes() {
        assert_eq!(is_admissible(3, 5, Some(2)), Err(Error::NotOddPrime(2)));
        assert_eq!(is_admissible(3, 5, Some(9)), Err(Error::NotOddPrime(9)));
        assert_eq!(is_admissible(3, 5, Some(1)), Err(Error::NotOddPrime(1)));
    }
}
