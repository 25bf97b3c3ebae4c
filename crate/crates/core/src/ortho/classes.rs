use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{gram_form, ortho_frame, GramForm, OrthoFrame};
use crate::exactla::{
    canonicalize, format_rational, short_vectors, solve_rational, Canonical, Equivalence,
    IntMatrix, RatVector,
};
use crate::sphere::PrimitiveVector;
use crate::{Error, Result};

/// The shape `[Λ_v]`: the class of the Gram matrix of `Λ_v` under
/// orientation-preserving changes of basis.
///
/// Rotations of `Λ_v` are exactly the changes of basis in `SL_{d−1}(ℤ)` that
/// fix the Gram matrix, so this is the shape up to `SO_{d−1}(ℝ)`; scaling
/// to covolume one is implicit since `det = D` is stored alongside.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeClass {
    gram: IntMatrix,
    norm: u64,
    /// `false` above dimension four, where `gram` is only LLL-reduced.
    canonical: bool,
}

impl ShapeClass {
    fn from_canonical(c: &Canonical, norm: u64) -> Self {
        Self {
            gram: c.gram.clone(),
            norm,
            canonical: c.exact,
        }
    }

    pub fn from_gram_form(g: &GramForm) -> Result<Self> {
        let c = canonicalize(g.matrix(), Equivalence::Proper)?;
        Ok(Self::from_canonical(&c, g.det()))
    }

    pub fn from_frame(frame: &OrthoFrame) -> Result<Self> {
        Self::from_gram_form(&gram_form(frame)?)
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// `λ₁(Λ_v)²`, the minimum of the form.
    pub fn first_minimum(&self) -> Result<i128> {
        if self.canonical {
            return Ok(self.gram.get(0, 0) as i128);
        }
        let bound = (0..self.dim())
            .map(|i| self.gram.get(i, i) as i128)
            .min()
            .unwrap_or(0);
        short_vectors(&self.gram, bound)?
            .iter()
            .map(|(_, q)| *q)
            .min()
            .ok_or_else(|| Error::Invariant("empty short vector list".into()))
    }

    /// `λ₁` of the covolume-one rescaling of `Λ_v`, i.e.
    /// `√λ₁² · D^{−1/(2(d−1))}`.
    pub fn normalized_first_minimum(&self) -> Result<f64> {
        let m = self.first_minimum()? as f64;
        Ok(m.sqrt() * (self.norm as f64).powf(-0.5 / self.dim() as f64))
    }
}

/// The grid `[Δ_v]`: the shape together with the orthogonal projection of
/// `w` as a point of the torus `ℝ^{d−1}/Λ_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridClass {
    shape: ShapeClass,
    /// Coordinates in the canonical basis, minimised lexicographically over
    /// the rotations fixing the lattice.
    t: RatVector,
    /// The element of the same rotation orbit selected by a fixed hash of
    /// its coordinates. Unlike `t` it is not pushed towards the origin,
    /// which makes it the coordinate to use for uniformity tests.
    t_sample: RatVector,
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn sample_key(t: &RatVector) -> u64 {
    let text: Vec<String> = t.entries().iter().map(format_rational).collect();
    fnv1a(text.join(",").as_bytes())
}

impl GridClass {
    pub fn from_frame(frame: &OrthoFrame) -> Result<Self> {
        let g = gram_form(frame)?;
        let c = canonicalize(g.matrix(), Equivalence::Proper)?;
        let rhs: Vec<i64> = frame
            .basis()
            .iter()
            .map(|b| crate::exactla::narrow(crate::exactla::dot(b, frame.w()), "marked point"))
            .collect::<Result<_>>()?;
        // coordinates of proj(w) = w − v/D in the frame basis
        let t0 = solve_rational(g.matrix(), &rhs)?;
        let t_canonical = t0.transform(&c.transform.unimodular_inverse()?).mod_one();
        let mut orbit: Vec<RatVector> = c
            .automorphisms
            .iter()
            .map(|a| t_canonical.transform(a).mod_one())
            .collect();
        orbit.sort();
        orbit.dedup();
        let t = orbit[0].clone();
        let t_sample = orbit
            .iter()
            .min_by(|a, b| sample_key(a).cmp(&sample_key(b)).then_with(|| a.cmp(b)))
            .expect("orbit contains the identity image")
            .clone();
        Ok(Self {
            shape: ShapeClass::from_canonical(&c, g.det()),
            t,
            t_sample,
        })
    }

    pub fn shape(&self) -> &ShapeClass {
        &self.shape
    }

    pub fn t(&self) -> &RatVector {
        &self.t
    }

    pub fn t_sample(&self) -> &RatVector {
        &self.t_sample
    }

    /// `true` if every denominator of `t` divides `D`.
    pub fn denominators_divide_norm(&self) -> bool {
        let d = num_bigint::BigInt::from(self.shape.norm);
        self.t
            .entries()
            .iter()
            .all(|x: &BigRational| (&d % x.denom()) == 0.into())
    }
}

pub fn shape(v: &PrimitiveVector) -> Result<ShapeClass> {
    ShapeClass::from_frame(&ortho_frame(v)?)
}

pub fn grid(v: &PrimitiveVector) -> Result<GridClass> {
    GridClass::from_frame(&ortho_frame(v)?)
}
