//! The orthogonal lattice `Λ_v = ℤ^d ∩ v^⊥`, its frame and Gram form, and
//! the shape and grid classes built from them.

mod classes;
mod modular;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::exactla::{dot, frame_parts, IntMatrix};
use crate::sphere::{Coords, PrimitiveVector};
use crate::{Error, Result};

pub use classes::{grid, shape, GridClass, ShapeClass};
pub use modular::{
    modular_point, modular_point_of_gram, reduce_to_fundamental_domain, ModularPoint,
};

/// An oriented basis `(v₁, …, v_{d−1}, w)` of `ℤ^d` with `vᵢ ∈ Λ_v` and
/// `⟨w, v⟩ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrthoFrame {
    v: PrimitiveVector,
    basis: Vec<Coords>,
    w: Coords,
}

impl OrthoFrame {
    /// Validates a frame chosen by the caller.
    pub fn from_parts(v: PrimitiveVector, basis: Vec<Vec<i64>>, w: Vec<i64>) -> Result<Self> {
        let d = v.dim();
        if basis.len() + 1 != d || basis.iter().any(|b| b.len() != d) || w.len() != d {
            return Err(Error::Dimension("frame of the wrong shape".into()));
        }
        let frame = Self {
            basis: basis.into_iter().map(Coords::from_vec).collect(),
            w: Coords::from_vec(w),
            v,
        };
        frame.validate()?;
        Ok(frame)
    }

    fn validate(&self) -> Result<()> {
        let v = self.v.coords();
        if self.basis.iter().any(|b| dot(b, v) != 0) {
            return Err(Error::InvalidArgument(
                "basis vector not orthogonal to v".into(),
            ));
        }
        if dot(&self.w, v) != 1 {
            return Err(Error::InvalidArgument("⟨w, v⟩ ≠ 1".into()));
        }
        let det = self.matrix().det();
        if det != 1.into() {
            return Err(Error::InvalidArgument(format!(
                "det g_v = {det}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn v(&self) -> &PrimitiveVector {
        &self.v
    }

    pub fn basis(&self) -> &[Coords] {
        &self.basis
    }

    pub fn w(&self) -> &[i64] {
        &self.w
    }

    /// `g_v`, the matrix with columns `v₁, …, v_{d−1}, w`.
    pub fn matrix(&self) -> IntMatrix {
        let mut cols: SmallVec<[&[i64]; 8]> = self.basis.iter().map(|b| b.as_slice()).collect();
        cols.push(&self.w);
        IntMatrix::from_columns(&cols).expect("frame columns have equal length")
    }
}

/// Builds a reduced oriented frame for `v`.
///
/// If the completed basis has determinant −1 the first kernel vector is
/// negated.
pub fn ortho_frame(v: &PrimitiveVector) -> Result<OrthoFrame> {
    let (basis, w) = frame_parts(v.coords())?;
    let mut frame = OrthoFrame {
        v: v.clone(),
        basis: basis.into_iter().map(|b| b.into_iter().collect()).collect(),
        w: w.into_iter().collect(),
    };
    let det = frame.matrix().det_i128()?;
    match det {
        1 => {}
        -1 => {
            for x in frame.basis[0].iter_mut() {
                *x = -*x;
            }
        }
        _ => {
            return Err(Error::Invariant(format!(
                "frame of {v:?} has determinant {det}"
            )))
        }
    }
    Ok(frame)
}

/// The Gram matrix `M_{ij} = ⟨vᵢ, vⱼ⟩` of `Λ_v` in the frame basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GramForm {
    m: IntMatrix,
    det: u64,
}

impl GramForm {
    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn det(&self) -> u64 {
        self.det
    }

    /// `B(x, y) = xᵀ M y`.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> i128 {
        self.m.bilinear(x, y)
    }

    /// `φ(x) = xᵀ M x`.
    pub fn quadratic(&self, x: &[i64]) -> i128 {
        self.m.quadratic_form(x)
    }
}

/// Gram form of the frame basis. Its determinant equals `D` and its entries
/// are coprime; a violation of either is reported as [`Error::Invariant`].
pub fn gram_form(frame: &OrthoFrame) -> Result<GramForm> {
    let n = frame.basis.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = crate::exactla::narrow(dot(&frame.basis[i], &frame.basis[j]), "Gram matrix")?;
            m.set(i, j, x);
            m.set(j, i, x);
        }
    }
    let norm = frame.v.norm();
    let det = m.det();
    if det != norm.into() {
        return Err(Error::Invariant(format!(
            "Gram determinant {det} differs from D = {norm} for {:?}",
            frame.v
        )));
    }
    if m.content() != 1 {
        return Err(Error::Invariant(format!(
            "Gram matrix of {:?} is not primitive",
            frame.v
        )));
    }
    Ok(GramForm { m, det: norm })
}
