//! Reference measures: normalised spherical caps and the hyperbolic measure
//! on the modular fundamental domain.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use statrs::function::beta::beta_reg;

use crate::{Error, Result};

/// Normalised area of `{x ∈ S^{d−1} : ⟨x, n⟩ ≥ t}`.
///
/// For `t ≥ 0` this is `½·I_{1−t²}((d−1)/2, ½)`; negative heights use the
/// complement.
pub fn cap_area(d: usize, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "cap height {t} outside [-1, 1]"
        )));
    }
    if t < 0.0 {
        return Ok(1.0 - cap_area(d, -t)?);
    }
    if t == 1.0 {
        return Ok(0.0);
    }
    Ok(0.5 * beta_reg((d as f64 - 1.0) / 2.0, 0.5, 1.0 - t * t))
}

/// A fixed family of spherical caps `{x : ⟨x, nₖ⟩ ≥ tₖ}` with Gaussian
/// (hence uniform) normals and heights uniform in `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapFamily {
    d: usize,
    seed: u64,
    normals: Vec<Vec<f64>>,
    heights: Vec<f64>,
    areas: Vec<f64>,
}

impl CapFamily {
    pub const DEFAULT_SIZE: usize = 4096;
    pub const DEFAULT_SEED: u64 = 0x5EED_CA95;

    pub fn new(d: usize, count: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let heights_dist = Uniform::new_inclusive(-1.0, 1.0).expect("valid range");
        let mut normals = Vec::with_capacity(count);
        let mut heights = Vec::with_capacity(count);
        while normals.len() < count {
            let n: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = n.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r < 1e-9 {
                continue;
            }
            normals.push(n.iter().map(|x| x / r).collect());
            heights.push(heights_dist.sample(&mut rng));
        }
        Self::from_parts(d, seed, normals, heights)
    }

    pub fn with_defaults(d: usize) -> Result<Self> {
        Self::new(d, Self::DEFAULT_SIZE, Self::DEFAULT_SEED)
    }

    /// The `2d` hemispheres `{±xᵢ ≥ 0}`.
    pub fn axis_hemispheres(d: usize) -> Result<Self> {
        let mut normals = Vec::new();
        for i in 0..d {
            for s in [1.0, -1.0] {
                let mut n = vec![0.0; d];
                n[i] = s;
                normals.push(n);
            }
        }
        let heights = vec![0.0; 2 * d];
        Self::from_parts(d, 0, normals, heights)
    }

    pub fn from_parts(
        d: usize,
        seed: u64,
        normals: Vec<Vec<f64>>,
        heights: Vec<f64>,
    ) -> Result<Self> {
        if normals.len() != heights.len() || normals.iter().any(|n| n.len() != d) {
            return Err(Error::Dimension("cap family".into()));
        }
        let areas = heights
            .iter()
            .map(|&t| cap_area(d, t))
            .collect::<Result<_>>()?;
        Ok(Self {
            d,
            seed,
            normals,
            heights,
            areas,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    /// `max_k |#{x ∈ cap_k} / n − area_k|` over unit vectors stored
    /// contiguously in `points`, boundary points counted as inside.
    pub fn discrepancy(&self, points: &[f64]) -> Result<f64> {
        let d = self.d;
        if points.len() % d != 0 {
            return Err(Error::Dimension(
                "point dimension differs from the cap family".into(),
            ));
        }
        if points.is_empty() {
            return Err(Error::TooFewPoints { have: 0, need: 1 });
        }
        let n = (points.len() / d) as f64;
        let worst = (0..self.len())
            .into_par_iter()
            .map(|k| {
                let (normal, t) = (&self.normals[k], self.heights[k]);
                let inside = points
                    .chunks_exact(d)
                    .filter(|p| p.iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() >= t)
                    .count() as f64;
                (inside / n - self.areas[k]).abs()
            })
            .reduce(|| 0.0, f64::max);
        Ok(worst)
    }
}

/// Normalised hyperbolic measure `(3/π)·dx·dy/y²` of the part of the
/// rectangle `[x₁, x₂] × [y₁, y₂]` inside `{|x| ≤ ½, x² + y² ≥ 1}`.
/// `y₂` may be `f64::INFINITY`.
pub fn hyperbolic_cell_measure(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<f64> {
    if y1.is_nan() || y1 <= 0.0 {
        return Err(Error::InvalidArgument(
            "cell must lie in the upper half-plane".into(),
        ));
    }
    if x1 > x2 || y1 > y2 {
        return Err(Error::InvalidArgument("empty or inverted cell".into()));
    }
    let lo = x1.max(-0.5);
    let hi = x2.min(0.5);
    if lo >= hi {
        return Ok(0.0);
    }
    let inv_y2 = if y2.is_infinite() { 0.0 } else { 1.0 / y2 };
    // the arc y = √(1 − x²) is above y₁ for |x| < a and below y₂ for |x| > b
    let a = if y1 < 1.0 {
        (1.0 - y1 * y1).sqrt()
    } else {
        0.0
    };
    let b = if y2 < 1.0 {
        (1.0 - y2 * y2).sqrt()
    } else {
        0.0
    };
    let mut cuts = vec![lo, hi];
    for c in [a, -a, b, -b] {
        if c > lo && c < hi {
            cuts.push(c);
        }
    }
    cuts.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (u, v) = (w[0], w[1]);
        let mid = 0.5 * (u + v);
        let arc = (1.0 - mid * mid).sqrt();
        let lower = arc.max(y1);
        if lower >= y2 {
            continue;
        }
        total += if arc > y1 {
            (v.asin() - u.asin()) - (v - u) * inv_y2
        } else {
            (v - u) * (1.0 / y1 - inv_y2)
        };
    }
    Ok(3.0 / PI * total)
}
