//! Goodness-of-fit statistics on weighted samples. A weight counts how many
//! sphere points a sample stands for.

use serde::{Deserialize, Serialize};

use super::hyperbolic_cell_measure;
use crate::{Error, Result};

pub const MIN_TORUS_POINTS: u64 = 20;
pub const MIN_SHAPE_POINTS: u64 = 100;
pub const MIN_JOINT_POINTS: u64 = 500;

/// Bins per axis of the pairwise torus histogram.
pub const TORUS_BINS: usize = 8;

fn total_weight<T>(samples: &[(T, u64)]) -> u64 {
    samples.iter().map(|(_, w)| w).sum()
}

fn require(have: u64, need: u64) -> Result<()> {
    if have < need {
        return Err(Error::TooFewPoints { have, need });
    }
    Ok(())
}

/// `Σ (p̂ − p)²/p` divided by its largest possible value `1/min p − 1`.
fn normalized_phi2(observed: &[u64], expected: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    let phi2: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let diff = o as f64 / n as f64 - p;
            diff * diff / p
        })
        .sum();
    let p_min = expected.iter().cloned().fold(f64::INFINITY, f64::min);
    phi2 / (1.0 / p_min - 1.0)
}

/// Kolmogorov–Smirnov distance of a weighted sample in `[0, 1)` from the
/// uniform distribution.
pub fn ks_uniform(samples: &[(f64, u64)]) -> Result<f64> {
    let n = total_weight(samples);
    require(n, 1)?;
    let mut sorted: Vec<(f64, u64)> = samples.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut below = 0u64;
    let mut worst = 0f64;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i].0;
        let mut at = 0u64;
        while i < sorted.len() && sorted[i].0 == x {
            at += sorted[i].1;
            i += 1;
        }
        let before = below as f64 / n as f64;
        below += at;
        let after = below as f64 / n as f64;
        worst = worst.max((before - x).abs()).max((after - x).abs());
    }
    Ok(worst)
}

/// Uniformity of marked points on the torus `[0, 1)^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusStats {
    /// One KS distance per coordinate.
    pub ks: Vec<f64>,
    /// Normalised chi-square of each coordinate pair `(i, j)`, `i < j`, on an
    /// 8 × 8 grid, in the order `(0,1), (0,2), …`.
    pub pair_chi2: Vec<f64>,
}

fn bin(x: f64, bins: usize) -> usize {
    ((x * bins as f64).floor().max(0.0) as usize).min(bins - 1)
}

pub fn torus_uniformity(samples: &[(&[f64], u64)]) -> Result<TorusStats> {
    require(total_weight(samples), MIN_TORUS_POINTS)?;
    let k = samples[0].0.len();
    if samples.iter().any(|(t, _)| t.len() != k) {
        return Err(Error::Dimension("torus points of mixed dimension".into()));
    }
    let mut ks = Vec::with_capacity(k);
    for axis in 0..k {
        let column: Vec<(f64, u64)> = samples.iter().map(|(t, w)| (t[axis], *w)).collect();
        ks.push(ks_uniform(&column)?);
    }
    let cells = TORUS_BINS * TORUS_BINS;
    let expected = vec![1.0 / cells as f64; cells];
    let mut pair_chi2 = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let mut observed = vec![0u64; cells];
            for (t, w) in samples {
                observed[bin(t[i], TORUS_BINS) * TORUS_BINS + bin(t[j], TORUS_BINS)] += w;
            }
            pair_chi2.push(normalized_phi2(&observed, &expected));
        }
    }
    Ok(TorusStats { ks, pair_chi2 })
}

/// Upper edges of the `y`-bands; the first band starts at the bottom of the
/// fundamental domain.
pub const SHAPE_Y_BANDS: [f64; 6] = [1.0, 1.25, 5.0 / 3.0, 2.5, 5.0, f64::INFINITY];

/// One cell of the modular-surface partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    /// `None` for the unbounded top band.
    pub y_hi: Option<f64>,
    pub expected: f64,
    pub observed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeChi2 {
    /// `n·Σ (p̂ − p)²/p`, asymptotically χ² with 11 degrees of freedom.
    pub statistic: f64,
    /// The same divided by `n·(1/min p − 1)`, so in `[0, 1]`.
    pub normalized: f64,
    pub cells: Vec<CellRow>,
}

/// Index of the cell holding `(x, y)`: six `y`-bands times `x < 0`,
/// `x ≥ 0`, lower edges inclusive.
pub fn shape_cell(x: f64, y: f64) -> usize {
    let band = SHAPE_Y_BANDS
        .iter()
        .position(|&hi| y < hi)
        .unwrap_or(SHAPE_Y_BANDS.len() - 1);
    2 * band + usize::from(x >= 0.0)
}

/// The twelve cells with their hyperbolic measures.
pub fn shape_cells() -> Result<Vec<CellRow>> {
    let mut rows = Vec::with_capacity(12);
    let mut y_lo = 3f64.sqrt() / 2.0;
    for &y_hi in &SHAPE_Y_BANDS {
        for (x_lo, x_hi) in [(-0.5, 0.0), (0.0, 0.5)] {
            rows.push(CellRow {
                x_lo,
                x_hi,
                y_lo,
                y_hi: y_hi.is_finite().then_some(y_hi),
                expected: hyperbolic_cell_measure(x_lo, x_hi, y_lo, y_hi)?,
                observed: 0,
            });
        }
        y_lo = y_hi;
    }
    Ok(rows)
}

/// Chi-square distance of weighted points `(x, y)` of the fundamental
/// domain from the hyperbolic measure over the cells of [`shape_cells`].
pub fn shape_chi2_d3(points: &[((f64, f64), u64)]) -> Result<ShapeChi2> {
    let n = total_weight(points);
    require(n, MIN_SHAPE_POINTS)?;
    let mut cells = shape_cells()?;
    for ((x, y), w) in points {
        cells[shape_cell(*x, *y)].observed += w;
    }
    let observed: Vec<u64> = cells.iter().map(|c| c.observed).collect();
    let expected: Vec<f64> = cells.iter().map(|c| c.expected).collect();
    let normalized = normalized_phi2(&observed, &expected);
    let p_min = expected.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ShapeChi2 {
        statistic: normalized * n as f64 * (1.0 / p_min - 1.0),
        normalized,
        cells,
    })
}

/// Sign pattern of the first two coordinates of a direction, nonnegative
/// counted as positive.
pub fn direction_cell(u: &[f64]) -> usize {
    2 * usize::from(u[0] >= 0.0) + usize::from(u[1] >= 0.0)
}

/// Quadrant of the first two torus coordinates, split at ½.
pub fn torus_cell(t: &[f64]) -> usize {
    2 * usize::from(t[0] >= 0.5) + usize::from(t[1] >= 0.5)
}

/// Normalised chi-square of the 4 × 4 table (direction cell × torus cell)
/// against the product of the two uniform reference marginals.
pub fn joint_independence(samples: &[(usize, usize, u64)]) -> Result<f64> {
    require(samples.iter().map(|s| s.2).sum(), MIN_JOINT_POINTS)?;
    let mut observed = vec![0u64; 16];
    for &(a, b, w) in samples {
        if a >= 4 || b >= 4 {
            return Err(Error::InvalidArgument("cell index out of range".into()));
        }
        observed[4 * a + b] += w;
    }
    Ok(normalized_phi2(&observed, &[1.0 / 16.0; 16]))
}
