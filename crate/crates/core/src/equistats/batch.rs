use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    direction_cell, joint_independence, shape_chi2_d3, torus_cell, torus_uniformity, CapFamily,
    CellRow, MIN_JOINT_POINTS, MIN_SHAPE_POINTS, MIN_TORUS_POINTS,
};
use crate::ortho::{grid, modular_point};
use crate::sphere::{
    enumerate_sphere_with, orbit_elements, orbit_info, orbit_representatives, SignedPermutation,
};
use crate::{Budget, Error, GridClass, PrimitiveVector, Result};

/// How sphere points enter a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One record per Γ₁-orbit, weighted by the orbit size.
    Orbit,
    /// One record per sphere point.
    Raw,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orbit" => Ok(Mode::Orbit),
            "raw" => Ok(Mode::Raw),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Orbit => "orbit",
            Mode::Raw => "raw",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub vector: PrimitiveVector,
    /// Number of sphere points the record stands for.
    pub weight: u64,
    pub grid: GridClass,
    /// Shape as a point of the modular surface, for `d = 3`.
    pub modular: Option<(f64, f64)>,
    pub normalized_first_minimum: f64,
}

impl Record {
    pub fn new(vector: PrimitiveVector, weight: u64) -> Result<Self> {
        let grid = grid(&vector)?;
        let modular = if vector.dim() == 3 {
            Some(modular_point(grid.shape())?)
        } else {
            None
        };
        let normalized_first_minimum = grid.shape().normalized_first_minimum()?;
        Ok(Self {
            vector,
            weight,
            grid,
            modular,
            normalized_first_minimum,
        })
    }

    /// `t_sample` as floating point coordinates in `[0, 1)`.
    pub fn torus_point(&self) -> Vec<f64> {
        self.grid.t_sample().to_f64()
    }

    /// The sphere points the record stands for.
    pub fn points(&self, mode: Mode) -> Vec<PrimitiveVector> {
        match mode {
            Mode::Orbit => orbit_elements(&self.vector),
            Mode::Raw => vec![self.vector.clone()],
        }
    }
}

/// The paired data `(v/√D, [Δ_v])` over a whole sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub d: usize,
    #[serde(rename = "D")]
    pub norm: u64,
    pub mode: Mode,
    pub records: Vec<Record>,
}

impl SampleBatch {
    pub fn build(d: usize, norm: u64, mode: Mode, budget: &Budget) -> Result<Self> {
        budget.check(d, norm)?;
        let records: Vec<Record> = match mode {
            Mode::Orbit => orbit_representatives(d, norm)?
                .into_par_iter()
                .map(|v| {
                    let w = orbit_info(&v).orbit_size;
                    Record::new(v, w)
                })
                .collect::<Result<_>>()?,
            Mode::Raw => enumerate_sphere_with(d, norm, budget)?
                .into_par_iter()
                .map(|v| Record::new(v, 1))
                .collect::<Result<_>>()?,
        };
        if records.is_empty() {
            return Err(Error::EmptySphere { dim: d, norm });
        }
        Ok(Self {
            d,
            norm,
            mode,
            records,
        })
    }

    /// A raw batch over given sphere points, e.g. read back from a file.
    pub fn from_vectors(d: usize, norm: u64, vectors: Vec<PrimitiveVector>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != d || v.norm() != norm) {
            return Err(Error::InvalidArgument(format!(
                "{v} does not lie on the sphere of norm {norm} in dimension {d}"
            )));
        }
        if vectors.is_empty() {
            return Err(Error::EmptySphere { dim: d, norm });
        }
        let records = vectors
            .into_par_iter()
            .map(|v| Record::new(v, 1))
            .collect::<Result<_>>()?;
        Ok(Self {
            d,
            norm,
            mode: Mode::Raw,
            records,
        })
    }

    /// The batch built from `γ·v` for every record vector `v`, with all
    /// classes recomputed.
    pub fn transformed(&self, gamma: &SignedPermutation) -> Result<Self> {
        if gamma.dim() != self.d {
            return Err(Error::Dimension("signed permutation".into()));
        }
        let records = self
            .records
            .par_iter()
            .map(|r| {
                let v = PrimitiveVector::new(&gamma.apply(r.vector.coords()))?;
                Record::new(v, r.weight)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            d: self.d,
            norm: self.norm,
            mode: self.mode,
            records,
        })
    }

    /// `|𝕊^{d−1}(D)|`.
    pub fn n_points(&self) -> u64 {
        self.records.iter().map(|r| r.weight).sum()
    }

    /// Unit directions of all sphere points, `d` numbers each.
    pub fn directions(&self) -> Vec<f64> {
        self.records
            .par_iter()
            .flat_map_iter(|r| r.points(self.mode).into_iter().flat_map(|v| v.unit()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatConfig {
    pub cap_count: usize,
    pub cap_seed: u64,
}

impl Default for StatConfig {
    fn default() -> Self {
        Self {
            cap_count: CapFamily::DEFAULT_SIZE,
            cap_seed: CapFamily::DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub cap_family: u64,
}

/// Distances of one batch from the uniform product measure. The shape and
/// joint statistics are `None`, with a line in `notes`, when their minimum
/// sample size is not met or no reference measure exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub d: usize,
    #[serde(rename = "D")]
    pub norm: u64,
    pub n_points: u64,
    pub n_records: usize,
    pub mode: Mode,
    pub seeds: Seeds,
    pub cap_count: usize,
    pub cap_discrepancy: f64,
    pub torus_ks: Vec<f64>,
    pub torus_pair_chi2: Vec<f64>,
    pub shape_chi2: Option<f64>,
    pub shape_cells: Option<Vec<CellRow>>,
    pub joint_chi2: Option<f64>,
    /// Weighted mean of `λ₁` of the covolume-one rescaled lattice.
    pub mean_normalized_first_minimum: f64,
    pub notes: Vec<String>,
}

impl StatReport {
    pub fn compute(batch: &SampleBatch, config: &StatConfig) -> Result<Self> {
        let caps = CapFamily::new(batch.d, config.cap_count, config.cap_seed)?;
        Self::compute_with(batch, &caps)
    }

    pub fn compute_with(batch: &SampleBatch, caps: &CapFamily) -> Result<Self> {
        let n = batch.n_points();
        if n < MIN_TORUS_POINTS {
            return Err(Error::TooFewPoints {
                have: n,
                need: MIN_TORUS_POINTS,
            });
        }
        let mut notes = Vec::new();
        let cap_discrepancy = caps.discrepancy(&batch.directions())?;

        let torus: Vec<Vec<f64>> = batch.records.iter().map(Record::torus_point).collect();
        let samples: Vec<(&[f64], u64)> = torus
            .iter()
            .zip(&batch.records)
            .map(|(t, r)| (t.as_slice(), r.weight))
            .collect();
        let torus_stats = torus_uniformity(&samples)?;

        let (shape_chi2, shape_cells) = if batch.d != 3 {
            notes.push(
                "shape marginal has no reference density above d = 3; see mean_normalized_first_minimum".into(),
            );
            (None, None)
        } else if n < MIN_SHAPE_POINTS {
            notes.push(format!(
                "shape statistic needs at least {MIN_SHAPE_POINTS} points"
            ));
            (None, None)
        } else {
            let pts: Vec<((f64, f64), u64)> = batch
                .records
                .iter()
                .map(|r| {
                    r.modular
                        .map(|p| (p, r.weight))
                        .ok_or_else(|| Error::Invariant("missing modular point".into()))
                })
                .collect::<Result<_>>()?;
            let s = shape_chi2_d3(&pts)?;
            (Some(s.normalized), Some(s.cells))
        };

        let joint_chi2 = if n >= MIN_JOINT_POINTS {
            let mut cells = Vec::new();
            for (r, t) in batch.records.iter().zip(&torus) {
                let b = torus_cell(t);
                for v in r.points(batch.mode) {
                    cells.push((direction_cell(&v.unit()), b, 1));
                }
            }
            Some(joint_independence(&cells)?)
        } else {
            notes.push(format!(
                "joint statistic needs at least {MIN_JOINT_POINTS} points"
            ));
            None
        };

        // summed per distinct value so that the result does not depend on the mode
        let mut by_value: BTreeMap<u64, u64> = BTreeMap::new();
        for r in &batch.records {
            *by_value
                .entry(r.normalized_first_minimum.to_bits())
                .or_default() += r.weight;
        }
        let mean_normalized_first_minimum = by_value
            .iter()
            .map(|(&bits, &w)| f64::from_bits(bits) * w as f64)
            .sum::<f64>()
            / n as f64;

        Ok(Self {
            d: batch.d,
            norm: batch.norm,
            n_points: n,
            n_records: batch.records.len(),
            mode: batch.mode,
            seeds: Seeds {
                cap_family: caps.seed(),
            },
            cap_count: caps.len(),
            cap_discrepancy,
            torus_ks: torus_stats.ks,
            torus_pair_chi2: torus_stats.pair_chi2,
            shape_chi2,
            shape_cells,
            joint_chi2,
            mean_normalized_first_minimum,
            notes,
        })
    }
}
