use num_integer::{gcd, Roots};
use rayon::prelude::*;

use super::{PrimitiveVector, MAX_DIM, MIN_DIM};
use crate::{Error, Result};

/// Resource guard for sphere enumeration.
///
/// The search visits roughly `(d/2)·V_d·D^{(d−2)/2}` points of the sphere and
/// `V_{d−2}·D^{(d−2)/2}` interior nodes, where `V_k` is the volume of the unit
/// `k`-ball. Requests whose estimate exceeds `limit` are refused.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub limit: f64,
}

impl Default for Budget {
    /// Admits everything up to `d = 6, D = 10⁴`.
    fn default() -> Self {
        Self {
            limit: Self::estimate(6, 10_000),
        }
    }
}

fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * std::f64::consts::PI / k as f64,
    }
}

impl Budget {
    pub fn new(limit: f64) -> Self {
        Self { limit }
    }

    pub fn unlimited() -> Self {
        Self {
            limit: f64::INFINITY,
        }
    }

    pub fn estimate(d: usize, norm: u64) -> f64 {
        let d = d.max(2);
        let scale = (norm as f64).powf((d as f64 - 2.0) / 2.0);
        (d as f64 / 2.0 * unit_ball_volume(d) + unit_ball_volume(d - 2)) * scale
    }

    pub fn check(&self, d: usize, norm: u64) -> Result<()> {
        let estimate = Self::estimate(d, norm);
        if estimate > self.limit {
            return Err(Error::BudgetExceeded {
                dim: d,
                norm,
                estimate,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

fn check_dim(d: usize) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    Ok(())
}

fn exact_sqrt(n: u64) -> Option<i64> {
    let s = n.sqrt();
    (s * s == n).then_some(s as i64)
}

fn sphere_rec<F: FnMut(&[i64])>(x: &mut [i64], i: usize, rest: u64, g: i64, f: &mut F) {
    let d = x.len();
    if i + 1 == d {
        if let Some(s) = exact_sqrt(rest) {
            if gcd(g, s) == 1 {
                x[i] = s;
                f(x);
                if s != 0 {
                    x[i] = -s;
                    f(x);
                }
            }
        }
        return;
    }
    let r = rest.sqrt() as i64;
    if i + 2 == d {
        for a in (-r..=r).rev() {
            let left = rest - (a * a) as u64;
            let Some(s) = exact_sqrt(left) else { continue };
            let ga = gcd(g, a);
            if gcd(ga, s) != 1 {
                continue;
            }
            x[i] = a;
            x[i + 1] = s;
            f(x);
            if s != 0 {
                x[i + 1] = -s;
                f(x);
            }
        }
        return;
    }
    for a in (-r..=r).rev() {
        x[i] = a;
        sphere_rec(x, i + 1, rest - (a * a) as u64, gcd(g, a), f);
    }
}

/// Values the first coordinate can take on the sphere, in descending order.
pub fn first_coordinates(norm: u64) -> Vec<i64> {
    let r = norm.sqrt() as i64;
    (-r..=r).rev().collect()
}

/// Visits, in lexicographically descending order, the primitive points of
/// the sphere whose first coordinate is `x0`.
pub fn for_each_with_first<F: FnMut(&[i64])>(d: usize, norm: u64, x0: i64, mut f: F) -> Result<()> {
    check_dim(d)?;
    let sq = (x0 as i128 * x0 as i128) as u64;
    if sq > norm {
        return Ok(());
    }
    let mut x = [0i64; MAX_DIM];
    x[0] = x0;
    sphere_rec(&mut x[..d], 1, norm - sq, x0, &mut f);
    Ok(())
}

/// Visits every primitive `v ∈ ℤ^d` with `‖v‖² = D` once, in
/// lexicographically descending order.
pub fn for_each_in_sphere<F: FnMut(&[i64])>(
    d: usize,
    norm: u64,
    budget: &Budget,
    mut f: F,
) -> Result<()> {
    check_dim(d)?;
    budget.check(d, norm)?;
    if norm == 0 {
        return Ok(());
    }
    let mut x = [0i64; MAX_DIM];
    sphere_rec(&mut x[..d], 0, norm, 0, &mut f);
    Ok(())
}

pub fn count_sphere(d: usize, norm: u64, budget: &Budget) -> Result<u64> {
    let mut n = 0u64;
    for_each_in_sphere(d, norm, budget, |_| n += 1)?;
    Ok(n)
}

/// All primitive points of `𝕊^{d−1}(D)` in lexicographically descending
/// order, under the default [`Budget`].
pub fn enumerate_sphere(d: usize, norm: u64) -> Result<Vec<PrimitiveVector>> {
    enumerate_sphere_with(d, norm, &Budget::default())
}

/// As [`enumerate_sphere`], with an explicit budget. Work is split over the
/// first coordinate and the pieces are concatenated in order.
pub fn enumerate_sphere_with(d: usize, norm: u64, budget: &Budget) -> Result<Vec<PrimitiveVector>> {
    check_dim(d)?;
    budget.check(d, norm)?;
    if norm == 0 {
        return Ok(Vec::new());
    }
    let chunks: Vec<Vec<PrimitiveVector>> = first_coordinates(norm)
        .into_par_iter()
        .map(|x0| {
            let mut out = Vec::new();
            for_each_with_first(d, norm, x0, |v| {
                out.push(PrimitiveVector::from_parts_unchecked(v, norm))
            })
            .expect("dimension checked above");
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn ball_rec<F: FnMut(&[i64], u64)>(
    x: &mut [i64],
    i: usize,
    rest: u64,
    used: u64,
    g: i64,
    f: &mut F,
) {
    let d = x.len();
    let r = rest.sqrt() as i64;
    if i + 1 == d {
        for a in (-r..=r).rev() {
            if g == 1 || gcd(g, a) == 1 {
                x[i] = a;
                f(x, used + (a * a) as u64);
            }
        }
        return;
    }
    for a in (-r..=r).rev() {
        x[i] = a;
        let sq = (a * a) as u64;
        ball_rec(x, i + 1, rest - sq, used + sq, gcd(g, a), f);
    }
}

/// Visits every primitive `v ∈ ℤ^d` with `1 ≤ ‖v‖² ≤ max_norm`, passing
/// the squared norm along. Order is lexicographically descending.
pub fn for_each_in_ball<F: FnMut(&[i64], u64)>(d: usize, max_norm: u64, mut f: F) -> Result<()> {
    check_dim(d)?;
    let mut x = [0i64; MAX_DIM];
    ball_rec(&mut x[..d], 0, max_norm, 0, 0, &mut f);
    Ok(())
}
