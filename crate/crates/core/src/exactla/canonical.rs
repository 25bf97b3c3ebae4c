//! Canonical representatives of integral positive-definite forms in
//! dimension at most four, and their automorphism groups.
//!
//! In these dimensions some basis realises the successive minima, so the
//! lexicographically smallest diagonal of any basis is `(λ₁, …, λ_n)`. The
//! canonical Gram matrix is the one among such bases whose strict upper
//! triangle, read column by column (`g₀₁, g₀₂, g₁₂, g₀₃, …`), is largest.
//! Reading the entries in the order in which the search fixes them allows a
//! branch-and-bound over the short vectors. Maximising also makes the first
//! nonzero off-diagonal entry in row-major order positive when all sign
//! changes are allowed.

use num_traits::Signed;
use smallvec::SmallVec;

use super::lll::lll_reduce_gram;
use super::matrix::{narrow, IntMatrix};
use crate::{Error, Result};

/// Largest dimension handled by [`canonical_gram`].
pub const MAX_CANONICAL_DIM: usize = 4;

/// Which changes of basis count as equivalences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equivalence {
    /// `GL_n(ℤ)`.
    General,
    /// `SL_n(ℤ)`.
    Proper,
}

/// Canonical form of a Gram matrix together with the data needed to move
/// points into the canonical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub gram: IntMatrix,
    /// `Uᵀ G U = gram` for the input `G`.
    pub transform: IntMatrix,
    /// Every `A` (in the allowed group) with `Aᵀ·gram·A = gram`.
    pub automorphisms: Vec<IntMatrix>,
    /// `false` when the dimension exceeded [`MAX_CANONICAL_DIM`] and `gram`
    /// is merely LLL-reduced.
    pub exact: bool,
}

type Vector = SmallVec<[i64; 4]>;

/// All nonzero `x` with `xᵀ G x ≤ bound`, with their norms.
///
/// Fincke–Pohst enumeration: floating-point bounds padded by a safety margin
/// choose the candidates, and each candidate is accepted or rejected on its
/// exact integer norm.
pub fn short_vectors(g: &IntMatrix, bound: i128) -> Result<Vec<(Vec<i64>, i128)>> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let n = g.rows();
    let mut r = vec![0f64; n];
    let mut mu = vec![vec![0f64; n]; n];
    for i in 0..n {
        let mut s = g.get(i, i) as f64;
        for k in 0..i {
            s -= mu[k][i] * mu[k][i] * r[k];
        }
        r[i] = s;
        for j in i + 1..n {
            let mut s = g.get(i, j) as f64;
            for k in 0..i {
                s -= mu[k][i] * mu[k][j] * r[k];
            }
            mu[i][j] = s / r[i];
        }
    }
    let slack = 1e-7 * (bound as f64).abs() + 1e-7;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fincke_pohst(
        g,
        &r,
        &mu,
        bound,
        bound as f64 + slack,
        n,
        0.0,
        &mut x,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn fincke_pohst(
    g: &IntMatrix,
    r: &[f64],
    mu: &[Vec<f64>],
    bound: i128,
    fbound: f64,
    level: usize,
    partial: f64,
    x: &mut [i64],
    out: &mut Vec<(Vec<i64>, i128)>,
) {
    if level == 0 {
        if x.iter().any(|&c| c != 0) {
            let q = g.quadratic_form(x);
            if q <= bound {
                out.push((x.to_vec(), q));
            }
        }
        return;
    }
    let i = level - 1;
    let n = x.len();
    let center: f64 = -(i + 1..n).map(|j| mu[i][j] * x[j] as f64).sum::<f64>();
    let room = (fbound - partial).max(0.0);
    let radius = (room / r[i]).sqrt() + 1e-9;
    let lo = (center - radius).ceil() as i64;
    let hi = (center + radius).floor() as i64;
    for xi in lo..=hi {
        x[i] = xi;
        let t = xi as f64 - center;
        let next = partial + r[i] * t * t;
        if next <= fbound {
            fincke_pohst(g, r, mu, bound, fbound, i, next, x, out);
        }
    }
    x[i] = 0;
}

/// The unique representative of the `GL_n(ℤ)` class of `g`.
pub fn canonical_gram(g: &IntMatrix) -> Result<IntMatrix> {
    if g.rows() > MAX_CANONICAL_DIM {
        return Err(Error::UnsupportedDimension(g.rows()));
    }
    Ok(canonicalize(g, Equivalence::General)?.gram)
}

/// Canonical form, transform and automorphism group of `g`.
///
/// Above [`MAX_CANONICAL_DIM`] this falls back to LLL with `exact = false`
/// and reports only `±I` as automorphisms.
pub fn canonicalize(g: &IntMatrix, eq: Equivalence) -> Result<Canonical> {
    let n = g.rows();
    let (mut reduced, mut u_lll) = lll_reduce_gram(g)?;
    // LLL may reverse orientation; the search then compensates
    let lll_det = u_lll.det_i128()?;
    if n > MAX_CANONICAL_DIM {
        if eq == Equivalence::Proper && lll_det == -1 {
            for r in 0..n {
                u_lll.set(r, 0, -u_lll.get(r, 0));
            }
            reduced = g.congruence(&u_lll)?;
        }
        let mut automorphisms = vec![IntMatrix::identity(n)];
        if eq == Equivalence::General || n % 2 == 0 {
            let mut minus = IntMatrix::identity(n);
            for i in 0..n {
                minus.set(i, i, -1);
            }
            automorphisms.push(minus);
        }
        return Ok(Canonical {
            gram: reduced,
            transform: u_lll,
            automorphisms,
            exact: false,
        });
    }
    let bound = (0..n).map(|i| reduced.get(i, i) as i128).max().unwrap_or(0);
    let mut vectors = short_vectors(&reduced, bound)?;
    vectors.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)));

    // successive minima by greedy independent selection
    let mut minima: SmallVec<[i128; 4]> = SmallVec::new();
    let mut chosen: Vec<Vector> = Vec::new();
    for (v, q) in &vectors {
        let mut trial = chosen.clone();
        trial.push(v.iter().copied().collect());
        if gram_det(&reduced, &trial)? != 0 {
            chosen = trial;
            minima.push(*q);
            if chosen.len() == n {
                break;
            }
        }
    }
    if minima.len() != n {
        return Err(Error::Invariant(
            "short vectors do not span the lattice".into(),
        ));
    }

    let mut layers: SmallVec<[Vec<Vector>; 4]> = SmallVec::new();
    for &m in &minima {
        layers.push(
            vectors
                .iter()
                .filter(|(_, q)| *q == m)
                .map(|(v, _)| v.iter().copied().collect())
                .collect(),
        );
    }

    let mut search = Search {
        g: &reduced,
        layers: &layers,
        eq,
        target_det: lll_det,
        best_key: None,
        best: Vec::new(),
        current: Vec::new(),
        key: Vec::new(),
    };
    search.run(0)?;
    let best = search.best;
    let first = best
        .first()
        .ok_or_else(|| Error::Invariant("no basis of minimal vectors".into()))?;
    let b_best = IntMatrix::from_columns(first)?;
    let gram = reduced.congruence(&b_best)?;
    let b_inv = b_best.unimodular_inverse()?;
    let mut automorphisms: Vec<IntMatrix> = best
        .iter()
        .map(|cols| b_inv.checked_mul(&IntMatrix::from_columns(cols)?))
        .collect::<Result<_>>()?;
    automorphisms.sort_by(|a, b| a.entries().cmp(b.entries()));
    automorphisms.dedup();
    Ok(Canonical {
        gram,
        transform: u_lll.checked_mul(&b_best)?,
        automorphisms,
        exact: true,
    })
}

/// Determinant of the Gram matrix of `vs` under `g`.
fn gram_det(g: &IntMatrix, vs: &[Vector]) -> Result<i128> {
    let k = vs.len();
    let mut rows = Vec::with_capacity(k);
    for a in vs {
        let mut row = Vec::with_capacity(k);
        for b in vs {
            row.push(narrow(g.bilinear(a, b), "Gram of short vectors")?);
        }
        rows.push(row);
    }
    IntMatrix::from_rows(&rows)?.det_i128()
}

/// gcd of the maximal minors of the `n × k` matrix with columns `vs`; it is 1
/// exactly when `vs` extends to a basis of `ℤ^n`.
fn minors_gcd(vs: &[Vector], n: usize) -> Result<i128> {
    let k = vs.len();
    let mut g = 0i128;
    let mut rows: SmallVec<[usize; 4]> = (0..k).collect();
    loop {
        let sub: Vec<Vec<i64>> = rows
            .iter()
            .map(|&r| vs.iter().map(|v| v[r]).collect())
            .collect();
        let d = IntMatrix::from_rows(&sub)?.det_i128()?;
        g = num_integer::gcd(g, d);
        if g == 1 {
            return Ok(1);
        }
        // next k-subset of 0..n in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(g);
            }
            i -= 1;
            if rows[i] < n - k + i {
                rows[i] += 1;
                for j in i + 1..k {
                    rows[j] = rows[j - 1] + 1;
                }
                break;
            }
        }
    }
}

struct Search<'a> {
    g: &'a IntMatrix,
    layers: &'a [Vec<Vector>],
    eq: Equivalence,
    /// Required determinant of the basis in proper mode.
    target_det: i128,
    best_key: Option<Vec<i128>>,
    /// Every basis attaining `best_key`.
    best: Vec<Vec<Vec<i64>>>,
    current: Vec<Vector>,
    key: Vec<i128>,
}

impl Search<'_> {
    fn run(&mut self, level: usize) -> Result<()> {
        let n = self.layers.len();
        if level == n {
            let cols: Vec<Vec<i64>> = self.current.iter().map(|v| v.to_vec()).collect();
            let det = IntMatrix::from_columns(&cols)?.det_i128()?;
            let ok = match self.eq {
                Equivalence::General => det.abs() == 1,
                Equivalence::Proper => det == self.target_det,
            };
            if !ok {
                return Ok(());
            }
            match &self.best_key {
                Some(k) if *k > self.key => {}
                Some(k) if *k == self.key => self.best.push(cols),
                _ => {
                    self.best_key = Some(self.key.clone());
                    self.best = vec![cols];
                }
            }
            return Ok(());
        }
        for idx in 0..self.layers[level].len() {
            let v = &self.layers[level][idx];
            if self.current.iter().any(|c| c == v) {
                continue;
            }
            let key_len = self.key.len();
            for c in &self.current {
                self.key.push(self.g.bilinear(c, v));
            }
            let prune = match &self.best_key {
                Some(k) => k[..self.key.len()] > self.key[..],
                None => false,
            };
            if !prune {
                self.current.push(v.clone());
                if minors_gcd(&self.current, n)? == 1 {
                    self.run(level + 1)?;
                }
                self.current.pop();
            }
            self.key.truncate(key_len);
        }
        Ok(())
    }
}

/// `true` if `a` maps `g` to itself.
pub fn is_automorphism(g: &IntMatrix, a: &IntMatrix) -> bool {
    matches!(g.congruence(a), Ok(ref h) if h == g) && a.det().abs() == 1.into()
}
