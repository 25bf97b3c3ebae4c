use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{hilbert_symbol, hilbert_symbol_i128, square_class, Place};
use crate::exactla::{rat_int, IntMatrix, RatMatrix};
use crate::sphere::check_odd_prime;
use crate::{Error, Result};

/// A diagonal quadratic form `a₁x₁² + … + a_nx_n²` with nonzero `aᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    entries: Vec<BigRational>,
}

impl DiagonalForm {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        if entries.iter().any(|a| a.is_zero()) {
            return Err(Error::Singular);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn discriminant(&self) -> BigRational {
        self.entries
            .iter()
            .fold(BigRational::one(), |acc, a| acc * a)
    }
}

/// Symmetric Gaussian elimination: returns `(a, P)` with
/// `Pᵀ M P = diag(a)`.
pub fn diagonalize_with_transform(m: &RatMatrix) -> Result<(DiagonalForm, RatMatrix)> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension("diagonalize needs a square matrix".into()));
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut p = RatMatrix::identity(n);
    for k in 0..n {
        if a.get(k, k).is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                swap_basis(&mut a, &mut p, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a.get(k, j).is_zero()) {
                // e_k ← e_k + e_j gives a_kk = 2 a_kj ≠ 0
                add_basis(&mut a, &mut p, k, j, &BigRational::one());
            } else {
                return Err(Error::Singular);
            }
        }
        let pivot = a.get(k, k).clone();
        for j in k + 1..n {
            if a.get(k, j).is_zero() {
                continue;
            }
            let f = -(a.get(k, j) / &pivot);
            add_basis(&mut a, &mut p, j, k, &f);
        }
    }
    let entries = (0..n).map(|i| a.get(i, i).clone()).collect();
    Ok((DiagonalForm::new(entries)?, p))
}

/// `e_i ← e_i + f·e_j` on the form and on the transform.
fn add_basis(a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize, f: &BigRational) {
    let n = a.rows();
    for r in 0..n {
        let x = a.get(r, i) + f * a.get(r, j);
        a.set(r, i, x);
    }
    for c in 0..n {
        let x = a.get(i, c) + f * a.get(j, c);
        a.set(i, c, x);
    }
    for r in 0..n {
        let x = p.get(r, i) + f * p.get(r, j);
        p.set(r, i, x);
    }
}

fn swap_basis(a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize) {
    let n = a.rows();
    for r in 0..n {
        let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
        a.set(r, i, y);
        a.set(r, j, x);
    }
    for c in 0..n {
        let (x, y) = (a.get(i, c).clone(), a.get(j, c).clone());
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for r in 0..n {
        let (x, y) = (p.get(r, i).clone(), p.get(r, j).clone());
        p.set(r, i, y);
        p.set(r, j, x);
    }
}

pub fn diagonalize(m: &RatMatrix) -> Result<DiagonalForm> {
    Ok(diagonalize_with_transform(m)?.0)
}

/// `∏_{i<j} (aᵢ, aⱼ)_place`.
pub fn hasse_of_diagonal(form: &DiagonalForm, place: Place) -> Result<i8> {
    let a = form.entries();
    let mut s = 1;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            s *= hilbert_symbol(&a[i], &a[j], place)?;
        }
    }
    Ok(s)
}

/// Hasse invariant of a nonsingular symmetric rational matrix.
pub fn hasse_invariant(m: &RatMatrix, place: Place) -> Result<i8> {
    hasse_of_diagonal(&diagonalize(m)?, place)
}

/// Hasse invariant of a positive-definite integral Gram matrix.
///
/// With leading principal minors `d₀ = 1, d₁, …, d_n`, the form is
/// equivalent to `diag(d_k/d_{k−1})`, whose entries have the square class
/// of the integers `d_k·d_{k−1}`. Falls back to [`hasse_invariant`] if an
/// intermediate does not fit in `i128`.
pub fn hasse_invariant_gram(g: &IntMatrix, place: Place) -> Result<i8> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if let Some(a) = minor_products(g)? {
        let mut s = 1;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                s *= hilbert_symbol_i128(a[i], a[j], place)?;
            }
        }
        return Ok(s);
    }
    hasse_invariant(&RatMatrix::from_int(g), place)
}

fn minor_products(g: &IntMatrix) -> Result<Option<Vec<i128>>> {
    let Ok(Some(minors)) = g.leading_minors() else {
        return Ok(None);
    };
    let mut prev = 1i128;
    let mut out = Vec::with_capacity(minors.len());
    for &d in &minors {
        match d.checked_mul(prev) {
            Some(x) => out.push(x),
            None => return Ok(None),
        }
        prev = d;
    }
    Ok(Some(out))
}

fn is_square_at(t: &BigRational, p: u64) -> Result<bool> {
    Ok(square_class(t, Place::Prime(p))?.is_square())
}

fn isotropic_from_invariants(n: usize, disc: &BigRational, hasse: i8, p: u64) -> Result<bool> {
    let place = Place::Prime(p);
    let minus_one = rat_int(-1);
    Ok(match n {
        2 => is_square_at(&-disc.clone(), p)?,
        3 => hilbert_symbol(&minus_one, &-disc.clone(), place)? == hasse,
        4 => !is_square_at(disc, p)? || hasse == hilbert_symbol(&minus_one, &minus_one, place)?,
        _ => true,
    })
}

/// Whether the form represents zero nontrivially over `ℚ_p`, for an odd
/// prime `p`. Every form of dimension at least five is isotropic.
pub fn is_isotropic(m: &RatMatrix, p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    let n = m.rows();
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let form = diagonalize(m)?;
    if n >= 5 {
        return Ok(true);
    }
    let hasse = hasse_of_diagonal(&form, Place::Prime(p))?;
    isotropic_from_invariants(n, &form.discriminant(), hasse, p)
}

/// [`is_isotropic`] for a positive-definite integral Gram matrix, using the
/// leading-minor diagonalisation.
pub fn is_isotropic_gram(g: &IntMatrix, p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    let n = g.rows();
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if n >= 5 {
        return Ok(true);
    }
    let hasse = hasse_invariant_gram(g, Place::Prime(p))?;
    let disc = BigRational::from_integer(g.det());
    isotropic_from_invariants(n, &disc, hasse, p)
}
