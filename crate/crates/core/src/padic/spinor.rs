use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{diagonalize_with_transform, square_class, Place, SquareClass};
use crate::exactla::{rat_int, RatMatrix};
use crate::{Error, Result};

/// The reflection `τ_u(x) = x − 2B(x, u)/q(u)·u` for the form with Gram
/// matrix `m`.
pub fn reflection(u: &[BigRational], m: &RatMatrix) -> Result<RatMatrix> {
    let n = m.rows();
    if u.len() != n {
        return Err(Error::Dimension("reflection vector".into()));
    }
    let q = m.bilinear(u, u);
    if q.is_zero() {
        return Err(Error::InvalidArgument(
            "reflection in an isotropic vector".into(),
        ));
    }
    // row vector uᵀ M
    let mu: Vec<BigRational> = (0..n)
        .map(|j| (0..n).fold(BigRational::zero(), |acc, i| acc + &u[i] * m.get(i, j)))
        .collect();
    let scale = rat_int(2) / q;
    let mut r = RatMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let x = r.get(i, j) - &scale * &u[i] * &mu[j];
            r.set(i, j, x);
        }
    }
    Ok(r)
}

fn unit(n: usize, i: usize) -> Vec<BigRational> {
    (0..n)
        .map(|j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

fn check_special_orthogonal(g: &RatMatrix, m: &RatMatrix) -> Result<()> {
    if g.rows() != m.rows() || g.cols() != m.cols() || m.rows() != m.cols() {
        return Err(Error::Dimension(
            "g and the form must be square of equal size".into(),
        ));
    }
    if &m.congruence(g) != m || !g.det().is_one() {
        return Err(Error::NotSpecialOrthogonal);
    }
    Ok(())
}

/// Vectors `u₁, …, u_r` with `g = τ_{u₁}⋯τ_{u_r}`, `r` even and at most
/// `2n`.
///
/// Works in an orthogonal basis `e₁, …, e_n` of `m`. While `h = τ…τ·g`
/// moves `eᵢ`, it is composed with `τ_{h eᵢ − eᵢ}`, or, if that vector is
/// isotropic, with `τ_{eᵢ}τ_{h eᵢ + eᵢ}`; both fix the `e_j` already fixed.
pub fn reflection_factorization(g: &RatMatrix, m: &RatMatrix) -> Result<Vec<Vec<BigRational>>> {
    check_special_orthogonal(g, m)?;
    let n = m.rows();
    let (diag, p) = diagonalize_with_transform(m)?;
    let delta = RatMatrix::diagonal(diag.entries());
    let p_inv = p.inverse()?;
    let mut h = p_inv.mul(g).mul(&p);
    let mut us: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        let e = unit(n, i);
        let he = h.col(i);
        if he == e {
            continue;
        }
        let u: Vec<BigRational> = he.iter().zip(&e).map(|(a, b)| a - b).collect();
        if !delta.bilinear(&u, &u).is_zero() {
            h = reflection(&u, &delta)?.mul(&h);
            us.push(u);
        } else {
            let u1: Vec<BigRational> = he.iter().zip(&e).map(|(a, b)| a + b).collect();
            h = reflection(&e, &delta)?.mul(&reflection(&u1, &delta)?.mul(&h));
            us.push(u1);
            us.push(e);
        }
    }
    if h != RatMatrix::identity(n) {
        return Err(Error::Invariant(
            "reflection factorization did not terminate at the identity".into(),
        ));
    }
    if us.len() % 2 != 0 {
        return Err(Error::Invariant(
            "odd number of reflections for a rotation".into(),
        ));
    }
    Ok(us.iter().map(|u| p.mul_vec(u)).collect())
}

/// Square class of `∏ q(uᵢ)` for given reflection vectors.
pub fn spinor_norm_of_vectors(
    us: &[Vec<BigRational>],
    m: &RatMatrix,
    place: Place,
) -> Result<SquareClass> {
    let mut prod = BigRational::one();
    for u in us {
        prod *= m.bilinear(u, u);
    }
    square_class(&prod, place)
}

/// Spinor norm of `g ∈ SO(q)` at an odd prime or at infinity.
pub fn spinor_norm(g: &RatMatrix, m: &RatMatrix, place: Place) -> Result<SquareClass> {
    let us = reflection_factorization(g, m)?;
    spinor_norm_of_vectors(&us, m, place)
}
