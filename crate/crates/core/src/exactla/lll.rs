//! Integral LLL reduction driven only by a Gram matrix.
//!
//! The Gram–Schmidt data is kept as the integers `d_i` (Gram determinants of
//! the first `i` vectors) and `λ_ij = d_j μ_ij`, so no fractions appear.
//! Reduction parameter δ = 3/4.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{narrow, IntMatrix};
use crate::{Error, Result};

struct State {
    n: usize,
    /// Gram matrix of the current basis.
    gram: Vec<i128>,
    /// Columns are the current basis vectors in the input coordinates.
    h: Vec<i128>,
    /// `d[0] = 1`, `d[i+1]` is the Gram determinant of the first `i+1` vectors.
    d: Vec<BigInt>,
    lambda: Vec<BigInt>,
}

impl State {
    fn g(&self, i: usize, j: usize) -> i128 {
        self.gram[i * self.n + j]
    }

    fn lam(&self, i: usize, j: usize) -> &BigInt {
        &self.lambda[i * self.n + j]
    }

    fn set_lam(&mut self, i: usize, j: usize, x: BigInt) {
        self.lambda[i * self.n + j] = x;
    }

    /// `b_k ← b_k − q·b_l` on the Gram matrix and on `H`.
    fn sub_multiple(&mut self, k: usize, l: usize, q: i128) -> Result<()> {
        let n = self.n;
        let ov = || Error::Overflow("LLL");
        let gkl = self.g(k, l);
        let gll = self.g(l, l);
        // G_kk' = G_kk − 2q G_kl + q² G_ll
        let new_kk = self
            .g(k, k)
            .checked_sub(
                q.checked_mul(gkl)
                    .and_then(|x| x.checked_mul(2))
                    .ok_or_else(ov)?,
            )
            .and_then(|x| x.checked_add(q.checked_mul(q)?.checked_mul(gll)?))
            .ok_or_else(ov)?;
        for j in 0..n {
            if j == k {
                continue;
            }
            let x = self
                .g(k, j)
                .checked_sub(q.checked_mul(self.g(l, j)).ok_or_else(ov)?)
                .ok_or_else(ov)?;
            self.gram[k * n + j] = x;
            self.gram[j * n + k] = x;
        }
        self.gram[k * n + k] = new_kk;
        for r in 0..n {
            let x = self.h[r * n + k]
                .checked_sub(q.checked_mul(self.h[r * n + l]).ok_or_else(ov)?)
                .ok_or_else(ov)?;
            self.h[r * n + k] = x;
        }
        Ok(())
    }

    fn swap_vectors(&mut self, a: usize, b: usize) {
        let n = self.n;
        for j in 0..n {
            self.gram.swap(a * n + j, b * n + j);
        }
        for i in 0..n {
            self.gram.swap(i * n + a, i * n + b);
        }
        for r in 0..n {
            self.h.swap(r * n + a, r * n + b);
        }
    }

    fn redi(&mut self, k: usize, l: usize) -> Result<()> {
        let two_lam: BigInt = self.lam(k, l) * 2;
        let dl = &self.d[l + 1].clone();
        if two_lam.abs() <= *dl {
            return Ok(());
        }
        // nearest integer to λ/d_l
        let q = (two_lam + dl).div_floor(&(dl * 2));
        let qi: i128 = (&q).try_into().map_err(|_| Error::Overflow("LLL"))?;
        self.sub_multiple(k, l, qi)?;
        let new = self.lam(k, l) - &q * dl;
        self.set_lam(k, l, new);
        for i in 0..l {
            let new = self.lam(k, i) - &q * self.lam(l, i);
            self.set_lam(k, i, new);
        }
        Ok(())
    }

    fn swapi(&mut self, k: usize, kmax: usize) {
        self.swap_vectors(k, k - 1);
        for j in 0..k - 1 {
            let a = self.lam(k, j).clone();
            let b = self.lam(k - 1, j).clone();
            self.set_lam(k, j, b);
            self.set_lam(k - 1, j, a);
        }
        let lam = self.lam(k, k - 1).clone();
        let (dkm2, dkm1, dk) = (
            self.d[k - 1].clone(),
            self.d[k].clone(),
            self.d[k + 1].clone(),
        );
        let b = (&dkm2 * &dk + &lam * &lam) / &dkm1;
        for i in k + 1..=kmax {
            let t = self.lam(i, k).clone();
            let lik = (&dk * self.lam(i, k - 1) - &lam * &t) / &dkm1;
            let likm1 = (&b * &t + &lam * &lik) / &dk;
            self.set_lam(i, k, lik);
            self.set_lam(i, k - 1, likm1);
        }
        self.d[k] = b;
    }

    fn gram_schmidt_row(&mut self, k: usize) {
        for j in 0..=k {
            let mut u = BigInt::from(self.g(k, j));
            for i in 0..j {
                u = (&self.d[i + 1] * &u - self.lam(k, i) * self.lam(j, i)) / &self.d[i];
            }
            if j < k {
                self.set_lam(k, j, u);
            } else {
                self.d[k + 1] = u;
            }
        }
    }
}

/// LLL-reduces a positive-definite Gram matrix.
///
/// Returns `(G', U)` with `G' = Uᵀ G U` and `U` unimodular; the columns of
/// `U` are the reduced basis expressed in the original one.
pub fn lll_reduce_gram(g: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if !g.is_square() {
        return Err(Error::Dimension("Gram matrix must be square".into()));
    }
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let n = g.rows();
    let mut st = State {
        n,
        gram: g.entries().iter().map(|&x| x as i128).collect(),
        h: IntMatrix::identity(n)
            .entries()
            .iter()
            .map(|&x| x as i128)
            .collect(),
        d: vec![BigInt::zero(); n + 1],
        lambda: vec![BigInt::zero(); n * n],
    };
    st.d[0] = BigInt::from(1);
    st.d[1] = BigInt::from(st.g(0, 0));
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            st.gram_schmidt_row(k);
        }
        loop {
            st.redi(k, k - 1)?;
            let lam = st.lam(k, k - 1);
            let lhs = &st.d[k + 1] * &st.d[k - 1] * 4;
            let rhs = &st.d[k] * &st.d[k] * 3 - lam * lam * 4;
            if lhs < rhs {
                st.swapi(k, kmax);
                if k > 1 {
                    k -= 1;
                }
            } else {
                for l in (0..k - 1).rev() {
                    st.redi(k, l)?;
                }
                k += 1;
                break;
            }
        }
    }
    let to_matrix = |v: &[i128]| -> Result<IntMatrix> {
        let rows: Vec<Vec<i64>> = v
            .chunks(n)
            .map(|r| r.iter().map(|&x| narrow(x, "LLL")).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        IntMatrix::from_rows(&rows)
    };
    Ok((to_matrix(&st.gram)?, to_matrix(&st.h)?))
}
