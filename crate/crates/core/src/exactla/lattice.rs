//! Unimodular completion and kernel bases for primitive integer vectors.

use smallvec::SmallVec;

use super::matrix::narrow;
use crate::{Error, Result};

pub type IntVec = SmallVec<[i64; 8]>;

/// Extended gcd: returns `(g, x, y)` with `g = gcd(a, b) ≥ 0` and
/// `a·x + b·y = g`. When `a ≠ 0` divides `b` the answer is `(|a|, ±1, 0)`,
/// so unit coordinates are preferred early.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if a == 0 {
        return (b.abs(), 0, b.signum());
    }
    if b % a == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
    }
    let y = (old_r - a as i128 * old_s) / b as i128;
    (old_r as i64, old_s as i64, y as i64)
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn check_primitive(v: &[i64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Dimension("empty vector".into()));
    }
    match gcd_slice(v) {
        0 => Err(Error::ZeroVector),
        1 => Ok(()),
        _ => Err(Error::NotPrimitive(v.to_vec())),
    }
}

/// Nearest integer to `num / den` for `den > 0`, halves rounded up.
fn round_div(num: i128, den: i128) -> i128 {
    (2 * num + den).div_euclid(2 * den)
}

/// Subtracts `q·b` from `a`; `false` if nothing changed.
fn reduce_step(a: &mut [i64], b: &[i64]) -> Result<bool> {
    let bb = dot(b, b);
    if bb == 0 {
        return Ok(false);
    }
    let ab = dot(a, b);
    if 2 * ab.abs() <= bb {
        return Ok(false);
    }
    let q = round_div(ab, bb);
    for (x, &y) in a.iter_mut().zip(b) {
        *x = narrow(*x as i128 - q * y as i128, "size reduction")?;
    }
    Ok(true)
}

/// Pairwise size reduction: repeatedly replaces `bᵢ` by `bᵢ − q·bⱼ` while
/// that shortens it. Norms strictly decrease, so this terminates.
pub fn pair_reduce(basis: &mut [IntVec]) -> Result<()> {
    let n = basis.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (bi, bj) = if i < j {
                    let (lo, hi) = basis.split_at_mut(j);
                    (&mut lo[i], &hi[0])
                } else {
                    let (lo, hi) = basis.split_at_mut(i);
                    (&mut hi[0], &lo[j])
                };
                changed |= reduce_step(bi, bj)?;
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

/// Shortens `w` modulo the lattice spanned by `basis`.
pub fn reduce_against(w: &mut [i64], basis: &[IntVec]) -> Result<()> {
    loop {
        let mut changed = false;
        for b in basis {
            changed |= reduce_step(w, b)?;
        }
        if !changed {
            return Ok(());
        }
    }
}

/// Kernel basis and completion vector for a primitive `v`, both reduced.
///
/// With `gᵢ = gcd(v₀, …, vᵢ)` and prefix Bézout vectors `s⁽ⁱ⁾`
/// (`Σ_{j≤i} s⁽ⁱ⁾ⱼ vⱼ = gᵢ`), the vectors
/// `(v_{i+1}/g_{i+1})·s⁽ⁱ⁾ − (gᵢ/g_{i+1})·e_{i+1}` span `ℤ^d ∩ v^⊥`,
/// and the last Bézout vector pairs with `v` to 1.
pub(crate) fn frame_parts(v: &[i64]) -> Result<(SmallVec<[IntVec; 8]>, IntVec)> {
    check_primitive(v)?;
    let d = v.len();
    let mut basis: SmallVec<[IntVec; 8]> = SmallVec::new();
    let mut s: SmallVec<[i128; 8]> = SmallVec::from_elem(0, d);
    let mut g: i64 = 0;
    for i in 0..d {
        let (g_next, x, y) = egcd(g, v[i]);
        if i > 0 {
            if g_next == 0 {
                // v₀..vᵢ all vanish so far
                let mut e = IntVec::from_elem(0, d);
                e[i - 1] = 1;
                basis.push(e);
            } else if g == 0 {
                // first nonzero coordinate: earlier unit vectors already cover the prefix
                let mut e = IntVec::from_elem(0, d);
                e[i - 1] = 1;
                basis.push(e);
            } else {
                let scale = (v[i] / g_next) as i128;
                let mut b = IntVec::with_capacity(d);
                for j in 0..d {
                    let mut x = scale * s[j];
                    if j == i {
                        x -= (g / g_next) as i128;
                    }
                    b.push(narrow(x, "kernel basis")?);
                }
                basis.push(b);
            }
        }
        for sj in s.iter_mut().take(i) {
            *sj *= x as i128;
            if sj.abs() > i64::MAX as i128 {
                return Err(Error::Overflow("Bezout coefficients"));
            }
        }
        s[i] = y as i128;
        g = g_next;
    }
    debug_assert_eq!(g, 1);
    pair_reduce(&mut basis)?;
    let mut w: IntVec = s
        .iter()
        .map(|&x| narrow(x, "completion vector"))
        .collect::<Result<_>>()?;
    reduce_against(&mut w, &basis)?;
    Ok((basis, w))
}

/// A vector `w` with `⟨w, v⟩ = 1`, shortened modulo `v^⊥ ∩ ℤ^d`.
pub fn ext_complete(v: &[i64]) -> Result<Vec<i64>> {
    check_primitive(v)?;
    if let Some(i) = v.iter().position(|&x| x.abs() == 1) {
        let mut w = vec![0; v.len()];
        w[i] = v[i];
        return Ok(w);
    }
    let (_, w) = frame_parts(v)?;
    Ok(w.to_vec())
}

/// A basis of the `d − 1` dimensional lattice `ℤ^d ∩ v^⊥`.
pub fn kernel_basis(v: &[i64]) -> Result<Vec<Vec<i64>>> {
    if v.len() < 2 {
        return Err(Error::Dimension("kernel basis needs d ≥ 2".into()));
    }
    let (basis, _) = frame_parts(v)?;
    Ok(basis.into_iter().map(|b| b.to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::IntMatrix;

    #[test]
    fn egcd_prefers_unit_coefficients() {
        assert_eq!(egcd(2, 3), (1, -1, 1));
        assert_eq!(egcd(1, 1), (1, 1, 0));
        assert_eq!(egcd(0, -5), (5, 0, -1));
        assert_eq!(egcd(-4, 6), (2, 1, 1));
        let (g, x, y) = egcd(-4, 6);
        assert_eq!(-4 * x + 6 * y, g);
    }

    #[test]
    fn ext_complete_examples() {
        assert_eq!(ext_complete(&[1, 0, 0]).unwrap(), vec![1, 0, 0]);
        assert_eq!(ext_complete(&[2, 3]).unwrap(), vec![-1, 1]);
        assert_eq!(ext_complete(&[1, 1, 1]).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn ext_complete_rejects_non_primitive() {
        assert!(matches!(
            ext_complete(&[2, 4, 6]),
            Err(Error::NotPrimitive(_))
        ));
        assert_eq!(ext_complete(&[0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn ext_complete_is_short() {
        for v in [[3, 4, 12], [5, 7, 11], [6, 10, 15], [-8, 9, 0]] {
            let w = ext_complete(&v).unwrap();
            assert_eq!(dot(&w, &v), 1);
            let vmax = v.iter().map(|x| x.abs()).max().unwrap();
            assert!(w.iter().all(|x| x.abs() <= vmax), "{v:?} -> {w:?}");
        }
    }

    #[test]
    fn kernel_of_coordinate_hyperplane() {
        assert_eq!(
            kernel_basis(&[0, 0, 1]).unwrap(),
            vec![vec![1, 0, 0], vec![0, 1, 0]]
        );
    }

    fn spans_full_kernel(v: &[i64], basis: &[Vec<i64>]) -> bool {
        let d = v.len() as i64;
        let norm: i64 = v.iter().map(|x| x * x).sum();
        let mut cols: Vec<Vec<i64>> = basis.to_vec();
        cols.push(v.to_vec());
        basis.iter().all(|b| dot(b, v) == 0)
            && basis.len() as i64 == d - 1
            && IntMatrix::from_columns(&cols)
                .unwrap()
                .det_i128()
                .unwrap()
                .abs()
                == norm as i128
    }

    #[test]
    fn kernel_examples_up_to_basis_change() {
        let k = kernel_basis(&[1, 1, 1]).unwrap();
        assert!(spans_full_kernel(&[1, 1, 1], &k));
        // same lattice as {(1,−1,0), (0,1,−1)}: same Gram determinant and containment
        let reference =
            IntMatrix::from_columns(&[vec![1, -1, 0], vec![0, 1, -1], vec![1, 1, 1]]).unwrap();
        assert_eq!(reference.det_i128().unwrap().abs(), 3);

        let k = kernel_basis(&[1, 1, 0]).unwrap();
        assert!(spans_full_kernel(&[1, 1, 0], &k));
    }

    #[test]
    fn kernel_rejects_zero() {
        assert_eq!(kernel_basis(&[0, 0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn kernel_with_leading_zeros_and_signs() {
        for v in [
            vec![0, 3, 4],
            vec![0, 0, -2, 3],
            vec![-6, 10, 15],
            vec![7, 0, 0, 0, 1],
            vec![12, -15, 20, 0, 0, 7],
            vec![100, 101, 0, 0, 0, 0, 0, 1],
        ] {
            let k = kernel_basis(&v).unwrap();
            assert!(spans_full_kernel(&v, &k), "{v:?} -> {k:?}");
        }
    }
}
