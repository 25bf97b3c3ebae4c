use num_integer::Roots;
use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{Coords, PrimitiveVector, MAX_DIM, MIN_DIM};
use crate::exactla::{gcd_slice, IntMatrix};
use crate::{Error, Result};

/// A signed permutation matrix acting by `(σv)_i = signs[i]·v[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: SmallVec<[u8; 8]>,
    signs: SmallVec<[i8; 8]>,
}

fn permutation_sign(perm: &[u8]) -> i8 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

impl SignedPermutation {
    pub fn identity(d: usize) -> Self {
        Self {
            perm: (0..d as u8).collect(),
            signs: SmallVec::from_elem(1, d),
        }
    }

    pub fn new(perm: &[usize], signs: &[i8]) -> Result<Self> {
        let d = perm.len();
        let mut seen = [false; MAX_DIM];
        if d > MAX_DIM || signs.len() != d {
            return Err(Error::Dimension("signed permutation".into()));
        }
        for &p in perm {
            if p >= d || seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidArgument("signs must be ±1".into()));
        }
        Ok(Self {
            perm: perm.iter().map(|&p| p as u8).collect(),
            signs: signs.iter().copied().collect(),
        })
    }

    /// A uniformly random element of determinant +1.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let mut perm: SmallVec<[u8; 8]> = (0..d as u8).collect();
        for i in (1..d).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let mut signs: SmallVec<[i8; 8]> = (0..d)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        let mut s = Self {
            perm,
            signs: signs.clone(),
        };
        if s.det() < 0 {
            signs[d - 1] = -signs[d - 1];
            s.signs = signs;
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn det(&self) -> i8 {
        permutation_sign(&self.perm) * self.signs.iter().product::<i8>()
    }

    pub fn apply(&self, v: &[i64]) -> Coords {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| s as i64 * v[p as usize])
            .collect()
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let d = self.dim();
        let mut m = IntMatrix::zeros(d, d);
        for i in 0..d {
            m.set(i, self.perm[i] as usize, self.signs[i] as i64);
        }
        m
    }
}

/// `|SO_d(ℤ)| = 2^{d−1}·d!`.
pub fn gamma1_order(d: usize) -> u64 {
    (1..=d as u64).product::<u64>() << (d - 1)
}

/// All `2^{d−1}·d!` signed permutations of determinant +1.
pub fn gamma1_elements(d: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::with_capacity(gamma1_order(d) as usize);
    let mut perm: Vec<u8> = (0..d as u8).collect();
    loop {
        let psign = permutation_sign(&perm);
        for mask in 0u32..(1 << d) {
            let signs: SmallVec<[i8; 8]> = (0..d)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            if psign * signs.iter().product::<i8>() == 1 {
                out.push(SignedPermutation {
                    perm: perm.iter().copied().collect(),
                    signs,
                });
            }
        }
        if !next_permutation(&mut perm) {
            return out;
        }
    }
}

fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Γ₁-orbit data of a sphere point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitInfo {
    /// Lexicographically largest element of the orbit.
    pub canonical_rep: PrimitiveVector,
    /// `S(v)`, the number of determinant-one signed permutations fixing `v`.
    pub stabilizer_size: u64,
    pub orbit_size: u64,
}

/// `|values|` sorted descending.
fn sorted_abs(v: &[i64]) -> Coords {
    let mut a: Coords = v.iter().map(|x| x.abs()).collect();
    a.sort_unstable_by(|x, y| y.cmp(x));
    a
}

/// Stabilizer size in the full signed permutation group, and whether that
/// stabilizer contains an element of determinant −1.
fn full_stabilizer(sorted: &[i64]) -> (u64, bool) {
    let mut size = 1u64;
    let mut has_odd = false;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let m = (j - i) as u64;
        size *= (1..=m).product::<u64>();
        if sorted[i] == 0 {
            size <<= m;
            has_odd = true;
        } else if m >= 2 {
            has_odd = true;
        }
        i = j;
    }
    (size, has_odd)
}

/// For `v` with distinct nonzero `|vᵢ|`: determinant of the unique signed
/// permutation taking `v` to its sorted absolute values.
fn orientation(v: &[i64]) -> i8 {
    let mut idx: SmallVec<[u8; 8]> = (0..v.len() as u8).collect();
    idx.sort_unstable_by(|&a, &b| v[b as usize].abs().cmp(&v[a as usize].abs()));
    let signs: i8 = v.iter().map(|&x| if x < 0 { -1i8 } else { 1 }).product();
    permutation_sign(&idx) * signs
}

/// `true` if no signed permutation of determinant −1 fixes the point, so
/// its full signed-permutation orbit splits into two Γ₁-orbits.
fn is_chiral(sorted: &[i64]) -> bool {
    !full_stabilizer(sorted).1
}

fn stabilizer_from_sorted(sorted: &[i64]) -> u64 {
    let (full, has_odd) = full_stabilizer(sorted);
    if has_odd {
        full / 2
    } else {
        1
    }
}

/// Orbit data computed from the multiset of `|vᵢ|`.
pub fn orbit_info(v: &PrimitiveVector) -> OrbitInfo {
    let d = v.dim();
    let sorted = sorted_abs(v.coords());
    let stabilizer_size = stabilizer_from_sorted(&sorted);
    let mut rep = sorted;
    if is_chiral(&rep) && orientation(v.coords()) < 0 {
        rep[d - 1] = -rep[d - 1];
    }
    OrbitInfo {
        canonical_rep: PrimitiveVector::from_parts_unchecked(&rep, v.norm()),
        stabilizer_size,
        orbit_size: gamma1_order(d) / stabilizer_size,
    }
}

/// `S(v)` by running over all of `SO_d(ℤ)`.
pub fn stabilizer_size_brute_force(v: &[i64]) -> u64 {
    gamma1_elements(v.len())
        .iter()
        .filter(|g| g.apply(v).as_slice() == v)
        .count() as u64
}

/// All elements of the Γ₁-orbit of `v`, lexicographically descending.
pub fn orbit_elements(v: &PrimitiveVector) -> Vec<PrimitiveVector> {
    let d = v.dim();
    let mut base = sorted_abs(v.coords());
    let chiral = is_chiral(&base);
    let target = if chiral { orientation(v.coords()) } else { 1 };
    base.sort_unstable();
    let nonzero = base.iter().filter(|&&x| x != 0).count();
    let mut out = Vec::new();
    loop {
        let positions: SmallVec<[usize; 8]> = (0..d).filter(|&i| base[i] != 0).collect();
        for mask in 0u32..(1 << nonzero) {
            let mut x = base.clone();
            for (bit, &i) in positions.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    x[i] = -x[i];
                }
            }
            if !chiral || orientation(&x) == target {
                out.push(PrimitiveVector::from_parts_unchecked(&x, v.norm()));
            }
        }
        if !next_permutation(&mut base) {
            break;
        }
    }
    out.sort_unstable_by(|a, b| b.coords().cmp(a.coords()));
    out
}

fn reps_rec(d: usize, i: usize, rest: u64, cap: i64, x: &mut Coords, out: &mut Vec<Coords>) {
    if i == d {
        if rest == 0 && gcd_slice(x) == 1 {
            out.push(x.clone());
        }
        return;
    }
    let left = (d - i) as u64;
    let hi = cap.min(rest.sqrt() as i64);
    for a in (0..=hi).rev() {
        let sq = (a * a) as u64;
        // the remaining coordinates are at most a
        if sq * left < rest {
            break;
        }
        x[i] = a;
        reps_rec(d, i + 1, rest - sq, a, x, out);
    }
}

/// One representative per Γ₁-orbit on `𝕊^{d−1}(D)` (each the
/// lexicographically largest element of its orbit), in descending order.
pub fn orbit_representatives(d: usize, norm: u64) -> Result<Vec<PrimitiveVector>> {
    if !(MIN_DIM..=MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut sorted = Vec::new();
    let mut x: Coords = SmallVec::from_elem(0, d);
    reps_rec(d, 0, norm, i64::MAX, &mut x, &mut sorted);
    let mut out = Vec::with_capacity(sorted.len());
    for s in sorted {
        if is_chiral(&s) {
            let mut t = s.clone();
            t[d - 1] = -t[d - 1];
            out.push(PrimitiveVector::from_parts_unchecked(&t, norm));
        }
        out.push(PrimitiveVector::from_parts_unchecked(&s, norm));
    }
    out.sort_unstable_by(|a, b| b.coords().cmp(a.coords()));
    Ok(out)
}

/// Exact proportion of `v ∈ 𝕊^{d−1}(D)` with `S(v) > 1`.
pub fn stabilizer_fraction(d: usize, norm: u64) -> Result<Ratio<u64>> {
    let mut total = 0u64;
    let mut fixed = 0u64;
    for rep in orbit_representatives(d, norm)? {
        let info = orbit_info(&rep);
        total += info.orbit_size;
        if info.stabilizer_size > 1 {
            fixed += info.orbit_size;
        }
    }
    if total == 0 {
        return Err(Error::EmptySphere { dim: d, norm });
    }
    Ok(Ratio::new(fixed, total))
}
