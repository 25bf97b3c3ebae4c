//! Local invariants of rational quadratic forms: square classes, Hilbert
//! symbols, Hasse invariants, isotropy and spinor norms.

mod forms;
mod spinor;

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::sphere::check_odd_prime;
use crate::{Error, Result};

pub use forms::{
    diagonalize, diagonalize_with_transform, hasse_invariant, hasse_invariant_gram,
    hasse_of_diagonal, is_isotropic, is_isotropic_gram, DiagonalForm,
};
pub use spinor::{reflection, reflection_factorization, spinor_norm, spinor_norm_of_vectors};

/// A place of `ℚ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "∞"),
        }
    }
}

/// An element of `ℚ_p^×/(ℚ_p^×)²` for odd `p`, or of `ℝ^×/(ℝ^×)²`.
///
/// For odd `p` the four classes are written `1, r, p, rp`, where `r` is the
/// smallest positive quadratic non-residue mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SquareClass {
    Odd {
        p: u64,
        /// The unit part is a non-residue.
        r: bool,
        /// The valuation is odd.
        uniformizer: bool,
    },
    Real {
        negative: bool,
    },
}

impl SquareClass {
    pub fn one(place: Place) -> Result<Self> {
        match place {
            Place::Prime(p) => {
                check_odd_prime(p)?;
                Ok(Self::Odd {
                    p,
                    r: false,
                    uniformizer: false,
                })
            }
            Place::Infinity => Ok(Self::Real { negative: false }),
        }
    }

    pub fn place(&self) -> Place {
        match self {
            Self::Odd { p, .. } => Place::Prime(*p),
            Self::Real { .. } => Place::Infinity,
        }
    }

    pub fn is_square(&self) -> bool {
        match self {
            Self::Odd { r, uniformizer, .. } => !r && !uniformizer,
            Self::Real { negative } => !negative,
        }
    }

    /// One of `1, r, p, rp` or `+, −`.
    pub fn label(&self) -> &'static str {
        match self {
            Self::Odd {
                r: false,
                uniformizer: false,
                ..
            } => "1",
            Self::Odd {
                r: true,
                uniformizer: false,
                ..
            } => "r",
            Self::Odd {
                r: false,
                uniformizer: true,
                ..
            } => "p",
            Self::Odd {
                r: true,
                uniformizer: true,
                ..
            } => "rp",
            Self::Real { negative: false } => "+",
            Self::Real { negative: true } => "-",
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Mul for SquareClass {
    type Output = SquareClass;

    /// Panics if the two classes live at different places.
    fn mul(self, rhs: SquareClass) -> SquareClass {
        match (self, rhs) {
            (
                Self::Odd { p, r, uniformizer },
                Self::Odd {
                    p: q,
                    r: r2,
                    uniformizer: u2,
                },
            ) if p == q => Self::Odd {
                p,
                r: r ^ r2,
                uniformizer: uniformizer ^ u2,
            },
            (Self::Real { negative: a }, Self::Real { negative: b }) => {
                Self::Real { negative: a ^ b }
            }
            _ => panic!("square classes at different places"),
        }
    }
}

/// Smallest positive quadratic non-residue mod an odd prime `p`.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&a| legendre_u64(a, p) == -1)
        .expect("odd primes have non-residues")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
pub fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn legendre_big(a: &BigInt, p: u64) -> i8 {
    let r = a
        .mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits");
    legendre_u64(r, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

fn check_place(place: Place) -> Result<()> {
    match place {
        Place::Prime(p) if !is_prime(p) => Err(Error::InvalidArgument(format!("{p} is not prime"))),
        _ => Ok(()),
    }
}

/// Splits `a ≠ 0` as `p^k · u` with `p ∤ u`.
fn split_valuation(a: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut u = a.clone();
    let mut k = 0;
    loop {
        let (q, r) = u.div_rem(&p);
        if !r.is_zero() {
            return (k, u);
        }
        u = q;
        k += 1;
    }
}

/// `n·d` has the same square class as `n/d`.
fn integral_representative(t: &BigRational) -> BigInt {
    t.numer() * t.denom()
}

/// Square class of `t ≠ 0` at an odd prime or at infinity.
pub fn square_class(t: &BigRational, place: Place) -> Result<SquareClass> {
    if t.is_zero() {
        return Err(Error::InvalidArgument("square class of zero".into()));
    }
    match place {
        Place::Infinity => Ok(SquareClass::Real {
            negative: t.is_negative(),
        }),
        Place::Prime(p) => {
            check_odd_prime(p)?;
            let (k, u) = split_valuation(&integral_representative(t), p);
            Ok(SquareClass::Odd {
                p,
                r: legendre_big(&u, p) == -1,
                uniformizer: k % 2 == 1,
            })
        }
    }
}

pub fn square_class_int(t: i128, place: Place) -> Result<SquareClass> {
    square_class(&BigRational::from_integer(t.into()), place)
}

fn hilbert_integers(a: &BigInt, b: &BigInt, place: Place) -> i8 {
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, v) = split_valuation(b, 2);
            let u8_ = u.mod_floor(&BigInt::from(8)).to_u64().expect("residue");
            let v8 = v.mod_floor(&BigInt::from(8)).to_u64().expect("residue");
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u8_) * eps(v8) + alpha as u64 * omega(v8) + beta as u64 * omega(u8_);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let mut s: i8 = if (alpha as u64 * beta as u64 % 2 == 1) && ((p - 1) / 2) % 2 == 1 {
                -1
            } else {
                1
            };
            if beta % 2 == 1 {
                s *= legendre_big(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre_big(&v, p);
            }
            s
        }
    }
}

/// The Hilbert symbol `(a, b)_place`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument("Hilbert symbol of zero".into()));
    }
    check_place(place)?;
    Ok(hilbert_integers(
        &integral_representative(a),
        &integral_representative(b),
        place,
    ))
}

/// [`hilbert_symbol`] on machine integers, without allocation at odd primes.
pub fn hilbert_symbol_i128(a: i128, b: i128, place: Place) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("Hilbert symbol of zero".into()));
    }
    check_place(place)?;
    match place {
        Place::Prime(p) if p != 2 => {
            let split = |mut x: i128| {
                let mut k = 0u32;
                while x % p as i128 == 0 {
                    x /= p as i128;
                    k += 1;
                }
                (k, x.rem_euclid(p as i128) as u64)
            };
            let (alpha, u) = split(a);
            let (beta, v) = split(b);
            let mut s: i8 = if alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3 {
                -1
            } else {
                1
            };
            if beta % 2 == 1 {
                s *= legendre_u64(u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre_u64(v, p);
            }
            Ok(s)
        }
        _ => Ok(hilbert_integers(&a.into(), &b.into(), place)),
    }
}

/// Primes dividing the numerator or denominator of `t`.
pub fn prime_divisors(t: &BigRational) -> Vec<u64> {
    let mut out = Vec::new();
    for n in [t.numer().abs(), t.denom().abs()] {
        let mut n = n;
        let mut k = 2u64;
        while BigInt::from(k) * BigInt::from(k) <= n {
            let kb = BigInt::from(k);
            if (&n % &kb).is_zero() {
                out.push(k);
                while (&n % &kb).is_zero() {
                    n /= &kb;
                }
            }
            k += 1;
        }
        if n > BigInt::one() {
            out.push(n.to_u64().expect("remaining factor fits in u64"));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
