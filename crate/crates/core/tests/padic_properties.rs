use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use spheregrid::exactla::{rat_int, RatMatrix};
use spheregrid::padic::{hilbert_symbol_i128, reflection, spinor_norm, spinor_norm_of_vectors};
use spheregrid::{Place, SquareClass};

fn primes_of(mut n: i128) -> Vec<u64> {
    n = n.abs();
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q as u64);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

/// Whether `a x² + b y² = z²` has a solution mod `p³` with `p ∤ gcd(x, y, z)`.
/// For `v_p(a), v_p(b) ≤ 1` this decides solvability over `ℚ_p`.
fn hilbert_brute(a: i128, b: i128, p: i128) -> i8 {
    let m = p * p * p;
    let a = a.rem_euclid(m);
    let b = b.rem_euclid(m);
    for x in 0..m {
        for y in 0..m {
            let lhs = (a * x * x + b * y * y) % m;
            for z in 0..m {
                if (x % p != 0 || y % p != 0 || z % p != 0) && (z * z) % m == lhs {
                    return 1;
                }
            }
        }
    }
    -1
}

fn nonzero() -> impl Strategy<Value = i128> {
    prop_oneof![-2000i128..-1, 1i128..2000]
}

#[test]
fn hilbert_matches_brute_force_at_three() {
    let vals: Vec<i128> = vec![1, -1, 2, -2, 3, -3, 5, 6, -6, 7, 12, -15, 21];
    for &a in &vals {
        for &b in &vals {
            assert_eq!(
                hilbert_symbol_i128(a, b, Place::Prime(3)).unwrap(),
                hilbert_brute(a, b, 3),
                "({a}, {b})_3"
            );
        }
    }
}

#[test]
fn hilbert_matches_brute_force_at_five() {
    let vals: Vec<i128> = vec![1, -1, 2, 3, 5, -5, 10, 15];
    for &a in &vals {
        for &b in &vals {
            assert_eq!(
                hilbert_symbol_i128(a, b, Place::Prime(5)).unwrap(),
                hilbert_brute(a, b, 5),
                "({a}, {b})_5"
            );
        }
    }
}

#[test]
fn real_place() {
    assert_eq!(hilbert_symbol_i128(-1, -1, Place::Infinity).unwrap(), -1);
    assert_eq!(hilbert_symbol_i128(-1, 3, Place::Infinity).unwrap(), 1);
}

proptest! {
    #[test]
    fn bimultiplicative(a in nonzero(), b in nonzero(), c in nonzero(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let place = Place::Prime(p);
        let h = |x, y| hilbert_symbol_i128(x, y, place).unwrap();
        prop_assert_eq!(h(a, b * c), h(a, b) * h(a, c));
        prop_assert_eq!(h(a, b), h(b, a));
    }

    #[test]
    fn a_minus_a(a in nonzero(), p in prop::sample::select(vec![2u64, 3, 5, 7, 13])) {
        prop_assert_eq!(hilbert_symbol_i128(a, -a, Place::Prime(p)).unwrap(), 1);
        prop_assert_eq!(hilbert_symbol_i128(a, -a, Place::Infinity).unwrap(), 1);
    }

    #[test]
    fn product_formula(a in nonzero(), b in nonzero()) {
        let mut places: Vec<u64> = primes_of(2 * a * b);
        places.sort_unstable();
        places.dedup();
        let mut prod = hilbert_symbol_i128(a, b, Place::Infinity).unwrap();
        for p in places {
            prod *= hilbert_symbol_i128(a, b, Place::Prime(p)).unwrap();
        }
        prop_assert_eq!(prod, 1);
    }
}

fn gram_4() -> RatMatrix {
    let rows = [[2, 1, 0, 0], [1, 3, 1, 0], [0, 1, 4, 1], [0, 0, 1, 5]];
    RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect(),
    )
    .unwrap()
}

fn vec_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 4).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn as_rat(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| rat_int(x)).collect()
}

fn rotation(us: &[Vec<BigRational>], m: &RatMatrix) -> RatMatrix {
    us.iter().fold(RatMatrix::identity(m.rows()), |acc, u| {
        acc.mul(&reflection(u, m).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spinor_norm_is_multiplicative(
        us in prop::collection::vec(vec_strategy(), 2),
        vs in prop::collection::vec(vec_strategy(), 2),
        p in prop::sample::select(vec![3u64, 5, 7]),
    ) {
        let m = gram_4();
        let us: Vec<_> = us.iter().map(|u| as_rat(u)).collect();
        let vs: Vec<_> = vs.iter().map(|u| as_rat(u)).collect();
        let g = rotation(&us, &m);
        let h = rotation(&vs, &m);
        let place = Place::Prime(p);
        let ng = spinor_norm(&g, &m, place).unwrap();
        let nh = spinor_norm(&h, &m, place).unwrap();
        prop_assert_eq!(spinor_norm(&g.mul(&h), &m, place).unwrap(), ng * nh);
        // the factorisation's norm agrees with the product of q(uᵢ) for the generating vectors
        prop_assert_eq!(ng, spinor_norm_of_vectors(&us, &m, place).unwrap());
    }
}

#[test]
fn spinor_norm_is_onto_for_an_isotropic_form() {
    // x² + y² + z² + 2w² is isotropic at every odd prime
    let m = RatMatrix::diagonal(&[rat_int(1), rat_int(1), rat_int(1), rat_int(2)]);
    for p in [3u64, 5, 7] {
        let place = Place::Prime(p);
        let mut seen: Vec<SquareClass> = Vec::new();
        'search: for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in 0i64..=3 {
                    let u = as_rat(&[a, b, c, 1]);
                    if m.bilinear(&u, &u).is_zero() {
                        continue;
                    }
                    let e = as_rat(&[1, 0, 0, 0]);
                    let g = rotation(&[u, e], &m);
                    let class = spinor_norm(&g, &m, place).unwrap();
                    if !seen.contains(&class) {
                        seen.push(class);
                    }
                    if seen.len() == 4 {
                        break 'search;
                    }
                }
            }
        }
        assert_eq!(seen.len(), 4, "p = {p}: {seen:?}");
    }
}
