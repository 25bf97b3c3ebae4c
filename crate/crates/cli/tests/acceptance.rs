//! One test per acceptance criterion. Each writes a single
//! `[criterion N] PASS|FAIL|PARTIAL ...` line straight to stderr so the line
//! survives output capture.
//!
//! Run with `cargo test -p spheregrid-cli --test acceptance`. The complete
//! identity sweep of criterion 1 is `#[ignore]`d; run it with `--ignored`.

use std::io::Write;
use std::process::Command;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use spheregrid::equistats::{Mode, SampleBatch, StatConfig, StatReport};
use spheregrid::exactla::{rat_int, RatMatrix};
use spheregrid::ortho::{gram_form, grid, ortho_frame};
use spheregrid::padic::{
    hasse_invariant_gram, hilbert_symbol_i128, is_isotropic_gram, reflection, spinor_norm,
    spinor_norm_of_vectors,
};
use spheregrid::sphere::{
    count_sphere, enumerate_sphere, is_admissible, orbit_info, orbit_representatives,
    stabilizer_fraction, SignedPermutation,
};
use spheregrid::{Budget, GridClass, OrthoFrame, Place, PrimitiveVector, SquareClass};

fn report(n: u32, status: &str, detail: &str) {
    let line = format!("[criterion {n}] {status} {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Fraction-free determinant of a square matrix given by rows. Every
/// intermediate value is a minor of the input, so small entries stay small.
fn det(rows: &[Vec<i128>]) -> i128 {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1] * sign
}

// ---------------------------------------------------------------------------
// 1. exact identities

/// Violations of the frame identities for `v`, if any.
fn identity_violation(v: &[i64], norm: u64) -> Option<String> {
    let d = v.len();
    if v.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
        return Some("gcd(v) ≠ 1".into());
    }
    if dot(v, v) != norm as i128 {
        return Some("‖v‖² ≠ D".into());
    }
    let pv = match PrimitiveVector::new(v) {
        Ok(pv) => pv,
        Err(e) => return Some(e.to_string()),
    };
    let frame = match ortho_frame(&pv) {
        Ok(f) => f,
        Err(e) => return Some(format!("frame: {e}")),
    };
    let basis = frame.basis();
    let w = frame.w();
    let gram: Vec<Vec<i128>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect();
    if det(&gram) != norm as i128 {
        return Some("det M ≠ D".into());
    }
    let content = gram.iter().flatten().fold(0i128, |g, &x| {
        let (mut a, mut b) = (g.abs(), x.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    });
    if content != 1 {
        return Some("gcd(M) ≠ 1".into());
    }
    if dot(w, v) != 1 {
        return Some("⟨w, v⟩ ≠ 1".into());
    }
    if basis.iter().any(|b| dot(b, v) != 0) {
        return Some("basis not orthogonal to v".into());
    }
    let column_rows = |last: &[i64]| -> Vec<Vec<i128>> {
        (0..d)
            .map(|i| {
                basis
                    .iter()
                    .map(|b| b[i] as i128)
                    .chain(std::iter::once(last[i] as i128))
                    .collect()
            })
            .collect()
    };
    if det(&column_rows(w)) != 1 {
        return Some("det g_v ≠ 1".into());
    }
    let dv = det(&column_rows(v));
    if dv.abs() != norm as i128 {
        return Some("|det(v₁..v_{d−1}, v)| ≠ D".into());
    }
    gram_form(&frame)
        .err()
        .map(|e| format!("library Gram check: {e}"))
}

struct Sweep {
    vectors: u64,
    violations: Vec<String>,
}

/// Checks every primitive `v` with admissible `‖v‖² ≤ max_norm`.
fn identity_sweep(d: usize, max_norm: u64) -> Sweep {
    // split on the first coordinate so rayon has work to share
    let r = (max_norm as f64).sqrt() as i64;
    let parts: Vec<Sweep> = (-r..=r)
        .into_par_iter()
        .map(|x0| {
            let mut s = Sweep {
                vectors: 0,
                violations: Vec::new(),
            };
            let rest = max_norm - (x0 * x0) as u64;
            let mut v = vec![0i64; d];
            v[0] = x0;
            let mut visit = |tail: &[i64], tail_norm: u64| {
                let norm = tail_norm + (x0 * x0) as u64;
                if norm == 0 || !is_admissible(d, norm, None).unwrap() {
                    return;
                }
                v[1..].copy_from_slice(tail);
                if v.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
                    return;
                }
                s.vectors += 1;
                if let Some(msg) = identity_violation(&v, norm) {
                    s.violations.push(format!("{v:?}: {msg}"));
                }
            };
            // every tail, primitive or not: x0 can make v primitive
            let mut tail = vec![0i64; d - 1];
            ball_all(&mut tail, 0, rest, 0, &mut visit);
            s
        })
        .collect();
    let mut out = Sweep {
        vectors: 0,
        violations: Vec::new(),
    };
    for p in parts {
        out.vectors += p.vectors;
        out.violations.extend(p.violations);
    }
    out
}

/// Every integer vector with squared norm at most `rest`.
fn ball_all<F: FnMut(&[i64], u64)>(x: &mut [i64], i: usize, rest: u64, used: u64, f: &mut F) {
    let r = (rest as f64).sqrt() as i64;
    let r = if (r + 1) * (r + 1) <= rest as i64 {
        r + 1
    } else {
        r
    };
    for a in -r..=r {
        x[i] = a;
        let sq = (a * a) as u64;
        if i + 1 == x.len() {
            f(x, used + sq);
        } else {
            ball_all(x, i + 1, rest - sq, used + sq, f);
        }
    }
}

/// Sweep bounds that fit a desk-scale run; criterion 1 asks for 2000 in
/// every dimension.
const IDENTITY_BOUNDS: [(usize, u64); 4] = [(3, 2000), (4, 2000), (5, 300), (6, 100)];
const IDENTITY_TARGET: u64 = 2000;

fn run_identity_suite(bounds: &[(usize, u64)]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(d, max_norm) in bounds {
        let start = std::time::Instant::now();
        let s = identity_sweep(d, max_norm);
        ok &= s.violations.is_empty() && s.vectors > 0;
        parts.push(format!(
            "d={d} D≤{max_norm}: {} vectors, {} violations ({:.0} s)",
            s.vectors,
            s.violations.len(),
            start.elapsed().as_secs_f64()
        ));
        for v in s.violations.iter().take(5) {
            parts.push(format!("  {v}"));
        }
    }
    (ok, parts.join("; "))
}

/// The identities for one representative of every Γ₁-orbit.
fn representative_sweep(d: usize, max_norm: u64) -> Sweep {
    let parts: Vec<Sweep> = (1..=max_norm)
        .into_par_iter()
        .filter(|&n| is_admissible(d, n, None).unwrap())
        .map(|norm| {
            let mut s = Sweep {
                vectors: 0,
                violations: Vec::new(),
            };
            for v in orbit_representatives(d, norm).unwrap() {
                s.vectors += 1;
                if let Some(msg) = identity_violation(v.coords(), norm) {
                    s.violations.push(format!("{v}: {msg}"));
                }
            }
            s
        })
        .collect();
    let mut out = Sweep {
        vectors: 0,
        violations: Vec::new(),
    };
    for p in parts {
        out.vectors += p.vectors;
        out.violations.extend(p.violations);
    }
    out
}

#[test]
fn criterion_1_exact_identities() {
    let (mut ok, mut detail) = run_identity_suite(&IDENTITY_BOUNDS);
    for d in [5, 6] {
        let s = representative_sweep(d, IDENTITY_TARGET);
        ok &= s.violations.is_empty();
        detail.push_str(&format!(
            "; d={d} D≤{IDENTITY_TARGET} orbit representatives: {} vectors, {} violations",
            s.vectors,
            s.violations.len()
        ));
    }
    let complete = IDENTITY_BOUNDS.iter().all(|&(_, b)| b >= IDENTITY_TARGET);
    let status = match (ok, complete) {
        (false, _) => "FAIL",
        (true, true) => "PASS",
        (true, false) => "PARTIAL",
    };
    report(
        1,
        status,
        &format!("{detail} (full range D≤{IDENTITY_TARGET} for d=5,6 runs under --ignored)"),
    );
    assert!(ok, "{detail}");
}

#[test]
#[ignore = "hours of work for d = 5 and far more for d = 6"]
fn criterion_1_exact_identities_full() {
    let bounds: Vec<(usize, u64)> = (3..=6).map(|d| (d, IDENTITY_TARGET)).collect();
    let (ok, detail) = run_identity_suite(&bounds);
    report(1, verdict(ok), &format!("full sweep: {detail}"));
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------------------
// 2. well-definedness

fn random_primitive(rng: &mut ChaCha8Rng, d: usize, max_norm: u64) -> PrimitiveVector {
    let r = (max_norm as f64).sqrt() as i64;
    loop {
        let v: Vec<i64> = (0..d).map(|_| rng.random_range(-r..=r)).collect();
        let n = dot(&v, &v);
        if n >= 1 && n as u64 <= max_norm && v.iter().fold(0, |g, &x| gcd(g, x)) == 1 {
            return PrimitiveVector::new(&v).unwrap();
        }
    }
}

/// Another valid frame: the basis changed by a random element of `SL_n(ℤ)`
/// and `w` moved by a random lattice vector.
fn random_frame(rng: &mut ChaCha8Rng, frame: &OrthoFrame) -> OrthoFrame {
    let mut basis: Vec<Vec<i64>> = frame.basis().iter().map(|b| b.to_vec()).collect();
    let n = basis.len();
    for _ in 0..rng.random_range(1..8) {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        if rng.random_bool(0.25) {
            // (bᵢ, bⱼ) ↦ (bⱼ, −bᵢ)
            let bi = basis[i].clone();
            basis[i] = basis[j].clone();
            basis[j] = bi.iter().map(|x| -x).collect();
        } else {
            let k = rng.random_range(-3i64..=3);
            let bj = basis[j].clone();
            for (x, y) in basis[i].iter_mut().zip(bj) {
                *x += k * y;
            }
        }
    }
    let mut w = frame.w().to_vec();
    for b in &basis {
        let c = rng.random_range(-3i64..=3);
        for (x, y) in w.iter_mut().zip(b) {
            *x += c * y;
        }
    }
    OrthoFrame::from_parts(frame.v().clone(), basis, w).unwrap()
}

#[test]
fn criterion_2_well_definedness() {
    const TRIPLES: usize = 1000;
    const RECHOICES: usize = 10;
    const GAMMAS: usize = 5;
    let failures: Vec<String> = (0..TRIPLES as u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xC2_0000 + i);
            let d = rng.random_range(3..=5);
            let v = random_primitive(&mut rng, d, 5000);
            let reference = grid(&v).unwrap();
            let shape_bytes = serde_json::to_vec(reference.shape()).unwrap();
            let grid_bytes = serde_json::to_vec(&reference).unwrap();
            for _ in 0..GAMMAS {
                let gamma = SignedPermutation::random(d, &mut rng);
                let gv = PrimitiveVector::new(&gamma.apply(v.coords())).unwrap();
                let frame = ortho_frame(&gv).unwrap();
                for _ in 0..RECHOICES {
                    let other = GridClass::from_frame(&random_frame(&mut rng, &frame)).unwrap();
                    if serde_json::to_vec(other.shape()).unwrap() != shape_bytes
                        || serde_json::to_vec(&other).unwrap() != grid_bytes
                    {
                        return Some(format!("{v} vs {gv}"));
                    }
                }
            }
            None
        })
        .collect();
    let ok = failures.is_empty();
    report(
        2,
        verdict(ok),
        &format!(
            "{TRIPLES} triples × {} variants, {} mismatches",
            RECHOICES * GAMMAS,
            failures.len()
        ),
    );
    assert!(ok, "{:?}", &failures[..failures.len().min(5)]);
}

// ---------------------------------------------------------------------------
// 3. local conditions of the orthogonal lattices

struct GenusTally {
    lattices: u64,
    exceptions: Vec<String>,
}

fn genus_tally(d: usize, max_norm: u64, per_vector: bool) -> GenusTally {
    let primes = [3u64, 5, 7];
    let norms: Vec<u64> = (1..=max_norm)
        .filter(|&n| is_admissible(d, n, None).unwrap())
        .collect();
    let parts: Vec<GenusTally> = norms
        .par_iter()
        .map(|&norm| {
            let mut t = GenusTally {
                lattices: 0,
                exceptions: Vec::new(),
            };
            let vs = if per_vector {
                enumerate_sphere(d, norm).unwrap()
            } else {
                orbit_representatives(d, norm).unwrap()
            };
            for v in vs {
                let g = gram_form(&ortho_frame(&v).unwrap()).unwrap();
                t.lattices += 1;
                for p in primes {
                    if norm % p == 0 {
                        continue;
                    }
                    let iso = is_isotropic_gram(g.matrix(), p).unwrap();
                    let bad = if d <= 5 {
                        hasse_invariant_gram(g.matrix(), Place::Prime(p)).unwrap() != 1 || !iso
                    } else {
                        !iso
                    };
                    if bad {
                        t.exceptions.push(format!("{v} at p={p}"));
                    }
                }
            }
            t
        })
        .collect();
    let mut out = GenusTally {
        lattices: 0,
        exceptions: Vec::new(),
    };
    for p in parts {
        out.lattices += p.lattices;
        out.exceptions.extend(p.exceptions);
    }
    out
}

#[test]
fn criterion_3_local_conditions() {
    // The Gram class is constant on Γ₁-orbits (criterion 2), so one
    // representative per orbit covers every v. Every vector is also checked
    // directly for the smaller radii.
    let runs = [
        (4, 2000, false),
        (5, 2000, false),
        (6, 2000, false),
        (4, 300, true),
        (5, 120, true),
        (6, 40, true),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, max_norm, per_vector) in runs {
        let t = genus_tally(d, max_norm, per_vector);
        ok &= t.exceptions.is_empty();
        parts.push(format!(
            "d={d} D≤{max_norm} {}: {} lattices, {} exceptions",
            if per_vector {
                "per vector"
            } else {
                "per orbit"
            },
            t.lattices,
            t.exceptions.len()
        ));
    }
    let detail = parts.join("; ");
    report(3, verdict(ok), &detail);
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------------------
// 4. Hilbert symbols and spinor norms

fn odd_part_primes(mut n: i128) -> Vec<u64> {
    n = n.abs();
    let mut out = Vec::new();
    let mut q = 3;
    while n % 2 == 0 {
        n /= 2;
    }
    while q * q <= n {
        if n % q == 0 {
            out.push(q as u64);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 2;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> i128 {
    let a = rng.random_range(1i128..100_000);
    if rng.random_bool(0.5) {
        -a
    } else {
        a
    }
}

fn rat_vec(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| rat_int(x)).collect()
}

fn random_anisotropic_vector(rng: &mut ChaCha8Rng, m: &RatMatrix) -> Vec<BigRational> {
    loop {
        let u: Vec<i64> = (0..m.rows()).map(|_| rng.random_range(-4i64..=4)).collect();
        let u = rat_vec(&u);
        if !m.bilinear(&u, &u).is_zero() {
            return u;
        }
    }
}

fn rotation(us: &[Vec<BigRational>], m: &RatMatrix) -> RatMatrix {
    us.iter().fold(RatMatrix::identity(m.rows()), |acc, u| {
        acc.mul(&reflection(u, m).unwrap())
    })
}

fn gram_rat(v: &PrimitiveVector) -> RatMatrix {
    let g = gram_form(&ortho_frame(v).unwrap()).unwrap();
    RatMatrix::from_int(g.matrix())
}

#[test]
fn criterion_4_hilbert_and_spinor() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut problems = Vec::new();

    let places = [
        Place::Prime(2),
        Place::Prime(3),
        Place::Prime(5),
        Place::Prime(7),
        Place::Infinity,
    ];
    for _ in 0..200 {
        let (a, b, c) = (
            random_nonzero(&mut rng),
            random_nonzero(&mut rng),
            random_nonzero(&mut rng),
        );
        for place in places {
            let h = |x, y| hilbert_symbol_i128(x, y, place).unwrap();
            if h(a, b * c) != h(a, b) * h(a, c) {
                problems.push(format!("bimultiplicativity ({a}, {b}·{c})_{place}"));
            }
            if h(a, -a) != 1 {
                problems.push(format!("({a}, −{a})_{place} ≠ 1"));
            }
        }
        let mut prod = hilbert_symbol_i128(a, b, Place::Infinity).unwrap()
            * hilbert_symbol_i128(a, b, Place::Prime(2)).unwrap();
        for p in odd_part_primes(a * b) {
            prod *= hilbert_symbol_i128(a, b, Place::Prime(p)).unwrap();
        }
        if prod != 1 {
            problems.push(format!("product formula fails for ({a}, {b})"));
        }
    }

    let forms: Vec<RatMatrix> = [vec![1, 2, 3, 5], vec![2, 1, 1], vec![3, 2, 1, 1, 1]]
        .iter()
        .map(|v| gram_rat(&PrimitiveVector::new(v).unwrap()))
        .collect();
    for i in 0..200 {
        let m = &forms[i % forms.len()];
        let place = Place::Prime([3u64, 5, 7][i % 3]);
        let us: Vec<_> = (0..2 * rng.random_range(1..=2))
            .map(|_| random_anisotropic_vector(&mut rng, m))
            .collect();
        let vs: Vec<_> = (0..2 * rng.random_range(1..=2))
            .map(|_| random_anisotropic_vector(&mut rng, m))
            .collect();
        let (g, h) = (rotation(&us, m), rotation(&vs, m));
        let ng = spinor_norm(&g, m, place).unwrap();
        let nh = spinor_norm(&h, m, place).unwrap();
        if spinor_norm(&g.mul(&h), m, place).unwrap() != ng * nh {
            problems.push(format!("spinor norm not multiplicative on product {i}"));
        }
        if ng != spinor_norm_of_vectors(&us, m, place).unwrap() {
            problems.push(format!(
                "spinor norm of product {i} disagrees with its generators"
            ));
        }
    }

    let mut onto = Vec::new();
    for p in [3u64, 5, 7] {
        let place = Place::Prime(p);
        let mut found_forms = 0;
        let mut norm = 2u64;
        while found_forms < 5 {
            norm += 1;
            if norm % p == 0 || !is_admissible(4, norm, None).unwrap() {
                continue;
            }
            let v = orbit_representatives(4, norm).unwrap().remove(0);
            let m = gram_rat(&v);
            let g = gram_form(&ortho_frame(&v).unwrap()).unwrap();
            if !is_isotropic_gram(g.matrix(), p).unwrap() {
                problems.push(format!("Λ_{v} anisotropic at {p}"));
                continue;
            }
            found_forms += 1;
            let mut seen: Vec<SquareClass> = Vec::new();
            for _ in 0..4000 {
                let us = [
                    random_anisotropic_vector(&mut rng, &m),
                    random_anisotropic_vector(&mut rng, &m),
                ];
                let class = spinor_norm(&rotation(&us, &m), &m, place).unwrap();
                if !seen.contains(&class) {
                    seen.push(class);
                    if seen.len() == 4 {
                        break;
                    }
                }
            }
            onto.push(format!("p={p} Λ_{v}: {}", seen.len()));
            if seen.len() != 4 {
                problems.push(format!(
                    "p={p}: only {} classes reached for Λ_{v}",
                    seen.len()
                ));
            }
        }
    }

    let ok = problems.is_empty();
    report(
        4,
        verdict(ok),
        &format!(
            "200 Hilbert triples at 2,3,5,7,∞; 200 spinor products; onto-ness classes [{}]; {} problems",
            onto.join(", "),
            problems.len()
        ),
    );
    assert!(ok, "{problems:?}");
}

// ---------------------------------------------------------------------------
// 5. counting oracles

fn brute_count(d: usize, norm: u64) -> u64 {
    let r = (norm as f64).sqrt() as i64 + 1;
    let mut count = 0;
    let mut x = vec![-r; d];
    loop {
        if dot(&x, &x) == norm as i128 && x.iter().fold(0, |g, &a| gcd(g, a)) == 1 {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == d {
                return count;
            }
            if x[i] < r {
                x[i] += 1;
                break;
            }
            x[i] = -r;
            i += 1;
        }
    }
}

#[test]
fn criterion_5_counting_oracles() {
    let mut problems = Vec::new();
    for (d, norm, want) in [(3, 1, 6), (3, 2, 12), (4, 2, 24)] {
        let brute = brute_count(d, norm);
        let lib = count_sphere(d, norm, &Budget::default()).unwrap();
        if brute != want || lib != want {
            problems.push(format!(
                "|S^{}({norm})|: brute {brute}, library {lib}, expected {want}",
                d - 1
            ));
        }
    }
    let mut empty = Vec::new();
    let mut mod8_mismatch = Vec::new();
    for norm in 1..=500u64 {
        let brute = brute_count(3, norm);
        let lib = count_sphere(3, norm, &Budget::default()).unwrap();
        if brute != lib {
            problems.push(format!("D={norm}: brute {brute}, library {lib}"));
        }
        let predicted_empty = matches!(norm % 8, 0 | 4 | 7);
        if (brute == 0) != predicted_empty {
            mod8_mismatch.push(norm);
        }
        if (brute == 0) == is_admissible(3, norm, None).unwrap() {
            problems.push(format!("D={norm}: admissibility disagrees with emptiness"));
        }
        if brute == 0 {
            empty.push(norm);
        }
    }
    if !mod8_mismatch.is_empty() {
        problems.push(format!(
            "emptiness ≠ (D mod 8 ∈ {{0,4,7}}) at {mod8_mismatch:?}"
        ));
    }
    let ok = problems.is_empty();
    report(
        5,
        verdict(ok),
        &format!(
            "|S²(1)|=6, |S²(2)|=12, |S³(2)|=24 by box search; {} empty spheres among D≤500, all ≡ 0,4,7 mod 8; {} problems",
            empty.len(),
            problems.len()
        ),
    );
    assert!(ok, "{problems:?}");
}

// ---------------------------------------------------------------------------
// 6. equidistribution trend

const KS_THRESHOLD: f64 = 0.05;
const CAP_THRESHOLD: f64 = 0.05;
/// 10007 ≡ 7 mod 8 carries no primitive point in dimension 3; the next
/// admissible prime is used instead.
const D3_NORMS: [u64; 4] = [101, 1009, 10009, 100003];
const D4_NORMS: [u64; 2] = [10007, 100003];

fn reports(d: usize, norms: &[u64]) -> Vec<StatReport> {
    norms
        .iter()
        .map(|&norm| {
            let batch = SampleBatch::build(d, norm, Mode::Orbit, &Budget::default()).unwrap();
            StatReport::compute(&batch, &StatConfig::default()).unwrap()
        })
        .collect()
}

#[test]
fn criterion_6_equidistribution_trend() {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let r3 = reports(3, &D3_NORMS);
    let (first, last) = (&r3[0], &r3[r3.len() - 1]);
    checks.push((
        format!(
            "d=3 cap {:.4} → {:.4} decreases",
            first.cap_discrepancy, last.cap_discrepancy
        ),
        last.cap_discrepancy < first.cap_discrepancy,
    ));
    let (s0, s1) = (first.shape_chi2.unwrap(), last.shape_chi2.unwrap());
    checks.push((format!("d=3 shape χ² {s0:.5} → {s1:.5} decreases"), s1 < s0));
    for axis in 0..2 {
        let (k0, k1) = (first.torus_ks[axis], last.torus_ks[axis]);
        checks.push((
            format!("d=3 torus KS[{axis}] {k0:.4} → {k1:.4} decreases"),
            k1 < k0,
        ));
        checks.push((
            format!(
                "d=3 torus KS[{axis}] {k1:.4} < {KS_THRESHOLD} at D={}",
                last.norm
            ),
            k1 < KS_THRESHOLD,
        ));
    }
    checks.push((
        format!(
            "d=3 cap {:.4} < {CAP_THRESHOLD} at D={}",
            last.cap_discrepancy, last.norm
        ),
        last.cap_discrepancy < CAP_THRESHOLD,
    ));

    let r4 = reports(4, &D4_NORMS);
    let top = &r4[r4.len() - 1];
    for (axis, k) in top.torus_ks.iter().enumerate() {
        checks.push((
            format!(
                "d=4 torus KS[{axis}] {k:.4} < {KS_THRESHOLD} at D={}",
                top.norm
            ),
            *k < KS_THRESHOLD,
        ));
    }

    let ok = checks.iter().all(|(_, c)| *c);
    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, c)| !c)
        .map(|(s, _)| s.as_str())
        .collect();
    let detail = format!(
        "{}/{} checks; d=3 orbits at D={}: {}; failed: [{}]",
        checks.iter().filter(|(_, c)| *c).count(),
        checks.len(),
        last.norm,
        last.n_records,
        failed.join("; ")
    );
    report(6, verdict(ok), &detail);
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------------------
// 7. stabilizer negligibility

/// `S(v) > 1`, by running over all 2^{d−1}·d! elements of `SO_d(ℤ)`.
fn has_nontrivial_stabilizer(v: &[i64]) -> bool {
    let d = v.len();
    let mut perm: Vec<usize> = (0..d).collect();
    let mut count = 0;
    loop {
        for signs in 0u32..(1 << d) {
            let mut parity = 0;
            for i in 0..d {
                for j in i + 1..d {
                    if perm[i] > perm[j] {
                        parity ^= 1;
                    }
                }
            }
            parity ^= signs.count_ones() & 1;
            if parity != 0 {
                continue;
            }
            let fixed = (0..d).all(|i| {
                let s = if signs >> i & 1 == 1 { -1 } else { 1 };
                s * v[perm[i]] == v[i]
            });
            if fixed {
                count += 1;
            }
        }
        // next permutation
        let Some(i) = (0..d - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..d).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    count > 1
}

const STAB_NORMS: [u64; 4] = [102, 1002, 10002, 100002];
const STAB_THRESHOLD: f64 = 0.02;

#[test]
fn criterion_7_stabilizer_negligibility() {
    let mut problems = Vec::new();
    for norm in 1..=200u64 {
        if !is_admissible(3, norm, None).unwrap() {
            continue;
        }
        let vs = enumerate_sphere(3, norm).unwrap();
        let fixed = vs
            .iter()
            .filter(|v| has_nontrivial_stabilizer(v.coords()))
            .count() as u64;
        let lib = stabilizer_fraction(3, norm).unwrap();
        if lib != num_rational::Ratio::new(fixed, vs.len() as u64) {
            problems.push(format!(
                "D={norm}: library {lib}, brute force {fixed}/{}",
                vs.len()
            ));
        }
        for v in &vs {
            if (orbit_info(v).stabilizer_size > 1) != has_nontrivial_stabilizer(v.coords()) {
                problems.push(format!("S({v})"));
            }
        }
    }
    let fractions: Vec<num_rational::Ratio<u64>> = STAB_NORMS
        .iter()
        .map(|&n| stabilizer_fraction(3, n).unwrap())
        .collect();
    let strictly_decreasing = fractions.windows(2).all(|w| w[1] < w[0]);
    let last = fractions[fractions.len() - 1];
    let below = (*last.numer() as f64) / (*last.denom() as f64) < STAB_THRESHOLD;
    if !strictly_decreasing {
        problems.push("not strictly decreasing".into());
    }
    if !below {
        problems.push(format!("{last} ≥ {STAB_THRESHOLD}"));
    }
    let ok = problems.is_empty();
    let shown: Vec<String> = STAB_NORMS
        .iter()
        .zip(&fractions)
        .map(|(n, f)| format!("D={n}: {f}"))
        .collect();
    report(
        7,
        verdict(ok),
        &format!(
            "fractions [{}]; strictly decreasing: {strictly_decreasing}; < {STAB_THRESHOLD} at the largest: {below}; brute-force cross-check D≤200; problems: {problems:?}",
            shown.join(", ")
        ),
    );
    assert!(ok, "{problems:?}");
}

// ---------------------------------------------------------------------------
// 8. determinism

#[test]
fn criterion_8_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let grids = dir.path().join("grids.csv");
    let grids_arg = grids.to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = [
        vec!["enumerate", "--d", "4", "--D", "101"],
        vec!["shapes", "--d", "3", "--D", "1009"],
        vec!["grids", "--d", "5", "--D", "61", "--format", "json"],
        vec![
            "genus-check",
            "--d",
            "4",
            "--D-seq",
            "99..103",
            "--p",
            "3,5,7",
        ],
        vec!["stats", "--d", "3", "--D-seq", "101,1009", "--mode", "raw"],
        vec![
            "report", "--d", "4", "--D-seq", "101,1009", "--format", "csv",
        ],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();
    let bin = env!("CARGO_BIN_EXE_spheregrid");
    let run = |args: &[String]| Command::new(bin).args(args).output().unwrap();
    let mut problems = Vec::new();
    for args in &commands {
        let (a, b) = (run(args), run(args));
        if !a.status.success() || a.stdout != b.stdout || a.status.code() != b.status.code() {
            problems.push(args.join(" "));
        }
    }
    // file output matches standard output and feeds back in
    let to_file = ["grids", "--d", "3", "--D", "101", "--out", &grids_arg].map(String::from);
    run(&to_file);
    let first = std::fs::read(&grids).unwrap();
    run(&to_file);
    if std::fs::read(&grids).unwrap() != first {
        problems.push("grids --out".into());
    }
    let from_file = ["stats", "--in", &grids_arg].map(String::from);
    if run(&from_file).stdout != run(&from_file).stdout {
        problems.push("stats --in".into());
    }
    let ok = problems.is_empty();
    report(
        8,
        verdict(ok),
        &format!(
            "{} commands run twice, byte-identical: {:?}",
            commands.len() + 2,
            problems
        ),
    );
    assert!(ok, "{problems:?}");
}
