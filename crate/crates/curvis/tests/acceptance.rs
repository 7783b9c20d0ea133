//! End-to-end acceptance checks for the whole pipeline.
//!
//! Every check prints exactly one `criterion N (...): PASS` / `FAIL` line
//! (use `cargo test --test acceptance -- --nocapture` to see the lines for
//! passing runs; cargo otherwise shows them only on failure).

use std::collections::HashSet;

use curvis::{
    count_brute, count_moebius_origin, count_sieve, gcd_k, interior_point_count, level1_density,
    level2_density, CurveExponent, LatticePoint, ValidatedBaseSet, VisibilityLevel,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn report(n: u32, what: &str, pass: bool) {
    println!(
        "criterion {n} ({what}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} ({what}) failed");
}

fn k(v: u32) -> CurveExponent {
    CurveExponent::new(v).unwrap()
}

fn set_of(coords: &[(i64, i64)], ke: CurveExponent) -> ValidatedBaseSet {
    let pts = coords
        .iter()
        .map(|&(u, v)| LatticePoint::new(u, v))
        .collect();
    ValidatedBaseSet::new(pts, ke).unwrap()
}

// Reference density tables for k = 2..=9: theoretical values of the limiting
// Euler products and the counts/x^2 observed at x = 10_000, for the standard
// two-point base set {(0,0),(1,1)} and three-point set {(0,0),(1,2),(2,1)}.
const THEORY_N2_L1: [f64; 8] = [
    0.67689274, 0.84973299, 0.92905919, 0.96595054, 0.98344709, 0.99187962, 0.99599147, 0.99801286,
];
const THEORY_N2_L2: [f64; 8] = [
    0.87431979, 0.96353652, 0.98906093, 0.99662336, 0.99893540, 0.99965918, 0.99988969, 0.99996401,
];
const THEORY_N3_L1: [f64; 8] = [
    0.53456687, 0.77737343, 0.89401525, 0.94899382, 0.97518170, 0.98782124, 0.99398750, 0.99701934,
];
const THEORY_N3_L2: [f64; 8] = [
    0.81521448, 0.94555518, 0.98360945, 0.99493640, 0.99840321, 0.99948878, 0.99983453, 0.99994602,
];
const OBSERVED_N2_L1: [f64; 8] = [
    0.67680152, 0.84972063, 0.92895008, 0.96584343, 0.98333499, 0.99173415, 0.99583374, 0.99790020,
];
const OBSERVED_N2_L2: [f64; 8] = [
    0.87422663, 0.96357826, 0.98893214, 0.99649707, 0.99888344, 0.99953337, 0.99973335, 0.99980001,
];
const OBSERVED_N3_L1: [f64; 8] = [
    0.53443474, 0.77729627, 0.89379137, 0.94873357, 0.97490498, 0.98750246, 0.99365123, 0.99675061,
];
const OBSERVED_N3_L2: [f64; 8] = [
    0.81503364, 0.94553393, 0.98333222, 0.99464610, 0.99822532, 0.99920012, 0.99950006, 0.99960004,
];

fn theoretical_columns_match(n: u64, l1: &[f64; 8], l2: &[f64; 8]) -> bool {
    (2..=9u32).all(|kk| {
        let d1 = level1_density(n, k(kk), 1e-8).unwrap();
        let d2 = level2_density(n, k(kk), 1e-8).unwrap();
        (d1.value - l1[(kk - 2) as usize]).abs() < 1e-6
            && (d2.value - l2[(kk - 2) as usize]).abs() < 1e-6
    })
}

#[test]
fn criterion_1_theoretical_densities_two_point_set() {
    report(
        1,
        "theoretical densities, two-point set, k = 2..9",
        theoretical_columns_match(2, &THEORY_N2_L1, &THEORY_N2_L2),
    );
}

#[test]
fn criterion_2_theoretical_densities_three_point_set() {
    report(
        2,
        "theoretical densities, three-point set, k = 2..9",
        theoretical_columns_match(3, &THEORY_N3_L1, &THEORY_N3_L2),
    );
}

fn observed_columns_match(coords: &[(i64, i64)], l1: &[f64; 8], l2: &[f64; 8]) -> bool {
    (2..=9u32).all(|kk| {
        let set = set_of(coords, k(kk));
        let e1 = count_sieve(&set, 10_000, VisibilityLevel::ONE)
            .unwrap()
            .empirical_density();
        let e2 = count_sieve(&set, 10_000, VisibilityLevel::TWO)
            .unwrap()
            .empirical_density();
        (e1 - l1[(kk - 2) as usize]).abs() < 5e-4 && (e2 - l2[(kk - 2) as usize]).abs() < 5e-4
    })
}

#[test]
fn criterion_3_sieve_counts_two_point_set() {
    report(
        3,
        "sieve counts at x = 10^4 vs reference, two-point set",
        observed_columns_match(&[(0, 0), (1, 1)], &OBSERVED_N2_L1, &OBSERVED_N2_L2),
    );
}

#[test]
fn criterion_4_sieve_counts_three_point_set() {
    report(
        4,
        "sieve counts at x = 10^4 vs reference, three-point set",
        observed_columns_match(&[(0, 0), (1, 2), (2, 1)], &OBSERVED_N3_L1, &OBSERVED_N3_L2),
    );
}

#[test]
fn criterion_5_engines_agree() {
    let mut rng = StdRng::seed_from_u64(0x5EED_CAFE);
    let mut pass = true;

    // Brute and sieve agree exactly on randomized configurations.
    let mut configs = 0;
    while configs < 50 {
        let ke = k(rng.random_range(1..=3));
        let size = rng.random_range(1..=3usize);
        let pts: Vec<LatticePoint> = (0..size)
            .map(|_| LatticePoint::new(rng.random_range(-8..=8), rng.random_range(-8..=8)))
            .collect();
        let Ok(set) = ValidatedBaseSet::new(pts, ke) else {
            continue;
        };
        let x = rng.random_range(50..=300u64);
        let level = if rng.random_range(0..2) == 0 {
            VisibilityLevel::ONE
        } else {
            VisibilityLevel::TWO
        };
        let a = count_brute(&set, x, level).unwrap();
        let b = count_sieve(&set, x, level).unwrap();
        pass &= a.count == b.count && a.excluded == b.excluded;
        configs += 1;
    }

    // The closed-form origin count agrees with brute force everywhere it is
    // defined, at every size up to 300.
    for kk in 1..=4u32 {
        let ke = k(kk);
        let origin = set_of(&[(0, 0)], ke);
        for x in 1..=300u64 {
            pass &= count_moebius_origin(ke, x).unwrap()
                == count_brute(&origin, x, VisibilityLevel::ONE).unwrap().count;
        }
    }

    report(
        5,
        "engine agreement: brute = sieve on 50 random configs; closed form = brute for x <= 300",
        pass,
    );
}

#[test]
fn criterion_6_interior_points_equal_weighted_gcd() {
    let mut pass = true;
    for kk in 1..=3u32 {
        let ke = k(kk);
        for au in 1..=30i64 {
            for av in 1..=30i64 {
                let a = LatticePoint::new(au, av);
                for bu in 1..=30i64 {
                    for bv in 1..=30i64 {
                        if bu == au || bv == av {
                            continue;
                        }
                        let b = LatticePoint::new(bu, bv);
                        let enumerated = interior_point_count(a, b, ke).unwrap();
                        let g = gcd_k(bu - au, bv - av, ke).unwrap();
                        pass &= enumerated + 1 == g;
                    }
                }
            }
        }
    }
    report(
        6,
        "interior lattice points = gcd_k - 1 over a 30x30 box, k = 1..3",
        pass,
    );
}

#[test]
fn criterion_7_base_set_bound_and_residue_injection() {
    let mut pass = true;

    // Deterministic part: an oversized set can never validate (5 > 2^2).
    let five = vec![
        LatticePoint::new(0, 0),
        LatticePoint::new(2, 1),
        LatticePoint::new(1, 2),
        LatticePoint::new(3, 7),
        LatticePoint::new(4, 3),
    ];
    pass &= ValidatedBaseSet::new(five, k(1)).is_err();

    // Randomized part: whatever the generator throws at the validator, every
    // accepted set respects the bound and occupies distinct
    // (u mod 2, v mod 2^k) residue classes.
    let mut rng = StdRng::seed_from_u64(0xBA5E_5E75);
    let mut accepted = 0usize;
    for _ in 0..600 {
        let kk = rng.random_range(1..=3u32);
        let ke = k(kk);
        let max_size = (ke.cardinality_bound() + 2) as usize;
        let size = rng.random_range(1..=max_size);
        let pts: Vec<LatticePoint> = (0..size)
            .map(|_| LatticePoint::new(rng.random_range(-6..=6), rng.random_range(-6..=6)))
            .collect();
        let Ok(set) = ValidatedBaseSet::new(pts, ke) else {
            continue;
        };
        accepted += 1;
        pass &= set.cardinality() as u128 <= ke.cardinality_bound();
        let modulus = 1i128 << kk;
        let mut seen = HashSet::new();
        for p in set.points() {
            pass &= seen.insert((p.u.rem_euclid(2), (p.v as i128).rem_euclid(modulus)));
        }
    }
    // The property must actually have been exercised on accepted sets.
    pass &= accepted >= 50;

    report(
        7,
        "validator enforces the 2^(k+1) bound and residue injection on accepted sets",
        pass,
    );
}

#[test]
fn criterion_8_error_term_stays_bounded() {
    let ke = k(2);
    let origin = set_of(&[(0, 0)], ke);
    let rho = level1_density(1, ke, 1e-10).unwrap().value;

    let sizes = [500u64, 1000, 2000, 4000, 8000];
    let frozen_counts = [208_109u64, 832_000, 3_328_062, 13_311_586, 53_244_972];

    let mut pass = true;
    let mut ratios = [0.0f64; 5];
    for (i, &x) in sizes.iter().enumerate() {
        let count = count_sieve(&origin, x, VisibilityLevel::ONE).unwrap().count;
        pass &= count == frozen_counts[i];
        let xf = x as f64;
        ratios[i] = (count as f64 - rho * xf * xf).abs() / (xf * xf.ln());
    }
    // Bounded by a fixed constant, with no growth across the doublings.
    pass &= ratios.iter().all(|r| *r <= 0.5);
    pass &= ratios[4] <= 4.0 * ratios[0];

    report(
        8,
        "|count - rho x^2| / (x ln x) bounded across x = 500..8000",
        pass,
    );
}
