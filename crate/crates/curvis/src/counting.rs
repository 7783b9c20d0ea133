//! Three independent engines counting jointly visible lattice points over
//! the square `[1, x]^2`.
//!
//! * [`count_brute`] evaluates `gcd_k` per point — the readable reference.
//! * [`count_sieve`] strides residue classes per prime, never computing a
//!   gcd — the fast engine for table-sized grids.
//! * [`count_moebius_origin`] evaluates a closed-form divisor sum — an
//!   independent oracle for the single-base case.
//!
//! All engines follow one exclusion convention: a grid point sharing a
//! coordinate with any base point is skipped and tallied in
//! [`CountResult::excluded`], because visibility is undefined there (the
//! coordinate difference would feed a zero into `gcd_k`). Base points inside
//! the grid exclude themselves.
//!
//! Engines also share a partition contract: counting any disjoint row bands
//! independently and summing gives exactly the full answer, which is both
//! the parallelization scheme and a testable invariant (see
//! [`count_brute_rows`] / [`count_sieve_rows`]).

use std::fmt;
use std::ops::{Add, Range};
use std::str::FromStr;

use rayon::prelude::*;

use crate::baseset::ValidatedBaseSet;
use crate::density;
use crate::error::Error;
use crate::gcdk::{floor_kth_root, CurveExponent};
use crate::point::LatticePoint;
use crate::sieve::{mobius_table, primes_up_to, SpfTable};
use crate::visibility::VisibilityLevel;

/// Which engine produced a [`CountResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Brute,
    Sieve,
    Moebius,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Brute => "brute",
            Engine::Sieve => "sieve",
            Engine::Moebius => "moebius",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "brute" => Ok(Engine::Brute),
            "sieve" => Ok(Engine::Sieve),
            "moebius" => Ok(Engine::Moebius),
            _ => Err(Error::InvalidArgument(
                "engine must be one of: brute, sieve, moebius",
            )),
        }
    }
}

/// Size and memory guards for the counting engines.
///
/// The `x` guards bound runtime (the grid has `x^2` points); the byte guard
/// bounds the peak resident size of the sieve's status bitmaps across all
/// worker threads (bands are streamed, so the whole `x^2` bitmap never
/// exists at once).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_x_brute: u64,
    pub max_x_sieve: u64,
    pub max_bitmap_bytes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_x_brute: 100_000,
            max_x_sieve: 1_000_000,
            max_bitmap_bytes: 2 << 30,
        }
    }
}

/// Implementation ceiling on `x`, independent of configured guards, so that
/// row/column indices always fit in `i64`/`usize` arithmetic.
const ENGINE_X_CEILING: u64 = 1 << 31;

/// Target size of one row band's bitmap; bands this small keep peak memory
/// at `threads * BAND_TARGET_BYTES` while leaving the per-band prime setup
/// negligible.
const BAND_TARGET_BYTES: u64 = 4 << 20;

/// An exact count over `[1, x]^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub count: u64,
    pub x: u64,
    pub level: VisibilityLevel,
    pub k: CurveExponent,
    pub base_set: ValidatedBaseSet,
    pub engine: Engine,
    /// Points skipped for sharing a coordinate with a base point.
    pub excluded: u64,
}

impl CountResult {
    /// Header matching [`CountResult::csv_row`].
    pub const CSV_HEADER: &'static str = "engine,k,N,level,x,count,excluded,empirical_density";

    /// `count / x^2`.
    pub fn empirical_density(&self) -> f64 {
        self.count as f64 / (self.x as f64 * self.x as f64)
    }

    /// One CSV row; the density column is fixed to 8 decimal places.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.8}",
            self.engine,
            self.k,
            self.base_set.cardinality(),
            self.level,
            self.x,
            self.count,
            self.excluded,
            self.empirical_density()
        )
    }
}

/// Partial tallies from one row band; bands sum to the full result.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BandCount {
    pub count: u64,
    pub excluded: u64,
}

impl std::ops::Add for BandCount {
    type Output = BandCount;

    fn add(self, rhs: BandCount) -> BandCount {
        BandCount {
            count: self.count + rhs.count,
            excluded: self.excluded + rhs.excluded,
        }
    }
}

fn validate_x(x: u64, guard: u64, what: &'static str) -> Result<(), Error> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be at least 1"));
    }
    let ceiling = guard.min(ENGINE_X_CEILING);
    if x > ceiling {
        return Err(Error::LimitExceeded {
            what,
            requested: x,
            limit: ceiling,
        });
    }
    Ok(())
}

fn validate_rows(rows: &Range<u64>, x: u64) -> Result<(), Error> {
    if rows.start < 1 || rows.end > x + 1 {
        return Err(Error::InvalidArgument("row band must lie within [1, x]"));
    }
    Ok(())
}

/// Splits `[1, x]` into bands of at most `band_rows` rows.
fn bands(x: u64, band_rows: u64) -> Vec<Range<u64>> {
    (1..=x)
        .step_by(band_rows as usize)
        .map(|start| start..(start + band_rows).min(x + 1))
        .collect()
}

/// Deduplicated base coordinates, for the exclusion tallies.
fn coordinate_sets(set: &ValidatedBaseSet) -> (Vec<i64>, Vec<i64>) {
    let mut us: Vec<i64> = set.points().iter().map(|p| p.u).collect();
    let mut vs: Vec<i64> = set.points().iter().map(|p| p.v).collect();
    us.sort_unstable();
    us.dedup();
    vs.sort_unstable();
    vs.dedup();
    (us, vs)
}

// ---------------------------------------------------------------------------
// Brute engine
// ---------------------------------------------------------------------------

/// Counts points of `[1, x]^2` level-visible to every base point by direct
/// `gcd_k` evaluation, with the default [`Limits`].
///
/// Runtime is `O(x^2 * N)` gcd evaluations — quadratic in `x`. Any level is
/// supported.
///
/// ```
/// use curvis::{count_brute, CurveExponent, LatticePoint, ValidatedBaseSet, VisibilityLevel};
///
/// let k = CurveExponent::new(2)?;
/// let s = ValidatedBaseSet::new(
///     vec![LatticePoint::new(0, 0), LatticePoint::new(1, 1)], k)?;
/// let r = count_brute(&s, 4, VisibilityLevel::ONE)?;
/// // Row n=1 and column m=1 are excluded (7 points); (2,4) and (4,4) fail.
/// assert_eq!((r.count, r.excluded), (7, 7));
/// # Ok::<(), curvis::Error>(())
/// ```
pub fn count_brute(
    set: &ValidatedBaseSet,
    x: u64,
    level: VisibilityLevel,
) -> Result<CountResult, Error> {
    count_brute_limited(set, x, level, &Limits::default())
}

/// [`count_brute`] with caller-supplied guards.
pub fn count_brute_limited(
    set: &ValidatedBaseSet,
    x: u64,
    level: VisibilityLevel,
    limits: &Limits,
) -> Result<CountResult, Error> {
    validate_x(x, limits.max_x_brute, "x (brute-force engine guard)")?;
    let spf = brute_spf_table(set, x)?;
    let band_rows = (x / (4 * rayon::current_num_threads() as u64).max(1)).max(1);
    let total = bands(x, band_rows)
        .into_par_iter()
        .map(|rows| brute_band(set, x, level, rows, &spf))
        .reduce(BandCount::default, BandCount::add);
    Ok(CountResult {
        count: total.count,
        x,
        level,
        k: set.k(),
        base_set: set.clone(),
        engine: Engine::Brute,
        excluded: total.excluded,
    })
}

/// One row band of the brute-force count, single-threaded. Exposes the
/// partition contract: disjoint bands covering `[1, x]` sum to the full
/// count.
pub fn count_brute_rows(
    set: &ValidatedBaseSet,
    x: u64,
    level: VisibilityLevel,
    rows: Range<u64>,
) -> Result<BandCount, Error> {
    validate_x(
        x,
        Limits::default().max_x_brute,
        "x (brute-force engine guard)",
    )?;
    validate_rows(&rows, x)?;
    let spf = brute_spf_table(set, x)?;
    Ok(brute_band(set, x, level, rows, &spf))
}

/// Table sized to factor every coordinate difference the grid can produce,
/// clamped to the table cap (rare overflows fall back to trial division).
fn brute_spf_table(set: &ValidatedBaseSet, x: u64) -> Result<SpfTable, Error> {
    let reach = set
        .points()
        .iter()
        .map(|p| p.u.unsigned_abs().max(p.v.unsigned_abs()))
        .max()
        .unwrap_or(0)
        .saturating_add(x);
    SpfTable::new(reach.min(crate::sieve::MAX_SPF_LIMIT))
}

fn brute_band(
    set: &ValidatedBaseSet,
    x: u64,
    level: VisibilityLevel,
    rows: Range<u64>,
    spf: &SpfTable,
) -> BandCount {
    let k = set.k().get();
    let lvl = level.get();
    let bases = set.points();
    let mut out = BandCount::default();
    for n in rows {
        let n_i = n as i64;
        if bases.iter().any(|b| b.v == n_i) {
            out.excluded += x;
            continue;
        }
        for m in 1..=x {
            let m_i = m as i64;
            if bases.iter().any(|b| b.u == m_i) {
                out.excluded += 1;
                continue;
            }
            let visible = bases.iter().all(|b| {
                let dm = (m_i as i128 - b.u as i128).unsigned_abs() as u64;
                let dn = (n_i as i128 - b.v as i128).unsigned_abs() as u64;
                spf.gcd_k_magnitudes(dm, dn, k) <= lvl
            });
            if visible {
                out.count += 1;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Sieve engine
// ---------------------------------------------------------------------------

/// Counts like [`count_brute`] but by marking failures along residue
/// classes, with the default [`Limits`]. Levels 1 and 2 only.
///
/// For each base `(u, v)`, a point `(m, n)` with `dm = m - u`, `dn = n - v`
/// (both nonzero) fails level 1 exactly when some prime `p` has `p | dm` and
/// `p^k | dn`. Writing `v_p` for prime multiplicity,
/// `gcd_k = prod_p p^min(v_p(dm), floor(v_p(dn) / k))`, so:
///
/// * `gcd_k >= 2` — some prime contributes, i.e. `p | dm` and `p^k | dn`;
/// * `gcd_k >= 3` — either an odd prime contributes, or the power of 2 in
///   `gcd_k` is at least 4, which unwinds to `4 | dm` and `4^k | dn`.
///
/// Each such condition is a pair of arithmetic progressions (`m ≡ u mod q`,
/// `n ≡ v mod q^k`), so failures are painted by striding a bitmap instead of
/// evaluating gcds. Only primes with `p <= x + |u|` and `p^k <= x + |v|` can
/// strike a nonzero difference in the grid, which bounds the prime list.
///
/// Work is `O(x^2 sum_p p^-(k+1))` bit-sets per base; bands of rows run in
/// parallel and peak memory stays around a few MiB per thread.
pub fn count_sieve(
    set: &ValidatedBaseSet,
    x: u64,
    level: VisibilityLevel,
) -> Result<CountResult, Error> {
    count_sieve_limited(set, x, level, &Limits::default())
}

/// [`count_sieve`] with caller-supplied guards.
pub fn count_sieve_limited(
    set: &ValidatedBaseSet,
    x: u64,
    level: VisibilityLevel,
    limits: &Limits,
) -> Result<CountResult, Error> {
    validate_sieve_level(level)?;
    validate_x(x, limits.max_x_sieve, "x (sieve engine guard)")?;
    let primes = sieve_primes(set, x)?;
    let threads = rayon::current_num_threads() as u64;
    let row_bytes = (x.div_ceil(64)) * 8;
    let by_memory = limits.max_bitmap_bytes / (threads * row_bytes).max(1);
    if by_memory == 0 {
        return Err(Error::MemoryLimit {
            what: "sieve status bitmap",
            requested: (threads * row_bytes) as u128,
            limit: limits.max_bitmap_bytes,
        });
    }
    let band_rows = (BAND_TARGET_BYTES / row_bytes.max(1))
        .clamp(1, by_memory)
        .min(x);
    let total = bands(x, band_rows)
        .into_par_iter()
        .map(|rows| sieve_band(set, x, level, rows, &primes))
        .reduce(BandCount::default, BandCount::add);
    Ok(CountResult {
        count: total.count,
        x,
        level,
        k: set.k(),
        base_set: set.clone(),
        engine: Engine::Sieve,
        excluded: total.excluded,
    })
}

/// One row band of the sieve count, single-threaded; the sieve counterpart
/// of [`count_brute_rows`].
pub fn count_sieve_rows(
    set: &ValidatedBaseSet,
    x: u64,
    level: VisibilityLevel,
    rows: Range<u64>,
) -> Result<BandCount, Error> {
    validate_sieve_level(level)?;
    validate_x(x, Limits::default().max_x_sieve, "x (sieve engine guard)")?;
    validate_rows(&rows, x)?;
    let primes = sieve_primes(set, x)?;
    Ok(sieve_band(set, x, level, rows, &primes))
}

fn validate_sieve_level(level: VisibilityLevel) -> Result<(), Error> {
    if level.get() > 2 {
        return Err(Error::UnsupportedLevel {
            what: "count_sieve",
            level: level.get(),
        });
    }
    Ok(())
}

/// Primes up to the largest value that can strike any base on this grid.
fn sieve_primes(set: &ValidatedBaseSet, x: u64) -> Result<Vec<u64>, Error> {
    let k = set.k().get();
    let bound = set
        .points()
        .iter()
        .map(|p| {
            let cap_u = x.saturating_add(p.u.unsigned_abs());
            let cap_v = x.saturating_add(p.v.unsigned_abs());
            cap_u.min(floor_kth_root(cap_v, k))
        })
        .max()
        .unwrap_or(0);
    primes_up_to(bound)
}

fn sieve_band(
    set: &ValidatedBaseSet,
    x: u64,
    level: VisibilityLevel,
    rows: Range<u64>,
    primes: &[u64],
) -> BandCount {
    let k = set.k().get();
    let words_per_row = x.div_ceil(64) as usize;
    let height = (rows.end - rows.start) as usize;
    let mut failed = vec![0u64; words_per_row * height];
    for base in set.points() {
        let cap_u = x.saturating_add(base.u.unsigned_abs());
        let cap_v = x.saturating_add(base.v.unsigned_abs());
        for &p in primes {
            // Both caps grow monotonically past their bound, so stop at the
            // first prime that cannot strike this base.
            let Some(pk) = p.checked_pow(k).filter(|&pk| pk <= cap_v) else {
                break;
            };
            if p > cap_u {
                break;
            }
            if level.get() == 2 && p == 2 {
                continue; // level 2 tolerates a bare factor of 2
            }
            mark_progressions(&mut failed, words_per_row, x, &rows, *base, p, pk);
        }
        if level.get() == 2 {
            // The (4, 4^k) rule: the only way gcd_k reaches 3+ without an
            // odd prime. 4^k overflowing u64 already exceeds cap_v.
            if let Some(fk) = 4u64.checked_pow(k).filter(|&fk| fk <= cap_v) {
                mark_progressions(&mut failed, words_per_row, x, &rows, *base, 4, fk);
            }
        }
    }
    tally_band(set, x, &rows, words_per_row, &failed)
}

/// Marks every `(m, n)` in the band with `m ≡ u (mod q)`, `n ≡ v (mod qk)`.
fn mark_progressions(
    failed: &mut [u64],
    words_per_row: usize,
    x: u64,
    rows: &Range<u64>,
    base: LatticePoint,
    q: u64,
    qk: u64,
) {
    let Some(m0) = first_in_class(1, base.u, q).filter(|&m| m <= x) else {
        return;
    };
    let Some(n0) = first_in_class(rows.start, base.v, qk).filter(|&n| n < rows.end) else {
        return;
    };
    let mut n = n0;
    while n < rows.end {
        let row_base = (n - rows.start) as usize * words_per_row;
        let mut m = m0;
        while m <= x {
            let c = (m - 1) as usize;
            failed[row_base + c / 64] |= 1 << (c % 64);
            m += q;
        }
        match n.checked_add(qk) {
            Some(next) => n = next,
            None => break,
        }
    }
}

/// Smallest value `>= lo` congruent to `class_of` modulo `modulus`, or
/// `None` when it would exceed `u64::MAX`.
fn first_in_class(lo: u64, class_of: i64, modulus: u64) -> Option<u64> {
    let r = (class_of as i128).rem_euclid(modulus as i128) as u64;
    let lo_r = lo % modulus;
    // (r - lo_r) mod modulus, computed without going negative.
    let add = if r >= lo_r {
        r - lo_r
    } else {
        modulus - lo_r + r
    };
    lo.checked_add(add)
}

fn tally_band(
    set: &ValidatedBaseSet,
    x: u64,
    rows: &Range<u64>,
    words_per_row: usize,
    failed: &[u64],
) -> BandCount {
    let (us, vs) = coordinate_sets(set);
    let grid_us: Vec<u64> = us
        .iter()
        .filter(|&&u| u >= 1 && u as u64 <= x)
        .map(|&u| u as u64)
        .collect();
    let mut out = BandCount::default();
    for n in rows.clone() {
        if vs.binary_search(&(n as i64)).is_ok() {
            out.excluded += x;
            continue;
        }
        let row = (n - rows.start) as usize * words_per_row;
        let words = &failed[row..row + words_per_row];
        let struck: u64 = words.iter().map(|w| w.count_ones() as u64).sum();
        let mut visible = x - struck;
        for &u in &grid_us {
            out.excluded += 1;
            let c = (u - 1) as usize;
            if words[c / 64] >> (c % 64) & 1 == 0 {
                visible -= 1; // excluded column was never struck; un-count it
            }
        }
        out.count += visible;
    }
    out
}

// ---------------------------------------------------------------------------
// Divisor-sum engine (single base at the origin, level 1)
// ---------------------------------------------------------------------------

/// Exact count of `(m, n)` in `[1, x]^2` with `gcd_k(m, n) = 1`, by Möbius
/// inclusion–exclusion over divisors:
///
/// ```text
/// count = sum over d with d^k <= x of mu(d) * floor(x/d) * floor(x/d^k)
/// ```
///
/// The identity `sum over d | n of mu(d) = [n = 1]` applied to
/// `n = gcd_k(m, n)` turns the count into the divisor sum, because the `d`
/// with `d | m` and `d^k | n` are exactly the divisors of `gcd_k(m, n)`.
/// This is the third, structurally independent oracle for the other two
/// engines in the single-base case (no points are excluded: the origin
/// shares no coordinate with `[1, x]^2`).
///
/// ```
/// use curvis::{count_moebius_origin, CurveExponent};
///
/// let k = CurveExponent::new(2)?;
/// assert_eq!(count_moebius_origin(k, 10)?, 87);
/// assert_eq!(count_moebius_origin(k, 1)?, 1);
/// # Ok::<(), curvis::Error>(())
/// ```
pub fn count_moebius_origin(k: CurveExponent, x: u64) -> Result<u64, Error> {
    validate_x(x, ENGINE_X_CEILING, "x (divisor-sum engine ceiling)")?;
    let root = floor_kth_root(x, k.get());
    let mu = mobius_table(root)?;
    let mut acc: i128 = 0;
    for d in 1..=root {
        let m = mu[d as usize];
        if m == 0 {
            continue;
        }
        let dk = d.pow(k.get()); // d <= x^(1/k), so d^k <= x
        let term = (x / d) as i128 * (x / dk) as i128;
        acc += m as i128 * term;
    }
    debug_assert!(acc >= 0 && acc <= (x as i128) * (x as i128));
    Ok(acc as u64)
}

// ---------------------------------------------------------------------------
// Empirical error reporting
// ---------------------------------------------------------------------------

/// One sampled grid size in an [`ErrorReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub x: u64,
    pub count: u64,
    /// `x^2 * density` — the main term.
    pub expected: f64,
    /// `count - expected`.
    pub delta: f64,
    /// `delta / (x * ln(x)^N)`; stays bounded when the error term has the
    /// expected shape. Infinite at `x = 1`, where the normalizer vanishes.
    pub normalized: f64,
}

impl ErrorRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.8},{:.8},{:.8}",
            self.x, self.count, self.expected, self.delta, self.normalized
        )
    }
}

/// Empirical error-term measurements against the asymptotic density.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub k: CurveExponent,
    pub level: VisibilityLevel,
    pub n_points: usize,
    /// The density the expectations were computed from.
    pub density: density::DensityResult,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    /// Header matching [`ErrorRow::csv_row`].
    pub const CSV_HEADER: &'static str = "x,count,expected,delta,normalized";
}

/// Runs the sieve engine at each sample size and reports the deviation from
/// the density main term, normalized by the expected error shape
/// `x * ln(x)^N`.
///
/// Sample sizes must be strictly increasing. Levels 1 and 2 only (densities
/// exist for no other level).
pub fn empirical_error_report(
    set: &ValidatedBaseSet,
    level: VisibilityLevel,
    xs: &[u64],
) -> Result<ErrorReport, Error> {
    empirical_error_report_limited(set, level, xs, &Limits::default())
}

/// [`empirical_error_report`] with caller-supplied guards.
pub fn empirical_error_report_limited(
    set: &ValidatedBaseSet,
    level: VisibilityLevel,
    xs: &[u64],
    limits: &Limits,
) -> Result<ErrorReport, Error> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("sample list must be nonempty"));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "sample list must be strictly increasing",
        ));
    }
    let n = set.cardinality() as u64;
    let rho = match level.get() {
        1 => density::level1_density(n, set.k(), density::DEFAULT_TOLERANCE)?,
        2 => density::level2_density(n, set.k(), density::DEFAULT_TOLERANCE)?,
        l => {
            return Err(Error::UnsupportedLevel {
                what: "empirical_error_report",
                level: l,
            })
        }
    };
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        let r = count_sieve_limited(set, x, level, limits)?;
        let expected = rho.value * (x as f64) * (x as f64);
        let delta = r.count as f64 - expected;
        let normalized = delta / ((x as f64) * (x as f64).ln().powi(n as i32));
        rows.push(ErrorRow {
            x,
            count: r.count,
            expected,
            delta,
            normalized,
        });
    }
    Ok(ErrorReport {
        k: set.k(),
        level,
        n_points: set.cardinality(),
        density: rho,
        rows,
    })
}
