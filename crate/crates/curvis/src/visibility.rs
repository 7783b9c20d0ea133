//! Visibility predicates along the curve family `y - v = r (x - u)^k`.
//!
//! Two points with nonzero coordinate differences `(dm, dn)` see each other
//! at level `L` exactly when `gcd_k(dm, dn) <= L`; equivalently, when at
//! most `L - 1` lattice points lie strictly between them on the connecting
//! curve. [`interior_point_count`] establishes that equivalence from the
//! geometry alone, without going through `gcd_k`, which is what makes it a
//! useful independent check.

use std::fmt;

use crate::error::Error;
use crate::gcdk::{self, CurveExponent};
use crate::point::LatticePoint;
use crate::rational::Rational;

/// Visibility level `L >= 1`: tolerate up to `L - 1` interior lattice
/// points. Levels 1 and 2 additionally carry density formulas in
/// [`crate::density`]; higher levels are supported by the predicates and the
/// brute-force counting engine only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VisibilityLevel(u64);

impl VisibilityLevel {
    pub const ONE: VisibilityLevel = VisibilityLevel(1);
    pub const TWO: VisibilityLevel = VisibilityLevel(2);

    pub fn new(level: u64) -> Result<Self, Error> {
        if level >= 1 {
            Ok(VisibilityLevel(level))
        } else {
            Err(Error::InvalidLevel(level))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for VisibilityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Signed coordinate differences, widened so the subtraction cannot wrap.
fn deltas(base: LatticePoint, target: LatticePoint) -> (i128, i128) {
    (
        target.u as i128 - base.u as i128,
        target.v as i128 - base.v as i128,
    )
}

/// The coefficient `r` of the unique curve `y - v = r (x - u)^k` through
/// `base = (u, v)` and `target = (m, n)`, in lowest terms.
///
/// `r` may be zero (horizontal degenerate curve) or negative. Points with
/// equal abscissae admit no such curve and are rejected.
///
/// ```
/// use curvis::{curve_coefficient, CurveExponent, LatticePoint};
///
/// let k = CurveExponent::new(2)?;
/// let origin = LatticePoint::ORIGIN;
/// let r = curve_coefficient(origin, LatticePoint::new(3, 2), k)?;
/// assert_eq!((r.numerator(), r.denominator()), (2, 9));
/// # Ok::<(), curvis::Error>(())
/// ```
pub fn curve_coefficient(
    base: LatticePoint,
    target: LatticePoint,
    k: CurveExponent,
) -> Result<Rational, Error> {
    let (dm, dn) = deltas(base, target);
    if dm == 0 {
        return Err(Error::VerticalPair {
            base,
            target,
            k: k.get(),
        });
    }
    let denom = dm
        .checked_pow(k.get())
        .ok_or(Error::Overflow("curve coefficient denominator (m-u)^k"))?;
    Rational::new(dn, denom)
}

/// Counts lattice points strictly between `base` and `target` on the curve
/// `y - v = r (x - u)^k`, by walking every integer abscissa between the two
/// and testing whether the ordinate is an integer.
///
/// This is the geometric ground truth the gcd-based predicates are measured
/// against; it never calls `gcd_k`. For an abscissa at offset `t` from the
/// base, the ordinate offset is `dn * t^k / dm^k`, which is integral exactly
/// when `b^k | dn` for `b = |dm| / gcd(|t|, |dm|)` — divide out the gcd and
/// the remaining denominator must cancel into `dn`. Testing that by `k`
/// successive exact divisions keeps every intermediate inside `i128`.
///
/// Runtime is proportional to the horizontal span, so this is a reference
/// implementation, not a counting engine.
///
/// ```
/// use curvis::{interior_point_count, CurveExponent, LatticePoint};
///
/// let origin = LatticePoint::ORIGIN;
/// let k2 = CurveExponent::new(2)?;
/// // (1, 1) sits on y = x^2 between (0, 0) and (2, 4).
/// assert_eq!(interior_point_count(origin, LatticePoint::new(2, 4), k2)?, 1);
/// let k1 = CurveExponent::LINE;
/// assert_eq!(interior_point_count(origin, LatticePoint::new(4, 4), k1)?, 3);
/// assert_eq!(interior_point_count(origin, LatticePoint::new(3, 5), k1)?, 0);
/// # Ok::<(), curvis::Error>(())
/// ```
pub fn interior_point_count(
    base: LatticePoint,
    target: LatticePoint,
    k: CurveExponent,
) -> Result<u64, Error> {
    let (dm, dn) = deltas(base, target);
    if dm == 0 {
        return Err(Error::VerticalPair {
            base,
            target,
            k: k.get(),
        });
    }
    let dm_abs = dm.unsigned_abs();
    let (lo, hi) = if base.u < target.u {
        (base.u, target.u)
    } else {
        (target.u, base.u)
    };
    let mut count = 0u64;
    for x0 in (lo + 1)..hi {
        let t = (x0 as i128 - base.u as i128).unsigned_abs();
        // Reduce t / dm; the ordinate offset is dn * t^k / dm^k, integral
        // iff (dm / gcd)^k divides dn.
        let b = dm_abs / gcd_u128(t, dm_abs);
        let mut rest = dn;
        let divides = (0..k.get()).all(|_| {
            if rest % b as i128 == 0 {
                rest /= b as i128;
                true
            } else {
                false
            }
        });
        if divides {
            count += 1;
        }
    }
    Ok(count)
}

/// Whether `target` is level-`L` visible from `base` along the curve family
/// with exponent `k`: `gcd_k` of the coordinate differences is at most `L`.
///
/// Shared coordinates are rejected — `gcd_k` takes no zeros — mirroring the
/// counting engines, which skip such points instead of classifying them.
///
/// ```
/// use curvis::{is_level_visible, CurveExponent, LatticePoint, VisibilityLevel};
///
/// let k = CurveExponent::new(2)?;
/// let origin = LatticePoint::ORIGIN;
/// let p = LatticePoint::new(2, 4); // gcd_2(2, 4) = 2
/// assert!(!is_level_visible(origin, p, k, VisibilityLevel::ONE)?);
/// assert!(is_level_visible(origin, p, k, VisibilityLevel::TWO)?);
/// # Ok::<(), curvis::Error>(())
/// ```
pub fn is_level_visible(
    base: LatticePoint,
    target: LatticePoint,
    k: CurveExponent,
    level: VisibilityLevel,
) -> Result<bool, Error> {
    let (dm, dn) = deltas(base, target);
    if dm == 0 || dn == 0 {
        return Err(Error::SharedCoordinate { base, target });
    }
    // |dm|, |dn| < 2^64, so the magnitudes fit u64 even though the signed
    // differences need i128.
    let g = gcdk::gcd_k_magnitudes(
        dm.unsigned_abs() as u64,
        dn.unsigned_abs() as u64,
        k.get(),
        gcdk::smallest_factor_trial,
    );
    Ok(g <= level.get())
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
