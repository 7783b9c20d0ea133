//! Validated base sets: the finite point sets joint visibility is measured
//! against.
//!
//! A base set is only usable for counting when its points are pairwise
//! k-visible with no shared coordinates. Validation enforces that and, as a
//! byproduct, the cardinality bound `N <= 2^(k+1)`: mapping each point to
//! `(u mod 2, v mod 2^k)` must be injective on a valid set (a collision pair
//! would have `2 | du` and `2^k | dv`, hence `gcd_k >= 2`), and there are
//! only `2^(k+1)` such residue pairs.

use std::collections::HashMap;
use std::collections::HashSet;

use crate::error::Error;
use crate::gcdk::{self, CurveExponent};
use crate::point::LatticePoint;

/// A non-empty list of distinct, pairwise k-visible points together with
/// the exponent they were validated for. Point order is the caller's; it is
/// preserved so file-driven runs stay reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedBaseSet {
    points: Vec<LatticePoint>,
    k: CurveExponent,
}

impl ValidatedBaseSet {
    /// Validates `points` for exponent `k`.
    ///
    /// Rejects, in order of detection: empty input, duplicate points, pairs
    /// sharing a coordinate (their `gcd_k` is undefined, so neither
    /// visibility nor invisibility can be claimed), and pairs with
    /// `gcd_k >= 2`. On success the cardinality bound holds automatically
    /// and is asserted rather than checked.
    ///
    /// ```
    /// use curvis::{CurveExponent, LatticePoint, ValidatedBaseSet};
    ///
    /// let k = CurveExponent::new(2)?;
    /// let pts = vec![LatticePoint::new(0, 0), LatticePoint::new(1, 2), LatticePoint::new(2, 1)];
    /// let set = ValidatedBaseSet::new(pts, k)?;
    /// assert_eq!(set.cardinality(), 3);
    ///
    /// // gcd_2(2, 4) = 2: not a k-visible pair.
    /// let bad = vec![LatticePoint::new(0, 0), LatticePoint::new(2, 4)];
    /// assert!(ValidatedBaseSet::new(bad, k).is_err());
    /// # Ok::<(), curvis::Error>(())
    /// ```
    pub fn new(points: Vec<LatticePoint>, k: CurveExponent) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptyBaseSet);
        }
        let mut seen = HashSet::with_capacity(points.len());
        for &p in &points {
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(p));
            }
        }
        // Residue prescreen: a collision in (u mod 2, v mod 2^k) pins down a
        // failing pair directly, and keeps oversized inputs from costing a
        // quadratic scan before rejection.
        let modulus = 1i128 << k.get();
        let mut classes: HashMap<(u8, u64), LatticePoint> = HashMap::with_capacity(points.len());
        let mut offender: Option<(LatticePoint, LatticePoint)> = None;
        for &p in &points {
            let class = (
                p.u.rem_euclid(2) as u8,
                (p.v as i128).rem_euclid(modulus) as u64,
            );
            if let Some(&q) = classes.get(&class) {
                offender = Some((q, p));
                break;
            }
            classes.insert(class, p);
        }
        if let Some((a, b)) = offender {
            return Err(
                Self::classify_pair(a, b, k).expect_err("residue collision implies gcd_k >= 2")
            );
        }
        // All residues distinct, so the bound holds before the exact scan.
        assert!(points.len() as u128 <= k.cardinality_bound());
        for (i, &a) in points.iter().enumerate() {
            for &b in &points[i + 1..] {
                Self::classify_pair(a, b, k)?;
            }
        }
        Ok(ValidatedBaseSet { points, k })
    }

    /// Checks a single pair: shared coordinates and `gcd_k >= 2` are errors.
    fn classify_pair(a: LatticePoint, b: LatticePoint, k: CurveExponent) -> Result<(), Error> {
        let du = b.u as i128 - a.u as i128;
        let dv = b.v as i128 - a.v as i128;
        if du == 0 || dv == 0 {
            return Err(Error::DegenerateBasePair { a, b });
        }
        let g = gcdk::gcd_k_magnitudes(
            du.unsigned_abs() as u64,
            dv.unsigned_abs() as u64,
            k.get(),
            gcdk::smallest_factor_trial,
        );
        if g >= 2 {
            return Err(Error::BasePairNotVisible { a, b, gcd: g });
        }
        Ok(())
    }

    /// Parses and validates the text format in one step.
    pub fn from_text(text: &str, k: CurveExponent) -> Result<Self, Error> {
        Self::new(parse_base_set_text(text)?, k)
    }

    /// Test-only constructor that skips pair validation, for exploring
    /// conventions the validator rejects (shared-coordinate sets).
    #[cfg(test)]
    pub(crate) fn new_unchecked(points: Vec<LatticePoint>, k: CurveExponent) -> Self {
        assert!(!points.is_empty());
        ValidatedBaseSet { points, k }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn k(&self) -> CurveExponent {
        self.k
    }

    /// `N`, the number of base points.
    pub fn cardinality(&self) -> usize {
        self.points.len()
    }

    /// The pigeonhole bound `2^(k+1)` that `cardinality` can never exceed.
    pub fn cardinality_bound(&self) -> u128 {
        self.k.cardinality_bound()
    }
}

/// Parses the base-set text format: one `u v` pair of decimal integers per
/// line, `#` starting a comment, blank lines ignored.
///
/// Validation is separate because it needs the exponent; see
/// [`ValidatedBaseSet::from_text`] for the combined step.
///
/// ```
/// use curvis::baseset::parse_base_set_text;
///
/// let text = "# two points\n0 0\n1 2   # inline comment\n";
/// let pts = parse_base_set_text(text)?;
/// assert_eq!(pts.len(), 2);
/// assert_eq!((pts[1].u, pts[1].v), (1, 2));
/// # Ok::<(), curvis::Error>(())
/// ```
pub fn parse_base_set_text(text: &str) -> Result<Vec<LatticePoint>, Error> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p: LatticePoint = line.parse().map_err(|e| match e {
            Error::BaseSetParse { message, .. } => Error::BaseSetParse {
                line: idx + 1,
                message,
            },
            other => other,
        })?;
        points.push(p);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: u32) -> CurveExponent {
        CurveExponent::new(v).unwrap()
    }

    fn pts(coords: &[(i64, i64)]) -> Vec<LatticePoint> {
        coords
            .iter()
            .map(|&(u, v)| LatticePoint::new(u, v))
            .collect()
    }

    #[test]
    fn accepts_known_valid_sets() {
        let s = ValidatedBaseSet::new(pts(&[(0, 0), (1, 1)]), k(2)).unwrap();
        assert_eq!(s.cardinality(), 2);
        assert_eq!(s.cardinality_bound(), 8);

        let s = ValidatedBaseSet::new(pts(&[(0, 0), (1, 2), (2, 1)]), k(2)).unwrap();
        assert_eq!(s.cardinality(), 3);
        assert_eq!(s.points()[2], LatticePoint::new(2, 1));
    }

    #[test]
    fn accepts_full_cardinality_set_for_lines() {
        // Four pairwise 1-visible points with all four (u mod 2, v mod 2)
        // classes occupied: exactly the pigeonhole bound for k = 1.
        let s = ValidatedBaseSet::new(pts(&[(0, 0), (2, 1), (1, 2), (3, 7)]), k(1)).unwrap();
        assert_eq!(s.cardinality() as u128, s.cardinality_bound());
    }

    #[test]
    fn rejects_empty_and_duplicates() {
        assert!(matches!(
            ValidatedBaseSet::new(vec![], k(2)),
            Err(Error::EmptyBaseSet)
        ));
        assert!(matches!(
            ValidatedBaseSet::new(pts(&[(0, 0), (1, 1), (0, 0)]), k(2)),
            Err(Error::DuplicatePoint(p)) if p == LatticePoint::ORIGIN
        ));
    }

    #[test]
    fn rejects_shared_coordinate_pairs() {
        let err = ValidatedBaseSet::new(pts(&[(0, 0), (0, 1), (1, 0), (1, 1)]), k(1)).unwrap_err();
        assert!(matches!(err, Error::DegenerateBasePair { .. }));
    }

    #[test]
    fn rejects_invisible_pairs_with_gcd_value() {
        let err = ValidatedBaseSet::new(pts(&[(0, 0), (2, 4)]), k(2)).unwrap_err();
        match err {
            Error::BasePairNotVisible { gcd, .. } => assert_eq!(gcd, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err = ValidatedBaseSet::new(pts(&[(0, 0), (3, 9)]), k(2)).unwrap_err();
        match err {
            Error::BasePairNotVisible { gcd, .. } => assert_eq!(gcd, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn oversized_sets_are_rejected_quickly() {
        // 9 points for k = 2 would exceed 2^(k+1) = 8; some pair must
        // collide in residues and be reported as invalid.
        let many: Vec<LatticePoint> = (0..9).map(|i| LatticePoint::new(i, i * i + 1)).collect();
        let err = ValidatedBaseSet::new(many, k(2)).unwrap_err();
        assert!(matches!(
            err,
            Error::BasePairNotVisible { .. } | Error::DegenerateBasePair { .. }
        ));
    }

    #[test]
    fn parses_text_format() {
        let text = "\n# base set\n0 0\n1 2 # the second point\n\n2 1\n";
        let s = ValidatedBaseSet::from_text(text, k(2)).unwrap();
        assert_eq!(s.cardinality(), 3);
        assert_eq!(s.points(), pts(&[(0, 0), (1, 2), (2, 1)]).as_slice());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_base_set_text("0 0\n1 2\nnot a point\n").unwrap_err();
        match err {
            Error::BaseSetParse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_base_set_text("0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::BaseSetParse { line: 1, .. }));
    }

    #[test]
    fn comment_only_input_is_empty() {
        assert!(parse_base_set_text("# nothing\n  # here\n")
            .unwrap()
            .is_empty());
        assert!(matches!(
            ValidatedBaseSet::from_text("# nothing\n", k(2)),
            Err(Error::EmptyBaseSet)
        ));
    }
}
