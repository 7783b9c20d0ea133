//! Lattice-point visibility along power curves.
//!
//! A point `(m, n)` is *level-L visible* from a base `(u, v)` along the
//! curve family `y - v = r (x - u)^k` when at most `L - 1` lattice points
//! lie strictly between them on the connecting curve — equivalently, when
//! the degree-weighted gcd of the coordinate differences is at most `L`.
//! This crate provides:
//!
//! * exact predicates and the geometric ground truth ([`gcd_k`],
//!   [`is_level_visible`], [`interior_point_count`], [`curve_coefficient`]);
//! * validation of base sets, whose size the pigeonhole bound caps at
//!   `2^(k+1)` ([`ValidatedBaseSet`]);
//! * three independent engines counting jointly visible points over
//!   `[1, x]^2` ([`count_brute`], [`count_sieve`],
//!   [`count_moebius_origin`]) plus empirical error reports
//!   ([`empirical_error_report`]);
//! * the asymptotic densities those counts converge to, as truncated Euler
//!   products with certified error bounds ([`level1_density`],
//!   [`level2_density`]).
//!
//! ```
//! use curvis::{
//!     count_sieve, level1_density, CurveExponent, LatticePoint, ValidatedBaseSet,
//!     VisibilityLevel,
//! };
//!
//! let k = CurveExponent::new(2)?;
//! let set = ValidatedBaseSet::new(
//!     vec![LatticePoint::new(0, 0), LatticePoint::new(1, 1)],
//!     k,
//! )?;
//! let counted = count_sieve(&set, 1000, VisibilityLevel::ONE)?;
//! let density = level1_density(2, k, 1e-8)?;
//! // The empirical density is already within half a percent at x = 1000.
//! assert!((counted.empirical_density() - density.value).abs() < 5e-3);
//! # Ok::<(), curvis::Error>(())
//! ```
//!
//! The `curvis-cli` crate exposes the same functionality as a command line
//! with CSV output.

pub mod baseset;
pub mod counting;
pub mod density;
pub mod error;
pub mod gcdk;
pub mod point;
pub mod rational;
pub mod sieve;
pub mod visibility;

pub use baseset::{parse_base_set_text, ValidatedBaseSet};
pub use counting::{
    count_brute, count_brute_limited, count_brute_rows, count_moebius_origin, count_sieve,
    count_sieve_limited, count_sieve_rows, empirical_error_report, BandCount, CountResult, Engine,
    ErrorReport, ErrorRow, Limits,
};
pub use density::{level1_density, level2_density, DensityResult, DEFAULT_TOLERANCE};
pub use error::Error;
pub use gcdk::{gcd_k, CurveExponent};
pub use point::LatticePoint;
pub use rational::Rational;
pub use visibility::{curve_coefficient, interior_point_count, is_level_visible, VisibilityLevel};
