use crate::point::LatticePoint;

/// Errors produced by the library.
///
/// Two broad families matter to callers: *domain* errors (bad arguments,
/// degenerate geometry, unsupported parameter combinations) and *resource*
/// errors (a requested computation would exceed a configured size or memory
/// guard). [`Error::is_resource_limit`] distinguishes them so front ends can
/// map the families to different exit codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// `gcd_k` is undefined when either argument is zero.
    #[error("gcd_k is undefined for zero input: ({m}, {n})")]
    ZeroGcdInput { m: i64, n: i64 },

    /// Curve exponents must lie in `1..=63`.
    #[error("curve exponent must satisfy 1 <= k <= 63, got {0}")]
    InvalidExponent(u64),

    /// Visibility levels start at 1.
    #[error("visibility level must be at least 1, got {0}")]
    InvalidLevel(u64),

    /// No curve of the family passes through two points with equal abscissae.
    #[error("no curve with exponent {k} joins {base} to {target}: equal x coordinates")]
    VerticalPair {
        base: LatticePoint,
        target: LatticePoint,
        k: u32,
    },

    /// The visibility predicate is undefined when the two points share a
    /// coordinate (the coordinate differences feed `gcd_k`, which rejects
    /// zeros).
    #[error("visibility is undefined for {base} and {target}: shared coordinate")]
    SharedCoordinate {
        base: LatticePoint,
        target: LatticePoint,
    },

    /// A base set must contain at least one point.
    #[error("base set is empty")]
    EmptyBaseSet,

    /// Base sets are sets: repeated points are rejected rather than ignored.
    #[error("duplicate point {0} in base set")]
    DuplicatePoint(LatticePoint),

    /// Two base points share an x or y coordinate, so their mutual
    /// visibility is undefined.
    #[error("degenerate base pair {a}, {b}: shared coordinate")]
    DegenerateBasePair { a: LatticePoint, b: LatticePoint },

    /// Two base points fail mutual level-1 visibility (`gcd_k >= 2`).
    #[error("base pair {a}, {b} is not k-visible: gcd_k = {gcd}")]
    BasePairNotVisible {
        a: LatticePoint,
        b: LatticePoint,
        gcd: u64,
    },

    /// A parse failure in the base-set text format, with 1-based line number.
    #[error("base set parse error at line {line}: {message}")]
    BaseSetParse { line: usize, message: String },

    /// Arithmetic overflowed the widest integer type used internally.
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    /// The closed-form counting and density routines only implement levels 1
    /// and 2.
    #[error("{what} supports levels 1 and 2 only, got {level}")]
    UnsupportedLevel { what: &'static str, level: u64 },

    /// Density parameters must satisfy `1 <= N <= 2^(k+1)`.
    #[error("point count N = {n} out of range 1..=2^(k+1) = {bound} for k = {k}")]
    CardinalityOutOfRange { n: u64, bound: u128, k: u32 },

    /// A tolerance or other floating-point parameter was not a positive
    /// finite number.
    #[error("{what} must be positive and finite, got {value}")]
    InvalidTolerance { what: &'static str, value: f64 },

    /// A list argument violated its ordering contract.
    #[error("{0}")]
    InvalidArgument(&'static str),

    /// A requested computation exceeds a configured size guard.
    #[error("{what} = {requested} exceeds the configured limit {limit}")]
    LimitExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// A requested computation would allocate more memory than the guard
    /// allows.
    #[error("{what} would need {requested} bytes, over the {limit} byte limit")]
    MemoryLimit {
        what: &'static str,
        requested: u128,
        limit: u64,
    },
}

impl Error {
    /// True for errors caused by size or memory guards rather than by
    /// invalid input. Front ends report these separately (the bundled CLI
    /// exits 3 instead of 2).
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::LimitExceeded { .. } | Error::MemoryLimit { .. }
        )
    }
}
