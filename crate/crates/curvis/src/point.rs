use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A point of the integer lattice `Z^2`.
///
/// Coordinates are plain `i64`; everything downstream widens to `i128` (or
/// unsigned magnitudes) before subtracting, so the full coordinate range is
/// usable without overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub u: i64,
    pub v: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { u: 0, v: 0 };

    pub const fn new(u: i64, v: i64) -> Self {
        LatticePoint { u, v }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((u, v): (i64, i64)) -> Self {
        LatticePoint::new(u, v)
    }
}

impl FromStr for LatticePoint {
    type Err = Error;

    /// Parses `"u v"`: two decimal integers separated by whitespace. This is
    /// one line of the base-set text format.
    fn from_str(s: &str) -> Result<Self, Error> {
        let err = |message: String| Error::BaseSetParse { line: 0, message };
        let mut fields = s.split_whitespace();
        let u = fields
            .next()
            .ok_or_else(|| err("expected `u v`, got an empty entry".into()))?;
        let v = fields
            .next()
            .ok_or_else(|| err(format!("expected `u v`, got only `{u}`")))?;
        if let Some(extra) = fields.next() {
            return Err(err(format!("unexpected trailing field `{extra}`")));
        }
        let parse = |field: &str| {
            field
                .parse::<i64>()
                .map_err(|e| err(format!("bad integer `{field}`: {e}")))
        };
        Ok(LatticePoint::new(parse(u)?, parse(v)?))
    }
}
