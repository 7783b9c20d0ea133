use std::fmt;

use crate::error::Error;

/// An exact rational number in lowest terms with a positive denominator.
///
/// This is deliberately minimal: the crate only needs to report curve
/// coefficients exactly, not to do rational arithmetic. Construction reduces
/// by the gcd and normalizes the sign into the numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };

    /// Reduces `num/den` to lowest terms. A zero denominator is rejected.
    pub fn new(num: i128, den: i128) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::InvalidArgument("rational denominator is zero"));
        }
        if num == 0 {
            return Ok(Rational::ZERO);
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs());
        // |num|, |den| >= g, so the divisions are exact and cannot overflow;
        // the only i128 edge (negating i128::MIN) cannot arise after the
        // division because g >= 1 and i128::MIN.unsigned_abs() is even ...
        // except for g == 1. Divide on magnitudes to stay safe everywhere.
        let sign = (num < 0) != (den < 0);
        let na = (num.unsigned_abs() / g) as i128;
        let da = (den.unsigned_abs() / g) as i128;
        if na < 0 || da < 0 {
            // Magnitude i128::MIN / 1 would not fit back into i128.
            return Err(Error::Overflow("rational normalization"));
        }
        Ok(Rational {
            num: if sign { -na } else { na },
            den: da,
        })
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    /// Always positive.
    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl fmt::Display for Rational {
    /// Integers print bare; everything else prints `num/den`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
