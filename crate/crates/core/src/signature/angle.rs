use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::Rat;

/// A point `e^{2πiθ}` of the unit circle, stored as the reduced fraction
/// `θ ∈ [0, 1)` of a full turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitAngle(Rat);

impl UnitAngle {
    pub const ZERO: UnitAngle = UnitAngle(Rat::new_raw(0, 1));

    /// `num/den` reduced mod 1. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-(num as i128), -(den as i128)) } else { (num as i128, den as i128) };
        let r = num.rem_euclid(den);
        let g = r.gcd(&den);
        UnitAngle(Rat::new_raw((r / g) as i64, (den / g) as i64))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::new(*r.numer(), *r.denom())
    }

    pub fn turns(&self) -> Rat {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `kθ mod 1`.
    pub fn times(&self, k: i64) -> Self {
        let n = (self.numer() as i128 * k as i128).rem_euclid(self.denom() as i128);
        Self::new(n as i64, self.denom())
    }

    /// `1 − θ mod 1`, the complex conjugate point.
    pub fn conj(&self) -> Self {
        Self::new(-self.numer(), self.denom())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for UnitAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid angle `{0}`, expected num/den")]
pub struct AngleParseError(pub String);

impl FromStr for UnitAngle {
    type Err = AngleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AngleParseError(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim().parse().map_err(|_| err())?, d.trim().parse().map_err(|_| err())?),
            None => (s.trim().parse().map_err(|_| err())?, 1),
        };
        if d == 0 {
            return Err(err());
        }
        Ok(UnitAngle::new(n, d))
    }
}
