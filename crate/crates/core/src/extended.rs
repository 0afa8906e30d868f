//! Real numbers extended with `-∞` and `+∞`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A point of `ℝ ∪ {-∞, +∞}`.
///
/// Finite values are never NaN or infinite; the constructor enforces this,
/// which makes the ordering total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

use ExtendedReal::*;

impl ExtendedReal {
    pub const ZERO: ExtendedReal = Finite(0.0);

    /// Maps `±inf` to the corresponding infinity; NaN is rejected.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(domain("NaN is not an extended real"))
        } else if x == f64::INFINITY {
            Ok(PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(NegInf)
        } else {
            Ok(Finite(x))
        }
    }

    /// Infinity with the sign of `s` (`s` must be nonzero).
    pub fn infinity(s: f64) -> Self {
        if s > 0.0 {
            PosInf
        } else {
            NegInf
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Finite(v) => Some(v),
            _ => None,
        }
    }

    /// `f64` image, with infinities mapped to `f64` infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            NegInf => f64::NEG_INFINITY,
            Finite(v) => v,
            PosInf => f64::INFINITY,
        }
    }

    /// `-1`, `0` or `1`.
    pub fn signum(self) -> f64 {
        match self {
            NegInf => -1.0,
            PosInf => 1.0,
            Finite(v) if v > 0.0 => 1.0,
            Finite(v) if v < 0.0 => -1.0,
            Finite(_) => 0.0,
        }
    }

    pub fn abs(self) -> Self {
        match self {
            Finite(v) => Finite(v.abs()),
            _ => PosInf,
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::Indeterminate("inf - inf")),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.checked_add(-rhs)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a * b)),
            _ => {
                let s = self.signum() * rhs.signum();
                if s == 0.0 {
                    Err(Error::Indeterminate("0 * inf"))
                } else {
                    Ok(Self::infinity(s))
                }
            }
        }
    }

    /// `1/x`, with `1/±∞ = 0`. Division by zero is rejected because the sign
    /// of the resulting infinity is not determined.
    pub fn checked_recip(self) -> Result<Self> {
        match self {
            Finite(v) if v == 0.0 => Err(Error::Indeterminate("1 / 0")),
            Finite(v) => Ok(Finite(1.0 / v)),
            _ => Ok(Finite(0.0)),
        }
    }
}

impl std::ops::Neg for ExtendedReal {
    type Output = Self;
    fn neg(self) -> Self {
        match self {
            NegInf => PosInf,
            Finite(v) => Finite(-v),
            PosInf => NegInf,
        }
    }
}

impl Eq for ExtendedReal {}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.total_cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            Finite(v) => write!(f, "{v}"),
            PosInf => f.write_str("inf"),
        }
    }
}
