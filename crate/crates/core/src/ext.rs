//! Extended reals: finite values together with the two infinities.
//!
//! Spectral edges of acyclic complexes degenerate to `-inf`/`inf`, so every
//! invariant computation threads through this type. Internally it is a
//! non-NaN `f64`; `inf + (-inf)` is a checked error rather than a NaN.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("indeterminate extended-real arithmetic: inf + (-inf)")]
pub struct IndeterminateSum;

/// An element of R ∪ {-inf, inf}. Total order; never NaN.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

pub const NEG_INF: ExtReal = ExtReal(f64::NEG_INFINITY);
pub const INF: ExtReal = ExtReal(f64::INFINITY);

impl ExtReal {
    pub fn finite(value: f64) -> ExtReal {
        assert!(value.is_finite(), "ExtReal::finite needs a finite value");
        ExtReal(value)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Raw value; infinite variants map to the f64 infinities.
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn as_finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    pub fn checked_add(self, rhs: ExtReal) -> Result<ExtReal, IndeterminateSum> {
        let s = self.0 + rhs.0;
        if s.is_nan() {
            Err(IndeterminateSum)
        } else {
            Ok(ExtReal(s))
        }
    }

    pub fn checked_sub(self, rhs: ExtReal) -> Result<ExtReal, IndeterminateSum> {
        self.checked_add(ExtReal(-rhs.0))
    }

    pub fn max(self, rhs: ExtReal) -> ExtReal {
        ExtReal(self.0.max(rhs.0))
    }

    pub fn min(self, rhs: ExtReal) -> ExtReal {
        ExtReal(self.0.min(rhs.0))
    }

    /// `self <= rhs + tol`, with the tolerance applied only to finite-finite
    /// comparisons; infinite sides compare exactly.
    pub fn le_with_tol(self, rhs: ExtReal, tol: f64) -> bool {
        if self.is_finite() && rhs.is_finite() {
            self.0 <= rhs.0 + tol
        } else {
            self.0 <= rhs.0
        }
    }

    /// |self - rhs| <= bound, treating equal infinities as distance zero.
    pub fn abs_diff_le(self, rhs: ExtReal, bound: f64, tol: f64) -> bool {
        if self.0 == rhs.0 {
            return true;
        }
        if !self.is_finite() || !rhs.is_finite() {
            return false;
        }
        (self.0 - rhs.0).abs() <= bound + tol
    }
}

impl From<f64> for ExtReal {
    fn from(value: f64) -> Self {
        assert!(!value.is_nan(), "ExtReal cannot hold NaN");
        ExtReal(value)
    }
}

impl Eq for ExtReal {}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", render(self.0))
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", render(self.0))
    }
}

/// Render for reports: infinities as "inf"/"-inf", grid rationals as plain
/// decimal literals (no exponents, no trailing ".0").
pub fn render(value: f64) -> String {
    if value == f64::INFINITY {
        "inf".to_string()
    } else if value == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if value == value.trunc() && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            serializer.serialize_f64(self.0)
        } else {
            serializer.serialize_str(if self.0 > 0.0 { "inf" } else { "-inf" })
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) if !v.is_nan() => Ok(ExtReal(v)),
            Repr::Num(_) => Err(D::Error::custom("NaN is not an extended real")),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(INF),
                "-inf" => Ok(NEG_INF),
                other => Err(D::Error::custom(format!("bad extended real: {other:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_order() {
        let two = ExtReal::finite(2.0);
        assert_eq!(two.checked_add(NEG_INF).unwrap(), NEG_INF);
        assert_eq!(two.checked_add(INF).unwrap(), INF);
        assert!(INF.checked_add(NEG_INF).is_err());
        assert!(NEG_INF < two && two < INF);
    }

    #[test]
    fn rendering() {
        assert_eq!(render(3.0), "3");
        assert_eq!(render(0.5), "0.5");
        assert_eq!(render(f64::INFINITY), "inf");
        assert_eq!(render(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn serde_round_trip() {
        for v in [NEG_INF, INF, ExtReal::finite(1.5)] {
            let s = serde_json::to_string(&v).unwrap();
            let back: ExtReal = serde_json::from_str(&s).unwrap();
            assert_eq!(v, back);
        }
    }
}
