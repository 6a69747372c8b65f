//! Shared check records: every verified inequality is reported as a labeled
//! lhs/rhs pair so reports can show both sides and the slack.

use serde::Serialize;

use crate::ext::ExtReal;

/// Tolerance applied to finite inequality comparisons. Filtration values live
/// on small rational grids, so this only has to absorb summation of shifts.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub lhs: ExtReal,
    pub rhs: ExtReal,
    pub ok: bool,
    /// True when an infinite side means the finite-form inequality never
    /// applied; counted separately, never as a finite-form pass.
    pub vacuous: bool,
    /// Equality checks carry no slack worth reporting.
    #[serde(skip)]
    pub equality: bool,
}

impl Check {
    /// lhs ≤ rhs up to tolerance on finite comparisons.
    pub fn le<S: Into<String>>(label: S, lhs: ExtReal, rhs: ExtReal, tol: f64) -> Check {
        Check {
            label: label.into(),
            lhs,
            rhs,
            ok: lhs.le_with_tol(rhs, tol),
            vacuous: !lhs.is_finite() || !rhs.is_finite(),
            equality: false,
        }
    }

    /// |a − b| ≤ bound; equal infinities count as distance zero (and as a
    /// vacuous comparison), mismatched infinities fail.
    pub fn abs_diff_le<S: Into<String>>(
        label: S,
        a: ExtReal,
        b: ExtReal,
        bound: f64,
        tol: f64,
    ) -> Check {
        let vacuous = !a.is_finite() || !b.is_finite();
        let (lhs, ok) = if a == b {
            (ExtReal::finite(0.0), true)
        } else if vacuous {
            (crate::ext::INF, false)
        } else {
            let d = (a.value() - b.value()).abs();
            (ExtReal::finite(d), d <= bound + tol)
        };
        Check { label: label.into(), lhs, rhs: ExtReal::finite(bound), ok, vacuous, equality: false }
    }

    /// Exact equality (grid arithmetic only).
    pub fn eq<S: Into<String>>(label: S, lhs: ExtReal, rhs: ExtReal) -> Check {
        Check { label: label.into(), lhs, rhs, ok: lhs == rhs, vacuous: false, equality: true }
    }

    /// rhs − lhs when both sides are finite; equality checks report none.
    pub fn slack(&self) -> Option<f64> {
        if self.equality {
            return None;
        }
        match (self.lhs.as_finite(), self.rhs.as_finite()) {
            (Some(l), Some(r)) => Some(r - l),
            _ => None,
        }
    }
}
