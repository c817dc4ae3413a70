//! Degrees with a minus-infinity sentinel for the zero polynomial.

use std::fmt;

/// Degree of a polynomial in one variable or in total.
///
/// The zero polynomial has degree [`Degree::NegInfinity`], which orders below
/// every finite degree, so degree-drop statements hold literally even when an
/// iterate collapses to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(i64),
}

impl Degree {
    pub fn finite(n: u64) -> Degree {
        Degree::Finite(n as i64)
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, Degree::NegInfinity)
    }

    pub fn as_finite(self) -> Option<i64> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(n) => Some(n),
        }
    }

    /// Finite value, with the zero polynomial counted as degree zero. This is
    /// the measure used by reduction ledgers, which live in the naturals.
    pub fn clamp_zero(self) -> u64 {
        match self {
            Degree::NegInfinity => 0,
            Degree::Finite(n) => n.max(0) as u64,
        }
    }
}

impl From<u64> for Degree {
    fn from(n: u64) -> Degree {
        Degree::finite(n)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(n) => write!(f, "{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_orders_below_everything() {
        assert!(Degree::NegInfinity < Degree::Finite(i64::MIN));
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert!(Degree::Finite(1) < Degree::Finite(2));
        assert_eq!(Degree::NegInfinity.clamp_zero(), 0);
        assert_eq!(Degree::Finite(3).clamp_zero(), 3);
    }
}
