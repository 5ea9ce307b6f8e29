//! Exact arithmetic helpers: big rationals, powers of two and sixteen,
//! and rationals extended with a point at infinity.
//!
//! The level-graph weights and the renormalized level values must be
//! manipulated without rounding — per-level weight sums are checked for
//! exact equality with 1, and level values grow like 16^(n²), far beyond
//! any fixed-width range.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = BigRational;

/// Integer as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num/den` as an exact rational; panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact 2^k for any sign of k.
pub fn pow2(k: i64) -> Rat {
    let mag = BigInt::one() << k.unsigned_abs() as usize;
    if k >= 0 {
        Rat::from_integer(mag)
    } else {
        Rat::new(BigInt::one(), mag)
    }
}

/// Exact 16^k for any sign of k.
pub fn pow16(k: i64) -> Rat {
    pow2(4 * k)
}

/// Lossy conversion for float-path cross-checks. Values outside the f64
/// range collapse to ±inf, which is what the float path wants.
pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Render as "num/den" (or just "num" when integral) for reports.
pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A nonnegative rational extended with +∞, ordered in the obvious way.
/// Used for annulus level bounds (a cusp has lower bound 0, an anticusp
/// upper bound ∞) and for interval endpoints in coverage bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ext {
    Finite(Rat),
    Inf,
}

impl Ext {
    pub fn zero() -> Self {
        Ext::Finite(Rat::zero())
    }

    pub fn finite(x: Rat) -> Self {
        Ext::Finite(x)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Ext::Inf)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            Ext::Finite(x) => Some(x),
            Ext::Inf => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Ext::Finite(x) => rat_to_f64(x),
            Ext::Inf => f64::INFINITY,
        }
    }

    /// `self - other`, with ∞ - finite = ∞. ∞ - ∞ is not needed and panics.
    pub fn sub(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a - b),
            (Ext::Inf, Ext::Finite(_)) => Ext::Inf,
            _ => panic!("unsupported extended subtraction"),
        }
    }

    /// Scale by a finite positive rational; ∞ stays ∞.
    pub fn scale(&self, s: &Rat) -> Ext {
        match self {
            Ext::Finite(a) => Ext::Finite(a * s),
            Ext::Inf => Ext::Inf,
        }
    }

    pub fn min(self, other: Ext) -> Ext {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.cmp(b),
            (Ext::Finite(_), Ext::Inf) => Ordering::Less,
            (Ext::Inf, Ext::Finite(_)) => Ordering::Greater,
            (Ext::Inf, Ext::Inf) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(x) => write!(f, "{}", rat_to_string(x)),
            Ext::Inf => write!(f, "inf"),
        }
    }
}

/// Exponent E(n) of the level renormalization 16^E(n) with E(n) = n(|n|+ν).
/// Stored as an integer so the scale never leaves exact arithmetic.
pub fn level_scale_exponent(n: i64, nu: u32) -> i64 {
    n * (n.abs() + i64::from(nu))
}

/// The renormalized level value 16^(n(|n|+ν)) as an exact rational.
pub fn level_scale(n: i64, nu: u32) -> Rat {
    pow16(level_scale_exponent(n, nu))
}

/// Same value in log₂ form, for float-path work: log₂ φ(n) = 4·n(|n|+ν).
pub fn level_scale_log2(n: i64, nu: u32) -> f64 {
    4.0 * level_scale_exponent(n, nu) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_are_exact() {
        assert_eq!(pow2(10), rat_int(1024));
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(pow16(2), rat_int(256));
        assert_eq!(pow16(-2), rat(1, 256));
    }

    #[test]
    fn scale_matches_hand_values() {
        // n=0 → 1; n=1, ν=1 → 16²=256; n=−1, ν=1 → 16^−2 = 1/256.
        assert_eq!(level_scale(0, 1), rat_int(1));
        assert_eq!(level_scale(1, 1), rat_int(256));
        assert_eq!(level_scale(-1, 1), rat(1, 256));
        assert_eq!(level_scale_exponent(3, 2), 15);
        assert_eq!(level_scale_exponent(-3, 2), -15);
    }

    #[test]
    fn scale_ratio_growth_bound() {
        // Consecutive scale values satisfy φ(n) ≥ 2^(|n|+4+ν) φ(n−1):
        // the margin that drives the downstream weighted-value bound.
        for nu in 1..4u32 {
            for n in -12i64..=12 {
                let lhs = level_scale(n, nu);
                let rhs = pow2(n.abs() + 4 + i64::from(nu)) * level_scale(n - 1, nu);
                assert!(lhs >= rhs, "n={n} nu={nu}");
            }
        }
    }

    #[test]
    fn extended_order_and_ops() {
        let a = Ext::finite(rat(1, 2));
        let b = Ext::finite(rat_int(3));
        assert!(a < b && b < Ext::Inf);
        assert_eq!(b.sub(&a), Ext::finite(rat(5, 2)));
        assert_eq!(Ext::Inf.sub(&b), Ext::Inf);
        assert_eq!(b.scale(&rat(1, 3)), Ext::finite(rat_int(1)));
        assert!(Ext::Inf.scale(&rat(7, 2)).is_inf());
        assert_eq!(rat_to_string(&rat(5, 2)), "5/2");
        assert_eq!(rat_to_string(&rat_int(-4)), "-4");
    }
}
