// SPDX-License-Identifier: Apache-2.0

//! Numeric types used for heuristic scores.
//!
//! Routing only ever adds, multiplies and divides small rationals (distances,
//! set sizes, the lookahead weight and the decay rate), so the router is
//! generic over the score type. `f64` is the default; `Rational64` gives exact
//! tie detection, which is what the golden tests use.

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    /// Whether two scores are tied for the purpose of SWAP selection.
    fn ties(self, other: Self) -> bool;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in score type")
    }

    /// `num / den` computed in the scalar type, exact for rationals.
    fn ratio(num: u32, den: u32) -> Self {
        Self::from_u32(num).expect("small integer") / Self::from_u32(den).expect("small integer")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Absolute tolerance used for tie detection on `f64` scores.
pub const F64_TIE_EPSILON: f64 = 1e-9;
/// `f32` cannot resolve 1e-9 around scores of order 1, so it uses a looser band.
pub const F32_TIE_EPSILON: f32 = 1e-5;

impl Scalar for f64 {
    fn ties(self, other: Self) -> bool {
        (self - other).abs() <= F64_TIE_EPSILON
    }
}

impl Scalar for f32 {
    fn ties(self, other: Self) -> bool {
        (self - other).abs() <= F32_TIE_EPSILON
    }
}

impl Scalar for Rational64 {
    fn ties(self, other: Self) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_ratio_is_exact() {
        let d = Rational64::ratio(1, 1000);
        assert_eq!(d * Rational64::from_integer(1000), Rational64::from_integer(1));
        assert!(!(Rational64::from_integer(1) + d).ties(Rational64::from_integer(1)));
    }

    #[test]
    fn float_ties_use_epsilon() {
        assert!(1.0f64.ties(1.0 + 1e-12));
        assert!(!1.0f64.ties(1.001));
        assert!(1.0f32.ties(1.0 + 1e-7));
    }
}
