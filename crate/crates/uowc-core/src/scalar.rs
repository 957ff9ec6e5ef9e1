//! Floating-point scalar abstraction.
//!
//! Every closed-form quantity in this crate is generic over [`Real`], so the
//! analytic layer runs in `f32` or `f64`. The Monte Carlo oracles and the CLI
//! pin `f64`; the concrete aliases at the crate root reflect that default.

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

/// Scalar type for the closed-form layer: `f32` or `f64`.
///
/// Special functions are evaluated in double precision and cast back, which
/// is exact for `f64` and strictly more accurate than a native single-precision
/// evaluation for `f32`.
pub trait Real:
    Float + FloatConst + FromPrimitive + core::fmt::Debug + core::fmt::Display + Send + Sync + 'static
{
    /// Cast a finite `f64` constant into this scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Widen to `f64` for double-precision kernels.
    #[inline]
    fn widen(self) -> f64 {
        self.to_f64().expect("scalar widens to f64")
    }

    /// Complementary error function `erfc(x) = 1 - erf(x)`.
    #[inline]
    fn erfc(self) -> Self {
        Self::of(crate::special::erfc(self.widen()))
    }

    /// Scaled complementary error function `erfcx(x) = exp(x²)·erfc(x)`, `x ≥ 0`.
    #[inline]
    fn erfcx(self) -> Self {
        Self::of(crate::special::erfcx(self.widen()))
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn casts_round_trip() {
        assert_eq!(f64::of(2.5), 2.5);
        assert_eq!(f32::of(2.5), 2.5f32);
        assert_eq!(1.25f64.widen(), 1.25);
        assert_eq!(1.25f32.widen(), 1.25);
    }

    #[test]
    fn erfc_dispatch_matches_f64_kernel() {
        let x = 0.75f32;
        let want = crate::special::erfc(0.75) as f32;
        assert_eq!(Real::erfc(x), want);
    }
}
