//! Nearest-neighbor distance law in a slab.
//!
//! Nodes form a planar Poisson process of intensity Λ with i.i.d. uniform
//! heights in `[0, R]`, i.e. a homogeneous 3D process of intensity Λ/R inside
//! the slab. The distance from the origin to the nearest node then has the
//! two-branch survival function
//!
//! ```text
//! S(s) = exp(-2πΛs³ / (3R))        0 ≤ s ≤ R   (ball ∩ slab is a hemisphere)
//! S(s) = exp(-πΛ(s² - R²/3))       s > R       (ball ∩ slab is a capped stack)
//! ```
//!
//! Both branches equal `exp(-2πΛR²/3)` at `s = R`. This module provides the
//! survival/CDF/PDF evaluators, exact inverse-CDF sampling support, the
//! expected vertical position of the nearest neighbor, and the mean
//! nearest-neighbor distance used by the density optimizer.

use crate::numeric::adaptive_simpson;
use crate::scalar::Real;

/// Internal quadrature tolerance; comfortably tighter than any documented
/// contract on the derived quantities.
const QUAD_REL_TOL: f64 = 1e-12;

/// Errors for distribution construction and evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    /// Λ or R not strictly positive (or not finite).
    #[error("{0} must be a finite positive number")]
    NonPositive(&'static str),
    /// Distance argument below zero.
    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),
    /// Probability argument outside `[0, 1)`.
    #[error("probability must lie in [0, 1), got {0}")]
    ProbabilityOutOfRange(f64),
}

/// Nearest-neighbor distance distribution for a `(Λ, R)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnDistribution<R: Real> {
    lambda_2d: R,
    slab_depth: R,
}

impl<R: Real> NnDistribution<R> {
    /// Build the distribution; both parameters must be finite and positive.
    pub fn new(lambda_2d: R, slab_depth: R) -> Result<Self, GeometryError> {
        if !(lambda_2d.is_finite() && lambda_2d > R::zero()) {
            return Err(GeometryError::NonPositive("lambda_2d"));
        }
        if !(slab_depth.is_finite() && slab_depth > R::zero()) {
            return Err(GeometryError::NonPositive("slab_depth"));
        }
        Ok(Self { lambda_2d, slab_depth })
    }

    /// Areal intensity Λ [nodes/m²].
    #[inline]
    pub fn lambda_2d(&self) -> R {
        self.lambda_2d
    }

    /// Slab depth R [m].
    #[inline]
    pub fn slab_depth(&self) -> R {
        self.slab_depth
    }

    #[inline]
    fn check_distance(&self, s: R) -> Result<(), GeometryError> {
        if s < R::zero() || s.is_nan() {
            return Err(GeometryError::NegativeDistance(s.widen()));
        }
        Ok(())
    }

    /// Survival branch without the domain check, for internal quadrature.
    #[inline]
    fn survival_raw(&self, s: R) -> R {
        let lam = self.lambda_2d;
        let depth = self.slab_depth;
        let two_pi = R::of(2.0) * R::PI();
        if s <= depth {
            (-(two_pi * lam * s * s * s) / (R::of(3.0) * depth)).exp()
        } else {
            (-R::PI() * lam * (s * s - depth * depth / R::of(3.0))).exp()
        }
    }

    /// `P(L_dis > s)`: probability that the nearest neighbor is farther than `s`.
    pub fn survival(&self, s: R) -> Result<R, GeometryError> {
        self.check_distance(s)?;
        Ok(self.survival_raw(s))
    }

    /// `P(L_dis ≤ s) = 1 - S(s)`.
    pub fn cdf(&self, s: R) -> Result<R, GeometryError> {
        Ok(R::one() - self.survival(s)?)
    }

    /// Probability density of the nearest-neighbor distance [1/m]:
    /// `2πΛs²/R · S(s)` on the hemisphere branch, `2πΛs · S(s)` beyond it.
    pub fn pdf(&self, s: R) -> Result<R, GeometryError> {
        self.check_distance(s)?;
        let lam = self.lambda_2d;
        let depth = self.slab_depth;
        let two_pi = R::of(2.0) * R::PI();
        let prefactor = if s <= depth { two_pi * lam * s * s / depth } else { two_pi * lam * s };
        Ok(prefactor * self.survival_raw(s))
    }

    /// Exact inverse CDF: the unique `s ≥ 0` with `cdf(s) = u`, for `u ∈ [0, 1)`.
    ///
    /// Inverts the hemisphere branch (cube root) when
    /// `-ln(1-u) ≤ 2πΛR²/3`, the cap branch (square root) otherwise.
    pub fn inverse_cdf(&self, u: R) -> Result<R, GeometryError> {
        if !(u >= R::zero() && u < R::one()) {
            return Err(GeometryError::ProbabilityOutOfRange(u.widen()));
        }
        let lam = self.lambda_2d;
        let depth = self.slab_depth;
        let two_pi = R::of(2.0) * R::PI();
        let t = -(R::one() - u).ln();
        let knee = two_pi * lam * depth * depth / R::of(3.0);
        if t <= knee {
            Ok((R::of(3.0) * depth * t / (two_pi * lam)).cbrt())
        } else {
            Ok((t / (R::PI() * lam) + depth * depth / R::of(3.0)).sqrt())
        }
    }

    /// Expected vertical position of the nearest neighbor,
    /// `E[Z₀] = ½ ∫₀ᴿ S(s) ds`, by adaptive quadrature. Lies in `(0, R/2]`.
    pub fn expected_link_depth(&self) -> R {
        self.branch1_integral() / R::of(2.0)
    }

    /// Mean nearest-neighbor distance `E[L_dis] = ∫₀^∞ S(s) ds`.
    ///
    /// The hemisphere branch is integrated adaptively; the tail has the
    /// closed form `exp(-2πΛR²/3)·erfcx(√(πΛ)·R) / (2√Λ)`, written with the
    /// scaled complementary error function so that large `ΛR²` underflows
    /// gracefully instead of producing `∞·0`.
    pub fn mean_distance(&self) -> R {
        self.branch1_integral() + self.tail_integral()
    }

    /// `∫₀ᴿ S(s) ds` (hemisphere branch).
    fn branch1_integral(&self) -> R {
        adaptive_simpson(
            |s| self.survival_raw(s),
            R::zero(),
            self.slab_depth,
            R::of(QUAD_REL_TOL),
        )
    }

    /// `∫ᴿ^∞ S(s) ds` in closed form.
    fn tail_integral(&self) -> R {
        let lam = self.lambda_2d;
        let depth = self.slab_depth;
        let two = R::of(2.0);
        let x = (R::PI() * lam).sqrt() * depth;
        let damp = (-(two * R::PI() * lam * depth * depth) / R::of(3.0)).exp();
        damp * x.erfcx() / (two * lam.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist() -> NnDistribution<f64> {
        NnDistribution::new(1e-3, 50.0).unwrap()
    }

    fn assert_rel(got: f64, want: f64, tol: f64) {
        assert!(
            ((got - want) / want).abs() < tol,
            "got {got:e}, want {want:e}, rel {:.2e}",
            ((got - want) / want).abs()
        );
    }

    #[test]
    fn survival_matches_direct_evaluation() {
        let d = dist();
        assert_eq!(d.survival(0.0).unwrap(), 1.0);
        // exp(-2π/150)
        assert_rel(d.survival(10.0).unwrap(), 0.958_977_273_936_032_3, 1e-14);
        // exp(-π·0.001·(3600 - 2500/3))
        assert_rel(d.survival(60.0).unwrap(), 1.679_675_629_415_546_3e-4, 1e-13);
        assert!(d.survival(-1.0).is_err());
    }

    #[test]
    fn pdf_matches_direct_evaluation() {
        let d = dist();
        assert_eq!(d.pdf(0.0).unwrap(), 0.0);
        assert_rel(d.pdf(10.0).unwrap(), 0.012_050_863_835_028_023, 1e-13);
        assert_rel(d.pdf(60.0).unwrap(), 6.332_227_941_342_831e-5, 1e-13);
        assert!(d.pdf(-0.1).is_err());
    }

    #[test]
    fn cdf_complements_survival() {
        let d = dist();
        assert_eq!(d.cdf(0.0).unwrap(), 0.0);
        assert_rel(d.cdf(10.0).unwrap(), 0.041_022_726_063_967_73, 1e-12);
        assert!(d.cdf(1e9).unwrap() > 1.0 - 1e-12, "cdf tends to 1");
    }

    #[test]
    fn inverse_cdf_median_and_branches() {
        let d = dist();
        assert_eq!(d.inverse_cdf(0.0).unwrap(), 0.0);
        // (3R ln2 / (2πΛ))^{1/3}
        assert_rel(d.inverse_cdf(0.5).unwrap(), 25.482_710_315_636_883, 1e-13);
        // deep quantile lands on the cap branch and round-trips through the CDF
        let s = d.inverse_cdf(0.999).unwrap();
        assert!(s > d.slab_depth());
        assert!((d.cdf(s).unwrap() - 0.999).abs() < 1e-12);
        assert!(d.inverse_cdf(1.0).is_err());
        assert!(d.inverse_cdf(-0.01).is_err());
    }

    #[test]
    fn expected_depth_matches_quadrature_reference() {
        assert_rel(dist().expected_link_depth(), 12.848_651_984_236_85, 1e-10);
    }

    #[test]
    fn expected_depth_limits() {
        // Λ → 0: integrand → 1, E[Z₀] → R/2
        let d = NnDistribution::new(1e-15, 50.0).unwrap();
        assert_rel(d.expected_link_depth(), 25.0, 1e-6);
        // Λ large: collapses toward 0 (scale Γ(4/3)·(3R/2πΛ)^{1/3}/2 ≈ 0.013)
        let d = NnDistribution::new(1e6, 50.0).unwrap();
        assert!(d.expected_link_depth() < 2e-2);
    }

    #[test]
    fn mean_distance_matches_reference_split() {
        let d = dist();
        assert_rel(d.mean_distance(), 25.713_324_142_937_907, 1e-10);
        // identity E[L] ≥ 2·E[Z₀] (tail mass is non-negative)
        assert!(d.mean_distance() >= 2.0 * d.expected_link_depth());
    }

    #[test]
    fn mean_distance_survives_extreme_scales() {
        // huge ΛR²: the tail underflows to zero instead of NaN
        let d = NnDistribution::<f64>::new(0.1, 6000.0).unwrap();
        let mean = d.mean_distance();
        assert!(mean.is_finite() && mean > 0.0);
        // Λ → large shrinks the mean
        let d2 = NnDistribution::new(10.0, 6000.0).unwrap();
        assert!(d2.mean_distance() < mean);
    }

    #[test]
    fn constructor_rejects_degenerate_input() {
        assert!(NnDistribution::new(0.0, 50.0).is_err());
        assert!(NnDistribution::new(1e-3, -2.0).is_err());
        assert!(NnDistribution::new(f64::NAN, 50.0).is_err());
    }

    #[test]
    fn works_in_f32() {
        let d = NnDistribution::new(1e-3f32, 50.0).unwrap();
        assert!((d.survival(10.0).unwrap() - 0.958_977_3).abs() < 1e-5);
        assert!((d.expected_link_depth() - 12.848_65).abs() < 1e-3);
    }
}
