//! Deterministic single-ray channel quantities: Lambertian order,
//! Beer-Lambert path loss, concentrator gain, and the LOS channel DC gain
//!
//! ```text
//! H = (m+1)/(2πL²) · cosᵐθ · cosψ · T_s · g(ψ) · e^{-cL}
//! ```
//!
//! with `g(ψ) = n²/sin²(φ_FoV)` inside the field of view and zero outside.
//! Received power is `P_Tx · H`.

use crate::config::SystemParams;
use crate::scalar::Real;

/// Domain errors for the single-ray formulas.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChannelError {
    /// Angle or length outside its admissible interval.
    #[error("{name} out of range: {value} not in {bounds}")]
    OutOfRange {
        /// Parameter name.
        name: &'static str,
        /// Offending value (as f64).
        value: f64,
        /// Human-readable interval.
        bounds: &'static str,
    },
}

fn out_of_range<R: Real>(name: &'static str, value: R, bounds: &'static str) -> ChannelError {
    ChannelError::OutOfRange { name, value: value.widen(), bounds }
}

/// A single transmitter-receiver ray.
///
/// The irradiance angle may reach `π`: a receiver behind the emission
/// hemisphere is a valid geometry that simply carries no power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayGeometry<R: Real> {
    /// Angle of irradiance θ at the transmitter [rad], in `[0, π]`.
    pub irradiance_angle: R,
    /// Angle of incidence ψ at the receiver [rad], in `[0, π]`.
    pub incidence_angle: R,
    /// Euclidean link length [m], strictly positive.
    pub link_length: R,
}

impl<R: Real> RayGeometry<R> {
    /// Validate and build a ray.
    pub fn new(irradiance_angle: R, incidence_angle: R, link_length: R) -> Result<Self, ChannelError> {
        if !(irradiance_angle >= R::zero() && irradiance_angle <= R::PI()) {
            return Err(out_of_range("irradiance_angle", irradiance_angle, "[0, pi]"));
        }
        if !(incidence_angle >= R::zero() && incidence_angle <= R::PI()) {
            return Err(out_of_range("incidence_angle", incidence_angle, "[0, pi]"));
        }
        if !(link_length.is_finite() && link_length > R::zero()) {
            return Err(out_of_range("link_length", link_length, "(0, inf)"));
        }
        Ok(Self { irradiance_angle, incidence_angle, link_length })
    }
}

/// Lambertian emission order `m = -ln 2 / ln cos φ₁⁄₂` for `φ₁⁄₂ ∈ (0, π/2)`.
pub fn lambertian_order<R: Real>(phi_half: R) -> Result<R, ChannelError> {
    if !(phi_half > R::zero() && phi_half < R::FRAC_PI_2()) {
        return Err(out_of_range("phi_half", phi_half, "(0, pi/2)"));
    }
    let m = -R::LN_2() / phi_half.cos().ln();
    if !(m.is_finite() && m > R::zero()) {
        return Err(out_of_range("phi_half", phi_half, "(0, pi/2) with finite order"));
    }
    Ok(m)
}

/// Beer-Lambert path loss `e^{-cL}` for `c ≥ 0`, `L ≥ 0`.
pub fn path_loss<R: Real>(extinction: R, length: R) -> Result<R, ChannelError> {
    if !(extinction >= R::zero()) {
        return Err(out_of_range("extinction", extinction, "[0, inf)"));
    }
    if !(length >= R::zero()) {
        return Err(out_of_range("length", length, "[0, inf)"));
    }
    Ok((-extinction * length).exp())
}

/// Ideal non-imaging concentrator gain: `n²/sin²(φ_FoV)` for `0 ≤ ψ ≤ φ_FoV`
/// (boundary inclusive), zero beyond the field of view.
pub fn concentrator_gain<R: Real>(psi: R, refractive_index: R, fov_semi_angle: R) -> R {
    if psi <= fov_semi_angle {
        let s = fov_semi_angle.sin();
        refractive_index * refractive_index / (s * s)
    } else {
        R::zero()
    }
}

/// Total LOS channel DC gain for one ray.
///
/// Zero whenever the ray falls outside the field of view or behind the
/// emission hemisphere (`cos θ ≤ 0`); `cosᵐθ` with fractional `m` is only
/// evaluated on the open hemisphere where it is well defined.
pub fn los_channel_gain<R: Real>(
    geom: &RayGeometry<R>,
    params: &SystemParams<R>,
) -> Result<R, ChannelError> {
    let m = lambertian_order(params.phi_half())?;
    let cos_theta = geom.irradiance_angle.cos();
    if cos_theta <= R::zero() {
        return Ok(R::zero());
    }
    let g = concentrator_gain(
        geom.incidence_angle,
        params.concentrator_index(),
        params.fov_semi_angle(),
    );
    if g == R::zero() {
        return Ok(R::zero());
    }
    let length = geom.link_length;
    let two_pi = R::of(2.0) * R::PI();
    let spread = (m + R::one()) / (two_pi * length * length);
    let loss = path_loss(params.extinction(), length)?;
    Ok(spread
        * cos_theta.powf(m)
        * geom.incidence_angle.cos()
        * params.filter_transmittance()
        * g
        * loss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{validate_params, RawParams};

    fn params() -> SystemParams<f64> {
        validate_params(&RawParams::default()).unwrap()
    }

    fn assert_rel(got: f64, want: f64, tol: f64) {
        assert!(
            ((got - want) / want).abs() < tol,
            "got {got:e}, want {want:e}"
        );
    }

    #[test]
    fn lambertian_order_reference_angles() {
        assert_rel(lambertian_order(60f64.to_radians()).unwrap(), 1.0, 1e-14);
        assert_rel(lambertian_order(45f64.to_radians()).unwrap(), 2.0, 1e-14);
        assert_rel(lambertian_order(30f64.to_radians()).unwrap(), 4.818_841_679_306_42, 1e-13);
        assert!(lambertian_order(0.0).is_err());
        assert!(lambertian_order(core::f64::consts::FRAC_PI_2).is_err());
    }

    #[test]
    fn path_loss_reference() {
        assert_eq!(path_loss(0.151, 0.0).unwrap(), 1.0);
        assert_eq!(path_loss(0.0, 123.0).unwrap(), 1.0);
        assert_rel(path_loss(0.151, 20.0).unwrap(), 0.048_801_218_362_012_96, 1e-14);
        assert!(path_loss(-0.1, 1.0).is_err());
        assert!(path_loss(0.1, -1.0).is_err());
    }

    #[test]
    fn concentrator_gain_boundary_inclusive() {
        let fov = 120f64.to_radians();
        assert_rel(concentrator_gain(0.0, 1.5, fov), 3.0, 1e-14);
        assert_rel(concentrator_gain(fov, 1.5, fov), 3.0, 1e-14);
        assert_eq!(concentrator_gain(fov + 0.01, 1.5, fov), 0.0);
    }

    #[test]
    fn los_gain_reference_ray() {
        // θ=0, ψ=0, L=20 with the reference parameter set (m=1, g=3)
        let geom = RayGeometry::new(0.0, 0.0, 20.0).unwrap();
        assert_rel(los_channel_gain(&geom, &params()).unwrap(), 1.165_043_269_683_199_3e-4, 1e-12);
    }

    #[test]
    fn los_gain_cutoffs() {
        let p = params();
        // outside the field of view
        let geom = RayGeometry::new(0.3, 121f64.to_radians(), 20.0).unwrap();
        assert_eq!(los_channel_gain(&geom, &p).unwrap(), 0.0);
        // θ = 90°: cosᵐθ vanishes (up to the f64 rounding of cos(π/2))
        let geom = RayGeometry::new(core::f64::consts::FRAC_PI_2, 0.0, 20.0).unwrap();
        assert!(los_channel_gain(&geom, &p).unwrap() < 1e-18);
        // behind the transmitter
        let geom = RayGeometry::new(2.0, 0.0, 20.0).unwrap();
        assert_eq!(los_channel_gain(&geom, &p).unwrap(), 0.0);
    }

    #[test]
    fn los_gain_factor_isolation_in_theta() {
        // H(θ)/H(0) = cosᵐθ with everything else fixed
        let p = params();
        let h0 = los_channel_gain(&RayGeometry::new(0.0, 0.2, 15.0).unwrap(), &p).unwrap();
        for theta in [0.1, 0.4, 0.9, 1.3] {
            let h = los_channel_gain(&RayGeometry::new(theta, 0.2, 15.0).unwrap(), &p).unwrap();
            assert_rel(h / h0, theta.cos(), 1e-12); // m = 1 here
        }
    }

    #[test]
    fn geometry_validation() {
        assert!(RayGeometry::new(-0.1, 0.0, 1.0).is_err());
        assert!(RayGeometry::new(0.0, 3.5, 1.0).is_err());
        assert!(RayGeometry::new(0.0, 0.0, 0.0).is_err());
    }
}
