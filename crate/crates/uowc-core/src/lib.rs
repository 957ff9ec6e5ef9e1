//! Link analysis for underwater optical wireless networks built on a
//! slab-confined Poisson node model.
//!
//! The crate covers the full analytic chain: nearest-neighbor geometry in the
//! slab ([`geometry`]), single-ray Lambertian channel gain ([`channel`]), the
//! aperture-integrated received-power family with deliberate pointing offset
//! ([`power`]), the SiPM receiver noise/SNR/BER chain ([`sipm`]), and the
//! energy-constrained density/power optimizer ([`energy`]). Every closed form
//! has an independent check: seeded Monte Carlo estimators live in [`mc`] and
//! quadrature/root-finding kernels in [`numeric`].
//!
//! Closed-form math is generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); the Monte Carlo oracles and the type aliases below pin
//! `f64`.

pub mod channel;
pub mod config;
pub mod constants;
pub mod energy;
pub mod geometry;
pub mod mc;
pub mod numeric;
pub mod power;
pub mod scalar;
pub mod sipm;
pub mod special;

pub use config::{
    apply_level, validate_params, ConfigError, LevelPreset, RawParams, SolarSpectralMode,
    Violation, LEVELS,
};
pub use scalar::Real;

/// Validated parameters in the default `f64` precision.
pub type SystemParams = config::SystemParams<f64>;
/// Nearest-neighbor distance law in the default `f64` precision.
pub type NnDistribution = geometry::NnDistribution<f64>;
/// Ray geometry in the default `f64` precision.
pub type RayGeometry = channel::RayGeometry<f64>;
/// Received-power result in the default `f64` precision.
pub type PowerResult = power::PowerResult<f64>;
/// Receiver noise breakdown in the default `f64` precision.
pub type NoiseBreakdown = sipm::NoiseBreakdown<f64>;
/// Density-sweep record in the default `f64` precision.
pub type SweepRecord = energy::SweepRecord<f64>;
