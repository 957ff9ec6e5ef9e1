//! System parameters: a raw, file-facing record in SI units with angles in
//! degrees, and a validated, immutable record with angles in radians.
//!
//! Validation is total: every out-of-range field is reported, all at once,
//! by name. A [`SystemParams`] can only be obtained through
//! [`validate_params`] and is never mutated afterwards; the copy-with
//! helpers (`apply_level`, `with_tx_power`) re-validate the replaced field
//! and return a fresh record.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// How the optical-filter bandwidth enters the solar background power.
///
/// The underlying solar model multiplies a broadband irradiance by the filter
/// window Δλ. Taken literally (`RawNmMultiplier`), Δλ enters in nanometres,
/// which reproduces the reference SNR expression but is dimensionally a
/// W·nm quantity read as W. `BandFraction` instead uses Δλ divided by a
/// reference band, a dimensionless spectral fraction. Neither is asserted as
/// ground truth; both are available and the choice is recorded in the config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolarSpectralMode {
    /// Multiply by Δλ expressed in nanometres (literal reference form).
    RawNmMultiplier,
    /// Multiply by Δλ / `ref_band_nm` (dimensionless band fraction).
    BandFraction {
        /// Reference optical band width [nm].
        ref_band_nm: f64,
    },
}

/// Raw parameter record as read from a JSON config file.
///
/// Keys equal the field names; angles are in **degrees**, everything else SI.
/// Unknown keys are rejected. Fields with documented defaults may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    /// Areal node intensity Λ [nodes/m²].
    pub lambda_2d: f64,
    /// Maximum vertical extent R of the slab [m].
    pub slab_depth: f64,
    /// Transmitter half-power semi-angle [deg].
    pub phi_half: f64,
    /// Transmit optical power [W].
    pub tx_power: f64,
    /// Effective beam extinction coefficient [1/m].
    pub extinction: f64,
    /// Optical wavelength [m].
    pub wavelength: f64,
    /// Receiver lens diameter D [m].
    pub aperture_diameter: f64,
    /// Receiver response strength (dimensionless), default 1.
    #[serde(default = "default_one")]
    pub responsivity_factor: f64,
    /// Optical filter transmittance in (0, 1], default 1.
    #[serde(default = "default_one")]
    pub filter_transmittance: f64,
    /// Concentrator refractive index, default 1.5.
    #[serde(default = "default_concentrator_index")]
    pub concentrator_index: f64,
    /// Receiver field-of-view semi-angle [deg].
    pub fov_semi_angle: f64,
    /// SiPM photon detection efficiency in (0, 1].
    pub pde: f64,
    /// SiPM internal gain.
    pub sipm_gain: f64,
    /// SiPM crosstalk probability in [0, 1 - e⁻¹).
    pub crosstalk_prob: f64,
    /// SiPM dark current [A], pre-gain primitive current.
    pub dark_current: f64,
    /// Receiver bandwidth [Hz].
    pub bandwidth: f64,
    /// Load resistance [Ω].
    pub load_resistance: f64,
    /// Absolute temperature [K], default 290.
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    /// Solar irradiance at the surface [W/m²].
    pub solar_surface_irradiance: f64,
    /// Solar radiation attenuation coefficient [1/m].
    pub solar_attenuation: f64,
    /// Solar directional dependence factor.
    pub solar_direction_factor: f64,
    /// Solar reflectance factor.
    pub solar_reflectance: f64,
    /// Optical bandpass filter window Δλ [nm].
    pub filter_window_nm: f64,
    /// Spectral handling of Δλ in the solar model.
    #[serde(default = "default_solar_mode")]
    pub solar_spectral_fraction_mode: SolarSpectralMode,
    /// Total network energy budget [J].
    pub energy_total: f64,
    /// Radius of the circular deployment area [m].
    pub deploy_radius: f64,
    /// Target bit-error-rate threshold in (0, 0.5).
    pub ber_threshold: f64,
    /// Minimum transmit power [W], default 0.01.
    #[serde(default = "default_ptx_floor")]
    pub ptx_floor: f64,
    /// Maximum transmit power [W].
    pub ptx_max: f64,
}

fn default_one() -> f64 {
    1.0
}
fn default_concentrator_index() -> f64 {
    1.5
}
fn default_temperature() -> f64 {
    290.0
}
fn default_ptx_floor() -> f64 {
    0.01
}
fn default_solar_mode() -> SolarSpectralMode {
    SolarSpectralMode::RawNmMultiplier
}

impl Default for RawParams {
    /// Reference simulation set: SiPM receiver (η = 0.31, G = 10⁶,
    /// P_ct = 0.08, I_d = 154 nA), 450 nm / 8 W LED with 60° half-angle,
    /// c = 0.151 m⁻¹ water, 30 cm aperture with 120° FoV, surface sun of
    /// 1000 W/m² decaying at 0.2 m⁻¹, plus the artifact-level deployment
    /// defaults (Λ = 10⁻³ m⁻², R = 50 m, 10⁶ J over a 1 km circle).
    fn default() -> Self {
        Self {
            lambda_2d: 1e-3,
            slab_depth: 50.0,
            phi_half: 60.0,
            tx_power: 8.0,
            extinction: 0.151,
            wavelength: 450e-9,
            aperture_diameter: 0.30,
            responsivity_factor: 1.0,
            filter_transmittance: 1.0,
            concentrator_index: 1.5,
            fov_semi_angle: 120.0,
            pde: 0.31,
            sipm_gain: 1e6,
            crosstalk_prob: 0.08,
            dark_current: 154e-9,
            bandwidth: 1e6,
            load_resistance: 50.0,
            temperature: 290.0,
            solar_surface_irradiance: 1000.0,
            solar_attenuation: 0.2,
            solar_direction_factor: 4.0,
            solar_reflectance: 1.25,
            filter_window_nm: 50.0,
            solar_spectral_fraction_mode: SolarSpectralMode::RawNmMultiplier,
            energy_total: 1e6,
            deploy_radius: 1000.0,
            ber_threshold: 1e-6,
            ptx_floor: 0.01,
            ptx_max: 100.0,
        }
    }
}

/// One out-of-range field, by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Offending field name (matches the config key).
    pub field: &'static str,
    /// Human-readable bound statement.
    pub reason: String,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

/// Validation failure carrying every violated bound.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    /// One or more fields violated their bounds.
    #[error("invalid parameters: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    /// Unknown level preset id.
    #[error("unknown level preset {0}; valid ids are 1, 2, 3")]
    UnknownLevel(u8),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Depth preset for the three operational ranges.
///
/// Each level pins the slab depth to the upper bound of its internodal
/// distance range, the one geometric knob that scales link length here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPreset {
    /// Preset id: 1, 2 or 3.
    pub level_id: u8,
    /// Slab depth override [m].
    pub slab_depth: f64,
    /// Descriptive label.
    pub label: &'static str,
}

/// The three presets: short-range (50 m), medium-range (500 m),
/// long-range/deep-sea (6000 m).
pub const LEVELS: [LevelPreset; 3] = [
    LevelPreset { level_id: 1, slab_depth: 50.0, label: "level 1: short range, 0-50 m" },
    LevelPreset { level_id: 2, slab_depth: 500.0, label: "level 2: medium range, 50-500 m" },
    LevelPreset { level_id: 3, slab_depth: 6000.0, label: "level 3: long range, 500-6000 m" },
];

impl LevelPreset {
    /// Look up a preset by id.
    pub fn from_id(id: u8) -> Result<Self, ConfigError> {
        LEVELS
            .iter()
            .find(|l| l.level_id == id)
            .copied()
            .ok_or(ConfigError::UnknownLevel(id))
    }
}

/// Validated, immutable system parameters. Angles are in **radians**.
///
/// Construct via [`validate_params`]; all accessors are plain reads and the
/// record is safe to share freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams<R: Real> {
    lambda_2d: R,
    slab_depth: R,
    phi_half: R,
    tx_power: R,
    extinction: R,
    wavelength: R,
    aperture_diameter: R,
    responsivity_factor: R,
    filter_transmittance: R,
    concentrator_index: R,
    fov_semi_angle: R,
    pde: R,
    sipm_gain: R,
    crosstalk_prob: R,
    dark_current: R,
    bandwidth: R,
    load_resistance: R,
    temperature: R,
    solar_surface_irradiance: R,
    solar_attenuation: R,
    solar_direction_factor: R,
    solar_reflectance: R,
    filter_window_nm: R,
    solar_spectral_fraction_mode: SolarSpectralMode,
    energy_total: R,
    deploy_radius: R,
    ber_threshold: R,
    ptx_floor: R,
    ptx_max: R,
}

macro_rules! getters {
    ($($(#[$doc:meta])* $name:ident),+ $(,)?) => {
        $( $(#[$doc])* #[inline] pub fn $name(&self) -> R { self.$name } )+
    };
}

impl<R: Real> SystemParams<R> {
    getters! {
        /// Areal node intensity Λ [nodes/m²].
        lambda_2d,
        /// Slab depth R [m].
        slab_depth,
        /// Half-power semi-angle φ₁⁄₂ [rad].
        phi_half,
        /// Transmit optical power [W].
        tx_power,
        /// Beam extinction coefficient c [1/m].
        extinction,
        /// Wavelength [m].
        wavelength,
        /// Receiver lens diameter D [m].
        aperture_diameter,
        /// Receiver response strength.
        responsivity_factor,
        /// Filter transmittance T_s.
        filter_transmittance,
        /// Concentrator refractive index n.
        concentrator_index,
        /// Field-of-view semi-angle [rad].
        fov_semi_angle,
        /// Photon detection efficiency η.
        pde,
        /// SiPM gain G.
        sipm_gain,
        /// Crosstalk probability P_ct.
        crosstalk_prob,
        /// Dark current [A].
        dark_current,
        /// Bandwidth [Hz].
        bandwidth,
        /// Load resistance [Ω].
        load_resistance,
        /// Temperature [K].
        temperature,
        /// Surface solar irradiance [W/m²].
        solar_surface_irradiance,
        /// Solar attenuation coefficient [1/m].
        solar_attenuation,
        /// Solar directional dependence factor.
        solar_direction_factor,
        /// Solar reflectance factor.
        solar_reflectance,
        /// Filter window Δλ [nm].
        filter_window_nm,
        /// Total energy budget [J].
        energy_total,
        /// Deployment-circle radius [m].
        deploy_radius,
        /// BER threshold.
        ber_threshold,
        /// Minimum transmit power [W].
        ptx_floor,
        /// Maximum transmit power [W].
        ptx_max,
    }

    /// Spectral handling of Δλ in the solar model.
    #[inline]
    pub fn solar_spectral_fraction_mode(&self) -> SolarSpectralMode {
        self.solar_spectral_fraction_mode
    }

    /// Receiver aperture radius `D/2` [m].
    #[inline]
    pub fn aperture_radius(&self) -> R {
        self.aperture_diameter / R::of(2.0)
    }

    /// Receiver aperture area `πD²/4` [m²].
    #[inline]
    pub fn aperture_area(&self) -> R {
        R::PI() * self.aperture_diameter * self.aperture_diameter / R::of(4.0)
    }

    /// Lambertian order `m = -ln 2 / ln cos φ₁⁄₂` of the validated beam.
    #[inline]
    pub fn lambertian_order(&self) -> R {
        -R::LN_2() / self.phi_half.cos().ln()
    }

    /// Dimensionless spectral factor applied to the solar background.
    #[inline]
    pub fn solar_spectral_factor(&self) -> R {
        match self.solar_spectral_fraction_mode {
            SolarSpectralMode::RawNmMultiplier => self.filter_window_nm,
            SolarSpectralMode::BandFraction { ref_band_nm } => {
                self.filter_window_nm / R::of(ref_band_nm)
            }
        }
    }

    /// Copy with the transmit power replaced (used by the power search).
    /// The replacement must be positive.
    pub(crate) fn with_tx_power(&self, tx_power: R) -> Self {
        assert!(tx_power > R::zero(), "tx_power must be positive");
        let mut out = self.clone();
        out.tx_power = tx_power;
        out
    }

    /// Copy with the half-power semi-angle replaced (used by beam-angle
    /// sweeps). The replacement must stay strictly inside `(0, π/2)`.
    pub(crate) fn with_phi_half(&self, phi_half: R) -> Self {
        assert!(
            phi_half > R::zero() && phi_half < R::FRAC_PI_2(),
            "phi_half must stay inside (0, pi/2)"
        );
        let mut out = self.clone();
        out.phi_half = phi_half;
        out
    }

    /// Echo the record back into file units (angles in degrees).
    pub fn to_raw(&self) -> RawParams {
        let deg = |x: R| x.widen().to_degrees();
        RawParams {
            lambda_2d: self.lambda_2d.widen(),
            slab_depth: self.slab_depth.widen(),
            phi_half: deg(self.phi_half),
            tx_power: self.tx_power.widen(),
            extinction: self.extinction.widen(),
            wavelength: self.wavelength.widen(),
            aperture_diameter: self.aperture_diameter.widen(),
            responsivity_factor: self.responsivity_factor.widen(),
            filter_transmittance: self.filter_transmittance.widen(),
            concentrator_index: self.concentrator_index.widen(),
            fov_semi_angle: deg(self.fov_semi_angle),
            pde: self.pde.widen(),
            sipm_gain: self.sipm_gain.widen(),
            crosstalk_prob: self.crosstalk_prob.widen(),
            dark_current: self.dark_current.widen(),
            bandwidth: self.bandwidth.widen(),
            load_resistance: self.load_resistance.widen(),
            temperature: self.temperature.widen(),
            solar_surface_irradiance: self.solar_surface_irradiance.widen(),
            solar_attenuation: self.solar_attenuation.widen(),
            solar_direction_factor: self.solar_direction_factor.widen(),
            solar_reflectance: self.solar_reflectance.widen(),
            filter_window_nm: self.filter_window_nm.widen(),
            solar_spectral_fraction_mode: self.solar_spectral_fraction_mode,
            energy_total: self.energy_total.widen(),
            deploy_radius: self.deploy_radius.widen(),
            ber_threshold: self.ber_threshold.widen(),
            ptx_floor: self.ptx_floor.widen(),
            ptx_max: self.ptx_max.widen(),
        }
    }
}

/// Maximum admissible crosstalk probability, `1 - e⁻¹`; at or above it the
/// excess-noise factor `1/(1 + ln(1 - P_ct))` stops being finite and positive.
pub const CROSSTALK_LIMIT: f64 = 1.0 - core::f64::consts::E.recip() - f64::EPSILON;

/// Validate a raw record, converting angles to radians.
///
/// Returns every violated bound at once, each naming its field.
pub fn validate_params<R: Real>(raw: &RawParams) -> Result<SystemParams<R>, ConfigError> {
    let mut v: Vec<Violation> = Vec::new();
    let mut check = |field: &'static str, ok: bool, reason: String| {
        if !ok {
            v.push(Violation { field, reason });
        }
    };
    let finite_pos = |x: f64| x.is_finite() && x > 0.0;
    let finite_nonneg = |x: f64| x.is_finite() && x >= 0.0;

    check("lambda_2d", finite_pos(raw.lambda_2d), format!("must be > 0, got {}", raw.lambda_2d));
    check("slab_depth", finite_pos(raw.slab_depth), format!("must be > 0, got {}", raw.slab_depth));

    let phi_half = raw.phi_half.to_radians();
    let phi_ok = raw.phi_half.is_finite() && phi_half > 0.0 && phi_half < core::f64::consts::FRAC_PI_2;
    check(
        "phi_half",
        phi_ok,
        format!("must lie strictly inside (0, 90) degrees, got {}", raw.phi_half),
    );
    if phi_ok {
        let m = -core::f64::consts::LN_2 / phi_half.cos().ln();
        check(
            "phi_half",
            m.is_finite() && m > 0.0,
            format!("Lambertian order is not finite and positive at {} deg", raw.phi_half),
        );
    }

    check("tx_power", finite_pos(raw.tx_power), format!("must be > 0, got {}", raw.tx_power));
    check("extinction", finite_nonneg(raw.extinction), format!("must be >= 0, got {}", raw.extinction));
    check("wavelength", finite_pos(raw.wavelength), format!("must be > 0, got {}", raw.wavelength));
    check(
        "aperture_diameter",
        finite_pos(raw.aperture_diameter),
        format!("must be > 0, got {}", raw.aperture_diameter),
    );
    check(
        "responsivity_factor",
        finite_pos(raw.responsivity_factor),
        format!("must be > 0, got {}", raw.responsivity_factor),
    );
    check(
        "filter_transmittance",
        raw.filter_transmittance.is_finite()
            && raw.filter_transmittance > 0.0
            && raw.filter_transmittance <= 1.0,
        format!("must lie in (0, 1], got {}", raw.filter_transmittance),
    );
    check(
        "concentrator_index",
        finite_pos(raw.concentrator_index),
        format!("must be > 0, got {}", raw.concentrator_index),
    );

    let fov = raw.fov_semi_angle.to_radians();
    check(
        "fov_semi_angle",
        raw.fov_semi_angle.is_finite() && fov > 0.0 && fov < core::f64::consts::PI,
        format!("must lie strictly inside (0, 180) degrees, got {}", raw.fov_semi_angle),
    );

    check(
        "pde",
        raw.pde.is_finite() && raw.pde > 0.0 && raw.pde <= 1.0,
        format!("must lie in (0, 1], got {}", raw.pde),
    );
    check("sipm_gain", finite_pos(raw.sipm_gain), format!("must be > 0, got {}", raw.sipm_gain));
    check(
        "crosstalk_prob",
        raw.crosstalk_prob.is_finite()
            && raw.crosstalk_prob >= 0.0
            && raw.crosstalk_prob < CROSSTALK_LIMIT,
        format!("must lie in [0, 1 - 1/e), got {}", raw.crosstalk_prob),
    );
    check(
        "dark_current",
        finite_nonneg(raw.dark_current),
        format!("must be >= 0, got {}", raw.dark_current),
    );
    check("bandwidth", finite_pos(raw.bandwidth), format!("must be > 0, got {}", raw.bandwidth));
    check(
        "load_resistance",
        finite_pos(raw.load_resistance),
        format!("must be > 0, got {}", raw.load_resistance),
    );
    check(
        "temperature",
        finite_pos(raw.temperature),
        format!("must be > 0, got {}", raw.temperature),
    );
    check(
        "solar_surface_irradiance",
        finite_nonneg(raw.solar_surface_irradiance),
        format!("must be >= 0, got {}", raw.solar_surface_irradiance),
    );
    check(
        "solar_attenuation",
        finite_nonneg(raw.solar_attenuation),
        format!("must be >= 0, got {}", raw.solar_attenuation),
    );
    check(
        "solar_direction_factor",
        finite_nonneg(raw.solar_direction_factor),
        format!("must be >= 0, got {}", raw.solar_direction_factor),
    );
    check(
        "solar_reflectance",
        finite_nonneg(raw.solar_reflectance),
        format!("must be >= 0, got {}", raw.solar_reflectance),
    );
    check(
        "filter_window_nm",
        finite_pos(raw.filter_window_nm),
        format!("must be > 0, got {}", raw.filter_window_nm),
    );
    if let SolarSpectralMode::BandFraction { ref_band_nm } = raw.solar_spectral_fraction_mode {
        check(
            "solar_spectral_fraction_mode",
            finite_pos(ref_band_nm),
            format!("ref_band_nm must be > 0, got {ref_band_nm}"),
        );
    }
    check(
        "energy_total",
        finite_pos(raw.energy_total),
        format!("must be > 0, got {}", raw.energy_total),
    );
    check(
        "deploy_radius",
        finite_pos(raw.deploy_radius),
        format!("must be > 0, got {}", raw.deploy_radius),
    );
    check(
        "ber_threshold",
        raw.ber_threshold.is_finite() && raw.ber_threshold > 0.0 && raw.ber_threshold < 0.5,
        format!("must lie in (0, 0.5), got {}", raw.ber_threshold),
    );
    check("ptx_floor", finite_pos(raw.ptx_floor), format!("must be > 0, got {}", raw.ptx_floor));
    check(
        "ptx_max",
        raw.ptx_max.is_finite() && raw.ptx_max > raw.ptx_floor,
        format!("must exceed ptx_floor = {}, got {}", raw.ptx_floor, raw.ptx_max),
    );

    if !v.is_empty() {
        return Err(ConfigError::Invalid(v));
    }

    Ok(SystemParams {
        lambda_2d: R::of(raw.lambda_2d),
        slab_depth: R::of(raw.slab_depth),
        phi_half: R::of(phi_half),
        tx_power: R::of(raw.tx_power),
        extinction: R::of(raw.extinction),
        wavelength: R::of(raw.wavelength),
        aperture_diameter: R::of(raw.aperture_diameter),
        responsivity_factor: R::of(raw.responsivity_factor),
        filter_transmittance: R::of(raw.filter_transmittance),
        concentrator_index: R::of(raw.concentrator_index),
        fov_semi_angle: R::of(fov),
        pde: R::of(raw.pde),
        sipm_gain: R::of(raw.sipm_gain),
        crosstalk_prob: R::of(raw.crosstalk_prob),
        dark_current: R::of(raw.dark_current),
        bandwidth: R::of(raw.bandwidth),
        load_resistance: R::of(raw.load_resistance),
        temperature: R::of(raw.temperature),
        solar_surface_irradiance: R::of(raw.solar_surface_irradiance),
        solar_attenuation: R::of(raw.solar_attenuation),
        solar_direction_factor: R::of(raw.solar_direction_factor),
        solar_reflectance: R::of(raw.solar_reflectance),
        filter_window_nm: R::of(raw.filter_window_nm),
        solar_spectral_fraction_mode: raw.solar_spectral_fraction_mode,
        energy_total: R::of(raw.energy_total),
        deploy_radius: R::of(raw.deploy_radius),
        ber_threshold: R::of(raw.ber_threshold),
        ptx_floor: R::of(raw.ptx_floor),
        ptx_max: R::of(raw.ptx_max),
    })
}

/// Copy of `params` with the slab depth replaced by the preset value.
pub fn apply_level<R: Real>(params: &SystemParams<R>, preset: LevelPreset) -> SystemParams<R> {
    let mut out = params.clone();
    out.slab_depth = R::of(preset.slab_depth);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_set_validates() {
        let p = validate_params::<f64>(&RawParams::default()).unwrap();
        assert_eq!(p.pde(), 0.31);
        assert_eq!(p.sipm_gain(), 1e6);
        assert_eq!(p.crosstalk_prob(), 0.08);
        assert_eq!(p.dark_current(), 154e-9);
        assert_eq!(p.phi_half(), 60f64.to_radians());
        assert_eq!(p.fov_semi_angle(), 120f64.to_radians());
        assert!((p.lambertian_order() - 1.0).abs() < 1e-12);
        assert!((p.aperture_area() - 0.070_685_834_705_770_35).abs() < 1e-15);
    }

    #[test]
    fn zero_phi_half_is_rejected_by_name() {
        let raw = RawParams { phi_half: 0.0, ..RawParams::default() };
        match validate_params::<f64>(&raw) {
            Err(ConfigError::Invalid(v)) => {
                assert!(v.iter().any(|x| x.field == "phi_half"), "{v:?}");
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn excessive_crosstalk_is_rejected() {
        // 1 + ln(1 - 0.70) = -0.204 < 0 would make the excess-noise factor negative
        let raw = RawParams { crosstalk_prob: 0.70, ..RawParams::default() };
        match validate_params::<f64>(&raw) {
            Err(ConfigError::Invalid(v)) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].field, "crosstalk_prob");
            }
            other => panic!("expected violation, got {other:?}"),
        }
        // just inside the limit is fine
        let raw = RawParams { crosstalk_prob: 0.632, ..RawParams::default() };
        assert!(validate_params::<f64>(&raw).is_ok());
    }

    #[test]
    fn all_violations_reported_at_once() {
        let raw = RawParams {
            lambda_2d: -1.0,
            ber_threshold: 0.7,
            ptx_max: 0.001,
            ..RawParams::default()
        };
        match validate_params::<f64>(&raw) {
            Err(ConfigError::Invalid(v)) => {
                let fields: Vec<_> = v.iter().map(|x| x.field).collect();
                assert!(fields.contains(&"lambda_2d"));
                assert!(fields.contains(&"ber_threshold"));
                assert!(fields.contains(&"ptx_max"));
            }
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn validation_is_idempotent() {
        let p = validate_params::<f64>(&RawParams::default()).unwrap();
        let p2 = validate_params::<f64>(&p.to_raw()).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn apply_level_changes_exactly_slab_depth() {
        let p = validate_params::<f64>(&RawParams::default()).unwrap();
        for (id, want) in [(1u8, 50.0), (2, 500.0), (3, 6000.0)] {
            let lv = LevelPreset::from_id(id).unwrap();
            let q = apply_level(&p, lv);
            assert_eq!(q.slab_depth(), want);
            // every other field unchanged
            let mut back = q.to_raw();
            back.slab_depth = p.slab_depth().widen();
            assert_eq!(back, p.to_raw());
        }
        assert_eq!(LevelPreset::from_id(9), Err(ConfigError::UnknownLevel(9)));
    }

    #[test]
    fn nan_fields_are_rejected() {
        let raw = RawParams { extinction: f64::NAN, ..RawParams::default() };
        assert!(validate_params::<f64>(&raw).is_err());
    }

    #[test]
    fn validates_into_f32() {
        let p = validate_params::<f32>(&RawParams::default()).unwrap();
        assert!((p.lambertian_order() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn band_fraction_mode_scales_spectral_factor() {
        let raw = RawParams {
            solar_spectral_fraction_mode: SolarSpectralMode::BandFraction { ref_band_nm: 300.0 },
            ..RawParams::default()
        };
        let p = validate_params::<f64>(&raw).unwrap();
        assert!((p.solar_spectral_factor() - 50.0 / 300.0).abs() < 1e-15);
        let p = validate_params::<f64>(&RawParams::default()).unwrap();
        assert_eq!(p.solar_spectral_factor(), 50.0);
    }
}
