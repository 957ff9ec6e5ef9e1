//! SiPM receiver electronics: photocurrent, excess noise, solar background,
//! the four noise variances, electrical SNR, and OOK bit error rate.
//!
//! The canonical noise model applies the squared gain `G²` and the excess
//! noise factor `F = 1/(1 + ln(1 - P_ct))` uniformly to all shot-type terms,
//! with pre-gain currents `i = (ηλq/hc)·P`:
//!
//! ```text
//! σ_q²     = 2qBG²F · i_signal          σ_d²  = 2qBG²F · I_d
//! σ_solar² = 2qBG²F · i_solar           σ_th² = 4κTB / R_L
//! SNR      = (G · i_signal)² / (σ_q² + σ_d² + σ_solar² + σ_th²)
//! BER      = ½ · erfc(√(SNR/2))         (NRZ-OOK, Gaussian noise)
//! ```
//!
//! The solar optical power follows
//! `P_sun = A_r · φ_FoV² · L_f · ζ_r · E_sun(0) · e^{-ε·L_deep} · T_s · f_Δλ`,
//! where the spectral factor `f_Δλ` is selected by the configured
//! [`SolarSpectralMode`](crate::config::SolarSpectralMode).

use serde::Serialize;

use crate::config::SystemParams;
use crate::constants::{BOLTZMANN, ELEMENTARY_CHARGE, PLANCK, SPEED_OF_LIGHT};
use crate::scalar::Real;

/// Domain errors along the receiver chain.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SipmError {
    /// Optical power below zero.
    #[error("optical power must be non-negative, got {0} W")]
    NegativePower(f64),
    /// Receiver depth below zero.
    #[error("depth must be non-negative, got {0} m")]
    NegativeDepth(f64),
    /// Crosstalk probability at or beyond `1 - e⁻¹`, where the excess-noise
    /// denominator `1 + ln(1 - P_ct)` stops being positive.
    #[error("crosstalk probability must lie in [0, 1 - 1/e), got {0}")]
    CrosstalkOutOfRange(f64),
    /// Negative SNR handed to the BER map.
    #[error("SNR must be non-negative, got {0}")]
    NegativeSnr(f64),
}

/// The four receiver noise variances with the currents that generated them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseBreakdown<R: Real> {
    /// Quantum (signal shot) noise variance [A²].
    pub sigma_q2: R,
    /// Dark-current noise variance [A²].
    pub sigma_d2: R,
    /// Solar background noise variance [A²].
    pub sigma_solar2: R,
    /// Thermal (Johnson-Nyquist) noise variance [A²].
    pub sigma_th2: R,
    /// Total: the exact sum of the four components [A²].
    pub sigma_total2: R,
    /// Post-gain signal photocurrent [A].
    pub signal_current: R,
    /// Captured solar optical power [W].
    pub solar_power: R,
}

/// Pre-gain responsivity `ηλq/(hc)` [A/W], exposed for reuse.
pub fn responsivity<R: Real>(params: &SystemParams<R>) -> R {
    params.pde() * params.wavelength() * R::of(ELEMENTARY_CHARGE / (PLANCK * SPEED_OF_LIGHT))
}

/// Signal photocurrent `I = (ηλq/hc) · G · P_rx` [A].
pub fn photocurrent<R: Real>(p_rx: R, params: &SystemParams<R>) -> Result<R, SipmError> {
    if !(p_rx >= R::zero()) {
        return Err(SipmError::NegativePower(p_rx.widen()));
    }
    Ok(responsivity(params) * params.sipm_gain() * p_rx)
}

/// Excess noise factor `F = 1/(1 + ln(1 - P_ct)) ≥ 1`.
pub fn excess_noise_factor<R: Real>(p_ct: R) -> Result<R, SipmError> {
    let denom = R::one() + (R::one() - p_ct).ln();
    if !(p_ct >= R::zero()) || !(denom > R::zero()) {
        return Err(SipmError::CrosstalkOutOfRange(p_ct.widen()));
    }
    Ok(denom.recip())
}

/// Solar background optical power captured by the receiver at depth
/// `l_deep`; decays as `e^{-ε·l_deep}` and vanishes in deep water.
pub fn solar_power<R: Real>(params: &SystemParams<R>, l_deep: R) -> Result<R, SipmError> {
    if !(l_deep >= R::zero()) {
        return Err(SipmError::NegativeDepth(l_deep.widen()));
    }
    let fov = params.fov_semi_angle();
    Ok(params.aperture_area()
        * fov
        * fov
        * params.solar_direction_factor()
        * params.solar_reflectance()
        * params.solar_surface_irradiance()
        * (-params.solar_attenuation() * l_deep).exp()
        * params.filter_transmittance()
        * params.solar_spectral_factor())
}

/// The four noise variances for a received power `p_rx` at depth `l_deep`.
///
/// `sigma_total2` is computed as the component sum, so the superposition
/// invariant holds bit-for-bit.
pub fn noise_variances<R: Real>(
    p_rx: R,
    params: &SystemParams<R>,
    l_deep: R,
) -> Result<NoiseBreakdown<R>, SipmError> {
    if !(p_rx >= R::zero()) {
        return Err(SipmError::NegativePower(p_rx.widen()));
    }
    let resp = responsivity(params);
    let gain = params.sipm_gain();
    let f = excess_noise_factor(params.crosstalk_prob())?;
    let sun = solar_power(params, l_deep)?;

    // 2qBG²F, shared by all shot-type terms (pre-gain currents)
    let shot = R::of(2.0 * ELEMENTARY_CHARGE) * params.bandwidth() * gain * gain * f;
    let sigma_q2 = shot * resp * p_rx;
    let sigma_d2 = shot * params.dark_current();
    let sigma_solar2 = shot * resp * sun;
    let sigma_th2 = R::of(4.0 * BOLTZMANN) * params.temperature() * params.bandwidth()
        / params.load_resistance();

    Ok(NoiseBreakdown {
        sigma_q2,
        sigma_d2,
        sigma_solar2,
        sigma_th2,
        sigma_total2: sigma_q2 + sigma_d2 + sigma_solar2 + sigma_th2,
        signal_current: resp * gain * p_rx,
        solar_power: sun,
    })
}

/// Electrical SNR `I² / σ_total²`; zero power gives zero SNR.
pub fn snr<R: Real>(p_rx: R, params: &SystemParams<R>, l_deep: R) -> Result<R, SipmError> {
    let noise = noise_variances(p_rx, params, l_deep)?;
    let i = noise.signal_current;
    Ok(i * i / noise.sigma_total2)
}

/// NRZ-OOK bit error rate `½·erfc(√(SNR/2))`, strictly decreasing in SNR.
pub fn ber_ook<R: Real>(snr_value: R) -> Result<R, SipmError> {
    if !(snr_value >= R::zero()) {
        return Err(SipmError::NegativeSnr(snr_value.widen()));
    }
    Ok((snr_value / R::of(2.0)).sqrt().erfc() / R::of(2.0))
}
