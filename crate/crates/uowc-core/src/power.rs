//! Aperture-integrated received power under random receiver placement and
//! orientation, and the deliberate pointing-offset strategy built on it.
//!
//! With the link length much larger than the aperture, averaging the
//! incident flux over uniformly random receiver positions and orientations
//! collapses to
//!
//! ```text
//! P = 𝔯 · P_Tx · r² / (4L²) · e^{-cL}                      (random orientation)
//! P · (1 - cos^{m+1} φ₁⁄₂)                                 (main lobe)
//! P · (cos^{m+1} δ - cos^{m+1}(δ + φ₁⁄₂))                  (offset δ, δ+φ₁⁄₂ ≤ π/2)
//! ```
//!
//! where `r` is the aperture radius. The offset factor is unimodal in `δ`;
//! its maximizer solves `sin δ cosᵐ δ = sin(δ+φ) cosᵐ(δ+φ)` and is found by
//! bracketed bisection. An ideal actively tracked link serves as the
//! benchmark: `P_pat(ε) = 𝔯 P_Tx (m+1) A_r / (2πL²) · e^{-cL} · cosᵐ ε`.

use serde::Serialize;

use crate::channel::{lambertian_order, ChannelError};
use crate::config::SystemParams;
use crate::geometry::NnDistribution;
use crate::numeric::bisect_root;
use crate::scalar::Real;

/// Bisection width for the optimal-offset root [rad].
const OFFSET_ROOT_TOL: f64 = 1e-10;
/// Bisection width for the tracking-error crossover [rad].
const CROSSOVER_TOL: f64 = 1e-12;

/// Which member of the received-power family produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerVariant {
    /// Orientation and position uniformly random over the hemisphere.
    RandomOrientation,
    /// Restricted to the transmitter's main lobe.
    MainLobe,
    /// Main lobe with a deliberate pointing offset.
    Offset,
    /// Ideal pointing-acquisition-tracking benchmark with residual error ε.
    Pat,
}

/// A received-power value together with the geometry that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerResult<R: Real> {
    /// Received power [W].
    pub value: R,
    /// Formula variant.
    pub variant: PowerVariant,
    /// Link length [m].
    pub link_length: R,
    /// Offset angle δ [rad]; present exactly for the offset variant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset_angle: Option<R>,
    /// Residual pointing error ε [rad]; present exactly for the PAT variant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointing_error: Option<R>,
}

/// Errors for the received-power family.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PowerError {
    /// Link length must be strictly positive.
    #[error("link length must be positive, got {0}")]
    NonPositiveLength(f64),
    /// Offset angle must be non-negative.
    #[error("offset angle must be non-negative, got {0} rad")]
    NegativeOffset(f64),
    /// The offset form is only stated for `δ + φ₁⁄₂ ≤ π/2`.
    #[error("offset + half-power angle = {0} rad exceeds pi/2; outside the stated validity domain")]
    OffsetBeyondValidity(f64),
    /// Pointing error outside `[0, π/2]`.
    #[error("pointing error must lie in [0, pi/2], got {0} rad")]
    InvalidPointingError(f64),
    /// Propagated half-power-angle domain error.
    #[error(transparent)]
    Channel(#[from] ChannelError),
    /// Offset-strategy power already meets or beats the axial tracking power.
    #[error("offset-strategy power meets or exceeds axial tracking power; no crossover")]
    NoCrossing,
    /// A grid request with an empty axis.
    #[error("grid axes must be non-empty")]
    EmptyAxes,
    /// Propagated geometry error from density-grid cells.
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

fn check_length<R: Real>(length: R) -> Result<(), PowerError> {
    if !(length.is_finite() && length > R::zero()) {
        return Err(PowerError::NonPositiveLength(length.widen()));
    }
    Ok(())
}

/// Common prefactor `𝔯 P_Tx r² / (4L²) · e^{-cL}`.
fn base_power<R: Real>(params: &SystemParams<R>, length: R) -> R {
    let r = params.aperture_radius();
    params.responsivity_factor() * params.tx_power() * r * r
        / (R::of(4.0) * length * length)
        * (-params.extinction() * length).exp()
}

/// The offset factor `cos^{m+1} δ - cos^{m+1}(δ + φ)`.
///
/// Callers must keep `δ + φ ≤ π/2`; at the boundary the second term is zero.
pub fn offset_factor<R: Real>(m: R, delta: R, phi_half: R) -> R {
    let e = m + R::one();
    let outer = delta + phi_half;
    let outer_term = if outer >= R::FRAC_PI_2() { R::zero() } else { outer.cos().powf(e) };
    delta.cos().powf(e) - outer_term
}

/// Average received power under uniformly random receiver orientation and
/// position over the hemisphere.
pub fn power_random_orientation<R: Real>(
    params: &SystemParams<R>,
    length: R,
) -> Result<PowerResult<R>, PowerError> {
    check_length(length)?;
    Ok(PowerResult {
        value: base_power(params, length),
        variant: PowerVariant::RandomOrientation,
        link_length: length,
        offset_angle: None,
        pointing_error: None,
    })
}

/// Average received power restricted to the transmitter's main lobe.
pub fn power_main_lobe<R: Real>(
    params: &SystemParams<R>,
    length: R,
) -> Result<PowerResult<R>, PowerError> {
    check_length(length)?;
    let m = lambertian_order(params.phi_half())?;
    let factor = R::one() - params.phi_half().cos().powf(m + R::one());
    Ok(PowerResult {
        value: base_power(params, length) * factor,
        variant: PowerVariant::MainLobe,
        link_length: length,
        offset_angle: None,
        pointing_error: None,
    })
}

/// Average received power in the main lobe with a static pointing offset `δ`.
///
/// Valid for `δ ≥ 0` with `δ + φ₁⁄₂ ≤ π/2`; anything beyond is rejected
/// rather than extrapolated.
pub fn power_offset<R: Real>(
    params: &SystemParams<R>,
    length: R,
    delta: R,
) -> Result<PowerResult<R>, PowerError> {
    check_length(length)?;
    if !(delta >= R::zero()) {
        return Err(PowerError::NegativeOffset(delta.widen()));
    }
    let m = lambertian_order(params.phi_half())?;
    let sum = delta + params.phi_half();
    if sum > R::FRAC_PI_2() {
        return Err(PowerError::OffsetBeyondValidity(sum.widen()));
    }
    let factor = offset_factor(m, delta, params.phi_half());
    Ok(PowerResult {
        value: base_power(params, length) * factor,
        variant: PowerVariant::Offset,
        link_length: length,
        offset_angle: Some(delta),
        pointing_error: None,
    })
}

/// Exact optimal pointing offset: the unique stationary point of the offset
/// factor on `(0, π/2 - φ₁⁄₂)`, located by bisection on
/// `g(δ) = sin δ cosᵐ δ - sin(δ+φ) cosᵐ(δ+φ)`.
///
/// `g` is negative at 0 and positive at the upper end, so the bracket always
/// carries a sign change.
pub fn optimal_offset_exact<R: Real>(phi_half: R) -> Result<R, PowerError> {
    let m = lambertian_order(phi_half)?;
    let g = |d: R| d.sin() * d.cos().powf(m) - (d + phi_half).sin() * (d + phi_half).cos().powf(m);
    let hi = R::FRAC_PI_2() - phi_half;
    let root = bisect_root(g, R::zero(), hi, R::of(OFFSET_ROOT_TOL))
        .expect("offset stationarity bracket always changes sign");
    Ok(root)
}

/// Empirical closed-form approximation of the optimal pointing offset:
/// `δ ≈ π/12 + (cos(2φ₁⁄₂ + 4π/3) - 1) / (2π)` [rad].
pub fn optimal_offset_approx<R: Real>(phi_half: R) -> R {
    let twelve = R::of(12.0);
    R::PI() / twelve
        + ((R::of(2.0) * phi_half + R::of(4.0) * R::PI() / R::of(3.0)).cos() - R::one())
            / (R::of(2.0) * R::PI())
}

/// Ideal actively tracked link with residual pointing error `ε ∈ [0, π/2]`:
/// the standard LOS budget with maximum axial gain.
pub fn pat_power<R: Real>(
    params: &SystemParams<R>,
    length: R,
    epsilon: R,
) -> Result<PowerResult<R>, PowerError> {
    check_length(length)?;
    if !(epsilon >= R::zero() && epsilon <= R::FRAC_PI_2()) {
        return Err(PowerError::InvalidPointingError(epsilon.widen()));
    }
    let m = lambertian_order(params.phi_half())?;
    let two_pi = R::of(2.0) * R::PI();
    let value = params.responsivity_factor() * params.tx_power() * (m + R::one())
        * params.aperture_area()
        / (two_pi * length * length)
        * (-params.extinction() * length).exp()
        * epsilon.cos().powf(m);
    Ok(PowerResult {
        value,
        variant: PowerVariant::Pat,
        link_length: length,
        offset_angle: None,
        pointing_error: Some(epsilon),
    })
}

/// Tracking error `ε*` at which the actively tracked link degrades to the
/// passive offset strategy, on absolute powers with identical `𝔯`, `L`, `c`.
pub fn pat_crossover<R: Real>(
    params: &SystemParams<R>,
    length: R,
    strategy_delta: R,
) -> Result<R, PowerError> {
    let offset = power_offset(params, length, strategy_delta)?.value;
    let axial = pat_power(params, length, R::zero())?.value;
    crossover_epsilon(params, length, offset, axial)
}

/// Bisection for `pat_power(ε) = offset` given the two absolute powers.
fn crossover_epsilon<R: Real>(
    params: &SystemParams<R>,
    length: R,
    offset: R,
    axial: R,
) -> Result<R, PowerError> {
    if offset >= axial {
        return Err(PowerError::NoCrossing);
    }
    let f = |eps: R| {
        pat_power(params, length, eps)
            .expect("epsilon stays inside [0, pi/2] during bisection")
            .value
            - offset
    };
    // f(0) > 0 and f(π/2) = -offset < 0: monotone decreasing in ε
    Ok(bisect_root(f, R::zero(), R::FRAC_PI_2(), R::of(CROSSOVER_TOL))
        .expect("crossover bracket always changes sign"))
}

/// Grid request for the received-power heatmaps.
#[derive(Debug, Clone)]
pub enum GridAxes<R: Real> {
    /// Offset angle × half-power angle at a fixed link length. Cells outside
    /// the `δ + φ₁⁄₂ ≤ π/2` validity domain are left empty.
    OffsetPhi {
        /// Offset angles δ [rad] (column axis).
        deltas: Vec<R>,
        /// Half-power angles φ₁⁄₂ [rad] (row axis).
        phi_halves: Vec<R>,
        /// Fixed link length [m].
        link_length: R,
    },
    /// Slab depth × node density; each cell's link length is the mean
    /// nearest-neighbor distance of its `(Λ, R)` pair.
    SlabDensity {
        /// Node densities Λ [1/m²] (column axis).
        lambdas: Vec<R>,
        /// Slab depths R [m] (row axis).
        slab_depths: Vec<R>,
        /// Pointing strategy δ [rad] applied in every cell.
        delta: R,
    },
}

/// One grid cell; `value` is empty where the requested formula is not
/// defined (offset outside its validity domain).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridCell<R: Real> {
    /// Row coordinate (φ₁⁄₂ [rad] or slab depth [m]).
    pub row: R,
    /// Column coordinate (δ [rad] or Λ [1/m²]).
    pub col: R,
    /// Received power [W], or normalized power when requested.
    pub value: Option<R>,
}

/// Row-major power grid.
#[derive(Debug, Clone, Serialize)]
pub struct PowerGrid<R: Real> {
    /// Cells in row-major order (row axis outer, column axis inner).
    pub cells: Vec<GridCell<R>>,
    /// Number of columns per row.
    pub n_cols: usize,
    /// Whether values were divided by the grid maximum.
    pub normalized: bool,
}

/// Evaluate the received-power family over a grid, row-major.
///
/// With `normalize`, every defined value is divided by the grid maximum, so
/// the largest cell equals exactly 1.
pub fn power_grid<R: Real>(
    params: &SystemParams<R>,
    axes: &GridAxes<R>,
    normalize: bool,
) -> Result<PowerGrid<R>, PowerError> {
    let mut cells = Vec::new();
    let n_cols;
    match axes {
        GridAxes::OffsetPhi { deltas, phi_halves, link_length } => {
            if deltas.is_empty() || phi_halves.is_empty() {
                return Err(PowerError::EmptyAxes);
            }
            n_cols = deltas.len();
            for &phi in phi_halves {
                let p = params.with_phi_half(phi);
                for &delta in deltas {
                    let value = match power_offset(&p, *link_length, delta) {
                        Ok(r) => Some(r.value),
                        Err(PowerError::OffsetBeyondValidity(_)) => None,
                        Err(e) => return Err(e),
                    };
                    cells.push(GridCell { row: phi, col: delta, value });
                }
            }
        }
        GridAxes::SlabDensity { lambdas, slab_depths, delta } => {
            if lambdas.is_empty() || slab_depths.is_empty() {
                return Err(PowerError::EmptyAxes);
            }
            n_cols = lambdas.len();
            for &depth in slab_depths {
                for &lambda in lambdas {
                    let link = NnDistribution::new(lambda, depth)?.mean_distance();
                    let value = power_offset(params, link, *delta)?.value;
                    cells.push(GridCell { row: depth, col: lambda, value: Some(value) });
                }
            }
        }
    }
    if normalize {
        let max = cells
            .iter()
            .filter_map(|c| c.value)
            .fold(R::zero(), |a, b| a.max(b));
        if max > R::zero() {
            for c in &mut cells {
                c.value = c.value.map(|v| v / max);
            }
        }
    }
    Ok(PowerGrid { cells, n_cols, normalized: normalize })
}
