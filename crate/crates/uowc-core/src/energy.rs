//! Energy-constrained density/power strategy: map a node density to its
//! representative link geometry, find the minimum transmit power meeting the
//! BER constraint for the baseline (δ = 0) and offset (δ = δ_opt) pointing
//! strategies, evaluate the total-bits objective
//!
//! ```text
//! N_b(Λ, P) = B · E_total / (𝒜 · Λ · P),     𝒜 = π · deploy_radius²
//! ```
//!
//! and sweep or optimize over the density.
//!
//! A density maps to the **mean** nearest-neighbor distance and the expected
//! vertical depth of that neighbor; the median is available separately via
//! the inverse CDF for sensitivity runs. Infeasibility (the BER target not
//! reachable at `ptx_max`) is reported as data, never as a panic, so sweeps
//! over hostile regimes complete.

use serde::Serialize;

use crate::config::SystemParams;
use crate::geometry::{GeometryError, NnDistribution};
use crate::numeric::golden_max;
use crate::power::{optimal_offset_exact, power_offset, PowerError};
use crate::scalar::Real;
use crate::sipm::{ber_ook, noise_variances, snr, NoiseBreakdown, SipmError};

/// Relative bracket width for the minimum-power bisection.
const POWER_REL_WIDTH: f64 = 1e-6;
/// Relative tolerance for the golden-section refinement of Λ*.
const LAMBDA_REL_TOL: f64 = 1e-4;

/// Pointing strategy for the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Fixed vertical orientation, δ = 0.
    Baseline,
    /// Receiver tilted to the optimal offset δ_opt(φ₁⁄₂).
    Offset,
}

/// Errors from the energy chain.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnergyError {
    /// Propagated geometry error.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    /// Propagated received-power error.
    #[error(transparent)]
    Power(#[from] PowerError),
    /// Propagated receiver-chain error.
    #[error(transparent)]
    Sipm(#[from] SipmError),
    /// Density grid not strictly increasing and positive.
    #[error("lambda grid must be non-empty, strictly increasing and positive")]
    BadGrid,
    /// Zero or negative input where the objective needs a positive value.
    #[error("{0} must be positive")]
    NonPositiveInput(&'static str),
    /// Every grid point failed the BER constraint at `ptx_max`.
    #[error("no feasible point on the lambda grid")]
    AllInfeasible,
}

/// Full KPI chain of one link configuration.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinkReport<R: Real> {
    /// Node density Λ [1/m²].
    pub lambda_2d: R,
    /// Pointing offset δ [rad].
    pub delta: R,
    /// Transmit power [W].
    pub tx_power: R,
    /// Mean nearest-neighbor link length [m].
    pub link_length: R,
    /// Expected vertical depth of the nearest neighbor [m].
    pub link_depth: R,
    /// Received optical power [W].
    pub received_power: R,
    /// Electrical SNR.
    pub snr: R,
    /// NRZ-OOK bit error rate.
    pub ber: R,
    /// Receiver noise breakdown at this operating point.
    pub noise: NoiseBreakdown<R>,
}

/// Minimum-transmit-power search outcome for one (Λ, δ) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinTxPower<R: Real> {
    /// The BER target is met; `power` is the smallest admissible setting.
    Feasible {
        /// Minimum transmit power [W].
        power: R,
        /// Whether the hardware floor is what bounds it from below.
        floor_active: bool,
    },
    /// The BER target is not met even at `ptx_max`.
    Infeasible,
}

impl<R: Real> MinTxPower<R> {
    /// Feasible power, if any.
    pub fn power(&self) -> Option<R> {
        match self {
            Self::Feasible { power, .. } => Some(*power),
            Self::Infeasible => None,
        }
    }

    /// Whether the floor clamp produced the value.
    pub fn floor_active(&self) -> bool {
        matches!(self, Self::Feasible { floor_active: true, .. })
    }

    /// Whether the target is reachable at all.
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }
}

/// One row of the density sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRecord<R: Real> {
    /// Node density Λ [1/m²].
    pub lambda_2d: R,
    /// Mean nearest-neighbor link length [m].
    pub mean_link_m: R,
    /// Expected link depth [m].
    pub mean_depth_m: R,
    /// Minimum feasible power, baseline strategy [W].
    pub ptx_min_base: Option<R>,
    /// Minimum feasible power, offset strategy [W].
    pub ptx_min_offset: Option<R>,
    /// Total bits at the baseline minimum power.
    pub nb_base: Option<R>,
    /// Total bits at the offset minimum power.
    pub nb_offset: Option<R>,
    /// Floor clamp active for the baseline strategy.
    pub floor_base: bool,
    /// Floor clamp active for the offset strategy.
    pub floor_offset: bool,
    /// Baseline strategy feasible.
    pub feasible_base: bool,
    /// Offset strategy feasible.
    pub feasible_offset: bool,
}

impl<R: Real> SweepRecord<R> {
    /// Strategy view of (minimum power, total bits, floor flag, feasible flag).
    pub fn strategy(&self, s: Strategy) -> (Option<R>, Option<R>, bool, bool) {
        match s {
            Strategy::Baseline => (self.ptx_min_base, self.nb_base, self.floor_base, self.feasible_base),
            Strategy::Offset => {
                (self.ptx_min_offset, self.nb_offset, self.floor_offset, self.feasible_offset)
            }
        }
    }
}

/// Optimizer outcome: the best grid record plus the golden-section-refined
/// density.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizeOutcome<R: Real> {
    /// Strategy that was optimized.
    pub strategy: Strategy,
    /// Best record on the evaluation grid.
    pub best_record: SweepRecord<R>,
    /// Refined density Λ* [1/m²].
    pub lambda_star: R,
    /// Objective value at Λ*.
    pub nb_star: R,
    /// Minimum power at Λ*.
    pub ptx_star: R,
    /// Whether the feasible objective was unimodal over the grid; when it is
    /// not, the result is the grid argmax and this flag is the warning.
    pub unimodal: bool,
}

/// Mean link length and expected depth for a density under `params`.
fn node_geometry<R: Real>(
    lambda_2d: R,
    params: &SystemParams<R>,
) -> Result<(R, R), GeometryError> {
    let dist = NnDistribution::new(lambda_2d, params.slab_depth())?;
    Ok((dist.mean_distance(), dist.expected_link_depth()))
}

/// Received power per transmitted watt for offset `delta` at length `link`.
fn unit_received_power<R: Real>(
    params: &SystemParams<R>,
    link: R,
    delta: R,
) -> Result<R, PowerError> {
    Ok(power_offset(&params.with_tx_power(R::one()), link, delta)?.value)
}

/// Evaluate the full KPI chain at an explicit operating point.
pub fn link_kpis<R: Real>(
    lambda_2d: R,
    tx_power: R,
    delta: R,
    params: &SystemParams<R>,
) -> Result<LinkReport<R>, EnergyError> {
    if !(tx_power > R::zero()) {
        return Err(EnergyError::NonPositiveInput("tx_power"));
    }
    let (link_length, link_depth) = node_geometry(lambda_2d, params)?;
    let received_power = power_offset(&params.with_tx_power(tx_power), link_length, delta)?.value;
    let noise = noise_variances(received_power, params, link_depth)?;
    let snr_value = snr(received_power, params, link_depth)?;
    let ber = ber_ook(snr_value)?;
    Ok(LinkReport {
        lambda_2d,
        delta,
        tx_power,
        link_length,
        link_depth,
        received_power,
        snr: snr_value,
        ber,
        noise,
    })
}

/// BER at transmit power `p` given the per-watt received power and depth.
fn ber_at<R: Real>(params: &SystemParams<R>, unit: R, depth: R, p: R) -> R {
    let s = snr(unit * p, params, depth).expect("non-negative power along the search");
    ber_ook(s).expect("SNR is non-negative")
}

/// Core bisection on `[ptx_floor, ptx_max]`, exploiting BER monotonicity.
fn solve_min_power<R: Real>(params: &SystemParams<R>, unit: R, depth: R) -> MinTxPower<R> {
    let th = params.ber_threshold();
    let floor = params.ptx_floor();
    let max = params.ptx_max();
    if ber_at(params, unit, depth, floor) <= th {
        return MinTxPower::Feasible { power: floor, floor_active: true };
    }
    if ber_at(params, unit, depth, max) > th {
        return MinTxPower::Infeasible;
    }
    let rel = R::of(POWER_REL_WIDTH);
    let mut lo = floor; // infeasible end
    let mut hi = max; // feasible end
    let two = R::of(2.0);
    while hi - lo > rel * hi {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if ber_at(params, unit, depth, mid) <= th {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    MinTxPower::Feasible { power: hi, floor_active: false }
}

/// Smallest transmit power with `BER ≤ ber_threshold` for density
/// `lambda_2d` and pointing offset `delta`, clamped to the hardware floor.
pub fn min_power_for_ber<R: Real>(
    lambda_2d: R,
    delta: R,
    params: &SystemParams<R>,
) -> Result<MinTxPower<R>, EnergyError> {
    let (link, depth) = node_geometry(lambda_2d, params)?;
    let unit = unit_received_power(params, link, delta)?;
    Ok(solve_min_power(params, unit, depth))
}

/// Total transmittable bits `B·E_total / (𝒜·Λ·P)` under the shared budget.
pub fn total_bits<R: Real>(
    lambda_2d: R,
    tx_power: R,
    params: &SystemParams<R>,
) -> Result<R, EnergyError> {
    if !(lambda_2d > R::zero()) {
        return Err(EnergyError::NonPositiveInput("lambda_2d"));
    }
    if !(tx_power > R::zero()) {
        return Err(EnergyError::NonPositiveInput("tx_power"));
    }
    let area = R::PI() * params.deploy_radius() * params.deploy_radius();
    Ok(params.bandwidth() * params.energy_total() / (area * lambda_2d * tx_power))
}

/// Sweep the density grid, solving both strategies per cell.
///
/// The grid must be strictly increasing and positive. Per-cell infeasibility
/// is recorded in the flags; the sweep itself always completes.
pub fn density_sweep<R: Real>(
    params: &SystemParams<R>,
    lambda_grid: &[R],
) -> Result<Vec<SweepRecord<R>>, EnergyError> {
    if lambda_grid.is_empty()
        || lambda_grid[0] <= R::zero()
        || lambda_grid.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(EnergyError::BadGrid);
    }
    let delta_opt = optimal_offset_exact(params.phi_half())?;
    let mut out = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let (link, depth) = node_geometry(lambda, params)?;
        let base = solve_min_power(params, unit_received_power(params, link, R::zero())?, depth);
        let offset = solve_min_power(params, unit_received_power(params, link, delta_opt)?, depth);
        let nb_of = |mp: &MinTxPower<R>| -> Result<Option<R>, EnergyError> {
            mp.power().map(|p| total_bits(lambda, p, params)).transpose()
        };
        out.push(SweepRecord {
            lambda_2d: lambda,
            mean_link_m: link,
            mean_depth_m: depth,
            ptx_min_base: base.power(),
            ptx_min_offset: offset.power(),
            nb_base: nb_of(&base)?,
            nb_offset: nb_of(&offset)?,
            floor_base: base.floor_active(),
            floor_offset: offset.floor_active(),
            feasible_base: base.is_feasible(),
            feasible_offset: offset.is_feasible(),
        });
    }
    Ok(out)
}

/// Objective `N_b(Λ, ptx_min(Λ))` for one strategy; zero when infeasible.
fn objective<R: Real>(params: &SystemParams<R>, delta: R, lambda: R) -> R {
    let feasible = min_power_for_ber(lambda, delta, params)
        .ok()
        .and_then(|mp| mp.power())
        .and_then(|p| total_bits(lambda, p, params).ok());
    feasible.unwrap_or(R::zero())
}

/// Maximize `N_b(Λ, ptx_min(Λ))` over the grid for one strategy, then refine
/// the density inside the bracketing grid cell by golden section.
///
/// If the feasible objective is not unimodal over the grid, the grid argmax
/// is still returned, flagged via `unimodal = false`.
pub fn optimize<R: Real>(
    params: &SystemParams<R>,
    lambda_grid: &[R],
    strategy: Strategy,
) -> Result<OptimizeOutcome<R>, EnergyError> {
    let records = density_sweep(params, lambda_grid)?;
    let delta = match strategy {
        Strategy::Baseline => R::zero(),
        Strategy::Offset => optimal_offset_exact(params.phi_half())?,
    };

    let nb_at = |r: &SweepRecord<R>| r.strategy(strategy).1;
    let best_idx = records
        .iter()
        .enumerate()
        .filter_map(|(i, r)| nb_at(r).map(|nb| (i, nb)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("objective values are finite"))
        .map(|(i, _)| i)
        .ok_or(EnergyError::AllInfeasible)?;

    // unimodal over the feasible records: rises then falls, no second rise
    let values: Vec<R> = records.iter().filter_map(|r| nb_at(r)).collect();
    let mut descended = false;
    let mut unimodal = true;
    for w in values.windows(2) {
        if w[1] < w[0] {
            descended = true;
        } else if descended && w[1] > w[0] {
            unimodal = false;
            break;
        }
    }

    let lo = if best_idx == 0 { lambda_grid[0] } else { lambda_grid[best_idx - 1] };
    let hi = if best_idx + 1 == lambda_grid.len() {
        lambda_grid[best_idx]
    } else {
        lambda_grid[best_idx + 1]
    };
    let (lambda_star, nb_star) = if lo < hi {
        golden_max(|l| objective(params, delta, l), lo, hi, R::of(LAMBDA_REL_TOL))
    } else {
        (lambda_grid[best_idx], values[0].max(R::zero()))
    };
    // keep the better of grid argmax and refined point (golden section can
    // only improve on a unimodal objective, but do not regress otherwise)
    let grid_best_nb = nb_at(&records[best_idx]).expect("argmax is feasible");
    let (lambda_star, nb_star) = if nb_star >= grid_best_nb {
        (lambda_star, nb_star)
    } else {
        (records[best_idx].lambda_2d, grid_best_nb)
    };
    let ptx_star = min_power_for_ber(lambda_star, delta, params)?
        .power()
        .ok_or(EnergyError::AllInfeasible)?;

    Ok(OptimizeOutcome {
        strategy,
        best_record: records[best_idx],
        lambda_star,
        nb_star,
        ptx_star,
        unimodal,
    })
}
