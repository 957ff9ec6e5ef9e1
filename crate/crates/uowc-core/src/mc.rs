//! Seeded Monte Carlo oracles that independently validate the closed forms:
//! point-process realizations for the nearest-neighbor law and link depth,
//! and angular/aperture integral sampling for the received-power family.
//!
//! Everything here is plain unweighted Monte Carlo in `f64` — no variance
//! reduction — so the oracle shares nothing with the analytics it checks.
//! Sampling measures match the integrals' weights exactly (cosine-uniform
//! draws for sine-weighted angles), making each estimator a constant times a
//! sample mean.
//!
//! # Determinism
//!
//! Work is split into fixed-size chunks. Chunk `i` draws from a ChaCha
//! stream-cipher generator keyed by the run seed with stream index `i`, and
//! partial results are reduced in ascending chunk order. Identical
//! `(seed, n, parameters)` therefore give bit-identical results for **any**
//! worker count.

use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::config::SystemParams;
use crate::geometry::NnDistribution;

/// Trials per chunk; the unit of deterministic parallel decomposition.
const CHUNK_SIZE: u64 = 4096;

/// Errors for the Monte Carlo estimators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum McError {
    /// Sample budget below the floor where an estimate is meaningful.
    #[error("{what} requires at least {min} samples, got {got}")]
    TooFewSamples {
        /// Which estimator complained.
        what: &'static str,
        /// Minimum admissible count.
        min: u64,
        /// Requested count.
        got: u64,
    },
    /// Propagated geometry error.
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    /// Propagated power-formula error.
    #[error(transparent)]
    Power(#[from] crate::power::PowerError),
    /// Propagated channel error.
    #[error(transparent)]
    Channel(#[from] crate::channel::ChannelError),
}

/// A Monte Carlo estimate with its sampling pedigree.
#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    /// Sample mean (in the units of the estimated quantity).
    pub mean: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// Number of samples behind the estimate.
    pub n_samples: u64,
    /// Seed that reproduces the estimate bit-for-bit.
    pub seed: u64,
    /// Wall-clock time spent sampling; excluded from serialized reports so
    /// that output artifacts stay byte-identical across reruns.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl McEstimate {
    /// z-score of this estimate against a reference value.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.mean - reference) / self.std_error
    }
}

/// Generator for chunk `index` of a run keyed by `seed`.
fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Run `total` samples in fixed chunks across `workers` threads and return
/// per-chunk results in ascending chunk order, independent of scheduling.
fn run_chunks<T, F>(total: u64, workers: usize, seed: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    let n_chunks = total.div_ceil(CHUNK_SIZE);
    let workers = workers.max(1).min(n_chunks.max(1) as usize);
    let mut slots: Vec<Option<T>> = (0..n_chunks).map(|_| None).collect();
    std::thread::scope(|scope| {
        let work = &work;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut local = Vec::new();
                    let mut idx = w as u64;
                    while idx < n_chunks {
                        let count = CHUNK_SIZE.min(total - idx * CHUNK_SIZE);
                        let mut rng = chunk_rng(seed, idx);
                        local.push((idx, work(count, &mut rng)));
                        idx += workers as u64;
                    }
                    local
                })
            })
            .collect();
        for h in handles {
            for (idx, value) in h.join().expect("mc worker panicked") {
                slots[idx as usize] = Some(value);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("all chunks computed")).collect()
}

/// Running first and second moments, merged in chunk order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(mut self, other: Moments) -> Moments {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    fn std_error(&self) -> f64 {
        let n = self.n as f64;
        let var = ((self.sum_sq / n - self.mean() * self.mean()) * n / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    fn estimate(&self, scale: f64, seed: u64, elapsed: Duration) -> McEstimate {
        McEstimate {
            mean: scale * self.mean(),
            std_error: scale * self.std_error(),
            n_samples: self.n,
            seed,
            elapsed,
        }
    }
}

// ---------------------------------------------------------------------------
// Point-process realizations
// ---------------------------------------------------------------------------

/// Empirical nearest-neighbor sample set from full PPP realizations.
#[derive(Debug, Clone)]
pub struct NnSampleSet {
    /// Nearest-neighbor 3D distances, in trial order.
    pub distances: Vec<f64>,
    /// Vertical coordinate of the nearest neighbor, matching `distances`.
    pub depths: Vec<f64>,
    /// Trials whose truncated window contained no node at all; excluded from
    /// the samples. Essentially impossible by construction of the window.
    pub excluded_empty: u64,
    /// Horizontal truncation radius used for the realization window [m].
    pub window_radius: f64,
    /// Seed of the run.
    pub seed: u64,
}

impl NnSampleSet {
    /// Kolmogorov-Smirnov statistic of the sample against a reference CDF.
    pub fn ks_statistic(&self, dist: &NnDistribution<f64>) -> f64 {
        let mut sorted = self.distances.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut d = 0.0f64;
        for (i, &x) in sorted.iter().enumerate() {
            let f = dist.cdf(x).expect("sampled distances are non-negative");
            let hi = (i as f64 + 1.0) / n - f;
            let lo = f - i as f64 / n;
            d = d.max(hi).max(lo);
        }
        d
    }

    fn moment_of(&self, values: &[f64], seed: u64, elapsed: Duration) -> McEstimate {
        let mut m = Moments::default();
        for &v in values {
            m.push(v);
        }
        m.estimate(1.0, seed, elapsed)
    }

    /// Mean of the sampled nearest-neighbor distances.
    pub fn mean_distance_estimate(&self) -> McEstimate {
        self.moment_of(&self.distances.clone(), self.seed, Duration::ZERO)
    }

    /// Mean of the sampled nearest-neighbor depths.
    pub fn mean_depth_estimate(&self) -> McEstimate {
        self.moment_of(&self.depths.clone(), self.seed, Duration::ZERO)
    }
}

/// Horizontal window radius making the missed survival mass below 1e-9:
/// `max(R, sqrt(R²/3 + ln(10⁹)/(πΛ)))`.
fn window_radius(lambda_2d: f64, slab_depth: f64) -> f64 {
    let tail = (slab_depth * slab_depth / 3.0
        + (1e9f64).ln() / (core::f64::consts::PI * lambda_2d))
        .sqrt();
    slab_depth.max(tail)
}

/// Sample `trials` independent PPP realizations in a disc-of-radius-`R_w` ×
/// slab window and record the nearest neighbor's distance and height.
///
/// Requires at least 10³ trials.
pub fn mc_nn_distance(
    lambda_2d: f64,
    slab_depth: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<NnSampleSet, McError> {
    if trials < 1_000 {
        return Err(McError::TooFewSamples { what: "mc_nn_distance", min: 1_000, got: trials });
    }
    // validates positivity of (Λ, R)
    NnDistribution::new(lambda_2d, slab_depth)?;
    let r_w = window_radius(lambda_2d, slab_depth);
    let mean_count = lambda_2d * core::f64::consts::PI * r_w * r_w;
    let poisson = Poisson::new(mean_count).expect("positive Poisson mean");

    let chunks = run_chunks(trials, workers, seed, |count, rng| {
        let mut dists = Vec::with_capacity(count as usize);
        let mut depths = Vec::with_capacity(count as usize);
        let mut empty = 0u64;
        for _ in 0..count {
            let n = poisson.sample(rng) as u64;
            let mut best_d2 = f64::INFINITY;
            let mut best_z = 0.0;
            for _ in 0..n {
                // radius via sqrt for uniform area density; azimuth is
                // irrelevant to the distance and is not drawn
                let rho = r_w * rng.random::<f64>().sqrt();
                let z = slab_depth * rng.random::<f64>();
                let d2 = rho * rho + z * z;
                if d2 < best_d2 {
                    best_d2 = d2;
                    best_z = z;
                }
            }
            if n == 0 {
                empty += 1;
            } else {
                dists.push(best_d2.sqrt());
                depths.push(best_z);
            }
        }
        (dists, depths, empty)
    });

    let mut distances = Vec::with_capacity(trials as usize);
    let mut depths = Vec::with_capacity(trials as usize);
    let mut excluded_empty = 0;
    for (d, z, e) in chunks {
        distances.extend(d);
        depths.extend(z);
        excluded_empty += e;
    }
    Ok(NnSampleSet { distances, depths, excluded_empty, window_radius: r_w, seed })
}

/// Monte Carlo estimate of the expected vertical position of the nearest
/// neighbor, from the same realization scheme as [`mc_nn_distance`].
pub fn mc_expected_depth(
    lambda_2d: f64,
    slab_depth: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate, McError> {
    let start = Instant::now();
    let set = mc_nn_distance(lambda_2d, slab_depth, trials, seed, workers)?;
    let mut m = Moments::default();
    for &z in &set.depths {
        m.push(z);
    }
    Ok(m.estimate(1.0, seed, start.elapsed()))
}

// ---------------------------------------------------------------------------
// Angular integrals for the received-power family
// ---------------------------------------------------------------------------

/// `C₀' = 𝔯 P_Tx (m+1) π r² e^{-cL} / (16 π³ L²)`, the constant in front of
/// the four-angle orientation integral.
fn angular_constant(params: &SystemParams<f64>, length: f64, m: f64) -> f64 {
    let pi = core::f64::consts::PI;
    let r = params.aperture_radius();
    params.responsivity_factor() * params.tx_power() * (m + 1.0) * pi * r * r
        * (-params.extinction() * length).exp()
        / (16.0 * pi.powi(3) * length * length)
}

fn check_power_inputs(length: f64, samples: u64, what: &'static str) -> Result<(), McError> {
    if samples < 10_000 {
        return Err(McError::TooFewSamples { what, min: 10_000, got: samples });
    }
    if !(length > 0.0) {
        return Err(McError::Power(crate::power::PowerError::NonPositiveLength(length)));
    }
    Ok(())
}

/// Shared four-angle sampler: draws `cos θ ∈ [cos_lo, 1)`, `φ`, `cos α`, `β`
/// measure-matched to the `sin θ sin α` weights, and averages
/// `cosᵐθ · |cos γ|` with `cos γ = sin θ sin α cos(φ-β) + cos θ cos α`.
fn angular_moments(
    m: f64,
    cos_lo: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Moments {
    let two_pi = core::f64::consts::TAU;
    let width = 1.0 - cos_lo;
    run_chunks(samples, workers, seed, |count, rng| {
        let mut mm = Moments::default();
        for _ in 0..count {
            let u = cos_lo + width * rng.random::<f64>();
            let phi = two_pi * rng.random::<f64>();
            let v = 2.0 * rng.random::<f64>() - 1.0;
            let beta = two_pi * rng.random::<f64>();
            let st = (1.0 - u * u).sqrt();
            let sa = (1.0 - v * v).sqrt();
            let cos_gamma = st * sa * (phi - beta).cos() + u * v;
            mm.push(u.powf(m) * cos_gamma.abs());
        }
        mm
    })
    .into_iter()
    .fold(Moments::default(), Moments::merge)
}

/// Monte Carlo estimate of the random-orientation average received power
/// (the four-angle integral behind the `𝔯 P_Tx r²/(4L²) e^{-cL}` closed form).
pub fn mc_power_angular(
    params: &SystemParams<f64>,
    length: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate, McError> {
    check_power_inputs(length, samples, "mc_power_angular")?;
    let start = Instant::now();
    let m = params.lambertian_order();
    let moments = angular_moments(m, 0.0, samples, seed, workers);
    // full measure 2π·2π·1·2 = 8π²
    let scale = angular_constant(params, length, m) * 8.0 * core::f64::consts::PI.powi(2);
    Ok(moments.estimate(scale, seed, start.elapsed()))
}

/// Main-lobe variant: restricts `cos θ` to `[cos φ₁⁄₂, 1)` with the matching
/// `(1 - cos φ₁⁄₂)` measure correction; estimates the main-lobe closed form.
pub fn mc_power_main_lobe(
    params: &SystemParams<f64>,
    length: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate, McError> {
    check_power_inputs(length, samples, "mc_power_main_lobe")?;
    let start = Instant::now();
    let m = params.lambertian_order();
    let cos_lo = params.phi_half().cos();
    let moments = angular_moments(m, cos_lo, samples, seed, workers);
    let scale = angular_constant(params, length, m)
        * 8.0
        * core::f64::consts::PI.powi(2)
        * (1.0 - cos_lo);
    Ok(moments.estimate(scale, seed, start.elapsed()))
}

/// Monte Carlo estimate of the finite-aperture six-fold integral: samples a
/// point on the receiver disk in addition to the placement and orientation
/// angles, and evaluates the exact per-point distance, emission angle, and
/// incidence cosine.
///
/// In the far field (`L ≫ r`) this converges to the same closed form as
/// [`mc_power_angular`]; in the near field it keeps the aperture-geometry
/// bias the large-distance approximation discards.
pub fn mc_power_full(
    params: &SystemParams<f64>,
    length: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate, McError> {
    check_power_inputs(length, samples, "mc_power_full")?;
    let start = Instant::now();
    let m = params.lambertian_order();
    let r = params.aperture_radius();
    let c = params.extinction();
    let two_pi = core::f64::consts::TAU;

    let moments = run_chunks(samples, workers, seed, |count, rng| {
        let mut mm = Moments::default();
        for _ in 0..count {
            let u = rng.random::<f64>(); // cos θ_Rx
            let phi = two_pi * rng.random::<f64>();
            let v = 2.0 * rng.random::<f64>() - 1.0; // cos α
            let beta = two_pi * rng.random::<f64>();
            let rho = r * rng.random::<f64>().sqrt();
            let tp = two_pi * rng.random::<f64>();

            let st = (1.0 - u * u).sqrt();
            let sa = (1.0 - v * v).sqrt();
            // disk center and unit normal
            let center = [length * st * phi.cos(), length * st * phi.sin(), length * u];
            let normal = [sa * beta.cos(), sa * beta.sin(), v];
            // orthonormal frame spanning the disk plane
            let axis = if normal[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
            let mut e1 = cross(normal, axis);
            let norm = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
            e1 = [e1[0] / norm, e1[1] / norm, e1[2] / norm];
            let e2 = cross(normal, e1);
            let (ct, stp) = (tp.cos(), tp.sin());
            let p = [
                center[0] + rho * (ct * e1[0] + stp * e2[0]),
                center[1] + rho * (ct * e1[1] + stp * e2[1]),
                center[2] + rho * (ct * e1[2] + stp * e2[2]),
            ];
            let dist = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let cos_theta = p[2] / dist; // exact emission angle
            if cos_theta <= 0.0 {
                mm.push(0.0); // behind the emission hemisphere: no radiance
                continue;
            }
            let cos_gamma =
                (p[0] * normal[0] + p[1] * normal[1] + p[2] * normal[2]).abs() / dist;
            mm.push(cos_theta.powf(m) / (dist * dist) * (-c * dist).exp() * cos_gamma);
        }
        mm
    })
    .into_iter()
    .fold(Moments::default(), Moments::merge);

    let scale = 0.5 * params.responsivity_factor() * params.tx_power() * (m + 1.0) * r * r;
    Ok(moments.estimate(scale, seed, start.elapsed()))
}

#[inline]
fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
