//! Estimating the finite-sample cdf of the estimator, and experiments
//! showing that no estimator can do so uniformly well in `θ`.
//!
//! As `θ` crosses `-t/√n` the value `F_{n,θ}(t)` jumps by
//! [`oscillation`], while the law of the data barely changes. Any
//! estimator therefore misses one side of the jump by at least half its
//! size with probability close to one half.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::TuningKind;
use crate::error::{domain, Result};
use crate::estimators::garotte;
use crate::exact_dist::{cdf_f, cdf_g};
use crate::model::LocationModel;
use crate::normal::{phi, phi_interval};

/// Size of the jump of `θ ↦ F_{n,θ}(t)` at `θ = -t/√n`.
pub fn oscillation(n: u64, mu: f64, t: f64) -> Result<f64> {
    LocationModel::new(n, 0.0, mu)?;
    if !t.is_finite() {
        return Err(domain("t must be finite"));
    }
    let m = (n as f64).sqrt() * mu;
    Ok(phi_interval(t - m, t + m))
}

/// `|F_{n,θ(-δ)}(t) - F_{n,θ(δ)}(t)|` with `θ(δ) = -(t + δ)/√n`; tends to
/// [`oscillation`] as `δ ↓ 0`.
pub fn oscillation_finite(n: u64, mu: f64, t: f64, delta: f64) -> Result<f64> {
    let sqrt_n = (n as f64).sqrt();
    let left = LocationModel::new(n, -(t - delta) / sqrt_n, mu)?;
    let right = LocationModel::new(n, -(t + delta) / sqrt_n, mu)?;
    Ok((cdf_f(&left, t) - cdf_f(&right, t)).abs())
}

/// Which centering and scaling is being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `n^{1/2}(θ̂_A - θ)`
    F,
    /// `μ^{-1}(θ̂_A - θ)`
    G,
}

impl Target {
    pub fn true_cdf(self, model: &LocationModel, t: f64) -> f64 {
        match self {
            Target::F => cdf_f(model, t),
            Target::G => cdf_g(model, t),
        }
    }

    /// Scale of the parameter neighbourhood: `n^{-1/2}` or `μ`.
    fn theta_scale(self, n: u64, mu: f64) -> f64 {
        match self {
            Target::F => 1.0 / (n as f64).sqrt(),
            Target::G => mu,
        }
    }
}

/// Largest `ε` for which the impossibility bound is nontrivial.
pub fn theory_epsilon_bound(target: Target, n: u64, mu: f64, t: f64) -> Result<f64> {
    match target {
        Target::F => Ok(0.5 * oscillation(n, mu, t)?),
        Target::G => {
            LocationModel::new(n, 0.0, mu)?;
            let m = (n as f64).sqrt() * mu;
            Ok(0.5 * phi_interval(m * (t - 1.0), m * (t + 1.0)))
        }
    }
}

pub const DEFAULT_PRETEST_EXPONENT: f64 = 0.25;

/// Pre-test plug-in: test `θ = 0` by `|ȳ| <= n^{-threshold_exponent}`,
/// then report the pointwise large-sample cdf for the chosen model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PretestRule {
    pub threshold_exponent: f64,
    pub kind: TuningKind,
}

impl PretestRule {
    pub fn new(kind: TuningKind) -> Self {
        PretestRule { threshold_exponent: DEFAULT_PRETEST_EXPONENT, kind }
    }

    /// Estimate of `F_{n,θ}(t)` from the sample mean.
    pub fn estimate(&self, y_bar: f64, n: u64, mu: f64, t: f64) -> f64 {
        let nf = n as f64;
        let accept = y_bar.abs() <= nf.powf(-self.threshold_exponent);
        match (self.kind, accept) {
            (TuningKind::Consistent, true) => {
                if t >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            (TuningKind::Consistent, false) => phi(t + nf.sqrt() * mu * mu / y_bar),
            (_, true) => {
                let m = nf.sqrt() * mu;
                let half_disc = (0.5 * t).hypot(m);
                if t >= 0.0 {
                    phi(0.5 * t + half_disc)
                } else {
                    phi(0.5 * t - half_disc)
                }
            }
            (_, false) => phi(t),
        }
    }
}

/// [`PretestRule::estimate`] with the default `n^{-1/4}` threshold.
pub fn pretest_estimator(y_bar: f64, n: u64, mu: f64, t: f64, kind: TuningKind) -> f64 {
    PretestRule::new(kind).estimate(y_bar, n, mu, t)
}

/// m-out-of-n bootstrap. Subsamples are tuned with
/// `μ_m = μ_n (n/m)^{mu_exponent}`, i.e. the same power-law rule as the
/// full sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapRule {
    pub subsample_size: usize,
    pub reps: usize,
    pub mu_exponent: f64,
}

impl BootstrapRule {
    fn check(&self, n: usize) -> Result<()> {
        if self.subsample_size == 0 || self.subsample_size >= n {
            return Err(domain(format!(
                "subsample size m = {} must satisfy 0 < m < n = {n}",
                self.subsample_size
            )));
        }
        if self.reps == 0 {
            return Err(domain("bootstrap needs at least one replicate"));
        }
        Ok(())
    }

    pub fn subsample_mu(&self, n: usize, mu_n: f64) -> f64 {
        mu_n * (n as f64 / self.subsample_size as f64).powf(self.mu_exponent)
    }
}

/// Fraction of bootstrap replicates with scaled deviation `<= t`.
///
/// The deviation is `m^{1/2}(θ̂*_m - θ̂_n)` for [`Target::F`] and
/// `μ_m^{-1}(θ̂*_m - θ̂_n)` for [`Target::G`].
pub fn bootstrap_estimator(
    data: &[f64],
    rule: &BootstrapRule,
    target: Target,
    mu_n: f64,
    t: f64,
    seed: u64,
) -> Result<f64> {
    let n = data.len();
    rule.check(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(bootstrap_with_rng(data, rule, target, mu_n, t, &mut rng))
}

fn bootstrap_with_rng(
    data: &[f64],
    rule: &BootstrapRule,
    target: Target,
    mu_n: f64,
    t: f64,
    rng: &mut impl Rng,
) -> f64 {
    let n = data.len();
    let m = rule.subsample_size;
    let full = garotte(data.iter().sum::<f64>() / n as f64, mu_n);
    let mu_m = rule.subsample_mu(n, mu_n);
    let scale = match target {
        Target::F => (m as f64).sqrt(),
        Target::G => 1.0 / mu_m,
    };
    let hits = (0..rule.reps)
        .filter(|_| {
            let sum: f64 = (0..m).map(|_| data[rng.gen_range(0..n)]).sum();
            scale * (garotte(sum / m as f64, mu_m) - full) <= t
        })
        .count();
    hits as f64 / rule.reps as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CdfEstimator {
    PretestPlugin(PretestRule),
    MOutOfNBootstrap(BootstrapRule),
}

/// Settings of a worst-case experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseConfig {
    pub estimator: CdfEstimator,
    pub target: Target,
    pub n: u64,
    pub mu: f64,
    pub t: f64,
    pub c: f64,
    pub epsilon: f64,
    pub grid_size: usize,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseReport {
    pub config: WorstCaseConfig,
    pub t: f64,
    pub c: f64,
    pub epsilon: f64,
    pub theta_grid: Vec<f64>,
    pub true_cdf_by_theta: Vec<f64>,
    pub failure_prob_by_theta: Vec<f64>,
    pub sup_failure_prob: f64,
    pub theory_epsilon_bound: f64,
}

/// `size` points in the open interval `(lo, hi)`, packed geometrically
/// around `center` from both sides.
pub fn concentrated_grid(center: f64, lo: f64, hi: f64, size: usize) -> Result<Vec<f64>> {
    if !(lo < center && center < hi) || size == 0 {
        return Err(domain("grid centre must lie inside (lo, hi) and size must be positive"));
    }
    const RATIO: f64 = 0.6;
    const REACH: f64 = 0.99;
    let left = (size - 1) / 2;
    let right = size - 1 - left;
    let mut grid: Vec<f64> = (0..left)
        .map(|k| center - REACH * (center - lo) * RATIO.powi(k as i32))
        .collect();
    grid.push(center);
    grid.extend((0..right).rev().map(|k| center + REACH * (hi - center) * RATIO.powi(k as i32)));
    Ok(grid)
}

/// Monte Carlo estimate of `P(|F̂(t) - F_{n,θ}(t)| > ε)` over a grid of `θ`
/// in `(-c s, c s)` with `s = n^{-1/2}` (target F) or `s = μ` (target G).
pub fn worst_case_experiment(config: &WorstCaseConfig) -> Result<WorstCaseReport> {
    let &WorstCaseConfig { estimator, target, n, mu, t, c, epsilon, grid_size, reps, seed } = config;
    let bound = theory_epsilon_bound(target, n, mu, t)?;
    if !(epsilon > 0.0 && epsilon < bound) {
        return Err(domain(format!(
            "epsilon = {epsilon} must lie in (0, {bound}); outside that range the bound is vacuous"
        )));
    }
    if !(c > t.abs()) {
        return Err(domain(format!("c = {c} must exceed |t| = {}", t.abs())));
    }
    if reps == 0 {
        return Err(domain("reps must be positive"));
    }
    if let CdfEstimator::MOutOfNBootstrap(rule) = &estimator {
        rule.check(n as usize)?;
    }
    let s = target.theta_scale(n, mu);
    let theta_grid = concentrated_grid(-t * s, -c * s, c * s, grid_size)?;
    let sqrt_n = (n as f64).sqrt();
    let t_f = match target {
        Target::F => t,
        Target::G => sqrt_n * mu * t,
    };

    let rows: Vec<(f64, f64)> = theta_grid
        .par_iter()
        .enumerate()
        .map(|(i, &theta)| {
            let model = LocationModel::new(n, theta, mu)?;
            let truth = target.true_cdf(&model, t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut sample = Vec::new();
            let failures = (0..reps)
                .filter(|_| {
                    let est = match &estimator {
                        CdfEstimator::PretestPlugin(rule) => {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            rule.estimate(theta + z / sqrt_n, n, mu, t_f)
                        }
                        CdfEstimator::MOutOfNBootstrap(rule) => {
                            sample.clear();
                            sample.extend((0..n).map(|_| {
                                theta + <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)
                            }));
                            bootstrap_with_rng(&sample, rule, target, mu, t, &mut rng)
                        }
                    };
                    (est - truth).abs() > epsilon
                })
                .count();
            Ok((truth, failures as f64 / reps as f64))
        })
        .collect::<Result<_>>()?;

    let (true_cdf_by_theta, failure_prob_by_theta): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let sup_failure_prob = failure_prob_by_theta.iter().copied().fold(0.0, f64::max);
    Ok(WorstCaseReport {
        config: *config,
        t,
        c,
        epsilon,
        theta_grid,
        true_cdf_by_theta,
        failure_prob_by_theta,
        sup_failure_prob,
        theory_epsilon_bound: bound,
    })
}

/// `sup_θ |G_{n,θ}(t) - 1(t > 0)|` over `thetas`. For `|t| > 1` this
/// vanishes as `n → ∞` in the consistent regime, so the constant
/// estimator is uniformly consistent there.
pub fn trivial_tail_error(n: u64, mu: f64, t: f64, thetas: &[f64]) -> Result<f64> {
    let target = if t > 0.0 { 1.0 } else { 0.0 };
    thetas.iter().try_fold(0.0_f64, |acc, &theta| {
        let model = LocationModel::new(n, theta, mu)?;
        Ok(acc.max((cdf_g(&model, t) - target).abs()))
    })
}
