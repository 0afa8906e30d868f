//! Simulation study for the adaptive LASSO in a correlated regression.
//!
//! The design is fixed: `n/k` stacked copies of a `k × k` block whose Gram
//! matrix is `k Ω`, with Toeplitz `Ω_ij = ρ^{|i-j|}`, so that `X'X = nΩ`.
//! Each replication draws fresh standard normal errors.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimators::{
    alasso_general, cross_validate_mu, default_cv_grid, RegressionProblem, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};
use crate::stats::{mean_sd, quantile_sorted, sort_floats};

/// `Ω_ij = ρ^{|i-j|}`.
pub fn toeplitz(k: usize, rho: f64) -> DMatrix<f64> {
    DMatrix::from_fn(k, k, |i, j| rho.powi(i.abs_diff(j) as i32))
}

fn check_shape(n: usize, k: usize, rho: f64) -> Result<()> {
    if k == 0 || n == 0 || n % k != 0 {
        return Err(domain(format!("n = {n} must be a positive multiple of k = {k}")));
    }
    if !(rho.abs() < 1.0) {
        return Err(domain(format!("|rho| must be below 1 for Ω to be positive definite, got {rho}")));
    }
    Ok(())
}

/// Lower-triangular `L` with `LL' = Ω`.
pub fn cholesky_factor(k: usize, rho: f64) -> Result<DMatrix<f64>> {
    check_shape(k, k, rho)?;
    toeplitz(k, rho)
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| domain("Ω is not positive definite"))
}

/// `n × k` design with `X'X = nΩ`: `n/k` copies of the block `k^{1/2} L'`.
pub fn build_design(n: usize, k: usize, rho: f64) -> Result<DMatrix<f64>> {
    check_shape(n, k, rho)?;
    let block = cholesky_factor(k, rho)?.transpose() * (k as f64).sqrt();
    Ok(DMatrix::from_fn(n, k, |i, j| block[(i % k, j)]))
}

/// `C_jj^{-1/2}` with `C = (nΩ)^{-1}`.
pub fn scaling_constants(n: usize, k: usize, rho: f64) -> Result<Vec<f64>> {
    check_shape(n, k, rho)?;
    let inv = toeplitz(k, rho)
        .try_inverse()
        .ok_or_else(|| domain("Ω is singular"))?;
    Ok((0..k).map(|j| (n as f64 / inv[(j, j)]).sqrt()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tuning {
    Fixed { mu: f64 },
    CrossValidated { folds: usize, grid: Vec<f64> },
}

impl Tuning {
    /// Ten folds over [`default_cv_grid`].
    pub fn cross_validated() -> Self {
        Tuning::CrossValidated { folds: 10, grid: default_cv_grid() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub n: usize,
    pub k: usize,
    pub rho: f64,
    pub gamma: f64,
    /// Overrides the default `(3, 1.5, γn^{-1/2}, …)` when set.
    pub theta: Option<Vec<f64>>,
    pub tuning: Tuning,
    pub replications: usize,
    pub seed: u64,
    /// Smooth the nonzero part of each marginal.
    pub kde: bool,
}

impl StudyConfig {
    /// `n = 100`, `k = 4`, `ρ = 0.5`, 1000 replications.
    pub fn canonical(gamma: f64, tuning: Tuning, seed: u64) -> Self {
        StudyConfig {
            n: 100,
            k: 4,
            rho: 0.5,
            gamma,
            theta: None,
            tuning,
            replications: 1000,
            seed,
            kde: true,
        }
    }

    /// True coefficient vector.
    pub fn theta(&self) -> Result<Vec<f64>> {
        match &self.theta {
            Some(t) if t.len() == self.k => Ok(t.clone()),
            Some(t) => Err(domain(format!("theta has {} entries, expected k = {}", t.len(), self.k))),
            None if self.k >= 2 => {
                let small = self.gamma / (self.n as f64).sqrt();
                let mut t = vec![3.0, 1.5];
                t.resize(self.k, small);
                Ok(t)
            }
            None => Err(domain("the default coefficient pattern needs k >= 2; pass theta explicitly")),
        }
    }

    fn validate(&self) -> Result<()> {
        check_shape(self.n, self.k, self.rho)?;
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(domain("gamma must be nonnegative"));
        }
        if self.replications == 0 {
            return Err(domain("replications must be positive"));
        }
        match &self.tuning {
            Tuning::Fixed { mu } if !(*mu > 0.0 && mu.is_finite()) => {
                Err(domain(format!("fixed mu must be positive, got {mu}")))
            }
            Tuning::CrossValidated { folds, grid } if *folds < 2 || grid.is_empty() => {
                Err(domain("cross-validation needs at least two folds and a nonempty grid"))
            }
            _ => Ok(()),
        }
    }
}

/// One replication: the estimate, or the error that aborted it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub estimate: Option<Vec<f64>>,
    pub mu_used: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeGrid {
    pub bandwidth: f64,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

impl KdeGrid {
    /// Trapezoid-rule integral of the density.
    pub fn mass(&self) -> f64 {
        self.x
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, d)| 0.5 * (x[1] - x[0]) * (d[0] + d[1]))
            .sum()
    }
}

/// Law of `C_jj^{-1/2}(θ̂_j - θ_j)`: an atom at `atom_location` with mass
/// `zero_frequency`, plus the remaining values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalSummary {
    pub component: usize,
    pub zero_count: usize,
    pub zero_frequency: f64,
    pub atom_location: f64,
    pub nonzero_values: Vec<f64>,
    pub kde: Option<KdeGrid>,
}

impl MarginalSummary {
    pub fn nonzero_median(&self) -> Option<f64> {
        if self.nonzero_values.is_empty() {
            return None;
        }
        let mut v = self.nonzero_values.clone();
        sort_floats(&mut v);
        Some(quantile_sorted(&v, 0.5))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub theta: Vec<f64>,
    pub scaling: Vec<f64>,
    pub summaries: Vec<MarginalSummary>,
    pub replications: Vec<ReplicationRecord>,
    pub failed_replications: usize,
}

impl StudyResult {
    /// Median of the tuning parameters actually used.
    pub fn median_mu(&self) -> f64 {
        let mut mus: Vec<f64> = self
            .replications
            .iter()
            .filter(|r| r.estimate.is_some())
            .map(|r| r.mu_used)
            .collect();
        sort_floats(&mut mus);
        quantile_sorted(&mus, 0.5)
    }
}

const KDE_POINTS: usize = 512;

/// Gaussian kernel density on 512 points spanning the data range ± 3
/// bandwidths, multiplied by `mass_scale`.
///
/// Bandwidth is Silverman's `0.9 min(sd, IQR/1.34) m^{-1/5}`; if the IQR
/// is zero but the values are not all equal, `sd` alone is used.
pub fn kde_smooth(values: &[f64], mass_scale: f64) -> Result<KdeGrid> {
    if values.is_empty() {
        return Err(domain("kernel smoothing needs at least one value"));
    }
    if !(0.0..=1.0).contains(&mass_scale) {
        return Err(domain(format!("mass_scale must lie in [0, 1], got {mass_scale}")));
    }
    let mut sorted = values.to_vec();
    sort_floats(&mut sorted);
    let (_, sd) = mean_sd(&sorted);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    if !(spread > 0.0) {
        return Err(Error::DegenerateBandwidth);
    }
    let m = sorted.len() as f64;
    let h = 0.9 * spread * m.powf(-0.2);
    let lo = sorted[0] - 3.0 * h;
    let hi = sorted[sorted.len() - 1] + 3.0 * h;
    let step = (hi - lo) / (KDE_POINTS - 1) as f64;
    let norm = mass_scale / (m * h * (2.0 * std::f64::consts::PI).sqrt());
    let x: Vec<f64> = (0..KDE_POINTS).map(|i| lo + step * i as f64).collect();
    let density = x
        .iter()
        .map(|&g| {
            // kernel contributions beyond 8h are below 1e-14 and skipped
            let a = sorted.partition_point(|&v| v < g - 8.0 * h);
            let b = sorted.partition_point(|&v| v <= g + 8.0 * h);
            norm * sorted[a..b].iter().map(|&v| (-0.5 * ((g - v) / h).powi(2)).exp()).sum::<f64>()
        })
        .collect();
    Ok(KdeGrid { bandwidth: h, x, density })
}

fn replicate(
    base: &RegressionProblem,
    mean: &DVector<f64>,
    tuning: &Tuning,
    seed: u64,
    rep: usize,
) -> Result<(Vec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    let noise = DVector::from_fn(mean.len(), |_, _| {
        <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)
    });
    let problem = base.with_response(mean + noise)?;
    let mu = match tuning {
        Tuning::Fixed { mu } => *mu,
        Tuning::CrossValidated { folds, grid } => {
            cross_validate_mu(&problem, *folds, grid, rng.gen())?
        }
    };
    let fit = alasso_general(&problem, mu, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    Ok((fit.estimate, mu))
}

/// Runs every replication (in parallel on the current rayon pool) and
/// summarizes each coefficient.
///
/// Replication `r` draws its errors from stream `r` of a ChaCha8 generator
/// keyed by `seed`, so studies with the same seed share their errors.
/// Failed fits are recorded and excluded from the summaries.
pub fn run_study(config: &StudyConfig) -> Result<StudyResult> {
    config.validate()?;
    let theta = config.theta()?;
    let design = build_design(config.n, config.k, config.rho)?;
    let scaling = scaling_constants(config.n, config.k, config.rho)?;
    let mean = &design * DVector::from_column_slice(&theta);
    let base = RegressionProblem::new(design, mean.clone(), 1.0)?;

    let replications: Vec<ReplicationRecord> = (0..config.replications)
        .into_par_iter()
        .map(|rep| match replicate(&base, &mean, &config.tuning, config.seed, rep) {
            Ok((estimate, mu_used)) => ReplicationRecord {
                replication: rep,
                estimate: Some(estimate),
                mu_used,
                error: None,
            },
            Err(e) => ReplicationRecord {
                replication: rep,
                estimate: None,
                mu_used: f64::NAN,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let ok: Vec<&Vec<f64>> = replications.iter().filter_map(|r| r.estimate.as_ref()).collect();
    let failed_replications = replications.len() - ok.len();
    let summaries = (0..config.k)
        .map(|j| {
            let zero_count = ok.iter().filter(|e| e[j] == 0.0).count();
            let zero_frequency = if ok.is_empty() { 0.0 } else { zero_count as f64 / ok.len() as f64 };
            let nonzero_values: Vec<f64> = ok
                .iter()
                .filter(|e| e[j] != 0.0)
                .map(|e| scaling[j] * (e[j] - theta[j]))
                .collect();
            let kde = if config.kde {
                kde_smooth(&nonzero_values, 1.0 - zero_frequency).ok()
            } else {
                None
            };
            MarginalSummary {
                component: j + 1,
                zero_count,
                zero_frequency,
                atom_location: -scaling[j] * theta[j],
                nonzero_values,
                kde,
            }
        })
        .collect();

    Ok(StudyResult {
        config: config.clone(),
        theta,
        scaling,
        summaries,
        replications,
        failed_replications,
    })
}
