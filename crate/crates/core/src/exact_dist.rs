//! Exact finite-sample law of the adaptive LASSO in the location model.
//!
//! The centered and scaled estimator `n^{1/2}(θ̂_A - θ)` has an atom at
//! `-n^{1/2}θ` (the event `θ̂_A = 0`) and an absolutely continuous part. Its
//! cdf is
//!
//! ```text
//! F(x) = 1(n^{1/2}θ + x >= 0) Φ(z2(x)) + 1(n^{1/2}θ + x < 0) Φ(z1(x))
//! ```
//!
//! where `z1 <= z2` solve `z² + (n^{1/2}θ - x) z - (nμ² + n^{1/2}θx) = 0`.
//! The law of `μ^{-1}(θ̂_A - θ)` follows by rescaling: `G(x) = F(n^{1/2}μx)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::estimators::garotte;
use crate::model::LocationModel;
use crate::normal::{pdf, phi, phi_interval};
use crate::quadrature;

/// The two roots `z1 <= z2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootPair {
    pub z1: f64,
    pub z2: f64,
}

/// Roots of `z² + b z + c = 0` with discriminant `b²/4 - c = half_disc²`,
/// evaluated without cancellation: the larger-magnitude root comes from the
/// direct formula, the other from `z1 z2 = c`.
fn stable_roots(b: f64, c: f64, half_disc: f64) -> RootPair {
    if b >= 0.0 {
        let z1 = -0.5 * b - half_disc;
        RootPair { z1, z2: c / z1 }
    } else {
        let z2 = -0.5 * b + half_disc;
        RootPair { z1: c / z2, z2 }
    }
}

/// Zeros `z1(x) <= z2(x)` governing the cdf at `x`.
pub fn roots(model: &LocationModel, x: f64) -> RootPair {
    let st = model.scaled_theta();
    let sm = model.scaled_mu();
    let b = st - x;
    let c = -(sm * sm + st * x);
    let half_disc = (0.5 * (st + x)).hypot(sm);
    stable_roots(b, c, half_disc)
}

/// Rescaled zeros `w1 <= w2` for the law of `μ^{-1}(θ̂_A - θ)`:
/// `n^{1/2}μ {(-θ/μ + x) ± ((θ/μ + x)² + 4)^{1/2}}/2`.
pub fn rescaled_roots(model: &LocationModel, x: f64) -> RootPair {
    let zeta = model.theta() / model.mu();
    let sm = model.scaled_mu();
    // w/sm solves v² - (x - ζ) v - (1 + ζx) = 0
    let half_disc = (0.5 * (zeta + x)).hypot(1.0);
    let r = stable_roots(zeta - x, -(1.0 + zeta * x), half_disc);
    RootPair { z1: sm * r.z1, z2: sm * r.z2 }
}

/// Probability of selecting the restricted model, `P(θ̂_A = 0)`.
pub fn selection_prob(model: &LocationModel) -> f64 {
    let st = model.scaled_theta();
    let sm = model.scaled_mu();
    phi_interval(-st - sm, -st + sm)
}

/// Cdf of `n^{1/2}(θ̂_A - θ)`; right-continuous.
pub fn cdf_f(model: &LocationModel, x: f64) -> f64 {
    let r = roots(model, x);
    if model.scaled_theta() + x >= 0.0 {
        phi(r.z2)
    } else {
        phi(r.z1)
    }
}

/// Left limit `F(x-)`, exact at the atom.
pub fn cdf_f_left(model: &LocationModel, x: f64) -> f64 {
    let r = roots(model, x);
    if model.scaled_theta() + x > 0.0 {
        phi(r.z2)
    } else {
        phi(r.z1)
    }
}

/// Lebesgue density of the absolutely continuous part of
/// `n^{1/2}(θ̂_A - θ)`. Undefined at the atom.
pub fn density_f(model: &LocationModel, x: f64) -> Result<f64> {
    let s = model.scaled_theta() + x;
    if s == 0.0 {
        return Err(domain(format!(
            "density is undefined at the atom x = {}",
            -model.scaled_theta()
        )));
    }
    let r = roots(model, x);
    let t = 0.5 * s / (0.5 * s).hypot(model.scaled_mu());
    Ok(if s > 0.0 {
        0.5 * pdf(r.z2) * (1.0 + t)
    } else {
        0.5 * pdf(r.z1) * (1.0 - t)
    })
}

/// Cdf of `μ^{-1}(θ̂_A - θ)`, i.e. `F(n^{1/2} μ x)`.
pub fn cdf_g(model: &LocationModel, x: f64) -> f64 {
    cdf_f(model, model.scaled_mu() * x)
}

/// [`cdf_g`] evaluated through the rescaled roots instead of through `F`.
pub fn cdf_g_rescaled(model: &LocationModel, x: f64) -> f64 {
    let w = rescaled_roots(model, x);
    if model.theta() / model.mu() + x >= 0.0 {
        phi(w.z2)
    } else {
        phi(w.z1)
    }
}

/// Which centering and scaling a [`FiniteSampleDist`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// `n^{1/2}(θ̂_A - θ)`
    SqrtN,
    /// `μ^{-1}(θ̂_A - θ)`
    InvMu,
}

/// Exact law of the centered and scaled estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteSampleDist {
    pub model: LocationModel,
    pub atom_location: f64,
    pub atom_mass: f64,
    pub scale: Scale,
}

impl FiniteSampleDist {
    pub fn new(model: LocationModel, scale: Scale) -> Self {
        let atom_location = match scale {
            Scale::SqrtN => -model.scaled_theta(),
            Scale::InvMu => -model.theta() / model.mu(),
        };
        Self {
            model,
            atom_location,
            atom_mass: selection_prob(&model),
            scale,
        }
    }

    /// `n^{1/2}μ` for the `μ^{-1}` scale, `1` otherwise.
    fn factor(&self) -> f64 {
        match self.scale {
            Scale::SqrtN => 1.0,
            Scale::InvMu => self.model.scaled_mu(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        cdf_f(&self.model, self.factor() * x)
    }

    pub fn cdf_left(&self, x: f64) -> f64 {
        cdf_f_left(&self.model, self.factor() * x)
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        let k = self.factor();
        Ok(k * density_f(&self.model, k * x)?)
    }

    /// Mass of the absolutely continuous part by adaptive quadrature,
    /// split at the atom.
    pub fn continuous_mass(&self, tol: f64) -> f64 {
        // Beyond ±40 (on the n^{1/2} scale) on the far side of the atom the
        // cdf is within Φ(-40) of its limit.
        let k = self.factor();
        let a = self.atom_location;
        let lo = (-40.0 / k).min(a);
        let hi = (40.0 / k).max(a);
        let f = |x: f64| if x == a { 0.0 } else { self.density(x).unwrap_or(0.0) };
        quadrature::integrate_pieces(f, &[lo, a, hi], tol)
    }
}

/// Cdf of the least-squares estimator `n^{1/2}(ȳ - θ)`: standard normal.
pub fn ls_cdf(x: f64) -> f64 {
    phi(x)
}

/// Cdf of the restricted estimator `n^{1/2}(0 - θ)`: a point mass.
pub fn restricted_cdf(model: &LocationModel, x: f64) -> f64 {
    if x >= -model.scaled_theta() {
        1.0
    } else {
        0.0
    }
}

/// `reps` draws of `n^{1/2}(θ̂_A - θ)`, simulating the sufficient
/// statistic `ȳ ~ N(θ, 1/n)`.
pub fn simulate_scaled(model: &LocationModel, reps: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sqrt_n = model.sqrt_n();
    (0..reps)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let y_bar = model.theta() + z / sqrt_n;
            sqrt_n * (garotte(y_bar, model.mu()) - model.theta())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1() -> LocationModel {
        LocationModel::new(10, 0.1, 0.05).unwrap()
    }

    #[test]
    fn selection_prob_examples() {
        let m = LocationModel::new(100, 0.0, 0.1).unwrap();
        assert!((selection_prob(&m) - 0.682_689_492_137_085_9).abs() < 1e-15);
        let m = LocationModel::new(100, 0.0, 10.0).unwrap();
        assert!((selection_prob(&m) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn roots_examples() {
        for n in [1, 10, 1000] {
            let m = LocationModel::new(n, 0.0, 0.3).unwrap();
            let r = roots(&m, 0.0);
            assert!((r.z1 + m.scaled_mu()).abs() < 1e-14);
            assert!((r.z2 - m.scaled_mu()).abs() < 1e-14);
        }
        // reference values of the direct quadratic solve, 40-digit arithmetic
        let r = roots(&fig1(), 0.0);
        assert!((r.z1 + 0.381_720_680_758_397_9).abs() < 1e-15);
        assert!((r.z2 - 0.065_492_914_741_560_003).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn roots_solve_the_quadratic(
            n in 1u64..100_000, theta in -3.0f64..3.0, mu in 1e-3f64..2.0, x in -20.0f64..20.0
        ) {
            let m = LocationModel::new(n, theta, mu).unwrap();
            let st = m.scaled_theta();
            let (b, c) = (st - x, -(m.scaled_mu().powi(2) + st * x));
            let r = roots(&m, x);
            prop_assert!(r.z1 <= r.z2);
            let scale = 1.0f64.max(b.abs()).max(c.abs());
            for z in [r.z1, r.z2] {
                let res = z * z + b * z + c;
                prop_assert!(res.abs() <= 1e-10 * scale * 1.0f64.max(z.abs()), "residual {}", res);
            }
        }

        #[test]
        fn root_sandwich(
            n in 1u64..10_000, theta in -2.0f64..2.0, mu in 1e-3f64..1.0, x in -10.0f64..10.0
        ) {
            let m = LocationModel::new(n, theta, mu).unwrap();
            let r = roots(&m, x);
            let edge = -m.scaled_theta() + m.scaled_mu();
            prop_assert!(r.z1 <= edge + 1e-12 * edge.abs().max(1.0));
            let s = m.scaled_theta() + x;
            if s.abs() > 1e-9 {
                prop_assert_eq!(r.z2 >= edge, s >= 0.0);
            }
        }

        #[test]
        fn mirror_symmetry(
            n in 1u64..1000, theta in -1.0f64..1.0, mu in 1e-3f64..1.0, x in -6.0f64..6.0
        ) {
            let m = LocationModel::new(n, theta, mu).unwrap();
            let mm = LocationModel::new(n, -theta, mu).unwrap();
            prop_assert!((cdf_f(&mm, -x) + cdf_f_left(&m, x) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn g_is_rescaled_f(
            n in 1u64..10_000, theta in -1.0f64..1.0, mu in 1e-3f64..1.0, x in -5.0f64..5.0
        ) {
            let m = LocationModel::new(n, theta, mu).unwrap();
            prop_assert!((cdf_g(&m, x) - cdf_f(&m, m.scaled_mu() * x)).abs() <= 1e-14);
            let d = (cdf_g(&m, x) - cdf_g_rescaled(&m, x)).abs();
            prop_assert!(d <= 1e-11, "{}", d);
        }
    }

    #[test]
    fn cdf_examples() {
        for n in [1, 10, 100] {
            let m = LocationModel::new(n, 0.0, 0.2).unwrap();
            assert!((cdf_f(&m, 0.0) - phi(m.scaled_mu())).abs() < 1e-15);
            assert!((cdf_g(&m, 0.0) - phi(m.scaled_mu())).abs() < 1e-15);
        }
        let d = FiniteSampleDist::new(fig1(), Scale::SqrtN);
        assert!((d.atom_location + 0.316_227_766_016_837_94).abs() < 1e-15);
        let jump = d.cdf(d.atom_location) - d.cdf_left(d.atom_location);
        assert!((jump - d.atom_mass).abs() < 1e-12);
        assert!((d.atom_mass - 0.119_555_382_582_821_76).abs() < 1e-15);
    }

    #[test]
    fn w_root_cross_check() {
        let m = LocationModel::new(100, 0.05, 0.1).unwrap();
        let want = 0.691_462_461_274_013_1;
        assert!((cdf_g(&m, -0.5) - want).abs() < 1e-12);
        assert!((cdf_g_rescaled(&m, -0.5) - want).abs() < 1e-12);
    }

    #[test]
    fn cdf_is_valid_distribution() {
        for &(n, th, mu) in &[(10, 0.1, 0.05), (100, -0.3, 0.2), (1, 2.0, 1.0), (1000, 0.0, 0.05)] {
            let m = LocationModel::new(n, th, mu).unwrap();
            assert!(cdf_f(&m, -40.0) <= 1e-12);
            assert!(1.0 - cdf_f(&m, 40.0) <= 1e-12);
            let mut prev = 0.0;
            for i in 0..=4000 {
                let x = -20.0 + 0.01 * i as f64;
                let v = cdf_f(&m, x);
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn density_is_even_when_theta_is_zero() {
        let m = LocationModel::new(25, 0.0, 0.2).unwrap();
        for x in [0.5, 1.0, 2.0] {
            let a = density_f(&m, x).unwrap();
            let b = density_f(&m, -x).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
        assert!(density_f(&m, 0.0).is_err());
    }

    #[test]
    fn density_matches_cdf_derivative() {
        let m = fig1();
        let h = 1e-5;
        for x in [-1.0, 0.2, 1.5] {
            let fd = (cdf_f(&m, x + h) - cdf_f(&m, x - h)) / (2.0 * h);
            assert!((fd - density_f(&m, x).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn total_mass_figure1() {
        let d = FiniteSampleDist::new(fig1(), Scale::SqrtN);
        let m = &d.model;
        let a = d.atom_location;
        let f = |x: f64| if x == a { 0.0 } else { density_f(m, x).unwrap() };
        let over = quadrature::integrate_pieces(f, &[-12.0, a, 12.0], 1e-10);
        assert!((over - (1.0 - d.atom_mass)).abs() < 1e-6);
        assert!((d.continuous_mass(1e-9) + d.atom_mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn inv_mu_scale() {
        let m = LocationModel::new(100, 0.05, 0.1).unwrap();
        let d = FiniteSampleDist::new(m, Scale::InvMu);
        assert!((d.atom_location + 0.5).abs() < 1e-15);
        let jump = d.cdf(d.atom_location) - d.cdf_left(d.atom_location);
        assert!((jump - d.atom_mass).abs() < 1e-12);
        assert!((d.continuous_mass(1e-10) + d.atom_mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn simulation_is_seeded() {
        let m = fig1();
        assert_eq!(simulate_scaled(&m, 100, 4), simulate_scaled(&m, 100, 4));
        assert_ne!(simulate_scaled(&m, 100, 4), simulate_scaled(&m, 100, 5));
    }
}
