//! Self-check suite: a fast battery of identities and simulation
//! cross-checks that a healthy build must pass.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{limit_f, selprob_limit, ThetaSequence};
use crate::cdf_estimation::{oscillation, oscillation_finite, theory_epsilon_bound, Target};
use crate::estimators::{alasso_location, hard_threshold, location_objective};
use crate::exact_dist::{
    cdf_f, cdf_f_left, cdf_g, cdf_g_rescaled, roots, selection_prob, simulate_scaled,
    FiniteSampleDist, Scale,
};
use crate::model::LocationModel;
use crate::montecarlo::{build_design, scaling_constants, toeplitz};
use crate::normal::phi;
use crate::sequence::PowerLawSequence;
use crate::stats::{dkw_half_width, sort_floats, sup_distance_on_grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, worst: f64, limit: f64) -> Check {
    Check {
        name: name.to_string(),
        passed: worst <= limit,
        detail: format!("worst {worst:.3e}, allowed {limit:.1e}"),
    }
}

fn random_model(rng: &mut impl Rng) -> LocationModel {
    let n = rng.gen_range(1..=10_000);
    LocationModel::new(n, rng.gen_range(-1.0..1.0), rng.gen_range(0.001..1.0)).unwrap()
}

/// Runs every check; `seed` drives the random parameter draws.
pub fn run_all(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let worst = (0..=160)
        .map(|i| {
            let x = -8.0 + 0.1 * i as f64;
            (phi(x) + phi(-x) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    out.push(check("normal cdf reflection", worst, 1e-15));

    let mut worst_obj = f64::NEG_INFINITY;
    let mut worst_ident = 0.0_f64;
    for _ in 0..2000 {
        let (y, mu) = (rng.gen_range(-3.0..3.0), rng.gen_range(0.01..2.0));
        let est = alasso_location(y, mu).unwrap();
        let best = location_objective(1.0, y, mu, est);
        for _ in 0..50 {
            let cand = est + rng.gen_range(-2.0..2.0);
            worst_obj = worst_obj.max(best - location_objective(1.0, y, mu, cand));
        }
        let h = hard_threshold(y, mu).unwrap();
        let shrunk = if h == 0.0 { 0.0 } else { h - h.signum() * mu * mu / y.abs() };
        worst_ident = worst_ident.max((shrunk - est).abs());
    }
    out.push(check("closed form minimizes the objective", worst_obj.max(0.0), 1e-12));
    out.push(check("hard-threshold identity", worst_ident, 1e-12));

    let (mut worst_root, mut worst_atom, mut worst_g, mut worst_mass) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..20 {
        let model = random_model(&mut rng);
        let x = rng.gen_range(-3.0..3.0);
        let r = roots(&model, x);
        let (b, c) = (model.scaled_theta() - x, -(model.scaled_mu().powi(2) + model.scaled_theta() * x));
        let scale = 1.0_f64.max(b.abs()).max(c.abs());
        for z in [r.z1, r.z2] {
            worst_root = worst_root.max((z * z + b * z + c).abs() / scale);
        }
        let a = -model.scaled_theta();
        worst_atom = worst_atom.max((cdf_f(&model, a) - cdf_f_left(&model, a) - selection_prob(&model)).abs());
        worst_g = worst_g.max((cdf_g(&model, x) - cdf_g_rescaled(&model, x)).abs());
        let dist = FiniteSampleDist::new(model, Scale::SqrtN);
        worst_mass = worst_mass.max((dist.atom_mass + dist.continuous_mass(1e-10) - 1.0).abs());
    }
    out.push(check("roots solve the quadratic", worst_root, 1e-10));
    out.push(check("cdf jump equals the atom mass", worst_atom, 1e-12));
    out.push(check("two formulas for the rescaled cdf agree", worst_g, 1e-11));
    out.push(check("atom plus density integrates to one", worst_mass, 1e-6));

    let model = LocationModel::new(10, 0.1, 0.05).unwrap();
    let mut draws = simulate_scaled(&model, 100_000, seed);
    sort_floats(&mut draws);
    let grid: Vec<f64> = (0..=200).map(|i| -4.0 + 0.04 * i as f64).collect();
    let d = sup_distance_on_grid(&draws, &grid, |x| cdf_f(&model, x), |x| cdf_f_left(&model, x));
    out.push(check("simulated cdf inside the 99% DKW band", d, dkw_half_width(draws.len(), 0.01)));

    let mu = PowerLawSequence::new(1.0, 1.0 / 3.0).unwrap();
    let mut worst_sel = 0.0_f64;
    for theta in [
        ThetaSequence::Zero,
        ThetaSequence::power(0.5, 1.0 / 3.0).unwrap(),
        ThetaSequence::power(2.0, 1.0 / 3.0).unwrap(),
        ThetaSequence::power(1.0, 0.0).unwrap(),
    ] {
        let n = 1e8;
        let lim = selprob_limit(&mu, &theta).unwrap().probability;
        let m = LocationModel::new(n as u64, theta.eval(n, &mu), mu.eval(n)).unwrap();
        worst_sel = worst_sel.max((selection_prob(&m) - lim).abs());
    }
    out.push(check("selection probability near its limit at n = 1e8", worst_sel, 2e-3));

    let mu_c = PowerLawSequence::new(1.0, 0.5).unwrap();
    let mut worst_lim = 0.0_f64;
    for nu in [0.0, 1.0, -2.0] {
        let law = limit_f(&mu_c, &ThetaSequence::power(nu, 0.5).unwrap()).unwrap().law;
        let m = LocationModel::new(10_000, nu / 100.0, 0.01).unwrap();
        for i in 0..=100 {
            let x = -5.0 + 0.1 * i as f64;
            worst_lim = worst_lim.max((cdf_f(&m, x) - law.cdf(x)).abs());
        }
    }
    out.push(check("conservative limit law matches finite n", worst_lim, 1e-12));

    let exact = oscillation(100, 0.1, 0.0).unwrap();
    let fd = oscillation_finite(100, 0.1, 0.0, 1e-6).unwrap();
    out.push(check("oscillation identity", (exact - fd).abs(), 1e-4));
    let bound = theory_epsilon_bound(Target::F, 100, 0.1, 0.0).unwrap();
    out.push(check("impossibility bound is half the oscillation", (bound - exact / 2.0).abs(), 0.0));

    let x = build_design(100, 4, 0.5).unwrap();
    let want = toeplitz(4, 0.5) * 100.0;
    out.push(check("design Gram matrix equals nΩ", (x.transpose() * &x - &want).abs().max(), 1e-10 * 100.0));
    let c = scaling_constants(100, 4, 0.5).unwrap();
    out.push(check("scaling constant for the first coefficient", (3.0 * c[0] - 25.98).abs(), 5e-3));

    out
}
