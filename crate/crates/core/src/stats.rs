//! Empirical-cdf helpers used to check exact formulas against simulation.

/// Half-width of the two-sided Dvoretzky–Kiefer–Wolfowitz band with
/// coverage `1 - alpha` for `m` observations.
pub fn dkw_half_width(m: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * m as f64)).sqrt()
}

/// Fraction of `sorted` that is `<= x`.
pub fn ecdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

/// Fraction of `sorted` that is `< x`.
pub fn ecdf_left(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v < x) as f64 / sorted.len() as f64
}

/// `max_x |F_emp(x) - F(x)|` over `grid`, also comparing left limits so that
/// atoms on the grid are checked from both sides.
pub fn sup_distance_on_grid(
    sorted: &[f64],
    grid: &[f64],
    cdf: impl Fn(f64) -> f64,
    cdf_left: impl Fn(f64) -> f64,
) -> f64 {
    grid.iter()
        .map(|&x| {
            let right = (ecdf(sorted, x) - cdf(x)).abs();
            let left = (ecdf_left(sorted, x) - cdf_left(x)).abs();
            right.max(left)
        })
        .fold(0.0, f64::max)
}

/// Linear-interpolated sample quantile (type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Sample mean and (n-1)-denominator standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
    (mean, var.sqrt())
}

pub(crate) fn sort_floats(v: &mut [f64]) {
    v.sort_by(|a, b| a.total_cmp(b));
}
