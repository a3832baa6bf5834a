//! Numerical helpers: goodness of fit, finite differences, percentiles.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Expected count below which neighbouring cells are pooled.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit of `observed` counts against `probabilities`
/// (normalized here). Cells with small expected counts are pooled.
pub fn chi_square(observed: &[u64], probabilities: &[f64]) -> ChiSquareResult {
    assert_eq!(observed.len(), probabilities.len());
    let n: u64 = observed.iter().sum();
    let total_p: f64 = probabilities.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pending = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probabilities) {
        pending.0 += o as f64;
        pending.1 += n as f64 * p / total_p;
        if pending.1 >= MIN_EXPECTED {
            cells.push(pending);
            pending = (0.0, 0.0);
        }
    }
    if pending.1 > 0.0 || pending.0 > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += pending.0;
                last.1 += pending.1;
            }
            None => cells.push(pending),
        }
    }
    let statistic: f64 = cells.iter().map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else { f64::INFINITY }).sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 { 1.0 } else { 1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(statistic) };
    ChiSquareResult { statistic, degrees_of_freedom: dof, p_value }
}

/// Central-difference gradient of `f` at `x`.
pub fn finite_difference_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], eps: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + eps;
            let up = f(&probe);
            probe[i] = x[i] - eps;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * eps)
        })
        .collect()
}

/// `|a - b| / max(|a|, |b|)`, or 0 when both are exactly 0.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Linear-interpolated percentile, `q` in `[0, 100]`.
pub fn percentile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = q / 100.0 * (v.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (rank - lo as f64)
}
