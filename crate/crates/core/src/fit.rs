// SPDX-License-Identifier: Apache-2.0

//! Least-squares line fits on log-log (power law) and semi-log
//! (exponential) axes, with optional logarithmic binning.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Binning {
    Linear,
    Logarithmic { bins: usize },
}

/// `y = prefactor * x^(-exponent)`; decay exponents come out positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub fit_range: [f64; 2],
    pub r_squared: f64,
    pub n_points: usize,
    pub binning: Binning,
}

impl PowerLawFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.prefactor * x.powf(-self.exponent)
    }
}

/// `y = prefactor * exp(-rate * x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialFit {
    pub rate: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Line {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> Result<Line> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 || !sxx.is_finite() {
        return Err(Error::InvalidFitInput("degenerate x (all equal)".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    // A flat response has nothing to explain; report it as no fit quality.
    let r_squared = if syy <= f64::EPSILON * n * my.abs().max(1.0) {
        0.0
    } else {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    Ok(Line {
        slope,
        intercept,
        r_squared,
    })
}

fn validate(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::InsufficientForFit(format!(
            "{} point(s), need at least 3",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points
        .iter()
        .find(|(x, y)| !(*x > 0.0 && *y > 0.0) || !x.is_finite() || !y.is_finite())
    {
        return Err(Error::InvalidFitInput(format!(
            "non-positive or non-finite point ({x}, {y})"
        )));
    }
    Ok(())
}

/// Groups points into `bins` equal-width bins in `ln x`; each occupied bin
/// yields (geometric mean x, arithmetic mean y).
fn log_bin_points(points: &[(f64, f64)], bins: usize) -> Vec<(f64, f64)> {
    let bins = bins.max(1);
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).ln();
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max).ln();
    let width = (hi - lo) / bins as f64;
    let mut acc = vec![(0.0f64, 0.0f64, 0usize); bins];
    for &(x, y) in points {
        let b = if width > 0.0 {
            (((x.ln() - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        acc[b].0 += x.ln();
        acc[b].1 += y;
        acc[b].2 += 1;
    }
    acc.into_iter()
        .filter(|a| a.2 > 0)
        .map(|(lx, y, c)| ((lx / c as f64).exp(), y / c as f64))
        .collect()
}

/// Log-log least-squares power-law fit.
pub fn fit_power_law(points: &[(f64, f64)], binning: Binning) -> Result<PowerLawFit> {
    validate(points)?;
    let used = match binning {
        Binning::Linear => points.to_vec(),
        Binning::Logarithmic { bins } => log_bin_points(points, bins),
    };
    fit_prepared(&used, binning)
}

fn fit_prepared(used: &[(f64, f64)], binning: Binning) -> Result<PowerLawFit> {
    if used.len() < 3 {
        return Err(Error::InsufficientForFit(format!(
            "{} point(s) after binning, need at least 3",
            used.len()
        )));
    }
    let xs: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys)?;
    let x_min = used.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let x_max = used.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerLawFit {
        exponent: -line.slope,
        prefactor: line.intercept.exp(),
        fit_range: [x_min, x_max],
        r_squared: line.r_squared,
        n_points: used.len(),
        binning,
    })
}

/// Semi-log least-squares exponential fit.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<ExponentialFit> {
    validate(points)?;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys)?;
    Ok(ExponentialFit {
        rate: -line.slope,
        prefactor: line.intercept.exp(),
        r_squared: line.r_squared,
        n_points: points.len(),
    })
}

/// Normalized probability density of an integer-valued histogram after
/// logarithmic binning: bin edges grow geometrically from 1 so that the
/// span `[min, max]` is covered by `bins` bins; each occupied bin reports
/// (geometric centre, count / (total * integers in bin)).
pub fn log_binned_density(hist: &BTreeMap<usize, usize>, bins: usize) -> Vec<(f64, f64)> {
    let total: usize = hist.values().sum();
    let (Some((&lo, _)), Some((&hi, _))) = (hist.first_key_value(), hist.last_key_value()) else {
        return Vec::new();
    };
    if total == 0 {
        return Vec::new();
    }
    let bins = bins.max(1);
    let lo = lo.max(1) as f64;
    let ratio = ((hi as f64 + 1.0) / lo).powf(1.0 / bins as f64).max(1.0 + 1e-12);
    let mut out = Vec::new();
    let mut left = lo;
    for _ in 0..bins {
        let right = left * ratio;
        // Integers s with left <= s < right.
        let first = left.ceil() as usize;
        let last_excl = right.ceil() as usize;
        if last_excl > first {
            let count: usize = hist.range(first..last_excl).map(|(_, c)| c).sum();
            if count > 0 {
                let width = (last_excl - first) as f64;
                let centre = (first as f64 * (last_excl - 1) as f64).sqrt();
                out.push((centre, count as f64 / (total as f64 * width)));
            }
        }
        left = right;
    }
    out
}

/// Power-law fit of a histogram's log-binned density.
pub fn fit_histogram(hist: &BTreeMap<usize, usize>, bins: usize) -> Result<PowerLawFit> {
    let points = log_binned_density(hist, bins);
    fit_prepared(&points, Binning::Logarithmic { bins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_inverse_square() {
        let f = fit_power_law(&[(1.0, 100.0), (2.0, 25.0), (4.0, 6.25)], Binning::Linear).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-12);
        assert!((f.prefactor - 100.0).abs() < 1e-9);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(f.fit_range, [1.0, 4.0]);
    }

    #[test]
    fn flat_data() {
        let f = fit_power_law(&[(1.0, 5.0), (2.0, 5.0), (4.0, 5.0)], Binning::Linear).unwrap();
        assert!(f.exponent.abs() < 1e-12);
        assert_eq!(f.r_squared, 0.0);
    }

    #[test]
    fn noisy_inverse_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<_> = (1..=64)
            .map(|x| {
                let x = x as f64;
                (x, x.powi(-2) * (1.0 + rng.gen_range(-0.05..0.05)))
            })
            .collect();
        let f = fit_power_law(&pts, Binning::Linear).unwrap();
        assert!((f.exponent - 2.0).abs() < 0.1, "{f:?}");
        let f = fit_power_law(&pts, Binning::Logarithmic { bins: 8 }).unwrap();
        assert!((f.exponent - 2.0).abs() < 0.1, "{f:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            fit_power_law(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)], Binning::Linear),
            Err(Error::InvalidFitInput(_))
        ));
        assert!(matches!(
            fit_power_law(&[(2.0, 1.0), (2.0, 3.0), (2.0, 2.0)], Binning::Linear),
            Err(Error::InvalidFitInput(_))
        ));
        assert!(matches!(
            fit_power_law(&[(1.0, 1.0), (2.0, 3.0)], Binning::Linear),
            Err(Error::InsufficientForFit(_))
        ));
    }

    #[test]
    fn exponential_fit_recovers_rate() {
        let pts: Vec<_> = (1..=8).map(|l| (l as f64, 100.0 * (-(l as f64)).exp())).collect();
        let f = fit_exponential(&pts).unwrap();
        assert!((f.rate - 1.0).abs() < 1e-12);
        assert!((f.prefactor - 100.0).abs() < 1e-9);
    }

    #[test]
    fn log_binned_density_normalizes() {
        let hist: BTreeMap<usize, usize> = (1..=200).map(|s| (s, 1)).collect();
        let pts = log_binned_density(&hist, 6);
        // uniform density 1/200 in every bin
        for (_, p) in &pts {
            assert!((p - 1.0 / 200.0).abs() < 1e-12);
        }
        assert!(pts.len() >= 5);
    }

    #[test]
    fn histogram_fit_of_exact_law() {
        // counts proportional to s^-2.5 on 1..=1000
        let hist: BTreeMap<usize, usize> = (1..=1000)
            .map(|s| (s, (1e9 * (s as f64).powf(-2.5)).round() as usize))
            .collect();
        let f = fit_histogram(&hist, 12).unwrap();
        assert!((f.exponent - 2.5).abs() < 0.05, "{f:?}");
        assert!(f.r_squared > 0.99);
    }
}
