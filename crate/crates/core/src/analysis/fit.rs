use crate::cluster::GrowthHistory;
use crate::error::{Error, Result};

use super::boxcount::{Ladder, ScaleSeries};

/// Fewest samples a fit accepts.
pub const MIN_SCALES: usize = 3;

/// Mass-radius fits need at least this many history records.
const MIN_HISTORY: usize = 100;

/// Smallest box edge used for grown clusters. Below it the finite branch
/// width still bends the count curve, which drags the slope down.
const LATTICE_CUTOFF: f64 = 8.0;

/// Fitted dimension with its regression diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionEstimate {
    pub d: f64,
    pub stderr: f64,
    pub r2: f64,
    /// Smallest and largest scale that entered the fit.
    pub eps_min: f64,
    pub eps_max: f64,
    pub n_scales: usize,
}

struct LineFit {
    slope: f64,
    stderr: f64,
    r2: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = if xs.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    let r2 = if syy > 0.0 {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    LineFit { slope, stderr, r2 }
}

fn in_window(x: f64, (lo, hi): (f64, f64)) -> bool {
    let slack = 1e-9 * hi.abs().max(1.0);
    x >= lo - slack && x <= hi + slack
}

/// Least-squares slope of `log N` against `log(1/eps)` over the samples
/// whose box edge lies inside `window`.
pub fn fit_dimension(series: &ScaleSeries, window: (f64, f64)) -> Result<DimensionEstimate> {
    let used: Vec<_> = series
        .samples
        .iter()
        .filter(|s| in_window(s.epsilon as f64, window))
        .collect();
    if used.len() < MIN_SCALES {
        return Err(Error::InsufficientScales {
            found: used.len(),
            required: MIN_SCALES,
        });
    }
    let xs: Vec<f64> = used.iter().map(|s| -(s.epsilon as f64).ln()).collect();
    let ys: Vec<f64> = used.iter().map(|s| (s.count as f64).ln()).collect();
    let fit = least_squares(&xs, &ys);
    Ok(DimensionEstimate {
        d: fit.slope,
        stderr: fit.stderr,
        r2: fit.r2,
        eps_min: used.first().unwrap().epsilon as f64,
        eps_max: used.last().unwrap().epsilon as f64,
        n_scales: used.len(),
    })
}

/// Mass-radius dimension: slope of `log n` against `log R_g` over the
/// records with `R_g` in `[lo, hi] * R_g(final)`.
pub fn mass_radius_dimension(
    history: &GrowthHistory,
    window_fraction: (f64, f64),
) -> Result<DimensionEstimate> {
    if history.len() < MIN_HISTORY {
        return Err(Error::InsufficientScales {
            found: history.len(),
            required: MIN_HISTORY,
        });
    }
    let (lo, hi) = window_fraction;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "mass-radius window fractions must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let rg_final = history.last().unwrap().rg;
    let window = (lo * rg_final, hi * rg_final);
    let used: Vec<_> = history
        .records
        .iter()
        .filter(|r| r.rg > 0.0 && in_window(r.rg, window))
        .collect();
    if used.len() < MIN_SCALES {
        return Err(Error::InsufficientScales {
            found: used.len(),
            required: MIN_SCALES,
        });
    }
    let xs: Vec<f64> = used.iter().map(|r| r.rg.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|r| (r.n as f64).ln()).collect();
    let fit = least_squares(&xs, &ys);
    let (eps_min, eps_max) = used.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| {
        (a.min(r.rg), b.max(r.rg))
    });
    Ok(DimensionEstimate {
        d: fit.slope,
        stderr: fit.stderr,
        r2: fit.r2,
        eps_min,
        eps_max,
        n_scales: used.len(),
    })
}

/// Fit window for a grown aggregate: from eight lattice units up to half
/// the radius of gyration. When that spans fewer than
/// [`MIN_SCALES`] rungs the upper edge moves up to the third rung.
pub fn scaling_window(ladder: &Ladder, rg: f64) -> (f64, f64) {
    let lo = LATTICE_CUTOFF;
    let mut hi = (rg / 2.0).max(lo);
    let rungs: Vec<f64> = ladder
        .epsilons()
        .iter()
        .map(|&e| e as f64)
        .filter(|&e| e >= lo)
        .collect();
    let inside = rungs.iter().filter(|&&e| e <= hi).count();
    if inside < MIN_SCALES {
        if let Some(&third) = rungs.get(MIN_SCALES - 1) {
            hi = third;
        }
    }
    (lo, hi)
}
