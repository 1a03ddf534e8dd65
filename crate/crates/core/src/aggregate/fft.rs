use num_complex::Complex64;
use rustfft::FftPlanner;

use super::distribution::{AggregateDistribution, GridAggregate};
use super::moments::expected_s;
use super::transform::fold;
use crate::components::CollectiveRiskModel;
use crate::dist::Severity;
use crate::error::{Error, Result};

/// Default tolerance on the estimated wrap-around mass.
pub const DEFAULT_ALIAS_TOLERANCE: f64 = 1e-8;
/// Default bound on tail mass beyond the discretization span.
pub const DEFAULT_SPAN_TOLERANCE: f64 = 1e-10;
const NEGATIVE_TOLERANCE: f64 = 1e-10;

/// Mean-preserving local moment matching of order 1 on `{0, h, ..., (len - 1) h}`:
/// `f_0 = 1 - LEV(h)/h`, `f_j = (2 LEV(jh) - LEV((j-1)h) - LEV((j+1)h)) / h`,
/// with the last point taking the remaining mass.
pub fn discretize_severity(x: &Severity, h: f64, len: usize, eps: f64) -> Result<Severity> {
    if !(h > 0.0 && h.is_finite()) || len < 2 {
        return Err(Error::InvalidParameter(format!("grid step {h}, length {len}")));
    }
    x.mean()?;
    let last = len - 1;
    let tail = x.survival(last as f64 * h);
    if tail > eps {
        return Err(Error::SpanTooSmall { tail, eps });
    }
    let lev: Vec<f64> = (0..=len).map(|j| x.lev(j as f64 * h)).collect::<Result<_>>()?;
    let mut masses = Vec::with_capacity(len);
    masses.push((1.0 - lev[1] / h).max(0.0));
    for j in 1..last {
        masses.push(((2.0 * lev[j] - lev[j - 1] - lev[j + 1]) / h).max(0.0));
    }
    let used: f64 = masses.iter().sum();
    masses.push((1.0 - used).max(0.0));
    Severity::discrete(h, masses)
}

/// Pmf of `S` for grid claim sizes, by evaluating the pgf of `S` at the
/// `len` roots of unity and inverting with an FFT.
pub fn discrete_aggregate_fft(m: &CollectiveRiskModel, len: usize) -> Result<AggregateDistribution> {
    discrete_aggregate_fft_with(m, len, DEFAULT_ALIAS_TOLERANCE)
}

pub fn discrete_aggregate_fft_with(m: &CollectiveRiskModel, len: usize, alias_tol: f64) -> Result<AggregateDistribution> {
    if !len.is_power_of_two() || len < 16 {
        return Err(Error::InvalidParameter(format!("FFT length {len} must be a power of two >= 16")));
    }
    let grid = m.sev.as_discrete().ok_or(Error::NotDiscrete)?;
    let h = grid.step();
    let pair = m.sev_pair();
    let (g1, g2) = (pair.min.as_discrete().unwrap(), pair.max.as_discrete().unwrap());
    if g2.masses().len() > len {
        return Err(Error::Aliasing { mass: 1.0, tol: alias_tol });
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let spectrum = |masses: &[f64]| {
        let mut v: Vec<Complex64> = masses.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        v.resize(len, Complex64::new(0.0, 0.0));
        fwd.process(&mut v);
        v
    };
    let (a, b) = (spectrum(g1.masses()), spectrum(g2.masses()));
    let mut s = a
        .iter()
        .zip(&b)
        .map(|(x, y)| fold(m, x, y))
        .collect::<Result<Vec<Complex64>>>()?;
    inv.process(&mut s);
    let scale = 1.0 / len as f64;
    let raw: Vec<f64> = s.iter().map(|c| c.re * scale).collect();

    let worst = raw.iter().cloned().fold(0.0, f64::min);
    if worst < -NEGATIVE_TOLERANCE {
        return Err(Error::NegativeMass(worst));
    }
    let clipped: f64 = raw.iter().filter(|p| **p < 0.0).map(|p| -p).sum();
    let pmf: Vec<f64> = raw.into_iter().map(|p| p.max(0.0)).collect();

    let band: f64 = pmf[len - len / 16..].iter().sum();
    let fft_mean: f64 = pmf.iter().enumerate().map(|(j, p)| j as f64 * h * p).sum();
    let exact_mean = expected_s(m)?.total;
    let aliasing = band.max((exact_mean - fft_mean).abs() / (len as f64 * h));
    if aliasing > alias_tol {
        return Err(Error::Aliasing { mass: aliasing, tol: alias_tol });
    }
    Ok(AggregateDistribution::Grid(GridAggregate::new(h, pmf, aliasing, clipped)))
}
