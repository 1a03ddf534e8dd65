use crate::dist::mixed_erlang::erlang_survivals;
use crate::dist::{grid_quantile, invert_cdf, UnivariateLaw};
use crate::error::{Error, Result};

/// `S` as an atom at 0 plus `sum_k masses[k-1] Erlang(k, rate)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedErlangAggregate {
    pub rate: f64,
    pub atom: f64,
    pub masses: Vec<f64>,
    /// Mass lost to series truncation.
    pub truncation: f64,
}

impl MixedErlangAggregate {
    pub fn moment(&self, m: u32) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let k = (i + 1) as f64;
                q * (0..m).map(|j| k + j as f64).product::<f64>()
            })
            .sum::<f64>()
            / self.rate.powi(m as i32)
    }

    pub fn variance(&self) -> f64 {
        let m = self.moment(1);
        self.moment(2) - m * m
    }
}

impl UnivariateLaw for MixedErlangAggregate {
    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let s = erlang_survivals(self.rate, x, self.masses.len());
        self.atom + self.masses.iter().zip(&s).map(|(q, s)| q * (1.0 - s)).sum::<f64>()
    }

    fn quantile(&self, kappa: f64) -> f64 {
        if kappa <= self.atom {
            return 0.0;
        }
        invert_cdf(|x| self.cdf(x), kappa, self.moment(1).max(1.0 / self.rate))
    }

    fn mean(&self) -> Result<f64> {
        Ok(self.moment(1))
    }

    fn tail_expectation(&self, q: f64) -> Result<f64> {
        let s = erlang_survivals(self.rate, q.max(0.0), self.masses.len() + 1);
        Ok(self.masses.iter().enumerate().map(|(i, w)| w * (i + 1) as f64 / self.rate * s[i + 1]).sum())
    }

    fn stop_loss(&self, d: f64) -> Result<f64> {
        if d <= 0.0 {
            return Ok(self.moment(1) - d);
        }
        let s = erlang_survivals(self.rate, d, self.masses.len() + 1);
        Ok(self
            .masses
            .iter()
            .enumerate()
            .map(|(i, w)| w * ((i + 1) as f64 / self.rate * s[i + 1] - d * s[i]))
            .sum::<f64>()
            .max(0.0))
    }
}

/// `S` on the grid `{0, step, 2 step, ...}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAggregate {
    pub step: f64,
    pub pmf: Vec<f64>,
    cdf: Vec<f64>,
    /// A-posteriori wrap-around estimate of the FFT inversion.
    pub aliasing: f64,
    /// Negative round-off clipped to zero.
    pub clipped: f64,
}

impl GridAggregate {
    pub fn new(step: f64, pmf: Vec<f64>, aliasing: f64, clipped: f64) -> Self {
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for p in &pmf {
            acc += p;
            cdf.push(acc);
        }
        GridAggregate { step, pmf, cdf, aliasing, clipped }
    }

    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf
    }

    pub fn moment(&self, m: u32) -> f64 {
        self.pmf.iter().enumerate().map(|(j, p)| p * (j as f64 * self.step).powi(m as i32)).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.moment(1);
        self.moment(2) - m * m
    }
}

impl UnivariateLaw for GridAggregate {
    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let i = (x / self.step + 1e-9).floor() as usize;
        self.cdf[i.min(self.cdf.len() - 1)]
    }

    fn quantile(&self, kappa: f64) -> f64 {
        grid_quantile(&self.cdf, kappa) as f64 * self.step
    }

    fn mean(&self) -> Result<f64> {
        Ok(self.moment(1))
    }

    fn tail_expectation(&self, q: f64) -> Result<f64> {
        let start = if q < 0.0 { 0 } else { (q / self.step + 1e-9).floor() as usize + 1 };
        Ok(self.pmf.iter().enumerate().skip(start).map(|(j, p)| p * j as f64 * self.step).sum())
    }
}

/// Computed law of the aggregate claim amount.
#[derive(Debug, Clone, PartialEq)]
pub enum AggregateDistribution {
    MixedErlang(MixedErlangAggregate),
    Grid(GridAggregate),
    /// Only the first two moments are known; distributional accessors
    /// return NaN or an error.
    MomentOnly { mean: f64, variance: f64 },
}

impl AggregateDistribution {
    pub fn variance(&self) -> f64 {
        match self {
            AggregateDistribution::MixedErlang(a) => a.variance(),
            AggregateDistribution::Grid(g) => g.variance(),
            AggregateDistribution::MomentOnly { variance, .. } => *variance,
        }
    }

    pub fn second_moment(&self) -> f64 {
        match self {
            AggregateDistribution::MixedErlang(a) => a.moment(2),
            AggregateDistribution::Grid(g) => g.moment(2),
            AggregateDistribution::MomentOnly { mean, variance } => variance + mean * mean,
        }
    }

    pub fn as_grid(&self) -> Option<&GridAggregate> {
        match self {
            AggregateDistribution::Grid(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_mixed_erlang(&self) -> Option<&MixedErlangAggregate> {
        match self {
            AggregateDistribution::MixedErlang(a) => Some(a),
            _ => None,
        }
    }

    /// Mass at zero.
    pub fn atom_at_zero(&self) -> f64 {
        match self {
            AggregateDistribution::MixedErlang(a) => a.atom,
            AggregateDistribution::Grid(g) => g.pmf[0],
            AggregateDistribution::MomentOnly { .. } => f64::NAN,
        }
    }
}

fn moment_only() -> Error {
    Error::InvalidParameter("aggregate is moment-only; no distribution available".into())
}

impl UnivariateLaw for AggregateDistribution {
    fn cdf(&self, x: f64) -> f64 {
        match self {
            AggregateDistribution::MixedErlang(a) => a.cdf(x),
            AggregateDistribution::Grid(g) => g.cdf(x),
            AggregateDistribution::MomentOnly { .. } => f64::NAN,
        }
    }

    fn quantile(&self, kappa: f64) -> f64 {
        match self {
            AggregateDistribution::MixedErlang(a) => a.quantile(kappa),
            AggregateDistribution::Grid(g) => g.quantile(kappa),
            AggregateDistribution::MomentOnly { .. } => f64::NAN,
        }
    }

    fn mean(&self) -> Result<f64> {
        match self {
            AggregateDistribution::MixedErlang(a) => a.mean(),
            AggregateDistribution::Grid(g) => g.mean(),
            AggregateDistribution::MomentOnly { mean, .. } => Ok(*mean),
        }
    }

    fn tail_expectation(&self, q: f64) -> Result<f64> {
        match self {
            AggregateDistribution::MixedErlang(a) => a.tail_expectation(q),
            AggregateDistribution::Grid(g) => g.tail_expectation(q),
            AggregateDistribution::MomentOnly { .. } => Err(moment_only()),
        }
    }

    fn stop_loss(&self, d: f64) -> Result<f64> {
        match self {
            AggregateDistribution::MixedErlang(a) => a.stop_loss(d),
            AggregateDistribution::Grid(g) => g.stop_loss(d),
            AggregateDistribution::MomentOnly { .. } => Err(moment_only()),
        }
    }

    fn var(&self, kappa: f64) -> Result<f64> {
        if matches!(self, AggregateDistribution::MomentOnly { .. }) {
            return Err(moment_only());
        }
        crate::dist::check_level(kappa)?;
        Ok(self.quantile(kappa))
    }
}

/// One row of [`risk_measures`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskRow {
    pub kappa: f64,
    pub var: f64,
    pub tvar: f64,
}

pub fn risk_measures<L: UnivariateLaw + ?Sized>(agg: &L, kappas: &[f64]) -> Result<Vec<RiskRow>> {
    kappas.iter().map(|&k| Ok(RiskRow { kappa: k, var: agg.var(k)?, tvar: agg.tvar(k)? })).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_two_point() {
        let g = GridAggregate::new(100.0, vec![0.99, 0.01], 0.0, 0.0);
        assert_eq!(g.quantile(0.99), 0.0);
        assert!((g.tvar(0.99).unwrap() - 100.0).abs() < 1e-9);
        assert!((g.tvar(0.995).unwrap() - 100.0).abs() < 1e-9);
        assert!((g.stop_loss(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(g.stop_loss(150.0).unwrap(), 0.0);
    }

    #[test]
    fn tvar_near_zero_level_is_mean() {
        let g = GridAggregate::new(1.0, vec![0.2, 0.3, 0.1, 0.4], 0.0, 0.0);
        assert!((g.tvar(1e-12).unwrap() - g.moment(1)).abs() < 1e-9);
    }

    #[test]
    fn mixed_erlang_stop_loss_matches_tail() {
        let a = MixedErlangAggregate { rate: 0.5, atom: 0.1, masses: vec![0.3, 0.0, 0.6], truncation: 0.0 };
        let d = 3.0;
        let direct = a.tail_expectation(d).unwrap() - d * (1.0 - a.cdf(d));
        assert!((a.stop_loss(d).unwrap() - direct).abs() < 1e-13);
        assert!((a.stop_loss(0.0).unwrap() - a.moment(1)).abs() < 1e-13);
        let q = a.quantile(0.5);
        assert!((a.cdf(q) - 0.5).abs() < 1e-12);
        assert_eq!(a.quantile(0.05), 0.0);
    }

    #[test]
    fn moment_only_refuses_distribution() {
        let a = AggregateDistribution::MomentOnly { mean: 1.0, variance: 2.0 };
        assert!(a.tvar(0.9).is_err());
        assert!(a.stop_loss(1.0).is_err());
        assert_eq!(a.mean().unwrap(), 1.0);
    }
}
