//! Conditional laws and mixed moments of `(N, X_1, X_2)` for exchangeable
//! FGM collective risk models.

use crate::dependence::BernoulliDependence;
use crate::dist::{sev_order_stats, Frequency, OrderStatisticPair, Severity};
use crate::error::{Error, Result};

/// Collective risk model `(N, X_1, X_2, ...)` with FGM dependence.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveRiskModel {
    pub freq: Frequency,
    pub sev: Severity,
    pub dep: BernoulliDependence,
    sev_pair: OrderStatisticPair,
    theta01: f64,
    theta12: f64,
    theta012: f64,
}

impl CollectiveRiskModel {
    pub fn new(freq: Frequency, sev: Severity, dep: BernoulliDependence) -> Result<Self> {
        if let Some(max) = dep.max_k() {
            if freq.max_n() > max {
                return Err(Error::KExceedsFamily { family: dep.name().into(), k: freq.max_n(), max });
            }
        }
        let (theta01, theta12, theta012) = dep.thetas();
        let sev_pair = sev_order_stats(&sev);
        Ok(CollectiveRiskModel { freq, sev, dep, sev_pair, theta01, theta12, theta012 })
    }

    /// Same marginals, different dependence.
    pub fn with_dependence(&self, dep: BernoulliDependence) -> Result<Self> {
        Self::new(self.freq.clone(), self.sev.clone(), dep)
    }

    pub fn theta01(&self) -> f64 {
        self.theta01
    }

    pub fn theta12(&self) -> f64 {
        self.theta12
    }

    pub fn theta012(&self) -> f64 {
        self.theta012
    }

    pub fn sev_pair(&self) -> &OrderStatisticPair {
        &self.sev_pair
    }

    /// `mu_{X[2]} - mu_{X[1]}`.
    pub fn sev_spacing(&self) -> Result<f64> {
        self.sev_pair.spacing_moment(1)
    }

    /// `mu_{N[2]} - mu_{N[1]}`.
    pub fn freq_spacing(&self) -> f64 {
        self.freq.order_moment(2, 1) - self.freq.order_moment(1, 1)
    }

    fn support_check(&self, n: u64) -> Result<f64> {
        let g = self.freq.pmf(n);
        if g > 0.0 {
            Ok(g)
        } else {
            Err(Error::OutsideSupport(n))
        }
    }

    /// `E[phi0(N) phi1(X_1) phi2(X_2)]`.
    pub fn triple_expectation(&self, phi0: &Phi, phi1: &Phi, phi2: &Phi) -> Result<f64> {
        let e0 = phi0.expect_freq(&self.freq, 0);
        let d0 = phi0.expect_freq(&self.freq, 2) - phi0.expect_freq(&self.freq, 1);
        let e1 = phi1.expect_sev(&self.sev)?;
        let d1 = phi1.expect_sev(&self.sev_pair.max)? - phi1.expect_sev(&self.sev_pair.min)?;
        let e2 = phi2.expect_sev(&self.sev)?;
        let d2 = phi2.expect_sev(&self.sev_pair.max)? - phi2.expect_sev(&self.sev_pair.min)?;
        let v = e0 * e1 * e2 + self.theta01 / 4.0 * d0 * (e1 * d2 + d1 * e2) + self.theta12 / 4.0 * e0 * d1 * d2
            - self.theta012 / 8.0 * d0 * d1 * d2;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonfiniteExpectation)
        }
    }

    /// `Delta(F_Y; phi) = E[phi(Y[2])] - E[phi(Y[1])]` for the claim size.
    pub fn delta_sev(&self, phi: &Phi) -> Result<f64> {
        Ok(phi.expect_sev(&self.sev_pair.max)? - phi.expect_sev(&self.sev_pair.min)?)
    }

    /// `Delta(F_N; phi)` for the claim count.
    pub fn delta_freq(&self, phi: &Phi) -> f64 {
        phi.expect_freq(&self.freq, 2) - phi.expect_freq(&self.freq, 1)
    }

    /// `F_{X | N = n}(x)`.
    pub fn conditional_sev_cdf(&self, n: u64, x: f64) -> Result<f64> {
        self.support_check(n)?;
        let f = self.sev.cdf(x);
        Ok(f + self.theta01 / 4.0 * self.freq.ratio(n) * 2.0 * f * (f - 1.0))
    }

    /// Density of `X | N = n` for continuous claim sizes: the derivative of
    /// [`Self::conditional_sev_cdf`], `f + (theta01/4) ratio(n) (f_{X[2]} - f_{X[1]})`.
    pub fn conditional_sev_density(&self, n: u64, x: f64) -> Result<f64> {
        self.support_check(n)?;
        let f = self.sev.density(x)?;
        let big_f = self.sev.cdf(x);
        Ok(f + self.theta01 / 4.0 * self.freq.ratio(n) * 2.0 * f * (2.0 * big_f - 1.0))
    }

    /// `P(X = x | N = n)` for claim sizes on a grid.
    pub fn conditional_sev_pmf(&self, n: u64, x: f64) -> Result<f64> {
        self.support_check(n)?;
        let grid = self.sev.as_discrete().ok_or(Error::NotDiscrete)?;
        let f = self.sev.pmf(x);
        let below = self.sev.cdf(x - 0.5 * grid.step());
        Ok(f + self.theta01 / 2.0 * self.freq.ratio(n) * f * (2.0 * below + f - 1.0))
    }

    /// `E[X | N = n]`.
    pub fn conditional_mean(&self, n: u64) -> Result<f64> {
        self.support_check(n)?;
        Ok(self.sev.mean()? + self.theta01 / 4.0 * self.freq.ratio(n) * self.sev_spacing()?)
    }

    /// `E[X^2 | N = n]`.
    pub fn conditional_second_moment(&self, n: u64) -> Result<f64> {
        self.support_check(n)?;
        Ok(self.sev.moment(2)? + self.theta01 / 4.0 * self.freq.ratio(n) * self.sev_pair.spacing_moment(2)?)
    }

    /// `Cov(N, X_1)`.
    pub fn cov_freq_sev(&self) -> Result<f64> {
        Ok(self.theta01 / 4.0 * self.freq_spacing() * self.sev_spacing()?)
    }

    /// `Cov(X_1, X_2)`.
    pub fn cov_sev_sev(&self) -> Result<f64> {
        let d = self.sev_spacing()?;
        Ok(self.theta12 / 4.0 * d * d)
    }

    /// `Cov(X_1, X_2 | N = n)`.
    pub fn conditional_cov(&self, n: u64) -> Result<f64> {
        self.support_check(n)?;
        self.sev.moment(2)?;
        let d = self.sev_spacing()?;
        let r = self.freq.ratio(n);
        let d2 = d * d;
        Ok(self.theta12 / 4.0 * d2 - self.theta012 / 8.0 * r * d2 - self.theta01 * self.theta01 / 16.0 * r * r * d2)
    }
}

/// Test functions for [`CollectiveRiskModel::triple_expectation`].
#[derive(Debug, Clone, PartialEq)]
pub enum Phi {
    One,
    Identity,
    Square,
    Power(u32),
    /// `1{y <= x}`.
    Indicator(f64),
    /// `1{y = x}` on an atom of a discrete law.
    Point(f64),
    /// Piecewise constant: `values[i]` on `(breaks[i-1], breaks[i]]`, with
    /// `breaks[-1] = -inf` and `breaks[len] = +inf`; needs `values.len() == breaks.len() + 1`.
    Step { breaks: Vec<f64>, values: Vec<f64> },
}

impl Phi {
    pub fn eval(&self, y: f64) -> f64 {
        match self {
            Phi::One => 1.0,
            Phi::Identity => y,
            Phi::Square => y * y,
            Phi::Power(m) => y.powi(*m as i32),
            Phi::Indicator(x) => (y <= *x) as u8 as f64,
            Phi::Point(x) => ((y - x).abs() < 1e-9) as u8 as f64,
            Phi::Step { breaks, values } => values[breaks.partition_point(|b| *b < y)],
        }
    }

    fn power(&self) -> Option<u32> {
        match self {
            Phi::One => Some(0),
            Phi::Identity => Some(1),
            Phi::Square => Some(2),
            Phi::Power(m) => Some(*m),
            _ => None,
        }
    }

    /// `E[phi(N)]` (`j = 0`), `E[phi(N[1])]` or `E[phi(N[2])]`.
    pub fn expect_freq(&self, f: &Frequency, j: u8) -> f64 {
        if let Some(m) = self.power() {
            return if j == 0 { f.moment(m) } else { f.order_moment(j, m) };
        }
        (0..=f.max_n() as u64)
            .map(|n| {
                let p = if j == 0 { f.pmf(n) } else { f.order_pmf(j, n) };
                p * self.eval(n as f64)
            })
            .sum()
    }

    /// `E[phi(X)]` as a Stieltjes sum against the cdf (exact for step functions).
    pub fn expect_sev(&self, x: &Severity) -> Result<f64> {
        if let Some(m) = self.power() {
            return x.moment(m);
        }
        Ok(match self {
            Phi::Indicator(t) => x.cdf(*t),
            Phi::Point(t) => x.pmf(*t),
            Phi::Step { breaks, values } => {
                if values.len() != breaks.len() + 1 {
                    return Err(Error::InvalidParameter("step function needs one more value than breaks".into()));
                }
                let mut prev = 0.0;
                let mut acc = 0.0;
                for (b, v) in breaks.iter().zip(values) {
                    let c = x.cdf(*b);
                    acc += v * (c - prev);
                    prev = c;
                }
                acc + values[breaks.len()] * (1.0 - prev)
            }
            _ => unreachable!(),
        })
    }
}
