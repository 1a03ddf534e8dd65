//! TOML model descriptions.
//!
//! ```toml
//! [frequency]
//! kind = "geometric"
//! p = 0.9090909090909091
//!
//! [severity]
//! kind = "pareto"
//! alpha = 2.1
//! lambda = 2200.0
//!
//! [dependence]
//! family = "explicit"
//! dim = 3
//! theta = { "01" = 0.5, "12" = 0.5 }
//!
//! [compute]
//! request = "moments"
//! kappa = [0.95, 0.99]
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::components::CollectiveRiskModel;
use crate::dependence::{BernoulliDependence, BernoulliPmf, ThetaSet};
use crate::dist::{Frequency, FrequencyKind, Severity, DEFAULT_TRUNCATION};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FrequencySpec {
    Poisson { lambda: f64 },
    NegativeBinomial { r: f64, p: f64 },
    Geometric { p: f64 },
    Binomial { n: u64, p: f64 },
    Degenerate { value: u64 },
    Pmf { probs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SeveritySpec {
    Exponential { rate: f64 },
    Gamma { shape: f64, rate: f64 },
    Pareto { alpha: f64, lambda: f64 },
    Lognormal { mean: f64, variance: f64 },
    MixedErlang { rate: f64, masses: Vec<f64> },
    Discrete { step: f64, masses: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DependenceSpec {
    Independent {},
    Comonotone {},
    CounterFrequency {},
    IndepComonotone {},
    IndepCounter {},
    AlphaMixture {
        alpha: f64,
    },
    /// Either `theta` (keys are coordinate lists such as `"01"` or `"0,1,2"`)
    /// or a full `pmf` indexed by bitmask, bit `j` for coordinate `j`.
    Explicit {
        dim: usize,
        theta: Option<BTreeMap<String, f64>>,
        pmf: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Request {
    Moments,
    Pmf,
    Risk,
    Components,
    Simulate,
}

fn default_kappa() -> Vec<f64> {
    vec![0.99]
}
fn default_alias_tol() -> f64 {
    crate::aggregate::DEFAULT_ALIAS_TOLERANCE
}
fn default_span_tol() -> f64 {
    crate::aggregate::DEFAULT_SPAN_TOLERANCE
}
fn default_truncation() -> f64 {
    DEFAULT_TRUNCATION
}
fn default_seed() -> u64 {
    1
}
fn default_reps() -> usize {
    100_000
}
fn default_algorithm() -> u8 {
    1
}
fn default_bootstrap() -> usize {
    crate::simulate::DEFAULT_BOOTSTRAP
}
fn default_grid_len() -> usize {
    4096
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeSpec {
    pub request: Option<Request>,
    #[serde(default = "default_kappa")]
    pub kappa: Vec<f64>,
    /// Discretization step for continuous claim sizes on the FFT route.
    pub grid_step: Option<f64>,
    #[serde(default = "default_grid_len")]
    pub grid_len: usize,
    #[serde(default = "default_alias_tol")]
    pub alias_tol: f64,
    #[serde(default = "default_span_tol")]
    pub span_tol: f64,
    /// Tail mass dropped from unbounded count laws.
    #[serde(default = "default_truncation")]
    pub truncation: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default = "default_algorithm")]
    pub algorithm: u8,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
    /// Largest claim count for conditional-law curves.
    pub max_n: Option<u64>,
    /// Claim-size points for conditional densities.
    pub x: Option<Vec<f64>>,
}

impl Default for ComputeSpec {
    fn default() -> Self {
        toml::from_str("").expect("all compute fields have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub frequency: FrequencySpec,
    pub severity: SeveritySpec,
    pub dependence: DependenceSpec,
    #[serde(default)]
    pub compute: ComputeSpec,
    /// Output path; standard output when absent.
    pub output: Option<String>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn validate(&self) -> Result<()> {
        let c = &self.compute;
        if let Some(k) = c.kappa.iter().find(|k| !(**k > 0.0 && **k < 1.0)) {
            return Err(Error::Config(format!("compute.kappa: {k} not in (0, 1)")));
        }
        if !c.grid_len.is_power_of_two() {
            return Err(Error::Config(format!("compute.grid_len: {} is not a power of two", c.grid_len)));
        }
        if c.algorithm != 1 && c.algorithm != 2 {
            return Err(Error::Config(format!("compute.algorithm: {} (expected 1 or 2)", c.algorithm)));
        }
        if let Some(h) = c.grid_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Config(format!("compute.grid_step: {h}")));
            }
        }
        self.model().map(|_| ())
    }

    pub fn frequency(&self) -> Result<Frequency> {
        self.frequency.build(self.compute.truncation).map_err(|e| ctx("frequency", e))
    }

    pub fn severity(&self) -> Result<Severity> {
        self.severity.build().map_err(|e| ctx("severity", e))
    }

    pub fn dependence(&self) -> Result<BernoulliDependence> {
        self.dependence.build().map_err(|e| ctx("dependence", e))
    }

    pub fn model(&self) -> Result<CollectiveRiskModel> {
        CollectiveRiskModel::new(self.frequency()?, self.severity()?, self.dependence()?).map_err(|e| ctx("model", e))
    }
}

fn ctx(key: &str, e: Error) -> Error {
    Error::Config(format!("{key}: {e}"))
}

impl FrequencySpec {
    pub fn build(&self, eps: f64) -> Result<Frequency> {
        let kind = match self {
            FrequencySpec::Pmf { probs } => return Frequency::from_pmf(probs.clone()),
            FrequencySpec::Poisson { lambda } => FrequencyKind::Poisson { lambda: *lambda },
            FrequencySpec::NegativeBinomial { r, p } => FrequencyKind::NegativeBinomial { r: *r, p: *p },
            FrequencySpec::Geometric { p } => FrequencyKind::Geometric { p: *p },
            FrequencySpec::Binomial { n, p } => FrequencyKind::Binomial { n: *n, p: *p },
            FrequencySpec::Degenerate { value } => FrequencyKind::Degenerate { value: *value },
        };
        Frequency::new(kind, eps)
    }
}

impl SeveritySpec {
    pub fn build(&self) -> Result<Severity> {
        match self {
            SeveritySpec::Exponential { rate } => Severity::exponential(*rate),
            SeveritySpec::Gamma { shape, rate } => Severity::gamma(*shape, *rate),
            SeveritySpec::Pareto { alpha, lambda } => Severity::pareto(*alpha, *lambda),
            SeveritySpec::Lognormal { mean, variance } => Severity::lognormal(*mean, *variance),
            SeveritySpec::MixedErlang { rate, masses } => Severity::mixed_erlang(*rate, masses.clone()),
            SeveritySpec::Discrete { step, masses } => Severity::discrete(*step, masses.clone()),
        }
    }
}

/// Parses `"012"` or `"0,1,2"` into coordinate indices.
fn parse_subset(key: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("dependence.theta: bad key {key:?}"));
    if key.contains(',') {
        key.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
    } else {
        key.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
    }
}

impl DependenceSpec {
    pub fn build(&self) -> Result<BernoulliDependence> {
        Ok(match self {
            DependenceSpec::Independent {} => BernoulliDependence::Independent,
            DependenceSpec::Comonotone {} => BernoulliDependence::Comonotone,
            DependenceSpec::CounterFrequency {} => BernoulliDependence::CounterFreq,
            DependenceSpec::IndepComonotone {} => BernoulliDependence::IndepFreqComonotoneSev,
            DependenceSpec::IndepCounter {} => BernoulliDependence::IndepFreqCounterSev,
            DependenceSpec::AlphaMixture { alpha } => BernoulliDependence::alpha_mixture(*alpha)?,
            DependenceSpec::Explicit { dim, theta, pmf } => match (theta, pmf) {
                (Some(t), None) => {
                    let mut set = ThetaSet::zeros(*dim)?;
                    for (key, v) in t {
                        set.set(&parse_subset(key)?, *v)?;
                    }
                    BernoulliDependence::explicit_theta(&set)?
                }
                (None, Some(p)) => BernoulliDependence::explicit(BernoulliPmf::new(*dim, p.clone())?)?,
                _ => return Err(Error::Config("explicit dependence needs exactly one of theta, pmf".into())),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[frequency]
kind = "geometric"
p = 0.9090909090909091

[severity]
kind = "pareto"
alpha = 2.1
lambda = 2200.0

[dependence]
family = "independent"
"#;

    #[test]
    fn parses_minimal_config() {
        let c = RunConfig::from_toml(BASE).unwrap();
        assert_eq!(c.compute.kappa, vec![0.99]);
        assert_eq!(c.compute.grid_len, 4096);
        let m = c.model().unwrap();
        assert!((crate::aggregate::expected_s(&m).unwrap().total - 200.0).abs() < 1e-9);
    }

    #[test]
    fn explicit_theta_keys() {
        let text = BASE.replace("kind = \"geometric\"\np = 0.9090909090909091", "kind = \"pmf\"\nprobs = [0.05, 0.05, 0.9]").replace(
            "family = \"independent\"",
            "family = \"explicit\"\ndim = 3\ntheta = { \"01\" = -0.3333333333333333, \"02\" = -0.3333333333333333, \"1,2\" = -0.3333333333333333 }",
        );
        let c = RunConfig::from_toml(&text).unwrap();
        let (t01, t12, t012) = c.dependence().unwrap().thetas();
        assert!((t01 + 1.0 / 3.0).abs() < 1e-12 && (t12 + 1.0 / 3.0).abs() < 1e-12 && t012.abs() < 1e-12);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = BASE.replace("lambda = 2200.0", "lambda = 2200.0\nscale = 3.0");
        assert!(matches!(RunConfig::from_toml(&text), Err(Error::Config(_))));
        let text = format!("{BASE}\n[compute]\nkapa = [0.9]\n");
        let msg = RunConfig::from_toml(&text).unwrap_err().to_string();
        assert!(msg.contains("kapa"), "{msg}");
        let text = format!("{BASE}\nextra = 1\n");
        assert!(RunConfig::from_toml(&text).unwrap_err().to_string().contains("extra"));
        let text = format!("extra = 1\n{BASE}");
        assert!(RunConfig::from_toml(&text).is_err());
    }

    #[test]
    fn rejects_invalid_values_with_context() {
        let text = BASE.replace("alpha = 2.1", "alpha = -1.0");
        let msg = RunConfig::from_toml(&text).unwrap_err().to_string();
        assert!(msg.contains("severity"), "{msg}");
        let text = format!("{BASE}\n[compute]\nkappa = [1.5]\n");
        assert!(RunConfig::from_toml(&text).unwrap_err().to_string().contains("compute.kappa"));
        let text = BASE.replace("family = \"independent\"", "family = \"explicit\"\ndim = 2\ntheta = { \"01\" = 1.5 }");
        assert!(RunConfig::from_toml(&text).is_err());
    }

    #[test]
    fn explicit_dimension_must_cover_support() {
        let text = BASE.replace("family = \"independent\"", "family = \"explicit\"\ndim = 3\npmf = [0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125]");
        let msg = RunConfig::from_toml(&text).unwrap_err().to_string();
        assert!(msg.contains("model"), "{msg}");
    }
}
