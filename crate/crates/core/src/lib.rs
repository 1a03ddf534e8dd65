//! Collective risk models whose frequency-severity dependence is an FGM copula.
//!
//! A model is a triple (claim-count law, claim-size law, Bernoulli dependence).
//! The FGM copula is handled through its symmetric Bernoulli representation:
//! every claim count is drawn from the min or max of two iid counts and every
//! claim size from the min or max of two iid sizes, with the selections driven
//! by a vector of symmetric Bernoulli indicators `(I_0, I_1, ...)`.
//!
//! Modules:
//! - [`dist`]: marginal laws, order statistics of two iid draws, risk measures.
//! - [`dependence`]: theta/pmf conversion, admissibility, named families, `K_n` laws.
//! - [`components`]: conditional laws and mixed moments of `(N, X_1, X_2)`.
//! - [`aggregate`]: moments, transforms, and exact laws of the aggregate `S`.
//! - [`simulate`]: exact sampling and Monte Carlo estimation.
//! - [`ordering`]: stop-loss, supermodular, and spacing comparisons.
//! - [`config`]: TOML model descriptions.
//! - [`reproduce`]: recomputation of the published reference tables and figures.

pub mod aggregate;
pub mod components;
pub mod config;
pub mod dependence;
pub mod dist;
pub mod error;
pub mod ordering;
pub mod reproduce;
pub mod simulate;

mod quad;

pub use aggregate::{
    discrete_aggregate_fft, discretize_severity, expected_s, lst_s, mixed_erlang_aggregate,
    moments_special, risk_measures, variance_s, AggregateDistribution, ExpectationReport,
    GridAggregate, MixedErlangAggregate, Special, VarianceReport,
};
pub use components::{CollectiveRiskModel, Phi};
pub use dependence::{BernoulliDependence, BernoulliPmf, KnLaw, ThetaSet};
pub use dist::{Frequency, OrderStat, Severity, UnivariateLaw};
pub use error::{Error, Result};
