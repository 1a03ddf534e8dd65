//! Moments, transforms, exact laws and risk measures of the aggregate claim
//! amount `S = X_1 + ... + X_N`.

mod distribution;
mod fft;
mod mixed_erlang;
mod moments;
mod transform;

pub use distribution::{risk_measures, AggregateDistribution, GridAggregate, MixedErlangAggregate, RiskRow};
pub use fft::{
    discrete_aggregate_fft, discrete_aggregate_fft_with, discretize_severity, DEFAULT_ALIAS_TOLERANCE,
    DEFAULT_SPAN_TOLERANCE,
};
pub use mixed_erlang::{mixed_erlang_aggregate, mixed_erlang_aggregate_with, DEFAULT_ME_TOLERANCE};
pub use moments::{expected_s, moments_special, variance_s, ExpectationReport, VarianceReport};
pub use transform::{closed_form_exp_geometric, lst_s, Special};
