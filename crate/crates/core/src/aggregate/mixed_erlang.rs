use super::distribution::{AggregateDistribution, MixedErlangAggregate};
use super::transform::{fold, Series};
use crate::components::CollectiveRiskModel;
use crate::dist::mixed_erlang::MASS_TOLERANCE;
use crate::error::{Error, Result};

/// Default bound on the total mass lost to truncation.
pub const DEFAULT_ME_TOLERANCE: f64 = 1e-9;

/// Exact law of `S` for mixed Erlang claim sizes with rate `beta`: `S` is
/// mixed Erlang with rate `2 beta` whose Erlang-order weights are the pmf of
/// the count `M` with pgf `sum ... P_{J1}(z)^{n-k} P_{J2}(z)^k`, where `J1`,
/// `J2` carry the order-statistic masses.
pub fn mixed_erlang_aggregate(m: &CollectiveRiskModel) -> Result<AggregateDistribution> {
    mixed_erlang_aggregate_with(m, DEFAULT_ME_TOLERANCE)
}

pub fn mixed_erlang_aggregate_with(m: &CollectiveRiskModel, eps: f64) -> Result<AggregateDistribution> {
    let me = m.sev.as_mixed_erlang().ok_or(Error::NotMixedErlang)?;
    let (j1, j2) = (me.order(1), me.order(2));
    let series = |masses: &[f64]| {
        let mut c = Vec::with_capacity(masses.len() + 1);
        c.push(0.0);
        c.extend_from_slice(masses);
        Series::new(c, MASS_TOLERANCE)
    };
    let count = fold(m, &series(j1.masses()), &series(j2.masses()))?;
    let mut coeffs = count.coeffs;
    let total: f64 = coeffs.iter().sum();
    let truncation = (1.0 - total).max(0.0);
    if truncation > eps {
        return Err(Error::TruncationExceeded { mass: truncation, eps });
    }
    for c in coeffs.iter_mut() {
        *c = c.max(0.0);
    }
    let atom = coeffs[0];
    let masses = coeffs[1..].to_vec();
    Ok(AggregateDistribution::MixedErlang(MixedErlangAggregate { rate: j1.rate(), atom, masses, truncation }))
}
