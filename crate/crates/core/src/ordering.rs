//! Stop-loss (increasing convex) comparison of aggregate laws, pairwise
//! concordance of symmetric Bernoulli vectors, and order-statistic spacings.

use crate::dependence::{pmf_to_theta, BernoulliPmf};
use crate::dist::{Frequency, Severity, UnivariateLaw};
use crate::error::{Error, Result};

/// Default number of retentions.
pub const DEFAULT_POINTS: usize = 200;
/// Upper quantile level of the default retention grid.
pub const GRID_LEVEL: f64 = 0.9999;
/// Largest dimension accepted by the pairwise comparison.
pub const MAX_SM_DIM: usize = 6;

/// `d -> E[(S - d)_+]` on a retention grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StopLossCurve {
    pub retentions: Vec<f64>,
    pub values: Vec<f64>,
}

impl StopLossCurve {
    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0] + tol)
    }

    /// Slopes between consecutive retentions are non-decreasing.
    pub fn is_convex(&self, tol: f64) -> bool {
        let d = &self.retentions;
        let v = &self.values;
        (1..d.len().saturating_sub(1)).all(|i| {
            let left = (v[i] - v[i - 1]) / (d[i] - d[i - 1]);
            let right = (v[i + 1] - v[i]) / (d[i + 1] - d[i]);
            right >= left - tol
        })
    }
}

pub fn stop_loss<L: UnivariateLaw + ?Sized>(agg: &L, grid: &[f64]) -> Result<StopLossCurve> {
    let values = grid.iter().map(|&d| agg.stop_loss(d)).collect::<Result<Vec<_>>>()?;
    Ok(StopLossCurve { retentions: grid.to_vec(), values })
}

/// `points` equally spaced retentions from 0 to the 0.9999 quantile of the
/// law with the larger mean.
pub fn default_grid<A, B>(a: &A, b: &B, points: usize) -> Result<Vec<f64>>
where
    A: UnivariateLaw + ?Sized,
    B: UnivariateLaw + ?Sized,
{
    if points < 2 {
        return Err(Error::InvalidParameter(format!("{points} retentions")));
    }
    let top = if a.mean()? >= b.mean()? { a.quantile(GRID_LEVEL) } else { b.quantile(GRID_LEVEL) };
    let step = top / (points - 1) as f64;
    Ok((0..points).map(|i| i as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcxVerdict {
    /// Curves agree within tolerance everywhere.
    Equal,
    /// `A <=_icx B` on the grid.
    Dominated,
    /// `B <=_icx A` on the grid.
    Dominates,
    /// Witnesses in both directions.
    Incomparable,
}

impl IcxVerdict {
    pub fn label(self) -> &'static str {
        match self {
            IcxVerdict::Equal => "equal",
            IcxVerdict::Dominated => "dominated",
            IcxVerdict::Dominates => "dominates",
            IcxVerdict::Incomparable => "incomparable-on-grid",
        }
    }

    /// `A <=_icx B` holds on the grid.
    pub fn a_below_b(self) -> bool {
        matches!(self, IcxVerdict::Equal | IcxVerdict::Dominated)
    }
}

/// Retention where one curve exceeds the other by more than the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub retention: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcxComparison {
    pub verdict: IcxVerdict,
    pub curve_a: StopLossCurve,
    pub curve_b: StopLossCurve,
    /// Retentions with `pi_A(d) > pi_B(d) + tol`.
    pub a_above: Vec<Witness>,
    /// Retentions with `pi_B(d) > pi_A(d) + tol`.
    pub b_above: Vec<Witness>,
}

pub fn icx_compare<A, B>(a: &A, b: &B, grid: &[f64], tol: f64) -> Result<IcxComparison>
where
    A: UnivariateLaw + ?Sized,
    B: UnivariateLaw + ?Sized,
{
    let curve_a = stop_loss(a, grid)?;
    let curve_b = stop_loss(b, grid)?;
    let mut a_above = Vec::new();
    let mut b_above = Vec::new();
    for ((&d, &va), &vb) in grid.iter().zip(&curve_a.values).zip(&curve_b.values) {
        let w = Witness { retention: d, a: va, b: vb };
        if va > vb + tol {
            a_above.push(w);
        } else if vb > va + tol {
            b_above.push(w);
        }
    }
    let verdict = match (a_above.is_empty(), b_above.is_empty()) {
        (true, true) => IcxVerdict::Equal,
        (true, false) => IcxVerdict::Dominated,
        (false, true) => IcxVerdict::Dominates,
        (false, false) => IcxVerdict::Incomparable,
    };
    Ok(IcxComparison { verdict, curve_a, curve_b, a_above, b_above })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairConcordance {
    pub j: usize,
    pub l: usize,
    /// `P(I_j = 1, I_l = 1)` under A and B.
    pub a: f64,
    pub b: f64,
}

/// Pairwise comparison of two symmetric Bernoulli pmfs. With margins fixed
/// at 1/2, bivariate supermodular order is the order of `P(I_j = 1, I_l = 1)`;
/// for more than two coordinates this is only a necessary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct SmPairwiseReport {
    pub pairs: Vec<PairConcordance>,
    /// Every pair satisfies `a <= b` (necessary for `A <=_sm B`).
    pub a_below_b: bool,
    pub b_below_a: bool,
    /// All pairs tie, so the necessary condition says nothing.
    pub uninformative: bool,
}

pub fn sm_compare_symmetric_bernoulli_pairwise(fa: &BernoulliPmf, fb: &BernoulliPmf, tol: f64) -> Result<SmPairwiseReport> {
    let d = fa.dim();
    if d > MAX_SM_DIM {
        return Err(Error::DimensionTooLarge { d, max: MAX_SM_DIM });
    }
    if fb.dim() != d {
        return Err(Error::InvalidParameter(format!("dimensions {d} and {} differ", fb.dim())));
    }
    pmf_to_theta(fa)?;
    pmf_to_theta(fb)?;
    let mut pairs = Vec::new();
    for j in 0..d {
        for l in j + 1..d {
            pairs.push(PairConcordance { j, l, a: fa.pair_one(j, l), b: fb.pair_one(j, l) });
        }
    }
    let a_below_b = pairs.iter().all(|p| p.a <= p.b + tol);
    let b_below_a = pairs.iter().all(|p| p.b <= p.a + tol);
    Ok(SmPairwiseReport { uninformative: a_below_b && b_below_a, pairs, a_below_b, b_below_a })
}

/// Means of the min, the law itself, and the max of two iid draws.
pub trait OrderMeans {
    fn order_means(&self) -> Result<(f64, f64, f64)>;
}

impl OrderMeans for Severity {
    fn order_means(&self) -> Result<(f64, f64, f64)> {
        let mean = self.mean()?;
        let lo = self.order(1).mean()?;
        Ok((lo, mean, 2.0 * mean - lo))
    }
}

impl OrderMeans for Frequency {
    fn order_means(&self) -> Result<(f64, f64, f64)> {
        Ok((self.order_moment(1, 1), self.mean_value(), self.order_moment(2, 1)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingReport {
    /// `mu_[2] - mu` for A and B.
    pub upper_a: f64,
    pub upper_b: f64,
    /// `mu_[2] - mu_[1]` for A and B.
    pub spacing_a: f64,
    pub spacing_b: f64,
    /// Necessary condition for `A <=_cx B` on the spacing means.
    pub a_le_b: bool,
    /// Ratio of the dependence parts of `E[S]` when A replaces B at equal
    /// `theta_01` and equal frequency.
    pub dependence_ratio: f64,
}

pub fn cx_spacing_check<Z: OrderMeans + ?Sized>(za: &Z, zb: &Z, tol: f64) -> Result<SpacingReport> {
    let (la, ma, ha) = za.order_means()?;
    let (lb, mb, hb) = zb.order_means()?;
    let (upper_a, upper_b) = (ha - ma, hb - mb);
    let (spacing_a, spacing_b) = (ha - la, hb - lb);
    Ok(SpacingReport {
        upper_a,
        upper_b,
        spacing_a,
        spacing_b,
        a_le_b: upper_a <= upper_b + tol,
        dependence_ratio: spacing_a / spacing_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::{mixed_erlang_aggregate, AggregateDistribution, GridAggregate};
    use crate::components::CollectiveRiskModel;
    use crate::dependence::BernoulliDependence;

    fn agg(dep: BernoulliDependence) -> AggregateDistribution {
        let m = CollectiveRiskModel::new(
            Frequency::from_pmf(vec![0.05, 0.05, 0.9]).unwrap(),
            Severity::gamma(4.0, 0.01).unwrap(),
            dep,
        )
        .unwrap();
        mixed_erlang_aggregate(&m).unwrap()
    }

    #[test]
    fn curve_shape() {
        let a = agg(BernoulliDependence::Independent);
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 60.0).collect();
        let c = stop_loss(&a, &grid).unwrap();
        assert!((c.values[0] - 740.0).abs() < 1e-8);
        assert!(c.is_nonincreasing(1e-12) && c.is_convex(1e-10));
        let g = GridAggregate::new(1.0, vec![0.5, 0.5], 0.0, 0.0);
        assert_eq!(g.stop_loss(5.0).unwrap(), 0.0);
    }

    #[test]
    fn identical_laws_are_equal() {
        let a = agg(BernoulliDependence::CounterFreq);
        let grid = default_grid(&a, &a, DEFAULT_POINTS).unwrap();
        assert_eq!(grid.len(), 200);
        let r = icx_compare(&a, &a, &grid, 1e-9).unwrap();
        assert_eq!(r.verdict, IcxVerdict::Equal);
        assert!(r.verdict.a_below_b());
    }

    #[test]
    fn comonotone_is_upper_bound() {
        let top = agg(BernoulliDependence::Comonotone);
        for dep in [BernoulliDependence::Independent, BernoulliDependence::CounterFreq] {
            let a = agg(dep);
            let grid = default_grid(&a, &top, DEFAULT_POINTS).unwrap();
            assert!(icx_compare(&a, &top, &grid, 1e-9).unwrap().verdict.a_below_b());
        }
    }

    #[test]
    fn pairwise_concordance() {
        let u = BernoulliDependence::Independent.family_pmf(2).unwrap();
        let c = BernoulliDependence::Comonotone.family_pmf(2).unwrap();
        let cf = BernoulliDependence::CounterFreq.family_pmf(2).unwrap();
        let r = sm_compare_symmetric_bernoulli_pairwise(&u, &c, 1e-12).unwrap();
        assert!(r.a_below_b && !r.b_below_a);
        let r = sm_compare_symmetric_bernoulli_pairwise(&cf, &c, 1e-12).unwrap();
        assert!(r.a_below_b && !r.uninformative);
        for p in &r.pairs {
            if p.j == 0 {
                assert!(p.a < p.b);
            } else {
                assert_eq!(p.a, p.b);
            }
        }
        let big = BernoulliDependence::Independent.family_pmf(7).unwrap();
        assert!(matches!(
            sm_compare_symmetric_bernoulli_pairwise(&big, &big, 0.0),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn spacing_examples() {
        let e = Severity::exponential(0.05).unwrap();
        let p = Severity::pareto(1.5, 10.0).unwrap();
        let r = cx_spacing_check(&e, &p, 1e-9).unwrap();
        assert!((r.spacing_a - 20.0).abs() < 1e-9);
        assert!((r.spacing_b - 30.0).abs() < 1e-6);
        assert!(r.a_le_b);
        let s = cx_spacing_check(&e, &e, 1e-12).unwrap();
        assert!(s.a_le_b && (s.dependence_ratio - 1.0).abs() < 1e-15);
        let g = Severity::gamma(2.0, 0.1).unwrap();
        let r = cx_spacing_check(&g, &e, 1e-12).unwrap();
        assert!(r.a_le_b && r.spacing_a < r.spacing_b);
    }
}
