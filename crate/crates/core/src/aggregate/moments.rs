use super::transform::Special;
use crate::components::CollectiveRiskModel;
use crate::error::Result;

/// `E[S] = baseline + dependence`, with `baseline = E[N] E[X]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationReport {
    pub baseline: f64,
    pub dependence: f64,
    pub total: f64,
}

/// `Var(S) = C_EVar + C_ECov + C_VarE = Var(S_indep) + C_Dep`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceReport {
    /// `E[N Var(X | N)]`.
    pub c_evar: f64,
    /// `E[N (N - 1) Cov(X_1, X_2 | N)]`.
    pub c_ecov: f64,
    /// `Var(N E[X | N])`.
    pub c_vare: f64,
    /// Contribution of dependence, computed from its own closed form.
    pub c_dep: f64,
    /// Variance under independence.
    pub baseline: f64,
    pub total: f64,
    /// Tail mass of `N` not covered by the sums over `n`.
    pub truncation: f64,
}

pub fn expected_s(m: &CollectiveRiskModel) -> Result<ExpectationReport> {
    let baseline = m.freq.mean_value() * m.sev.mean()?;
    let dependence = m.theta01() / 4.0 * m.freq_spacing() * m.sev_spacing()?;
    Ok(ExpectationReport { baseline, dependence, total: baseline + dependence })
}

pub fn variance_s(m: &CollectiveRiskModel) -> Result<VarianceReport> {
    let f = &m.freq;
    let (t01, t12, t012) = (m.theta01(), m.theta12(), m.theta012());

    let mu = m.sev.mean()?;
    let var_x = m.sev.variance()?;
    let d = m.sev_spacing()?;
    let d2 = m.sev_pair().spacing_moment(2)?;
    let (mx1, mx2) = (m.sev_pair().min.mean()?, m.sev_pair().max.mean()?);
    let (vx1, vx2) = (m.sev_pair().min.variance()?, m.sev_pair().max.variance()?);

    let en = f.moment(1);
    let en2 = f.moment(2);
    let var_n = en2 - en * en;
    let (mn1, mn2) = (f.order_moment(1, 1), f.order_moment(2, 1));
    let (sn1, sn2) = (f.order_moment(1, 2), f.order_moment(2, 2));
    let dn = mn2 - mn1;

    // A = sum gamma n ratio^2, B = sum gamma n^2 ratio^2
    let (mut a, mut b) = (0.0, 0.0);
    for n in 1..=f.max_n() as u64 {
        let w = f.pmf(n) * f.ratio(n).powi(2) * n as f64;
        a += w;
        b += w * n as f64;
    }

    let k = t01 * t01 / 16.0 * d * d;
    let c_evar = en * var_x + t01 / 4.0 * dn * (d2 - 2.0 * mu * d) - k * a;
    let c_ecov = t12 / 4.0 * (en2 - en) * d * d - t012 / 8.0 * ((sn2 - mn2) - (sn1 - mn1)) * d * d - k * (b - a);
    let c_vare = mu * mu * var_n + 2.0 * mu * t01 / 4.0 * d * ((sn2 - sn1) - en * dn) + k * (b - dn * dn);

    let baseline = en * var_x + var_n * mu * mu;
    let (vn1, vn2) = (sn1 - mn1 * mn1, sn2 - mn2 * mn2);
    let c_dep = t01 / 4.0
        * (dn * (vx2 - vx1) + (vn2 - vn1) * (mx2 * mx2 - mx1 * mx1) + 0.5 * (mn2 * mn2 - mn1 * mn1) * (mx2 * mx2 - mx1 * mx1))
        - k * dn * dn
        + t12 / 4.0 * (en2 - en) * d * d
        - t012 / 8.0 * ((sn2 - mn2) - (sn1 - mn1)) * d * d;

    Ok(VarianceReport {
        c_evar,
        c_ecov,
        c_vare,
        c_dep,
        baseline,
        total: c_evar + c_ecov + c_vare,
        truncation: f.truncation(),
    })
}

/// Mean and variance of the order-statistic mixtures: with comonotone
/// indicators `S` is `S(N[1], X[1])` or `S(N[2], X[2])` with probability 1/2
/// each; with `I_j = 1 - I_0` the size indices are swapped.
pub fn moments_special(m: &CollectiveRiskModel, family: Special) -> Result<(f64, f64)> {
    let f = &m.freq;
    let (x1, x2) = (&m.sev_pair().min, &m.sev_pair().max);
    let branches = match family {
        Special::Comonotone => [(1u8, x1), (2u8, x2)],
        Special::CounterFreq => [(1u8, x2), (2u8, x1)],
    };
    let mut mean = 0.0;
    let mut second = 0.0;
    for (j, x) in branches {
        let (en, en2) = (f.order_moment(j, 1), f.order_moment(j, 2));
        let (ex, vx) = (x.mean()?, x.variance()?);
        let e = en * ex;
        mean += 0.5 * e;
        second += 0.5 * (en * vx + en2 * ex * ex);
    }
    Ok((mean, second - mean * mean))
}
