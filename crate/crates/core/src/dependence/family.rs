use rand::Rng;

use super::theta::{pmf_to_theta, theta_to_pmf, BernoulliPmf, ThetaSet, MAX_DIM};
use crate::error::{Error, Result};

/// Consistent family of symmetric Bernoulli vectors `(I_0, I_1, ..., I_k)`.
///
/// `I_0` selects the min or max claim count, `I_j` the min or max of the
/// `j`-th claim size.
#[derive(Debug, Clone, PartialEq)]
pub enum BernoulliDependence {
    /// All indicators independent.
    Independent,
    /// All indicators equal.
    Comonotone,
    /// `I_1 = ... = I_k = 1 - I_0`.
    CounterFreq,
    /// `I_0` independent of `I_1 = ... = I_k`.
    IndepFreqComonotoneSev,
    /// `I_0` independent of `I_2 = 1 - I_1`; defined for `k <= 2` only.
    IndepFreqCounterSev,
    /// `I_0` a fair coin, then `I_1, ..., I_k` iid Bernoulli(`alpha` if `I_0 = 1`, else `1 - alpha`).
    AlphaMixture { alpha: f64 },
    /// Finite-dimensional pmf with exchangeable coordinates `1..d`.
    Explicit(BernoulliPmf),
}

/// Conditional law of `K_n = I_1 + ... + I_n` given `I_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnLaw {
    pub n: usize,
    pub i0: u8,
    /// `P(K_n = k | I_0 = i0)` for `k = 0..=n`.
    pub probs: Vec<f64>,
}

impl KnLaw {
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }
}

fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    if p <= 0.0 {
        out[0] = 1.0;
    } else if p >= 1.0 {
        out[n] = 1.0;
    } else {
        let mut ln = n as f64 * (1.0 - p).ln();
        let odds = (p / (1.0 - p)).ln();
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = ln.exp();
            ln += ((n - k) as f64 / (k + 1) as f64).ln() + odds;
        }
    }
    out
}

impl BernoulliDependence {
    pub fn alpha_mixture(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(BernoulliDependence::AlphaMixture { alpha })
        } else {
            Err(Error::InvalidParameter(format!("alpha = {alpha} not in (0, 1)")))
        }
    }

    /// Explicit pmf; coordinates `1..d` must be exchangeable.
    pub fn explicit(pmf: BernoulliPmf) -> Result<Self> {
        if pmf.dim() < 2 {
            return Err(Error::InvalidParameter("explicit dependence needs dimension >= 2".into()));
        }
        let d = pmf.dim();
        for j in 1..d - 1 {
            let mut perm: Vec<usize> = (0..d).collect();
            perm.swap(j, j + 1);
            let q = pmf.permute(&perm);
            if q.probs().iter().zip(pmf.probs()).any(|(a, b)| (a - b).abs() > 1e-12) {
                return Err(Error::NotExchangeable);
            }
        }
        Ok(BernoulliDependence::Explicit(pmf))
    }

    pub fn explicit_theta(theta: &ThetaSet) -> Result<Self> {
        Self::explicit(theta_to_pmf(theta)?)
    }

    pub fn name(&self) -> &'static str {
        match self {
            BernoulliDependence::Independent => "independent",
            BernoulliDependence::Comonotone => "comonotone",
            BernoulliDependence::CounterFreq => "counter-frequency",
            BernoulliDependence::IndepFreqComonotoneSev => "indep-comonotone",
            BernoulliDependence::IndepFreqCounterSev => "indep-counter",
            BernoulliDependence::AlphaMixture { .. } => "alpha-mixture",
            BernoulliDependence::Explicit(_) => "explicit",
        }
    }

    /// Largest `k` for which `(I_0, ..., I_k)` is defined; `None` if unbounded.
    pub fn max_k(&self) -> Option<usize> {
        match self {
            BernoulliDependence::IndepFreqCounterSev => Some(2),
            BernoulliDependence::Explicit(f) => Some(f.dim() - 1),
            _ => None,
        }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if let Some(max) = self.max_k() {
            if k > max {
                return Err(Error::KExceedsFamily { family: self.name().into(), k, max });
            }
        }
        Ok(())
    }

    /// Joint pmf of `(I_0, ..., I_k)`.
    pub fn family_pmf(&self, k: usize) -> Result<BernoulliPmf> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        self.check_k(k)?;
        let d = k + 1;
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge { d, max: MAX_DIM });
        }
        let size = 1usize << d;
        let all = size - 1;
        let sev = all & !1;
        let mut p = vec![0.0; size];
        match self {
            BernoulliDependence::Independent => p.iter_mut().for_each(|x| *x = 1.0 / size as f64),
            BernoulliDependence::Comonotone => {
                p[0] = 0.5;
                p[all] = 0.5;
            }
            BernoulliDependence::CounterFreq => {
                p[1] = 0.5;
                p[sev] = 0.5;
            }
            BernoulliDependence::IndepFreqComonotoneSev => {
                for i in [0, 1, sev, all] {
                    p[i] = 0.25;
                }
            }
            BernoulliDependence::IndepFreqCounterSev => {
                if k == 1 {
                    p.iter_mut().for_each(|x| *x = 0.25);
                } else {
                    for i in [0b010, 0b011, 0b100, 0b101] {
                        p[i] = 0.25;
                    }
                }
            }
            BernoulliDependence::AlphaMixture { alpha } => {
                for (i, slot) in p.iter_mut().enumerate() {
                    let ones = (i >> 1).count_ones() as i32;
                    let a = if i & 1 == 1 { *alpha } else { 1.0 - alpha };
                    *slot = 0.5 * a.powi(ones) * (1.0 - a).powi(k as i32 - ones);
                }
            }
            BernoulliDependence::Explicit(f) => return f.marginalize(d),
        }
        Ok(BernoulliPmf::raw(d, p))
    }

    /// `(theta_01, theta_12, theta_012)`; the last two are 0 when only `k = 1` exists.
    pub fn thetas(&self) -> (f64, f64, f64) {
        match self {
            BernoulliDependence::Independent => (0.0, 0.0, 0.0),
            BernoulliDependence::Comonotone => (1.0, 1.0, 0.0),
            BernoulliDependence::CounterFreq => (-1.0, 1.0, 0.0),
            BernoulliDependence::IndepFreqComonotoneSev => (0.0, 1.0, 0.0),
            BernoulliDependence::IndepFreqCounterSev => (0.0, -1.0, 0.0),
            BernoulliDependence::AlphaMixture { alpha } => {
                let t = 2.0 * alpha - 1.0;
                (t, t * t, 0.0)
            }
            BernoulliDependence::Explicit(f) => {
                let k = (f.dim() - 1).min(2);
                let t = pmf_to_theta(&f.marginalize(k + 1).expect("dimension checked"))
                    .expect("explicit pmf has symmetric marginals");
                if k == 1 {
                    (t.get(&[0, 1]), 0.0, 0.0)
                } else {
                    (t.get(&[0, 1]), t.get(&[1, 2]), t.get(&[0, 1, 2]))
                }
            }
        }
    }

    /// `K_n | I_0` as a mixture of binomials `(weight, p)`, when the family has one.
    pub fn kn_mixture(&self, i0: u8) -> Option<Vec<(f64, f64)>> {
        let hi = i0 == 1;
        match self {
            BernoulliDependence::Independent => Some(vec![(1.0, 0.5)]),
            BernoulliDependence::Comonotone => Some(vec![(1.0, if hi { 1.0 } else { 0.0 })]),
            BernoulliDependence::CounterFreq => Some(vec![(1.0, if hi { 0.0 } else { 1.0 })]),
            BernoulliDependence::IndepFreqComonotoneSev => Some(vec![(0.5, 0.0), (0.5, 1.0)]),
            BernoulliDependence::AlphaMixture { alpha } => {
                Some(vec![(1.0, if hi { *alpha } else { 1.0 - alpha })])
            }
            _ => None,
        }
    }

    /// Conditional law of `K_n` given `I_0 = i0`.
    pub fn kn_law(&self, i0: u8, n: usize) -> Result<KnLaw> {
        if i0 > 1 {
            return Err(Error::InvalidParameter(format!("i0 = {i0}")));
        }
        if n == 0 {
            return Ok(KnLaw { n, i0, probs: vec![1.0] });
        }
        self.check_k(n)?;
        let probs = if let Some(mix) = self.kn_mixture(i0) {
            let mut out = vec![0.0; n + 1];
            for (w, p) in mix {
                for (o, b) in out.iter_mut().zip(binomial_pmf(n, p)) {
                    *o += w * b;
                }
            }
            out
        } else {
            let f = self.family_pmf(n)?;
            let mut out = vec![0.0; n + 1];
            for (i, p) in f.probs().iter().enumerate() {
                if (i & 1) as u8 == i0 {
                    out[(i >> 1).count_ones() as usize] += 2.0 * p;
                }
            }
            out
        };
        Ok(KnLaw { n, i0, probs })
    }

    /// `P(I_1 = i_1, ..., I_n = i_n | I_0 = i0) = 2 f(i0, i_1, ..., i_n)`,
    /// indexed by the bitmask of `(i_1, ..., i_n)`.
    pub fn conditional_pmf(&self, i0: u8, n: usize) -> Result<Vec<f64>> {
        let f = self.family_pmf(n)?;
        Ok(f.probs().iter().enumerate().filter(|(i, _)| (*i & 1) as u8 == i0).map(|(_, p)| 2.0 * p).collect())
    }

    /// Draws `(I_0, ..., I_k)` into `out` (length `k + 1`).
    pub fn sample_vector<R: Rng + ?Sized>(&self, rng: &mut R, k: usize, out: &mut Vec<u8>) -> Result<()> {
        self.check_k(k).map_err(|_| Error::FamilyUndefinedAtLength(k))?;
        out.clear();
        let i0 = rng.random_bool(0.5) as u8;
        out.push(i0);
        self.fill_given_i0(rng, i0, k, out)
    }

    /// Draws `(I_1, ..., I_n)` given `I_0 = i0`, appending to `out`.
    pub fn sample_conditional<R: Rng + ?Sized>(&self, rng: &mut R, i0: u8, n: usize, out: &mut Vec<u8>) -> Result<()> {
        self.check_k(n).map_err(|_| Error::FamilyUndefinedAtLength(n))?;
        self.fill_given_i0(rng, i0, n, out)
    }

    fn fill_given_i0<R: Rng + ?Sized>(&self, rng: &mut R, i0: u8, n: usize, out: &mut Vec<u8>) -> Result<()> {
        match self {
            BernoulliDependence::Independent => out.extend((0..n).map(|_| rng.random_bool(0.5) as u8)),
            BernoulliDependence::Comonotone => out.extend(std::iter::repeat_n(i0, n)),
            BernoulliDependence::CounterFreq => out.extend(std::iter::repeat_n(1 - i0, n)),
            BernoulliDependence::IndepFreqComonotoneSev => {
                let b = rng.random_bool(0.5) as u8;
                out.extend(std::iter::repeat_n(b, n));
            }
            BernoulliDependence::IndepFreqCounterSev => {
                let b = rng.random_bool(0.5) as u8;
                out.extend([b, 1 - b].into_iter().take(n));
            }
            BernoulliDependence::AlphaMixture { alpha } => {
                let a = if i0 == 1 { *alpha } else { 1.0 - alpha };
                out.extend((0..n).map(|_| rng.random_bool(a) as u8));
            }
            BernoulliDependence::Explicit(_) => {
                if n == 0 {
                    return Ok(());
                }
                let cond = self.conditional_pmf(i0, n)?;
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = cond.len() - 1;
                for (i, p) in cond.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        pick = i;
                        break;
                    }
                }
                out.extend((0..n).map(|j| ((pick >> j) & 1) as u8));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependence::theta::ThetaSet;

    fn all_families() -> Vec<BernoulliDependence> {
        let model4 = ThetaSet::from_entries(3, &[(&[0, 1, 2], 1.0)]).unwrap();
        vec![
            BernoulliDependence::Independent,
            BernoulliDependence::Comonotone,
            BernoulliDependence::CounterFreq,
            BernoulliDependence::IndepFreqComonotoneSev,
            BernoulliDependence::IndepFreqCounterSev,
            BernoulliDependence::alpha_mixture(0.3).unwrap(),
            BernoulliDependence::explicit_theta(&model4).unwrap(),
        ]
    }

    #[test]
    fn comonotone_two_point() {
        let f = BernoulliDependence::Comonotone.family_pmf(3).unwrap();
        assert_eq!(f.prob(&[0, 0, 0, 0]), 0.5);
        assert_eq!(f.prob(&[1, 1, 1, 1]), 0.5);
    }

    #[test]
    fn alpha_half_is_uniform() {
        let f = BernoulliDependence::alpha_mixture(0.5).unwrap().family_pmf(4).unwrap();
        assert!(f.probs().iter().all(|p| (p - 1.0 / 32.0).abs() < 1e-15));
    }

    #[test]
    fn counter_frequency_thetas() {
        let f = BernoulliDependence::CounterFreq.family_pmf(2).unwrap();
        let t = pmf_to_theta(&f).unwrap();
        assert_eq!(t.get(&[0, 1]), -1.0);
        assert_eq!(t.get(&[0, 2]), -1.0);
        assert_eq!(t.get(&[1, 2]), 1.0);
        assert_eq!(t.get(&[0, 1, 2]), 0.0);
    }

    #[test]
    fn declared_thetas_match_pmfs() {
        for dep in all_families() {
            let t = pmf_to_theta(&dep.family_pmf(2).unwrap()).unwrap();
            let (a, b, c) = dep.thetas();
            assert!((t.get(&[0, 1]) - a).abs() < 1e-14, "{}", dep.name());
            assert!((t.get(&[0, 2]) - a).abs() < 1e-14, "{}", dep.name());
            assert!((t.get(&[1, 2]) - b).abs() < 1e-14, "{}", dep.name());
            assert!((t.get(&[0, 1, 2]) - c).abs() < 1e-14, "{}", dep.name());
        }
    }

    #[test]
    fn consistency_under_marginalization() {
        for dep in all_families() {
            let top = dep.max_k().unwrap_or(6);
            for k in 1..top {
                let big = dep.family_pmf(k + 1).unwrap();
                let small = dep.family_pmf(k).unwrap();
                let m = big.marginalize(k + 1).unwrap();
                for (a, b) in m.probs().iter().zip(small.probs()) {
                    assert!((a - b).abs() < 1e-14, "{} k={k}", dep.name());
                }
                BernoulliPmf::new(small.dim(), small.probs().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn exchangeable_named_families() {
        for dep in all_families() {
            let k = dep.max_k().unwrap_or(4).min(4);
            let f = dep.family_pmf(k).unwrap();
            let mut perm: Vec<usize> = (0..=k).collect();
            perm[1..].reverse();
            let g = f.permute(&perm);
            assert!(g.probs().iter().zip(f.probs()).all(|(a, b)| (a - b).abs() < 1e-15));
        }
    }

    #[test]
    fn kn_laws() {
        let c = BernoulliDependence::Comonotone.kn_law(1, 5).unwrap();
        assert_eq!(c.probs[5], 1.0);
        let a = BernoulliDependence::alpha_mixture(0.3).unwrap().kn_law(0, 4).unwrap();
        let b = binomial_pmf(4, 0.7);
        assert!(a.probs.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-15));
        assert!(BernoulliDependence::IndepFreqCounterSev.kn_law(0, 3).is_err());
    }

    #[test]
    fn kn_model4_enumeration() {
        // f(i) = (1 + (-1)^{i0+i1+i2}) / 8: mass 1/4 on even-parity outcomes.
        let t = ThetaSet::from_entries(3, &[(&[0, 1, 2], 1.0)]).unwrap();
        let dep = BernoulliDependence::explicit_theta(&t).unwrap();
        let k0 = dep.kn_law(0, 2).unwrap();
        let k1 = dep.kn_law(1, 2).unwrap();
        // I0 = 0: (0,0) and (1,1) each with conditional prob 1/2.
        assert_eq!(k0.probs, vec![0.5, 0.0, 0.5]);
        assert_eq!(k1.probs, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn kn_mean_is_half_n() {
        for dep in all_families() {
            let top = dep.max_k().unwrap_or(6);
            for n in 1..=top {
                let m = 0.5 * (dep.kn_law(0, n).unwrap().mean() + dep.kn_law(1, n).unwrap().mean());
                assert!((m - n as f64 / 2.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn explicit_rejects_non_exchangeable() {
        let t = ThetaSet::from_entries(3, &[(&[0, 1], 0.5)]).unwrap();
        assert!(matches!(BernoulliDependence::explicit_theta(&t), Err(Error::NotExchangeable)));
    }
}
