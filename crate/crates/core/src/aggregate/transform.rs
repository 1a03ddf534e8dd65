//! Transform of `S` conditional on `I_0` and `K_n`:
//! `T_S = sum_{i0} 1/2 sum_n gamma_{N[1+i0]}(n) sum_k P(K_n = k | i0) a^{n-k} b^k`,
//! with `a`, `b` the transforms of `X[1]` and `X[2]`. The same fold gives the
//! LST (reals), the pgf on roots of unity (complex) and the pgf of the
//! mixed Erlang count (truncated power series).

use num_complex::Complex64;

use crate::components::CollectiveRiskModel;
use crate::error::Result;

pub(crate) trait Algebra: Clone {
    fn one_like(&self) -> Self;
    fn zero_like(&self) -> Self;
    /// `self += w * other`.
    fn add_scaled(&mut self, other: &Self, w: f64);
    fn mul(&self, other: &Self) -> Self;
}

impl Algebra for f64 {
    fn one_like(&self) -> Self {
        1.0
    }
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += w * other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Algebra for Complex64 {
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += other * w;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Power series with non-negative coefficients, trimmed so that the dropped
/// tail mass of every product stays below `tol`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Series {
    pub coeffs: Vec<f64>,
    pub tol: f64,
}

impl Series {
    pub fn new(coeffs: Vec<f64>, tol: f64) -> Self {
        Series { coeffs, tol }
    }

    fn trim(&mut self) {
        let mut tail = 0.0;
        while let Some(&last) = self.coeffs.last() {
            if self.coeffs.len() > 1 && tail + last < self.tol {
                tail += last;
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }
}

impl Algebra for Series {
    fn one_like(&self) -> Self {
        Series { coeffs: vec![1.0], tol: self.tol }
    }
    fn zero_like(&self) -> Self {
        Series { coeffs: vec![0.0], tol: self.tol }
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (s, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *s += w * o;
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut s = Series { coeffs: out, tol: self.tol };
        s.trim();
        s
    }
}

fn blend<T: Algebra>(a: &T, b: &T, p: f64) -> T {
    if p == 0.0 {
        return a.clone();
    }
    if p == 1.0 {
        return b.clone();
    }
    let mut c = a.zero_like();
    c.add_scaled(a, 1.0 - p);
    c.add_scaled(b, p);
    c
}

pub(crate) fn fold<T: Algebra>(m: &CollectiveRiskModel, a: &T, b: &T) -> Result<T> {
    let freq = &m.freq;
    let max_n = freq.max_n();
    let mut total = a.zero_like();
    for i0 in 0..2u8 {
        let j = 1 + i0;
        if let Some(mix) = m.dep.kn_mixture(i0) {
            for (w, p) in mix {
                let c = blend(a, b, p);
                let mut pow = a.one_like();
                for n in 0..=max_n {
                    let g = freq.order_pmf(j, n as u64);
                    if g != 0.0 {
                        total.add_scaled(&pow, 0.5 * w * g);
                    }
                    if n < max_n {
                        pow = pow.mul(&c);
                    }
                }
            }
        } else {
            let mut pa = vec![a.one_like()];
            let mut pb = vec![b.one_like()];
            for n in 1..=max_n {
                pa.push(pa[n - 1].mul(a));
                pb.push(pb[n - 1].mul(b));
            }
            for n in 0..=max_n {
                let g = freq.order_pmf(j, n as u64);
                if g == 0.0 {
                    continue;
                }
                let kn = m.dep.kn_law(i0, n)?;
                for (k, pk) in kn.probs.iter().enumerate() {
                    if *pk != 0.0 {
                        total.add_scaled(&pa[n - k].mul(&pb[k]), 0.5 * g * pk);
                    }
                }
            }
        }
    }
    Ok(total)
}

/// `L_S(t) = E[exp(-t S)]`.
pub fn lst_s(m: &CollectiveRiskModel, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(1.0);
    }
    let pair = m.sev_pair();
    fold(m, &pair.min.lst(t), &pair.max.lst(t))
}

/// Order-statistic structure with a closed-form LST for exponential claims
/// and geometric counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Special {
    /// `(I_0, I_1, ...)` comonotone: max count with max sizes.
    Comonotone,
    /// `I_j = 1 - I_0`: max count with min sizes.
    CounterFreq,
}

/// Closed-form LST of `S` for `Geometric(p)` counts and `Exp(beta)` sizes.
pub fn closed_form_exp_geometric(p: f64, beta: f64, family: Special, t: f64) -> f64 {
    let r9 = (9.0 - 8.0 * p).sqrt();
    let r1 = (1.0 + 8.0 * (1.0 - p) * (1.0 - p)).sqrt();
    let b = [
        2.0 * beta * p,
        2.0 * beta * p * (2.0 - p),
        beta / 2.0 * (3.0 - r9),
        beta / 2.0 * (3.0 + r9),
        beta / 2.0 * (3.0 - r1),
        beta / 2.0 * (3.0 + r1),
    ];
    let y = |j: usize| b[j - 1] / (b[j - 1] + t);
    let h = (1.0 - p) / 2.0;
    let tail56 = b[5] / (b[5] - b[4]) * y(5) + b[4] / (b[4] - b[5]) * y(6);
    let inner = match family {
        Special::Comonotone => {
            h * y(2) + b[3] / (b[3] - b[2]) * y(3) + b[2] / (b[2] - b[3]) * y(4) - h * tail56
        }
        Special::CounterFreq => y(1) - h * y(2) + h * tail56,
    };
    p + (1.0 - p) * inner
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependence::BernoulliDependence;
    use crate::dist::{Frequency, Severity};

    #[test]
    fn series_trim_keeps_mass() {
        let s = Series::new(vec![0.5, 0.5], 1e-14);
        let mut p = s.one_like();
        for _ in 0..60 {
            p = p.mul(&s);
        }
        let total: f64 = p.coeffs.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert!(p.coeffs.len() < 61);
    }

    #[test]
    fn comonotone_lst_is_order_mixture() {
        let f = Frequency::poisson(1.7).unwrap();
        let x = Severity::gamma(2.0, 0.5).unwrap();
        let m = CollectiveRiskModel::new(f.clone(), x.clone(), BernoulliDependence::Comonotone).unwrap();
        let t = 0.3;
        let l1 = x.order(1).lst(t);
        let l2 = x.order(2).lst(t);
        let expect = 0.5 * f.order_law(1).pgf(l1) + 0.5 * f.order_law(2).pgf(l2);
        assert!((lst_s(&m, t).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_fold() {
        let p = 10.0 / 11.0;
        let beta = 1.0 / 2000.0;
        let f = Frequency::geometric(p).unwrap();
        let x = Severity::exponential(beta).unwrap();
        for (fam, dep) in [
            (Special::Comonotone, BernoulliDependence::Comonotone),
            (Special::CounterFreq, BernoulliDependence::CounterFreq),
        ] {
            let m = CollectiveRiskModel::new(f.clone(), x.clone(), dep).unwrap();
            for t in [0.0, 1e-4, 1e-3, 1e-2] {
                let a = closed_form_exp_geometric(p, beta, fam, t);
                let b = lst_s(&m, t).unwrap();
                assert!((a - b).abs() < 1e-10, "{fam:?} t={t}: {a} vs {b}");
            }
        }
    }
}
