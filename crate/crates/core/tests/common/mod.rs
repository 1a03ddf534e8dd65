//! Exhaustive enumeration over `(I_0, I_1, I_2)`, the iid count pair and the
//! two iid claim-size pairs of small explicit-dependence models.

#![allow(dead_code)]

use fgm_crm::aggregate::discrete_aggregate_fft;
use fgm_crm::dependence::{check_admissible, ThetaSet};
use fgm_crm::{expected_s, variance_s, BernoulliDependence, CollectiveRiskModel, Frequency, Severity};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Case {
    pub n_pmf: Vec<f64>,
    pub step: f64,
    pub x_pmf: Vec<f64>,
    /// `(theta01 = theta02, theta12, theta012)`.
    pub theta: (f64, f64, f64),
}

/// Trivariate pmf written out term by term.
pub fn indicator_pmf(t: (f64, f64, f64)) -> [[[f64; 2]; 2]; 2] {
    let (t01, t12, t012) = t;
    let sign = |a: usize, b: usize| if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
    let mut f = [[[0.0; 2]; 2]; 2];
    for i0 in 0..2 {
        for i1 in 0..2 {
            for i2 in 0..2 {
                let s012 = if (i0 + i1 + i2) % 2 == 0 { 1.0 } else { -1.0 };
                f[i0][i1][i2] =
                    (1.0 + sign(i0, i1) * t01 + sign(i0, i2) * t01 + sign(i1, i2) * t12 + s012 * t012) / 8.0;
            }
        }
    }
    f
}

pub fn random_simplex(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len).map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random::<f64>() }).collect();
    if w.iter().all(|x| *x == 0.0) {
        w[len - 1] = 1.0;
    }
    let t: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= t);
    w
}

pub fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let theta = loop {
        let t = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let set = ThetaSet::from_entries(3, &[(&[0, 1], t.0), (&[0, 2], t.0), (&[1, 2], t.1), (&[0, 1, 2], t.2)]).unwrap();
        if check_admissible(&set).admissible {
            break t;
        }
    };
    let n_len = rng.random_range(2..=3);
    let x_len = rng.random_range(2..=5);
    Case {
        n_pmf: random_simplex(rng, n_len),
        step: if rng.random_bool(0.5) { 0.5 } else { 1.0 },
        x_pmf: random_simplex(rng, x_len),
        theta,
    }
}

pub fn model(c: &Case) -> CollectiveRiskModel {
    let (t01, t12, t012) = c.theta;
    let set = ThetaSet::from_entries(3, &[(&[0, 1], t01), (&[0, 2], t01), (&[1, 2], t12), (&[0, 1, 2], t012)]).unwrap();
    CollectiveRiskModel::new(
        Frequency::from_pmf(c.n_pmf.clone()).unwrap(),
        Severity::discrete(c.step, c.x_pmf.clone()).unwrap(),
        BernoulliDependence::explicit_theta(&set).unwrap(),
    )
    .unwrap()
}

/// Joint pmf of `(N, X_1 index, X_2 index)` by brute force.
pub fn enumerate(c: &Case) -> Vec<Vec<Vec<f64>>> {
    let fi = indicator_pmf(c.theta);
    let (nn, nx) = (c.n_pmf.len(), c.x_pmf.len());
    let mut joint = vec![vec![vec![0.0; nx]; nx]; nn];
    for (i0, fi0) in fi.iter().enumerate() {
        for (i1, fi1) in fi0.iter().enumerate() {
            for (i2, &p_i) in fi1.iter().enumerate() {
                if p_i == 0.0 {
                    continue;
                }
                let pick = |a: usize, b: usize, i: usize| if i == 1 { a.max(b) } else { a.min(b) };
                for a in 0..nn {
                    for b in 0..nn {
                        let n = pick(a, b, i0);
                        let p_n = p_i * c.n_pmf[a] * c.n_pmf[b];
                        for x1a in 0..nx {
                            for x1b in 0..nx {
                                let x1 = pick(x1a, x1b, i1);
                                let p1 = p_n * c.x_pmf[x1a] * c.x_pmf[x1b];
                                for x2a in 0..nx {
                                    for x2b in 0..nx {
                                        let x2 = pick(x2a, x2b, i2);
                                        joint[n][x1][x2] += p1 * c.x_pmf[x2a] * c.x_pmf[x2b];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    joint
}

/// Largest absolute gap between the analytic modules and enumeration, with
/// the quantity where it occurs.
#[derive(Debug, Clone, Default)]
pub struct Gap {
    pub worst: f64,
    pub what: String,
}

impl Gap {
    fn add(&mut self, what: &str, got: f64, want: f64) {
        let d = (got - want).abs();
        if !(d <= self.worst) {
            self.worst = d;
            self.what = format!("{what}: analytic {got} vs enumeration {want}");
        }
    }
}

pub fn compare(c: &Case) -> Gap {
    let mut gap = Gap::default();
    let m = model(c);
    let joint = enumerate(c);
    let (nn, nx, h) = (c.n_pmf.len(), c.x_pmf.len(), c.step);

    // S pmf on the grid: claims beyond the second never occur (N <= 2).
    let mut s_pmf = vec![0.0; 2 * nx - 1];
    for (n, jn) in joint.iter().enumerate() {
        for (x1, row) in jn.iter().enumerate() {
            for (x2, &p) in row.iter().enumerate() {
                let s = match n {
                    0 => 0,
                    1 => x1,
                    _ => x1 + x2,
                };
                s_pmf[s] += p;
            }
        }
    }
    let mean: f64 = s_pmf.iter().enumerate().map(|(s, p)| s as f64 * h * p).sum();
    let second: f64 = s_pmf.iter().enumerate().map(|(s, p)| (s as f64 * h).powi(2) * p).sum();
    gap.add("E[S]", expected_s(&m).unwrap().total, mean);
    gap.add("Var(S)", variance_s(&m).unwrap().total, second - mean * mean);

    let agg = discrete_aggregate_fft(&m, 16).unwrap();
    let grid = agg.as_grid().unwrap();
    gap.add("grid step", grid.step, h);
    for (s, &want) in s_pmf.iter().enumerate() {
        gap.add(&format!("P(S = {})", s as f64 * h), grid.pmf[s], want);
    }
    for s in s_pmf.len()..grid.pmf.len() {
        gap.add("P(S) beyond support", grid.pmf[s], 0.0);
    }

    for (n, jn) in joint.iter().enumerate().take(nn) {
        let p_n: f64 = jn.iter().flatten().sum();
        if p_n < 1e-6 {
            continue;
        }
        let marg1: Vec<f64> = (0..nx).map(|x1| jn[x1].iter().sum::<f64>() / p_n).collect();
        let marg2: Vec<f64> = (0..nx).map(|x2| jn.iter().map(|r| r[x2]).sum::<f64>() / p_n).collect();
        let e1: f64 = marg1.iter().enumerate().map(|(x, p)| x as f64 * h * p).sum();
        let e2: f64 = marg2.iter().enumerate().map(|(x, p)| x as f64 * h * p).sum();
        let e12: f64 = (0..nx)
            .flat_map(|a| (0..nx).map(move |b| (a, b)))
            .map(|(a, b)| a as f64 * h * b as f64 * h * jn[a][b] / p_n)
            .sum();
        let n64 = n as u64;
        for (x, &want) in marg1.iter().enumerate() {
            gap.add(&format!("P(X = {} | N = {n})", x as f64 * h), m.conditional_sev_pmf(n64, x as f64 * h).unwrap(), want);
        }
        gap.add(&format!("E[X_1 | N = {n}]"), m.conditional_mean(n64).unwrap(), e1);
        gap.add(&format!("E[X_2 | N = {n}]"), m.conditional_mean(n64).unwrap(), e2);
        gap.add(&format!("Cov(X_1, X_2 | N = {n})"), m.conditional_cov(n64).unwrap(), e12 - e1 * e2);
    }

    let (mut en, mut ex, mut enx, mut e12) = (0.0, 0.0, 0.0, 0.0);
    for (n, jn) in joint.iter().enumerate() {
        for (a, row) in jn.iter().enumerate() {
            for (b, &p) in row.iter().enumerate() {
                let (x1, x2) = (a as f64 * h, b as f64 * h);
                en += n as f64 * p;
                ex += x1 * p;
                enx += n as f64 * x1 * p;
                e12 += x1 * x2 * p;
            }
        }
    }
    gap.add("Cov(N, X_1)", m.cov_freq_sev().unwrap(), enx - en * ex);
    gap.add("Cov(X_1, X_2)", m.cov_sev_sev().unwrap(), e12 - ex * ex);
    gap
}
