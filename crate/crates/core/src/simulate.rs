//! Exact sampling of `(N, X_1, ..., X_N)` through the min/max representation
//! and plug-in Monte Carlo estimation.
//!
//! Each replication `r` draws from its own ChaCha8 stream `(seed, r)`, so the
//! output does not depend on thread count. Unused order-statistic partners are
//! recycled between replications of the same fixed-size chunk.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::components::CollectiveRiskModel;
use crate::dependence::BernoulliDependence;
use crate::dist::{Frequency, Severity};
use crate::error::{Error, Result};

/// Replications per recycling chunk.
pub const CHUNK: usize = 1 << 14;
/// Capacity of each recycling queue.
pub const RECYCLE_CAP: usize = 100_000;
/// Default bootstrap resamples for quantile-based measures.
pub const DEFAULT_BOOTSTRAP: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Two counts, full indicator vector, `N` chosen by `I_0`.
    One,
    /// `I_0`, then `N` from its order law, then `(I_1..I_N) | I_0`.
    Two,
}

impl Algorithm {
    pub fn number(self) -> u8 {
        match self {
            Algorithm::One => 1,
            Algorithm::Two => 2,
        }
    }

    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Algorithm::One),
            2 => Ok(Algorithm::Two),
            _ => Err(Error::InvalidParameter(format!("algorithm {k} (expected 1 or 2)"))),
        }
    }
}

/// Simulated records stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub seed: u64,
    pub algorithm: Algorithm,
    pub counts: Vec<u64>,
    /// All claims, record after record.
    pub claims: Vec<f64>,
    pub totals: Vec<f64>,
    offsets: Vec<usize>,
}

impl SampleBatch {
    pub fn reps(&self) -> usize {
        self.totals.len()
    }

    /// `(n, claims, s)` of record `i`.
    pub fn record(&self, i: usize) -> (u64, &[f64], f64) {
        (self.counts[i], &self.claims[self.offsets[i]..self.offsets[i + 1]], self.totals[i])
    }
}

/// Per-claim severity source with FIFO recycling of unused partners.
struct ClaimSource<'a> {
    sev: &'a Severity,
    recycle: bool,
    mins: VecDeque<f64>,
    maxs: VecDeque<f64>,
    pending_min: Vec<f64>,
    pending_max: Vec<f64>,
}

impl<'a> ClaimSource<'a> {
    fn new(sev: &'a Severity, recycle: bool) -> Self {
        ClaimSource {
            sev,
            recycle,
            mins: VecDeque::new(),
            maxs: VecDeque::new(),
            pending_min: Vec::new(),
            pending_max: Vec::new(),
        }
    }

    fn draw<R: Rng>(&mut self, rng: &mut R, which: u8) -> f64 {
        let queue = if which == 1 { &mut self.mins } else { &mut self.maxs };
        if let Some(x) = queue.pop_front() {
            return x;
        }
        let a = self.sev.sample(rng);
        let b = self.sev.sample(rng);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if which == 1 {
            self.pending_max.push(hi);
            lo
        } else {
            self.pending_min.push(lo);
            hi
        }
    }

    /// Makes this record's leftovers available to later records only.
    fn end_record(&mut self) {
        if !self.recycle {
            self.pending_min.clear();
            self.pending_max.clear();
            return;
        }
        for (queue, pending) in [(&mut self.mins, &mut self.pending_min), (&mut self.maxs, &mut self.pending_max)] {
            for x in pending.drain(..) {
                if queue.len() == RECYCLE_CAP {
                    queue.pop_front();
                }
                queue.push_back(x);
            }
        }
    }
}

/// Indicator generation, with cached conditional cdfs for explicit pmfs.
enum Indicators<'a> {
    Family(&'a BernoulliDependence),
    /// `tables[i0][n]` is the cdf over bitmasks of `(I_1..I_n) | I_0 = i0`.
    Table([Vec<Vec<f64>>; 2]),
}

impl<'a> Indicators<'a> {
    fn new(dep: &'a BernoulliDependence) -> Result<Self> {
        let max = match dep {
            BernoulliDependence::Explicit(_) => dep.max_k().unwrap_or(0),
            _ => return Ok(Indicators::Family(dep)),
        };
        let build = |i0: u8| -> Result<Vec<Vec<f64>>> {
            let mut out = vec![vec![1.0]];
            for n in 1..=max {
                let mut acc = 0.0;
                out.push(
                    dep.conditional_pmf(i0, n)?
                        .into_iter()
                        .map(|p| {
                            acc += p;
                            acc
                        })
                        .collect(),
                );
            }
            Ok(out)
        };
        Ok(Indicators::Table([build(0)?, build(1)?]))
    }

    fn conditional<R: Rng>(&self, rng: &mut R, i0: u8, n: usize, out: &mut Vec<u8>) -> Result<()> {
        match self {
            Indicators::Family(dep) => dep.sample_conditional(rng, i0, n, out),
            Indicators::Table(t) => {
                let cdf = t[i0 as usize].get(n).ok_or(Error::FamilyUndefinedAtLength(n))?;
                let u: f64 = rng.random();
                let pick = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                out.extend((0..n).map(|j| ((pick >> j) & 1) as u8));
                Ok(())
            }
        }
    }

    fn vector<R: Rng>(&self, rng: &mut R, k: usize, out: &mut Vec<u8>) -> Result<()> {
        match self {
            Indicators::Family(dep) => dep.sample_vector(rng, k, out),
            Indicators::Table(_) => {
                out.clear();
                let i0 = rng.random_bool(0.5) as u8;
                out.push(i0);
                self.conditional(rng, i0, k, out)
            }
        }
    }
}

struct Chunk {
    counts: Vec<u64>,
    claims: Vec<f64>,
    totals: Vec<f64>,
}

fn rep_rng(seed: u64, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    rng
}

struct Sampler<'a> {
    m: &'a CollectiveRiskModel,
    ind: Indicators<'a>,
    order_freq: [Frequency; 2],
    algorithm: Algorithm,
    recycle: bool,
}

impl Sampler<'_> {
    fn run_chunk(&self, seed: u64, start: usize, end: usize) -> Result<Chunk> {
        let mut src = ClaimSource::new(&self.m.sev, self.recycle);
        let mut bits = Vec::new();
        let mut chunk = Chunk { counts: Vec::with_capacity(end - start), claims: Vec::new(), totals: Vec::new() };
        for rep in start..end {
            let mut rng = rep_rng(seed, rep);
            let n = match self.algorithm {
                Algorithm::One => {
                    let a = self.m.freq.sample(&mut rng);
                    let b = self.m.freq.sample(&mut rng);
                    let (lo, hi) = (a.min(b), a.max(b));
                    self.ind.vector(&mut rng, hi as usize, &mut bits)?;
                    if bits[0] == 1 {
                        hi
                    } else {
                        lo
                    }
                }
                Algorithm::Two => {
                    let i0 = rng.random_bool(0.5) as u8;
                    let n = self.order_freq[i0 as usize].sample(&mut rng);
                    bits.clear();
                    bits.push(i0);
                    self.ind.conditional(&mut rng, i0, n as usize, &mut bits)?;
                    n
                }
            };
            let mut s = 0.0;
            for &b in &bits[1..=n as usize] {
                let x = src.draw(&mut rng, b + 1);
                s += x;
                chunk.claims.push(x);
            }
            src.end_record();
            chunk.counts.push(n);
            chunk.totals.push(s);
        }
        Ok(chunk)
    }
}

/// Options for [`simulate`].
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub algorithm: Algorithm,
    pub recycle: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { algorithm: Algorithm::One, recycle: true }
    }
}

pub fn simulate(m: &CollectiveRiskModel, reps: usize, seed: u64, opts: SimOptions) -> Result<SampleBatch> {
    let sampler = Sampler {
        m,
        ind: Indicators::new(&m.dep)?,
        order_freq: [m.freq.order_law(1), m.freq.order_law(2)],
        algorithm: opts.algorithm,
        recycle: opts.recycle,
    };
    let chunks = reps.div_ceil(CHUNK);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| sampler.run_chunk(seed, c * CHUNK, ((c + 1) * CHUNK).min(reps)))
        .collect::<Result<Vec<_>>>()?;
    let mut batch = SampleBatch {
        seed,
        algorithm: opts.algorithm,
        counts: Vec::with_capacity(reps),
        claims: Vec::new(),
        totals: Vec::with_capacity(reps),
        offsets: Vec::with_capacity(reps + 1),
    };
    batch.offsets.push(0);
    for part in parts {
        for &n in &part.counts {
            let last = *batch.offsets.last().unwrap();
            batch.offsets.push(last + n as usize);
        }
        batch.counts.extend(part.counts);
        batch.claims.extend(part.claims);
        batch.totals.extend(part.totals);
    }
    Ok(batch)
}

/// Algorithm 1 with recycling.
pub fn sample_method1(m: &CollectiveRiskModel, reps: usize, seed: u64) -> Result<SampleBatch> {
    simulate(m, reps, seed, SimOptions { algorithm: Algorithm::One, recycle: true })
}

/// Algorithm 2 with recycling.
pub fn sample_method2(m: &CollectiveRiskModel, reps: usize, seed: u64) -> Result<SampleBatch> {
    simulate(m, reps, seed, SimOptions { algorithm: Algorithm::Two, recycle: true })
}

/// Plug-in estimates with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub reps: usize,
    pub kappa: f64,
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
    pub var: f64,
    pub var_se: f64,
    pub tvar: f64,
    pub tvar_se: f64,
}

/// Left-inverse quantile and TVaR of a sorted sample with integer weights
/// (`None` means weight 1 each).
fn weighted_risk(sorted: &[f64], weights: Option<&[u32]>, kappa: f64) -> (f64, f64) {
    let n: f64 = match weights {
        Some(w) => w.iter().map(|&c| c as f64).sum(),
        None => sorted.len() as f64,
    };
    let w = |i: usize| weights.map_or(1.0, |w| w[i] as f64);
    let target = kappa * n - 1e-9 * n;
    let mut cum = 0.0;
    let mut qi = sorted.len() - 1;
    for i in 0..sorted.len() {
        cum += w(i);
        if cum >= target && w(i) > 0.0 {
            qi = i;
            break;
        }
    }
    let q = sorted[qi];
    // extend over ties so that `cum` is the empirical cdf at q
    let mut j = qi + 1;
    while j < sorted.len() && sorted[j] == q {
        cum += w(j);
        j += 1;
    }
    let above: f64 = (j..sorted.len()).map(|i| w(i) * sorted[i]).sum();
    let tvar = (above / n + q * (cum / n - kappa)) / (1.0 - kappa);
    (q, tvar)
}

/// Mean and variance with asymptotic SEs; VaR and TVaR at `kappa` with
/// bootstrap SEs from `resamples` multinomial resamples.
pub fn mc_estimate(totals: &[f64], kappa: f64, resamples: usize, seed: u64) -> Result<McEstimate> {
    let n = totals.len();
    if n < 2 {
        return Err(Error::InvalidParameter("at least two replications are needed".into()));
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::InvalidParameter(format!("kappa = {kappa}")));
    }
    let nf = n as f64;
    let mean = totals.iter().sum::<f64>() / nf;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &s in totals {
        let d = (s - mean) * (s - mean);
        m2 += d;
        m4 += d * d;
    }
    let variance = m2 / (nf - 1.0);
    let (c2, c4) = (m2 / nf, m4 / nf);
    let mean_se = (variance / nf).sqrt();
    let variance_se = ((c4 - c2 * c2).max(0.0) / nf).sqrt();

    let mut sorted = totals.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (var, tvar) = weighted_risk(&sorted, None, kappa);

    let boot: Vec<(f64, f64)> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = rep_rng(seed ^ 0x5eed_b007, b);
            let mut w = vec![0u32; n];
            for _ in 0..n {
                w[rng.random_range(0..n)] += 1;
            }
            weighted_risk(&sorted, Some(&w), kappa)
        })
        .collect();
    let sd = |vals: &mut dyn Iterator<Item = f64>| {
        let v: Vec<f64> = vals.collect();
        if v.len() < 2 {
            return 0.0;
        }
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
    };
    let var_se = sd(&mut boot.iter().map(|b| b.0));
    let tvar_se = sd(&mut boot.iter().map(|b| b.1));
    Ok(McEstimate { reps: n, kappa, mean, mean_se, variance, variance_se, var, var_se, tvar, tvar_se })
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let en = (n * m / (n + m)).sqrt();
    KsResult { statistic: d, p_value: kolmogorov_q((en + 0.12 + 0.11 / en) * d) }
}

/// Kolmogorov survival function `Q(l) = 2 sum (-1)^(k-1) exp(-2 k^2 l^2)`.
pub fn kolmogorov_q(l: f64) -> f64 {
    if l < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * l * l).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
