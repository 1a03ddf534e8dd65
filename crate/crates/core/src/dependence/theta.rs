use crate::error::{Error, Result};

/// Largest dimension stored densely.
pub const MAX_DIM: usize = 20;

/// FGM parameters `theta_J` for subsets `J` of `{0, ..., d-1}` with `|J| >= 2`.
///
/// Subsets are bitmasks: coordinate `j` is bit `j`. Entries for `|J| < 2`
/// are always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSet {
    dim: usize,
    coeffs: Vec<f64>,
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidParameter("dimension must be >= 1".into()))
    } else if d > MAX_DIM {
        Err(Error::DimensionTooLarge { d, max: MAX_DIM })
    } else {
        Ok(())
    }
}

fn mask_of(indices: &[usize], dim: usize) -> Result<usize> {
    let mut mask = 0usize;
    for &j in indices {
        if j >= dim {
            return Err(Error::InvalidParameter(format!("index {j} >= dimension {dim}")));
        }
        if mask & (1 << j) != 0 {
            return Err(Error::InvalidParameter(format!("index {j} repeated")));
        }
        mask |= 1 << j;
    }
    Ok(mask)
}

impl ThetaSet {
    /// All-zero parameters (independence).
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(ThetaSet { dim, coeffs: vec![0.0; 1 << dim] })
    }

    /// Builds from `(subset, value)` pairs; absent subsets are zero.
    pub fn from_entries(dim: usize, entries: &[(&[usize], f64)]) -> Result<Self> {
        let mut t = Self::zeros(dim)?;
        for (idx, v) in entries {
            t.set(idx, *v)?;
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, indices: &[usize]) -> f64 {
        mask_of(indices, self.dim).map(|m| self.coeffs[m]).unwrap_or(0.0)
    }

    pub fn get_mask(&self, mask: usize) -> f64 {
        self.coeffs.get(mask).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, indices: &[usize], value: f64) -> Result<()> {
        let mask = mask_of(indices, self.dim)?;
        if mask.count_ones() < 2 {
            return Err(Error::InvalidParameter("theta subsets need at least two indices".into()));
        }
        if !(-1.0..=1.0).contains(&value) {
            return Err(Error::InvalidParameter(format!("theta {indices:?} = {value} not in [-1, 1]")));
        }
        self.coeffs[mask] = value;
        Ok(())
    }

    /// Non-zero entries as `(subset bitmask, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(m, v)| (m, *v))
    }
}

/// Dense pmf on `{0, 1}^d`; index bit `j` is `i_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliPmf {
    dim: usize,
    probs: Vec<f64>,
}

impl BernoulliPmf {
    /// Validates non-negativity, total mass and symmetric marginals (1e-12).
    pub fn new(dim: usize, probs: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if probs.len() != 1 << dim {
            return Err(Error::InvalidParameter(format!(
                "pmf of dimension {dim} needs {} values, got {}",
                1 << dim,
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= -1e-15)) {
            return Err(Error::InvalidParameter(format!("negative probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("pmf sums to {total}")));
        }
        let pmf = BernoulliPmf { dim, probs };
        for j in 0..dim {
            let p = pmf.marginal_one(j);
            if (p - 0.5).abs() > 1e-12 {
                return Err(Error::AsymmetricMarginals { coord: j, prob: p });
            }
        }
        Ok(pmf)
    }

    pub(crate) fn raw(dim: usize, probs: Vec<f64>) -> Self {
        BernoulliPmf { dim, probs }
    }

    /// Uniform pmf (all coordinates independent).
    pub fn uniform(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::raw(dim, vec![1.0 / (1u64 << dim) as f64; 1 << dim]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `f(i)` for an explicit outcome vector.
    pub fn prob(&self, outcome: &[u8]) -> f64 {
        let idx = outcome.iter().enumerate().fold(0usize, |acc, (j, b)| acc | ((*b as usize & 1) << j));
        self.probs.get(idx).copied().unwrap_or(0.0)
    }

    /// `P(I_j = 1)`.
    pub fn marginal_one(&self, j: usize) -> f64 {
        self.probs.iter().enumerate().filter(|(i, _)| i & (1 << j) != 0).map(|(_, p)| p).sum()
    }

    /// `P(I_j = 1, I_l = 1)`.
    pub fn pair_one(&self, j: usize, l: usize) -> f64 {
        let m = (1 << j) | (1 << l);
        self.probs.iter().enumerate().filter(|(i, _)| i & m == m).map(|(_, p)| p).sum()
    }

    /// Joint pmf of the first `k` coordinates.
    pub fn marginalize(&self, k: usize) -> Result<BernoulliPmf> {
        if k == 0 || k > self.dim {
            return Err(Error::InvalidParameter(format!("cannot keep {k} of {} coordinates", self.dim)));
        }
        let mask = (1usize << k) - 1;
        let mut out = vec![0.0; 1 << k];
        for (i, p) in self.probs.iter().enumerate() {
            out[i & mask] += p;
        }
        Ok(Self::raw(k, out))
    }

    /// Pmf with coordinates reordered: new coordinate `j` is old `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> BernoulliPmf {
        let mut out = vec![0.0; self.probs.len()];
        for (i, p) in self.probs.iter().enumerate() {
            let mut ni = 0;
            for (new, &old) in perm.iter().enumerate() {
                if i & (1 << old) != 0 {
                    ni |= 1 << new;
                }
            }
            out[ni] += p;
        }
        Self::raw(self.dim, out)
    }
}

/// In-place unnormalized Walsh-Hadamard transform.
fn wht(v: &mut [f64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

fn raw_pmf(theta: &ThetaSet) -> Vec<f64> {
    let mut v = theta.coeffs.clone();
    v[0] = 1.0;
    wht(&mut v);
    let scale = 1.0 / v.len() as f64;
    v.iter_mut().for_each(|x| *x *= scale);
    v
}

/// Outcome of the exhaustive admissibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// Smallest value of `1 + sum_J theta_J prod_{j in J} eps_j`.
    pub min_value: f64,
    /// Sign vector attaining it.
    pub signs: Vec<i8>,
}

/// Evaluates all `2^d` sign constraints.
pub fn check_admissible(theta: &ThetaSet) -> Admissibility {
    let pmf = raw_pmf(theta);
    let n = pmf.len() as f64;
    let (idx, min) = pmf
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, v * n))
        .unwrap();
    let signs = (0..theta.dim).map(|j| if idx & (1 << j) != 0 { -1 } else { 1 }).collect();
    Admissibility { admissible: min >= -1e-12, min_value: min, signs }
}

/// `f(i) = 2^{-d} (1 + sum_J (-1)^{sum_{j in J} i_j} theta_J)`.
pub fn theta_to_pmf(theta: &ThetaSet) -> Result<BernoulliPmf> {
    let adm = check_admissible(theta);
    if !adm.admissible {
        return Err(Error::InadmissibleTheta { signs: adm.signs, value: adm.min_value });
    }
    let probs = raw_pmf(theta).into_iter().map(|p| p.max(0.0)).collect();
    Ok(BernoulliPmf::raw(theta.dim, probs))
}

/// Inverse of [`theta_to_pmf`]: `theta_J = sum_i (-1)^{sum_{j in J} i_j} f(i)`.
pub fn pmf_to_theta(f: &BernoulliPmf) -> Result<ThetaSet> {
    let mut v = f.probs.clone();
    wht(&mut v);
    for j in 0..f.dim {
        let c = v[1 << j];
        if c.abs() > 1e-12 {
            return Err(Error::AsymmetricMarginals { coord: j, prob: 0.5 * (1.0 - c) });
        }
    }
    for (m, x) in v.iter_mut().enumerate() {
        if m.count_ones() < 2 {
            *x = 0.0;
        }
    }
    Ok(ThetaSet { dim: f.dim, coeffs: v })
}
