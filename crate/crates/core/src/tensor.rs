//! Dense coefficient tensors for m-linear forms, anisotropic mixed-norm
//! evaluation, random-sign (KSZ) generation and the lifting construction.
//!
//! Storage is dense row-major on `(j_1, ..., j_m)`; `j_1` is the outermost
//! mixed-norm level. Desk scale is `m <= 4`, `n <= 64`.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{ExponentError, TensorError};
use crate::scalar::{ExtScalar, Rat};

/// The m-way array of coefficients `A(e_{j_1}, ..., e_{j_m})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTensor {
    dims: Vec<usize>,
    entries: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    seed: Option<u64>,
}

impl CoefficientTensor {
    pub fn new(dims: Vec<usize>, entries: Vec<f64>) -> Result<Self, TensorError> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(TensorError::Invalid(format!("bad dims {dims:?}")));
        }
        let len: usize = dims.iter().product();
        if entries.len() != len {
            return Err(TensorError::Invalid(format!(
                "dims {dims:?} need {len} entries, got {}",
                entries.len()
            )));
        }
        Ok(CoefficientTensor {
            dims,
            entries,
            seed: None,
        })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self, TensorError> {
        let len = dims.iter().product();
        CoefficientTensor::new(dims, vec![0.0; len])
    }

    /// 2-way tensor from rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, TensorError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(TensorError::Invalid("ragged rows".into()));
        }
        CoefficientTensor::new(
            vec![n_rows, n_cols],
            rows.iter().flatten().copied().collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut off = 0;
        for (i, &j) in idx.iter().enumerate() {
            debug_assert!(j < self.dims[i]);
            off = off * self.dims[i] + j;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.entries[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let off = self.offset(idx);
        self.entries[off] = v;
    }

    pub fn scale(&self, c: f64) -> CoefficientTensor {
        CoefficientTensor {
            dims: self.dims.clone(),
            entries: self.entries.iter().map(|e| c * e).collect(),
            seed: None,
        }
    }

    /// Nested `l_{t_1}(l_{t_2}(...l_{t_m}))` norm of the coefficients,
    /// innermost index first; `t_k = inf` levels take the supremum.
    pub fn mixed_norm(&self, t: &[ExtScalar]) -> Result<f64, TensorError> {
        if t.len() != self.order() {
            return Err(TensorError::DimensionMismatch(format!(
                "{} exponents for an order-{} tensor",
                t.len(),
                self.order()
            )));
        }
        for (k, tk) in t.iter().enumerate() {
            if !tk.is_exponent() {
                return Err(TensorError::Invalid(format!(
                    "t_{} = {tk} outside [1, inf]",
                    k + 1
                )));
            }
        }
        let mut data: Vec<f64> = self.entries.iter().map(|e| e.abs()).collect();
        for (level, tk) in t.iter().enumerate().rev() {
            let d = self.dims[level];
            data = data
                .chunks(d)
                .map(|chunk| lp_reduce(chunk, tk))
                .collect();
        }
        debug_assert_eq!(data.len(), 1);
        Ok(data[0])
    }

    /// Writes a 2-way slice as CSV. For `m > 2`, `prefix` fixes the leading
    /// `m - 2` indices (0-based).
    pub fn csv_slice(&self, prefix: &[usize]) -> Result<String, TensorError> {
        if prefix.len() + 2 != self.order() {
            return Err(TensorError::DimensionMismatch(format!(
                "prefix of length {} for an order-{} tensor (need m - 2)",
                prefix.len(),
                self.order()
            )));
        }
        let rows = self.dims[self.order() - 2];
        let cols = self.dims[self.order() - 1];
        let mut idx: Vec<usize> = prefix.to_vec();
        idx.extend([0, 0]);
        let mut out = String::new();
        for i in 0..rows {
            idx[prefix.len()] = i;
            let mut line = Vec::with_capacity(cols);
            for j in 0..cols {
                idx[prefix.len() + 1] = j;
                line.push(format!("{}", self.get(&idx)));
            }
            out.push_str(&line.join(","));
            out.push('\n');
        }
        Ok(out)
    }
}

/// `l_t` reduction of a block of nonnegative values.
fn lp_reduce(block: &[f64], t: &ExtScalar) -> f64 {
    match t.as_rat() {
        None => block.iter().cloned().fold(0.0, f64::max),
        Some(r) => {
            let t = r.to_f64().unwrap_or(f64::NAN);
            if t == 1.0 {
                kahan_sum(block.iter().copied())
            } else {
                kahan_sum(block.iter().map(|x| x.powf(t))).powf(1.0 / t)
            }
        }
    }
}

/// Compensated summation; keeps mixed norms stable on large blocks.
fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Per-level exponents of a nested norm; length must match the tensor order.
pub type MixedNormSpec = Vec<ExtScalar>;

/// Deterministic seed for (base, n, trial), a splitmix64 chain.
pub fn derive_seed(base: u64, n: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ n) ^ trial)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Random +-1 tensor of order `m` with every dimension `n`.
///
/// Generator is pinned for reproducibility: ChaCha8 (rand_chacha) seeded via
/// `seed_from_u64`, one `next_u32` per entry in row-major order, low bit
/// mapped to the sign (1 -> +1, 0 -> -1).
pub fn ksz_sample(m: usize, n: usize, seed: u64) -> CoefficientTensor {
    assert!(m >= 1 && n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = n.pow(m as u32);
    let entries: Vec<f64> = (0..len)
        .map(|_| if rng.next_u32() & 1 == 1 { 1.0 } else { -1.0 })
        .collect();
    CoefficientTensor {
        dims: vec![n; m],
        entries,
        seed: Some(seed),
    }
}

/// The exponent of `n` in the KSZ operator-norm bound:
/// `1/2 + sum (1/2 - 1/p_k)`, exact. The constant factor is existential
/// and not computed.
pub fn ksz_bound(p: &[ExtScalar]) -> Result<Rat, ExponentError> {
    let mut expo = Rat::new(1, 2);
    for (i, pk) in p.iter().enumerate() {
        if *pk < ExtScalar::two() {
            return Err(ExponentError::Domain(format!(
                "p_{} = {pk} < 2; the bound needs p in [2, inf]",
                i + 1
            )));
        }
        expo += Rat::new(1, 2) - pk.recip_rat()?;
    }
    Ok(expo)
}

/// Lifts an order-(m-k) tensor to order m by prepending `k` axes of size `n`.
/// The result agrees with the input on the slice where every leading index
/// is 0 and vanishes elsewhere, so trailing mixed norms are preserved.
pub fn lift_form(
    t: &CoefficientTensor,
    k: usize,
    n: usize,
) -> Result<CoefficientTensor, TensorError> {
    if k < 1 || n < 1 {
        return Err(TensorError::Invalid(format!("need k >= 1, n >= 1, got k = {k}, n = {n}")));
    }
    let mut dims = vec![n; k];
    dims.extend_from_slice(&t.dims);
    let mut out = CoefficientTensor::zeros(dims)?;
    out.entries[..t.entries.len()].copy_from_slice(&t.entries);
    Ok(out)
}
