//! Addition modulo `N` seen through a relabeling permutation `s`:
//! `x ⊕ y = s⁻¹((s(x) + s(y)) % N)`.
//!
//! `(χ, ⊕)` is a cyclic group, so a law is determined by its characteristic
//! function `f(t) = Σ p_k exp(i 2π s(k) t / N)` and pseudo-convolution becomes
//! a pointwise product. Everything here is computed on the relabeled law
//! `q_{s(k)} = p_k`, which reduces `s` to the identity, and mapped back.

mod id;
mod spectrum;
mod stable;

use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{check_dim, Error, Result};
use crate::lut::LutTable;

pub use id::{
    construct_id, decompose_id, is_infinitely_divisible, nth_root_oracle, IdDecomposition,
    NthRoot, ORACLE_MAX_N, ORACLE_MAX_ROOT,
};
pub use spectrum::{from_spectrum, multiply_spectra, spectrum, Spectrum};
pub use stable::{
    classify_stable, divisors, doa_attractor, enumerate_stable, in_doa, in_doa_spectral,
    StableLaw,
};

/// Spectrum values at or below this modulus are treated as zero.
pub const EPS_ZERO: f64 = 1e-9;

/// A bijection `s` of `[0:N)` together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    s: Vec<usize>,
    s_inv: Vec<usize>,
}

impl Permutation {
    pub fn new(s: Vec<usize>) -> Result<Self> {
        let n = s.len();
        if n == 0 {
            return Err(Error::Validity("permutation must be nonempty".into()));
        }
        let mut s_inv = vec![usize::MAX; n];
        for (k, &v) in s.iter().enumerate() {
            if v >= n {
                return Err(Error::Validity(format!(
                    "permutation value s[{k}] = {v} out of range for size {n}"
                )));
            }
            if s_inv[v] != usize::MAX {
                return Err(Error::Validity(format!(
                    "permutation is not a bijection: {v} appears twice"
                )));
            }
            s_inv[v] = k;
        }
        Ok(Self { s, s_inv })
    }

    pub fn identity(n: usize) -> Self {
        let s: Vec<usize> = (0..n).collect();
        Self { s_inv: s.clone(), s }
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `s(k)`.
    pub fn forward(&self, k: usize) -> usize {
        self.s[k]
    }

    /// `s⁻¹(y)`.
    pub fn inverse(&self, y: usize) -> usize {
        self.s_inv[y]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.s
    }

    /// Probability vector of `Y = s(X)`: `q[s(k)] = p[k]`.
    pub fn relabel(&self, p: &Distribution) -> Result<Vec<f64>> {
        check_dim(self.n(), p.n())?;
        let mut q = vec![0.0; self.n()];
        for (k, &v) in p.probs().iter().enumerate() {
            q[self.s[k]] = v;
        }
        Ok(q)
    }

    /// Inverse of [`relabel`](Self::relabel): `p[k] = q[s(k)]`.
    pub fn unrelabel(&self, q: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|k| q[self.s[k]]).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PermFile = serde_json::from_str(text)?;
        if raw.n != raw.s.len() {
            return Err(Error::Validity(format!(
                "\"n\" is {} but \"s\" has {} entries",
                raw.n,
                raw.s.len()
            )));
        }
        Self::new(raw.s)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PermFile {
            n: self.n(),
            s: self.s.clone(),
        })
        .expect("permutation serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct PermFile {
    n: usize,
    s: Vec<usize>,
}

/// The table `A(x, y) = s⁻¹((s(x) + s(y)) % N)` on the alphabet `[0:N)`.
pub fn make_cyclic_lut(n: usize, s: &Permutation) -> Result<LutTable> {
    check_dim(n, s.n())?;
    LutTable::from_fn(n, |x, y| s.inverse((s.forward(x) + s.forward(y)) % n))
}

/// `exp(i 2π r / n)` for `r` in `[0:n)`; indices are reduced exactly before lookup.
pub(crate) fn unit_roots(n: usize) -> Vec<num_complex::Complex64> {
    (0..n)
        .map(|r| {
            let theta = std::f64::consts::TAU * r as f64 / n as f64;
            num_complex::Complex64::new(theta.cos(), theta.sin())
        })
        .collect()
}
