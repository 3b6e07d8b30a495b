use num_complex::Complex64;

use super::{unit_roots, Permutation};
use crate::dist::Distribution;
use crate::error::{check_dim, Error, Result};

/// Characteristic function values `f(t)`, `t = 0..N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    f: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(f: Vec<Complex64>) -> Result<Self> {
        if f.is_empty() {
            return Err(Error::Validity("spectrum must be nonempty".into()));
        }
        if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validity("spectrum values must be finite".into()));
        }
        Ok(Self { f })
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.f
    }

    pub fn at(&self, t: usize) -> Complex64 {
        self.f[t]
    }
}

/// `f(t) = Σ_k p_k exp(i 2π s(k) t / N)`.
pub fn spectrum(p: &Distribution, s: &Permutation) -> Result<Spectrum> {
    let n = p.n();
    check_dim(n, s.n())?;
    let w = unit_roots(n);
    let f = (0..n)
        .map(|t| {
            p.probs()
                .iter()
                .enumerate()
                .filter(|(_, &pk)| pk != 0.0)
                .map(|(k, &pk)| w[(s.forward(k) * t) % n] * pk)
                .sum()
        })
        .collect();
    Ok(Spectrum { f })
}

/// Inverse transform. Fails when the result is not a probability vector
/// within `tol` (imaginary residue or negative mass); tiny negatives are
/// clamped and the result renormalized.
pub fn from_spectrum(spec: &Spectrum, s: &Permutation, tol: f64) -> Result<Distribution> {
    let n = spec.n();
    check_dim(n, s.n())?;
    let w = unit_roots(n);
    let mut p = Vec::with_capacity(n);
    for k in 0..n {
        let y = s.forward(k);
        let z: Complex64 = (0..n).map(|t| spec.f[t] * w[(y * t) % n].conj()).sum();
        let z = z / n as f64;
        if z.im.abs() > tol {
            return Err(Error::Validity(format!(
                "inverse transform has imaginary part {:e} at index {k}",
                z.im
            )));
        }
        if z.re < -tol {
            return Err(Error::Validity(format!(
                "inverse transform has negative mass {:e} at index {k}",
                z.re
            )));
        }
        p.push(z.re.max(0.0));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol.max(f64::EPSILON * n as f64) {
        return Err(Error::Validity(format!(
            "inverse transform has total mass {total}, not 1"
        )));
    }
    p.iter_mut().for_each(|v| *v /= total);
    Ok(Distribution::from_raw(p))
}

/// Pointwise product: the spectrum of `X ⊕ Y` for independent `X`, `Y`.
pub fn multiply_spectra(a: &Spectrum, b: &Spectrum) -> Result<Spectrum> {
    check_dim(a.n(), b.n())?;
    Ok(Spectrum {
        f: a.f.iter().zip(&b.f).map(|(x, y)| x * y).collect(),
    })
}
