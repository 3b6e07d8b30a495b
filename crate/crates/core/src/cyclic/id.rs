//! Infinitely divisible laws for the cyclic table.
//!
//! Every infinitely divisible law is `a ⊕ M·U ⊕ (X_1 ⊕ ... ⊕ X_𝒩)` with a
//! shift `a`, a uniform component `M·U` on a subgroup, and a compound
//! Poisson part: `𝒩 ~ Poisson(λ)` jumps drawn from a jump law. In spectral
//! terms
//!
//! ```text
//! f(t) = exp(i 2π a t / N) · 1[t % R = 0] · exp(λ (f_jump(t) - 1)),   R = N / M.
//! ```
//!
//! The representation is not unique: jumps and shifts only matter modulo
//! `M`, jump mass at `0` is invisible, and on small groups different log
//! branches can describe the same law. [`IdDecomposition::canonical`] removes
//! the first two ambiguities; [`decompose_id`] resolves the last one by a
//! fixed preference order (smallest shift, then the branch vector closest to
//! the principal logarithm).

use num_complex::Complex64;
use serde::Serialize;

use super::{from_spectrum, make_cyclic_lut, spectrum, unit_roots, Permutation, Spectrum, EPS_ZERO};
use crate::dist::{convolve, power, tv_distance, Distribution};
use crate::error::{check_dim, Error, Result};

/// Largest alphabet accepted by [`nth_root_oracle`].
pub const ORACLE_MAX_N: usize = 8;
/// Largest root order accepted by [`nth_root_oracle`].
pub const ORACLE_MAX_ROOT: usize = 4;

// Candidate branch vectors per shift above which decompose_id stops
// enumerating and only tries the principal and phase-unwrapped branches.
const EXHAUSTIVE_LIMIT: usize = 1 << 16;
// Reconstruction check applied to every decomposition before it is returned.
const RECONSTRUCTION_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-8;

/// Parameters `(a, M, λ, jump)` of an infinitely divisible law, with `a` and
/// `jump` expressed in the original labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdDecomposition {
    pub a: usize,
    pub m: usize,
    pub lambda: f64,
    #[serde(serialize_with = "serialize_jump")]
    pub jump: Distribution,
}

fn serialize_jump<S: serde::Serializer>(d: &Distribution, ser: S) -> std::result::Result<S::Ok, S::Error> {
    d.probs().serialize(ser)
}

impl IdDecomposition {
    pub fn new(a: usize, m: usize, lambda: f64, jump: Distribution) -> Result<Self> {
        let n = jump.n();
        if a >= n {
            return Err(Error::Input(format!("shift {a} out of range for size {n}")));
        }
        if m == 0 || !n.is_multiple_of(m) {
            return Err(Error::Input(format!("{m} is not a divisor of {n}")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Input(format!("intensity must be finite and >= 0, got {lambda}")));
        }
        Ok(Self { a, m, lambda, jump })
    }

    pub fn n(&self) -> usize {
        self.jump.n()
    }

    /// Removes the representation freedom that never changes the law: the
    /// relabeled shift is reduced mod `M`, jumps are folded mod `M`, jump mass
    /// on multiples of `M` is dropped from `λ`, and `λ = 0` uses the identity
    /// as jump law. Branch ambiguity is not touched.
    pub fn canonical(&self, s: &Permutation) -> Result<Self> {
        let n = self.n();
        check_dim(n, s.n())?;
        let m = self.m;
        let shift = s.forward(self.a) % m;
        let relabeled = s.relabel(&self.jump)?;
        let mut folded = vec![0.0; n];
        for (k, &v) in relabeled.iter().enumerate() {
            folded[k % m] += v;
        }
        let moving = 1.0 - folded[0];
        let lambda = if moving > 1e-12 { self.lambda * moving } else { 0.0 };
        let jump = if lambda > 0.0 {
            folded[0] = 0.0;
            folded.iter_mut().for_each(|v| *v /= moving);
            Distribution::from_raw(s.unrelabel(&folded))
        } else {
            Distribution::point(n, s.inverse(0))?
        };
        Ok(Self {
            a: s.inverse(shift),
            m,
            lambda,
            jump,
        })
    }
}

/// Exact law of `a ⊕ M·U ⊕ (X_1 ⊕ ... ⊕ X_𝒩)` computed through its spectrum.
pub fn construct_id(d: &IdDecomposition, s: &Permutation) -> Result<Distribution> {
    let n = d.n();
    check_dim(n, s.n())?;
    let r = n / d.m;
    let shift = s.forward(d.a);
    let w = unit_roots(n);
    let fj = spectrum(&d.jump, s)?;
    let one = Complex64::new(1.0, 0.0);
    let f = (0..n)
        .map(|t| {
            if t % r == 0 {
                w[(shift * t) % n] * ((fj.at(t) - one) * d.lambda).exp()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    from_spectrum(&Spectrum::new(f)?, s, 1e-9)
}

/// Canonical decomposition of an infinitely divisible law, or `None` when `p`
/// admits none (negative intensities beyond `tol` for every shift and branch,
/// or a spectral zero set that is not the complement of a subgroup).
pub fn decompose_id(p: &Distribution, s: &Permutation, tol: f64) -> Result<Option<IdDecomposition>> {
    let n = p.n();
    check_dim(n, s.n())?;
    let f = spectrum(p, s)?;

    // The non-vanishing set must be the subgroup of multiples of R.
    let nonzero: Vec<bool> = f.values().iter().map(|z| z.norm() > EPS_ZERO).collect();
    let r = (1..n).find(|&t| nonzero[t]).unwrap_or(n);
    if !n.is_multiple_of(r) || (0..n).any(|t| nonzero[t] != (t % r == 0)) {
        return Ok(None);
    }
    let m = n / r;
    // Spectrum of the law reduced mod M.
    let g: Vec<Complex64> = (0..m).map(|u| f.at(r * u)).collect();

    let Some(fit) = fit_compound_poisson(&g, tol) else {
        return Ok(None);
    };

    let mut jump = vec![0.0; n];
    let lambda: f64 = fit.intensities.iter().sum();
    let lambda = if lambda <= tol {
        jump[0] = 1.0;
        0.0
    } else {
        for (k, &c) in fit.intensities.iter().enumerate() {
            jump[k] = c / lambda;
        }
        lambda
    };
    let d = IdDecomposition {
        a: s.inverse(fit.shift),
        m,
        lambda,
        jump: Distribution::from_raw(s.unrelabel(&jump)),
    };
    let rebuilt = construct_id(&d, s)?;
    if tv_distance(&rebuilt, p)? > RECONSTRUCTION_TOL {
        return Ok(None);
    }
    Ok(Some(d))
}

pub fn is_infinitely_divisible(p: &Distribution, s: &Permutation, tol: f64) -> Result<bool> {
    Ok(decompose_id(p, s, tol)?.is_some())
}

struct CompoundPoissonFit {
    shift: usize,
    /// `c_k` for `k` in `[0:M)`, with `c_0 = 0`.
    intensities: Vec<f64>,
}

/// Finds a shift `a` and intensities `c_k >= 0` with
/// `g(u) = exp(i 2π a u / M) · exp(Σ_k c_k (e^{i 2π k u / M} - 1))`
/// on `Z_M`, where `g` has no zeros.
///
/// Writing `h = log g` with branch integers `n(u)` (odd in `u` so that `c`
/// is real), `c_k = ĥ_k` for `k != 0` and `λ = Σ c_k = -mean(log|g|)`. Since
/// `|Im h(u)| <= λ` for a valid fit, only finitely many branch vectors need
/// to be examined.
fn fit_compound_poisson(g: &[Complex64], tol: f64) -> Option<CompoundPoissonFit> {
    let m = g.len();
    if m == 1 {
        return Some(CompoundPoissonFit {
            shift: 0,
            intensities: vec![0.0],
        });
    }
    let log_mod: Vec<f64> = g.iter().map(|z| z.norm().ln()).collect();
    let lambda = -log_mod.iter().sum::<f64>() / m as f64;
    let w = unit_roots(m);
    // Free branch positions u in [1, M/2); their mirrors M-u are conjugate.
    let half: Vec<usize> = (1..m).filter(|&u| 2 * u < m).collect();
    let middle = m.is_multiple_of(2).then_some(m / 2);
    let slack = tol.max(1e-9);

    for shift in 0..m {
        let ga: Vec<Complex64> = (0..m).map(|u| g[u] * w[(shift * u) % m].conj()).collect();
        if let Some(mid) = middle {
            // h(M/2) must be real, so g_a(M/2) must be positive.
            if ga[mid].re <= 0.0 {
                continue;
            }
        }
        let theta: Vec<f64> = ga.iter().map(|z| z.arg()).collect();

        // Base intensities (all branch integers zero) and the per-branch
        // increments (4π/M) sin(2π k u / M).
        let base: Vec<f64> = (0..m)
            .map(|k| {
                let mut acc = 0.0;
                for &u in &half {
                    let wk = w[(k * u) % m];
                    acc += 2.0 * (log_mod[u] * wk.re + theta[u] * wk.im);
                }
                if let Some(mid) = middle {
                    acc += if k % 2 == 0 { log_mod[mid] } else { -log_mod[mid] };
                }
                acc / m as f64
            })
            .collect();
        let step: Vec<Vec<f64>> = half
            .iter()
            .map(|&u| {
                (0..m)
                    .map(|k| 2.0 * std::f64::consts::TAU * w[(k * u) % m].im / m as f64)
                    .collect()
            })
            .collect();

        let candidates: Vec<Vec<i64>> = half
            .iter()
            .map(|&u| branch_candidates(theta[u], lambda + slack))
            .collect();
        if candidates.iter().any(Vec::is_empty) {
            continue;
        }
        let total = candidates
            .iter()
            .try_fold(1usize, |acc, c| acc.checked_mul(c.len()));

        let evaluate = |branch: &[i64]| -> Option<Vec<f64>> {
            let mut c = base.clone();
            for (b, inc) in branch.iter().zip(&step) {
                if *b != 0 {
                    for k in 0..m {
                        c[k] += *b as f64 * inc[k];
                    }
                }
            }
            c[0] = 0.0;
            c[1..].iter().all(|&v| v >= -tol).then(|| {
                c.iter_mut().for_each(|v| *v = v.max(0.0));
                c
            })
        };

        let mut best: Option<(Vec<i64>, Vec<f64>)> = None;
        let mut consider = |branch: Vec<i64>| {
            if let Some(c) = evaluate(&branch) {
                let better = match &best {
                    None => true,
                    Some((b, _)) => branch_key(&branch) < branch_key(b),
                };
                if better {
                    best = Some((branch, c));
                }
            }
        };
        match total {
            Some(count) if count <= EXHAUSTIVE_LIMIT => {
                let mut idx = vec![0usize; half.len()];
                loop {
                    consider(idx.iter().zip(&candidates).map(|(&i, c)| c[i]).collect());
                    if !advance(&mut idx, &candidates) {
                        break;
                    }
                }
            }
            _ => {
                consider(vec![0; half.len()]);
                consider(unwrapped_branches(&theta, &half));
            }
        }
        if let Some((_, intensities)) = best {
            return Some(CompoundPoissonFit { shift, intensities });
        }
    }
    None
}

/// Integers `n` with `|theta + 2π n| <= bound`, ordered by `|n|` then sign.
fn branch_candidates(theta: f64, bound: f64) -> Vec<i64> {
    let tau = std::f64::consts::TAU;
    let lo = ((-bound - theta) / tau).ceil() as i64;
    let hi = ((bound - theta) / tau).floor() as i64;
    let mut out: Vec<i64> = (lo..=hi).collect();
    out.sort_by_key(|&b| (b.abs(), b < 0));
    out
}

fn branch_key(branch: &[i64]) -> (i64, Vec<i64>) {
    (branch.iter().map(|b| b.abs()).sum(), branch.to_vec())
}

fn advance(idx: &mut [usize], candidates: &[Vec<i64>]) -> bool {
    for pos in (0..idx.len()).rev() {
        idx[pos] += 1;
        if idx[pos] < candidates[pos].len() {
            return true;
        }
        idx[pos] = 0;
    }
    false
}

/// Branch integers that make `arg g_a(u)` continuous along `u = 0, 1, ...`.
fn unwrapped_branches(theta: &[f64], half: &[usize]) -> Vec<i64> {
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(half.len());
    let mut prev = 0.0;
    for u in 1..=half.last().copied().unwrap_or(0) {
        let k = ((prev - theta[u]) / tau).round();
        prev = theta[u] + k * tau;
        out.push(k as i64);
    }
    out
}

/// A witness `q` (with shift `a`) that `p = q ⊕ ... ⊕ q ⊕ δ_a` (`n` copies of `q`).
#[derive(Debug, Clone, PartialEq)]
pub struct NthRoot {
    pub root: Distribution,
    pub shift: usize,
}

/// Brute-force search for an `n`-th pseudo-root of `p` up to a shift.
///
/// Enumerates all shifts `a` and every assignment of `n`-th roots to the
/// (relabeled, un-shifted) spectrum values at `t = 1..N-1`, inverts each
/// candidate and keeps the first one that is a probability vector whose
/// `n`-fold pseudo-sum, shifted by `a`, reproduces `p` within `1e-8`.
/// Shifts are tried in increasing order and branch vectors
/// lexicographically, principal root first, so the witness is deterministic.
pub fn nth_root_oracle(p: &Distribution, n: usize, s: &Permutation) -> Result<Option<NthRoot>> {
    let size = p.n();
    check_dim(size, s.n())?;
    if size > ORACLE_MAX_N || n > ORACLE_MAX_ROOT || n == 0 {
        return Err(Error::Input(format!(
            "nth_root_oracle needs N <= {ORACLE_MAX_N} and 1 <= n <= {ORACLE_MAX_ROOT}, got N = {size}, n = {n}"
        )));
    }
    let table = make_cyclic_lut(size, s)?;
    let f = spectrum(p, s)?;
    let w = unit_roots(size);
    let rot = unit_roots(n);

    for a in 0..size {
        let roots: Vec<Vec<Complex64>> = (1..size)
            .map(|t| {
                let z = f.at(t) * w[(a * t) % size].conj();
                if z.norm() <= EPS_ZERO {
                    vec![Complex64::new(0.0, 0.0)]
                } else {
                    let principal = Complex64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64);
                    rot.iter().map(|&r| principal * r).collect()
                }
            })
            .collect();
        let shift = Distribution::point(size, s.inverse(a))?;
        let mut idx = vec![0usize; roots.len()];
        loop {
            let mut values = Vec::with_capacity(size);
            values.push(Complex64::new(1.0, 0.0));
            values.extend(idx.iter().zip(&roots).map(|(&i, r)| r[i]));
            if let Ok(q) = from_spectrum(&Spectrum::new(values)?, s, ORACLE_TOL) {
                let sum = convolve(&table, &power(&table, &q, n)?, &shift)?;
                if tv_distance(&sum, p)? <= ORACLE_TOL {
                    return Ok(Some(NthRoot {
                        root: q,
                        shift: s.inverse(a),
                    }));
                }
            }
            if !advance_complex(&mut idx, &roots) {
                break;
            }
        }
    }
    Ok(None)
}

fn advance_complex(idx: &mut [usize], roots: &[Vec<Complex64>]) -> bool {
    for pos in (0..idx.len()).rev() {
        idx[pos] += 1;
        if idx[pos] < roots[pos].len() {
            return true;
        }
        idx[pos] = 0;
    }
    false
}
