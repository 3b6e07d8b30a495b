//! Seeded samplers and naive reference implementations shared by the
//! integration tests. Nothing here calls into the algorithms under test
//! except constructors.
#![allow(dead_code)]

use num_complex::Complex64;
use pseudosum::cyclic::{divisors, Permutation};
use pseudosum::{Distribution, IdDecomposition, LutTable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut s: Vec<usize> = (0..n).collect();
    s.shuffle(rng);
    Permutation::new(s).unwrap()
}

/// Weights bounded away from zero so no atom sits near the tolerances.
fn weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(1e-3..1.0)).collect()
}

pub fn normalize(mut w: Vec<f64>) -> Distribution {
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    Distribution::new(w).unwrap()
}

pub fn dense(rng: &mut impl Rng, n: usize) -> Distribution {
    normalize(weights(rng, n))
}

/// Random weights on a random nonempty subset.
pub fn sparse(rng: &mut impl Rng, n: usize) -> Distribution {
    let k = rng.random_range(1..=n);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut w = vec![0.0; n];
    for &i in &idx[..k] {
        w[i] = rng.random_range(1e-3..1.0);
    }
    normalize(w)
}

/// Random law on a coset `a + M·Z_N` of the relabeled group, mapped back
/// through `s`.
pub fn coset(rng: &mut impl Rng, s: &Permutation) -> Distribution {
    let n = s.n();
    let ms = divisors(n);
    let m = ms[rng.random_range(0..ms.len())];
    let a = rng.random_range(0..m);
    let mut w = vec![0.0; n];
    for j in 0..n / m {
        if rng.random_bool(0.7) {
            w[s.inverse(a + j * m)] = rng.random_range(1e-3..1.0);
        }
    }
    if w.iter().all(|&v| v == 0.0) {
        w[s.inverse(a)] = 1.0;
    }
    normalize(w)
}

/// Mixture of dense, sparse, coset-supported and point-mass laws.
pub fn mixed(rng: &mut impl Rng, s: &Permutation) -> Distribution {
    let n = s.n();
    match rng.random_range(0..4) {
        0 => dense(rng, n),
        1 => sparse(rng, n),
        2 => coset(rng, s),
        _ => Distribution::point(n, rng.random_range(0..n)).unwrap(),
    }
}

pub fn random_table(rng: &mut impl Rng, n: usize) -> LutTable {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(0..n)).collect())
        .collect();
    LutTable::new(pseudosum::Alphabet::canonical(n).unwrap(), rows).unwrap()
}

pub fn modn(n: usize) -> LutTable {
    LutTable::from_fn(n, |i, j| (i + j) % n).unwrap()
}

pub fn maxn(n: usize) -> LutTable {
    LutTable::from_fn(n, usize::max).unwrap()
}

/// Double loop over all pairs.
pub fn naive_convolve(t: &LutTable, p: &[f64], q: &[f64]) -> Vec<f64> {
    let n = t.n();
    let mut r = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            r[t.apply(i, j).unwrap()] += p[i] * q[j];
        }
    }
    r
}

pub fn naive_first_counterexample(rows: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = rows.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if rows[i][rows[j][k]] != rows[rows[i][j]][k] {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `Σ_k p_k exp(i 2π s(k) t / N)` with angles from `sin`/`cos` directly.
pub fn naive_spectrum(p: &[f64], s: &Permutation) -> Vec<Complex64> {
    let n = p.len();
    (0..n)
        .map(|t| {
            p.iter()
                .enumerate()
                .map(|(k, &v)| {
                    let ang = std::f64::consts::TAU * (s.forward(k) * t) as f64 / n as f64;
                    Complex64::new(ang.cos(), ang.sin()) * v
                })
                .sum()
        })
        .collect()
}

pub fn random_id(rng: &mut impl Rng, n: usize, m: usize, a: usize, s: &Permutation) -> IdDecomposition {
    let lambda = rng.random_range(0.0..3.0);
    let mut w: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.75) { rng.random_range(1e-3..1.0) } else { 0.0 }).collect();
    let e = s.inverse(0);
    w[e] = 0.0;
    let jump = if w.iter().all(|&v| v == 0.0) {
        Distribution::point(n, e).unwrap()
    } else {
        normalize(w)
    };
    IdDecomposition::new(a, m, lambda, jump).unwrap()
}

/// The canonical decomposition of `p` by exhaustive search in a fixed
/// branch box: smallest relabeled shift `a ∈ [0:M)`, then the branch vector
/// with least `Σ|n(u)|`, ties broken lexicographically. Returns
/// `(a_relabeled, M, intensities c_k on Z_M)`.
pub fn canonical_id_oracle(p: &[f64], s: &Permutation, box_bound: i64) -> Option<(usize, usize, Vec<f64>)> {
    let n = p.len();
    let f = naive_spectrum(p, s);
    let nz: Vec<bool> = f.iter().map(|z| z.norm() > 1e-9).collect();
    let r = (1..=n).find(|&t| t == n || nz[t])?;
    if !n.is_multiple_of(r) || (0..n).any(|t| nz[t] != (t % r == 0)) {
        return None;
    }
    let m = n / r;
    let g: Vec<Complex64> = (0..m).map(|u| f[r * u]).collect();
    if m == 1 {
        return Some((0, 1, vec![0.0]));
    }
    let half: Vec<usize> = (1..m).filter(|&u| 2 * u < m).collect();
    let tau = std::f64::consts::TAU;
    for a in 0..m {
        let h: Vec<Complex64> = (0..m)
            .map(|u| {
                let ang = -tau * (a * u) as f64 / m as f64;
                g[u] * Complex64::new(ang.cos(), ang.sin())
            })
            .collect();
        if m.is_multiple_of(2) && h[m / 2].re <= 0.0 {
            continue;
        }
        let mut best: Option<((i64, Vec<i64>), Vec<f64>)> = None;
        let mut branch = vec![-box_bound; half.len()];
        loop {
            let mut full = vec![0i64; m];
            for (b, &u) in branch.iter().zip(&half) {
                full[u] = *b;
                full[m - u] = -*b;
            }
            let logs: Vec<Complex64> = (0..m)
                .map(|u| Complex64::new(h[u].norm().ln(), h[u].arg() + tau * full[u] as f64))
                .collect();
            let c: Vec<f64> = (0..m)
                .map(|k| {
                    let v: Complex64 = (0..m)
                        .map(|u| {
                            let ang = -tau * (k * u) as f64 / m as f64;
                            logs[u] * Complex64::new(ang.cos(), ang.sin())
                        })
                        .sum();
                    v.re / m as f64
                })
                .collect();
            if c[1..].iter().all(|&v| v >= -1e-9) {
                let key = (branch.iter().map(|b| b.abs()).sum::<i64>(), branch.clone());
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    let mut c = c;
                    c[0] = 0.0;
                    c.iter_mut().for_each(|v| *v = v.max(0.0));
                    best = Some((key, c));
                }
            }
            if !odometer(&mut branch, box_bound) {
                break;
            }
        }
        if let Some((_, c)) = best {
            return Some((a, m, c));
        }
    }
    None
}

fn odometer(v: &mut [i64], bound: i64) -> bool {
    for x in v.iter_mut().rev() {
        if *x < bound {
            *x += 1;
            return true;
        }
        *x = -bound;
    }
    false
}
