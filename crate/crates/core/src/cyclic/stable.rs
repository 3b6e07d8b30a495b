use num_complex::Complex64;
use serde::Serialize;

use super::{spectrum, Permutation};
use crate::dist::{tv_distance, Distribution};
use crate::error::{check_dim, Error, Result};

// Mass at or below this is treated as absent in the support tests.
const SUPPORT_TOL: f64 = 1e-12;
// |f(t)| within this of 1 counts as modulus one.
const UNIT_MODULUS_TOL: f64 = 1e-11;

/// The law of `M·U` with `U` uniform on `[0:R)`, `R = N / M`.
///
/// `M = N` is the point mass at the identity; `M = 1` is the uniform law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StableLaw {
    n: usize,
    m: usize,
}

impl StableLaw {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 || !n.is_multiple_of(m) {
            return Err(Error::Input(format!("{m} is not a divisor of {n}")));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.n / self.m
    }

    /// The law in the original labels: mass `1/R` at each `s⁻¹(j·M)`.
    pub fn distribution(&self, s: &Permutation) -> Result<Distribution> {
        check_dim(self.n, s.n())?;
        let support: Vec<usize> = (0..self.r()).map(|j| s.inverse(j * self.m)).collect();
        Distribution::uniform_on(self.n, &support)
    }
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Every stable law for the cyclic table, one per divisor `M` of `N`,
/// ordered by decreasing `M` (point mass first, uniform last).
pub fn enumerate_stable(n: usize, s: &Permutation) -> Result<Vec<(StableLaw, Distribution)>> {
    check_dim(n, s.n())?;
    divisors(n)
        .into_iter()
        .rev()
        .map(|m| {
            let law = StableLaw::new(n, m)?;
            Ok((law, law.distribution(s)?))
        })
        .collect()
}

/// The stable law within `tol` (total variation) of `p`, if any.
pub fn classify_stable(p: &Distribution, s: &Permutation, tol: f64) -> Result<Option<StableLaw>> {
    for (law, q) in enumerate_stable(p.n(), s)? {
        if tv_distance(p, &q)? <= tol {
            return Ok(Some(law));
        }
    }
    Ok(None)
}

/// Domain-of-attraction test for `M·U`.
///
/// With `q` the relabeled law, `p` is attracted to `M·U` iff `q` lives on the
/// multiples of `M`, `q = law(M·Y)`, and for every `a ∈ [0:R)` and
/// `t ∈ [1:R)` we have `Pr((Y - a)·t % R = 0) < 1`.
pub fn in_doa(p: &Distribution, target: &StableLaw, s: &Permutation) -> Result<bool> {
    let n = p.n();
    check_dim(n, s.n())?;
    check_dim(n, target.n())?;
    let q = s.relabel(p)?;
    let (m, r) = (target.m(), target.r());

    let off_lattice: f64 = (0..n).filter(|k| k % m != 0).map(|k| q[k]).sum();
    if off_lattice > SUPPORT_TOL {
        return Ok(false);
    }
    let y: Vec<f64> = (0..r).map(|j| q[j * m]).collect();
    for a in 0..r {
        for t in 1..r {
            let trapped: f64 = (0..r)
                .filter(|&j| ((j + r - a) * t) % r == 0)
                .map(|j| y[j])
                .sum();
            if trapped >= 1.0 - SUPPORT_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Spectral form of [`in_doa`]: `f(t) = 1` when `t % R = 0` and `|f(t)| < 1`
/// otherwise, so that `f(t)^m` tends to the spectrum of `M·U`.
pub fn in_doa_spectral(p: &Distribution, target: &StableLaw, s: &Permutation) -> Result<bool> {
    check_dim(p.n(), target.n())?;
    let f = spectrum(p, s)?;
    let r = target.r();
    let one = Complex64::new(1.0, 0.0);
    Ok(f.values().iter().enumerate().all(|(t, &z)| {
        if t % r == 0 {
            (z - one).norm() <= UNIT_MODULUS_TOL
        } else {
            z.norm() < 1.0 - UNIT_MODULUS_TOL
        }
    }))
}

/// The stable law attracting `p`, scanning targets from the largest `R`
/// down. `None` when the pseudo-sums of `p` do not converge.
pub fn doa_attractor(p: &Distribution, s: &Permutation) -> Result<Option<StableLaw>> {
    let n = p.n();
    for m in divisors(n) {
        let law = StableLaw::new(n, m)?;
        if in_doa(p, &law, s)? {
            return Ok(Some(law));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::make_cyclic_lut;
    use crate::dist::{is_stable, DEFAULT_STABLE_TOL};

    fn d(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn enumerate_six() {
        let id = Permutation::identity(6);
        let laws = enumerate_stable(6, &id).unwrap();
        let ms: Vec<usize> = laws.iter().map(|(l, _)| l.m()).collect();
        assert_eq!(ms, vec![6, 3, 2, 1]);
        let supports: Vec<Vec<usize>> = laws.iter().map(|(_, p)| p.support()).collect();
        assert_eq!(
            supports,
            vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]
        );
        let t = make_cyclic_lut(6, &id).unwrap();
        for (_, p) in &laws {
            assert!(is_stable(&t, p, DEFAULT_STABLE_TOL).unwrap());
        }
    }

    #[test]
    fn enumerate_prime_and_trivial() {
        let laws = enumerate_stable(5, &Permutation::identity(5)).unwrap();
        assert_eq!(laws.len(), 2);
        assert_eq!(laws[0].1, Distribution::point(5, 0).unwrap());
        assert_eq!(laws[1].1, Distribution::uniform(5).unwrap());
        let laws = enumerate_stable(1, &Permutation::identity(1)).unwrap();
        assert_eq!(laws.len(), 1);
        assert_eq!(laws[0].1, Distribution::point(1, 0).unwrap());
    }

    #[test]
    fn enumerate_under_permutation() {
        let s = Permutation::new(vec![2, 3, 0, 1]).unwrap();
        let laws = enumerate_stable(4, &s).unwrap();
        assert_eq!(laws[0].1, Distribution::point(4, s.inverse(0)).unwrap());
        // M = 2: relabeled support {0, 2} maps back to {s⁻¹(0), s⁻¹(2)} = {2, 0}.
        assert_eq!(laws[1].1.support(), vec![0, 2]);
    }

    #[test]
    fn classify_examples() {
        let s = Permutation::new(vec![1, 0, 2]).unwrap();
        let u = Distribution::uniform(3).unwrap();
        assert_eq!(classify_stable(&u, &s, 1e-12).unwrap().unwrap().m(), 1);
        let z = Distribution::point(3, s.inverse(0)).unwrap();
        assert_eq!(classify_stable(&z, &s, 1e-12).unwrap().unwrap().m(), 3);
        let p = d(&[0.75, 0.25]);
        assert_eq!(classify_stable(&p, &Permutation::identity(2), 1e-12).unwrap(), None);
    }

    #[test]
    fn doa_examples() {
        let id4 = Permutation::identity(4);
        let p = d(&[0.5, 0.5, 0.0, 0.0]);
        let uni = StableLaw::new(4, 1).unwrap();
        assert!(in_doa(&p, &uni, &id4).unwrap());
        assert!(in_doa_spectral(&p, &uni, &id4).unwrap());

        let one = Distribution::point(2, 1).unwrap();
        let uni2 = StableLaw::new(2, 1).unwrap();
        assert!(!in_doa(&one, &uni2, &Permutation::identity(2)).unwrap());
        assert!(!in_doa_spectral(&one, &uni2, &Permutation::identity(2)).unwrap());

        let p = d(&[0.5, 0.0, 0.5, 0.0]);
        let two = StableLaw::new(4, 2).unwrap();
        assert!(in_doa(&p, &two, &id4).unwrap());
        assert!(!in_doa(&p, &uni, &id4).unwrap());
        assert!(in_doa_spectral(&p, &two, &id4).unwrap());
    }

    #[test]
    fn attractor_examples() {
        let s = Permutation::new(vec![2, 0, 1]).unwrap();
        let z = Distribution::point(3, s.inverse(0)).unwrap();
        assert_eq!(doa_attractor(&z, &s).unwrap().unwrap().m(), 3);
        let id2 = Permutation::identity(2);
        assert_eq!(doa_attractor(&d(&[0.75, 0.25]), &id2).unwrap().unwrap().m(), 1);
        assert_eq!(doa_attractor(&Distribution::point(2, 1).unwrap(), &id2).unwrap(), None);
    }

    #[test]
    fn bad_divisor() {
        assert!(StableLaw::new(6, 4).is_err());
        assert!(StableLaw::new(6, 0).is_err());
    }
}
