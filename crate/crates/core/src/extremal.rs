//! The maximum as pseudo-sum: `x ⊕ y = max{x, y}` in alphabet order.
//!
//! CDFs multiply under this operation, which makes every law infinitely
//! divisible (take `F^{1/n}`) and leaves the point masses as the only stable
//! laws.

use crate::dist::Distribution;
use crate::error::{check_dim, Error, Result};
use crate::lut::{Alphabet, LutTable};

const ABOVE_TOL: f64 = 1e-12;

/// `F_k = Pr(X <= x_k)`, indices in alphabet order.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf {
    f: Vec<f64>,
}

impl Cdf {
    pub fn of(p: &Distribution) -> Self {
        let mut acc = 0.0;
        let mut f: Vec<f64> = p
            .probs()
            .iter()
            .map(|v| {
                acc += v;
                acc.min(1.0)
            })
            .collect();
        *f.last_mut().expect("distributions are nonempty") = 1.0;
        Self { f }
    }

    pub fn new(f: Vec<f64>) -> Result<Self> {
        if f.is_empty() {
            return Err(Error::Validity("CDF must be nonempty".into()));
        }
        if f.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Validity("CDF values must lie in [0, 1]".into()));
        }
        if f.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Validity("CDF must be non-decreasing".into()));
        }
        if *f.last().unwrap() != 1.0 {
            return Err(Error::Validity("CDF must end at 1".into()));
        }
        Ok(Self { f })
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn to_distribution(&self) -> Distribution {
        let mut prev = 0.0;
        let p = self
            .f
            .iter()
            .map(|&v| {
                let mass = (v - prev).max(0.0);
                prev = v;
                mass
            })
            .collect();
        Distribution::from_raw(p)
    }
}

/// `A(x, y) = max{x, y}` on `[0:n)`.
pub fn make_max_lut(n: usize) -> Result<LutTable> {
    if n == 0 {
        return Err(Error::Input("alphabet size must be at least 1".into()));
    }
    LutTable::from_fn(n, usize::max)
}

/// The max table over a user alphabet, which must be sorted ascending so that
/// index order is value order.
pub fn make_max_lut_on(alphabet: Alphabet) -> Result<LutTable> {
    if !alphabet.is_sorted_ascending() {
        return Err(Error::Input("max table needs an alphabet sorted ascending".into()));
    }
    let n = alphabet.len();
    LutTable::new(alphabet, (0..n).map(|i| (0..n).map(|j| i.max(j)).collect()).collect())
}

/// Law of `max{X, Y}` via the product of CDFs.
pub fn max_convolve(p: &Distribution, q: &Distribution) -> Result<Distribution> {
    check_dim(p.n(), q.n())?;
    let (fp, fq) = (Cdf::of(p), Cdf::of(q));
    let f = fp.f.iter().zip(&fq.f).map(|(a, b)| a * b).collect();
    Ok(Cdf { f }.to_distribution())
}

/// All max-stable laws: the point masses.
pub fn max_stable_set(n: usize) -> Result<Vec<Distribution>> {
    (0..n).map(|x| Distribution::point(n, x)).collect()
}

/// `p` is attracted to `δ_x` iff `Pr(X > x) = 0` and `Pr(X = x) > 0`.
pub fn max_doa(p: &Distribution, x: usize) -> Result<bool> {
    if x >= p.n() {
        return Err(Error::Input(format!("point {x} out of range for size {}", p.n())));
    }
    let above: f64 = p.probs()[x + 1..].iter().sum();
    Ok(above <= ABOVE_TOL && p.prob(x) > 0.0)
}

/// The law with CDF `F^{1/n}`, whose `n`-fold maximum has law `p`.
pub fn max_nth_root(p: &Distribution, n: usize) -> Result<Distribution> {
    if n == 0 {
        return Err(Error::Input("root order must be at least 1".into()));
    }
    let exp = 1.0 / n as f64;
    let mut f: Vec<f64> = Cdf::of(p).f.iter().map(|v| v.powf(exp)).collect();
    *f.last_mut().unwrap() = 1.0;
    Ok(Cdf { f }.to_distribution())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{convolve, is_stable, tv_distance, DEFAULT_STABLE_TOL};

    fn d(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn table() {
        assert_eq!(make_max_lut(2).unwrap().rows(), vec![vec![0, 1], vec![1, 1]]);
        let t = make_max_lut(3).unwrap();
        assert_eq!(t.apply(1, 2).unwrap(), 2);
        assert_eq!(t.find_idempotents(), vec![0, 1, 2]);
        assert_eq!(t.find_identity(), Some(0));
        assert!(t.is_associative());
        assert!(make_max_lut(0).is_err());
    }

    #[test]
    fn table_on_alphabet() {
        let sorted = Alphabet::new(vec![-2.0, 0.5, 3.0]).unwrap();
        assert_eq!(make_max_lut_on(sorted).unwrap().rows(), make_max_lut(3).unwrap().rows());
        let unsorted = Alphabet::new(vec![1.0, 0.0]).unwrap();
        assert!(make_max_lut_on(unsorted).is_err());
    }

    #[test]
    fn convolve_examples() {
        let h = d(&[0.5, 0.5]);
        let r = max_convolve(&h, &h).unwrap();
        assert_eq!(r.probs(), &[0.25, 0.75]);
        let r = max_convolve(&Distribution::point(4, 1).unwrap(), &Distribution::point(4, 3).unwrap()).unwrap();
        assert_eq!(r, Distribution::point(4, 3).unwrap());
        let p = d(&[0.1, 0.2, 0.7]);
        assert_eq!(max_convolve(&p, &Distribution::point(3, 2).unwrap()).unwrap(), Distribution::point(3, 2).unwrap());
        let generic = convolve(&make_max_lut(3).unwrap(), &p, &h_3()).unwrap();
        assert!(tv_distance(&generic, &max_convolve(&p, &h_3()).unwrap()).unwrap() < 1e-15);
    }

    fn h_3() -> Distribution {
        d(&[0.3, 0.3, 0.4])
    }

    #[test]
    fn stable_set() {
        let t = make_max_lut(3).unwrap();
        let laws = max_stable_set(3).unwrap();
        assert_eq!(laws.len(), 3);
        for p in &laws {
            assert!(is_stable(&t, p, DEFAULT_STABLE_TOL).unwrap());
        }
        let u = Distribution::uniform(2).unwrap();
        assert!(!is_stable(&make_max_lut(2).unwrap(), &u, DEFAULT_STABLE_TOL).unwrap());
    }

    #[test]
    fn doa_examples() {
        assert!(max_doa(&d(&[0.5, 0.5]), 1).unwrap());
        assert!(!max_doa(&d(&[1.0, 0.0]), 1).unwrap());
        assert!(!max_doa(&d(&[0.5, 0.5]), 0).unwrap());
        assert!(max_doa(&d(&[1.0, 0.0]), 0).unwrap());
        assert!(max_doa(&d(&[0.5, 0.5]), 2).is_err());
    }

    #[test]
    fn roots() {
        let r = max_nth_root(&d(&[0.25, 0.75]), 2).unwrap();
        assert!(tv_distance(&r, &d(&[0.5, 0.5])).unwrap() < 1e-15);
        for n in 1..6 {
            assert_eq!(max_nth_root(&Distribution::point(3, 1).unwrap(), n).unwrap(), Distribution::point(3, 1).unwrap());
        }
        assert!(max_nth_root(&d(&[1.0]), 0).is_err());
    }

    #[test]
    fn cdf_validation() {
        assert!(Cdf::new(vec![0.2, 0.1, 1.0]).is_err());
        assert!(Cdf::new(vec![0.2, 0.9]).is_err());
        assert!(Cdf::new(vec![-0.1, 1.0]).is_err());
        let c = Cdf::new(vec![0.25, 1.0]).unwrap();
        assert_eq!(c.to_distribution().probs(), &[0.25, 0.75]);
        assert_eq!(Cdf::of(&c.to_distribution()), c);
    }
}
