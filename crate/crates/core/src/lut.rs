//! Finite alphabets and look-up tables.
//!
//! A [`LutTable`] stores the operation as a matrix of alphabet *indices*;
//! the real values of the [`Alphabet`] are a relabeling layer carried along
//! for I/O and ordering only. Every algebraic check works on indices.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{check_dim, Error, Result};

/// Mass tolerance used when a theorem asks for "probability one".
pub(crate) const MASS_TOL: f64 = 1e-9;

/// An ordered list of pairwise distinct real labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    values: Vec<f64>,
}

impl Alphabet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validity("alphabet must have at least one value".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validity(format!("alphabet value {v} is not finite")));
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validity(format!(
                "alphabet values must be distinct, {} repeats",
                w[0]
            )));
        }
        Ok(Self { values })
    }

    /// The canonical alphabet `{0, 1, ..., n-1}`.
    pub fn canonical(n: usize) -> Result<Self> {
        Self::new((0..n).map(|k| k as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_sorted_ascending(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }
}

/// Result of the associativity scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Associativity {
    Pass,
    /// Lexicographically smallest `(i, j, k)` with `A(i, A(j,k)) != A(A(i,j), k)`.
    Counterexample(usize, usize, usize),
}

/// Result of the commutativity scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Commutativity {
    Pass,
    /// Lexicographically smallest `(i, j)`, `i < j`, with `A(i,j) != A(j,i)`.
    Counterexample(usize, usize),
}

/// An `N x N` operation table over an alphabet of size `N`.
#[derive(Debug, Clone)]
pub struct LutTable {
    alphabet: Alphabet,
    n: usize,
    table: Vec<usize>,
    symmetric: bool,
    assoc: OnceLock<Associativity>,
}

impl PartialEq for LutTable {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.table == other.table
    }
}

impl LutTable {
    pub fn new(alphabet: Alphabet, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = alphabet.len();
        if rows.len() != n {
            return Err(Error::Validity(format!(
                "table must have {n} rows to match the alphabet, found {}",
                rows.len()
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validity(format!(
                    "table is not square: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::Validity(format!(
                        "table entry ({i},{j}) = {v} is not an index into an alphabet of size {n}"
                    )));
                }
            }
            table.extend(row);
        }
        Ok(Self::from_parts(alphabet, table))
    }

    /// Builds a table on the canonical alphabet `[0:n)` from `f(i, j)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let alphabet = Alphabet::canonical(n)?;
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(alphabet, rows)
    }

    fn from_parts(alphabet: Alphabet, table: Vec<usize>) -> Self {
        let n = alphabet.len();
        let symmetric = (0..n).all(|i| (i + 1..n).all(|j| table[i * n + j] == table[j * n + i]));
        Self {
            alphabet,
            n,
            table,
            symmetric,
            assoc: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    /// `x_i ⊕ x_j` as an index.
    pub fn apply(&self, i: usize, j: usize) -> Result<usize> {
        if i >= self.n || j >= self.n {
            return Err(Error::Input(format!(
                "index pair ({i},{j}) out of range for a table of size {}",
                self.n
            )));
        }
        Ok(self.at(i, j))
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> usize {
        self.table[i * self.n + j]
    }

    pub(crate) fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Scans all `N^3` triples; the result is cached on the table.
    pub fn check_associative(&self) -> Associativity {
        *self.assoc.get_or_init(|| {
            let n = self.n;
            for i in 0..n {
                for j in 0..n {
                    let ij = self.at(i, j);
                    for k in 0..n {
                        if self.at(i, self.at(j, k)) != self.at(ij, k) {
                            return Associativity::Counterexample(i, j, k);
                        }
                    }
                }
            }
            Associativity::Pass
        })
    }

    pub fn is_associative(&self) -> bool {
        self.check_associative() == Associativity::Pass
    }

    pub(crate) fn require_associative(&self, what: &str) -> Result<()> {
        match self.check_associative() {
            Associativity::Pass => Ok(()),
            Associativity::Counterexample(i, j, k) => Err(Error::Input(format!(
                "{what} needs an associative table; ({i},{j},{k}) violates A(i,A(j,k)) = A(A(i,j),k)"
            ))),
        }
    }

    pub fn check_commutative(&self) -> Commutativity {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                if self.at(i, j) != self.at(j, i) {
                    return Commutativity::Counterexample(i, j);
                }
            }
        }
        Commutativity::Pass
    }

    /// The two-sided identity element, if any.
    pub fn find_identity(&self) -> Option<usize> {
        (0..self.n).find(|&e| (0..self.n).all(|y| self.at(e, y) == y && self.at(y, e) == y))
    }

    /// All `x` with `x ⊕ x = x`; exactly the points whose point mass is stable.
    pub fn find_idempotents(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.at(x, x) == x).collect()
    }

    /// True iff for all `a, b` in `subset` the equation `x ⊕ a = b` has exactly
    /// one solution `x` in `subset`.
    pub fn verify_left_subtraction(&self, subset: &[usize]) -> Result<bool> {
        if subset.is_empty() {
            return Err(Error::Input("subset must be nonempty".into()));
        }
        let mut member = vec![false; self.n];
        for &x in subset {
            if x >= self.n {
                return Err(Error::Input(format!(
                    "subset element {x} out of range for a table of size {}",
                    self.n
                )));
            }
            member[x] = true;
        }
        let elems: Vec<usize> = (0..self.n).filter(|&x| member[x]).collect();
        // x -> x ⊕ a must be a bijection of the subset onto itself for every a.
        let mut hit = vec![false; self.n];
        for &a in &elems {
            hit.iter_mut().for_each(|h| *h = false);
            for &x in &elems {
                let b = self.at(x, a);
                if !member[b] || hit[b] {
                    return Ok(false);
                }
                hit[b] = true;
            }
        }
        Ok(true)
    }

    /// Necessary condition for `p` to be attracted to the point mass at the
    /// idempotent `x`: `Pr(x ⊕ X = x) = 1`. `false` certifies that `p` is not
    /// in the domain of attraction of `δ_x`.
    pub fn degenerate_doa_necessary(&self, x: usize, p: &Distribution) -> Result<bool> {
        check_dim(self.n, p.n())?;
        if x >= self.n {
            return Err(Error::Input(format!("point {x} out of range")));
        }
        if self.at(x, x) != x {
            return Err(Error::Input(format!("point {x} is not idempotent: x ⊕ x != x")));
        }
        let mass: f64 = (0..self.n)
            .filter(|&y| self.at(x, y) == x)
            .map(|y| p.prob(y))
            .sum();
        Ok(mass >= 1.0 - MASS_TOL)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: LutFile = serde_json::from_str(text)?;
        raw.try_into()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(LutFile::from(self)).expect("table serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct LutFile {
    n: usize,
    #[serde(default)]
    alphabet: Option<Vec<f64>>,
    table: Vec<Vec<usize>>,
}

impl TryFrom<LutFile> for LutTable {
    type Error = Error;

    fn try_from(raw: LutFile) -> Result<Self> {
        let alphabet = match raw.alphabet {
            Some(values) => {
                if values.len() != raw.n {
                    return Err(Error::Validity(format!(
                        "\"n\" is {} but the alphabet has {} values",
                        raw.n,
                        values.len()
                    )));
                }
                Alphabet::new(values)?
            }
            None => Alphabet::canonical(raw.n)?,
        };
        LutTable::new(alphabet, raw.table)
    }
}

impl From<&LutTable> for LutFile {
    fn from(t: &LutTable) -> Self {
        LutFile {
            n: t.n,
            alphabet: Some(t.alphabet.values.clone()),
            table: t.rows(),
        }
    }
}
