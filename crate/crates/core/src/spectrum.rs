//! Exact integer spectra of regular graphs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{add_i, add_u, mul_i, mul_u, to_i128};
use crate::error::{Error, Result};

/// Multiset of integer eigenvalues of a regular graph on `n` vertices.
///
/// Zero multiplicities are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spectrum {
    n: u128,
    degree: i128,
    entries: BTreeMap<i128, u128>,
}

impl Spectrum {
    /// Builds a spectrum, merging repeated eigenvalues and validating the
    /// count and the regular-graph bound `|λ| <= degree`.
    pub fn new(
        n: u128,
        degree: i128,
        entries: impl IntoIterator<Item = (i128, u128)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lambda, mult) in entries {
            if mult == 0 {
                continue;
            }
            let slot = map.entry(lambda).or_insert(0u128);
            *slot = add_u(*slot, mult)?;
        }
        let s = Spectrum { n, degree, entries: map };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let total = self.entries.values().try_fold(0u128, |a, &m| add_u(a, m))?;
        if total != self.n {
            return Err(Error::InvalidSpectrum(format!(
                "multiplicities sum to {total}, expected {}",
                self.n
            )));
        }
        if self.degree < 0 || self.multiplicity(self.degree) == 0 {
            return Err(Error::InvalidSpectrum(format!(
                "degree {} is not an eigenvalue",
                self.degree
            )));
        }
        if let Some((&l, _)) = self.entries.iter().find(|(&l, _)| l.abs() > self.degree) {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvalue {l} exceeds degree {}",
                self.degree
            )));
        }
        Ok(())
    }

    /// Spectrum of the one-vertex graph with a loop, the unit for Kronecker products.
    pub fn unit() -> Self {
        Spectrum { n: 1, degree: 1, entries: BTreeMap::from([(1, 1)]) }
    }

    /// Complete graph `K_n`.
    pub fn complete(n: u128) -> Result<Self> {
        let k = to_i128(n)? - 1;
        Spectrum::new(n, k, [(k, 1), (-1, n - 1)])
    }

    pub fn n(&self) -> u128 {
        self.n
    }

    pub fn degree(&self) -> i128 {
        self.degree
    }

    pub fn multiplicity(&self, lambda: i128) -> u128 {
        self.entries.get(&lambda).copied().unwrap_or(0)
    }

    /// `(eigenvalue, multiplicity)` in descending eigenvalue order.
    pub fn iter(&self) -> impl Iterator<Item = (i128, u128)> + '_ {
        self.entries.iter().rev().map(|(&l, &m)| (l, m))
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// `Σ λ·m(λ)`, which counts loops for an adjacency matrix.
    pub fn trace(&self) -> Result<i128> {
        self.entries
            .iter()
            .try_fold(0i128, |acc, (&l, &m)| add_i(acc, mul_i(l, to_i128(m)?)?))
    }

    /// `Σ |λ|·m(λ)`.
    pub fn energy(&self) -> Result<u128> {
        self.entries
            .iter()
            .try_fold(0u128, |acc, (&l, &m)| add_u(acc, mul_u(l.unsigned_abs(), m)?))
    }

    /// Eigenvalues multiply, multiplicities multiply.
    pub fn kron(&self, other: &Spectrum) -> Result<Spectrum> {
        let mut out: BTreeMap<i128, u128> = BTreeMap::new();
        for (&a, &ma) in &self.entries {
            for (&b, &mb) in &other.entries {
                let slot = out.entry(mul_i(a, b)?).or_insert(0);
                *slot = add_u(*slot, mul_u(ma, mb)?)?;
            }
        }
        Spectrum::new(
            mul_u(self.n, other.n)?,
            mul_i(self.degree, other.degree)?,
            out,
        )
    }

    /// Spectrum of the complement of a loopless regular graph.
    ///
    /// A disconnected input with `c` components contributes `c - 1` copies of `-1-k`.
    pub fn complement(&self) -> Result<Spectrum> {
        let trace = self.trace()?;
        if trace != 0 {
            return Err(Error::InvalidSpectrum(format!(
                "complement needs a loopless graph, trace is {trace}"
            )));
        }
        let n = to_i128(self.n)?;
        let k = self.degree;
        let c = self.multiplicity(k);
        let mut entries = vec![(n - k - 1, 1), (-1 - k, c - 1)];
        entries.extend(self.entries.iter().filter(|(&l, _)| l != k).map(|(&l, &m)| (-1 - l, m)));
        Spectrum::new(self.n, n - k - 1, entries)
    }

    /// Largest `|λ|` over eigenvalues with `|λ| != degree`, if any.
    pub fn second_largest_abs(&self) -> Option<i128> {
        self.entries
            .keys()
            .map(|l| l.abs())
            .filter(|&a| a != self.degree)
            .max()
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, m)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "[{l}]^{m}")?;
        }
        f.write_str("}")
    }
}

// Keys are declared alphabetically so the JSON form has sorted keys.
#[derive(Serialize, Deserialize)]
struct Wire {
    degree: i128,
    entries: Vec<(i128, u128)>,
    n: u128,
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { degree: self.degree, entries: self.iter().collect(), n: self.n }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(de)?;
        Spectrum::new(w.n, w.degree, w.entries).map_err(serde::de::Error::custom)
    }
}
