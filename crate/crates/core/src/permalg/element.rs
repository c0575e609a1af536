// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::perm::{factorial, lehmer_unrank, Permutation, MAX_RANKABLE};

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Indexed by Lehmer rank; length `n!`.
    Dense(Vec<f64>),
    Sparse(BTreeMap<Permutation, f64>),
}

/// Real linear combination `Σ_α c_α G_α` of permutations of `[0, n)`.
///
/// Small elements (such as a Hamiltonian) are stored sparsely; full
/// expansions are stored densely by Lehmer rank, since almost every
/// coefficient of an exponential is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraElement {
    n: usize,
    storage: Storage,
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            storage: Storage::Sparse(BTreeMap::new()),
        }
    }

    pub fn from_dense(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n > MAX_RANKABLE || coeffs.len() != factorial(n) {
            return Err(Error::InvalidArgument(format!(
                "dense coefficient vector of length {} does not match {n}!",
                coeffs.len()
            )));
        }
        Ok(Self {
            n,
            storage: Storage::Dense(coeffs),
        })
    }

    /// Adds `c` to the coefficient of `p`; coefficients that cancel to zero are removed.
    pub fn add_term(&mut self, p: Permutation, c: f64) -> Result<()> {
        if p.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation on {} points added to element on {} points",
                p.len(),
                self.n
            )));
        }
        match &mut self.storage {
            Storage::Dense(v) => v[p.lehmer_rank()] += c,
            Storage::Sparse(map) => {
                let entry = map.entry(p).or_insert(0.0);
                *entry += c;
                if *entry == 0.0 {
                    map.retain(|_, v| *v != 0.0);
                }
            }
        }
        Ok(())
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, p: &Permutation) -> f64 {
        if p.len() != self.n {
            return 0.0;
        }
        match &self.storage {
            Storage::Dense(v) => v[p.lehmer_rank()],
            Storage::Sparse(map) => map.get(p).copied().unwrap_or(0.0),
        }
    }

    /// Coefficients by Lehmer rank, when stored densely.
    pub fn dense(&self) -> Option<&[f64]> {
        match &self.storage {
            Storage::Dense(v) => Some(v),
            Storage::Sparse(_) => None,
        }
    }

    /// Nonzero terms. Dense storage is walked in Lehmer order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (Permutation, f64)> + '_> {
        match &self.storage {
            Storage::Dense(v) => {
                let n = self.n;
                Box::new(
                    v.iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0.0)
                        .map(move |(r, &c)| {
                            let mut images = vec![0; n];
                            lehmer_unrank(r, &mut images);
                            (
                                Permutation::new(images).expect("unrank yields a bijection"),
                                c,
                            )
                        }),
                )
            }
            Storage::Sparse(map) => Box::new(map.iter().map(|(p, &c)| (p.clone(), c))),
        }
    }

    /// Number of coefficients with `|c| > threshold`.
    pub fn support(&self, threshold: f64) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.iter().filter(|c| c.abs() > threshold).count(),
            Storage::Sparse(map) => map.values().filter(|c| c.abs() > threshold).count(),
        }
    }

    /// Image of the element under the trivial representation `G_α ↦ 1`.
    pub fn coefficient_sum(&self) -> f64 {
        match &self.storage {
            Storage::Dense(v) => super::chunked_sum(v.len(), |r| v[r]),
            Storage::Sparse(map) => map.values().sum(),
        }
    }

    pub fn min_coefficient(&self) -> Option<f64> {
        match &self.storage {
            Storage::Dense(v) => v.iter().copied().reduce(f64::min),
            Storage::Sparse(map) => map.values().copied().reduce(f64::min),
        }
    }

    pub fn max_coefficient(&self) -> Option<f64> {
        match &self.storage {
            Storage::Dense(v) => v.iter().copied().reduce(f64::max),
            Storage::Sparse(map) => map.values().copied().reduce(f64::max),
        }
    }
}
