// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::error::{Error, Result};

/// A bijection on `[0, n)`; `images[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::SiteOutOfRange { site: i.max(j), n });
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "permutations act on different sets"
        );
        Self {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    /// Position in the lexicographic order of all `n!` permutations.
    pub fn lehmer_rank(&self) -> usize {
        lehmer_rank(&self.images)
    }

    pub fn from_lehmer_rank(n: usize, rank: usize) -> Result<Self> {
        if n > MAX_RANKABLE || rank >= factorial(n) {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} out of range for n = {n}"
            )));
        }
        let mut images = vec![0; n];
        lehmer_unrank(rank, &mut images);
        Ok(Self { images })
    }

    pub fn cycles(&self) -> CycleDecomposition {
        CycleDecomposition::of(self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        for c in cycles.cycles() {
            write!(f, "(")?;
            for (k, v) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Largest `n` whose `n!` fits in a `u64`.
pub const MAX_RANKABLE: usize = 20;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub(crate) fn lehmer_rank(images: &[usize]) -> usize {
    let n = images.len();
    let mut rank = 0usize;
    // bitmask of values already consumed, n <= 20
    let mut used = 0u32;
    for (i, &x) in images.iter().enumerate() {
        let smaller_unused = x - (used & ((1u32 << x) - 1)).count_ones() as usize;
        rank = rank * (n - i) + smaller_unused;
        used |= 1 << x;
    }
    rank
}

pub(crate) fn lehmer_unrank(mut rank: usize, out: &mut [usize]) {
    let n = out.len();
    let mut digits = [0usize; MAX_RANKABLE];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut used = 0u32;
    for i in 0..n {
        // pick the digits[i]-th unused value
        let mut remaining = digits[i];
        let mut v = 0;
        loop {
            if used & (1 << v) == 0 {
                if remaining == 0 {
                    break;
                }
                remaining -= 1;
            }
            v += 1;
        }
        out[i] = v;
        used |= 1 << v;
    }
}

/// Cycles of a permutation in canonical form: each cycle starts at its
/// smallest element, cycles ordered by that element. Fixed points are 1-cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<usize>>,
    histogram: Vec<usize>,
}

impl CycleDecomposition {
    pub fn of(p: &Permutation) -> Self {
        let n = p.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        let mut histogram = vec![0; n + 1];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = p.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = p.apply(x);
            }
            histogram[cycle.len()] += 1;
            cycles.push(cycle);
        }
        Self { cycles, histogram }
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// `m(G)`, the number of cycles.
    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    /// `histogram()[n]` is the number of `n`-cycles; index 0 is always 0.
    pub fn histogram(&self) -> &[usize] {
        &self.histogram
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycles.iter().map(Vec::len)
    }
}

/// Cycle lengths of the permutation with the given images, without allocating cycles.
pub(crate) fn cycle_lengths_into(images: &[usize], seen: &mut [bool], lengths: &mut Vec<usize>) {
    lengths.clear();
    seen.iter_mut().for_each(|s| *s = false);
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = images[x];
            len += 1;
        }
        lengths.push(len);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::new(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn cycle_examples() {
        let id = Permutation::identity(4).cycles();
        assert_eq!(id.num_cycles(), 4);
        assert_eq!(id.histogram()[1], 4);

        let t = Permutation::transposition(4, 0, 1).unwrap().cycles();
        assert_eq!(t.cycles(), &[vec![0, 1], vec![2], vec![3]]);
        assert_eq!(t.num_cycles(), 3);

        let c3 = Permutation::new(vec![1, 2, 0]).unwrap().cycles();
        assert_eq!(c3.cycles(), &[vec![0, 1, 2]]);
        assert_eq!(c3.num_cycles(), 1);
        assert_eq!(c3.histogram()[3], 1);
    }

    #[test]
    fn canonical_rotation() {
        // 0 -> 3 -> 1 -> 0, 2 fixed
        let p = Permutation::new(vec![3, 0, 2, 1]).unwrap();
        assert_eq!(p.cycles().cycles(), &[vec![0, 3, 1], vec![2]]);
        assert_eq!(p.to_string(), "(0 3 1)(2)");
    }

    #[test]
    fn lehmer_is_lexicographic_bijection() {
        for n in 0..=6 {
            let mut prev: Option<Vec<usize>> = None;
            for r in 0..factorial(n) {
                let p = Permutation::from_lehmer_rank(n, r).unwrap();
                assert_eq!(p.lehmer_rank(), r);
                if let Some(q) = &prev {
                    assert!(q.as_slice() < p.images());
                }
                prev = Some(p.images().to_vec());
            }
        }
        assert_eq!(Permutation::identity(9).lehmer_rank(), 0);
        assert!(Permutation::from_lehmer_rank(3, 6).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let q = Permutation::new(vec![1, 3, 0, 2]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        let pq = p.compose(&q);
        for i in 0..4 {
            assert_eq!(pq.apply(i), p.apply(q.apply(i)));
        }
    }
}
