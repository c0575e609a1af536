// SPDX-License-Identifier: Apache-2.0

//! Periodic cubic lattices `Z_L^d` with row-major site indexing.
//!
//! A site with coordinates `(x_0, ..., x_{d-1})` has index `Σ_k x_k L^k`.

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;
pub const MIN_EDGE: usize = 3;

/// Geometry of a periodic `d`-dimensional cube of side `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    d: usize,
    l: usize,
    n: usize,
}

impl LatticeSpec {
    /// `L >= 3` keeps every neighbor pair distinct on the torus.
    pub fn new(d: usize, l: usize) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "dimension must be in 1..={MAX_DIM}, got {d}"
            )));
        }
        if l < MIN_EDGE {
            return Err(Error::InvalidArgument(format!(
                "edge length must be at least {MIN_EDGE}, got {l}"
            )));
        }
        let n = l
            .checked_pow(d as u32)
            .ok_or_else(|| Error::InvalidArgument(format!("L^d overflows for L={l}, d={d}")))?;
        Ok(Self { d, l, n })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn edge_length(&self) -> usize {
        self.l
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.d * self.n
    }

    fn check_site(&self, i: usize) -> Result<()> {
        if i >= self.n {
            Err(Error::SiteOutOfRange { site: i, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Row-major index of a coordinate vector; coordinates wrap modulo `L`.
    pub fn site_index(&self, coords: &[i64]) -> Result<usize> {
        if coords.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: coords.len(),
            });
        }
        let l = self.l as i64;
        let mut index = 0usize;
        let mut stride = 1usize;
        for &c in coords {
            index += c.rem_euclid(l) as usize * stride;
            stride *= self.l;
        }
        Ok(index)
    }

    /// Coordinates of site `i`, each in `[0, L)`.
    pub fn coords(&self, i: usize) -> Result<Vec<usize>> {
        self.check_site(i)?;
        Ok(self.coords_unchecked(i))
    }

    pub(crate) fn coords_unchecked(&self, mut i: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            out.push(i % self.l);
            i /= self.l;
        }
        out
    }

    /// The `2d` nearest neighbors of site `i`, ordered by axis then `+1, -1`.
    pub fn neighbors(&self, i: usize) -> Result<Vec<usize>> {
        self.check_site(i)?;
        let coords = self.coords_unchecked(i);
        let mut out = Vec::with_capacity(2 * self.d);
        let mut stride = 1usize;
        for &x in &coords {
            let up = (x + 1) % self.l;
            let down = (x + self.l - 1) % self.l;
            out.push(i - x * stride + up * stride);
            out.push(i - x * stride + down * stride);
            stride *= self.l;
        }
        Ok(out)
    }

    /// Every nearest-neighbor pair exactly once, as `(min, max)`.
    ///
    /// Pairs are generated as `(i, i + e_k)` for each site and axis, which
    /// visits each bond once when `L >= 3`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for i in 0..self.n {
            let coords = self.coords_unchecked(i);
            let mut stride = 1usize;
            for &x in &coords {
                let j = i - x * stride + ((x + 1) % self.l) * stride;
                out.push((i.min(j), i.max(j)));
                stride *= self.l;
            }
        }
        out
    }

    /// Minimal periodic displacement from `i` to `j`, each component in `[-L/2, L/2)`.
    pub fn displacement(&self, i: usize, j: usize) -> Result<Vec<i64>> {
        self.check_site(i)?;
        self.check_site(j)?;
        let l = self.l as i64;
        let half = l / 2;
        let ci = self.coords_unchecked(i);
        let cj = self.coords_unchecked(j);
        Ok(ci
            .iter()
            .zip(&cj)
            .map(|(&a, &b)| (b as i64 - a as i64 + half).rem_euclid(l) - half)
            .collect())
    }

    /// Componentwise `(coords(j) - coords(i)) mod L` in `[0, L)`.
    pub(crate) fn offset_mod(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        let l = self.l;
        let (mut a, mut b) = (i, j);
        (0..self.d).map(move |_| {
            let r = (b % l + l - a % l) % l;
            a /= l;
            b /= l;
            r
        })
    }
}
