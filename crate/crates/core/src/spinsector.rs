// SPDX-License-Identifier: Apache-2.0

//! Exact spin-space traces on small lattices.
//!
//! `H = Σ_{edges} (1 - I_ij)` conserves the number of up spins, so it is
//! diagonalized one sector at a time in the basis of `k`-subsets of sites.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

pub const DEFAULT_SECTOR_BUDGET: usize = 4096;

/// Largest `N` for correlation maps (full space of `2^N` states).
pub const MAX_CORRELATION_SITES: usize = 16;

const MAX_BITMASK_SITES: usize = 128;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The `k`-subsets of `[0, N)` as bit masks, in increasing numeric order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    n: usize,
    k: usize,
    states: Vec<u128>,
}

impl SectorBasis {
    pub fn new(n: usize, k: usize, budget: usize) -> Result<Self> {
        if n > MAX_BITMASK_SITES {
            return Err(Error::Resource(format!(
                "spin states are stored as {MAX_BITMASK_SITES}-bit masks; N = {n} is too large"
            )));
        }
        if k > n {
            return Err(Error::InvalidArgument(format!(
                "sector {k} out of range 0..={n}"
            )));
        }
        let dim = binomial(n, k);
        if dim > budget as u128 {
            return Err(Error::Resource(format!(
                "sector k={k} of N={n} has dimension {dim}, above the dense budget {budget}"
            )));
        }
        let mut states = Vec::with_capacity(dim as usize);
        if k == 0 {
            states.push(0);
        } else {
            let limit: u128 = if n == 128 {
                u128::MAX
            } else {
                (1u128 << n) - 1
            };
            let mut v: u128 = (1u128 << k) - 1;
            loop {
                states.push(v);
                if states.len() as u128 == dim {
                    break;
                }
                // next subset of equal popcount (Gosper)
                let c = v & v.wrapping_neg();
                let r = v + c;
                v = (((r ^ v) >> 2) / c) | r;
                debug_assert!(v <= limit);
            }
        }
        Ok(Self { n, k, states })
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn up_count(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u128] {
        &self.states
    }

    pub fn index_of(&self, state: u128) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

/// Matrix of `H` on sector `k`: diagonal = number of anti-aligned edges,
/// `-1` between states related by swapping an anti-aligned edge.
pub fn build_sector_hamiltonian(spec: &LatticeSpec, k: usize) -> Result<DMatrix<f64>> {
    build_sector_hamiltonian_with_budget(spec, k, DEFAULT_SECTOR_BUDGET)
}

pub fn build_sector_hamiltonian_with_budget(
    spec: &LatticeSpec,
    k: usize,
    budget: usize,
) -> Result<DMatrix<f64>> {
    let basis = SectorBasis::new(spec.num_sites(), k, budget)?;
    Ok(hamiltonian_in_basis(spec, &basis))
}

fn hamiltonian_in_basis(spec: &LatticeSpec, basis: &SectorBasis) -> DMatrix<f64> {
    let dim = basis.dim();
    let edges = spec.edges();
    let mut h = DMatrix::zeros(dim, dim);
    for (a, &s) in basis.states().iter().enumerate() {
        for &(i, j) in &edges {
            let mask = (1u128 << i) | (1u128 << j);
            let bits = s & mask;
            if bits != 0 && bits != mask {
                h[(a, a)] += 1.0;
                let b = basis
                    .index_of(s ^ mask)
                    .expect("swap preserves the up count");
                h[(a, b)] -= 1.0;
            }
        }
    }
    h
}

/// Eigenvalues of every sector Hamiltonian, `k = 0..=N`.
#[derive(Debug, Clone)]
pub struct SectorSpectra {
    spec: LatticeSpec,
    eigenvalues: Vec<Vec<f64>>,
}

impl SectorSpectra {
    pub fn compute(spec: &LatticeSpec, budget: usize) -> Result<Self> {
        let n = spec.num_sites();
        let eigenvalues = (0..=n)
            .into_par_iter()
            .map(|k| sector_eigenvalues(spec, k, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: *spec,
            eigenvalues,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn eigenvalues(&self, k: usize) -> &[f64] {
        &self.eigenvalues[k]
    }

    pub fn traces(&self, beta: f64) -> Result<SectorTraceTable> {
        check_beta(beta)?;
        let traces = self
            .eigenvalues
            .iter()
            .map(|ev| ev.iter().map(|&l| (-beta * l).exp()).sum())
            .collect();
        Ok(SectorTraceTable {
            spec: self.spec,
            beta,
            traces,
        })
    }
}

pub fn sector_eigenvalues(spec: &LatticeSpec, k: usize, budget: usize) -> Result<Vec<f64>> {
    let h = build_sector_hamiltonian_with_budget(spec, k, budget)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "beta must be a finite nonnegative number, got {beta}"
        )));
    }
    Ok(())
}

/// `Tr(e^{-βH})` restricted to the sector with `k` up spins.
pub fn sector_trace(spec: &LatticeSpec, beta: f64, k: usize) -> Result<f64> {
    check_beta(beta)?;
    Ok(sector_eigenvalues(spec, k, DEFAULT_SECTOR_BUDGET)?
        .iter()
        .map(|&l| (-beta * l).exp())
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorTraceTable {
    pub spec: LatticeSpec,
    pub beta: f64,
    /// `traces[k] = Tr(e^{-βH})_k`.
    pub traces: Vec<f64>,
}

impl SectorTraceTable {
    pub fn build(spec: &LatticeSpec, beta: f64) -> Result<Self> {
        SectorSpectra::compute(spec, DEFAULT_SECTOR_BUDGET)?.traces(beta)
    }

    pub fn num_sites(&self) -> usize {
        self.traces.len() - 1
    }

    pub fn full_trace(&self) -> f64 {
        self.traces.iter().sum()
    }

    /// `F_β(L, n) = Σ_{i≤n} Tr(e^{-βH})_i`.
    pub fn cumulative(&self, n: usize) -> Result<f64> {
        if n > self.num_sites() {
            return Err(Error::InvalidArgument(format!(
                "n = {n} out of range 0..={}",
                self.num_sites()
            )));
        }
        Ok(self.traces[..=n].iter().sum())
    }

    /// `F_β(L, ⌊rN⌋) / F_β(L, N)` for `0 < r < 1/2`.
    pub fn magnetization_ratio(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < 0.5) {
            return Err(Error::InvalidArgument(format!(
                "r must lie in (0, 1/2), got {r}"
            )));
        }
        let cut = (r * self.num_sites() as f64).floor() as usize;
        Ok(self.cumulative(cut)? / self.full_trace())
    }

    /// `A(δ) = Tr(e^{-βH - δH'}) / Tr(e^{-βH})` with `H' = Σ_i σ_i^z`,
    /// which equals `N - 2k` on sector `k`.
    pub fn field_response(&self, delta: f64) -> Result<f64> {
        if !delta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "delta must be finite, got {delta}"
            )));
        }
        let n = self.num_sites() as f64;
        let num: f64 = self
            .traces
            .iter()
            .enumerate()
            .map(|(k, t)| (-delta * (n - 2.0 * k as f64)).exp() * t)
            .sum();
        Ok(num / self.full_trace())
    }
}

pub fn cumulative_f(spec: &LatticeSpec, beta: f64, n: usize) -> Result<f64> {
    SectorTraceTable::build(spec, beta)?.cumulative(n)
}

pub fn magnetization_ratio(spec: &LatticeSpec, beta: f64, r: f64) -> Result<f64> {
    SectorTraceTable::build(spec, beta)?.magnetization_ratio(r)
}

pub fn field_response(spec: &LatticeSpec, beta: f64, delta: f64) -> Result<f64> {
    SectorTraceTable::build(spec, beta)?.field_response(delta)
}

/// Two-point functions `ρ(i, j) = Tr(e^{-βH} σ_i^z σ_j^z) / Tr(e^{-βH})`, `σ^z = ±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMap {
    n: usize,
    rho: Vec<f64>,
}

impl CorrelationMap {
    pub fn compute(spec: &LatticeSpec, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let n = spec.num_sites();
        if n > MAX_CORRELATION_SITES {
            return Err(Error::Resource(format!(
                "correlations use the full 2^N space; N = {n} exceeds {MAX_CORRELATION_SITES}"
            )));
        }
        // diagonal of e^{-βH} in each sector, reduced to Σ weight over aligned/anti-aligned pairs
        let per_sector = (0..=n)
            .into_par_iter()
            .map(|k| -> Result<(f64, Vec<f64>)> {
                let basis = SectorBasis::new(n, k, DEFAULT_SECTOR_BUDGET)?;
                let eig = SymmetricEigen::new(hamiltonian_in_basis(spec, &basis));
                let boltz: Vec<f64> = eig.eigenvalues.iter().map(|&l| (-beta * l).exp()).collect();
                let mut pair = vec![0.0; n * n];
                let mut trace = 0.0;
                for (a, &state) in basis.states().iter().enumerate() {
                    let w: f64 = eig
                        .eigenvectors
                        .row(a)
                        .iter()
                        .zip(&boltz)
                        .map(|(v, b)| v * v * b)
                        .sum();
                    trace += w;
                    for i in 0..n {
                        let si = (state >> i) & 1;
                        for j in 0..n {
                            let sj = (state >> j) & 1;
                            pair[i * n + j] += if si == sj { w } else { -w };
                        }
                    }
                }
                Ok((trace, pair))
            })
            .collect::<Result<Vec<_>>>()?;
        let total: f64 = per_sector.iter().map(|(t, _)| t).sum();
        let mut rho = vec![0.0; n * n];
        for (_, pair) in &per_sector {
            for (r, p) in rho.iter_mut().zip(pair) {
                *r += p;
            }
        }
        rho.iter_mut().for_each(|r| *r /= total);
        for i in 0..n {
            rho[i * n + i] = 1.0;
        }
        Ok(Self { n, rho })
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Result<f64> {
        for s in [i, j] {
            if s >= self.n {
                return Err(Error::SiteOutOfRange { site: s, n: self.n });
            }
        }
        Ok(self.rho[i * self.n + j])
    }
}

pub fn correlation(spec: &LatticeSpec, beta: f64, i: usize, j: usize) -> Result<f64> {
    CorrelationMap::compute(spec, beta)?.get(i, j)
}
