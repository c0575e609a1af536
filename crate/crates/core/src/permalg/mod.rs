// SPDX-License-Identifier: Apache-2.0

//! Group-algebra view of the Heisenberg Hamiltonian on small lattices.
//!
//! `H = E·1 - Σ_{edges} (ij)` lives in the real group algebra of `S_N`.
//! Its exponential is computed exactly (to a declared truncation bound)
//! for `N <= 9`, and traces over spin space are recovered from the cycle
//! structure of each permutation: every cycle carries one spin value.

mod conjecture;
mod element;
mod expansion;
mod io;
mod perm;

use rayon::prelude::*;

pub use conjecture::{
    conjecture_fit, conjecture_fit_with, conjecture_rhs, ConjectureFit, ErrorStats, DEFAULT_FLOOR,
};
pub use element::GroupAlgebraElement;
pub use expansion::{
    exp_neg_beta_h, expand, hamiltonian_element, Expansion, DEFAULT_TOL, MAX_EXPANSION_SITES,
};
pub use io::{read_coefficients, write_coefficients, CoefficientFile};
pub use perm::{factorial, CycleDecomposition, Permutation};

use crate::error::{Error, Result};
use perm::cycle_lengths_into;

const CHUNK: usize = 1 << 12;

/// Sum of `f(0..len)` in fixed-size chunks so the result does not depend on
/// thread scheduling.
pub(crate) fn chunked_sum(len: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let partial: Vec<f64> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(len)).map(&f).sum())
        .collect();
    partial.iter().sum()
}

pub fn cycle_decompose(p: &Permutation) -> CycleDecomposition {
    p.cycles()
}

/// `Σ_α 2^{m(G_α)} c_α`: each cycle of `G_α` is uniformly spin up or down.
pub fn trace_from_coeffs(coeffs: &GroupAlgebraElement) -> f64 {
    let n = coeffs.num_points();
    match coeffs.dense() {
        Some(v) => {
            let partial: Vec<f64> = v
                .par_chunks(CHUNK)
                .enumerate()
                .map(|(c, chunk)| {
                    let mut images = vec![0; n];
                    let mut seen = vec![false; n];
                    let mut lengths = Vec::with_capacity(n);
                    let mut s = 0.0;
                    for (r, &x) in (c * CHUNK..).zip(chunk) {
                        if x == 0.0 {
                            continue;
                        }
                        perm::lehmer_unrank(r, &mut images);
                        cycle_lengths_into(&images, &mut seen, &mut lengths);
                        s += x * (lengths.len() as f64).exp2();
                    }
                    s
                })
                .collect();
            partial.iter().sum()
        }
        None => coeffs
            .iter()
            .map(|(p, c)| c * (p.cycles().num_cycles() as f64).exp2())
            .sum(),
    }
}

/// Number of ways to pick cycles whose lengths sum to each `k`, i.e. the
/// coefficients of `Π_cycles (1 + x^len)`.
fn add_subset_sum_counts(lengths: &[usize], weight: f64, scratch: &mut [f64], out: &mut [f64]) {
    scratch.iter_mut().for_each(|x| *x = 0.0);
    scratch[0] = 1.0;
    let mut top = 0;
    for &len in lengths {
        for k in (0..=top).rev() {
            scratch[k + len] += scratch[k];
        }
        top += len;
    }
    for (o, s) in out.iter_mut().zip(scratch.iter()) {
        *o += weight * s;
    }
}

/// Exact up-spin sector traces `Tr(e^{-βH})_k` for `k = 0..=N`, recovered
/// from the coefficients by counting cycle subsets of total length `k`.
pub fn sector_traces_from_coeffs(coeffs: &GroupAlgebraElement) -> Vec<f64> {
    let n = coeffs.num_points();
    let reduce = |mut a: Vec<f64>, b: Vec<f64>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    match coeffs.dense() {
        Some(v) => {
            let partial: Vec<Vec<f64>> = v
                .par_chunks(CHUNK)
                .enumerate()
                .map(|(c, chunk)| {
                    let mut images = vec![0; n];
                    let mut seen = vec![false; n];
                    let mut lengths = Vec::with_capacity(n);
                    let mut scratch = vec![0.0; n + 1];
                    let mut acc = vec![0.0; n + 1];
                    for (r, &x) in (c * CHUNK..).zip(chunk) {
                        if x == 0.0 {
                            continue;
                        }
                        perm::lehmer_unrank(r, &mut images);
                        cycle_lengths_into(&images, &mut seen, &mut lengths);
                        add_subset_sum_counts(&lengths, x, &mut scratch, &mut acc);
                    }
                    acc
                })
                .collect();
            partial.into_iter().fold(vec![0.0; n + 1], reduce)
        }
        None => {
            let mut acc = vec![0.0; n + 1];
            let mut scratch = vec![0.0; n + 1];
            for (p, c) in coeffs.iter() {
                let lengths: Vec<usize> = p.cycles().lengths().collect();
                add_subset_sum_counts(&lengths, c, &mut scratch, &mut acc);
            }
            acc
        }
    }
}

pub fn sector_trace_from_coeffs(coeffs: &GroupAlgebraElement, k: usize) -> Result<f64> {
    let n = coeffs.num_points();
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "sector {k} out of range 0..={n}"
        )));
    }
    Ok(sector_traces_from_coeffs(coeffs)[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts_are_binomial_for_fixed_points() {
        let mut out = vec![0.0; 5];
        let mut scratch = vec![0.0; 5];
        add_subset_sum_counts(&[1, 1, 1, 1], 1.0, &mut scratch, &mut out);
        assert_eq!(out, vec![1.0, 4.0, 6.0, 4.0, 1.0]);
        let mut out = vec![0.0; 6];
        let mut scratch = vec![0.0; 6];
        add_subset_sum_counts(&[2, 3], 2.0, &mut scratch, &mut out);
        assert_eq!(out, vec![2.0, 0.0, 2.0, 2.0, 0.0, 2.0]);
    }

    #[test]
    fn identity_traces() {
        let mut id = GroupAlgebraElement::zero(4);
        id.add_term(Permutation::identity(4), 1.0).unwrap();
        assert_eq!(trace_from_coeffs(&id), 16.0);
        assert_eq!(sector_trace_from_coeffs(&id, 2).unwrap(), 6.0);
        assert!(sector_trace_from_coeffs(&id, 5).is_err());
    }

    #[test]
    fn sector_traces_resum_to_trace() {
        let mut el = GroupAlgebraElement::zero(5);
        el.add_term(Permutation::new(vec![1, 0, 2, 4, 3]).unwrap(), 0.3)
            .unwrap();
        el.add_term(Permutation::new(vec![1, 2, 3, 4, 0]).unwrap(), 0.5)
            .unwrap();
        el.add_term(Permutation::identity(5), 0.2).unwrap();
        let total: f64 = sector_traces_from_coeffs(&el).iter().sum();
        assert!((total - trace_from_coeffs(&el)).abs() < 1e-14);
    }
}
