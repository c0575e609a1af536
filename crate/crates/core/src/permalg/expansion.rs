// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

use super::element::GroupAlgebraElement;
use super::perm::{factorial, lehmer_rank, lehmer_unrank, Permutation};

/// Largest lattice whose full coefficient vector (`N!` doubles) is expanded.
pub const MAX_EXPANSION_SITES: usize = 9;

pub const DEFAULT_TOL: f64 = 1e-12;

/// `H = E·1 - Σ_{(i,j)} (ij)` with `E` the number of edges.
pub fn hamiltonian_element(spec: &LatticeSpec) -> GroupAlgebraElement {
    let n = spec.num_sites();
    let mut h = GroupAlgebraElement::zero(n);
    h.add_term(Permutation::identity(n), spec.num_edges() as f64)
        .expect("identity has the lattice size");
    for (i, j) in spec.edges() {
        let t = Permutation::transposition(n, i, j).expect("edge endpoints are lattice sites");
        h.add_term(t, -1.0)
            .expect("transposition has the lattice size");
    }
    h
}

/// Coefficients of `e^{-βH}` together with how they were obtained.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub spec: LatticeSpec,
    pub beta: f64,
    pub tol: f64,
    /// Number of Taylor terms kept (degree + 1).
    pub terms: usize,
    /// Upper bound on the discarded coefficient mass.
    pub truncation_bound: f64,
    pub element: GroupAlgebraElement,
}

impl Expansion {
    pub fn into_element(self) -> GroupAlgebraElement {
        self.element
    }
}

/// `e^{-βH} = Σ_α C̃_α G_α`.
pub fn exp_neg_beta_h(spec: &LatticeSpec, beta: f64, tol: f64) -> Result<GroupAlgebraElement> {
    expand(spec, beta, tol).map(Expansion::into_element)
}

/// Expands `e^{-βH} = e^{-βE} exp(β T)` with `T = Σ_edges (ij)`.
///
/// Writing `x = βE`, this equals `Σ_j Poisson(j; x) · (T/E)^j`, and
/// `(T/E)^j · 1` is the distribution of a `j`-step random-transposition walk
/// on `S_N`. Every term is nonnegative, so there is no cancellation and the
/// discarded mass is exactly the Poisson tail.
pub fn expand(spec: &LatticeSpec, beta: f64, tol: f64) -> Result<Expansion> {
    let n = spec.num_sites();
    if n > MAX_EXPANSION_SITES {
        return Err(Error::Resource(format!(
            "group-algebra expansion needs N! coefficients; N = {n} exceeds the limit {MAX_EXPANSION_SITES}"
        )));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "beta must be a finite nonnegative number, got {beta}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let size = factorial(n);
    let edges = spec.edges();
    let e = edges.len() as f64;
    let x = beta * e;

    let mut result = vec![0.0; size];
    if x == 0.0 {
        result[0] = 1.0;
        return Ok(Expansion {
            spec: *spec,
            beta,
            tol,
            terms: 1,
            truncation_bound: 0.0,
            element: GroupAlgebraElement::from_dense(n, result)?,
        });
    }

    let table = left_multiplication_table(n, &edges);
    let mut walk = vec![0.0; size];
    walk[0] = 1.0;
    let mut next = vec![0.0; size];
    let mut j = 0usize;
    let truncation_bound = loop {
        let w = poisson_weight(x, j);
        result
            .par_iter_mut()
            .zip(walk.par_iter())
            .for_each(|(r, &p)| *r += w * p);
        if let Some(bound) = poisson_tail_bound(x, j) {
            if bound < tol {
                break bound;
            }
        }
        next.par_iter_mut().enumerate().for_each(|(r, out)| {
            let s: f64 = table.iter().map(|t| walk[t[r] as usize]).sum();
            *out = s / e;
        });
        std::mem::swap(&mut walk, &mut next);
        j += 1;
    };

    Ok(Expansion {
        spec: *spec,
        beta,
        tol,
        terms: j + 1,
        truncation_bound,
        element: GroupAlgebraElement::from_dense(n, result)?,
    })
}

/// `table[e][r]` = rank of `t_e ∘ G_r`. Each table is an involution on ranks,
/// so gathering through it is the same as scattering.
fn left_multiplication_table(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<u32>> {
    let size = factorial(n);
    let mut flat = vec![0u32; size * edges.len()];
    flat.par_chunks_mut(edges.len())
        .enumerate()
        .for_each(|(r, row)| {
            let mut images = vec![0; n];
            lehmer_unrank(r, &mut images);
            for (slot, &(a, b)) in row.iter_mut().zip(edges) {
                let swapped: Vec<usize> = images
                    .iter()
                    .map(|&v| {
                        if v == a {
                            b
                        } else if v == b {
                            a
                        } else {
                            v
                        }
                    })
                    .collect();
                *slot = lehmer_rank(&swapped) as u32;
            }
        });
    (0..edges.len())
        .map(|e| (0..size).map(|r| flat[r * edges.len() + e]).collect())
        .collect()
}

fn ln_factorial(j: usize) -> f64 {
    (2..=j).map(|k| (k as f64).ln()).sum()
}

fn poisson_weight(x: f64, j: usize) -> f64 {
    (-x + j as f64 * x.ln() - ln_factorial(j)).exp()
}

/// Bound on `Σ_{i > j} Poisson(i; x)`, valid once `j + 2 > x`.
fn poisson_tail_bound(x: f64, j: usize) -> Option<f64> {
    let ratio = x / (j + 2) as f64;
    if ratio >= 1.0 {
        return None;
    }
    Some(poisson_weight(x, j + 1) / (1.0 - ratio))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_examples() {
        let ring3 = LatticeSpec::new(1, 3).unwrap();
        let h = hamiltonian_element(&ring3);
        assert_eq!(h.coefficient(&Permutation::identity(3)), 3.0);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert_eq!(
                h.coefficient(&Permutation::transposition(3, i, j).unwrap()),
                -1.0
            );
        }
        assert_eq!(h.support(0.0), 4);

        let ring4 = LatticeSpec::new(1, 4).unwrap();
        let h4 = hamiltonian_element(&ring4);
        assert_eq!(h4.coefficient(&Permutation::identity(4)), 4.0);
        assert_eq!(h4.support(0.0), 5);

        for (d, l) in [(2, 3), (3, 3), (1, 7)] {
            let h = hamiltonian_element(&LatticeSpec::new(d, l).unwrap());
            assert_eq!(h.coefficient_sum(), 0.0);
        }
    }

    #[test]
    fn beta_zero_is_identity() {
        let spec = LatticeSpec::new(1, 4).unwrap();
        let c = exp_neg_beta_h(&spec, 0.0, DEFAULT_TOL).unwrap();
        assert_eq!(c.support(0.0), 1);
        assert_eq!(c.coefficient(&Permutation::identity(4)), 1.0);
    }

    #[test]
    fn guards() {
        let big = LatticeSpec::new(1, 10).unwrap();
        assert!(matches!(expand(&big, 1.0, 1e-12), Err(Error::Resource(_))));
        let spec = LatticeSpec::new(1, 3).unwrap();
        assert!(expand(&spec, 1.0, 0.0).is_err());
        assert!(expand(&spec, -1.0, 1e-12).is_err());
    }

    #[test]
    fn normalized_and_nonnegative() {
        for (l, beta) in [(3, 0.5), (5, 2.0), (6, 8.0)] {
            let spec = LatticeSpec::new(1, l).unwrap();
            let ex = expand(&spec, beta, DEFAULT_TOL).unwrap();
            assert!(ex.truncation_bound < DEFAULT_TOL);
            assert!((ex.element.coefficient_sum() - 1.0).abs() < 1e-12);
            assert!(ex.element.min_coefficient().unwrap() >= -1e-14);
        }
    }

    #[test]
    fn multiplication_table_is_involution() {
        let spec = LatticeSpec::new(1, 5).unwrap();
        let table = left_multiplication_table(5, &spec.edges());
        for t in &table {
            for (r, &s) in t.iter().enumerate() {
                assert_eq!(t[s as usize] as usize, r);
                assert_ne!(s as usize, r);
            }
        }
    }

    #[test]
    fn poisson_tail_bound_dominates_true_tail() {
        let x = 12.0;
        for j in 11..40 {
            let tail: f64 = (j + 1..200).map(|i| poisson_weight(x, i)).sum();
            let bound = poisson_tail_bound(x, j).unwrap();
            assert!(bound >= tail * (1.0 - 1e-12), "j={j}");
        }
    }
}
