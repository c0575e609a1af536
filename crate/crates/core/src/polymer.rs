// SPDX-License-Identifier: Apache-2.0

//! Polymers (cyclically ordered vertex sets), their heat-kernel activities,
//! and closed-walk sums through a vertex.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::heatkernel::HeatKernel;

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

/// Dense kernel tables are used for enumeration up to this many sites.
const DENSE_TABLE_SITES: usize = 2048;

/// A `k`-cycle `α_1 → α_2 → … → α_k → α_1`, rotated so `α_1` is smallest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polymer {
    vertices: Vec<usize>,
}

impl Polymer {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument(
                "a polymer needs at least one vertex".into(),
            ));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "polymer vertices must be distinct: {vertices:?}"
            )));
        }
        let start = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(k, _)| k)
            .unwrap_or(0);
        let mut vertices = vertices;
        vertices.rotate_left(start);
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// `(Π_{i<k} g(α_i, α_{i+1})) · g(α_1, α_k)`; a 1-polymer has activity `g(α_1, α_1)`.
pub fn activity(kernel: &HeatKernel, p: &Polymer) -> Result<f64> {
    let n = kernel.spec().num_sites();
    if let Some(&bad) = p.vertices.iter().find(|&&v| v >= n) {
        return Err(Error::SiteOutOfRange { site: bad, n });
    }
    let v = &p.vertices;
    let path: f64 = v
        .windows(2)
        .map(|w| kernel.evaluate_unchecked(w[0], w[1]))
        .product();
    Ok(path * kernel.evaluate_unchecked(v[0], v[v.len() - 1]))
}

/// Number of ordered `(k-1)`-tuples of distinct sites other than `i`.
pub fn distinct_tuple_count(n: usize, k: usize) -> u64 {
    (1..k).fold(1u64, |acc, m| {
        acc.saturating_mul(n.saturating_sub(m) as u64)
    })
}

/// `Σ g(i,γ_2) g(γ_2,γ_3) ⋯ g(γ_{k-1},γ_k) g(i,γ_k)` over distinct `i, γ_2, …, γ_k`,
/// by depth-first enumeration.
pub fn walk_sum_distinct(kernel: &HeatKernel, i: usize, k: usize, budget: u64) -> Result<f64> {
    let n = kernel.spec().num_sites();
    if i >= n {
        return Err(Error::SiteOutOfRange { site: i, n });
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "cycle length must be at least 1".into(),
        ));
    }
    if k == 1 {
        return Ok(kernel.evaluate_unchecked(i, i));
    }
    if k > n {
        return Ok(0.0);
    }
    let tuples = distinct_tuple_count(n, k);
    if tuples > budget {
        return Err(Error::Resource(format!(
            "{tuples} ordered vertex tuples exceed the enumeration budget {budget}"
        )));
    }

    let table: Option<Vec<f64>> = (n <= DENSE_TABLE_SITES).then(|| kernel.table());
    let g = |a: usize, b: usize| match &table {
        Some(t) => t[a * n + b],
        None => kernel.evaluate_unchecked(a, b),
    };

    let partial: Vec<f64> = (0..n)
        .into_par_iter()
        .filter(|&second| second != i)
        .map(|second| {
            let mut used = vec![false; n];
            used[i] = true;
            used[second] = true;
            let mut acc = 0.0;
            extend_walk(&g, i, second, g(i, second), k - 2, &mut used, &mut acc);
            acc
        })
        .collect();
    Ok(partial.iter().sum())
}

fn extend_walk(
    g: &(impl Fn(usize, usize) -> f64 + Sync),
    origin: usize,
    last: usize,
    weight: f64,
    remaining: usize,
    used: &mut [bool],
    acc: &mut f64,
) {
    if remaining == 0 {
        *acc += weight * g(origin, last);
        return;
    }
    for next in 0..used.len() {
        if used[next] {
            continue;
        }
        used[next] = true;
        extend_walk(
            g,
            origin,
            next,
            weight * g(last, next),
            remaining - 1,
            used,
            acc,
        );
        used[next] = false;
    }
}

/// Closed-walk sum with the distinctness restriction dropped: `g_{kβ}(i, i)`.
pub fn walk_sum_unrestricted(kernel: &HeatKernel, i: usize, k: usize) -> Result<f64> {
    let n = kernel.spec().num_sites();
    if i >= n {
        return Err(Error::SiteOutOfRange { site: i, n });
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "cycle length must be at least 1".into(),
        ));
    }
    let composed = HeatKernel::new(*kernel.spec(), k as f64 * kernel.beta())?;
    Ok(composed.diagonal())
}

/// Gaussian return estimate `(4πβk)^{-d/2}`.
pub fn return_estimate(d: usize, beta: f64, k: usize) -> Result<f64> {
    if !(beta > 0.0) || k == 0 || d == 0 {
        return Err(Error::InvalidArgument(format!(
            "return estimate needs d >= 1, beta > 0, k >= 1 (got d={d}, beta={beta}, k={k})"
        )));
    }
    Ok((4.0 * PI * beta * k as f64).powf(-(d as f64) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;

    fn kernel(d: usize, l: usize, beta: f64) -> HeatKernel {
        HeatKernel::new(LatticeSpec::new(d, l).unwrap(), beta).unwrap()
    }

    #[test]
    fn polymer_canonical_and_distinct() {
        let p = Polymer::new(vec![4, 2, 7]).unwrap();
        assert_eq!(p.vertices(), &[2, 7, 4]);
        assert!(Polymer::new(vec![1, 3, 1]).is_err());
        assert!(Polymer::new(vec![]).is_err());
    }

    #[test]
    fn activity_examples() {
        let k0 = kernel(1, 4, 0.0);
        assert_eq!(activity(&k0, &Polymer::new(vec![2]).unwrap()).unwrap(), 1.0);

        let k = kernel(1, 4, 0.8);
        let g01 = k.evaluate(0, 1).unwrap();
        let a = activity(&k, &Polymer::new(vec![0, 1]).unwrap()).unwrap();
        assert!((a - g01 * g01).abs() < 1e-16);

        let k5 = kernel(1, 5, 1.0);
        let f = k5.factor();
        let a3 = activity(&k5, &Polymer::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert!((a3 - f[1] * f[1] * f[2]).abs() < 1e-16);

        assert!(activity(&k5, &Polymer::new(vec![0, 5]).unwrap()).is_err());
    }

    #[test]
    fn walk_sum_small_cases() {
        let k = kernel(2, 3, 0.6);
        let g = |a, b| k.evaluate(a, b).unwrap();
        assert!((walk_sum_distinct(&k, 4, 1, 10).unwrap() - g(4, 4)).abs() < 1e-16);
        let two: f64 = (0..9).filter(|&j| j != 4).map(|j| g(4, j) * g(4, j)).sum();
        assert!((walk_sum_distinct(&k, 4, 2, 10).unwrap() - two).abs() < 1e-15);
        assert_eq!(walk_sum_distinct(&k, 0, 10, u64::MAX).unwrap(), 0.0);
    }

    #[test]
    fn budget_guard() {
        let k = kernel(3, 5, 1.0);
        assert_eq!(distinct_tuple_count(125, 5), 124 * 123 * 122 * 121);
        assert!(matches!(
            walk_sum_distinct(&k, 0, 5, DEFAULT_ENUMERATION_BUDGET),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn unrestricted_is_semigroup_diagonal() {
        let k = kernel(2, 6, 0.7);
        for steps in 1..5 {
            let direct = kernel(2, 6, 0.7 * steps as f64).evaluate(3, 3).unwrap();
            assert!((walk_sum_unrestricted(&k, 3, steps).unwrap() - direct).abs() < 1e-15);
        }
        assert!(walk_sum_unrestricted(&k, 3, 0).is_err());
    }

    #[test]
    fn return_estimate_examples() {
        assert!((return_estimate(2, 0.5, 3).unwrap() - 1.0 / (4.0 * PI * 1.5)).abs() < 1e-15);
        assert!((return_estimate(3, 1.0 / (4.0 * PI), 1).unwrap() - 1.0).abs() < 1e-14);
        assert!((return_estimate(3, 1.0, 4).unwrap() - 0.002_806).abs() < 1e-6);
        assert!(return_estimate(3, 0.0, 4).is_err());
        assert!(return_estimate(3, 1.0, 0).is_err());
    }
}
