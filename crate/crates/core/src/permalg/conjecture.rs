// SPDX-License-Identifier: Apache-2.0

//! Comparison of exact coefficients `C̃_α` with the heat-kernel product
//! `Π_i g_β(i, G_α i)` up to an overall constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heatkernel::HeatKernel;
use crate::lattice::LatticeSpec;

use super::element::GroupAlgebraElement;
use super::expansion::{expand, DEFAULT_TOL};
use super::perm::Permutation;

pub const DEFAULT_FLOOR: f64 = 1e-8;

/// `Π_{i} g_β(i, p(i))`.
pub fn conjecture_rhs(kernel: &HeatKernel, p: &Permutation) -> Result<f64> {
    let n = kernel.spec().num_sites();
    if p.len() != n {
        return Err(Error::InvalidArgument(format!(
            "permutation on {} points, lattice has {n} sites",
            p.len()
        )));
    }
    Ok((0..n)
        .map(|i| kernel.evaluate_unchecked(i, p.apply(i)))
        .product())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorStats {
    pub max: f64,
    pub median: f64,
    pub mean: f64,
    pub q90: f64,
}

impl ErrorStats {
    fn from_errors(mut errs: Vec<f64>) -> Self {
        errs.sort_by(f64::total_cmp);
        let m = errs.len();
        let quantile = |q: f64| {
            let pos = q * (m - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            errs[lo] + (errs[hi] - errs[lo]) * (pos - lo as f64)
        };
        Self {
            max: errs[m - 1],
            median: quantile(0.5),
            mean: errs.iter().sum::<f64>() / m as f64,
            q90: quantile(0.9),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureFit {
    pub beta: f64,
    pub floor: f64,
    /// Permutations with `C̃_α >= floor · max C̃`.
    pub count: usize,
    /// `C̃_id / Π_i g_β(i, i)`; exact on the identity.
    pub anchored_constant: f64,
    /// Minimizes `Σ (ln C̃_α - ln C - ln Π g)^2`.
    pub lsq_constant: f64,
    pub anchored: ErrorStats,
    pub lsq: ErrorStats,
}

pub fn conjecture_fit(spec: &LatticeSpec, beta: f64, floor: f64) -> Result<ConjectureFit> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "the heat-kernel product is only compared for beta > 0, got {beta}"
        )));
    }
    let coeffs = expand(spec, beta, DEFAULT_TOL)?.into_element();
    let kernel = HeatKernel::new(*spec, beta)?;
    conjecture_fit_with(&coeffs, &kernel, floor)
}

pub fn conjecture_fit_with(
    coeffs: &GroupAlgebraElement,
    kernel: &HeatKernel,
    floor: f64,
) -> Result<ConjectureFit> {
    let beta = kernel.beta();
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "the heat-kernel product is only compared for beta > 0, got {beta}"
        )));
    }
    if !(floor > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "coefficient floor must be positive, got {floor}"
        )));
    }
    let n = kernel.spec().num_sites();
    if coeffs.num_points() != n {
        return Err(Error::InvalidArgument(
            "expansion and kernel refer to different lattices".into(),
        ));
    }
    let cmax = coeffs.max_coefficient().unwrap_or(0.0);
    let cutoff = floor * cmax;
    let pairs: Vec<(f64, f64)> = coeffs
        .iter()
        .filter(|(_, c)| *c >= cutoff && *c > 0.0)
        .map(|(p, c)| (c, conjecture_rhs(kernel, &p).expect("sizes checked")))
        .collect();
    if pairs.is_empty() {
        return Err(Error::Empty(format!(
            "no coefficient at or above {floor:e} times the largest coefficient"
        )));
    }

    let id = Permutation::identity(n);
    let anchored_constant = coeffs.coefficient(&id) / conjecture_rhs(kernel, &id)?;
    let lsq_constant =
        (pairs.iter().map(|(c, g)| c.ln() - g.ln()).sum::<f64>() / pairs.len() as f64).exp();

    let rel = |k: f64| -> Vec<f64> { pairs.iter().map(|(c, g)| (c - k * g).abs() / c).collect() };
    Ok(ConjectureFit {
        beta,
        floor,
        count: pairs.len(),
        anchored_constant,
        lsq_constant,
        anchored: ErrorStats::from_errors(rel(anchored_constant)),
        lsq: ErrorStats::from_errors(rel(lsq_constant)),
    })
}
