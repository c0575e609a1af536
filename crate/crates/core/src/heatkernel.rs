// SPDX-License-Identifier: Apache-2.0

//! Heat kernel `g_β(i, j) = (e^{βΔ})_{ij}` of the periodic lattice Laplacian.
//!
//! `Δ` acts as `(Δf)(i) = Σ_{j~i} (f(j) - f(i))`, so `e^{βΔ}` is a stochastic
//! matrix. On the torus `Z_L^d` it factorizes into a product of ring kernels,
//! one per axis, so only the `L` ring values are stored.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

/// Ring entries smaller than this (relative to the diagonal) are recomputed
/// from the image sum, where the spectral sum has only absolute accuracy.
const SPECTRAL_RELATIVE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct HeatKernel {
    spec: LatticeSpec,
    beta: f64,
    factor: Vec<f64>,
}

impl HeatKernel {
    pub fn new(spec: LatticeSpec, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "beta must be a finite nonnegative number, got {beta}"
            )));
        }
        let l = spec.edge_length();
        let factor = if beta == 0.0 {
            let mut f = vec![0.0; l];
            f[0] = 1.0;
            f
        } else {
            let mut f = ring_kernel_spectral(l, beta);
            let diag = f[0];
            for (r, x) in f.iter_mut().enumerate().skip(1) {
                if *x < SPECTRAL_RELATIVE_FLOOR * diag {
                    *x = ring_kernel_images(l, beta, r);
                }
            }
            // exact reflection symmetry, so g(i,j) and g(j,i) agree bitwise
            for r in l / 2 + 1..l {
                f[r] = f[l - r];
            }
            f
        };
        Ok(Self { spec, beta, factor })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// One-dimensional kernel indexed by ring displacement `r ∈ [0, L)`.
    pub fn factor(&self) -> &[f64] {
        &self.factor
    }

    pub fn evaluate(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.spec.num_sites();
        if i >= n {
            return Err(Error::SiteOutOfRange { site: i, n });
        }
        if j >= n {
            return Err(Error::SiteOutOfRange { site: j, n });
        }
        Ok(self.evaluate_unchecked(i, j))
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, i: usize, j: usize) -> f64 {
        self.spec.offset_mod(i, j).map(|r| self.factor[r]).product()
    }

    /// Return value `g_β(i, i)`, identical for every site.
    pub fn diagonal(&self) -> f64 {
        self.factor[0].powi(self.spec.dim() as i32)
    }

    /// Dense `N × N` table of kernel values, row-major.
    pub fn table(&self) -> Vec<f64> {
        let n = self.spec.num_sites();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.evaluate_unchecked(i, j));
            }
        }
        out
    }
}

/// `(1/L) Σ_k exp(2β(cos(2πk/L) - 1)) cos(2πkr/L)` for every `r`.
fn ring_kernel_spectral(l: usize, beta: f64) -> Vec<f64> {
    let lf = l as f64;
    let weights: Vec<f64> = (0..l)
        .map(|k| (2.0 * beta * ((2.0 * PI * k as f64 / lf).cos() - 1.0)).exp())
        .collect();
    (0..l)
        .map(|r| {
            let s: f64 = weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * (2.0 * PI * ((k * r) % l) as f64 / lf).cos())
                .sum();
            s / lf
        })
        .collect()
}

/// Method of images: `Σ_m e^{-2β} I_{|r + mL|}(2β)`, each Bessel term summed
/// from its power series in log space. Every term is positive.
fn ring_kernel_images(l: usize, beta: f64, r: usize) -> f64 {
    let mut total = 0.0;
    for m in 0i64.. {
        let mut added = 0.0;
        for nu in [r as i64 + m * l as i64, m * l as i64 - r as i64 + l as i64] {
            if nu >= 0 {
                added += scaled_bessel_i(nu as u64, beta);
            }
        }
        total += added;
        if added <= total * 1e-18 || added == 0.0 {
            break;
        }
    }
    total
}

/// `e^{-2β} I_ν(2β)` via `Σ_j β^{2j+ν} / (j! (j+ν)!)`.
fn scaled_bessel_i(nu: u64, beta: f64) -> f64 {
    let ln_fact_nu: f64 = (2..=nu).map(|k| (k as f64).ln()).sum();
    let mut term = (-2.0 * beta + nu as f64 * beta.ln() - ln_fact_nu).exp();
    if term == 0.0 {
        return 0.0;
    }
    let mut sum = term;
    let b2 = beta * beta;
    for j in 0u64.. {
        term *= b2 / ((j + 1) as f64 * (j + 1 + nu) as f64);
        sum += term;
        if term <= sum * 1e-17 && (j as f64) > beta {
            break;
        }
    }
    sum
}

/// Continuum Gaussian return density `(4πβ)^{-d/2}`.
pub fn continuum_estimate(d: usize, beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "beta must be positive, got {beta}"
        )));
    }
    Ok((4.0 * PI * beta).powf(-(d as f64) / 2.0))
}
