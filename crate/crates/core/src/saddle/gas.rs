// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::error::{Error, Result};

use super::polylog::{polylog_sum, zeta, DEFAULT_TOL};

/// Upper limit on the tabulated cycle lengths.
pub const MAX_TABLE_LENGTH: usize = 100_000;

/// Tabulation stops once `s(n) / s(1)` falls below this.
pub const TABLE_RELATIVE_CUTOFF: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// `α < 0`, all cycles finite.
    Subcritical,
    /// `α = 0` with a macroscopic cycle carrying the excess length.
    Condensed,
}

/// Lagrange multiplier and phase of the cycle gas at one `(d, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub d: usize,
    pub beta: f64,
    pub alpha: f64,
    pub condensate_fraction: f64,
    pub phase: Phase,
}

fn check_dim_beta(d: usize, beta: f64) -> Result<()> {
    if d == 0 || d > 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be 1, 2 or 3, got {d}"
        )));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "beta must be positive, got {beta}"
        )));
    }
    Ok(())
}

/// Solves `Σ_n n^{-d/2} e^{αn} = β^{d/2}/2` for `α ≤ 0`.
///
/// When the left side stays below the target all the way to `α = 0`
/// (only possible for `d = 3`), `α` is pinned at 0 and the missing mass
/// `1 - 2ζ(3/2)/β^{3/2}` goes into the condensate.
pub fn solve_alpha(d: usize, beta: f64, tol: f64) -> Result<PhasePoint> {
    check_dim_beta(d, beta)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let p = d as f64 / 2.0;
    let target = 0.5 * beta.powf(p);
    if p > 1.0 {
        let at_zero = zeta(p)?;
        if target >= at_zero {
            return Ok(PhasePoint {
                d,
                beta,
                alpha: 0.0,
                condensate_fraction: 1.0 - at_zero / target,
                phase: Phase::Condensed,
            });
        }
    }

    let sum_tol = DEFAULT_TOL.min(tol);
    let f = |log_abs_alpha: f64| polylog_sum(-log_abs_alpha.exp(), p, sum_tol);

    // F(α) <= e^α / (1 - e^α) places the root at or above ln(T/(1+T)).
    let mut far = (1.0 + 1.0 / target).ln().ln();
    while f(far)? > target {
        far += 1.0;
    }
    let mut near = far - 1.0;
    while f(near)? < target {
        near -= 2.0;
        if near < -700.0 {
            return Err(Error::NoRoot(format!(
                "saddle multiplier for d={d}, beta={beta} is below floating-point range"
            )));
        }
    }
    // f decreases from near to far
    for _ in 0..200 {
        let mid = 0.5 * (near + far);
        if mid <= near || mid >= far {
            break;
        }
        let v = f(mid)?;
        if v > target {
            near = mid;
        } else {
            far = mid;
        }
        if (v - target).abs() <= tol * target * 1e-3 {
            near = mid;
            far = mid;
            break;
        }
    }
    let best = if (f(near)? - target).abs() <= (f(far)? - target).abs() {
        near
    } else {
        far
    };
    Ok(PhasePoint {
        d,
        beta,
        alpha: -best.exp(),
        condensate_fraction: 0.0,
        phase: Phase::Subcritical,
    })
}

/// `β_c` with `β_c^{3/2}/2 = ζ(3/2)`, found by bisection; `None` for `d ≤ 2`.
pub fn critical_beta(d: usize) -> Result<Option<f64>> {
    if d == 0 || d > 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be 1, 2 or 3, got {d}"
        )));
    }
    if d < 3 {
        return Ok(None);
    }
    let p = d as f64 / 2.0;
    let z = zeta(p)?;
    let g = |b: f64| 0.5 * b.powf(p) - z;
    let (mut lo, mut hi) = (1e-3, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Saddle-point occupation numbers `s(n) = 2 (L/√β)^d n^{-(1+d/2)} e^{αn}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleGasSolution {
    pub d: usize,
    pub beta: f64,
    pub l: usize,
    pub alpha: f64,
    pub phase: Phase,
    /// Fraction of the `L^d` sites on the macroscopic cycle.
    pub condensate_fraction: f64,
    /// Entropy functional at the saddle, finite cycles only.
    pub mu: f64,
    pub n_max: usize,
    pub tol: f64,
}

pub fn solve_gas(d: usize, beta: f64, l: usize, tol: f64) -> Result<CycleGasSolution> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "edge length must be positive".into(),
        ));
    }
    let point = solve_alpha(d, beta, tol)?;
    let mut sol = CycleGasSolution {
        d,
        beta,
        l,
        alpha: point.alpha,
        phase: point.phase,
        condensate_fraction: point.condensate_fraction,
        mu: 0.0,
        n_max: 1,
        tol,
    };
    sol.n_max = sol.default_n_max();
    // At the stationary point the summand of μ collapses to s(n)(1 - αn).
    sol.mu = sol.total_cycles()? - sol.alpha * sol.finite_mass()?;
    Ok(sol)
}

impl CycleGasSolution {
    pub fn num_sites(&self) -> f64 {
        (self.l as f64).powi(self.d as i32)
    }

    /// `2 (L/√β)^d`.
    pub fn amplitude(&self) -> f64 {
        2.0 * (self.l as f64 / self.beta.sqrt()).powi(self.d as i32)
    }

    pub fn density(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "cycle length must be at least 1".into(),
            ));
        }
        let nf = n as f64;
        let p = 1.0 + self.d as f64 / 2.0;
        Ok(self.amplitude() * (self.alpha * nf - p * nf.ln()).exp())
    }

    /// `s(1), …, s(n_max)`.
    pub fn densities(&self) -> Vec<f64> {
        (1..=self.n_max)
            .map(|n| self.density(n).expect("n >= 1"))
            .collect()
    }

    /// `Σ_n n s(n)` over finite cycles, summed to infinity.
    pub fn finite_mass(&self) -> Result<f64> {
        Ok(self.amplitude() * polylog_sum(self.alpha, self.d as f64 / 2.0, DEFAULT_TOL)?)
    }

    /// `Σ_n s(n)`, the number of finite cycles.
    pub fn total_cycles(&self) -> Result<f64> {
        Ok(self.amplitude() * polylog_sum(self.alpha, 1.0 + self.d as f64 / 2.0, DEFAULT_TOL)?)
    }

    /// `|Σ_n n s(n) + condensate · N - N| / N`.
    pub fn constraint_residual(&self) -> Result<f64> {
        let n = self.num_sites();
        Ok((self.finite_mass()? + self.condensate_fraction * n - n).abs() / n)
    }

    fn default_n_max(&self) -> usize {
        let s1 = self.density(1).expect("n = 1");
        let mut n = 1usize;
        while n < MAX_TABLE_LENGTH {
            let next = (n * 2).min(MAX_TABLE_LENGTH);
            if self.density(next).expect("n >= 1") < TABLE_RELATIVE_CUTOFF * s1 {
                // refine inside (n, next]
                let (mut lo, mut hi) = (n, next);
                while hi - lo > 1 {
                    let mid = (lo + hi) / 2;
                    if self.density(mid).expect("n >= 1") < TABLE_RELATIVE_CUTOFF * s1 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return hi;
            }
            n = next;
        }
        MAX_TABLE_LENGTH
    }

    pub fn with_n_max(mut self, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("n_max must be at least 1".into()));
        }
        self.n_max = n_max;
        Ok(self)
    }
}

/// `Σ_n [s d ln L - (s ln s - s) - (s d/2) ln(βn) - s ln n + s ln 2]` with
/// `densities[n-1] = s(n)`; empty occupations contribute nothing.
pub fn entropy_mu(d: usize, beta: f64, l: f64, densities: &[f64]) -> Result<f64> {
    check_dim_beta(d, beta)?;
    if !(l > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "edge length must be positive, got {l}"
        )));
    }
    let df = d as f64;
    let mut mu = 0.0;
    for (idx, &s) in densities.iter().enumerate() {
        if s < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "negative occupation {s} at n = {}",
                idx + 1
            )));
        }
        if s == 0.0 {
            continue;
        }
        let n = (idx + 1) as f64;
        mu += s * df * l.ln() - (s * s.ln() - s) - 0.5 * s * df * (beta * n).ln() - s * n.ln()
            + s * std::f64::consts::LN_2;
    }
    Ok(mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRow {
    pub beta: f64,
    pub alpha: f64,
    pub condensate_fraction: f64,
    pub s1: f64,
    pub mu: f64,
}

pub fn phase_scan(d: usize, betas: &[f64], l: usize, tol: f64) -> Result<Vec<PhaseRow>> {
    betas
        .iter()
        .map(|&beta| {
            let sol = solve_gas(d, beta, l, tol)?;
            Ok(PhaseRow {
                beta,
                alpha: sol.alpha,
                condensate_fraction: sol.condensate_fraction,
                s1: sol.density(1)?,
                mu: sol.mu,
            })
        })
        .collect()
}
