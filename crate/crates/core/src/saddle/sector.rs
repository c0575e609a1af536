// SPDX-License-Identifier: Apache-2.0

//! Up-spin sector restriction of the cycle gas: each cycle is up with the
//! logistic weight `e^{τn}/(1+e^{τn})`, and `τ` fixes the total up length.

use serde::Serialize;

use crate::error::{Error, Result};

use super::gas::{CycleGasSolution, Phase};
use super::polylog::{polylog_sum, DEFAULT_TOL};

/// Terms of the accelerated alternating series.
const ALTERNATING_TERMS: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorOccupation {
    pub tau: f64,
    /// Requested number of up spins.
    pub k_target: f64,
    /// In the condensed phase, whether the macroscopic cycle is up.
    pub condensate_up: bool,
    /// Up length carried by finite cycles, `Σ_n n r(n)`.
    pub finite_up: f64,
    pub d: usize,
    pub alpha: f64,
    pub amplitude: f64,
    pub n_max: usize,
}

/// `e^x / (1 + e^x)` without overflow.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `Σ_{k≥0} (-1)^k a_k` for a moment sequence `a_k = ∫ t^k dμ(t)` on `[0, 1]`
/// (Cohen, Rodriguez Villegas, Zagier).
fn alternating_sum(a: impl Fn(usize) -> Result<f64>, terms: usize) -> Result<f64> {
    let mut d = (3.0 + 8f64.sqrt()).powi(terms as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for k in 0..terms {
        c = b - c;
        s += c * a(k)?;
        let kf = k as f64;
        let nf = terms as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    Ok(s / d)
}

/// `Σ_n n^{-p} e^{αn} σ(τn)`, the up length per unit amplitude.
pub fn weighted_up_sum(alpha: f64, p: f64, tau: f64) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.5 * polylog_sum(alpha, p, DEFAULT_TOL)?);
    }
    if tau > 0.0 {
        return Ok(polylog_sum(alpha, p, DEFAULT_TOL)? - weighted_up_sum(alpha, p, -tau)?);
    }
    // σ(τn) = Σ_{m≥1} (-1)^{m+1} e^{mτn}, so the sum is an alternating series
    // in the polylog values at α + mτ; those form a moment sequence in m.
    alternating_sum(
        |k| polylog_sum(alpha + (k + 1) as f64 * tau, p, DEFAULT_TOL),
        ALTERNATING_TERMS,
    )
}

impl SectorOccupation {
    /// `r(n) = s(n) e^{τn}/(1+e^{τn})`.
    pub fn occupation(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "cycle length must be at least 1".into(),
            ));
        }
        let nf = n as f64;
        let p = 1.0 + self.d as f64 / 2.0;
        let s = self.amplitude * (self.alpha * nf - p * nf.ln()).exp();
        Ok(s * logistic(self.tau * nf))
    }

    pub fn occupations(&self) -> Vec<f64> {
        (1..=self.n_max)
            .map(|n| self.occupation(n).expect("n >= 1"))
            .collect()
    }

    /// Recomputes `Σ_n n r(n)` at the stored `τ`.
    pub fn finite_up_length(&self) -> Result<f64> {
        Ok(self.amplitude * weighted_up_sum(self.alpha, self.d as f64 / 2.0, self.tau)?)
    }
}

/// Finds `τ` with `Σ_n n s(n) e^{τn}/(1+e^{τn}) (+ condensate if up) = k_target`.
pub fn solve_tau(gas: &CycleGasSolution, k_target: f64, tol: f64) -> Result<SectorOccupation> {
    let n_sites = gas.num_sites();
    if !(k_target > 0.0 && k_target < n_sites) {
        return Err(Error::InvalidArgument(format!(
            "up-spin count must lie strictly between 0 and N = {n_sites}, got {k_target}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let finite_mass = gas.finite_mass()?;
    let condensate = gas.condensate_fraction * n_sites;
    let (finite_target, condensate_up) = match gas.phase {
        Phase::Subcritical => (k_target, false),
        Phase::Condensed if k_target < finite_mass => (k_target, false),
        Phase::Condensed if k_target > condensate => (k_target - condensate, true),
        Phase::Condensed => {
            return Err(Error::Empty(format!(
                "k = {k_target} lies in the gap [{finite_mass}, {condensate}] between the finite-cycle \
                 length and the condensate length; no sector occupation reaches it"
            )))
        }
    };
    if !(finite_target > 0.0 && finite_target < finite_mass) {
        return Err(Error::Empty(format!(
            "finite cycles carry length in (0, {finite_mass}); {finite_target} is not attainable"
        )));
    }

    let p = gas.d as f64 / 2.0;
    let amp = gas.amplitude();
    let g = |tau: f64| -> Result<f64> { Ok(amp * weighted_up_sum(gas.alpha, p, tau)?) };

    let (mut lo, mut hi) = (-1.0, 1.0);
    while g(lo)? >= finite_target {
        lo *= 2.0;
        if lo < -1e300 {
            return Err(Error::NoRoot("could not bracket tau from below".into()));
        }
    }
    while g(hi)? <= finite_target {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoRoot("could not bracket tau from above".into()));
        }
    }
    let mut tau = 0.5 * (lo + hi);
    for _ in 0..300 {
        tau = 0.5 * (lo + hi);
        if tau <= lo || tau >= hi {
            break;
        }
        let v = g(tau)?;
        if (v - finite_target).abs() <= 1e-3 * tol * finite_target {
            break;
        }
        if v < finite_target {
            lo = tau;
        } else {
            hi = tau;
        }
    }
    let finite_up = g(tau)?;
    Ok(SectorOccupation {
        tau,
        k_target,
        condensate_up,
        finite_up,
        d: gas.d,
        alpha: gas.alpha,
        amplitude: amp,
        n_max: gas.n_max,
    })
}
