// SPDX-License-Identifier: Apache-2.0

//! Largest-term (saddle-point) treatment of the cycle gas.
//!
//! A configuration is a collection of cycles with `s(n)` cycles of length
//! `n`, constrained by `Σ n s(n) = L^d`. Maximizing the entropy functional
//! under that constraint gives `s(n) ∝ n^{-(1+d/2)} e^{αn}`; in `d = 3` the
//! multiplier reaches `α = 0` at finite `β` and the remaining length
//! condenses into one macroscopic cycle.

mod gas;
mod polylog;
mod sector;

pub use gas::{
    critical_beta, entropy_mu, phase_scan, solve_alpha, solve_gas, CycleGasSolution, Phase,
    PhasePoint, PhaseRow, MAX_TABLE_LENGTH, TABLE_RELATIVE_CUTOFF,
};
pub use polylog::{polylog_sum, zeta, DEFAULT_TOL};
pub use sector::{logistic, solve_tau, weighted_up_sum, SectorOccupation};
