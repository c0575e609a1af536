// SPDX-License-Identifier: Apache-2.0

//! Permutation-cycle ("polymer") representation of the spin-1/2 quantum
//! Heisenberg ferromagnet on periodic cubic lattices.
//!
//! The crate cross-checks several routes to the same partition function:
//! exact spin-sector traces ([`spinsector`]), the symmetric-group-algebra
//! expansion of `e^{-βH}` ([`permalg`]), heat-kernel products and polymer
//! activities ([`heatkernel`], [`polymer`]), and the saddle-point cycle gas
//! whose `d = 3` solution condenses a macroscopic cycle ([`saddle`]).

// `!(x > 0.0)` is used deliberately so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod format;
pub mod heatkernel;
pub mod lattice;
pub mod permalg;
pub mod polymer;
pub mod saddle;
pub mod spinsector;

pub use error::{Error, Result};
pub use heatkernel::HeatKernel;
pub use lattice::LatticeSpec;
