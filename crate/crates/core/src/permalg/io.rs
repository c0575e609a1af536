// SPDX-License-Identifier: Apache-2.0

//! Little-endian coefficient files.
//!
//! Layout: `N: u64, beta: f64, tol: f64, count: u64`, then `count` pairs
//! `(lehmer_rank: u64, coefficient: f64)` in increasing rank order.

use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::element::GroupAlgebraElement;
use super::perm::{factorial, MAX_RANKABLE};

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFile {
    pub n: usize,
    pub beta: f64,
    pub tol: f64,
    pub element: GroupAlgebraElement,
}

pub fn write_coefficients<W: Write>(
    mut w: W,
    element: &GroupAlgebraElement,
    beta: f64,
    tol: f64,
) -> Result<()> {
    let terms: Vec<(u64, f64)> = match element.dense() {
        Some(v) => v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(r, &c)| (r as u64, c))
            .collect(),
        None => element
            .iter()
            .map(|(p, c)| (p.lehmer_rank() as u64, c))
            .collect(),
    };
    let mut buf = Vec::with_capacity(32 + 16 * terms.len());
    buf.extend_from_slice(&(element.num_points() as u64).to_le_bytes());
    buf.extend_from_slice(&beta.to_le_bytes());
    buf.extend_from_slice(&tol.to_le_bytes());
    buf.extend_from_slice(&(terms.len() as u64).to_le_bytes());
    for (r, c) in terms {
        buf.extend_from_slice(&r.to_le_bytes());
        buf.extend_from_slice(&c.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

pub fn read_coefficients<R: Read>(mut r: R) -> Result<CoefficientFile> {
    let n = read_u64(&mut r)? as usize;
    if n > MAX_RANKABLE {
        return Err(Error::InvalidArgument(format!(
            "coefficient file declares {n} points"
        )));
    }
    let beta = read_f64(&mut r)?;
    let tol = read_f64(&mut r)?;
    let count = read_u64(&mut r)? as usize;
    let size = factorial(n);
    if count > size {
        return Err(Error::InvalidArgument(format!(
            "coefficient file declares {count} terms for {n}! permutations"
        )));
    }
    let mut coeffs = vec![0.0; size];
    for _ in 0..count {
        let rank = read_u64(&mut r)? as usize;
        let c = read_f64(&mut r)?;
        if rank >= size {
            return Err(Error::InvalidArgument(format!("rank {rank} out of range")));
        }
        coeffs[rank] = c;
    }
    Ok(CoefficientFile {
        n,
        beta,
        tol,
        element: GroupAlgebraElement::from_dense(n, coeffs)?,
    })
}
