// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference computations shared by the integration tests.
//!
//! Everything here is built from first principles (explicit coordinates,
//! dense matrices, full spin space) without going through the library's
//! own indexing or factorizations.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::DMatrix;

/// Nearest-neighbour pairs of the periodic `L^d` torus, one entry per edge.
pub fn torus_edges(d: usize, l: usize) -> Vec<(usize, usize)> {
    let n = l.pow(d as u32);
    let mut edges = Vec::with_capacity(n * d);
    for site in 0..n {
        let mut coords = vec![0usize; d];
        let mut rest = site;
        for c in coords.iter_mut() {
            *c = rest % l;
            rest /= l;
        }
        for axis in 0..d {
            let mut shifted = coords.clone();
            shifted[axis] = (shifted[axis] + 1) % l;
            let other: usize = shifted.iter().rev().fold(0, |acc, &c| acc * l + c);
            edges.push((site, other));
        }
    }
    edges
}

/// Dense graph Laplacian `Δ = A - 2d·1`.
pub fn laplacian(d: usize, l: usize) -> DMatrix<f64> {
    let n = l.pow(d as u32);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (a, b) in torus_edges(d, l) {
        m[(a, b)] += 1.0;
        m[(b, a)] += 1.0;
        m[(a, a)] -= 1.0;
        m[(b, b)] -= 1.0;
    }
    m
}

/// `e^{βΔ}` by dense matrix exponential.
pub fn heat_kernel_matrix(d: usize, l: usize, beta: f64) -> DMatrix<f64> {
    (laplacian(d, l) * beta).exp()
}

/// `H = Σ_edges (1 - swap_ij)` on the full `2^N` spin space.
pub fn spin_hamiltonian(d: usize, l: usize) -> DMatrix<f64> {
    let n = l.pow(d as u32);
    let dim = 1usize << n;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (a, b) in torus_edges(d, l) {
        for s in 0..dim {
            let (sa, sb) = ((s >> a) & 1, (s >> b) & 1);
            h[(s, s)] += 1.0;
            let t = if sa == sb { s } else { s ^ (1 << a) ^ (1 << b) };
            h[(t, s)] -= 1.0;
        }
    }
    h
}

/// `Tr e^{-βH}` split by up-spin count: entry `k` is the `k`-sector trace.
pub fn spin_sector_traces(d: usize, l: usize, beta: f64) -> Vec<f64> {
    let n = l.pow(d as u32);
    let e = (spin_hamiltonian(d, l) * -beta).exp();
    let mut out = vec![0.0; n + 1];
    for s in 0..(1usize << n) {
        out[s.count_ones() as usize] += e[(s, s)];
    }
    out
}

/// All permutations of `0..n` as image vectors, by Heap's algorithm.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Coefficients of `e^{-βH}` in the group algebra of `S_N`, from the
/// exponential of `H` acting by left multiplication on the regular
/// representation. Keys are image vectors.
pub fn regular_rep_coefficients(d: usize, l: usize, beta: f64) -> HashMap<Vec<usize>, f64> {
    let n = l.pow(d as u32);
    let perms = all_permutations(n);
    let index: HashMap<Vec<usize>, usize> = perms
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let m = perms.len();
    let edges = torus_edges(d, l);
    let mut h = DMatrix::<f64>::identity(m, m) * edges.len() as f64;
    for &(a, b) in &edges {
        for (col, p) in perms.iter().enumerate() {
            let moved: Vec<usize> = p
                .iter()
                .map(|&x| {
                    if x == a {
                        b
                    } else if x == b {
                        a
                    } else {
                        x
                    }
                })
                .collect();
            h[(index[&moved], col)] -= 1.0;
        }
    }
    let e = (h * -beta).exp();
    let id = index[&(0..n).collect::<Vec<_>>()];
    perms
        .into_iter()
        .enumerate()
        .map(|(row, p)| (p, e[(row, id)]))
        .collect()
}

/// Number of cycles of a permutation given by its images.
pub fn cycle_count(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for start in 0..p.len() {
        if !seen[start] {
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = p[x];
            }
        }
    }
    count
}

/// `ζ(s)` for `s > 1` by Euler–Maclaurin with a fixed cutoff of 40 terms.
pub fn zeta_euler_maclaurin(s: f64) -> f64 {
    const M: f64 = 40.0;
    // B_2, B_4, …, B_12
    const BERNOULLI: [f64; 6] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
    ];
    let head: f64 = (1..40).map(|n| (n as f64).powf(-s)).sum();
    let mut tail = M.powf(1.0 - s) / (s - 1.0) + 0.5 * M.powf(-s);
    // derivative factor s(s+1)…(s+2k-2) / (2k)!
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let order = 2 * k + 1;
        tail += b / fact * rising * M.powf(-s - order as f64);
        rising *= (s + order as f64) * (s + order as f64 + 1.0);
        fact *= ((order + 2) * (order + 3)) as f64;
    }
    head + tail
}

/// `ζ(s)` for `s > 1` through the alternating eta series with
/// Borwein's acceleration.
pub fn zeta_borwein(s: f64) -> f64 {
    const N: usize = 40;
    // d_k ∝ Σ_{i≤k} (N+i-1)! 4^i / ((N-i)! (2i)!), scaled so the i = 0 term is 1
    let mut d = vec![0.0f64; N + 1];
    let mut term = 1.0;
    let mut acc = 0.0;
    for (i, slot) in d.iter_mut().enumerate() {
        if i > 0 {
            let (n, i) = (N as f64, i as f64);
            term *= 4.0 * (n + i - 1.0) * (n - i + 1.0) / ((2.0 * i) * (2.0 * i - 1.0));
        }
        acc += term;
        *slot = acc;
    }
    let dn = d[N];
    let eta: f64 = (0..N)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * (dn - d[k]) / (k as f64 + 1.0).powf(s)
        })
        .sum::<f64>()
        / dn;
    eta / (1.0 - 2f64.powf(1.0 - s))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
