// SPDX-License-Identifier: Apache-2.0

//! `Σ_{n≥1} n^{-p} e^{αn}` for `α ≤ 0`.
//!
//! Terms below `M` are summed directly. The tail `Σ_{n≥M} f(n)` is
//! `∫_M^∞ f + f(M)/2 - Σ_j B_{2j}/(2j)! f^{(2j-1)}(M)` (Euler–Maclaurin),
//! with the integral done in closed form at `α = 0` and by Gauss–Legendre
//! quadrature in `u = ln(x/M)` otherwise.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-13;

const FIRST_TAIL_INDEX: usize = 64;
const MAX_TAIL_INDEX: usize = 1 << 20;

/// `B_2, B_4, …, B_12`.
const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

const GL_POINTS: usize = 16;
const PANEL_WIDTH: f64 = 0.25;

fn gauss_legendre() -> &'static ([f64; GL_POINTS], [f64; GL_POINTS]) {
    static NODES: OnceLock<([f64; GL_POINTS], [f64; GL_POINTS])> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GL_POINTS;
        let mut x = [0.0; GL_POINTS];
        let mut w = [0.0; GL_POINTS];
        for i in 0..n {
            // Newton iteration from the Chebyshev-like initial guess
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            loop {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let pk = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = pk;
                }
                let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    let (mut q0, mut q1) = (1.0, z);
                    for k in 2..=n {
                        let qk = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                        q0 = q1;
                        q1 = qk;
                    }
                    let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                    x[i] = z;
                    w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                    break;
                }
            }
        }
        (x, w)
    })
}

/// `∫_a^b h` by composite 16-point Gauss–Legendre.
fn integrate(h: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_legendre();
    let panels = ((b - a) / PANEL_WIDTH).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        let half = 0.5 * width;
        let s: f64 = x
            .iter()
            .zip(w)
            .map(|(&xi, &wi)| wi * h(mid + half * xi))
            .sum();
        total += half * s;
    }
    total
}

/// `∫_m^∞ x^{-p} e^{αx} dx`.
fn tail_integral(alpha: f64, p: f64, m: f64) -> f64 {
    if alpha == 0.0 {
        return m.powf(1.0 - p) / (p - 1.0);
    }
    let a = alpha * m;
    let scale = m.powf(1.0 - p);
    // exp(a e^u) is below e^{-60} once e^u > 60/|a|
    let mut upper = (60.0 / -a).max(1.0).ln() + 2.0;
    if p > 1.0 {
        upper = upper.min(50.0 / (p - 1.0));
    }
    integrate(|u| ((1.0 - p) * u + a * u.exp()).exp(), 0.0, upper) * scale
}

/// `d^k/dx^k [x^{-p} e^{αx}]` at `x`.
fn derivative(alpha: f64, p: f64, x: f64, k: usize) -> f64 {
    // Leibniz: Σ_j C(k,j) α^{k-j} (x^{-p})^{(j)}
    let mut binom = 1.0;
    let mut falling = 1.0; // (-p)(-p-1)…(-p-j+1)
    let mut sum = 0.0;
    for j in 0..=k {
        if j > 0 {
            binom *= (k - j + 1) as f64 / j as f64;
            falling *= -p - (j - 1) as f64;
        }
        sum += binom * alpha.powi((k - j) as i32) * falling * x.powf(-p - j as f64);
    }
    sum * (alpha * x).exp()
}

fn term(alpha: f64, p: f64, n: usize) -> f64 {
    let nf = n as f64;
    (alpha * nf - p * nf.ln()).exp()
}

/// Tail from `m` on, with an estimate of its own error.
fn euler_maclaurin_tail(alpha: f64, p: f64, m: usize) -> (f64, f64) {
    let mf = m as f64;
    let mut tail = tail_integral(alpha, p, mf) + 0.5 * term(alpha, p, m);
    let mut last = 0.0;
    let mut fact = 1.0;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let order = 2 * j + 2;
        fact *= ((order - 1) * order) as f64;
        last = b / fact * derivative(alpha, p, mf, order - 1);
        tail -= last;
    }
    (tail, last.abs())
}

/// `Σ_{n=1}^∞ n^{-p} e^{αn}` to absolute accuracy `tol`.
pub fn polylog_sum(alpha: f64, p: f64, tol: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "exponent p must be positive, got {p}"
        )));
    }
    if alpha.is_nan() {
        return Err(Error::InvalidArgument("alpha is NaN".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if alpha > 0.0 {
        return Err(Error::Divergent(format!(
            "Σ n^-p e^(αn) diverges for α = {alpha} > 0"
        )));
    }
    if alpha == 0.0 && p <= 1.0 {
        return Err(Error::Divergent(format!(
            "Σ n^-p diverges for p = {p} <= 1 at α = 0"
        )));
    }
    if alpha == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(-(-alpha.exp_m1()).ln());
    }

    let mut m = FIRST_TAIL_INDEX;
    loop {
        let head: f64 = (1..m).rev().map(|n| term(alpha, p, n)).sum();
        let (tail, err) = euler_maclaurin_tail(alpha, p, m);
        if err <= 0.1 * tol || m >= MAX_TAIL_INDEX {
            return Ok(head + tail);
        }
        m *= 4;
    }
}

/// Riemann zeta `ζ(p)` for `p > 1`.
pub fn zeta(p: f64) -> Result<f64> {
    polylog_sum(0.0, p, DEFAULT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(alpha: f64, p: f64, n: usize) -> f64 {
        (1..=n).rev().map(|k| term(alpha, p, k)).sum()
    }

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let v = integrate(|x| x.powi(7) - 3.0 * x * x + 1.0, 0.0, 2.0);
        let exact = 2f64.powi(8) / 8.0 - 8.0 + 2.0;
        assert!((v - exact).abs() < 1e-12);
        let (_, w) = gauss_legendre();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn matches_brute_force_for_fast_decay() {
        for (alpha, p) in [
            (-0.5, 0.5),
            (-1.0, 1.5),
            (-0.2, 2.5),
            (-3.0, 1.0),
            (-0.1, 1.5),
        ] {
            let v = polylog_sum(alpha, p, 1e-14).unwrap();
            let b = brute(alpha, p, 2000);
            assert!(
                (v - b).abs() < 1e-13 * b.max(1.0),
                "alpha={alpha} p={p}: {v} vs {b}"
            );
        }
    }

    #[test]
    fn log_identity_at_p_one() {
        let v = polylog_sum(-1.0, 1.0, 1e-14).unwrap();
        assert!((v + (1.0 - (-1f64).exp()).ln()).abs() < 1e-15);
        assert!((v - 0.458_675).abs() < 1e-6);
    }

    #[test]
    fn zeta_known_values() {
        let z2 = zeta(2.0).unwrap();
        assert!((z2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        let z4 = zeta(4.0).unwrap();
        assert!((z4 - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(1.5).unwrap() - 2.612_375_348_685_488).abs() < 1e-13);
    }

    #[test]
    fn deep_negative_alpha() {
        let v = polylog_sum(-50.0, 1.5, 1e-14).unwrap();
        assert!((v / (-50f64).exp() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn divergent_regions() {
        assert!(matches!(
            polylog_sum(0.1, 2.0, 1e-12),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            polylog_sum(0.0, 1.0, 1e-12),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            polylog_sum(0.0, 0.5, 1e-12),
            Err(Error::Divergent(_))
        ));
        assert!(polylog_sum(-1.0, 0.0, 1e-12).is_err());
    }

    #[test]
    fn continuous_approach_to_zeta() {
        let z = zeta(1.5).unwrap();
        let near = polylog_sum(-1e-12, 1.5, 1e-14).unwrap();
        // Li_{3/2}(e^α) ≈ ζ(3/2) - 2√(π|α|)
        assert!((z - near - 2.0 * (std::f64::consts::PI * 1e-12).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn small_alpha_half_integer_matches_asymptotics() {
        // Li_{1/2}(e^α) = Γ(1/2)|α|^{-1/2} + ζ(1/2) + O(α)
        let alpha = -1e-6;
        let v = polylog_sum(alpha, 0.5, 1e-12).unwrap();
        let zeta_half = -1.460_354_508_809_586_8;
        let asym = (std::f64::consts::PI / 1e-6).sqrt() + zeta_half;
        assert!((v - asym).abs() < 1e-5, "{v} vs {asym}");
    }
}
