//! Closed-form Fourier coefficients of piecewise-linear functions.
//!
//! On a piece with midpoint `c`, half-width `h`, midpoint value `v` and slope
//! `α`,
//!
//! ```text
//! ∫ (v + α(θ−c)) e^{−ikθ} dθ = e^{−ikc} · (2hv·sinc(kh) − 2iαh²·ψ(kh)),
//! ψ(z) = (sin z − z cos z)/z²,
//! ```
//!
//! which keeps every term proportional to the piece width and avoids the
//! cancellation of the endpoint form.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::PiecewiseLinearPeriodic;
use crate::error::{DiscError, Result};
use crate::trig_series::{CertifiedSeries, TrigSeries};

const REANCHOR: u64 = 64;

fn psi(z: f64, sin: f64, cos: f64) -> f64 {
    if z.abs() < 0.25 {
        let z2 = z * z;
        z * (1.0 / 3.0
            - z2 * (1.0 / 30.0 - z2 * (1.0 / 840.0 - z2 * (1.0 / 45_360.0 - z2 / 3_991_680.0))))
    } else {
        (sin - z * cos) / (z * z)
    }
}

fn sinc(z: f64, sin: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        sin / z
    }
}

struct Piece {
    mid: f64,
    half: f64,
    value: f64,
    slope: f64,
}

fn pieces(p: &PiecewiseLinearPeriodic) -> impl Iterator<Item = Piece> + '_ {
    p.breakpoints()
        .windows(2)
        .zip(p.values().windows(2))
        .map(|(t, v)| {
            let half = 0.5 * (t[1] - t[0]);
            Piece {
                mid: 0.5 * (t[0] + t[1]),
                half,
                value: 0.5 * (v[0] + v[1]),
                slope: (v[1] - v[0]) / (2.0 * half),
            }
        })
}

fn piece_term(pc: &Piece, k: f64, phase: Complex64, sin: f64, cos: f64) -> Complex64 {
    let z = k * pc.half;
    let re = 2.0 * pc.half * pc.value * sinc(z, sin);
    let im = -2.0 * pc.slope * pc.half * pc.half * psi(z, sin, cos);
    phase * Complex64::new(re, im)
}

/// Coefficients `ĉ(k)` for `|k| ≤ max_abs_k`, by exact piecewise
/// integration. Values are real, so `ĉ(−k) = conj ĉ(k)`. Coefficients at
/// the level of accumulated rounding are dropped.
pub fn pl_fourier(p: &PiecewiseLinearPeriodic, max_abs_k: u64) -> TrigSeries {
    pl_fourier_pruned(p, max_abs_k).0
}

/// Also returns the ℓ¹ mass of the dropped coefficients.
fn pl_fourier_pruned(p: &PiecewiseLinearPeriodic, max_abs_k: u64) -> (TrigSeries, f64) {
    let kmax = max_abs_k as usize;
    let mut acc = vec![Complex64::new(0.0, 0.0); kmax + 1];
    let mut mass = vec![0.0f64; kmax + 1];
    for pc in pieces(p) {
        let step_phase = Complex64::cis(-pc.mid);
        let step_half = Complex64::cis(pc.half);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut half = Complex64::new(1.0, 0.0);
        // rounding in each term is relative to the piece integral scale, and
        // the phase argument `k·mid` carries an absolute error of its own
        let scale = 2.0 * pc.half * (pc.value.abs() + pc.slope.abs() * pc.half);
        let drift = 2.0 * pc.mid.abs() / 64.0;
        for (k, (slot, m)) in acc.iter_mut().zip(mass.iter_mut()).enumerate() {
            let kf = k as f64;
            if (k as u64).is_multiple_of(REANCHOR) {
                phase = Complex64::cis(-kf * pc.mid);
                half = Complex64::cis(kf * pc.half);
            }
            let term = piece_term(&pc, kf, phase, half.im, half.re);
            *slot += term;
            *m += scale * (1.0 + drift * kf);
            phase *= step_phase;
            half *= step_half;
        }
    }
    let mut out = TrigSeries::new();
    let mut pruned = 0.0;
    for (k, (c, m)) in acc.into_iter().zip(mass).enumerate() {
        let c = c / TAU;
        let noise = 64.0 * f64::EPSILON * m / TAU;
        let weight = if k > 0 { 2.0 } else { 1.0 };
        if c.norm() <= noise {
            pruned += weight * c.norm();
            continue;
        }
        out.insert(k as i64, c);
        if k > 0 {
            out.insert(-(k as i64), c.conj());
        }
    }
    (out, pruned)
}

/// Coefficients at selected frequencies, each computed with direct phases.
pub fn pl_fourier_at(p: &PiecewiseLinearPeriodic, ks: &[i64]) -> Vec<Complex64> {
    ks.iter()
        .map(|&k| {
            let kf = k as f64;
            pieces(p)
                .map(|pc| {
                    let (s, c) = (kf * pc.half).sin_cos();
                    piece_term(&pc, kf, Complex64::cis(-kf * pc.mid), s, c)
                })
                .sum::<Complex64>()
                / TAU
        })
        .collect()
}

/// [`pl_fourier`] plus the tail bound `Σ_{|k|>K} |ĉ(k)| < V/(πK)` where `V`
/// is the slope variation.
pub fn pl_fourier_certified(p: &PiecewiseLinearPeriodic, max_abs_k: u64) -> CertifiedSeries {
    let (series, pruned) = pl_fourier_pruned(p, max_abs_k);
    CertifiedSeries {
        series,
        l1_tail: p.slope_variation() / (PI * max_abs_k.max(1) as f64) + pruned,
    }
}

fn sinc_sq_pi(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let s = (PI * x).sin() / (PI * x);
        s * s
    }
}

fn check_nodes(u: &TrigSeries, nodes: usize) -> Result<()> {
    if nodes < 2 || (u.max_abs_k() as usize) * 2 >= nodes {
        return Err(DiscError::InvalidParameter(format!(
            "{nodes} nodes cannot resolve degree {}; need more than twice the degree",
            u.max_abs_k()
        )));
    }
    Ok(())
}

/// Coefficients of the piecewise-linear interpolant of the trigonometric
/// polynomial `u` at the nodes `2πj/N`.
///
/// The interpolant is the sampled function convolved with a hat of width
/// `2π/N`, so for `N > 2·deg u` its coefficients are `û(r)·sinc²(πk/N)` on
/// every alias `k = r + pN`.
pub fn interpolant_fourier(u: &TrigSeries, nodes: usize, max_abs_k: u64) -> Result<CertifiedSeries> {
    check_nodes(u, nodes)?;
    let residual = interpolation_residual(u, nodes, max_abs_k)?;
    Ok(CertifiedSeries {
        series: u.subtract(&residual.series),
        l1_tail: residual.l1_tail,
    })
}

/// `U = u − u₀` for the uniform interpolant `u₀` at `N` nodes, truncated to
/// `|k| ≤ max_abs_k`, with an exact tail bound:
/// `Σ_{|k|>K, k≡r} sinc²(πk/N) ≤ 2·sin²(πr/N)·(N/π)²·(1/K² + 1/(NK))`.
pub fn interpolation_residual(u: &TrigSeries, nodes: usize, max_abs_k: u64) -> Result<CertifiedSeries> {
    check_nodes(u, nodes)?;
    if max_abs_k < u.max_abs_k() {
        return Err(DiscError::InvalidParameter(format!(
            "truncation {max_abs_k} below polynomial degree {}",
            u.max_abs_k()
        )));
    }
    let n = nodes as i64;
    let nf = nodes as f64;
    let kmax = max_abs_k as i64;
    let mut out = TrigSeries::new();
    for (r, c) in u.iter() {
        if r == 0 {
            continue;
        }
        out.add_at(r, c * (1.0 - sinc_sq_pi(r as f64 / nf)));
        let mut p = 1;
        loop {
            let mut any = false;
            for k in [r + p * n, r - p * n] {
                if k.abs() <= kmax {
                    any = true;
                    out.add_at(k, -c * sinc_sq_pi(k as f64 / nf));
                }
            }
            if !any {
                break;
            }
            p += 1;
        }
    }
    Ok(CertifiedSeries {
        series: out,
        l1_tail: residual_tail(u, nodes, max_abs_k),
    })
}

fn residual_tail(u: &TrigSeries, nodes: usize, max_abs_k: u64) -> f64 {
    let nf = nodes as f64;
    let kf = max_abs_k.max(1) as f64;
    u.iter()
        .filter(|&(r, _)| r != 0)
        .map(|(r, c)| {
            let s = (PI * r as f64 / nf).sin();
            c.norm() * s * s * (nf / PI).powi(2) * 2.0 * (1.0 / (kf * kf) + 1.0 / (nf * kf))
        })
        .sum()
}

/// The tail bound of [`interpolation_residual`] without building the series.
pub fn interpolation_residual_tail(u: &TrigSeries, nodes: usize, max_abs_k: u64) -> Result<f64> {
    check_nodes(u, nodes)?;
    Ok(residual_tail(u, nodes, max_abs_k))
}

/// Untruncated `Σ_k |Û(k)|` for `U = u − u₀`, using
/// `Σ_{p∈ℤ} sinc²(π(x + p)) = 1`.
pub fn interpolation_residual_l1(u: &TrigSeries, nodes: usize) -> Result<f64> {
    check_nodes(u, nodes)?;
    Ok(u.iter()
        .filter(|&(r, _)| r != 0)
        .map(|(r, c)| 2.0 * c.norm() * (1.0 - sinc_sq_pi(r as f64 / nodes as f64)))
        .sum())
}
