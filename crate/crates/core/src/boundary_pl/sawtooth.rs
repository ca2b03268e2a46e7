use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PiecewiseLinearPeriodic;
use crate::constants::C2;
use crate::error::{DiscError, Result};
use crate::trig_series::{CertifiedSeries, TrigSeries};

/// The sawtooth `s(θ) = m·dist(θ, (π/R)ℤ)` with slope `m = 2Rε/π`; it
/// oscillates between 0 and `ε` with period `π/R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SawtoothParams {
    pub eps: f64,
    #[serde(rename = "R")]
    pub r: u64,
}

impl SawtoothParams {
    pub fn new(eps: f64, r: u64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(DiscError::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        if r == 0 {
            return Err(DiscError::InvalidParameter("R must be a positive integer".into()));
        }
        Ok(Self { eps, r })
    }

    /// `|s'| = m = 2Rε/π`.
    pub fn slope(&self) -> f64 {
        2.0 * self.r as f64 * self.eps / PI
    }

    /// `‖s‖∞ = m·π/(2R) = ε`.
    pub fn sup(&self) -> f64 {
        self.eps
    }

    pub fn period(&self) -> f64 {
        PI / self.r as f64
    }

    /// Half-period `π/(2R)`: the length of each linear tooth flank.
    pub fn flank(&self) -> f64 {
        FRAC_PI_2 / self.r as f64
    }

    /// Direct evaluation of `m·dist(θ, (π/R)ℤ)`.
    pub fn eval_direct(&self, theta: f64) -> f64 {
        let p = self.period();
        let t = theta.rem_euclid(p);
        self.slope() * t.min(p - t)
    }

    /// Evaluation in flank coordinates `x = θ/(π/(2R))`, consistent with
    /// [`SawtoothParams::next_corner_after`] for very large `R`.
    pub fn eval_flank(&self, theta: f64) -> f64 {
        let x = theta / self.flank();
        let j = x.floor();
        let f = x - j;
        if (j as i64).rem_euclid(2) == 0 {
            self.eps * f
        } else {
            self.eps * (1.0 - f)
        }
    }

    /// Smallest corner `j·π/(2R)` strictly greater than `theta`.
    pub fn next_corner_after(&self, theta: f64) -> f64 {
        let w = self.flank();
        let mut j = (theta / w).floor() + 1.0;
        let mut c = j * w;
        while c <= theta {
            j += 1.0;
            c = j * w;
        }
        c
    }
}

/// Exact piecewise-linear form: `4R` flanks with breakpoints at multiples of
/// `π/(2R)` and values alternating `0`, `ε`.
pub fn make_sawtooth(sp: SawtoothParams) -> PiecewiseLinearPeriodic {
    let count = 4 * sp.r as usize;
    let peak = sp.sup();
    let mut breakpoints: Vec<f64> = (0..=count)
        .map(|j| j as f64 * PI / (2.0 * sp.r as f64))
        .collect();
    breakpoints[count] = TAU;
    let values = (0..=count)
        .map(|j| if j % 2 == 1 { peak } else { 0.0 })
        .collect();
    PiecewiseLinearPeriodic::new(breakpoints, values).expect("sawtooth breakpoints are valid")
}

/// `ŝ(2λR) = (ε/π)·((−1)^λ − 1)/(πλ²)` for `λ ≠ 0`; the mean `ŝ(0)` is
/// `ε/2`. All other frequencies vanish.
pub fn sawtooth_fourier_closed_form(sp: SawtoothParams, lambda: i64) -> Complex64 {
    if lambda == 0 {
        return Complex64::new(sp.eps / 2.0, 0.0);
    }
    let sign = if lambda % 2 == 0 { 1.0 } else { -1.0 };
    let l2 = (lambda as f64) * (lambda as f64);
    Complex64::new(sp.eps / PI * (sign - 1.0) / (PI * l2), 0.0)
}

/// Bound on `Σ_{|λ|>Λ} |ŝ(2λR)|` from `|ŝ(2λR)| ≤ C₂ε/λ²` and
/// `Σ_{λ>Λ} 1/λ² < 1/Λ`.
pub fn l1_tail_bound(sp: SawtoothParams, max_lambda: u64) -> f64 {
    assert!(max_lambda >= 1, "max_lambda must be at least 1");
    2.0 * C2 * sp.eps / max_lambda as f64
}

/// Closed-form sawtooth series for `|λ| ≤ max_lambda`, with its tail bound.
pub fn sawtooth_series(sp: SawtoothParams, max_lambda: u64) -> CertifiedSeries {
    let two_r = 2 * sp.r as i64;
    let lmax = max_lambda as i64;
    let series = TrigSeries::from_pairs(
        (-lmax..=lmax).map(|l| (l * two_r, sawtooth_fourier_closed_form(sp, l))),
    );
    CertifiedSeries {
        series,
        l1_tail: l1_tail_bound(sp, max_lambda),
    }
}
