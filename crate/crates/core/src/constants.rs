//! Absolute constants of the density construction.
//!
//! * `C₁ = 1 + π/√6` bounds `Σ|Û(k)|` by `C₁·ε` via Cauchy–Schwarz and
//!   `Σ_{k≠0} 1/k² = π²/3`.
//! * `C₂ = 2/π²` is the largest `|ŝ(2λR)|·λ²/ε`, attained at odd `λ`.
//! * `L = 1 + 2·C₂·ζ(2) = 5/3` bounds `Σ|ŝ(k)|/ε` (the mean `ε/2 < ε`
//!   contributes the 1).
//! * `K = 2 + L` bounds `(‖s‖∞ + ‖s̃‖∞)/ε` since `‖s‖∞ = ε < 2ε`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub const C1: f64 = 1.0 + PI / 2.449_489_742_783_178; // √6
pub const C2: f64 = 2.0 / (PI * PI);

/// `ζ(2) = π²/6`.
pub const ZETA2: f64 = PI * PI / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

impl Constants {
    pub fn derive() -> Self {
        let c1 = 1.0 + PI / 6f64.sqrt();
        let c2 = C2;
        let l = 1.0 + 2.0 * c2 * ZETA2;
        Self { c1, c2, l, k: 2.0 + l }
    }

    /// `2C₁ + K`, the factor in `‖f − h‖∞ < (2C₁ + K)·ε`.
    pub fn density_factor(&self) -> f64 {
        2.0 * self.c1 + self.k
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::derive()
    }
}
