//! Periodic piecewise-linear functions and their Fourier coefficients.

mod fourier;
mod layered;
mod sawtooth;
mod smooth;

use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{DiscError, Result};

pub use fourier::{
    interpolant_fourier, interpolation_residual, interpolation_residual_l1,
    interpolation_residual_tail, pl_fourier,
    pl_fourier_at, pl_fourier_certified,
};
pub use layered::{LayeredPl, PlFunction};
pub use sawtooth::{
    l1_tail_bound, make_sawtooth, sawtooth_fourier_closed_form, sawtooth_series, SawtoothParams,
};
pub use smooth::{approximate_c1, approximate_c1_min_nodes, SmoothPeriodicFn, PROBE_POINTS};

/// Tolerance used to merge coincident breakpoints.
pub const MERGE_TOL: f64 = 1e-12;

/// A continuous `2π`-periodic function, linear between consecutive
/// breakpoints `0 = t₀ < … < t_N = 2π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinearPeriodic {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct PlJson {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl<'de> Deserialize<'de> for PiecewiseLinearPeriodic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PlJson::deserialize(d)?;
        Self::new(raw.breakpoints, raw.values).map_err(serde::de::Error::custom)
    }
}

impl PiecewiseLinearPeriodic {
    /// Validates and builds. The last breakpoint may differ from `2π` and the
    /// last value from the first by rounding noise (`1e-12`); both are snapped.
    pub fn new(mut breakpoints: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        let bad = |m: String| Err(DiscError::InvalidPiecewise(m));
        if breakpoints.len() != values.len() {
            return bad(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            ));
        }
        if breakpoints.len() < 2 {
            return bad("need at least one segment".into());
        }
        if breakpoints.iter().chain(&values).any(|x| !x.is_finite()) {
            return bad("non-finite breakpoint or value".into());
        }
        if breakpoints[0] != 0.0 {
            return bad(format!("first breakpoint must be 0, got {}", breakpoints[0]));
        }
        let last = breakpoints.len() - 1;
        if (breakpoints[last] - TAU).abs() > MERGE_TOL {
            return bad(format!("last breakpoint must be 2π, got {}", breakpoints[last]));
        }
        breakpoints[last] = TAU;
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return bad("breakpoints must be strictly increasing".into());
        }
        let scale = values[0].abs().max(values[last].abs()).max(1.0);
        if (values[last] - values[0]).abs() > MERGE_TOL * scale {
            return bad(format!(
                "values at 0 and 2π differ: {} vs {}",
                values[0], values[last]
            ));
        }
        values[last] = values[0];
        Ok(Self { breakpoints, values })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            breakpoints: vec![0.0, TAU],
            values: vec![c, c],
        }
    }

    /// Interpolant of `samples[j]` at the uniform nodes `2πj/N`, `N = samples.len()`.
    pub fn uniform(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(DiscError::InvalidPiecewise("no samples".into()));
        }
        let breakpoints = (0..=n).map(|j| TAU * j as f64 / n as f64).collect();
        let mut values = samples.to_vec();
        values.push(samples[0]);
        Self::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of linear pieces `N`.
    pub fn segment_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Index `j` of the piece `[t_j, t_{j+1})` containing `t ∈ [0, 2π)`.
    pub fn segment_of(&self, t: f64) -> usize {
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        idx.saturating_sub(1).min(self.segment_count() - 1)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(TAU);
        let j = self.segment_of(t);
        let (a, b) = (self.breakpoints[j], self.breakpoints[j + 1]);
        let (va, vb) = (self.values[j], self.values[j + 1]);
        va + (vb - va) * ((t - a) / (b - a))
    }

    /// Slope `ℓ_j` of piece `j` (0-based).
    pub fn slope(&self, j: usize) -> f64 {
        (self.values[j + 1] - self.values[j]) / (self.breakpoints[j + 1] - self.breakpoints[j])
    }

    pub fn slopes(&self) -> Vec<f64> {
        (0..self.segment_count()).map(|j| self.slope(j)).collect()
    }

    pub fn max_abs_slope(&self) -> f64 {
        (0..self.segment_count())
            .map(|j| self.slope(j).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ |ℓ_{j+1} − ℓ_j|` around the circle: the total mass of the second
    /// derivative, which controls the Fourier decay `|ĉ(k)| ≤ V/(2πk²)`.
    pub fn slope_variation(&self) -> f64 {
        let n = self.segment_count();
        (0..n)
            .map(|j| (self.slope((j + 1) % n) - self.slope(j)).abs())
            .sum()
    }

    /// Mean over the period, exact for piecewise-linear data.
    pub fn mean(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| (t[1] - t[0]) * (v[0] + v[1]) * 0.5)
            .sum::<f64>()
            / TAU
    }

    /// Exact pointwise sum. Breakpoints closer than [`MERGE_TOL`] are merged.
    pub fn add(&self, other: &Self) -> Self {
        let mut merged: Vec<f64> = Vec::with_capacity(self.breakpoints.len() + other.breakpoints.len());
        let (mut i, mut j) = (0, 0);
        while i < self.breakpoints.len() || j < other.breakpoints.len() {
            let next = match (self.breakpoints.get(i), other.breakpoints.get(j)) {
                (Some(&a), Some(&b)) if a <= b => {
                    i += 1;
                    a
                }
                (Some(_), Some(&b)) => {
                    j += 1;
                    b
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            match merged.last() {
                Some(&last) if next - last <= MERGE_TOL => {}
                _ => merged.push(next),
            }
        }
        // the final 2π may have been merged into a near neighbour
        let last = merged.len() - 1;
        merged[last] = TAU;
        if merged.len() >= 2 && merged[last - 1] >= TAU {
            merged.remove(last - 1);
        }
        let mut values: Vec<f64> = merged
            .iter()
            .map(|&t| self.eval_in_period(t) + other.eval_in_period(t))
            .collect();
        let n = values.len() - 1;
        values[n] = values[0];
        Self {
            breakpoints: merged,
            values,
        }
    }

    /// Evaluation without reducing mod 2π, so `t = 2π` uses the last piece.
    fn eval_in_period(&self, t: f64) -> f64 {
        if t >= TAU {
            return self.values[self.values.len() - 1];
        }
        self.eval(t)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Writes `theta,value` rows over `grid` uniform angles, `2π` excluded.
    pub fn write_csv<W: Write>(&self, grid: usize, mut out: W) -> std::io::Result<()> {
        writeln!(out, "theta,value")?;
        for j in 0..grid {
            let t = TAU * j as f64 / grid as f64;
            writeln!(out, "{},{}", t, self.eval(t))?;
        }
        Ok(())
    }
}
