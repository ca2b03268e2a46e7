//! Uniform piecewise-linear approximation of `C¹` periodic functions.

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use super::PiecewiseLinearPeriodic;
use crate::error::{DiscError, Result};
use crate::trig_series::{TrigSeries, REAL_TOL};

/// Probe grid for the empirical moduli of continuity.
pub const PROBE_POINTS: usize = 1 << 20;

const MAX_NODES: usize = 1 << 24;
const MAX_PROBES: usize = 1 << 26;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A `2π`-periodic `C¹` function given by its value and derivative.
#[derive(Clone)]
pub struct SmoothPeriodicFn {
    value: RealFn,
    derivative: RealFn,
}

impl fmt::Debug for SmoothPeriodicFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SmoothPeriodicFn")
    }
}

impl SmoothPeriodicFn {
    /// Spot-checks periodicity of both callables to `1e-12`.
    pub fn new<F, G>(value: F, derivative: G) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let me = Self {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
        };
        for t in [0.0, 0.37, 1.9, 3.3, 5.05] {
            let (a, b) = (me.value(t), me.value(t + TAU));
            let (da, db) = (me.derivative(t), me.derivative(t + TAU));
            let scale = 1.0 + a.abs().max(da.abs());
            if (a - b).abs() > 1e-12 * scale || (da - db).abs() > 1e-12 * scale {
                return Err(DiscError::InvalidParameter(format!(
                    "function is not 2π-periodic near θ = {t}"
                )));
            }
        }
        Ok(me)
    }

    /// Boundary function of a real-valued trigonometric polynomial.
    pub fn from_series(u: &TrigSeries) -> Result<Self> {
        u.ensure_real_valued(REAL_TOL)?;
        let v = u.clone();
        let d = u.derivative();
        Self::new(move |t| v.eval_boundary(t).re, move |t| d.eval_boundary(t).re)
    }

    pub fn value(&self, theta: f64) -> f64 {
        (self.value)(theta)
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        (self.derivative)(theta)
    }
}

/// Max of `max − min` over every circular window of `width + 1` samples.
fn window_oscillation(samples: &[f64], width: usize) -> f64 {
    let n = samples.len();
    let width = width.min(n);
    let at = |i: usize| samples[i % n];
    let mut hi: VecDeque<usize> = VecDeque::new();
    let mut lo: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for i in 0..n + width {
        while hi.back().is_some_and(|&j| at(j) <= at(i)) {
            hi.pop_back();
        }
        hi.push_back(i);
        while lo.back().is_some_and(|&j| at(j) >= at(i)) {
            lo.pop_back();
        }
        lo.push_back(i);
        if i >= width {
            let start = i - width;
            while hi.front().is_some_and(|&j| j < start) {
                hi.pop_front();
            }
            while lo.front().is_some_and(|&j| j < start) {
                lo.pop_front();
            }
            best = best.max(at(hi[0]) - at(lo[0]));
        }
    }
    best
}

struct Probe {
    value: Vec<f64>,
    derivative: Vec<f64>,
}

impl Probe {
    fn sample(u: &SmoothPeriodicFn, count: usize) -> Self {
        let grid = (0..count).map(|i| TAU * i as f64 / count as f64);
        Self {
            value: grid.clone().map(|t| u.value(t)).collect(),
            derivative: grid.map(|t| u.derivative(t)).collect(),
        }
    }

    fn len(&self) -> usize {
        self.value.len()
    }
}

fn interpolant(u: &SmoothPeriodicFn, nodes: usize) -> PiecewiseLinearPeriodic {
    let breakpoints: Vec<f64> = (0..=nodes).map(|j| TAU * j as f64 / nodes as f64).collect();
    let mut values: Vec<f64> = breakpoints[..nodes].iter().map(|&t| u.value(t)).collect();
    values.push(values[0]);
    PiecewiseLinearPeriodic::new(breakpoints, values).expect("uniform nodes are valid")
}

/// Dense check of `‖u − u₀‖∞ < eps` and `|u′ − ℓ_j| < eps` inside every piece.
fn dense_check(u0: &PiecewiseLinearPeriodic, probe: &Probe, eps: f64) -> bool {
    let count = probe.len();
    let slopes = u0.slopes();
    (0..count).all(|i| {
        let t = TAU * i as f64 / count as f64;
        if (probe.value[i] - u0.eval(t)).abs() >= eps {
            return false;
        }
        let j = u0.segment_of(t);
        let interior = t > u0.breakpoints()[j];
        !interior || (probe.derivative[i] - slopes[j]).abs() < eps
    })
}

/// Uniform piecewise-linear interpolant `u₀` of `u` at `t_j = 2πj/N` with
/// `‖u − u₀‖∞ < eps` and `|u′(x) − ℓ_j| < eps` on each piece.
///
/// `N` is the smallest power of two whose step has empirical moduli of
/// continuity of `u` and `u′` below `eps/2`, confirmed by dense sampling.
pub fn approximate_c1(u: &SmoothPeriodicFn, eps: f64) -> Result<(PiecewiseLinearPeriodic, usize)> {
    approximate_c1_min_nodes(u, eps, 1)
}

/// As [`approximate_c1`] with `N ≥ min_nodes`.
pub fn approximate_c1_min_nodes(
    u: &SmoothPeriodicFn,
    eps: f64,
    min_nodes: usize,
) -> Result<(PiecewiseLinearPeriodic, usize)> {
    approximate_bounded(u, eps, min_nodes, MAX_NODES)
}

fn approximate_bounded(
    u: &SmoothPeriodicFn,
    eps: f64,
    min_nodes: usize,
    max_nodes: usize,
) -> Result<(PiecewiseLinearPeriodic, usize)> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(DiscError::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let mut probe = Probe::sample(u, PROBE_POINTS);
    let mut nodes = min_nodes.max(2).next_power_of_two();
    while nodes <= max_nodes {
        let want = (4 * nodes).clamp(PROBE_POINTS, MAX_PROBES);
        if want > probe.len() {
            probe = Probe::sample(u, want);
        }
        let width = probe.len().div_ceil(nodes);
        if window_oscillation(&probe.value, width) < eps / 2.0
            && window_oscillation(&probe.derivative, width) < eps / 2.0
        {
            let u0 = interpolant(u, nodes);
            if dense_check(&u0, &probe, eps) {
                return Ok((u0, nodes));
            }
        }
        nodes *= 2;
    }
    Err(DiscError::ApproximationFailed { max_nodes })
}
