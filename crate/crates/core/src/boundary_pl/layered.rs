use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{make_sawtooth, PiecewiseLinearPeriodic, SawtoothParams};

/// Read access shared by explicit and layered piecewise-linear functions.
///
/// Arguments are absolute angles: `next_breakpoint_after` may return values
/// past `2π`, and `value_at` must be linear between the breakpoints it
/// reports.
pub trait PlFunction: Sync {
    fn value_at(&self, t: f64) -> f64;

    /// Smallest breakpoint strictly greater than `t`.
    fn next_breakpoint_after(&self, t: f64) -> f64;

    /// Breakpoints in `[0, 2π)` to use as probe angles, omitting any family
    /// that would push the total past `cap`.
    fn probe_breakpoints(&self, cap: usize) -> Vec<f64>;

    /// Upper bound on `|u'|`.
    fn slope_bound(&self) -> f64;
}

impl PlFunction for PiecewiseLinearPeriodic {
    fn value_at(&self, t: f64) -> f64 {
        self.eval(t)
    }

    fn next_breakpoint_after(&self, t: f64) -> f64 {
        let turns = (t / TAU).floor();
        let base = turns * TAU;
        let local = t - base;
        let bps = self.breakpoints();
        let mut idx = bps.partition_point(|&b| b <= local);
        loop {
            let cand = if idx < bps.len() {
                base + bps[idx]
            } else {
                base + TAU + bps[idx - bps.len() + 1]
            };
            if cand > t {
                return cand;
            }
            idx += 1;
        }
    }

    fn probe_breakpoints(&self, cap: usize) -> Vec<f64> {
        let bps = self.breakpoints();
        if bps.len() - 1 > cap {
            return Vec::new();
        }
        bps[..bps.len() - 1].to_vec()
    }

    fn slope_bound(&self) -> f64 {
        self.max_abs_slope()
    }
}

/// An explicit piecewise-linear base plus sawtooth layers kept in closed
/// form, so that very fine teeth never need a breakpoint table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredPl {
    pub base: PiecewiseLinearPeriodic,
    #[serde(default)]
    pub layers: Vec<SawtoothParams>,
}

impl From<PiecewiseLinearPeriodic> for LayeredPl {
    fn from(base: PiecewiseLinearPeriodic) -> Self {
        Self {
            base,
            layers: Vec::new(),
        }
    }
}

impl LayeredPl {
    pub fn with_layer(&self, sp: SawtoothParams) -> Self {
        let mut out = self.clone();
        out.layers.push(sp);
        out
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.value_at(theta)
    }

    /// Breakpoints per period counting every layer corner, so coinciding
    /// corners are counted more than once.
    pub fn breakpoint_count(&self) -> u64 {
        self.base.segment_count() as u64 + self.layers.iter().map(|sp| 4 * sp.r).sum::<u64>()
    }

    /// Merged breakpoint table, or `None` when it would exceed `limit`.
    pub fn to_explicit(&self, limit: u64) -> Option<PiecewiseLinearPeriodic> {
        if self.breakpoint_count() > limit {
            return None;
        }
        Some(
            self.layers
                .iter()
                .fold(self.base.clone(), |acc, &sp| acc.add(&make_sawtooth(sp))),
        )
    }

    pub fn mean(&self) -> f64 {
        self.base.mean() + self.layers.iter().map(|sp| sp.eps / 2.0).sum::<f64>()
    }
}

impl PlFunction for LayeredPl {
    fn value_at(&self, t: f64) -> f64 {
        self.base.eval(t) + self.layers.iter().map(|sp| sp.eval_flank(t)).sum::<f64>()
    }

    fn next_breakpoint_after(&self, t: f64) -> f64 {
        self.layers
            .iter()
            .map(|sp| sp.next_corner_after(t))
            .fold(self.base.next_breakpoint_after(t), f64::min)
    }

    fn probe_breakpoints(&self, cap: usize) -> Vec<f64> {
        let mut out = self.base.probe_breakpoints(cap);
        let mut layers: Vec<&SawtoothParams> = self.layers.iter().collect();
        layers.sort_by_key(|sp| sp.r);
        for sp in layers {
            let count = 4 * sp.r as usize;
            if out.len() + count > cap {
                break;
            }
            let w = sp.flank();
            out.extend((0..count).map(|j| j as f64 * w));
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn slope_bound(&self) -> f64 {
        self.base.max_abs_slope() + self.layers.iter().map(|sp| sp.slope()).sum::<f64>()
    }
}
