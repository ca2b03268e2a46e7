//! The density construction: an analytic polynomial `f` is moved to `g`
//! whose boundary real part is piecewise linear, then to `h = g + s + i·s̃`
//! where `s` is a steep sawtooth. Every distance is certified by `ℓ¹`
//! norms of the Fourier coefficients plus truncation tails.

mod both;
mod chain;
mod check;
mod stages;

use serde::{Deserialize, Serialize};

use crate::boundary_pl::{LayeredPl, SawtoothParams};
use crate::constants::Constants;
use crate::error::{DiscError, Result};
use crate::trig_series::TrigSeries;

pub use both::{construct_both_parts, BothPartsReport};
pub use chain::{chain_construct, ChainLevel, ChainOutcome};
pub use check::{dense_fh_check, dense_re_check, verify_report, DenseCheck};
pub use stages::{choose_r, construct, construct_with, perturb_stage, smooth_to_pl_stage, PerturbStage, SmoothStage};

/// Environment variable overriding [`ConstructOptions::max_trunc`].
pub const MAX_TRUNC_ENV: &str = "DISCFORGE_MAX_TRUNC";

/// How the node count `N` of the uniform interpolant `u₀` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NodePolicy {
    /// Dense-sampled moduli of continuity of `u` and `u′` below `eps/2`,
    /// so that `‖u − u₀‖∞ < eps` and every piece slope is within `eps` of `u′`.
    #[default]
    Modulus,
    /// Smallest power of two with the exact residual norm `ℓ¹(u − u₀) < eps`.
    /// Suited to inputs of very high degree where `u′` varies on tiny scales.
    L1Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstructOptions {
    pub node_policy: NodePolicy,
    /// Every truncation tail is pushed below `tail_fraction·eps`.
    pub tail_fraction: f64,
    /// Smallest truncation index tried.
    pub min_trunc: u64,
    /// Largest truncation index allowed.
    pub max_trunc: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        Self {
            node_policy: NodePolicy::Modulus,
            tail_fraction: 0.01,
            min_trunc: 1 << 14,
            max_trunc: 1 << 48,
        }
    }
}

impl ConstructOptions {
    /// Defaults with `max_trunc` taken from `DISCFORGE_MAX_TRUNC` when set.
    pub fn from_env() -> Result<Self> {
        let mut out = Self::default();
        if let Ok(v) = std::env::var(MAX_TRUNC_ENV) {
            out.max_trunc = v.trim().parse().map_err(|_| {
                DiscError::InvalidParameter(format!("{MAX_TRUNC_ENV} must be a positive integer, got {v:?}"))
            })?;
        }
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_fraction > 0.0 && self.tail_fraction < 1.0) {
            return Err(DiscError::InvalidParameter(format!(
                "tail_fraction must lie in (0, 1), got {}",
                self.tail_fraction
            )));
        }
        if self.min_trunc == 0 || self.max_trunc < self.min_trunc {
            return Err(DiscError::InvalidParameter(format!(
                "truncation range {}..={} is empty",
                self.min_trunc, self.max_trunc
            )));
        }
        Ok(())
    }

    pub fn with_node_policy(mut self, policy: NodePolicy) -> Self {
        self.node_policy = policy;
        self
    }

    pub fn with_tail_fraction(mut self, fraction: f64) -> Self {
        self.tail_fraction = fraction;
        self
    }
}

/// Levels `(n, eps)` with strictly increasing `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSchedule {
    levels: Vec<(u32, f64)>,
}

impl LevelSchedule {
    pub fn new(levels: Vec<(u32, f64)>) -> Result<Self> {
        if levels.is_empty() {
            return Err(DiscError::InvalidParameter("schedule must not be empty".into()));
        }
        for (i, &(n, eps)) in levels.iter().enumerate() {
            if n == 0 {
                return Err(DiscError::InvalidParameter("schedule levels must be positive".into()));
            }
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(DiscError::InvalidParameter(format!("eps must be positive, got {eps}")));
            }
            if i > 0 && levels[i - 1].0 >= n {
                return Err(DiscError::InvalidParameter(
                    "schedule levels must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self { levels })
    }

    /// Parses `"n1:eps1,n2:eps2,..."`.
    pub fn parse(text: &str) -> Result<Self> {
        let levels = text
            .split(',')
            .map(|item| {
                let (n, eps) = item.trim().split_once(':').ok_or_else(|| {
                    DiscError::InvalidParameter(format!("schedule entry {item:?} is not n:eps"))
                })?;
                let n = n.trim().parse::<u32>().map_err(|_| {
                    DiscError::InvalidParameter(format!("schedule level {n:?} is not a positive integer"))
                })?;
                let eps = eps.trim().parse::<f64>().map_err(|_| {
                    DiscError::InvalidParameter(format!("schedule eps {eps:?} is not a number"))
                })?;
                Ok((n, eps))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels)
    }

    pub fn levels(&self) -> &[(u32, f64)] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Certified bounds of one construction. Every `l1_*` entry includes its
/// truncation tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(rename = "l1_U")]
    pub l1_u: f64,
    #[serde(rename = "l1_V")]
    pub l1_v: f64,
    pub l1_s: f64,
    pub l1_s_tilde: f64,
    #[serde(rename = "tail_U")]
    pub tail_u: f64,
    pub tail_s: f64,
    /// `‖s‖∞`, exact.
    pub sup_s: f64,
    pub fg_bound: f64,
    pub gh_bound: f64,
    pub fh_bound: f64,
    /// Sup-norm bound on the difference between the input and its stored
    /// truncation; zero when the input is an exact polynomial.
    #[serde(default)]
    pub f_tail: f64,
    /// Sup-norm bound on the difference between `h` and its stored
    /// truncation.
    pub h_tail: f64,
}

/// Truncation indices actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// `|k|` cut-off for `U` and `V`.
    #[serde(rename = "U")]
    pub u: u64,
    /// Number `Λ` of sawtooth harmonics kept on each side.
    pub s_lambda: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub input_f: TrigSeries,
    pub eps: f64,
    pub n: u32,
    pub u0: LayeredPl,
    #[serde(rename = "N")]
    pub nodes: usize,
    #[serde(rename = "U_series")]
    pub u_series: TrigSeries,
    #[serde(rename = "V_series")]
    pub v_series: TrigSeries,
    pub g: TrigSeries,
    pub sawtooth: SawtoothParams,
    #[serde(rename = "R")]
    pub r: u64,
    pub m: f64,
    pub s_series: TrigSeries,
    pub s_tilde_series: TrigSeries,
    pub h: TrigSeries,
    /// `Re h` on the circle, exactly.
    pub u1: LayeredPl,
    pub bounds: Bounds,
    pub constants: Constants,
    pub truncation: Truncation,
    pub max_slope_u0: f64,
    /// Smallest `quotient − n` over the probes of `verify_pl(u1, n)`.
    pub min_surplus: f64,
}

/// Size of a certificate without its witness list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub n: u32,
    pub min_surplus: f64,
    pub probe_count: usize,
    pub min_gap: f64,
    pub passes: bool,
}

impl From<&crate::nd_verifier::MembershipCertificate> for CertificateSummary {
    fn from(c: &crate::nd_verifier::MembershipCertificate) -> Self {
        Self {
            n: c.level_n,
            min_surplus: c.min_surplus,
            probe_count: c.probe_count,
            min_gap: c.min_gap(),
            passes: c.passes(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_parsing() {
        let s = LevelSchedule::parse("1:.1, 2:0.05,3:2.5e-2").unwrap();
        assert_eq!(s.levels(), &[(1, 0.1), (2, 0.05), (3, 0.025)]);
        assert!(LevelSchedule::parse("").is_err());
        assert!(LevelSchedule::parse("2:.1,1:.1").is_err());
        assert!(LevelSchedule::parse("1:0").is_err());
        assert!(LevelSchedule::parse("1-0.1").is_err());
        assert!(LevelSchedule::new(vec![]).is_err());
    }

    #[test]
    fn option_validation() {
        assert!(ConstructOptions::default().validate().is_ok());
        assert!(ConstructOptions::default().with_tail_fraction(0.0).validate().is_err());
        let o = ConstructOptions {
            max_trunc: 1,
            ..ConstructOptions::default()
        };
        assert!(o.validate().is_err());
    }
}
