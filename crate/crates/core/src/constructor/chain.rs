use serde::{Deserialize, Serialize};

use super::stages::{assemble, construct_certified, perturb_stage, Parts};
use super::{CertificateSummary, ConstructOptions, ConstructionReport, LevelSchedule};
use crate::boundary_pl::LayeredPl;
use crate::error::{DiscError, Result};
use crate::nd_verifier::{dn_margin, verify_pl};
use crate::trig_series::{CertifiedSeries, TrigSeries};

/// Below this an eps carries no meaningful float64 information.
const EPS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainLevel {
    pub n: u32,
    pub eps_requested: f64,
    pub eps_used: f64,
    /// Smallest margin over the earlier levels before this step.
    pub margin_before: Option<f64>,
    pub fh_bound: f64,
    /// `Σ fh_bound` over this and all earlier levels.
    pub partial_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOutcome {
    pub h: TrigSeries,
    /// Sup-norm bound on `h` minus its stored truncation.
    pub h_tail: f64,
    /// Exact `Re h|_𝕋`.
    pub final_u: LayeredPl,
    pub levels: Vec<ChainLevel>,
    /// Verification of `final_u` at every scheduled level.
    pub certificates: Vec<CertificateSummary>,
    pub reports: Vec<ConstructionReport>,
}

/// Iterated construction over a schedule of levels.
///
/// The first level runs the full construction. Each later level adds a
/// finer sawtooth to the current exact real part, with eps shrunk below
/// half the smallest robust margin of all earlier levels, so that their
/// witnesses survive: the real part changes by exactly `‖s‖∞ = eps`.
pub fn chain_construct(f: &TrigSeries, schedule: &LevelSchedule, opts: &ConstructOptions) -> Result<ChainOutcome> {
    let levels = schedule.levels();
    let (n1, eps1) = levels[0];
    let (first, _) = construct_certified(f, eps1, n1, opts)?;
    let mut log = vec![ChainLevel {
        n: n1,
        eps_requested: eps1,
        eps_used: eps1,
        margin_before: None,
        fh_bound: first.bounds.fh_bound,
        partial_sum: first.bounds.fh_bound,
    }];
    let mut reports = vec![first];

    for (k, &(n, eps_requested)) in levels.iter().enumerate().skip(1) {
        let prev = reports.last().expect("nonempty");
        let u = prev.u1.clone();
        let h = prev.h.clone();
        let mut margin = f64::INFINITY;
        for &(nj, _) in &levels[..k] {
            margin = margin.min(dn_margin(&u, nj)?);
        }
        let stall = |reason: String| DiscError::ChainStalled {
            achieved: k,
            requested: levels.len(),
            reason,
        };
        if margin <= 0.0 {
            return Err(stall(format!("earlier levels have no positive margin ({margin:e})")));
        }
        let eps = eps_requested.min(0.5 * margin * (1.0 - 1e-9));
        if eps < EPS_FLOOR {
            return Err(stall(format!("required eps {eps:e} is below {EPS_FLOOR:e}")));
        }
        let p = perturb_stage(&h, &u, eps, n, opts).map_err(|e| stall(e.to_string()))?;
        let (report, _) = assemble(
            Parts {
                input_f: h.clone(),
                eps,
                n,
                nodes: u.base.segment_count(),
                u0: u,
                u_res: CertifiedSeries::exact(TrigSeries::new()),
                v_res: CertifiedSeries::exact(TrigSeries::new()),
                g: h,
                u_trunc: 0,
                prior_h_tail: prev.bounds.h_tail,
            },
            p,
        )?;
        let partial = log.last().expect("nonempty").partial_sum + report.bounds.fh_bound;
        log.push(ChainLevel {
            n,
            eps_requested,
            eps_used: eps,
            margin_before: Some(margin),
            fh_bound: report.bounds.fh_bound,
            partial_sum: partial,
        });
        reports.push(report);
    }

    let last = reports.last().expect("nonempty");
    let final_u = last.u1.clone();
    let mut certificates = Vec::with_capacity(levels.len());
    for &(n, _) in levels {
        let cert = verify_pl(&final_u, n)?;
        if !cert.passes() {
            return Err(DiscError::Certificate(format!(
                "final function fails level {n} (min surplus {})",
                cert.min_surplus
            )));
        }
        certificates.push((&cert).into());
    }
    Ok(ChainOutcome {
        h: last.h.clone(),
        h_tail: last.bounds.h_tail,
        final_u,
        levels: log,
        certificates,
        reports,
    })
}
