use serde::{Deserialize, Serialize};

use super::stages::{check_eps, construct_certified};
use super::{CertificateSummary, ConstructOptions, ConstructionReport, NodePolicy};
use crate::constants::Constants;
use crate::error::{DiscError, Result};
use crate::nd_verifier::{verify_pl_robust, MembershipCertificate};
use crate::trig_series::TrigSeries;

/// Smallest second-stage eps worth attempting.
const EPS_FLOOR: f64 = 1e-12;
/// Attempts at shrinking the first-stage truncation tail below the margin.
const TAIL_RETRIES: usize = 4;

/// Output of [`construct_both_parts`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BothPartsReport {
    pub eps: f64,
    pub n: u32,
    /// Final `h`, truncated; `Re h` and `Im h` both carry witnesses.
    pub h: TrigSeries,
    /// `‖f − h‖∞ ≤ fh_bound`.
    pub fh_bound: f64,
    /// Sup-norm bound on `h` minus its stored truncation.
    pub h_tail: f64,
    /// Robust margin of the first real part at level `n`.
    pub margin: f64,
    pub eps2: f64,
    /// Sup-norm bound on `Re h − u1` of the first stage.
    pub re_shift: f64,
    pub re_certificate: CertificateSummary,
    pub im_certificate: CertificateSummary,
    /// `construct(f, eps, n)`.
    pub first: ConstructionReport,
    /// `construct(−i·h₁, eps2, n)`; `h = i·h₂`.
    pub second: ConstructionReport,
    #[serde(skip)]
    pub re_witnesses: Option<MembershipCertificate>,
    #[serde(skip)]
    pub im_witnesses: Option<MembershipCertificate>,
}

/// `h` with both `Re h|_𝕋` and `Im h|_𝕋` in `Dₙ`.
///
/// A first construction makes `Re h₁` steep. The rotated function `−i·h₁`
/// is then perturbed by a second construction with `eps₂` chosen so that
/// the resulting change of `Re`, at most `(2C₁ + K)·eps₂` plus the first
/// truncation tail, stays below the robust margin of `Re h₁`. Rotating back
/// gives `h` whose imaginary part is the second exact piecewise-linear real
/// part.
pub fn construct_both_parts(
    f: &TrigSeries,
    eps: f64,
    n: u32,
    opts: &ConstructOptions,
) -> Result<BothPartsReport> {
    check_eps(eps)?;
    let mut opts1 = *opts;
    let mut attempt = 0;
    let (first, robust) = loop {
        let (first, _) = construct_certified(f, eps, n, &opts1)?;
        let robust = verify_pl_robust(&first.u1, n)?;
        let margin = robust.margin();
        if margin <= 0.0 {
            return Err(DiscError::Certificate(format!(
                "first stage real part has no positive margin at level {n}"
            )));
        }
        // The first truncation tail eats into the margin; make it small.
        let tail = first.bounds.h_tail;
        attempt += 1;
        if tail <= margin / 8.0 || attempt > TAIL_RETRIES {
            break (first, robust);
        }
        opts1.tail_fraction *= 0.9 * margin / (8.0 * tail);
    };
    let margin = robust.margin();
    let factor = Constants::derive().density_factor();
    let eps2 = 0.5 * (margin - first.bounds.h_tail) / factor;
    if !(eps2 >= EPS_FLOOR) {
        return Err(DiscError::Certificate(format!(
            "margin {margin:e} admits no usable second eps; try a larger eps"
        )));
    }

    let opts2 = opts.with_node_policy(NodePolicy::L1Certificate);
    let (second, im_cert) = construct_certified(&first.h.mul_neg_i(), eps2, n, &opts2)?;
    let re_shift = second.bounds.fh_bound + first.bounds.h_tail;
    let re_cert = robust.degraded(re_shift);
    if !re_cert.passes() {
        return Err(DiscError::Certificate(format!(
            "second perturbation {re_shift:e} exceeds the margin {margin:e}"
        )));
    }
    if !im_cert.passes() {
        return Err(DiscError::Certificate(format!(
            "imaginary part fails at level {n} (min surplus {})",
            im_cert.min_surplus
        )));
    }
    Ok(BothPartsReport {
        eps,
        n,
        h: second.h.mul_i(),
        fh_bound: first.bounds.fh_bound + second.bounds.fh_bound,
        h_tail: second.bounds.h_tail,
        margin,
        eps2,
        re_shift,
        re_certificate: (&re_cert).into(),
        im_certificate: (&im_cert).into(),
        first,
        second,
        re_witnesses: Some(re_cert),
        im_witnesses: Some(im_cert),
    })
}
