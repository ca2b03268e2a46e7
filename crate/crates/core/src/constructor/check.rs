use serde::{Deserialize, Serialize};

use super::ConstructionReport;
use crate::boundary_pl::PlFunction;
use crate::constants::Constants;
use crate::error::{DiscError, Result};
use crate::nd_verifier::{verify_pl, MembershipCertificate};
use crate::trig_series::uniform_angles;

/// Largest observed value on a grid against its certified bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenseCheck {
    pub grid: usize,
    pub observed: f64,
    pub bound: f64,
}

impl DenseCheck {
    pub fn passes(&self) -> bool {
        self.observed <= self.bound
    }
}

fn rounding_slack(report: &ConstructionReport) -> f64 {
    1e-12 * (1.0 + report.h.l1_norm() + report.input_f.l1_norm())
}

/// `max |Re h(θ) − u1(θ)|` for the stored truncation of `h`, against the
/// truncation bound `h_tail`.
pub fn dense_re_check(report: &ConstructionReport, grid: usize) -> Result<DenseCheck> {
    if grid == 0 {
        return Err(DiscError::InvalidParameter("grid must be positive".into()));
    }
    let h = report.h.sample_uniform(grid);
    let observed = uniform_angles(grid)
        .zip(&h)
        .map(|(t, c)| (c.re - report.u1.value_at(t)).abs())
        .fold(0.0, f64::max);
    Ok(DenseCheck {
        grid,
        observed,
        bound: report.bounds.h_tail + rounding_slack(report),
    })
}

/// Certified grid maximum of `|f − h|` against `fh_bound`.
///
/// The real part `Re f − u1` is evaluated exactly. The imaginary part comes
/// from the stored truncations and is widened by the tails of `U` and `s`,
/// which are all that separate it from the exact difference.
pub fn dense_fh_check(report: &ConstructionReport, grid: usize) -> Result<DenseCheck> {
    if grid == 0 {
        return Err(DiscError::InvalidParameter("grid must be positive".into()));
    }
    let f = report.input_f.sample_uniform(grid);
    let h = report.h.sample_uniform(grid);
    let widen = report.bounds.tail_u + report.bounds.tail_s + rounding_slack(report);
    let prior_exact = report.bounds.f_tail == 0.0;
    let observed = uniform_angles(grid)
        .zip(f.iter().zip(&h))
        .map(|(t, (fv, hv))| {
            // Re f is the polynomial itself, or for later chain levels the
            // previous exact real part u0.
            let re_f = if prior_exact { fv.re } else { report.u0.value_at(t) };
            let re = re_f - report.u1.value_at(t);
            let im = (fv - hv).im.abs() + widen;
            re.hypot(im)
        })
        .fold(0.0, f64::max);
    Ok(DenseCheck {
        grid,
        observed,
        bound: report.bounds.fh_bound,
    })
}

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(DiscError::Certificate(what()))
    }
}

/// Re-derives the structural invariants of a report and returns the
/// membership certificate of `u1` at level `n`.
pub fn verify_report(report: &ConstructionReport) -> Result<MembershipCertificate> {
    let c = Constants::derive();
    let b = &report.bounds;
    let close = |a: f64, e: f64| (a - e).abs() <= 1e-12 * e.abs().max(1.0);
    require(
        close(report.constants.c1, c.c1) && close(report.constants.k, c.k) && close(report.constants.l, c.l),
        || "recorded constants differ from their derivation".into(),
    )?;
    for (name, v) in [
        ("l1_U", b.l1_u),
        ("l1_V", b.l1_v),
        ("l1_s", b.l1_s),
        ("l1_s_tilde", b.l1_s_tilde),
        ("fg_bound", b.fg_bound),
        ("gh_bound", b.gh_bound),
        ("fh_bound", b.fh_bound),
        ("h_tail", b.h_tail),
    ] {
        require(v >= 0.0 && v.is_finite(), || format!("{name} = {v} is not a nonnegative real"))?;
    }
    require(b.fh_bound <= b.fg_bound + b.gh_bound + 1e-15, || "fh_bound exceeds fg_bound + gh_bound".into())?;
    require(b.l1_u < c.c1 * report.eps || b.fg_bound == 0.0, || {
        format!("l1(U) = {:e} is not below C1·eps", b.l1_u)
    })?;
    require(close(b.l1_u, report.u_series.l1_norm() + b.tail_u), || {
        "l1_U does not match the stored U series".into()
    })?;
    require(report.input_f.is_analytic_type() && report.g.is_analytic_type() && report.h.is_analytic_type(), || {
        "f, g and h must be analytic type".into()
    })?;
    require(close(report.m, 2.0 * report.r as f64 * report.eps / std::f64::consts::PI), || {
        "m differs from 2Rε/π".into()
    })?;
    let slope = report.u0.slope_bound();
    require(report.m > report.n as f64 + slope + 1.0, || {
        format!("m = {} does not exceed n + max|ℓ| + 1 = {}", report.m, report.n as f64 + slope + 1.0)
    })?;
    require(report.u1 == report.u0.with_layer(report.sawtooth), || "u1 is not u0 plus the sawtooth".into())?;
    let cert = verify_pl(&report.u1, report.n)?;
    require(cert.passes(), || format!("u1 fails at level {} (min surplus {})", report.n, cert.min_surplus))?;
    Ok(cert)
}
