use std::f64::consts::PI;

use super::{Bounds, ConstructOptions, ConstructionReport, NodePolicy, Truncation};
use crate::boundary_pl::{
    approximate_c1_min_nodes, interpolation_residual, interpolation_residual_l1,
    interpolation_residual_tail, l1_tail_bound, sawtooth_series, LayeredPl, PiecewiseLinearPeriodic,
    PlFunction, SawtoothParams, SmoothPeriodicFn,
};
use crate::conjugator::{analytic_completion_certified, analytic_completion_unchecked, conjugate_certified};
use crate::constants::Constants;
use crate::error::{DiscError, Result};
use crate::nd_verifier::{verify_pl, MembershipCertificate};
use crate::trig_series::{uniform_angles, CertifiedSeries, TrigSeries};

/// Largest node count tried by [`NodePolicy::L1Certificate`].
const MAX_L1_NODES: usize = 1 << 26;
/// Grid for the consistency check `Re g ≈ u₀`.
const RE_CHECK_GRID: usize = 1 << 16;
/// Largest tooth count accepted by the perturbation stage.
const MAX_R: u64 = 1 << 52;

/// Output of the stage replacing `f` by `g` with piecewise-linear real part.
#[derive(Debug, Clone)]
pub struct SmoothStage {
    pub u0: PiecewiseLinearPeriodic,
    pub nodes: usize,
    /// `U = u − u₀`, truncated at `trunc`.
    pub u_res: CertifiedSeries,
    /// `V = Ũ`.
    pub v_res: CertifiedSeries,
    /// `g = f − (U + iV)`.
    pub g: TrigSeries,
    pub fg_bound: f64,
    pub trunc: u64,
}

/// Output of the sawtooth perturbation `h = g + s + i·s̃`.
#[derive(Debug, Clone)]
pub struct PerturbStage {
    pub sawtooth: SawtoothParams,
    pub r: u64,
    pub m: f64,
    pub max_slope: f64,
    pub s: CertifiedSeries,
    pub s_tilde: CertifiedSeries,
    pub lambda: u64,
    pub h: TrigSeries,
    pub u1: LayeredPl,
    pub sup_s: f64,
    pub gh_bound: f64,
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(DiscError::InvalidParameter(format!("eps must be positive, got {eps}")))
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(DiscError::InvalidParameter("n must be a positive integer".into()))
    } else {
        Ok(())
    }
}

fn choose_nodes(u: &TrigSeries, eps: f64, opts: &ConstructOptions) -> Result<(PiecewiseLinearPeriodic, usize)> {
    let min_nodes = 2 * u.max_abs_k() as usize + 1;
    match opts.node_policy {
        NodePolicy::Modulus => approximate_c1_min_nodes(&SmoothPeriodicFn::from_series(u)?, eps, min_nodes),
        NodePolicy::L1Certificate => {
            let budget = eps * (1.0 - opts.tail_fraction);
            let mut nodes = min_nodes.next_power_of_two();
            while interpolation_residual_l1(u, nodes)? >= budget {
                nodes *= 2;
                if nodes > MAX_L1_NODES {
                    return Err(DiscError::ApproximationFailed { max_nodes: MAX_L1_NODES });
                }
            }
            let samples: Vec<f64> = u.sample_uniform(nodes).iter().map(|c| c.re).collect();
            Ok((PiecewiseLinearPeriodic::uniform(&samples)?, nodes))
        }
    }
}

fn doubling_trunc(
    start: u64,
    opts: &ConstructOptions,
    target: f64,
    mut tail_at: impl FnMut(u64) -> Result<f64>,
) -> Result<(u64, f64)> {
    let mut k = start.max(opts.min_trunc).max(1).next_power_of_two();
    loop {
        let tail = tail_at(k)?;
        if tail <= target {
            return Ok((k, tail));
        }
        match k.checked_mul(2) {
            Some(next) if next <= opts.max_trunc => k = next,
            _ => {
                return Err(DiscError::TruncationFailed {
                    ceiling: opts.max_trunc,
                    tail,
                    target,
                })
            }
        }
    }
}

/// Replaces `f` by `g` with `Re g|_𝕋 = u₀` piecewise linear, where `u₀`
/// interpolates `u = Re f|_𝕋` at `N` uniform nodes.
///
/// `U = u − u₀` is obtained in closed form from the coefficients of `u`,
/// `V` is its conjugate and `g = f − (U + iV)`, so that
/// `‖f − g‖∞ ≤ ℓ¹(U) + ℓ¹(V)` with all tails included.
pub fn smooth_to_pl_stage(f: &TrigSeries, eps: f64, opts: &ConstructOptions) -> Result<SmoothStage> {
    check_eps(eps)?;
    f.ensure_analytic()?;
    opts.validate()?;
    let u = f.real_part();
    if u.max_abs_k() == 0 {
        return Ok(SmoothStage {
            u0: PiecewiseLinearPeriodic::constant(u.get(0).re),
            nodes: 1,
            u_res: CertifiedSeries::exact(TrigSeries::new()),
            v_res: CertifiedSeries::exact(TrigSeries::new()),
            g: f.clone(),
            fg_bound: 0.0,
            trunc: 0,
        });
    }
    let (u0, nodes) = choose_nodes(&u, eps, opts)?;
    let (trunc, _) = doubling_trunc(u.max_abs_k(), opts, opts.tail_fraction * eps, |k| {
        interpolation_residual_tail(&u, nodes, k)
    })?;
    let u_res = interpolation_residual(&u, nodes, trunc)?;
    let v_res = conjugate_certified(&u_res)?;
    let g = f.subtract(&analytic_completion_unchecked(&u_res.series));

    let c1 = Constants::derive().c1;
    let l1_u = u_res.l1_bound();
    if !(l1_u < c1 * eps) {
        return Err(DiscError::Certificate(format!(
            "l1(U) + tail = {l1_u:e} is not below C1·eps = {:e}",
            c1 * eps
        )));
    }
    let fg_bound = l1_u + v_res.l1_bound();

    let samples = g.sample_uniform(RE_CHECK_GRID);
    let allowed = u_res.l1_tail + 1e-12 * (1.0 + f.l1_norm() + l1_u);
    let worst = uniform_angles(RE_CHECK_GRID)
        .zip(&samples)
        .map(|(t, c)| (c.re - u0.eval(t)).abs())
        .fold(0.0, f64::max);
    if worst > allowed {
        return Err(DiscError::Certificate(format!(
            "Re g deviates from u0 by {worst:e}, above the certified {allowed:e}"
        )));
    }
    Ok(SmoothStage {
        u0,
        nodes,
        u_res,
        v_res,
        g,
        fg_bound,
        trunc,
    })
}

/// Smallest `R ≥ 1` with `m = 2Rε/π > n + max|ℓ_j| + 1`, and that `m`.
pub fn choose_r(eps: f64, n: u32, slopes: &[f64]) -> (u64, f64) {
    let max = slopes.iter().map(|s| s.abs()).fold(0.0, f64::max);
    choose_r_for(eps, n, max)
}

pub(crate) fn choose_r_for(eps: f64, n: u32, max_slope: f64) -> (u64, f64) {
    let need = n as f64 + max_slope + 1.0;
    let m_of = |r: u64| 2.0 * r as f64 * eps / PI;
    let guess = (need * PI / (2.0 * eps)).floor();
    let mut r = if guess.is_finite() && guess < u64::MAX as f64 {
        (guess as u64).max(1)
    } else {
        u64::MAX
    };
    while r < u64::MAX && m_of(r) <= need {
        r += 1;
    }
    while r > 1 && m_of(r - 1) > need {
        r -= 1;
    }
    (r, m_of(r))
}

/// Adds the sawtooth layer `s` with tooth count chosen by [`choose_r`] to
/// the piecewise-linear real part `u0` of `g`, and `s + i·s̃` to `g`.
pub fn perturb_stage(
    g: &TrigSeries,
    u0: &LayeredPl,
    eps: f64,
    n: u32,
    opts: &ConstructOptions,
) -> Result<PerturbStage> {
    check_eps(eps)?;
    check_n(n)?;
    opts.validate()?;
    let max_slope = u0.slope_bound();
    let (r, m) = choose_r_for(eps, n, max_slope);
    if r > MAX_R {
        return Err(DiscError::InvalidParameter(format!(
            "eps = {eps:e} needs {r} sawtooth teeth, beyond the supported {MAX_R}"
        )));
    }
    let sawtooth = SawtoothParams::new(eps, r)?;
    let (trunc, _) = doubling_trunc(64u64.saturating_mul(r), opts, opts.tail_fraction * eps, |k| {
        Ok(l1_tail_bound(sawtooth, (k / (2 * r)).max(1)))
    })?;
    let lambda = (trunc / (2 * r)).max(1);
    let s = sawtooth_series(sawtooth, lambda);
    let s_tilde = conjugate_certified(&s)?;
    let completion = analytic_completion_certified(&s)?;
    let h = g.add(&completion.series);
    let sup_s = sawtooth.sup();
    let gh_bound = sup_s + s_tilde.l1_bound();
    Ok(PerturbStage {
        sawtooth,
        r,
        m,
        max_slope,
        s,
        s_tilde,
        lambda,
        h,
        u1: u0.with_layer(sawtooth),
        sup_s,
        gh_bound,
    })
}

pub(crate) struct Parts {
    pub input_f: TrigSeries,
    pub eps: f64,
    pub n: u32,
    pub u0: LayeredPl,
    pub nodes: usize,
    pub u_res: CertifiedSeries,
    pub v_res: CertifiedSeries,
    pub g: TrigSeries,
    pub u_trunc: u64,
    pub prior_h_tail: f64,
}

pub(crate) fn assemble(parts: Parts, p: PerturbStage) -> Result<(ConstructionReport, MembershipCertificate)> {
    let l1_u = parts.u_res.l1_bound();
    let l1_v = parts.v_res.l1_bound();
    let fg_bound = l1_u + l1_v;
    let bounds = Bounds {
        l1_u,
        l1_v,
        l1_s: p.s.l1_bound(),
        l1_s_tilde: p.s_tilde.l1_bound(),
        tail_u: parts.u_res.l1_tail,
        tail_s: p.s.l1_tail,
        sup_s: p.sup_s,
        fg_bound,
        gh_bound: p.gh_bound,
        fh_bound: fg_bound + p.gh_bound,
        f_tail: parts.prior_h_tail,
        h_tail: parts.prior_h_tail + parts.u_res.l1_tail + p.s.l1_tail,
    };
    let cert = verify_pl(&p.u1, parts.n)?;
    let report = ConstructionReport {
        input_f: parts.input_f,
        eps: parts.eps,
        n: parts.n,
        u0: parts.u0,
        nodes: parts.nodes,
        u_series: parts.u_res.series,
        v_series: parts.v_res.series,
        g: parts.g,
        sawtooth: p.sawtooth,
        r: p.r,
        m: p.m,
        s_series: p.s.series,
        s_tilde_series: p.s_tilde.series,
        h: p.h,
        u1: p.u1,
        bounds,
        constants: Constants::derive(),
        truncation: Truncation {
            u: parts.u_trunc,
            s_lambda: p.lambda,
        },
        max_slope_u0: p.max_slope,
        min_surplus: cert.min_surplus,
    };
    Ok((report, cert))
}

/// [`construct_with`] at the default options.
pub fn construct(f: &TrigSeries, eps: f64, n: u32) -> Result<ConstructionReport> {
    construct_with(f, eps, n, &ConstructOptions::default())
}

/// Full pipeline from an analytic polynomial `f` to `h` with
/// `Re h|_𝕋 ∈ Dₙ` and `‖f − h‖∞ ≤ fh_bound < (2C₁ + K)·eps`.
pub fn construct_with(f: &TrigSeries, eps: f64, n: u32, opts: &ConstructOptions) -> Result<ConstructionReport> {
    Ok(construct_certified(f, eps, n, opts)?.0)
}

pub(crate) fn construct_certified(
    f: &TrigSeries,
    eps: f64,
    n: u32,
    opts: &ConstructOptions,
) -> Result<(ConstructionReport, MembershipCertificate)> {
    check_n(n)?;
    let stage = smooth_to_pl_stage(f, eps, opts)?;
    let u0 = LayeredPl::from(stage.u0);
    let p = perturb_stage(&stage.g, &u0, eps, n, opts)?;
    assemble(
        Parts {
            input_f: f.clone(),
            eps,
            n,
            u0,
            nodes: stage.nodes,
            u_res: stage.u_res,
            v_res: stage.v_res,
            g: stage.g,
            u_trunc: stage.trunc,
            prior_h_tail: 0.0,
        },
        p,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex64;

    fn z() -> TrigSeries {
        TrigSeries::monomial(1, Complex64::new(1.0, 0.0))
    }

    #[test]
    fn choose_r_examples() {
        assert_eq!(choose_r(PI / 2.0, 1, &[0.0]), (3, 3.0));
        assert_eq!(choose_r(10.0, 1, &[0.0]).0, 1);
        for (eps, n, sl) in [(0.1, 5, 1.3), (0.013, 2, 7.0), (2.0, 40, 0.0)] {
            let (r, m) = choose_r(eps, n, &[sl, -sl / 2.0]);
            assert!(m - (n as f64 + sl) > 1.0);
            let prev = 2.0 * (r - 1) as f64 * eps / PI;
            assert!(r == 1 || prev <= n as f64 + sl + 1.0);
        }
    }

    #[test]
    fn constant_input_skips_smoothing() {
        let f = TrigSeries::constant(Complex64::new(2.0, -1.0));
        let st = smooth_to_pl_stage(&f, 0.1, &ConstructOptions::default()).unwrap();
        assert!(st.u_res.series.is_empty() && st.v_res.series.is_empty());
        assert_eq!(st.g, f);
        assert_eq!(st.fg_bound, 0.0);
        assert_eq!(st.u0.eval(1.0), 2.0);
    }

    #[test]
    fn z_stage_certificate() {
        let st = smooth_to_pl_stage(&z(), 0.1, &ConstructOptions::default()).unwrap();
        assert!(st.u_res.l1_bound() < Constants::derive().c1 * 0.1);
        assert!(st.g.is_analytic_type());
        assert!(st.fg_bound < 2.0 * Constants::derive().c1 * 0.1);
    }

    #[test]
    fn l1_policy_meets_budget() {
        let opts = ConstructOptions::default().with_node_policy(NodePolicy::L1Certificate);
        let st = smooth_to_pl_stage(&z(), 0.01, &opts).unwrap();
        assert!(st.u_res.l1_bound() < 0.01 * (1.0 + opts.tail_fraction));
        assert!(st.nodes.is_power_of_two());
    }

    #[test]
    fn zero_input_is_pure_perturbation() {
        let r = construct(&TrigSeries::new(), 0.1, 5).unwrap();
        assert_eq!(r.bounds.fg_bound, 0.0);
        assert_eq!(r.bounds.fh_bound, r.bounds.gh_bound);
        assert!(r.min_surplus >= 1.0 - 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(construct(&z(), 0.0, 3).is_err());
        assert!(construct(&z(), 0.1, 0).is_err());
        let bad = TrigSeries::monomial(-1, Complex64::new(1.0, 0.0));
        assert!(matches!(construct(&bad, 0.1, 1), Err(DiscError::NotAnalytic { .. })));
    }
}
