//! Membership checks for the classes `Dₙ`: a continuous periodic `u` is in
//! `Dₙ` when every `θ` has some `y ∈ (θ, θ + 1/n)` with
//! `|u(y) − u(θ)| > n·(y − θ)`.
//!
//! Each probe angle gets one explicit witness `(θ, y, quotient)`, so a
//! certificate can be re-checked independently and turned into a
//! perturbation radius.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::boundary_pl::PlFunction;
use crate::error::{DiscError, Result};

/// Uniform probe grid used in addition to breakpoints.
pub const PROBE_GRID: usize = 1 << 16;
/// Breakpoint families beyond this many points are not used as probes.
pub const BREAKPOINT_PROBE_CAP: usize = 1 << 21;
/// Linear pieces examined to the right of each probe.
pub const MAX_PIECES: usize = 8;
/// Gaps below this are too short for a meaningful difference quotient.
const MIN_GAP: f64 = 1e-13;
/// Relative pull-back from the open window end `θ + 1/n`.
const CLIP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub theta: f64,
    pub y: f64,
    pub quotient: f64,
}

impl Witness {
    pub fn gap(&self) -> f64 {
        self.y - self.theta
    }

    fn measure(u: &(impl Fn(f64) -> f64 + ?Sized), theta: f64, u_theta: f64, y: f64) -> Self {
        Self {
            theta,
            y,
            quotient: (u(y) - u_theta).abs() / (y - theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipCertificate {
    #[serde(rename = "n")]
    pub level_n: u32,
    pub min_surplus: f64,
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub probe_count: usize,
}

impl MembershipCertificate {
    fn from_witnesses(level_n: u32, witnesses: Vec<Witness>) -> Self {
        let n = level_n as f64;
        let min_surplus = witnesses
            .iter()
            .map(|w| w.quotient - n)
            .fold(f64::INFINITY, f64::min);
        Self {
            level_n,
            min_surplus: if witnesses.is_empty() { 0.0 } else { min_surplus },
            probe_count: witnesses.len(),
            witnesses,
        }
    }

    pub fn passes(&self) -> bool {
        self.min_surplus > 0.0 && !self.witnesses.is_empty()
    }

    pub fn min_gap(&self) -> f64 {
        self.witnesses
            .iter()
            .map(Witness::gap)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `δ` such that every recorded witness stays valid under any
    /// perturbation of sup-norm below `δ`: a change of `δ` moves each
    /// quotient by at most `2δ/(y − θ)`.
    pub fn margin(&self) -> f64 {
        let n = self.level_n as f64;
        self.witnesses
            .iter()
            .map(|w| (w.quotient - n) * w.gap() / 2.0)
            .fold(f64::INFINITY, f64::min)
            .min(if self.witnesses.is_empty() { 0.0 } else { f64::INFINITY })
    }

    /// Lowers every quotient by `2δ/(y − θ)`: the certificate that remains
    /// valid for any function within `δ` of the one that was checked.
    pub fn degraded(&self, delta: f64) -> Self {
        let witnesses = self
            .witnesses
            .iter()
            .map(|w| Witness {
                quotient: (w.quotient - 2.0 * delta / w.gap()).max(0.0),
                ..*w
            })
            .collect();
        Self::from_witnesses(self.level_n, witnesses)
    }
}

fn check_level(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(DiscError::InvalidParameter("n must be a positive integer".into()));
    }
    Ok(n as f64)
}

fn grid(count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |j| TAU * j as f64 / count as f64)
}

fn probe_angles(u: &(impl PlFunction + ?Sized)) -> Vec<f64> {
    let mut probes = u.probe_breakpoints(BREAKPOINT_PROBE_CAP);
    probes.extend(grid(PROBE_GRID));
    probes.sort_by(f64::total_cmp);
    probes.dedup();
    probes
}

#[derive(Clone, Copy)]
enum Select {
    Quotient,
    Robust,
}

impl Select {
    fn better(self, n: f64, cand: &Witness, best: &Witness) -> bool {
        match self {
            Select::Quotient => {
                cand.quotient > best.quotient
                    || (cand.quotient == best.quotient && cand.gap() > best.gap())
            }
            Select::Robust => (cand.quotient - n) * cand.gap() > (best.quotient - n) * best.gap(),
        }
    }
}

fn pl_witness(u: &(impl PlFunction + ?Sized), n: f64, theta: f64, mode: Select) -> Witness {
    let end = theta + 1.0 / n;
    let clip = end - CLIP / n;
    let f = |t: f64| u.value_at(t);
    let u_theta = f(theta);
    let mut best: Option<Witness> = None;
    let mut offer = |y: f64| {
        if y - theta < MIN_GAP {
            return;
        }
        let cand = Witness::measure(&f, theta, u_theta, y);
        match &best {
            Some(b) if !mode.better(n, &cand, b) => {}
            _ => best = Some(cand),
        }
    };
    // The quotient is monotone in y on each linear piece, so piece ends and
    // the window clip are the only candidates worth examining.
    let mut t = theta;
    for _ in 0..MAX_PIECES {
        let b = u.next_breakpoint_after(t);
        if b >= clip {
            break;
        }
        offer(b);
        t = b;
    }
    offer(clip);
    best.unwrap_or(Witness {
        theta,
        y: clip,
        quotient: 0.0,
    })
}

fn verify_pl_mode(u: &(impl PlFunction + ?Sized), n: u32, mode: Select) -> Result<MembershipCertificate> {
    let nf = check_level(n)?;
    let witnesses = probe_angles(u)
        .into_iter()
        .map(|theta| pl_witness(u, nf, theta, mode))
        .collect();
    Ok(MembershipCertificate::from_witnesses(n, witnesses))
}

/// Exact witness search for a piecewise-linear function: probes are all
/// breakpoints plus a uniform `2¹⁶` grid, and for each probe the witness
/// with the largest quotient among the first [`MAX_PIECES`] pieces is kept.
pub fn verify_pl(u: &(impl PlFunction + ?Sized), n: u32) -> Result<MembershipCertificate> {
    verify_pl_mode(u, n, Select::Quotient)
}

/// Like [`verify_pl`], but each probe keeps the witness maximizing
/// `(quotient − n)·(y − θ)`, which is what the perturbation radius depends
/// on.
pub fn verify_pl_robust(u: &(impl PlFunction + ?Sized), n: u32) -> Result<MembershipCertificate> {
    verify_pl_mode(u, n, Select::Robust)
}

/// Sup-norm radius preserving every robust witness of `u` at level `n`;
/// nonpositive when some probe has no witness.
pub fn dn_margin(u: &(impl PlFunction + ?Sized), n: u32) -> Result<f64> {
    Ok(verify_pl_robust(u, n)?.margin())
}

/// Options for [`verify_sampled`].
#[derive(Debug, Clone, Copy)]
pub struct SampledSearch {
    pub probe_count: usize,
    pub search_depth: u32,
    /// Tooth count `R` of a sawtooth known to dominate the fine structure.
    pub r_hint: Option<u64>,
}

impl SampledSearch {
    pub fn new(probe_count: usize, search_depth: u32) -> Self {
        Self {
            probe_count,
            search_depth,
            r_hint: None,
        }
    }

    pub fn with_r_hint(mut self, r: u64) -> Self {
        self.r_hint = Some(r);
        self
    }
}

/// Grid witness search for an arbitrary function: for each of
/// `probe_count` uniform angles, tries `y = θ + 2^{−j}/n` for
/// `j = 1..=search_depth`, plus tooth corners and a tooth width past `θ`
/// when an `R` hint is given.
pub fn verify_sampled(
    u: &(impl Fn(f64) -> f64 + ?Sized),
    n: u32,
    search: SampledSearch,
) -> Result<MembershipCertificate> {
    let nf = check_level(n)?;
    if search.probe_count == 0 || search.search_depth == 0 {
        return Err(DiscError::InvalidParameter(
            "probe_count and search_depth must be at least 1".into(),
        ));
    }
    let end_of = |theta: f64| theta + 1.0 / nf;
    let witnesses = grid(search.probe_count)
        .map(|theta| {
            let u_theta = u(theta);
            let mut ys: Vec<f64> = (1..=search.search_depth)
                .map(|j| theta + (0.5f64).powi(j as i32) / nf)
                .collect();
            if let Some(r) = search.r_hint {
                let w = FRAC_PI_2 / r.max(1) as f64;
                let c1 = ((theta / w).floor() + 1.0) * w;
                ys.extend([c1, c1 + w, theta + w, theta + 0.5 * w]);
            }
            ys.into_iter()
                .filter(|&y| y - theta >= MIN_GAP && y < end_of(theta))
                .map(|y| Witness::measure(u, theta, u_theta, y))
                .reduce(|best, cand| {
                    if Select::Quotient.better(nf, &cand, &best) {
                        cand
                    } else {
                        best
                    }
                })
                .unwrap_or(Witness {
                    theta,
                    y: theta + 0.5 / nf,
                    quotient: 0.0,
                })
        })
        .collect();
    Ok(MembershipCertificate::from_witnesses(n, witnesses))
}

/// Re-evaluates every witness with `u` and counts those that violate
/// `θ < y < θ + 1/n` or `|u(y) − u(θ)| > n·(y − θ)`.
pub fn recheck(u: &(impl Fn(f64) -> f64 + ?Sized), cert: &MembershipCertificate) -> usize {
    let n = cert.level_n as f64;
    cert.witnesses
        .iter()
        .filter(|w| {
            let inside = w.theta < w.y && w.y < w.theta + 1.0 / n;
            !(inside && (u(w.y) - u(w.theta)).abs() > n * (w.y - w.theta))
        })
        .count()
}
