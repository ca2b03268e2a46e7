//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL` line; run with `--nocapture` to see them.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use discforge::boundary_pl::{
    approximate_c1, l1_tail_bound, make_sawtooth, pl_fourier, pl_fourier_certified, sawtooth_fourier_closed_form,
    sawtooth_series, SmoothPeriodicFn,
};
use discforge::conjugator::conjugate;
use discforge::constructor::{
    chain_construct, construct, construct_both_parts, dense_fh_check, ConstructOptions, ConstructionReport,
    LevelSchedule,
};
use discforge::nd_verifier::{recheck, verify_pl, verify_sampled, SampledSearch};
use discforge::{Complex64, Constants, PiecewiseLinearPeriodic, SawtoothParams, TrigSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(id: u32, title: &str, ok: bool, detail: String) {
    println!("criterion {id} [{title}]: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

/// Direct `Σ ĉ(k) e^{ikθ}` with one `cis` per term.
fn direct_eval(s: &TrigSeries, theta: f64) -> Complex64 {
    s.iter().map(|(k, a)| a * Complex64::cis(k as f64 * theta)).sum()
}

#[test]
fn criterion_1_sawtooth_closed_form() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_lattice, mut worst_off, mut worst_mean_target) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let eps = rng.gen_range(1e-3..=1.0);
        let r: u64 = rng.gen_range(1..=256);
        let sp = SawtoothParams::new(eps, r).unwrap();
        let coeffs = pl_fourier(&make_sawtooth(sp), 100 * r);
        for lambda in -50i64..=50 {
            let k = 2 * r as i64 * lambda;
            let closed = if lambda == 0 {
                eps / 2.0
            } else {
                let sign = if lambda % 2 == 0 { 1.0 } else { -1.0 };
                eps / PI * (sign - 1.0) / (PI * (lambda * lambda) as f64)
            };
            worst_lattice = worst_lattice.max((coeffs.get(k) - c(closed, 0.0)).norm());
        }
        worst_mean_target = worst_mean_target.max((coeffs.get(0).re - eps * PI / (4.0 * r as f64)).abs());
        for k in 0..=(100 * r as i64) {
            if k % (2 * r as i64) != 0 {
                worst_off = worst_off.max(coeffs.get(k).norm()).max(coeffs.get(-k).norm());
            }
        }
    }
    let elapsed = start.elapsed();
    let ok_lattice = worst_lattice < 1e-12;
    let ok_mean = worst_mean_target < 1e-12;
    let ok_off = worst_off < 1e-14;
    let ok_time = elapsed < Duration::from_secs(30);
    let ok = ok_lattice && ok_mean && ok_off && ok_time;
    report(
        1,
        "sawtooth closed form",
        ok,
        format!(
            "lattice err {worst_lattice:.2e}; mean vs επ/(4R) err {worst_mean_target:.2e} (the sawtooth with slopes ±2Rε/π has mean ε/2); \
             off-lattice max {worst_off:.2e}; {elapsed:.1?}"
        ),
    );
    assert!(ok_lattice, "lattice coefficients off by {worst_lattice:e}");
    assert!(ok_off, "off-lattice coefficients up to {worst_off:e}");
    assert!(ok_time, "took {elapsed:?}");
    assert!(ok_mean, "mean coefficient differs from επ/(4R) by {worst_mean_target:e}");
}

fn random_real_series(rng: &mut ChaCha8Rng, max_k: i64) -> TrigSeries {
    let mut s = TrigSeries::new();
    let terms = rng.gen_range(1..20);
    for _ in 0..terms {
        let k = rng.gen_range(0..=max_k);
        let a = c(rng.gen_range(-1.0..1.0), if k == 0 { 0.0 } else { rng.gen_range(-1.0..1.0) });
        s.insert(k, a);
        s.insert(-k, a.conj());
    }
    s
}

#[test]
fn criterion_2_conjugate_multiplier() {
    let cos_ok = conjugate(&TrigSeries::cos()).unwrap() == TrigSeries::sin();
    let sin_ok = conjugate(&TrigSeries::sin()).unwrap() == TrigSeries::cos().scale_real(-1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let s = random_real_series(&mut rng, 128);
        let twice = conjugate(&conjugate(&s).unwrap()).unwrap();
        let mut expected = s.scale_real(-1.0);
        expected.insert(0, c(0.0, 0.0));
        if twice != expected {
            mismatches += 1;
        }
    }
    let ok = cos_ok && sin_ok && mismatches == 0;
    report(
        2,
        "conjugate multiplier",
        ok,
        format!("cos→sin {cos_ok}, sin→−cos {sin_ok}, involution mismatches {mismatches}/1000"),
    );
    assert!(ok);
}

/// `u` as independent closures over explicit cosine/sine sums.
fn trig_fn(terms: Vec<(f64, f64, f64)>) -> (impl Fn(f64) -> f64 + Clone, impl Fn(f64) -> f64 + Clone) {
    // terms: (k, a, b) for a·cos kθ + b·sin kθ
    let t2 = terms.clone();
    (
        move |t: f64| terms.iter().map(|&(k, a, b)| a * (k * t).cos() + b * (k * t).sin()).sum(),
        move |t: f64| t2.iter().map(|&(k, a, b)| k * (b * (k * t).cos() - a * (k * t).sin())).sum(),
    )
}

#[test]
fn criterion_3_piecewise_linear_approximation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases: Vec<Vec<(f64, f64, f64)>> = vec![vec![(1.0, 1.0, 0.0)], vec![(1.0, 1.0, 0.0), (3.0, 0.0, 0.3)]];
    for _ in 0..20 {
        // Re Σ_{k≤8} c_k z^k = Σ (Re c_k cos kθ − Im c_k sin kθ)
        cases.push(
            (0..=8)
                .map(|k| {
                    let scale = 1.0 / (1.0 + k as f64);
                    (k as f64, rng.gen_range(-1.0..1.0) * scale, -rng.gen_range(-1.0..1.0) * scale)
                })
                .collect(),
        );
    }
    let grid = 1_000_000usize;
    let (mut value_viol, mut slope_viol, mut runs) = (0usize, 0usize, 0usize);
    let mut worst = (0.0f64, 0.0f64);
    for terms in cases {
        let (u, du) = trig_fn(terms);
        let f = SmoothPeriodicFn::new(u.clone(), du.clone()).unwrap();
        for eps in [0.1, 0.01] {
            let (u0, nodes) = approximate_c1(&f, eps).unwrap();
            runs += 1;
            let step = TAU / nodes as f64;
            for j in 0..grid {
                let t = TAU * (j as f64 + 0.5) / grid as f64;
                let dv = (u(t) - u0.eval(t)).abs();
                worst.0 = worst.0.max(dv / eps);
                if dv >= eps {
                    value_viol += 1;
                }
                let piece = ((t / step).floor() as usize).min(nodes - 1);
                let ds = (du(t) - u0.slope(piece)).abs();
                worst.1 = worst.1.max(ds / eps);
                if ds >= eps {
                    slope_viol += 1;
                }
            }
        }
    }
    let ok = value_viol == 0 && slope_viol == 0;
    report(
        3,
        "piecewise-linear approximation",
        ok,
        format!(
            "{runs} runs, value violations {value_viol}, slope violations {slope_viol}, worst ratios {:.3}/{:.3}",
            worst.0, worst.1
        ),
    );
    assert!(ok);
}

struct Run {
    label: String,
    eps: f64,
    n: u32,
    report: ConstructionReport,
    elapsed: Duration,
}

fn density_inputs() -> Vec<(&'static str, TrigSeries)> {
    vec![
        ("0", TrigSeries::new()),
        ("z", TrigSeries::monomial(1, c(1.0, 0.0))),
        ("z^2", TrigSeries::monomial(2, c(1.0, 0.0))),
        ("3z-iz^3", TrigSeries::from_pairs([(1, c(3.0, 0.0)), (3, c(0.0, -1.0))])),
    ]
}

fn density_runs() -> &'static Vec<Run> {
    static RUNS: OnceLock<Vec<Run>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let mut out = Vec::new();
        for (label, f) in density_inputs() {
            for eps in [0.1, 0.05] {
                for n in [5, 10] {
                    let start = Instant::now();
                    let report = construct(&f, eps, n).unwrap_or_else(|e| panic!("construct({label}, {eps}, {n}): {e}"));
                    out.push(Run {
                        label: format!("f={label} eps={eps} n={n}"),
                        eps,
                        n,
                        report,
                        elapsed: start.elapsed(),
                    });
                }
            }
        }
        out
    })
}

#[test]
fn criterion_4_smoothing_certificate() {
    let c1 = 1.0 + PI / 6f64.sqrt();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for run in density_runs() {
        let b = &run.report.bounds;
        let recomputed = run.report.u_series.l1_norm() + b.tail_u;
        worst = worst.max(recomputed / (c1 * run.eps));
        if !(recomputed < c1 * run.eps && (recomputed - b.l1_u).abs() <= 1e-12 * recomputed.max(1e-300) + 1e-300) {
            failures.push(run.label.clone());
        }
        if (run.report.constants.c1 - 2.282_549_830_161_864).abs() > 1e-12 {
            failures.push(format!("{}: recorded C1 {}", run.label, run.report.constants.c1));
        }
    }
    let ok = failures.is_empty();
    report(
        4,
        "l1(U) + tail < C1·eps",
        ok,
        format!("{} runs, worst ratio {worst:.4}, failures {failures:?}", density_runs().len()),
    );
    assert!(ok);
}

#[test]
fn criterion_5_density_bound() {
    let k = Constants::derive();
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for run in density_runs() {
        let b = &run.report.bounds;
        let dense = dense_fh_check(&run.report, 1_000_000).unwrap();
        // independent spot check of |f − h| by direct summation
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut spot: f64 = 0.0;
        for _ in 0..200 {
            let t = rng.gen_range(0.0..TAU);
            let fv = direct_eval(&run.report.input_f, t);
            let hv = direct_eval(&run.report.h, t);
            let re = fv.re - run.report.u1.eval(t);
            let im = (fv - hv).im.abs() + b.tail_u + b.tail_s;
            spot = spot.max(re.hypot(im));
        }
        let cap = k.density_factor() * run.eps;
        let ok = dense.observed <= b.fh_bound
            && spot <= b.fh_bound
            && b.fh_bound <= cap
            && b.fh_bound <= b.fg_bound + b.gh_bound
            && run.elapsed < Duration::from_secs(60);
        lines.push(format!(
            "{}: max|f-h| {:.4e} <= fh {:.4e} <= {:.4e} in {:.1?}",
            run.label, dense.observed, b.fh_bound, cap, run.elapsed
        ));
        if !ok {
            failures.push(run.label.clone());
        }
    }
    for l in &lines {
        println!("  {l}");
    }
    let ok = failures.is_empty();
    report(
        5,
        "end-to-end density bound",
        ok,
        format!("{} runs, K = {:.6}, failures {failures:?}", density_runs().len(), k.k),
    );
    assert!(ok);
}

#[test]
fn criterion_6_witnesses() {
    let mut failures = Vec::new();
    let mut worst_surplus = f64::INFINITY;
    for run in density_runs() {
        let u1 = &run.report.u1;
        let cert = verify_pl(u1, run.n).unwrap();
        worst_surplus = worst_surplus.min(cert.min_surplus);
        // re-evaluate each witness on the merged breakpoint table
        let explicit: PiecewiseLinearPeriodic = u1.to_explicit(1 << 24).unwrap();
        let bad = recheck(&|t| explicit.eval(t), &cert);
        let h = &run.report.h;
        let search = SampledSearch::new(4096, 16).with_r_hint(run.report.r);
        let sampled = verify_sampled(&|t| h.eval_boundary(t).re, run.n, search).unwrap();
        if cert.min_surplus < 1.0 || bad > 0 || !sampled.passes() {
            failures.push(format!(
                "{}: surplus {:.3}, bad {bad}, sampled surplus {:.3}",
                run.label, cert.min_surplus, sampled.min_surplus
            ));
        }
    }
    let ok = failures.is_empty();
    report(
        6,
        "witnesses on u1 and Re h",
        ok,
        format!("worst exact surplus {worst_surplus:.4}, failures {failures:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_7_both_parts() {
    let start = Instant::now();
    let f = TrigSeries::monomial(1, c(1.0, 0.0));
    let both = construct_both_parts(&f, 0.1, 5, &ConstructOptions::default()).unwrap();
    let rotated = both.h.mul_neg_i();
    let grid = 10_000;
    let a = rotated.sample_uniform(grid);
    let b = both.h.sample_uniform(grid);
    let rot_err = a.iter().zip(&b).map(|(x, y)| (x.re - y.im).abs()).fold(0.0, f64::max);

    // spot-check recorded Re-part witnesses against the truncated series,
    // widened by its tail
    let re_cert = both.re_witnesses.as_ref().unwrap();
    let mut bad_re = 0;
    let step = (re_cert.witnesses.len() / 200).max(1);
    for w in re_cert.witnesses.iter().step_by(step) {
        let q = (both.h.eval_boundary(w.y).re - both.h.eval_boundary(w.theta).re).abs() / (w.y - w.theta);
        if q - 2.0 * both.h_tail / (w.y - w.theta) <= 5.0 {
            bad_re += 1;
        }
    }
    let ok = both.re_certificate.passes && both.im_certificate.passes && rot_err < 1e-12 && bad_re == 0;
    report(
        7,
        "both parts",
        ok,
        format!(
            "Re surplus {:.3}, Im surplus {:.3}, eps2 {:.3e}, rotation err {rot_err:.1e}, Re spot failures {bad_re}, {:.1?}",
            both.re_certificate.min_surplus,
            both.im_certificate.min_surplus,
            both.eps2,
            start.elapsed()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_8_chain() {
    let start = Instant::now();
    let f = TrigSeries::monomial(1, c(1.0, 0.0));
    let schedule = LevelSchedule::parse("1:.1,2:.05,3:.025,4:.0125,5:.00625").unwrap();
    let out = chain_construct(&f, &schedule, &ConstructOptions::default());
    let elapsed = start.elapsed();
    let out = match out {
        Ok(o) => o,
        Err(e) => {
            report(8, "chain", false, format!("{e}"));
            panic!("{e}");
        }
    };
    for l in &out.levels {
        println!(
            "  n={} eps {:.3e} (asked {:.3e}) margin {:?} fh {:.3e} partial {:.6e}",
            l.n, l.eps_used, l.eps_requested, l.margin_before, l.fh_bound, l.partial_sum
        );
    }
    let passes = out.certificates.iter().all(|c| c.passes) && out.certificates.len() == 5;
    let monotone = out.levels.windows(2).all(|w| w[1].partial_sum > w[0].partial_sum);
    let shrinking = out.levels.windows(2).all(|w| w[1].fh_bound < w[0].fh_bound);
    // independent re-verification of the final real part at each level
    let reverified = schedule
        .levels()
        .iter()
        .all(|&(n, _)| verify_pl(&out.final_u, n).unwrap().passes());
    let ok = passes && monotone && shrinking && reverified && elapsed < Duration::from_secs(300);
    report(
        8,
        "chain",
        ok,
        format!(
            "levels pass {passes}, partial sums monotone {monotone}, increments shrinking {shrinking}, final sum {:.6e}, {elapsed:.1?}",
            out.levels.last().unwrap().partial_sum
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_9_parseval_and_tails() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_gap: f64 = 0.0;
    let mut negative_gap = false;
    let mut tail_failures = 0;
    for _ in 0..20 {
        let sp = SawtoothParams::new(rng.gen_range(0.01..=1.0), rng.gen_range(1..=32)).unwrap();
        let s = make_sawtooth(sp);
        // exact mean square of a piecewise-linear function
        let l2: f64 = s
            .breakpoints()
            .windows(2)
            .zip(s.values().windows(2))
            .map(|(t, v)| (t[1] - t[0]) * (v[0] * v[0] + v[0] * v[1] + v[1] * v[1]) / 3.0)
            .sum::<f64>()
            / TAU;
        let gap = l2 - pl_fourier(&s, 10_000).parseval_l2();
        negative_gap |= gap < -1e-15;
        worst_gap = worst_gap.max(gap.abs());

        // sawtooth series tails against direct sums over λ ≤ 10⁶
        for lambda in [1u64, 10, 100, 1000] {
            let bound = sawtooth_series(sp, lambda).l1_tail;
            assert_eq!(bound, l1_tail_bound(sp, lambda));
            let direct: f64 = ((lambda + 1)..=1_000_000)
                .map(|l| 2.0 * sawtooth_fourier_closed_form(sp, l as i64).norm())
                .sum();
            if direct >= bound {
                tail_failures += 1;
            }
        }
    }
    // generic piecewise-linear tails against directly computed coefficients
    let u0 = PiecewiseLinearPeriodic::new(vec![0.0, 1.0, 2.5, 4.0, TAU], vec![0.3, -1.0, 0.7, 0.2, 0.3]).unwrap();
    let all = pl_fourier(&u0, 1_000_000);
    for k in [10u64, 100, 1000, 10_000] {
        let bound = pl_fourier_certified(&u0, k).l1_tail;
        let direct: f64 = all.iter().filter(|(j, _)| j.unsigned_abs() > k).map(|(_, a)| a.norm()).sum();
        if direct >= bound {
            tail_failures += 1;
        }
    }
    let ok = worst_gap < 1e-6 && !negative_gap && tail_failures == 0;
    report(
        9,
        "Parseval and tail soundness",
        ok,
        format!("worst Parseval gap {worst_gap:.2e}, negative gap {negative_gap}, tail failures {tail_failures}"),
    );
    assert!(ok);
}
