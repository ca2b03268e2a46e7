use std::fmt::Write as _;
use std::io::Write;

use discforge::conjugator::conjugate;
use discforge::constructor::{chain_construct, construct_both_parts, construct_with};
use discforge::nd_verifier::verify_pl;
use discforge::trig_series::uniform_angles;
use discforge::{ConstructOptions, MembershipCertificate};
use serde_json::json;

use crate::config::{CommandKind, Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::input::{load_certificate, load_document, Document};
use crate::svg;

/// Runs one validated command; the result carries the exit code.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    match cfg.command {
        CommandKind::Construct => cmd_construct(cfg),
        CommandKind::ConstructBoth => cmd_construct_both(cfg),
        CommandKind::Chain => cmd_chain(cfg),
        CommandKind::Verify => cmd_verify(cfg),
        CommandKind::Conjugate => cmd_conjugate(cfg),
        CommandKind::Sample => cmd_sample(cfg),
        CommandKind::Plot => cmd_plot(cfg),
    }
}

fn options() -> CliResult<ConstructOptions> {
    ConstructOptions::from_env().map_err(CliError::from)
}

fn emit(cfg: &RunConfig, body: &str) -> CliResult<()> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn emit_json<T: serde::Serialize>(cfg: &RunConfig, value: &T) -> CliResult<()> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("cannot serialise output: {e}")))?;
    body.push('\n');
    emit(cfg, &body)
}

fn require_series(doc: Document, what: &str) -> CliResult<discforge::TrigSeries> {
    match doc {
        Document::Series(s) => Ok(s),
        other => Err(CliError::Input(format!("{what} needs a series input, got a {}", other.kind()))),
    }
}

fn cmd_construct(cfg: &RunConfig) -> CliResult<()> {
    let f = require_series(load_document(&cfg.input)?, "construct")?;
    f.ensure_analytic()?;
    let (eps, n) = (cfg.eps.expect("validated"), cfg.n.expect("validated"));
    let report = construct_with(&f, eps, n, &options()?)?;
    emit_json(cfg, &report)?;
    eprintln!(
        "fh_bound={:e} R={} m={} min_surplus={}",
        report.bounds.fh_bound, report.r, report.m, report.min_surplus
    );
    if report.min_surplus > 0.0 {
        Ok(())
    } else {
        Err(CliError::Certificate(format!("real part fails level {n}")))
    }
}

fn cmd_construct_both(cfg: &RunConfig) -> CliResult<()> {
    let f = require_series(load_document(&cfg.input)?, "construct-both")?;
    f.ensure_analytic()?;
    let (eps, n) = (cfg.eps.expect("validated"), cfg.n.expect("validated"));
    let report = construct_both_parts(&f, eps, n, &options()?)?;
    emit_json(cfg, &report)?;
    eprintln!(
        "fh_bound={:e} eps2={:e} re_min_surplus={} im_min_surplus={}",
        report.fh_bound, report.eps2, report.re_certificate.min_surplus, report.im_certificate.min_surplus
    );
    Ok(())
}

fn cmd_chain(cfg: &RunConfig) -> CliResult<()> {
    let f = require_series(load_document(&cfg.input)?, "chain")?;
    f.ensure_analytic()?;
    let schedule = cfg.schedule.as_ref().expect("validated");
    let outcome = chain_construct(&f, schedule, &options()?)?;
    emit_json(cfg, &outcome)?;
    for l in &outcome.levels {
        eprintln!(
            "n={} eps={:e} fh_bound={:e} partial_sum={:e}",
            l.n, l.eps_used, l.fh_bound, l.partial_sum
        );
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig) -> CliResult<()> {
    let doc = load_document(&cfg.input)?;
    let need_n = || cfg.n.ok_or_else(|| CliError::Input("--n is required for this input".into()));
    let cert: MembershipCertificate = match &doc {
        Document::Pl(p) => verify_pl(p, need_n()?)?,
        Document::Layered(l) => verify_pl(l, need_n()?)?,
        Document::Report(r) => verify_pl(&r.u1, cfg.n.unwrap_or(r.n))?,
        Document::Chain(c) => {
            let last = c.levels.last().map(|l| l.n).ok_or_else(|| CliError::Input("chain has no levels".into()))?;
            verify_pl(&c.final_u, cfg.n.unwrap_or(last))?
        }
        other => {
            return Err(CliError::Input(format!(
                "verify needs an exact piecewise-linear function, a construction report or a chain outcome, got a {}",
                other.kind()
            )))
        }
    };
    emit_json(cfg, &cert)?;
    eprintln!(
        "n={} min_surplus={} witnesses={}",
        cert.level_n,
        cert.min_surplus,
        cert.witnesses.len()
    );
    if cert.passes() {
        Ok(())
    } else {
        Err(CliError::Certificate(format!("not in D_{} (min surplus {})", cert.level_n, cert.min_surplus)))
    }
}

fn cmd_conjugate(cfg: &RunConfig) -> CliResult<()> {
    let u = require_series(load_document(&cfg.input)?, "conjugate")?;
    emit_json(cfg, &conjugate(&u)?)
}

fn cmd_sample(cfg: &RunConfig) -> CliResult<()> {
    let doc = load_document(&cfg.input)?;
    let grid = cfg.grid.expect("validated");
    let values = doc.boundary().sample(grid);
    match cfg.format {
        Format::Json => {
            let thetas: Vec<f64> = uniform_angles(grid).collect();
            let re: Vec<f64> = values.iter().map(|c| c.re).collect();
            let im: Vec<f64> = values.iter().map(|c| c.im).collect();
            emit_json(cfg, &json!({ "theta": thetas, "re": re, "im": im }))
        }
        _ => {
            let mut body = String::with_capacity(grid * 48);
            body.push_str("theta,re,im\n");
            for (t, v) in uniform_angles(grid).zip(&values) {
                let _ = writeln!(body, "{t},{},{}", v.re, v.im);
            }
            emit(cfg, &body)
        }
    }
}

fn cmd_plot(cfg: &RunConfig) -> CliResult<()> {
    let doc = load_document(&cfg.input)?;
    let cert = cfg.certificate.as_deref().map(load_certificate).transpose()?;
    let values = doc.boundary().sample(cfg.grid.expect("validated"));
    emit(cfg, &svg::render(&values, cert.as_ref(), doc.kind()))
}
