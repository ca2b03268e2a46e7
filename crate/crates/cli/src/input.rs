//! Loading and recognising the JSON documents the commands accept.

use std::io::Read;

use discforge::constructor::{BothPartsReport, ChainOutcome};
use discforge::nd_verifier::MembershipCertificate;
use discforge::{
    Complex64, ConstructionReport, LayeredPl, PiecewiseLinearPeriodic, PlFunction, TrigSeries,
};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Every function-bearing document the CLI understands.
#[derive(Debug)]
pub enum Document {
    Series(TrigSeries),
    Pl(PiecewiseLinearPeriodic),
    Layered(LayeredPl),
    Report(Box<ConstructionReport>),
    Both(Box<BothPartsReport>),
    Chain(Box<ChainOutcome>),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Series(_) => "trigonometric series",
            Document::Pl(_) => "piecewise-linear function",
            Document::Layered(_) => "layered piecewise-linear function",
            Document::Report(_) => "construction report",
            Document::Both(_) => "both-parts report",
            Document::Chain(_) => "chain outcome",
        }
    }

    /// The boundary function the document describes, for sampling.
    pub fn boundary(&self) -> Boundary<'_> {
        match self {
            Document::Series(s) => Boundary::Series(s),
            Document::Pl(p) => Boundary::Real(p),
            Document::Layered(l) => Boundary::Real(l),
            Document::Report(r) => Boundary::Series(&r.h),
            Document::Both(b) => Boundary::Series(&b.h),
            Document::Chain(c) => Boundary::Series(&c.h),
        }
    }
}

pub enum Boundary<'a> {
    Series(&'a TrigSeries),
    Real(&'a dyn PlFunction),
}

impl Boundary<'_> {
    /// Values at `θ_j = 2πj/grid`, `j = 0..grid`.
    pub fn sample(&self, grid: usize) -> Vec<Complex64> {
        match self {
            Boundary::Series(s) => s.sample_uniform(grid),
            Boundary::Real(u) => discforge::trig_series::uniform_angles(grid)
                .map(|t| Complex64::new(u.value_at(t), 0.0))
                .collect(),
        }
    }
}

/// Reads `arg` as inline JSON when it starts with `{`, from stdin when it
/// is `-`, and as a file path otherwise.
pub fn read_source(arg: &str) -> CliResult<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        return Ok(buf);
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))
}

fn parse_as<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::Input(format!("invalid {what}: {e}")))
}

pub fn parse_document(text: &str) -> CliResult<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let Some(obj) = v.as_object() else {
        return Err(CliError::Input("input must be a JSON object".into()));
    };
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("first") && has("second") {
        Document::Both(Box::new(parse_as(v, "both-parts report")?))
    } else if has("levels") && has("final_u") {
        Document::Chain(Box::new(parse_as(v, "chain outcome")?))
    } else if has("u1") && has("bounds") {
        Document::Report(Box::new(parse_as(v, "construction report")?))
    } else if has("coeffs") {
        Document::Series(parse_as(v, "series")?)
    } else if has("base") {
        Document::Layered(parse_as(v, "layered function")?)
    } else if has("breakpoints") {
        Document::Pl(parse_as(v, "piecewise-linear function")?)
    } else {
        return Err(CliError::Input(
            "unrecognised input: expected a series {\"coeffs\":..}, a piecewise-linear function \
             {\"breakpoints\":..,\"values\":..}, a layered function {\"base\":..} or a report"
                .into(),
        ));
    })
}

pub fn load_document(arg: &str) -> CliResult<Document> {
    parse_document(&read_source(arg)?)
}

pub fn load_certificate(arg: &str) -> CliResult<MembershipCertificate> {
    let text = read_source(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid certificate: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognises_kinds() {
        let s = parse_document(r#"{"coeffs":[{"k":1,"re":1,"im":0}]}"#).unwrap();
        assert!(matches!(s, Document::Series(_)));
        let p = parse_document(r#"{"breakpoints":[0,3,6.283185307179586],"values":[0,1,0]}"#).unwrap();
        assert!(matches!(p, Document::Pl(_)));
        let l = parse_document(r#"{"base":{"breakpoints":[0,6.283185307179586],"values":[1,1]}}"#).unwrap();
        assert!(matches!(l, Document::Layered(_)));
    }

    #[test]
    fn names_the_bad_field() {
        let e = parse_document(r#"{"coeffs":[{"k":1,"re":"x","im":0}]}"#).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("series"), "{e}");
        let e = parse_document(r#"{"breakpoints":[0,1]}"#).unwrap_err();
        assert!(e.to_string().contains("values"), "{e}");
    }

    #[test]
    fn rejects_unknown_shapes() {
        assert!(parse_document("[1,2]").is_err());
        assert!(parse_document(r#"{"foo":1}"#).is_err());
        assert!(parse_document("{").is_err());
    }
}
