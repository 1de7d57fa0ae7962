//! The shared geometry JSON: points as `{"model": .., "xy": [a, b]}`, ideal
//! points with `"ideal": true`, lengths as numbers or `"inf"`.

use cdk_core::cyclic::ParamClass;
use cdk_core::kernel::{HPoint, IdealPoint, Model, PolygonVertex};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "centered-dual/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    Halfplane,
    Disk,
}

impl ModelTag {
    pub fn model(self) -> Model {
        match self {
            ModelTag::Halfplane => Model::HalfPlane,
            ModelTag::Disk => Model::Disk,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub model: ModelTag,
    pub xy: [f64; 2],
}

impl PointJson {
    pub fn to_point(&self, pointer: &str) -> CliResult<HPoint> {
        HPoint::new(self.model.model(), self.xy[0], self.xy[1])
            .map_err(|e| CliError::input(format!("{pointer}.xy"), e.to_string()))
    }
}

/// A length: a finite double or the token `"inf"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum LengthJson {
    Number(f64),
    Token(String),
}

impl LengthJson {
    pub fn value(&self, pointer: &str) -> CliResult<f64> {
        match self {
            LengthJson::Number(x) => Ok(*x),
            LengthJson::Token(t) => parse_length(t).map_err(|m| CliError::input(pointer, m)),
        }
    }
}

/// Parses a length token: a positive double, or `inf`.
pub fn parse_length(t: &str) -> Result<f64, String> {
    let t = t.trim();
    if t.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    let x: f64 = t.parse().map_err(|_| format!("`{t}` is neither a number nor `inf`"))?;
    if !x.is_finite() {
        return Err(format!("`{t}` is not finite; write `inf` for the ideal length"));
    }
    Ok(x)
}

pub fn check_schema(schema: &Option<String>) -> CliResult<()> {
    match schema {
        Some(s) if s != SCHEMA => Err(CliError::input("schema", format!("expected `{SCHEMA}`, got `{s}`"))),
        _ => Ok(()),
    }
}

pub fn length(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x == f64::INFINITY {
        json!("inf")
    } else {
        Value::Null
    }
}

pub fn lengths(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| length(x)).collect())
}

pub fn point(p: &HPoint, model: ModelTag) -> Value {
    json!({ "model": model, "xy": p.to_model(model.model()).coords() })
}

pub fn ideal(x: &IdealPoint, model: ModelTag) -> Value {
    match model {
        ModelTag::Disk => json!({ "ideal": true, "model": model, "xy": x.disk_point() }),
        ModelTag::Halfplane => match x {
            IdealPoint::Real(t) => json!({ "ideal": true, "model": model, "x": t }),
            IdealPoint::Infinity => json!({ "ideal": true, "model": model, "x": "inf" }),
        },
    }
}

pub fn vertex(v: &PolygonVertex, model: ModelTag) -> Value {
    match v {
        PolygonVertex::Finite(p) => point(p, model),
        PolygonVertex::Ideal(x) => ideal(x, model),
    }
}

pub fn class(c: &ParamClass) -> Value {
    match c {
        ParamClass::Centered => json!({ "tag": "Centered" }),
        ParamClass::BoundaryCentered => json!({ "tag": "BoundaryCentered" }),
        ParamClass::NonCentered { max_index } => json!({ "tag": "NonCentered", "max_index": max_index }),
        ParamClass::Horocyclic { max_index } => json!({ "tag": "Horocyclic", "max_index": max_index }),
        ParamClass::Outside => json!({ "tag": "Outside" }),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Top-level report. Field order is fixed, so identical jobs serialise to
/// identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: Value, results: Value, checks: Vec<Check>, warnings: Vec<String>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Report { schema: SCHEMA, command, results, checks, passed, warnings, timing_ms: None }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_tokens() {
        assert_eq!(parse_length("inf"), Ok(f64::INFINITY));
        assert_eq!(parse_length(" 2.5"), Ok(2.5));
        assert!(parse_length("nan").is_err());
        assert!(parse_length("x").is_err());
        assert_eq!(length(f64::INFINITY), json!("inf"));
        let l: LengthJson = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(l.value("d").unwrap(), f64::INFINITY);
    }

    #[test]
    fn ideal_point_shapes() {
        let v = ideal(&IdealPoint::Infinity, ModelTag::Halfplane);
        assert_eq!(v, json!({ "ideal": true, "model": "halfplane", "x": "inf" }));
        let v = ideal(&IdealPoint::Infinity, ModelTag::Disk);
        assert_eq!(v["xy"], json!([1.0, 0.0]));
    }
}
