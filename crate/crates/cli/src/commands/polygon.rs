use cdk_core::cyclic::{self, ParamClass};
use serde_json::{json, Value};

use super::{Context, Output};
use crate::error::{CliError, CliResult};
use crate::schema::{self, Check, Report};

pub fn run(lengths: &[f64], strict: bool, ctx: &Context) -> CliResult<Output> {
    if lengths.len() < 3 {
        return Err(CliError::input("lengths", format!("need at least 3 lengths, got {}", lengths.len())));
    }
    for (i, &x) in lengths.iter().enumerate() {
        if !(x > 0.0) {
            return Err(CliError::input(format!("lengths[{i}]"), format!("length must be positive, got {x}")));
        }
    }
    let tol = &ctx.tol;
    let mut checks = Vec::new();
    let results = if lengths.iter().any(|x| x.is_infinite()) {
        let area = cyclic::area_with(lengths, tol)?;
        json!({
            "lengths": schema::lengths(lengths),
            "class": { "tag": "HorocyclicIdeal" },
            "J": "inf",
            "area": area,
            "gradient": Value::Null,
        })
    } else {
        let class = cyclic::classify_with(lengths, tol)?;
        let (j, area, gradient) = match class {
            ParamClass::Outside => (Value::Null, Value::Null, Value::Null),
            ParamClass::Horocyclic { .. } => (json!("inf"), json!(cyclic::area_with(lengths, tol)?), Value::Null),
            _ => (
                json!(cyclic::circumradius_with(lengths, tol)?),
                json!(cyclic::area_with(lengths, tol)?),
                json!(cyclic::area_gradient_with(lengths, tol)?),
            ),
        };
        if strict {
            checks.push(Check::new(
                "inside_parameter_space",
                class != ParamClass::Outside,
                "lengths must bound a cyclic or horocyclic polygon",
            ));
        }
        json!({
            "lengths": schema::lengths(lengths),
            "class": schema::class(&class),
            "J": j,
            "area": area,
            "gradient": gradient,
        })
    };
    Ok(Output { report: Report::new(Value::Null, results, checks, Vec::new()), svg: None })
}
