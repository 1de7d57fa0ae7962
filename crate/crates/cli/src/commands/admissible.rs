use cdk_core::admissible::{
    self, Certificate, Lengths, Membership, MembershipReport, MinimizeOutcome, RootedTree, Slot, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{Context, Output};
use crate::error::{CliError, CliResult};
use crate::schema::{self, Check, Report};

/// Slack allowed below the lower bound.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotJson {
    Parent,
    Child(usize),
    Frontier(usize),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeInput {
    #[serde(default)]
    pub schema: Option<String>,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub slots: Vec<Vec<SlotJson>>,
    pub frontier: Vec<f64>,
    /// Optional tree-edge lengths whose membership is reported.
    #[serde(default)]
    pub edges: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct FuzzOptions {
    pub trials: usize,
    pub seed: u64,
    pub d: f64,
    pub max_vertices: usize,
    pub max_valence: usize,
}

fn positive(xs: &[f64], field: &str) -> CliResult<()> {
    for (i, &x) in xs.iter().enumerate() {
        if !(x.is_finite() && x > 0.0) {
            return Err(CliError::input(format!("{field}[{i}]"), format!("length must be positive and finite, got {x}")));
        }
    }
    Ok(())
}

pub fn parse_tree(input: &TreeInput) -> CliResult<(RootedTree, Vec<f64>, Option<Vec<f64>>)> {
    schema::check_schema(&input.schema)?;
    let slots = input
        .slots
        .iter()
        .map(|l| {
            l.iter()
                .map(|s| match *s {
                    SlotJson::Parent => Slot::Parent,
                    SlotJson::Child(c) => Slot::Child(c),
                    SlotJson::Frontier(f) => Slot::Frontier(f),
                })
                .collect()
        })
        .collect();
    let tree = RootedTree::new(input.root, input.parent.clone(), slots)
        .map_err(|e| CliError::input("slots", e.to_string()))?;
    if input.frontier.len() != tree.frontier_count() {
        return Err(CliError::input(
            "frontier",
            format!("{} frontier lengths for {} frontier slots", input.frontier.len(), tree.frontier_count()),
        ));
    }
    positive(&input.frontier, "frontier")?;
    if let Some(e) = &input.edges {
        if e.len() != tree.edge_count() {
            return Err(CliError::input("edges", format!("{} edge lengths for {} tree edges", e.len(), tree.edge_count())));
        }
        positive(e, "edges")?;
    }
    Ok((tree, input.frontier.clone(), input.edges.clone()))
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Compact => "compact",
        Variant::Noncompact => "noncompact",
    }
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::AllBoundaryCentered => json!("AllBoundaryCentered"),
        Certificate::RootBoundary => json!("RootBoundary"),
        Certificate::RadiusTie { child, parent } => json!({ "RadiusTie": { "child": child, "parent": parent } }),
    }
}

fn membership_json(m: &MembershipReport) -> Value {
    let tag = match m.tag {
        Membership::InAd => "InAd",
        Membership::InAdBarOnly => "InAdBarOnly",
        Membership::Outside => "Outside",
    };
    json!({
        "tag": tag,
        "classes": m.classes.iter().map(schema::class).collect::<Vec<_>>(),
        "radii": m.radii.iter().map(|r| r.map(schema::length)).collect::<Vec<_>>(),
        "reasons": m.reasons,
    })
}

pub fn run(input: Option<&TreeInput>, fuzz: Option<FuzzOptions>, ctx: &Context) -> CliResult<Output> {
    let tol = &ctx.tol;
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    let mut results = json!({});
    if let Some(input) = input {
        let (tree, frontier, edges) = parse_tree(input)?;
        let bounds = admissible::outside_in(&tree, &frontier, tol)?;
        results["variant"] = json!(variant_name(tree.variant()));
        results["vertices"] = json!(tree.vertex_count());
        results["edges"] = Value::Array(
            (0..tree.edge_count())
                .map(|e| json!({ "edge": e, "owner": tree.edge_owner(e), "b": bounds.b[e], "h": bounds.h[e] }))
                .collect(),
        );
        if let Some(edges) = edges {
            let d = Lengths { edges, frontier: frontier.clone() };
            results["membership"] = membership_json(&admissible::membership(&tree, &d, tol)?);
        }
        let d_min = frontier.iter().cloned().fold(f64::INFINITY, f64::min);
        let lb = admissible::lower_bound(&tree, d_min)?;
        match admissible::minimize(&tree, &frontier, tol)? {
            MinimizeOutcome::Empty => {
                warnings.push("the closed admissible set is empty".to_string());
                results["minimizer"] = json!({ "status": "empty" });
                results["bound"] = json!({ "d": d_min, "lower_bound": lb });
            }
            MinimizeOutcome::Found(m) => {
                let member = admissible::membership(&tree, &m.lengths, tol)?;
                results["minimizer"] = json!({
                    "status": "found",
                    "edges": m.lengths.edges,
                    "value": m.value,
                    "membership": membership_json(&member),
                    "residual": m.residual,
                    "starts": m.starts,
                });
                results["certificate"] = Value::Array(m.certificates.iter().map(certificate_json).collect());
                let holds = m.value >= lb - BOUND_SLACK;
                results["bound"] = json!({ "d": d_min, "lower_bound": lb, "holds": holds });
                checks.push(Check::new(
                    "certificate",
                    !m.certificates.is_empty(),
                    format!("{} certificate(s)", m.certificates.len()),
                ));
                checks.push(Check::new(
                    "stationarity",
                    m.residual <= admissible::IMPROVEMENT,
                    format!("best single-step decrease {:e}", m.residual),
                ));
                checks.push(Check::new("lower_bound", holds, format!("D_T = {} against {lb}", m.value)));
            }
        }
    }
    if let Some(opts) = fuzz {
        let (summary, check) = verify_bound(opts, ctx)?;
        results["verify_bound"] = summary;
        checks.push(check);
    }
    Ok(Output { report: Report::new(Value::Null, results, checks, warnings), svg: None })
}

fn verify_bound(opts: FuzzOptions, ctx: &Context) -> CliResult<(Value, Check)> {
    if !(opts.d.is_finite() && opts.d > 0.0) {
        return Err(CliError::input("--d", format!("length must be positive, got {}", opts.d)));
    }
    if opts.max_vertices == 0 || opts.max_valence < 3 {
        return Err(CliError::input("--max-valence", "need at least one vertex and valence >= 3"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut feasible = 0;
    let mut empty = 0;
    let mut failures = Vec::new();
    for trial in 0..opts.trials {
        let variant = if trial % 2 == 0 { Variant::Compact } else { Variant::Noncompact };
        let tree = admissible::random_tree(&mut rng, opts.max_vertices, opts.max_valence, variant);
        let frontier: Vec<f64> = (0..tree.frontier_count()).map(|_| rng.gen_range(opts.d..3.0 * opts.d)).collect();
        match admissible::minimize(&tree, &frontier, &ctx.tol)? {
            MinimizeOutcome::Empty => empty += 1,
            MinimizeOutcome::Found(m) => {
                feasible += 1;
                let lb = admissible::lower_bound(&tree, opts.d)?;
                if m.certificates.is_empty() {
                    failures.push(json!({ "trial": trial, "reason": "no certificate" }));
                } else if m.value < lb - BOUND_SLACK {
                    failures.push(json!({ "trial": trial, "reason": format!("D_T = {} below {lb}", m.value) }));
                }
            }
        }
    }
    let summary = json!({
        "trials": opts.trials,
        "seed": opts.seed,
        "d": opts.d,
        "feasible": feasible,
        "empty": empty,
        "failures": failures,
    });
    let check = Check::new(
        "verify_bound",
        failures.is_empty(),
        format!("{feasible} feasible tree(s), {} failure(s)", failures.len()),
    );
    Ok((summary, check))
}
