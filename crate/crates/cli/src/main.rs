use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context as _;
use cdk_cli::commands::{self, admissible::FuzzOptions, Context, Output};
use cdk_cli::schema::{self, ModelTag};
use cdk_cli::{io, CliError};
use clap::{ArgGroup, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cdk", version, about = "Centered dual complexes and injectivity radius bounds in the hyperbolic plane")]
struct Cli {
    /// Model for emitted coordinates.
    #[arg(long, global = true, value_enum, default_value = "disk")]
    model: ModelTag,
    /// JSON report destination; stdout when omitted or `-`.
    #[arg(short, long, global = true)]
    output: Option<String>,
    /// Record wall-clock time in the report (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Voronoi diagram, geometric dual and centered dual of a site set.
    Tessellate {
        /// Sites JSON, `-` for stdin.
        sites: String,
        /// Length for the area bounds (default: shortest dual edge).
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        svg: Option<String>,
    },
    /// Class, circumradius, area and gradient of a length tuple.
    Polygon {
        /// Side lengths; `inf` for the ideal sides of a horocyclic ideal polygon.
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        lengths: Vec<String>,
        /// Exit nonzero when the tuple lies outside every parameter space.
        #[arg(long)]
        strict: bool,
    },
    /// Outside-in bounds, membership and the minimum of the tree defect.
    Admissible {
        /// Tree JSON, `-` for stdin.
        tree: Option<String>,
        /// Fuzz the lower bound on random trees.
        #[arg(long)]
        verify_bound: bool,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Frontier lengths are drawn from [d, 3d].
        #[arg(long, default_value_t = 1.0)]
        d: f64,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        #[arg(long, default_value_t = 5)]
        max_valence: usize,
    },
    /// Injectivity radius bound r_{g,n}.
    #[command(group(ArgGroup::new("mode").required(true).args(["g", "table"])))]
    Rmax {
        #[arg(long, requires = "n")]
        g: Option<usize>,
        #[arg(long, requires = "g")]
        n: Option<usize>,
        /// Table over g <= G, n <= N.
        #[arg(long, num_args = 2, value_names = ["G", "N"], conflicts_with_all = ["g", "n"])]
        table: Option<Vec<usize>>,
    },
    /// Extremal polygon for signature (g, n), or the closed sequence at radius r.
    Extremal {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_name = "R")]
        closed_seq: Option<f64>,
        #[arg(long)]
        svg: Option<String>,
    },
}

fn dispatch(cli: &Cli, ctx: &Context) -> Result<(Output, Option<String>), CliError> {
    Ok(match &cli.command {
        Command::Tessellate { sites, d, svg } => {
            let input = io::parse_json(&io::read_input(sites)?)?;
            let d = d
                .as_deref()
                .map(|t| schema::parse_length(t).map_err(|m| CliError::input("--d", m)))
                .transpose()?;
            (commands::tessellate::run(&input, d, ctx, svg.is_some())?, svg.clone())
        }
        Command::Polygon { lengths, strict } => {
            let xs = lengths
                .iter()
                .enumerate()
                .map(|(i, t)| schema::parse_length(t).map_err(|m| CliError::input(format!("lengths[{i}]"), m)))
                .collect::<Result<Vec<_>, _>>()?;
            (commands::polygon::run(&xs, *strict, ctx)?, None)
        }
        Command::Admissible { tree, verify_bound, trials, seed, d, max_vertices, max_valence } => {
            if tree.is_none() && !verify_bound {
                return Err(CliError::input("tree", "give a tree file or --verify-bound"));
            }
            let input = match tree {
                Some(p) => Some(io::parse_json(&io::read_input(p)?)?),
                None => None,
            };
            let fuzz = verify_bound.then_some(FuzzOptions {
                trials: *trials,
                seed: *seed,
                d: *d,
                max_vertices: *max_vertices,
                max_valence: *max_valence,
            });
            (commands::admissible::run(input.as_ref(), fuzz, ctx)?, None)
        }
        Command::Rmax { g, n, table } => match (g, n, table) {
            (_, _, Some(t)) => (commands::surfaces::rmax_table(t[0], t[1])?, None),
            (Some(g), Some(n), None) => (commands::surfaces::rmax_single(*g, *n)?, None),
            _ => return Err(CliError::input("--g", "give --g and --n, or --table G N")),
        },
        Command::Extremal { g, n, closed_seq, svg } => {
            (commands::surfaces::extremal(*g, *n, *closed_seq, ctx, svg.is_some())?, svg.clone())
        }
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let start = Instant::now();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = io::tolerances_from_env().and_then(|tol| {
        let ctx = Context { tol, model: cli.model };
        dispatch(&cli, &ctx)
    });
    let (mut out, svg_path) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(e.exit_code() as u8));
        }
    };
    out.report.command = serde_json::json!({ "args": args });
    if cli.timing {
        out.report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    for w in &out.report.warnings {
        eprintln!("warning: {w}");
    }
    io::write_output(cli.output.as_deref(), &out.report.to_json()).context("writing report")?;
    if let (Some(path), Some(svg)) = (svg_path, &out.svg) {
        io::write_atomic(std::path::Path::new(&path), svg).context("writing svg")?;
    }
    for c in out.report.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} ({})", c.name, c.detail);
    }
    Ok(if out.report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
