//! Command-line front end.
//!
//! Subcommands: `integral` (ψ-product integral by fixed points, oracle, or
//! both), `bounds` (coloring/value/matching sandwich), `nonzero` (per-color
//! inequality table), `aco` (acyclic orientations of a graph file),
//! `strata-sum` (alternating sum over stable dual trees against the
//! orientation count), and `verify` (exhaustive identity sweeps).
//!
//! Marked points and graph vertices are 1-indexed on the command line.
//! Output goes to the given writer in `plain` or line-delimited-JSON
//! `records` form and is byte-identical across runs. Exit codes: 0 success,
//! 1 usage/input error, 2 internal-consistency failure.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decoration::ExponentProfile;
use crate::graph::{ColorProfile, SimpleGraph};
use crate::hue::enumerate_fixed_points;
use crate::nonvanishing::{count_matchings, count_mismatched_colorings, nonzero_predicate};
use crate::psi::{intersection_number, Method};
use crate::strata::{alternating_strata_sum, fast_strata_sum};
use crate::verify::{
    hue_involution_sweep, merge_split_sweep, nonvanishing_sweep, oracle_equivalence_sweep,
    strata_involution_sweep, strata_sum_sweep, underline_involution_sweep, SweepReport,
};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "multipsi",
    about = "Exact ψ-class intersection numbers on multicolored moduli spaces",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output form: human-readable lines or line-delimited JSON records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Plain,
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute ∫ ψ₁^{k₁}⋯ψₙ^{kₙ} over the multicolored space.
    Integral(IntegralArgs),
    /// Report the coloring count, the integral, and the matching count.
    Bounds(ProfileArgs),
    /// Decide positivity of the integral by the per-color inequalities.
    Nonzero(ProfileArgs),
    /// Count acyclic orientations of a graph file.
    Aco(GraphArgs),
    /// Alternating sum over stable dual trees of a graph with two
    /// dominating vertices, checked against the orientation count.
    StrataSum(StrataArgs),
    /// Run exhaustive identity sweeps up to the given sizes.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Color class sizes, e.g. `5,4,1`.
    #[arg(long)]
    profile: String,
    /// Exponents as 1-indexed `point:exponent` pairs, e.g. `1:2,6:2,7:3`.
    #[arg(long, default_value = "")]
    k: String,
    /// Sort exponents within each color into canonical order first.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args, Debug)]
struct IntegralArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    /// Print every fixed-point decoration before the value.
    #[arg(long)]
    list_fixed_points: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum MethodArg {
    FixedPoints,
    Oracle,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::FixedPoints => Method::FixedPoints,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph file: header `n=<count>`, then one 1-indexed `u v` line per edge.
    file: std::path::PathBuf,
}

#[derive(Args, Debug)]
struct StrataArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// First dominating vertex, 1-indexed.
    #[arg(long)]
    p: usize,
    /// Second dominating vertex, 1-indexed.
    #[arg(long)]
    q: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Largest marked-point total for the decoration-side sweeps.
    #[arg(long, default_value_t = 7)]
    n_max: usize,
    /// Largest non-dominating vertex count for the strata-sum sweep.
    #[arg(long, default_value_t = 4)]
    v_max: usize,
    /// Largest vertex count for tree-by-tree and involution sweeps.
    #[arg(long, default_value_t = 3)]
    per_tree_max: usize,
}

/// Parse and execute; returns the process exit code.
pub fn run<I>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator,
    I::Item: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; anything else is a
            // usage error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(Error::InvalidInput(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Error::Inconsistency(msg)) => {
            eprintln!("internal consistency failure: {msg}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Integral(args) => integral(args, cli.format, out),
        Command::Bounds(args) => bounds(args, cli.format, out),
        Command::Nonzero(args) => nonzero(args, cli.format, out),
        Command::Aco(args) => aco(args, cli.format, out),
        Command::StrataSum(args) => strata_sum(args, cli.format, out),
        Command::Verify(args) => verify(args, cli.format, out),
    }
}

fn parse_profile(text: &str) -> Result<ColorProfile> {
    let sizes: Result<Vec<usize>> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad color size `{part}`")))
        })
        .collect();
    ColorProfile::new(sizes?)
}

fn parse_exponents(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut k = vec![0usize; n];
    if text.trim().is_empty() {
        return Ok(k);
    }
    for pair in text.split(',') {
        let Some((point, value)) = pair.split_once(':') else {
            return Err(Error::InvalidInput(format!(
                "expected `point:exponent`, got `{pair}`"
            )));
        };
        let point: usize = point
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad point `{point}`")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad exponent `{value}`")))?;
        if point == 0 || point > n {
            return Err(Error::InvalidInput(format!(
                "point {point} out of range 1..={n}"
            )));
        }
        if k[point - 1] != 0 {
            return Err(Error::InvalidInput(format!("point {point} given twice")));
        }
        k[point - 1] = value;
    }
    Ok(k)
}

fn parse_instance(args: &ProfileArgs) -> Result<ExponentProfile> {
    let profile = parse_profile(&args.profile)?;
    let k = parse_exponents(&args.k, profile.n())?;
    if args.normalize {
        ExponentProfile::normalized(profile, k)
    } else {
        ExponentProfile::new(profile, k)
    }
}

fn emit(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::InvalidInput(format!("write failed: {e}")))
}

fn record(out: &mut dyn Write, value: serde_json::Value) -> Result<()> {
    emit(out, format_args!("{value}"))
}

fn integral(args: &IntegralArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let e = parse_instance(&args.profile)?;
    if args.list_fixed_points {
        for (i, d) in enumerate_fixed_points(&e).iter().enumerate() {
            match format {
                Format::Plain => {
                    emit(out, format_args!("fixed point {}:", i + 1))?;
                    emit(out, format_args!("{d}"))?;
                }
                Format::Records => record(
                    out,
                    serde_json::json!({
                        "record": "fixed-point",
                        "index": i + 1,
                        "decoration": d.to_string(),
                    }),
                )?,
            }
        }
    }
    let method: Method = args.method.into();
    let value = intersection_number(&e, method)?;
    match format {
        Format::Plain => emit(out, format_args!("value = {value}")),
        Format::Records => record(
            out,
            serde_json::json!({
                "record": "integral",
                "instance": e.to_string(),
                "method": format!("{:?}", method),
                "value": value.to_string(),
            }),
        ),
    }
}

fn bounds(args: &ProfileArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let e = parse_instance(args)?;
    let lower = count_mismatched_colorings(&e)?;
    let value = intersection_number(&e, Method::Both)?;
    let upper = count_matchings(&e)?;
    if !(lower <= value && value <= upper) {
        return Err(Error::Inconsistency(format!(
            "bounds {lower} ≤ {value} ≤ {upper} fail on {e}"
        )));
    }
    match format {
        Format::Plain => {
            emit(out, format_args!("colorings (lower bound) = {lower}"))?;
            emit(out, format_args!("value = {value}"))?;
            emit(out, format_args!("matchings (upper bound) = {upper}"))
        }
        Format::Records => record(
            out,
            serde_json::json!({
                "record": "bounds",
                "instance": e.to_string(),
                "colorings": lower.to_string(),
                "value": value.to_string(),
                "matchings": upper.to_string(),
            }),
        ),
    }
}

fn nonzero(args: &ProfileArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let e = parse_instance(args)?;
    let report = nonzero_predicate(&e);
    match format {
        Format::Plain => {
            for row in &report.rows {
                emit(
                    out,
                    format_args!(
                        "color C{}: k = {} {} {} — {}",
                        row.color + 1,
                        row.exponent_total,
                        if row.holds { "≤" } else { ">" },
                        row.bound,
                        if row.holds { "holds" } else { "fails" }
                    ),
                )?;
            }
            emit(out, format_args!("nonzero = {}", report.nonzero))
        }
        Format::Records => {
            for row in &report.rows {
                record(
                    out,
                    serde_json::json!({
                        "record": "inequality",
                        "color": row.color + 1,
                        "exponent_total": row.exponent_total,
                        "bound": row.bound,
                        "holds": row.holds,
                    }),
                )?;
            }
            record(
                out,
                serde_json::json!({
                    "record": "nonzero",
                    "instance": e.to_string(),
                    "nonzero": report.nonzero,
                }),
            )
        }
    }
}

fn load_graph(args: &GraphArgs) -> Result<SimpleGraph> {
    let text = std::fs::read_to_string(&args.file).map_err(|e| {
        Error::InvalidInput(format!("cannot read {}: {e}", args.file.display()))
    })?;
    SimpleGraph::from_text(&text)
}

fn aco(args: &GraphArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let gamma = load_graph(args)?;
    let count = gamma.count_acyclic_orientations();
    match format {
        Format::Plain => emit(out, format_args!("acyclic orientations = {count}")),
        Format::Records => record(
            out,
            serde_json::json!({
                "record": "aco",
                "vertices": gamma.vertex_count(),
                "edges": gamma.edge_count(),
                "count": count,
            }),
        ),
    }
}

fn strata_sum(args: &StrataArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let gamma = load_graph(&args.graph)?;
    let n = gamma.vertex_count();
    let index = |label: usize, name: &str| -> Result<usize> {
        if label == 0 || label > n {
            return Err(Error::InvalidInput(format!(
                "{name} = {label} out of range 1..={n}"
            )));
        }
        Ok(label - 1)
    };
    let p = index(args.p, "p")?;
    let q = index(args.q, "q")?;
    if p == q {
        return Err(Error::InvalidInput("p and q must differ".into()));
    }
    let (h, _) = gamma.delete_vertices(&[p, q])?;
    let v = h.vertex_count();
    if v > 16 {
        return Err(Error::InvalidInput(format!(
            "{v} non-dominating vertices exceed the supported 16"
        )));
    }
    // Tree-by-tree enumeration (which also validates that p and q dominate)
    // up to 6 vertices; the subset-convolution route beyond.
    let sum = if v <= 6 {
        let per_tree = alternating_strata_sum(&gamma, p, q)?;
        let fast = fast_strata_sum(&h);
        if per_tree != fast {
            return Err(Error::Inconsistency(format!(
                "tree-by-tree sum {per_tree} ≠ subset-convolution sum {fast}"
            )));
        }
        per_tree
    } else {
        crate::strata::check_dominating(&gamma, p, q)?;
        fast_strata_sum(&h)
    };
    let aco = h.count_acyclic_orientations();
    let sign = if v % 2 == 1 { 1i64 } else { -1 };
    if sum != sign * aco as i64 {
        return Err(Error::Inconsistency(format!(
            "stable-tree sum {sum} ≠ (−1)^(v−1)·|ACO| = {}",
            sign * aco as i64
        )));
    }
    match format {
        Format::Plain => {
            emit(out, format_args!("stable-tree sum = {sum}"))?;
            emit(out, format_args!("acyclic orientations = {aco}"))?;
            emit(
                out,
                format_args!("sign = {sign} (equals (-1)^(v-1) with v = {v})"),
            )
        }
        Format::Records => record(
            out,
            serde_json::json!({
                "record": "strata-sum",
                "sum": sum,
                "aco": aco,
                "sign": sign,
                "reduced_vertices": v,
            }),
        ),
    }
}

fn verify(args: &VerifyArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let reports: Vec<SweepReport> = vec![
        merge_split_sweep(args.n_max.min(8)),
        underline_involution_sweep(args.n_max),
        hue_involution_sweep(args.n_max),
        oracle_equivalence_sweep(args.n_max),
        nonvanishing_sweep(args.n_max),
        strata_sum_sweep(args.v_max, args.per_tree_max),
        strata_involution_sweep(args.per_tree_max),
    ];
    let mut all_ok = true;
    for report in &reports {
        all_ok &= report.passed();
        match format {
            Format::Plain => emit(out, format_args!("{report}"))?,
            Format::Records => record(
                out,
                serde_json::json!({
                    "record": "sweep",
                    "name": report.name,
                    "checks": report.checks,
                    "violations": report.violations,
                    "passed": report.passed(),
                }),
            )?,
        }
    }
    if !all_ok {
        return Err(Error::Inconsistency(
            "at least one verification sweep found violations".into(),
        ));
    }
    if format == Format::Plain {
        emit(out, format_args!("all sweeps passed"))?;
    }
    Ok(())
}
