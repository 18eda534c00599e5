//! Command implementations behind the `seqgraph` binary.
//!
//! Every command returns its report as a JSON value (and optionally an SVG
//! document) so the binary and the tests share one code path.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seqgraph_core::embedding::{
    canonical_rotation_of, chamanara_embed, face_trace, torus_embedding, verify_embedding,
    ChamanaraEmbedding, FaceReport, Verification,
};
use seqgraph_core::gaps::{circulant_step, is_nice_permutation, three_gap_holds, GapProfile};
use seqgraph_core::graph::{build_graph, is_same_labeled_graph, minor_reduce, GraphJson, MultiGraph};
use seqgraph_core::iet::{iet_orbit, IetConfig, IetMap};
use seqgraph_core::sequence::{
    kronecker_prefix, vdc_prefix, KroneckerOrders, KroneckerParams, SortedSequence, Theta,
    DEFAULT_PRECISION_BITS,
};
use seqgraph_core::Error;

mod svg;

pub use svg::chamanara_svg;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const PRECISION: i32 = 3;
    pub const NOT_ADMISSIBLE: i32 = 4;
    pub const VERIFICATION: i32 = 5;
    pub const ORBIT_REVISIT: i32 = 6;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::USAGE,
            kind: "usage",
            message: message.into(),
        }
    }

    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            kind,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self.kind, "message": self.message, "exit_code": self.code })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionInsufficient { .. } => {
                CliError::new(exit::PRECISION, "precision_insufficient", e.to_string())
            }
            Error::InvalidRange { .. } => CliError::new(exit::USAGE, "invalid_range", e.to_string()),
            Error::Parse(_) => CliError::new(exit::USAGE, "parse", e.to_string()),
            _ => CliError::new(exit::USAGE, "invalid_input", e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug, Clone)]
#[command(name = "seqgraph", version, about = "Sequence graphs: generation, gap analysis, minors and surface embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Build the sequence graph of the first N terms.
    Generate(ReportArgs),
    /// Gap profile, three-gap check, nice-N flag and circulant structure.
    Analyze(ReportArgs),
    /// Build and verify a torus or Chamanara-surface embedding.
    Embed(EmbedArgs),
    /// Reduce G_M to G'_N by deletions and contractions.
    Minor(MinorArgs),
    /// Orbit of an interval exchange, its graph and a genus report.
    Iet(IetArgs),
    /// Nice N up to --n for a Kronecker sequence, with torus genus.
    Scan(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Kronecker,
    Vdc,
    Iet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct SequenceArgs {
    #[arg(long, value_enum, default_value = "kronecker")]
    pub family: Family,
    /// `golden`, `sqrt2`, a decimal, or an expression such as `sqrt(3)`.
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long)]
    pub base: Option<u64>,
    /// Number of terms.
    #[arg(long)]
    pub n: usize,
    /// Working precision in bits for real-valued sequences.
    #[arg(long)]
    pub precision: Option<u32>,
    /// TOML file describing an interval exchange.
    #[arg(long)]
    pub iet_spec: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// Embed G'_N (closing C1 edge removed) as a minor of a larger
    /// admissible graph when N itself is not admissible.
    #[arg(long)]
    pub drop_last_edge: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct MinorArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// Size of the host graph G_M.
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct IetArgs {
    #[arg(long)]
    pub iet_spec: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub precision: Option<u32>,
    /// Delete the closing C1 edge (N-1, 0) before computing the genus.
    #[arg(long)]
    pub drop_last_edge: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Svg(String),
}

impl Output {
    pub fn render(&self) -> String {
        match self {
            Output::Json(v) => {
                let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Output::Svg(s) => s.clone(),
        }
    }

    pub fn json(&self) -> Option<&Value> {
        match self {
            Output::Json(v) => Some(v),
            Output::Svg(_) => None,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, S>(args: I) -> CliResult<(Output, Option<PathBuf>)>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::usage(e.to_string()))?;
    run(&cli.command)
}

/// Runs a parsed command; returns the output and where it should go.
pub fn run(command: &Command) -> CliResult<(Output, Option<PathBuf>)> {
    match command {
        Command::Generate(a) => Ok((Output::Json(cmd_generate(&a.seq)?), a.out.clone())),
        Command::Analyze(a) => Ok((Output::Json(cmd_analyze(&a.seq)?), a.out.clone())),
        Command::Embed(a) => Ok((cmd_embed(a)?, a.out.clone())),
        Command::Minor(a) => Ok((Output::Json(cmd_minor(&a.seq, a.m)?), a.out.clone())),
        Command::Iet(a) => Ok((Output::Json(cmd_iet(a)?), a.out.clone())),
        Command::Scan(a) => Ok((Output::Json(cmd_scan(&a.seq)?), a.out.clone())),
    }
}

/// Writes the rendered output to `out`, or returns it for stdout.
pub fn emit(output: &Output, out: Option<&PathBuf>) -> CliResult<Option<String>> {
    let text = output.render();
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| CliError::new(exit::USAGE, "io", format!("{}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn theta_of(args: &SequenceArgs) -> CliResult<Theta> {
    Ok(Theta::parse(args.theta.as_deref().unwrap_or("golden"))?)
}

fn kronecker_params(args: &SequenceArgs) -> CliResult<KroneckerParams> {
    let bits = args.precision.unwrap_or(DEFAULT_PRECISION_BITS);
    if bits < 16 {
        return Err(CliError::usage(format!("precision {bits} is too small")));
    }
    Ok(KroneckerParams::with_precision(theta_of(args)?, bits))
}

fn check_flags(args: &SequenceArgs) -> CliResult<()> {
    let stray = match args.family {
        Family::Kronecker => [args.base.map(|_| "--base"), args.iet_spec.as_ref().map(|_| "--iet-spec")],
        Family::Vdc => [args.theta.as_ref().map(|_| "--theta"), args.iet_spec.as_ref().map(|_| "--iet-spec")],
        Family::Iet => [args.theta.as_ref().map(|_| "--theta"), args.base.map(|_| "--base")],
    };
    if let Some(flag) = stray.into_iter().flatten().next() {
        return Err(CliError::usage(format!(
            "{flag} does not apply to --family {}",
            family_name(args.family)
        )));
    }
    if args.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    Ok(())
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Kronecker => "kronecker",
        Family::Vdc => "vdc",
        Family::Iet => "iet",
    }
}

fn load_iet(path: &PathBuf, precision: Option<u32>) -> CliResult<IetMap> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(exit::USAGE, "io", format!("{}: {e}", path.display())))?;
    Ok(IetConfig::parse(&text)?.build(precision)?)
}

/// Orbit of `0` under `map`, failing with exit 6 on a revisit.
fn iet_sequence(map: &IetMap, n: usize) -> CliResult<SortedSequence> {
    let report = iet_orbit(map, map.origin(), n, &map.default_tolerance())?;
    if let Some(i) = report.revisit_index {
        return Err(CliError::new(
            exit::ORBIT_REVISIT,
            "orbit_revisit",
            format!("orbit point {i} is within tolerance of an earlier point"),
        ));
    }
    Ok(report.into_sequence()?)
}

/// The first `n` terms of the configured sequence, sorted.
pub fn build_sequence(args: &SequenceArgs, n: usize) -> CliResult<SortedSequence> {
    check_flags(args)?;
    match args.family {
        Family::Kronecker => Ok(kronecker_prefix(&kronecker_params(args)?, n)?),
        Family::Vdc => Ok(vdc_prefix(args.base.unwrap_or(2), n)?),
        Family::Iet => {
            let path = args
                .iet_spec
                .as_ref()
                .ok_or_else(|| CliError::usage("--family iet needs --iet-spec"))?;
            iet_sequence(&load_iet(path, args.precision)?, n)
        }
    }
}

fn describe(args: &SequenceArgs) -> CliResult<Value> {
    Ok(match args.family {
        Family::Kronecker => json!({
            "family": "kronecker",
            "theta": theta_of(args)?.name(),
            "precision_bits": kronecker_params(args)?.effective_bits(args.n),
        }),
        Family::Vdc => json!({ "family": "vdc", "base": args.base.unwrap_or(2) }),
        Family::Iet => json!({
            "family": "iet",
            "iet_spec": args.iet_spec.as_ref().map(|p| p.display().to_string()),
        }),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Graph JSON (`n`, `edges`) plus the sorting permutation.
pub fn cmd_generate(args: &SequenceArgs) -> CliResult<Value> {
    let seq = build_sequence(args, args.n)?;
    let g = build_graph(&seq);
    Ok(merge(
        merge(describe(args)?, to_value(&g.to_json())),
        json!({ "pi": seq.pi() }),
    ))
}

/// Gap profile, three-gap verdict, nice flag and circulant connection set.
pub fn cmd_analyze(args: &SequenceArgs) -> CliResult<Value> {
    let seq = build_sequence(args, args.n)?;
    analysis(&seq).map(|v| merge(describe(args).unwrap_or(json!({})), v))
}

fn analysis(seq: &SortedSequence) -> CliResult<Value> {
    let perm = seq.permutation();
    let profile = GapProfile::from_permutation(perm)?;
    let circulant = circulant_step(perm);
    Ok(json!({
        "n": profile.n,
        "pi1": profile.pi1,
        "pi_last": profile.pi_last,
        "gaps": profile.values(),
        "gap_runs": profile.gaps,
        "gap_count": profile.distinct_count,
        "three_gap": three_gap_holds(perm),
        "nice": is_nice_permutation(perm),
        "circulant": circulant.map(|c| c.steps()),
        "circulant_collapsed": circulant.map(|c| c.collapsed),
    }))
}

/// Verdict of `minor_reduce(G_M, N)` against an independently built `G'_N`.
fn minor_report(host: &SortedSequence, target: &SortedSequence) -> CliResult<(Value, bool)> {
    let n = target.len();
    let reduction = minor_reduce(&build_graph(host), n)?;
    let expected = build_graph(target).without_last_edge();
    let verdict = is_same_labeled_graph(&reduction.graph, &expected);
    Ok((
        json!({
            "host_n": host.len(),
            "n": n,
            "deleted": reduction.deleted,
            "contractions": reduction.contractions,
            "verdict": verdict,
            "reduced": reduction.graph.to_json(),
        }),
        verdict,
    ))
}

pub fn cmd_minor(args: &SequenceArgs, m: usize) -> CliResult<Value> {
    check_flags(args)?;
    if args.n >= m {
        return Err(CliError::new(
            exit::USAGE,
            "invalid_range",
            format!("need N < M, got N = {} and M = {m}", args.n),
        ));
    }
    let host = build_sequence(args, m)?;
    let target = build_sequence(args, args.n)?;
    let (report, _) = minor_report(&host, &target)?;
    Ok(merge(describe(args)?, report))
}

fn power_of_four(n: usize) -> Option<u32> {
    (n >= 4 && n.is_power_of_two() && n.trailing_zeros().is_multiple_of(2)).then(|| n.trailing_zeros() / 2)
}

fn verified_chamanara(m: u32) -> CliResult<(ChamanaraEmbedding, Verification)> {
    let e = chamanara_embed(m)?;
    let v = verify_embedding(&e)?;
    if !v.verified {
        return Err(CliError::new(
            exit::VERIFICATION,
            "verification_failed",
            format!("{} violations, first: {}", v.certificate.len(), to_value(&v.certificate[0])),
        ));
    }
    Ok((e, v))
}

fn chamanara_json(e: &ChamanaraEmbedding, v: &Verification) -> Value {
    let points: Vec<[i64; 2]> = e
        .positions
        .iter()
        .map(|p| [p.x.numer(), p.y.numer()])
        .collect();
    json!({
        "surface": "chamanara",
        "m": e.m,
        "n": e.n,
        "points": points,
        "routes": e.routes,
        "reroutes": v.case_counts[4],
        "verification": v,
    })
}

fn torus_json(n: usize, c: usize) -> CliResult<Value> {
    let t = torus_embedding(n, c)?;
    if t.faces.genus != 1 {
        return Err(CliError::new(
            exit::VERIFICATION,
            "verification_failed",
            format!("circulant rotation of N = {n}, c = {c} has genus {}", t.faces.genus),
        ));
    }
    Ok(json!({
        "surface": "torus",
        "n": n,
        "connection_set": [1, t.c],
        "collapsed": t.c == 1 || t.c == n - 1,
        "rotation_order": t.order,
        "faces": t.faces,
        "genus": t.faces.genus,
        "verified": true,
    }))
}

fn not_admissible(message: String) -> CliError {
    CliError::new(exit::NOT_ADMISSIBLE, "not_admissible", message)
}

pub fn cmd_embed(args: &EmbedArgs) -> CliResult<Output> {
    let seq_args = &args.seq;
    check_flags(seq_args)?;
    let n = seq_args.n;
    match seq_args.family {
        Family::Vdc => {
            if seq_args.base.unwrap_or(2) != 2 {
                return Err(CliError::usage("the Chamanara embedding needs base 2"));
            }
            let (m, minor) = match power_of_four(n) {
                Some(m) => (m, None),
                None if args.drop_last_edge => {
                    let m = (1..=seqgraph_core::embedding::chamanara::MAX_M)
                        .find(|&m| 1usize << (2 * m) > n)
                        .ok_or_else(|| CliError::usage(format!("N = {n} is too large to embed")))?;
                    let host = vdc_prefix(2, 1 << (2 * m))?;
                    let (report, verdict) = minor_report(&host, &vdc_prefix(2, n)?)?;
                    if !verdict {
                        return Err(CliError::new(
                            exit::VERIFICATION,
                            "verification_failed",
                            format!("G'_{n} is not the reduced minor of G_{}", host.len()),
                        ));
                    }
                    (m, Some(report))
                }
                None => {
                    return Err(not_admissible(format!(
                        "N = {n} is not a power of 4; pass --drop-last-edge to embed G'_N as a minor"
                    )))
                }
            };
            let (e, v) = verified_chamanara(m)?;
            if args.format == Format::Svg {
                return Ok(Output::Svg(chamanara_svg(&e)?));
            }
            let embedding = chamanara_json(&e, &v);
            Ok(Output::Json(match minor {
                None => merge(describe(seq_args)?, merge(json!({ "n": n }), embedding)),
                Some(report) => merge(
                    describe(seq_args)?,
                    json!({ "n": n, "minor": report, "host": embedding }),
                ),
            }))
        }
        Family::Kronecker => {
            if args.format == Format::Svg {
                return Err(CliError::usage("SVG output is only available for --family vdc"));
            }
            let params = kronecker_params(seq_args)?;
            let seq = kronecker_prefix(&params, n)?;
            let perm = seq.permutation();
            if n >= 2 && is_nice_permutation(perm) {
                let c = circulant_step(perm).ok_or_else(|| {
                    CliError::new(exit::VERIFICATION, "verification_failed", "nice N but not circulant")
                })?;
                return Ok(Output::Json(merge(describe(seq_args)?, torus_json(n, c.c)?)));
            }
            if !args.drop_last_edge {
                return Err(not_admissible(format!(
                    "N = {n} is not nice; pass --drop-last-edge to embed G'_N as a minor"
                )));
            }
            if n < 2 {
                return Err(CliError::usage("--drop-last-edge needs N >= 2"));
            }
            let host_n = next_nice(&params, n)?;
            let host = kronecker_prefix(&params, host_n)?;
            let (report, verdict) = minor_report(&host, &seq)?;
            if !verdict {
                return Err(CliError::new(
                    exit::VERIFICATION,
                    "verification_failed",
                    format!("G'_{n} is not the reduced minor of G_{host_n}"),
                ));
            }
            let c = circulant_step(host.permutation()).ok_or_else(|| {
                CliError::new(exit::VERIFICATION, "verification_failed", "nice N but not circulant")
            })?;
            Ok(Output::Json(merge(
                describe(seq_args)?,
                json!({ "n": n, "minor": report, "host": torus_json(host_n, c.c)? }),
            )))
        }
        Family::Iet => Err(CliError::usage(
            "no explicit embedding for IET graphs; use the iet command for a genus report",
        )),
    }
}

/// Smallest nice `M > n`.
fn next_nice(params: &KroneckerParams, n: usize) -> CliResult<usize> {
    let limit = 16 * n + 1024;
    for (k, perm) in KroneckerOrders::new(params, limit)?.enumerate() {
        let size = k + 1;
        if size > n && is_nice_permutation(&perm?) {
            return Ok(size);
        }
    }
    Err(CliError::usage(format!("no nice N in ({n}, {limit}]")))
}

fn degree_histogram(g: &MultiGraph) -> Value {
    let mut hist = std::collections::BTreeMap::new();
    for &v in g.vertices() {
        *hist.entry(g.degree(v).to_string()).or_insert(0usize) += 1;
    }
    to_value(&hist)
}

fn genus_report(g: &MultiGraph) -> CliResult<FaceReport> {
    Ok(face_trace(&canonical_rotation_of(g)?)?)
}

pub fn cmd_iet(args: &IetArgs) -> CliResult<Value> {
    if args.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let map = load_iet(&args.iet_spec, args.precision)?;
    let seq = iet_sequence(&map, args.n)?;
    let graph = build_graph(&seq);
    let mg = if args.drop_last_edge {
        graph.without_last_edge()
    } else {
        graph.to_multigraph()
    };
    let genus = genus_report(&mg)?;
    let map_info = match &map {
        IetMap::Finite(t) => json!({
            "kind": "finite",
            "intervals": t.k(),
            "perm": t.perm(),
            "lengths": t.lengths().iter().map(|l| l.to_decimal_string(20)).collect::<Vec<_>>(),
            "convention": t.convention(),
            "precision_bits": t.precision_bits(),
        }),
        IetMap::Odometer => json!({ "kind": "odometer" }),
    };
    let gaps = if args.n >= 2 {
        let p = GapProfile::from_permutation(seq.permutation())?;
        json!({ "gap_count": p.distinct_count, "gaps": p.values() })
    } else {
        Value::Null
    };
    let first_points: Vec<String> = seq.terms().iter().take(8).map(|t| t.to_string()).collect();
    Ok(json!({
        "map": map_info,
        "n": args.n,
        "orbit": { "distinct": true, "first_points": first_points },
        "dropped_last_edge": args.drop_last_edge,
        "graph": {
            "vertices": mg.vertex_count(),
            "edges": mg.edge_count(),
            "connected": mg.is_connected(),
            "degrees": degree_histogram(&mg),
        },
        "gaps": gaps,
        "faces": genus,
        "genus": genus.genus,
    }))
}

/// Every nice `N <= --n` with its connection set and torus genus.
pub fn cmd_scan(args: &SequenceArgs) -> CliResult<Value> {
    check_flags(args)?;
    if args.family != Family::Kronecker {
        return Err(CliError::usage("scan is only defined for --family kronecker"));
    }
    let params = kronecker_params(args)?;
    let mut rows = Vec::new();
    for (k, perm) in KroneckerOrders::new(&params, args.n)?.enumerate() {
        let perm = perm?;
        let n = k + 1;
        if n < 2 || !is_nice_permutation(&perm) {
            continue;
        }
        let c = circulant_step(&perm);
        let genus = match c {
            Some(c) => Some(torus_embedding(n, c.c)?.faces.genus),
            None => None,
        };
        rows.push(json!({
            "n": n,
            "circulant": c.map(|c| c.steps()),
            "genus": genus,
        }));
    }
    let all_tori = rows.iter().all(|r| r["genus"] == json!(1));
    Ok(merge(
        describe(args)?,
        json!({ "n_max": args.n, "nice": rows, "all_genus_one": all_tori }),
    ))
}

/// Parses `generate` output back into a graph.
pub fn parse_generated(text: &str) -> CliResult<seqgraph_core::SequenceGraph> {
    let json: GraphJson = serde_json::from_str(text).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(seqgraph_core::SequenceGraph::from_json(&json)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(family: Family, n: usize) -> SequenceArgs {
        SequenceArgs {
            family,
            theta: None,
            base: None,
            n,
            precision: None,
            iet_spec: None,
        }
    }

    #[test]
    fn analyze_golden() {
        let v = cmd_analyze(&seq(Family::Kronecker, 8)).unwrap();
        assert_eq!(v["nice"], json!(true));
        assert_eq!(v["circulant"], json!([1, 5]));
        let v = cmd_analyze(&seq(Family::Kronecker, 6)).unwrap();
        assert_eq!(v["nice"], json!(false));
        assert_eq!(v["gaps"], json!([5, 2, -3]));
        let v = cmd_analyze(&seq(Family::Vdc, 16)).unwrap();
        assert!(v["gap_count"].as_u64().unwrap() > 3);
    }

    #[test]
    fn power_of_four_detection() {
        assert_eq!(power_of_four(16), Some(2));
        assert_eq!(power_of_four(8), None);
        assert_eq!(power_of_four(1), None);
        assert_eq!(power_of_four(4), Some(1));
    }

    #[test]
    fn minor_range_errors() {
        let e = cmd_minor(&seq(Family::Vdc, 8), 8).unwrap_err();
        assert_eq!(e.code, exit::USAGE);
        let v = cmd_minor(&seq(Family::Vdc, 8), 16).unwrap();
        assert_eq!(v["verdict"], json!(true));
    }

    #[test]
    fn stray_flags_are_usage_errors() {
        let mut a = seq(Family::Vdc, 8);
        a.theta = Some("golden".into());
        assert_eq!(cmd_generate(&a).unwrap_err().code, exit::USAGE);
    }
}
