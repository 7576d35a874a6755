use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use maxmod::gadget::{build_gadget, validate_aecp, witness_to_partition, GadgetParams};
use maxmod::io::{labelled_parts, parse_edge_list, parse_partition, write_edge_list};
use maxmod::oracle::{brute_force, brute_force_bounded, Restriction};
use maxmod::treedecomp::{self, parse_td, write_td, Heuristic, TreeDecomposition};
use maxmod::twdp::{self, Mode};
use maxmod::vc::{self, vertex_cover_at_most, VcOptions};
use maxmod::{connsub, corpus, deficit, score_partition, tw_degree_lower_bound, Error, Graph, Partition, Score};
use num_bigint::BigInt;

use crate::report::{gadget_metadata, Exact, GadgetReport, SolveReport, StatsReport, TdReport, SCHEMA};
use crate::{GadgetArgs, HeuristicArg, Method, Output, SolveArgs};

const AUTO_BRUTE_N: usize = 10;
const AUTO_COVER: usize = 8;
const AUTO_WIDTH: usize = 4;
const AUTO_SUBGRAPHS: usize = 1_000_000;
const AUTO_EPSILON: f64 = 0.1;
/// Largest cover `stats` searches for.
const STATS_COVER_CAP: usize = 16;

/// A library error whose message has been rewritten for the user (labels
/// instead of indices); the exit code still follows the original error.
#[derive(Debug)]
pub struct Reported {
    pub error: Error,
    pub message: String,
}

impl std::fmt::Display for Reported {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Reported {}

fn error_code(e: &Error) -> u8 {
    match e {
                Error::SelfLoop { .. }
                | Error::DuplicateEdge { .. }
                | Error::Parse { .. }
                | Error::UnknownVertex(_)
                | Error::InvalidArgument(_) => 2,
                Error::CapExceeded { .. }
                | Error::StateBudget { .. }
                | Error::SubgraphBudget { .. }
                | Error::SearchBudget { .. } => 3,
                Error::InvalidPartition(_)
                | Error::InvalidDecomposition(_)
                | Error::InvalidAecp(_)
                | Error::InvalidAlpha(_)
                | Error::InvalidWitness(_)
                | Error::NotACover(..) => 4,
                _ => 1,
    }
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(r) = cause.downcast_ref::<Reported>() {
            return error_code(&r.error);
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return error_code(e);
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_edge_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn render<T: serde::Serialize>(output: Output, report: &T, text: impl FnOnce(&T) -> String) -> Result<String> {
    Ok(match output {
        Output::Json => serde_json::to_string_pretty(report)? + "\n",
        Output::Text => text(report),
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Brute => "brute",
        Method::Tw => "tw",
        Method::TwApprox => "tw-approx",
        Method::Connsub => "connsub",
        Method::Vc => "vc",
    }
}

/// The `auto` rule: brute force on small graphs, then vertex cover,
/// treewidth, connected subgraphs, and finally the approximation.
fn choose_method(g: &Graph, td: Option<&TreeDecomposition>) -> (Method, String) {
    if g.n() <= AUTO_BRUTE_N {
        return (Method::Brute, format!("n = {} <= {AUTO_BRUTE_N}", g.n()));
    }
    let core = g.strip_isolated().graph;
    if let Some(cover) = vertex_cover_at_most(&core, AUTO_COVER) {
        return (Method::Vc, format!("vertex cover {} <= {AUTO_COVER}", cover.len()));
    }
    let width = td.map_or_else(|| treedecomp::heuristic_decompose(&core).width(), |t| t.width());
    if width <= AUTO_WIDTH {
        return (Method::Tw, format!("width {width} <= {AUTO_WIDTH}"));
    }
    if let Ok(h) = connsub::count_connected_subgraphs(g, AUTO_SUBGRAPHS) {
        return (Method::Connsub, format!("{h} connected subgraphs <= {AUTO_SUBGRAPHS}"));
    }
    (
        Method::TwApprox,
        format!("width {width}, more than {AUTO_SUBGRAPHS} connected subgraphs; epsilon = {AUTO_EPSILON}"),
    )
}

pub fn solve(args: &SolveArgs) -> Result<String> {
    let start = Instant::now();
    let g = read_graph(&args.graph)?;
    let td = match &args.td {
        Some(path) => {
            let text = read(path)?;
            let pace = parse_td(&text).with_context(|| format!("parsing {}", path.display()))?;
            Some(pace.resolve(&g)?)
        }
        None => None,
    };
    if let Some(td) = &td {
        let violations = treedecomp::validate(&g, td);
        if !violations.is_empty() {
            let listed: Vec<String> = violations.iter().map(|v| v.describe(&g)).collect();
            let message = format!(
                "decomposition {} is invalid: {}",
                args.td.as_ref().unwrap().display(),
                listed.join("; ")
            );
            return Err(Reported { error: Error::InvalidDecomposition(violations), message }.into());
        }
    }
    let (method, reason) = match args.method {
        Method::Auto => {
            let (mut m, mut why) = choose_method(&g, td.as_ref());
            if args.max_parts.is_some() && !matches!(m, Method::Brute | Method::Tw) {
                why = format!("{why}; --max-parts needs tw");
                m = Method::Tw;
            }
            eprintln!("auto: using {} ({why})", method_name(m));
            (m, Some(why))
        }
        m => (m, None),
    };
    solve_with(&g, method, reason, td.as_ref(), args, start)
}

fn solve_with(
    g: &Graph,
    method: Method,
    reason: Option<String>,
    td: Option<&TreeDecomposition>,
    args: &SolveArgs,
    start: Instant,
) -> Result<String> {
    let mut counters = BTreeMap::new();
    let mut warnings = Vec::new();
    let name = method_name(method).to_string();
    if args.max_parts.is_some() && !matches!(method, Method::Brute | Method::Tw) {
        return Err(Error::InvalidArgument(format!("--max-parts is supported by brute and tw, not {name}")).into());
    }
    if g.m() == 0 {
        warnings.push("edgeless graph: q* = 1 by convention".into());
        let partition = Partition::singletons(g.n());
        return finish(g, name, reason, Exact::one(), partition, false, counters, warnings, start, args.out.output);
    }
    let (q, partition): (Score, Partition) = match method {
        Method::Brute => {
            let sol = match args.max_parts {
                Some(c) => {
                    counters.insert("max_parts", c as u64);
                    brute_force_bounded::<i128>(g, c)?
                }
                None => brute_force::<i128>(g, Restriction::None)?,
            };
            (sol.q, sol.partition)
        }
        Method::Tw | Method::TwApprox => {
            let mode = match (method, args.max_parts) {
                (Method::TwApprox, _) => {
                    counters.insert("max_parts", twdp::parts_for_epsilon(args.epsilon)? as u64);
                    Mode::Approximate(args.epsilon)
                }
                (_, Some(c)) => {
                    counters.insert("max_parts", c as u64);
                    Mode::Bounded(c)
                }
                _ => Mode::Exact,
            };
            let out = twdp::solve_graph::<i128>(g, td, Heuristic::MinFill, mode, args.cap_states)?;
            counters.insert("width", out.width as u64);
            counters.insert("nice_nodes", out.stats.nodes as u64);
            counters.insert("states", out.stats.states as u64);
            counters.insert("largest_table", out.stats.largest_table as u64);
            (out.solution.q, out.solution.partition)
        }
        Method::Connsub => {
            let (sol, stats) = connsub::solve::<i128>(g, args.cap_subgraphs)?;
            counters.insert("subgraphs", stats.subgraphs as u64);
            counters.insert("splits", stats.splits);
            (sol.q, sol.partition)
        }
        Method::Vc => {
            let out = vc::solve::<i128>(g, VcOptions::default())?;
            counters.insert("cover_size", out.cover.len() as u64);
            counters.insert("cover_partitions", out.cover_partitions as u64);
            counters.insert("search_nodes", out.nodes);
            (out.solution.q, out.solution.partition)
        }
        Method::Auto => unreachable!("auto is resolved before dispatch"),
    };
    let rescored = score_partition::<i128>(g, &partition)?.q;
    if rescored != q {
        bail!("internal error: {name} reported {q} but its partition scores {rescored}");
    }
    finish(g, name, reason, Exact::from_score(&q), partition, true, counters, warnings, start, args.out.output)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    g: &Graph,
    method: String,
    method_reason: Option<String>,
    q: Exact,
    partition: Partition,
    rescored: bool,
    counters: BTreeMap<&'static str, u64>,
    warnings: Vec<String>,
    start: Instant,
    output: Output,
) -> Result<String> {
    let report = SolveReport {
        schema: SCHEMA,
        command: "solve",
        method,
        method_reason,
        n: g.n(),
        m: g.m(),
        q,
        coverage: None,
        degree_tax: None,
        deficit: None,
        parts: partition.len(),
        partition: labelled_parts(g, &partition),
        rescored,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        counters,
        warnings,
    };
    render(output, &report, SolveReport::text)
}

pub fn score(graph: &Path, partition: &Path, output: Output) -> Result<String> {
    let start = Instant::now();
    let g = read_graph(graph)?;
    let p = parse_partition(&g, &read(partition)?).with_context(|| format!("parsing {}", partition.display()))?;
    let b = score_partition::<BigInt>(&g, &p)?;
    let d = deficit::<BigInt>(&g, &p)?;
    let report = SolveReport {
        schema: SCHEMA,
        command: "score",
        method: "score".into(),
        method_reason: None,
        n: g.n(),
        m: g.m(),
        q: Exact::from_score(&b.q),
        coverage: Some(Exact::from_score(&b.coverage)),
        degree_tax: Some(Exact::from_score(&b.degree_tax)),
        deficit: Some(Exact::from_score(&d)),
        parts: p.len(),
        partition: labelled_parts(&g, &p),
        rescored: true,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        counters: BTreeMap::new(),
        warnings: Vec::new(),
    };
    render(output, &report, SolveReport::text)
}

fn default_prefix(input: &Path) -> PathBuf {
    let mut p = input.with_extension("");
    p.as_mut_os_string().push(".gadget");
    p
}

pub fn gadget(args: &GadgetArgs) -> Result<String> {
    let h = read_graph(&args.graph)?;
    let anchors: Vec<usize> = args
        .anchors
        .iter()
        .map(|l| h.vertex_by_label(l).ok_or_else(|| Error::UnknownVertex(l.clone())))
        .collect::<Result<_, _>>()?;
    let violations = validate_aecp(&h, &anchors);
    if !violations.is_empty() {
        let listed: Vec<String> = violations.iter().map(|v| v.describe(&h)).collect();
        let message = format!(
            "{} is not a valid anchored instance:\n  {}",
            args.graph.display(),
            listed.join("\n  ")
        );
        return Err(Reported { error: Error::InvalidAecp(violations), message }.into());
    }
    let mut warnings = Vec::new();
    let params = GadgetParams::new(h.n() as u64, h.m(), anchors.len() as u64, args.unsafe_alpha)?;
    if params.unsafe_alpha {
        warnings.push(format!(
            "alpha = {} is below 32·|E(H)|² = {}; the value q0 is exact but the reduction's guarantee does not apply",
            params.alpha,
            32 * h.m() * h.m()
        ));
    }
    let prefix = args.out.clone().unwrap_or_else(|| default_prefix(&args.graph));
    let meta_path = prefix.with_extension(extension(&prefix, "meta"));
    let mut report = GadgetReport {
        schema: SCHEMA,
        command: "gadget",
        alpha: params.alpha,
        beta: params.beta,
        m: params.m,
        s: params.s,
        r: params.r,
        vertices: params.vertices(),
        q0: Exact::from_score(&params.q0()),
        unsafe_alpha: params.unsafe_alpha,
        anchors: args.anchors.clone(),
        files: Vec::new(),
        witness: None,
        warnings,
    };
    if !args.metadata_only {
        let gadget = build_gadget(&h, &anchors, args.unsafe_alpha)
            .context("building the gadget (use --metadata-only for parameters alone)")?;
        let edges_path = prefix.with_extension(extension(&prefix, "edges"));
        fs::write(&edges_path, write_edge_list(&gadget.graph))
            .with_context(|| format!("writing {}", edges_path.display()))?;
        report.files.push(edges_path.display().to_string());
        if let Some(path) = &args.check_witness {
            let witness = parse_partition(&h, &read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            let lifted = witness_to_partition(&gadget, &witness)?;
            let q = score_partition::<BigInt>(&gadget.graph, &lifted)?.q;
            if q != params.q0() {
                return Err(Error::InvalidWitness(format!("lifted witness scores {q}, q0 = {}", params.q0())).into());
            }
            report.witness = Some(format!("witness verified: q = q0 = {q}"));
        }
    }
    fs::write(&meta_path, gadget_metadata(&report, &params.q0()))
        .with_context(|| format!("writing {}", meta_path.display()))?;
    report.files.push(meta_path.display().to_string());
    render(args.output.output, &report, GadgetReport::text)
}

/// `prefix.with_extension(..)` would replace a dotted suffix of the prefix;
/// this keeps it.
fn extension(prefix: &Path, ext: &str) -> String {
    match prefix.extension() {
        Some(old) => format!("{}.{ext}", old.to_string_lossy()),
        None => ext.to_string(),
    }
}

pub fn stats(graph: &Path, cap_subgraphs: usize, output: Output) -> Result<String> {
    let g = read_graph(graph)?;
    let core = g.strip_isolated().graph;
    let degrees: Vec<u64> = (0..g.n()).map(|v| g.degree(v)).collect();
    let width = if core.n() == 0 { 0 } else { treedecomp::heuristic_decompose(&core).width() };
    let vertex_cover = (0..=STATS_COVER_CAP).find_map(|k| vertex_cover_at_most(&core, k)).map(|c| c.len());
    let connected_subgraphs = connsub::count_connected_subgraphs(&g, cap_subgraphs).ok();
    let report = StatsReport {
        schema: SCHEMA,
        command: "stats",
        n: g.n(),
        m: g.m(),
        isolated: g.isolated_vertices().len(),
        components: g.connected_components().len(),
        degree_min: degrees.iter().copied().min().unwrap_or(0),
        degree_max: g.max_degree(),
        degree_mean: if g.n() == 0 { 0.0 } else { 2.0 * g.m() as f64 / g.n() as f64 },
        width,
        vertex_cover,
        connected_subgraphs,
        subgraph_cap: cap_subgraphs,
        lower_bound: tw_degree_lower_bound::<f64>(&g, width),
    };
    render(output, &report, StatsReport::text)
}

pub fn decompose(graph: &Path, heuristic: HeuristicArg, seed: u64, out: Option<&Path>) -> Result<String> {
    let g = read_graph(graph)?;
    let h = match heuristic {
        HeuristicArg::MinFill => Heuristic::MinFill,
        HeuristicArg::MinDegree => Heuristic::MinDegree,
        HeuristicArg::Random => Heuristic::Random(seed),
    };
    let text = write_td(&g, &treedecomp::decompose(&g, h));
    match out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn validate_td(graph: &Path, td_path: &Path, output: Output) -> Result<String> {
    let g = read_graph(graph)?;
    let pace = parse_td(&read(td_path)?).with_context(|| format!("parsing {}", td_path.display()))?;
    let td = pace.resolve(&g)?;
    let violations = treedecomp::validate(&g, &td);
    let report = TdReport {
        schema: SCHEMA,
        command: "validate-td",
        valid: violations.is_empty(),
        width: td.width(),
        bags: td.len(),
        violations: violations.iter().map(|v| v.describe(&g)).collect(),
    };
    let text = render(output, &report, TdReport::text)?;
    if violations.is_empty() {
        Ok(text)
    } else {
        print!("{text}");
        let message = format!("invalid tree decomposition: {} violation(s)", violations.len());
        Err(Reported { error: Error::InvalidDecomposition(violations), message }.into())
    }
}

pub fn generate(n: usize, p: f64, seed: u64) -> Result<String> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")).into());
    }
    Ok(write_edge_list(&corpus::gnp(n, p, seed)))
}
