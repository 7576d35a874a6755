//! Report types shared by the subcommands. JSON reports carry `"schema": 1`;
//! every modularity value is given as an exact numerator over `4m²`, the
//! reduced fraction and a 12-place decimal.

use std::collections::BTreeMap;
use std::fmt::Write;

use maxmod::{ScaledScore, ScoreInt};
use serde::Serialize;

pub const SCHEMA: u32 = 1;
const PLACES: usize = 12;

/// An exact value. Integers are strings so that they survive JSON readers
/// without 128-bit or arbitrary-precision support.
#[derive(Clone, Debug, Serialize)]
pub struct Exact {
    pub numerator: String,
    pub denominator: String,
    pub fraction: String,
    pub decimal: String,
}

impl Exact {
    pub fn from_score<S: ScoreInt>(q: &ScaledScore<S>) -> Self {
        Self {
            numerator: q.num().to_big().to_string(),
            denominator: q.scale().to_big().to_string(),
            fraction: q.to_string(),
            decimal: q.to_decimal_string(PLACES),
        }
    }

    /// The edgeless convention `q = 1`, with no `4m²` scale.
    pub fn one() -> Self {
        Self {
            numerator: "1".into(),
            denominator: "1".into(),
            fraction: "1".into(),
            decimal: format!("1.{}", "0".repeat(PLACES)),
        }
    }

    fn text(&self) -> String {
        format!(
            "{} = {} ({} / {})",
            self.fraction, self.decimal, self.numerator, self.denominator
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub schema: u32,
    pub command: &'static str,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method_reason: Option<String>,
    pub n: usize,
    pub m: u64,
    pub q: Exact,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Exact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_tax: Option<Exact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deficit: Option<Exact>,
    pub parts: usize,
    pub partition: Vec<Vec<String>>,
    pub rescored: bool,
    pub elapsed_ms: f64,
    pub counters: BTreeMap<&'static str, u64>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        match &self.method_reason {
            Some(reason) => writeln!(out, "method: {} ({reason})", self.method),
            None => writeln!(out, "method: {}", self.method),
        }
        .unwrap();
        writeln!(out, "graph: n = {}, m = {}", self.n, self.m).unwrap();
        writeln!(out, "q = {}", self.q.text()).unwrap();
        for (name, v) in [("q^E", &self.coverage), ("q^D", &self.degree_tax), ("deficit", &self.deficit)] {
            if let Some(v) = v {
                writeln!(out, "{name} = {}", v.text()).unwrap();
            }
        }
        writeln!(out, "parts: {}", self.parts).unwrap();
        for part in &self.partition {
            writeln!(out, "  {}", part.join(" ")).unwrap();
        }
        writeln!(out, "rescored: {}", if self.rescored { "ok" } else { "skipped" }).unwrap();
        writeln!(out, "time: {:.3} ms", self.elapsed_ms).unwrap();
        for (k, v) in &self.counters {
            writeln!(out, "{k}: {v}").unwrap();
        }
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    pub schema: u32,
    pub command: &'static str,
    pub n: usize,
    pub m: u64,
    pub isolated: usize,
    pub components: usize,
    pub degree_min: u64,
    pub degree_max: u64,
    pub degree_mean: f64,
    pub width: usize,
    /// `None` when no cover of size at most the search cap exists.
    pub vertex_cover: Option<usize>,
    /// `None` when the count exceeds the cap.
    pub connected_subgraphs: Option<usize>,
    pub subgraph_cap: usize,
    pub lower_bound: f64,
}

impl StatsReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let capped = |v: Option<usize>, cap: String| v.map_or(cap, |x| x.to_string());
        writeln!(out, "n = {}, m = {}", self.n, self.m).unwrap();
        writeln!(out, "isolated vertices: {}", self.isolated).unwrap();
        writeln!(out, "components: {}", self.components).unwrap();
        writeln!(
            out,
            "degree: min {}, max {}, mean {:.3}",
            self.degree_min, self.degree_max, self.degree_mean
        )
        .unwrap();
        writeln!(out, "heuristic width: {}", self.width).unwrap();
        writeln!(out, "vertex cover: {}", capped(self.vertex_cover, "> cap".into())).unwrap();
        writeln!(
            out,
            "connected subgraphs: {}",
            capped(self.connected_subgraphs, format!("> {}", self.subgraph_cap))
        )
        .unwrap();
        writeln!(out, "lower bound on q*: {:.12}", self.lower_bound).unwrap();
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetReport {
    pub schema: u32,
    pub command: &'static str,
    pub alpha: u64,
    pub beta: u64,
    pub m: u64,
    pub s: u64,
    pub r: u64,
    pub vertices: u64,
    pub q0: Exact,
    pub unsafe_alpha: bool,
    pub anchors: Vec<String>,
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub warnings: Vec<String>,
}

impl GadgetReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "alpha = {}, beta = {}, m = {}, s = {}, r = {}",
            self.alpha, self.beta, self.m, self.s, self.r
        )
        .unwrap();
        writeln!(out, "vertices: {}", self.vertices).unwrap();
        writeln!(out, "q0 = {}", self.q0.text()).unwrap();
        writeln!(out, "anchors: {}", self.anchors.join(" ")).unwrap();
        for f in &self.files {
            writeln!(out, "wrote {f}").unwrap();
        }
        if let Some(w) = &self.witness {
            writeln!(out, "{w}").unwrap();
        }
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TdReport {
    pub schema: u32,
    pub command: &'static str,
    pub valid: bool,
    pub width: usize,
    pub bags: usize,
    pub violations: Vec<String>,
}

impl TdReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        if self.valid {
            writeln!(out, "valid: width {}, {} bags", self.width, self.bags).unwrap();
        } else {
            writeln!(out, "invalid: {} violation(s)", self.violations.len()).unwrap();
            for v in &self.violations {
                writeln!(out, "  {v}").unwrap();
            }
        }
        out
    }
}

/// Sidecar for a gadget edge list: one `key=value` per line, `#` comments.
/// Keys: `alpha`, `beta`, `m`, `s`, `r`, `q0_num`, `q0_den` (the reduced
/// fraction), `unsafe`, `anchors` (space-separated labels).
pub fn gadget_metadata(report: &GadgetReport, q0: &ScaledScore<num_bigint::BigInt>) -> String {
    let (num, den) = q0.fraction();
    let mut out = String::from("# maxmod gadget metadata\n");
    for (k, v) in [
        ("alpha", report.alpha.to_string()),
        ("beta", report.beta.to_string()),
        ("m", report.m.to_string()),
        ("s", report.s.to_string()),
        ("r", report.r.to_string()),
        ("q0_num", num.to_string()),
        ("q0_den", den.to_string()),
        ("unsafe", report.unsafe_alpha.to_string()),
        ("anchors", report.anchors.join(" ")),
    ] {
        writeln!(out, "{k}={v}").unwrap();
    }
    out
}
