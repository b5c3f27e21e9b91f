//! Parameter tables, inequality audits and the join conjecture scan.
//!
//! Proven inequalities are cross-checks on the solvers: a failing one means
//! a bug somewhere in this crate. Conjectured inequalities are only reported.
//! Anything the node budget could not decide is marked as skipped, never as
//! passed.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::game::Visibility;
use crate::graph::{emit, join, metrics, Format, Graph};
use crate::scn::{minimum_scn_sets, upsilon};
use crate::solver::{min_cops, SolveError, SolveResult, SolverOptions};

/// Parameters of one graph. Solver values are `None` when the budget ran out
/// or the graph is disconnected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphRecord {
    pub label: String,
    pub graph6: String,
    pub n: usize,
    pub diameter: Option<usize>,
    pub triangle_free: bool,
    pub cut_vertex: bool,
    pub c: Option<usize>,
    pub c_h: Option<usize>,
    pub upsilon: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "=")]
    Equals,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub name: String,
    pub lhs: Option<usize>,
    pub relation: Relation,
    pub rhs: Option<usize>,
}

impl Inequality {
    fn at_most(name: impl Into<String>, lhs: Option<usize>, rhs: Option<usize>) -> Self {
        Inequality { name: name.into(), lhs, relation: Relation::AtMost, rhs }
    }

    fn equals(name: impl Into<String>, lhs: Option<usize>, rhs: Option<usize>) -> Self {
        Inequality { name: name.into(), lhs, relation: Relation::Equals, rhs }
    }

    /// `None` when a side is unknown.
    pub fn holds(&self) -> Option<bool> {
        let (l, r) = (self.lhs?, self.rhs?);
        Some(match self.relation {
            Relation::AtMost => l <= r,
            Relation::Equals => l == r,
        })
    }
}

impl Serialize for Inequality {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CheckRow::from(self).serialize(s)
    }
}

#[derive(Serialize)]
struct CheckRow<'a> {
    name: &'a str,
    lhs: Option<usize>,
    relation: Relation,
    rhs: Option<usize>,
    status: &'static str,
}

impl<'a> From<&'a Inequality> for CheckRow<'a> {
    fn from(q: &'a Inequality) -> Self {
        let status = match q.holds() {
            Some(true) => "holds",
            Some(false) => "FAILS",
            None => "skipped",
        };
        CheckRow { name: &q.name, lhs: q.lhs, relation: q.relation, rhs: q.rhs, status }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub graphs: Vec<GraphRecord>,
    pub checks: Vec<Inequality>,
    pub pass: bool,
}

impl AuditReport {
    fn new(graphs: Vec<GraphRecord>, checks: Vec<Inequality>) -> Self {
        let pass = checks.iter().all(|q| q.holds() != Some(false));
        AuditReport { graphs, checks, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Inequality> {
        self.checks.iter().filter(|q| q.holds() == Some(false))
    }

    pub fn skipped(&self) -> usize {
        self.checks.iter().filter(|q| q.holds().is_none()).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One row per check.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for q in &self.checks {
            w.serialize(CheckRow::from(q)).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.graphs {
            let show = |v: Option<usize>| v.map_or("?".to_string(), |v| v.to_string());
            let _ = writeln!(
                out,
                "{}: n={} diam={} triangle-free={} cut-vertex={} c={} c_H={} Υ={}",
                g.label,
                g.n,
                show(g.diameter),
                g.triangle_free,
                g.cut_vertex,
                show(g.c),
                show(g.c_h),
                g.upsilon
            );
        }
        for q in &self.checks {
            let row = CheckRow::from(q);
            let show = |v: Option<usize>| v.map_or("?".to_string(), |v| v.to_string());
            let rel = match q.relation {
                Relation::AtMost => "<=",
                Relation::Equals => "=",
            };
            let _ = writeln!(out, "{}: {} {} {} {}", q.name, show(q.lhs), rel, show(q.rhs), row.status);
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

fn solved(r: Result<SolveResult, SolveError>) -> Option<SolveResult> {
    match r {
        Ok(r) => Some(r),
        Err(e) => {
            log::info!("solver gave up: {e}");
            None
        }
    }
}

fn record(label: &str, g: &Graph, opts: &SolverOptions) -> GraphRecord {
    let m = metrics(g);
    let (c, c_h) = if m.is_connected {
        // c_H is searched from one so that c <= c_H is a real check.
        let c = solved(min_cops(g, Visibility::Perfect, 1, opts)).map(|r| r.k);
        let c_h = solved(min_cops(g, Visibility::Hyperopic, 1, opts)).map(|r| r.k);
        (c, c_h)
    } else {
        (None, None)
    };
    GraphRecord {
        label: label.to_string(),
        graph6: emit(g, Format::Graph6).trim_end().to_string(),
        n: g.n(),
        diameter: m.diameter,
        triangle_free: m.is_triangle_free,
        cut_vertex: !m.cut_vertices.is_empty(),
        c,
        c_h,
        upsilon: upsilon(g).witness.len(),
    }
}

fn is_complete(g: &Graph) -> bool {
    g.edge_count() == g.n() * (g.n() - 1) / 2
}

fn is_path(g: &Graph) -> bool {
    g.is_connected() && g.edge_count() + 1 == g.n() && g.vertices().iter().all(|v| g.degree(v) <= 2)
}

fn add(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    Some(a? + b?)
}

fn single_checks(g: &Graph, r: &GraphRecord, prefix: &str, out: &mut Vec<Inequality>) {
    if r.diameter.is_none() {
        return;
    }
    let m = metrics(g);
    let name = |s: &str| format!("{prefix}{s}");
    out.push(Inequality::at_most(name("c <= c_H"), r.c, r.c_h));
    out.push(Inequality::at_most(name("c_H <= c + Υ"), r.c_h, r.c.map(|c| c + r.upsilon)));
    if r.diameter >= Some(3) {
        out.push(Inequality::at_most(name("diam >= 3: c_H <= c + 2"), r.c_h, r.c.map(|c| c + 2)));
    }
    if r.cut_vertex {
        out.push(Inequality::at_most(name("cut vertex: c_H <= c + 1"), r.c_h, r.c.map(|c| c + 1)));
    }
    if r.triangle_free {
        out.push(Inequality::at_most(name("triangle-free: c_H <= c + 1"), r.c_h, r.c.map(|c| c + 1)));
    }
    if !m.universal_vertices.is_empty() && m.min_degree <= 3 {
        out.push(Inequality::at_most(name("universal vertex, min degree <= 3: c_H <= 2"), r.c_h, Some(2)));
    }
    if g.edge_count() + 1 == g.n() {
        out.push(Inequality::equals(name("tree: c_H = 1"), r.c_h, Some(1)));
    } else {
        out.push(Inequality::at_most(name("not a tree: 2 <= c_H"), Some(2), r.c_h));
    }
    if is_complete(g) {
        out.push(Inequality::equals(name("complete: c_H = ceil(n/2)"), r.c_h, Some(r.n.div_ceil(2))));
    }
    if g.n() >= 4 && g.edge_count() + 1 == g.n() * (g.n() - 1) / 2 {
        out.push(Inequality::equals(name("complete minus an edge: c_H = floor(n/2)"), r.c_h, Some(r.n / 2)));
    }
}

/// Every applicable inequality for one graph, with exact solver values.
pub fn audit(g: &Graph, opts: &SolverOptions) -> AuditReport {
    let r = record("G", g, opts);
    let mut checks = Vec::new();
    single_checks(g, &r, "", &mut checks);
    AuditReport::new(vec![r], checks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairMode {
    Join,
    Cartesian,
}

/// Inequalities relating the factors of `G ∨ J` or `G □ J` to the combined
/// graph, plus the single-graph checks on the combined graph.
pub fn audit_pair(g: &Graph, j: &Graph, mode: PairMode, opts: &SolverOptions) -> Result<AuditReport, crate::graph::GraphError> {
    let (rg, rj) = (record("G", g, opts), record("J", j, opts));
    let (h, label) = match mode {
        PairMode::Join => (join(g, j)?, "G v J"),
        PairMode::Cartesian => (crate::graph::cartesian(g, j)?, "G □ J"),
    };
    let rh = record(label, &h, opts);
    let mut checks = Vec::new();
    match mode {
        PairMode::Join => {
            checks.push(Inequality::at_most("join: c_H <= Υ(G) + Υ(J)", rh.c_h, Some(rg.upsilon + rj.upsilon)));
            let (gc, jc) = (g.is_connected(), j.is_connected());
            if !gc && !jc {
                checks.push(Inequality::at_most("join of disconnected graphs: c_H <= 4", rh.c_h, Some(4)));
            }
            if gc && !jc {
                checks.push(Inequality::at_most("join, J disconnected: c_H <= c_H(G) + 2", rh.c_h, rg.c_h.map(|x| x + 2)));
            }
            if jc && !gc {
                checks.push(Inequality::at_most("join, G disconnected: c_H <= c_H(J) + 2", rh.c_h, rj.c_h.map(|x| x + 2)));
            }
            let split = g.n();
            let straddles = minimum_scn_sets(&h)
                .iter()
                .any(|s| s.iter().any(|v| v < split) && s.iter().any(|v| v >= split));
            if straddles {
                checks.push(Inequality::at_most("join, a minimum SCN set meets both sides: c_H <= Υ", rh.c_h, Some(rh.upsilon)));
            } else {
                checks.push(Inequality::at_most(
                    "join, every minimum SCN set on one side: c_H <= Υ + 1",
                    rh.c_h,
                    Some(rh.upsilon + 1),
                ));
            }
        }
        PairMode::Cartesian => {
            if rg.diameter >= Some(2) || rj.diameter >= Some(2) {
                checks.push(Inequality::at_most("product: c_H <= c(G) + c(J) + 2", rh.c_h, add(rg.c, rj.c).map(|x| x + 2)));
            }
            if g.is_connected() && j.is_connected() {
                checks.push(Inequality::at_most("product: c_H <= c_H(G) + c_H(J)", rh.c_h, add(rg.c_h, rj.c_h)));
            }
            let (kg, kj) = (is_complete(g) && g.n() >= 2, is_complete(j) && j.n() >= 2);
            if kg && kj {
                checks.push(Inequality::at_most("complete x complete: c_H <= 4", rh.c_h, Some(4)));
                checks.push(Inequality::equals("complete x complete: Υ = 2", Some(rh.upsilon), Some(2)));
            }
            if (kg && is_path(j) && j.n() >= 2) || (kj && is_path(g) && g.n() >= 2) {
                checks.push(Inequality::equals("complete x path: c_H = 2", rh.c_h, Some(2)));
            }
        }
    }
    single_checks(&h, &rh, &format!("{label}: "), &mut checks);
    Ok(AuditReport::new(vec![rg, rj, rh], checks))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScanStatus {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "COUNTEREXAMPLE")]
    Counterexample,
    #[serde(rename = "skipped")]
    Skipped,
}

/// Evidence for a counterexample candidate: the join, a winning policy with
/// `c_H` cops, and the fact that `c_H − 1` cops lose.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub join_graph6: String,
    pub losing_cops: usize,
    pub policy: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub index: usize,
    pub g: String,
    pub j: String,
    pub c_h_join: Option<usize>,
    /// min{c_H(G), Υ(G)} + min{c_H(J), Υ(J)}
    pub conj1_rhs: Option<usize>,
    /// Υ(G ∨ J)
    pub conj2_rhs: usize,
    pub status: ScanStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    /// SHA-256 over the graph6 lines of the input pairs.
    pub corpus_hash: String,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(|r| r.status == ScanStatus::Counterexample)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "g", "j", "c_h_join", "conj1_rhs", "conj2_rhs", "status"]).expect("in-memory csv");
        for r in &self.rows {
            w.write_record(scan_fields(r)).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}

/// CSV fields of one row, in header order.
pub fn scan_fields(r: &ScanRow) -> [String; 7] {
    let show = |v: Option<usize>| v.map_or(String::new(), |v| v.to_string());
    let status = match r.status {
        ScanStatus::Consistent => "consistent",
        ScanStatus::Counterexample => "COUNTEREXAMPLE",
        ScanStatus::Skipped => "skipped",
    };
    [
        r.index.to_string(),
        r.g.clone(),
        r.j.clone(),
        show(r.c_h_join),
        show(r.conj1_rhs),
        r.conj2_rhs.to_string(),
        status.to_string(),
    ]
}

pub fn corpus_hash(pairs: &[(Graph, Graph)]) -> String {
    let mut h = Sha256::new();
    for (g, j) in pairs {
        h.update(emit(g, Format::Graph6).as_bytes());
        h.update(emit(j, Format::Graph6).as_bytes());
    }
    hex::encode(h.finalize())
}

/// One scan row; rows are independent, so callers may stream them.
pub fn scan_pair(index: usize, g: &Graph, j: &Graph, opts: &SolverOptions) -> Result<ScanRow, crate::graph::GraphError> {
    let h = join(g, j)?;
    let six = |x: &Graph| emit(x, Format::Graph6).trim_end().to_string();
    let hyper = |x: &Graph| solved(min_cops(x, Visibility::Hyperopic, 1, opts));
    let part = |x: &Graph| hyper(x).map(|r| r.k.min(upsilon(x).upsilon));
    let joined = hyper(&h);
    let conj1_rhs = add(part(g), part(j));
    let conj2_rhs = upsilon(&h).upsilon;
    let c_h_join = joined.as_ref().map(|r| r.k);
    let status = match (c_h_join, conj1_rhs) {
        (Some(x), Some(c1)) if x > c1 || x > conj2_rhs => ScanStatus::Counterexample,
        (Some(x), None) if x > conj2_rhs => ScanStatus::Counterexample,
        (Some(_), Some(_)) => ScanStatus::Consistent,
        _ => ScanStatus::Skipped,
    };
    let certificate = match (status, &joined) {
        (ScanStatus::Counterexample, Some(r)) => Some(Certificate {
            join_graph6: six(&h),
            losing_cops: r.k - 1,
            policy: r.policy.as_ref().map(|p| p.dump()).unwrap_or_default(),
        }),
        _ => None,
    };
    Ok(ScanRow { index, g: six(g), j: six(j), c_h_join, conj1_rhs, conj2_rhs, status, certificate })
}

/// Both join conjectures on every pair, in input order.
pub fn conjecture_scan(pairs: &[(Graph, Graph)], opts: &SolverOptions) -> Result<ScanReport, crate::graph::GraphError> {
    let rows = pairs
        .iter()
        .enumerate()
        .map(|(i, (g, j))| scan_pair(i, g, j, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScanReport { corpus_hash: corpus_hash(pairs), rows })
}

/// Unordered pairs (with repetition) of the connected graphs in `corpus`
/// with at most `max_n` vertices, in corpus order.
pub fn connected_pairs(corpus: &[Graph], max_n: usize) -> Vec<(Graph, Graph)> {
    let keep: Vec<&Graph> = corpus.iter().filter(|g| g.n() <= max_n && g.is_connected()).collect();
    let mut out = Vec::new();
    for (a, g) in keep.iter().enumerate() {
        for j in &keep[a..] {
            out.push(((*g).clone(), (*j).clone()));
        }
    }
    out
}
