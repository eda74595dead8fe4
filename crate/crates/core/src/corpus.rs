//! Seeded instance corpora and the per-instance verification run that checks
//! every bound, both constructions and the line-graph identity.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_report_with, Bound};
use crate::constructions::{supertree_to_td, supertree_width_bound, td_to_supertree};
use crate::decomposition::{normalize_leaf_based, validate_std, validate_td};
use crate::derivations::{line_graph, two_section};
use crate::generators::{
    cycle_power_dual, graph_dual, path_power_dual, petersen, random_graph, Generated, GeneratorSpec, RandomLinear,
};
use crate::hypergraph::Hypergraph;
use crate::io::{parse_decomposition, parse_hypergraph};
use crate::solvers::{exact_limit, exact_treewidth_with_limit, supertree_width_with_limit};
use crate::{format_rational, Graph};

/// Bound columns, in report order.
pub const BOUND_NAMES: [&str; 9] = ["eq1", "eq2", "eq3", "lemma23", "thm11", "thm12", "thm13", "cor34", "thm14"];

pub const DEFAULT_CORPUS_SIZE: usize = 120;
pub const DEFAULT_MAX_N: usize = 18;
/// Edge-count ceiling for random instances, keeping line graphs solvable.
pub const MAX_RANDOM_EDGES: usize = 20;

/// One entry of a [`RunManifest`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusInput {
    /// `count` seeded random linear hypergraphs with `δ ≥ 2` and at most `max_n` vertices.
    Random { count: usize, max_n: usize },
    /// The anti-rank and average-rank families.
    Families,
    Generator(GeneratorSpec),
    Hypergraph(PathBuf),
    /// A decomposition file checked against a hypergraph file: a supertree
    /// decomposition if it has `l` lines, else one of the 2-section.
    Decomposition { hypergraph: PathBuf, decomposition: PathBuf },
}

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<CorpusInput>,
    pub seed: u64,
    /// Vertex limit handed to the exact solver.
    pub exact_limit: usize,
    #[serde(default)]
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn default_with_seed(seed: u64) -> Self {
        RunManifest {
            command: "verify".into(),
            inputs: vec![CorpusInput::Random { count: DEFAULT_CORPUS_SIZE, max_n: DEFAULT_MAX_N }, CorpusInput::Families],
            seed,
            exact_limit: exact_limit(),
            outputs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum InstanceBody {
    Hypergraph(Hypergraph),
    Decomposition { hypergraph: Hypergraph, text: String },
    /// An input that could not be read or generated.
    Broken(String),
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub body: InstanceBody,
}

/// Random linear hypergraphs with `δ ≥ 2`, `n ≤ max_n` and mixed edge sizes,
/// drawn from consecutive seeds until `count` instances exist.
pub fn random_corpus(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut out = Vec::with_capacity(count);
    let low = 6.min(max_n);
    let mut s = seed;
    let mut misses = 0;
    while out.len() < count && misses < 50 * count.max(1) {
        let n = low + (s as usize % (max_n - low + 1));
        let max_size = 2 + (s as usize / 3 % 4);
        let min_degree = if s % 5 == 4 { 3 } else { 2 };
        let m = ((min_degree * n).div_ceil(max_size) + (s as usize / 7 % 4)).min(MAX_RANDOM_EDGES);
        let spec = RandomLinear { n, m, min_size: 2, max_size: max_size.min(n), min_degree, seed: s };
        match spec.generate() {
            Ok(h) if h.min_degree() >= 2 => out.push(Instance {
                id: format!("random-{:03}-n{n}-m{m}-s{s}", out.len()),
                body: InstanceBody::Hypergraph(h),
            }),
            _ => misses += 1,
        }
        s += 1;
    }
    out
}

/// `(C_n^k)*` for the even anti-rank cases, the matching-removed variants,
/// path-power duals, and the dual of the Petersen graph.
pub fn family_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    let mut push = |id: String, h: Hypergraph| out.push(Instance { id, body: InstanceBody::Hypergraph(h) });
    for (n, k) in [(6, 1), (8, 1), (8, 2), (10, 2), (12, 2)] {
        push(format!("cycle-power-dual-n{n}-k{k}"), cycle_power_dual(n, k, false).expect("valid family"));
    }
    for n in [10, 11, 12] {
        push(format!("cycle-power-dual-odd-n{n}-k2"), cycle_power_dual(n, 2, true).expect("valid family"));
    }
    for n in [10, 14] {
        push(format!("path-power-dual-n{n}-k2"), path_power_dual(n, 2).expect("valid family"));
    }
    push("petersen-dual".into(), graph_dual(&petersen()).expect("cubic graph"));
    out
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Expands a manifest into instances, in input order.
pub fn instances(manifest: &RunManifest) -> Vec<Instance> {
    let mut out = Vec::new();
    for input in &manifest.inputs {
        match input {
            CorpusInput::Random { count, max_n } => out.extend(random_corpus(*count, *max_n, manifest.seed)),
            CorpusInput::Families => out.extend(family_corpus()),
            CorpusInput::Generator(spec) => {
                let id = format!("{:?}-n{}-k{}-s{}", spec.kind, spec.n, spec.k, spec.seed).to_lowercase();
                let body = match spec.generate() {
                    Ok(Generated::Hypergraph(h)) => InstanceBody::Hypergraph(h),
                    Ok(Generated::Graph(_)) => InstanceBody::Broken("generator yields a graph, not a hypergraph".into()),
                    Err(e) => InstanceBody::Broken(e.to_string()),
                };
                out.push(Instance { id, body });
            }
            CorpusInput::Hypergraph(path) => {
                let body = read(path)
                    .and_then(|t| parse_hypergraph(&t).map_err(|e| e.to_string()))
                    .map_or_else(InstanceBody::Broken, InstanceBody::Hypergraph);
                out.push(Instance { id: path.display().to_string(), body });
            }
            CorpusInput::Decomposition { hypergraph, decomposition } => {
                let body = match (read(hypergraph).and_then(|t| parse_hypergraph(&t).map_err(|e| e.to_string())), read(decomposition)) {
                    (Ok(h), Ok(text)) => InstanceBody::Decomposition { hypergraph: h, text },
                    (Err(e), _) | (_, Err(e)) => InstanceBody::Broken(e),
                };
                out.push(Instance { id: decomposition.display().to_string(), body });
            }
        }
    }
    out
}

/// One report row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusRow {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub anti_rank: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub avg_rank: String,
    pub linear: bool,
    pub exact_tw: Option<usize>,
    pub exact_stw: Option<usize>,
    pub line_tw: Option<usize>,
    pub bounds: BTreeMap<String, Bound>,
    /// Named pass/fail checks; a row passes when every entry is true.
    pub checks: BTreeMap<String, bool>,
    pub notes: Vec<String>,
    pub elapsed_ms: f64,
}

impl CorpusRow {
    fn blank(id: &str) -> Self {
        CorpusRow {
            id: id.to_string(),
            n: 0,
            m: 0,
            rank: 0,
            anti_rank: 0,
            min_degree: 0,
            max_degree: 0,
            avg_rank: String::new(),
            linear: false,
            exact_tw: None,
            exact_stw: None,
            line_tw: None,
            bounds: BTreeMap::new(),
            checks: BTreeMap::new(),
            notes: Vec::new(),
            elapsed_ms: 0.0,
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    fn fill_stats(&mut self, h: &Hypergraph) {
        let s = h.stats();
        self.n = s.n;
        self.m = s.m;
        self.rank = s.rank;
        self.anti_rank = s.anti_rank;
        self.min_degree = s.min_degree;
        self.max_degree = s.max_degree;
        self.avg_rank = format_rational(&s.avg_rank);
        self.linear = s.is_linear;
    }
}

/// Solves, bounds and converts one hypergraph.
pub fn verify_hypergraph(id: &str, h: &Hypergraph, limit: usize) -> CorpusRow {
    let start = Instant::now();
    let mut row = CorpusRow::blank(id);
    row.fill_stats(h);
    let section = two_section(h);
    let tw = match exact_treewidth_with_limit(&section, None, limit) {
        Ok(r) => Some(r),
        Err(e) => {
            row.notes.push(format!("tw skipped: {e}"));
            None
        }
    };
    let stw = match supertree_width_with_limit(h, limit) {
        Ok(r) => Some(r),
        Err(e) => {
            row.notes.push(format!("stw skipped: {e}"));
            None
        }
    };
    row.exact_tw = tw.as_ref().map(|r| r.width);
    row.exact_stw = stw.as_ref().map(|r| r.width);

    if let Some(r) = &tw {
        row.checks.insert("tw_certificate".into(), validate_td(&section, r.tree_decomposition().expect("tree")).is_valid());
    }
    if let Some(s) = &stw {
        let cert = s.supertree_decomposition().expect("supertree");
        let lg = line_graph(h);
        match exact_treewidth_with_limit(&lg, None, limit) {
            Ok(l) => {
                row.line_tw = Some(l.width);
                row.checks.insert("stw_identity".into(), validate_std(h, cert).is_valid() && cert.width() == l.width + 1);
            }
            Err(e) => row.notes.push(format!("line graph skipped: {e}")),
        }
    }

    let report = bounds_report_with(h, row.exact_tw, row.exact_stw);
    row.notes.extend(report.notes.iter().map(|(k, v)| format!("{k}: {v}")));
    if row.exact_tw.is_some() {
        for (name, b) in &report.bounds {
            row.checks.insert(format!("bound_{name}"), row.exact_tw.is_some_and(|w| b.admits(w)));
        }
    }
    row.bounds = report.bounds;

    if let Some(r) = &tw {
        if h.max_degree() >= 2 {
            let ok = normalize_leaf_based(h, r.tree_decomposition().expect("tree"))
                .map_err(|e| e.to_string())
                .and_then(|leaf| td_to_supertree(h, &leaf).map_err(|e| e.to_string()));
            let ok = match ok {
                Ok(s) => s.width() <= supertree_width_bound(h.max_degree(), r.width),
                Err(e) => {
                    row.notes.push(format!("td_to_supertree: {e}"));
                    false
                }
            };
            row.checks.insert("td_to_supertree".into(), ok);
        }
    }
    if let (Some(s), true) = (&stw, h.is_linear()) {
        let ok = match supertree_to_td(h, s.supertree_decomposition().expect("supertree")) {
            Ok(c) => c.within_bound() && c.uncovered.is_empty() && c.overfull.is_empty(),
            Err(e) => {
                row.notes.push(format!("supertree_to_td: {e}"));
                false
            }
        };
        row.checks.insert("supertree_to_td".into(), ok);
    }
    row.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

fn verify_decomposition(id: &str, h: &Hypergraph, text: &str) -> CorpusRow {
    let start = Instant::now();
    let mut row = CorpusRow::blank(id);
    row.fill_stats(h);
    let ok = match parse_decomposition(text) {
        Err(e) => {
            row.notes.push(format!("parse: {e}"));
            false
        }
        Ok(file) => match file.supertree_decomposition() {
            Some(d) => {
                let r = validate_std(h, &d);
                row.notes.extend(r.violations.iter().map(|v| format!("{v:?}")));
                r.is_valid()
            }
            None if file.edge_bags.is_some() => {
                row.notes.push("edge bag count does not match the tree".into());
                false
            }
            None => {
                let r = validate_td(&two_section(h), &file.tree_decomposition());
                row.notes.extend(r.violations.iter().map(|v| format!("{v:?}")));
                r.is_valid()
            }
        },
    };
    row.checks.insert("decomposition_valid".into(), ok);
    row.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

pub fn verify_instance(inst: &Instance, limit: usize) -> CorpusRow {
    match &inst.body {
        InstanceBody::Hypergraph(h) => verify_hypergraph(&inst.id, h, limit),
        InstanceBody::Decomposition { hypergraph, text } => verify_decomposition(&inst.id, hypergraph, text),
        InstanceBody::Broken(e) => {
            let mut row = CorpusRow::blank(&inst.id);
            row.notes.push(e.clone());
            row.checks.insert("input".into(), false);
            row
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub manifest: RunManifest,
    pub rows: Vec<CorpusRow>,
}

impl CorpusReport {
    pub fn failures(&self) -> Vec<&CorpusRow> {
        self.rows.iter().filter(|r| !r.pass()).collect()
    }

    pub fn pass(&self) -> bool {
        self.rows.iter().all(CorpusRow::pass)
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        for (row, out) in self.rows.iter().zip(v["rows"].as_array_mut().expect("rows array")) {
            out["pass"] = row.pass().into();
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    /// One line per row; fixed columns, bound values and their pass flags,
    /// every check, then `elapsed_ms` last.
    pub fn to_csv(&self) -> String {
        let check_names: std::collections::BTreeSet<&str> =
            self.rows.iter().flat_map(|r| r.checks.keys().map(String::as_str)).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = ["id", "n", "m", "rank", "anti_rank", "min_degree", "max_degree", "avg_rank", "linear", "exact_tw", "exact_stw", "line_tw"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend(BOUND_NAMES.iter().map(|b| b.to_string()));
        header.extend(check_names.iter().map(|c| c.to_string()));
        header.push("pass".into());
        header.push("elapsed_ms".into());
        w.write_record(&header).expect("in-memory write");
        let opt = |x: Option<usize>| x.map_or(String::new(), |v| v.to_string());
        for r in &self.rows {
            let mut rec = vec![
                r.id.clone(),
                r.n.to_string(),
                r.m.to_string(),
                r.rank.to_string(),
                r.anti_rank.to_string(),
                r.min_degree.to_string(),
                r.max_degree.to_string(),
                r.avg_rank.clone(),
                r.linear.to_string(),
                opt(r.exact_tw),
                opt(r.exact_stw),
                opt(r.line_tw),
            ];
            rec.extend(BOUND_NAMES.iter().map(|b| r.bounds.get(*b).map_or(String::new(), |x| format_rational(&x.value))));
            rec.extend(check_names.iter().map(|c| r.checks.get(*c).map_or(String::new(), |ok| ok.to_string())));
            rec.push(r.pass().to_string());
            rec.push(format!("{:.3}", r.elapsed_ms));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Runs every instance of the manifest in parallel; rows keep manifest order.
pub fn run(manifest: &RunManifest) -> CorpusReport {
    let insts = instances(manifest);
    let rows = insts.par_iter().map(|i| verify_instance(i, manifest.exact_limit)).collect();
    CorpusReport { manifest: manifest.clone(), rows }
}

/// Connected graphs with minimum degree 2 on `3..=max_n` vertices, sampled
/// by seed; their duals are linear and 2-regular.
pub fn random_min_degree_two_graphs(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut out = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        let n = 3 + (s as usize % (max_n.max(3) - 2));
        let p = 0.3 + 0.1 * (s / 7 % 6) as f64;
        let g = random_graph(n, p, s);
        if g.is_connected() && g.min_degree() >= 2 {
            out.push(g);
        }
        s += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_corpus_is_seeded() {
        let a = random_corpus(10, 12, 3);
        let b = random_corpus(10, 12, 3);
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            match (&x.body, &y.body) {
                (InstanceBody::Hypergraph(g), InstanceBody::Hypergraph(h)) => {
                    assert_eq!(g, h);
                    assert!(g.is_linear() && g.min_degree() >= 2 && g.n() <= 12);
                }
                _ => panic!("random instances are hypergraphs"),
            }
        }
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let manifest = RunManifest {
            command: "verify".into(),
            inputs: vec![CorpusInput::Random { count: 6, max_n: 10 }],
            seed: 11,
            exact_limit: 25,
            outputs: vec![],
        };
        let a = run(&manifest);
        assert!(a.pass(), "{:?}", a.failures());
        let strip = |csv: String| csv.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect::<Vec<_>>();
        assert_eq!(strip(a.to_csv()), strip(run(&manifest).to_csv()));
    }

    #[test]
    fn sharp_family_row() {
        let h = cycle_power_dual(8, 2, false).unwrap();
        let row = verify_hypergraph("c8", &h, 25);
        assert!(row.pass());
        assert_eq!(row.exact_tw, Some(7));
        assert_eq!(row.bounds["thm13"].rounded, 7);
    }

    #[test]
    fn broken_inputs_fail() {
        let h = Hypergraph::new(3, [[0, 1], [1, 2]]).unwrap();
        let row = verify_decomposition("bad", &h, "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n");
        assert!(!row.pass());
        let inst = Instance { id: "x".into(), body: InstanceBody::Broken("missing".into()) };
        assert!(!verify_instance(&inst, 25).pass());
    }
}
