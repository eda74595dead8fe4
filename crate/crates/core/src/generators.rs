//! Path and cycle powers, their duals, and seeded random linear hypergraphs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::hypergraph::Hypergraph;

/// Greedy restarts before random generation gives up.
pub const RANDOM_ATTEMPTS: usize = 400;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("vertex {vertex} has degree {degree}; duals need minimum degree 2")]
    MinDegreeTooLow { vertex: usize, degree: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
}

fn bad(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::BadParams(msg.into())
}

/// `P_n^k`: `ij` is an edge iff `0 < |i-j| ≤ k`.
pub fn path_power(n: usize, k: usize) -> Result<Graph, GeneratorError> {
    if k == 0 || n < k + 2 {
        return Err(bad(format!("path power needs k >= 1 and n >= k + 2 (n = {n}, k = {k})")));
    }
    Ok(Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n.min(i + k + 1)).map(move |j| (i, j)))).expect("in range"))
}

/// `C_n^k`: `ij` is an edge iff the cyclic distance is at most `k`.
pub fn cycle_power(n: usize, k: usize) -> Result<Graph, GeneratorError> {
    if k == 0 || n < 2 * k + 2 {
        return Err(bad(format!("cycle power needs k >= 1 and n >= 2k + 2 (n = {n}, k = {k})")));
    }
    Ok(Graph::from_edges(n, (0..n).flat_map(|i| (1..=k).map(move |d| (i, (i + d) % n)))).expect("in range"))
}

/// Dual of a graph: one vertex per edge (ids follow [`Graph::edges`]) and one
/// hyperedge per vertex holding its incident edges.
pub fn graph_dual(g: &Graph) -> Result<Hypergraph, GeneratorError> {
    if let Some(vertex) = (0..g.n()).find(|&v| g.degree(v) < 2) {
        return Err(GeneratorError::MinDegreeTooLow { vertex, degree: g.degree(vertex) });
    }
    let edges = g.edges();
    let mut stars = vec![Vec::new(); g.n()];
    for (id, &(u, v)) in edges.iter().enumerate() {
        stars[u].push(id);
        stars[v].push(id);
    }
    Ok(Hypergraph::new(edges.len(), stars).expect("stars of a simple graph with minimum degree 2"))
}

/// `v_{i,j}` names (1-indexed) for the vertices of [`graph_dual`].
pub fn dual_vertex_labels(g: &Graph) -> Vec<String> {
    g.edges().iter().map(|(u, v)| format!("v_{{{},{}}}", u + 1, v + 1)).collect()
}

/// Hyperedges `f_1..f_n` where `v_{i,j}` lies in `f_i` and `f_j` whenever
/// `0 < |i-j| ≤ k`; this is the dual of `P_n^k`.
pub fn path_power_dual(n: usize, k: usize) -> Result<Hypergraph, GeneratorError> {
    if k < 2 {
        return Err(bad("path power dual needs k >= 2; for k = 1 the end edges are nested"));
    }
    graph_dual(&path_power(n, k)?).map_err(|e| bad(e.to_string()))
}

/// The pairs `(i, n-k+i)` for `i` in `0..k` (0-indexed).
pub fn end_matching(n: usize, k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|i| (i, n - k + i)).collect()
}

/// Consecutive pairs covering `k..n-k` (0-indexed): `(k, k+1), (k+2, k+3), ...`.
pub fn middle_matching(n: usize, k: usize) -> Vec<(usize, usize)> {
    (k..n - k).step_by(2).filter(|&i| i + 1 < n - k).map(|i| (i, i + 1)).collect()
}

/// `(C_n^k)*`; with `odd_variant` a matching is removed first so the anti-rank
/// drops to `2k - 1`: the end matching alone for odd `n`, together with the
/// middle matching for even `n`.
pub fn cycle_power_dual(n: usize, k: usize, odd_variant: bool) -> Result<Hypergraph, GeneratorError> {
    let g = cycle_power(n, k)?;
    if !odd_variant {
        return graph_dual(&g).map_err(|e| bad(e.to_string()));
    }
    let mut removed = end_matching(n, k);
    if n % 2 == 0 {
        removed.extend(middle_matching(n, k));
    }
    let mut touched = BTreeSet::new();
    for &(u, v) in &removed {
        if !g.has_edge(u, v) {
            return Err(bad(format!("({}, {}) is not an edge of C_{n}^{k}", u + 1, v + 1)));
        }
        if !touched.insert(u) || !touched.insert(v) {
            return Err(bad(format!("removed pairs do not form a matching at ({}, {})", u + 1, v + 1)));
        }
    }
    let removed: BTreeSet<(usize, usize)> = removed.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    let kept = Graph::from_edges(n, g.edges().into_iter().filter(|e| !removed.contains(e))).expect("subgraph");
    graph_dual(&kept).map_err(|e| bad(e.to_string()))
}

/// Parameters of a seeded random linear hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomLinear {
    pub n: usize,
    pub m: usize,
    /// Edge sizes are drawn uniformly from `min_size..=max_size`.
    pub min_size: usize,
    pub max_size: usize,
    pub min_degree: usize,
    pub seed: u64,
}

impl RandomLinear {
    /// Greedy pair-disjoint insertion preferring low-degree vertices. Early
    /// attempts insist on the drawn sizes; later ones accept shorter edges
    /// (never below 2) when the pair budget blocks growth. Restarts until the
    /// degree floor holds.
    pub fn generate(&self) -> Result<Hypergraph, GeneratorError> {
        let RandomLinear { n, m, min_size, max_size, min_degree, seed } = *self;
        if min_size < 2 || min_size > max_size || max_size > n {
            return Err(bad(format!("edge sizes {min_size}..={max_size} invalid for n = {n}")));
        }
        let budget = n * (n - 1) / 2;
        let needed = m * min_size * (min_size - 1) / 2;
        if needed > budget {
            return Err(GeneratorError::Infeasible(format!("pair budget {budget} < {needed}")));
        }
        if max_size * m < n * min_degree.max(1) {
            return Err(GeneratorError::Infeasible(format!("{m} edges of size <= {max_size} cannot give {n} vertices degree {min_degree}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for attempt in 0..RANDOM_ATTEMPTS {
            let strict = attempt < RANDOM_ATTEMPTS / 2;
            if let Some(edges) = self.attempt(&mut rng, strict) {
                let h = Hypergraph::new(n, edges).expect("pair-disjoint edges of size >= 2 covering every vertex");
                return Ok(h);
            }
        }
        Err(GeneratorError::Infeasible(format!("no instance after {RANDOM_ATTEMPTS} attempts")))
    }

    fn attempt(&self, rng: &mut ChaCha8Rng, strict: bool) -> Option<Vec<Vec<usize>>> {
        let n = self.n;
        let mut used = vec![vec![false; n]; n];
        let mut degree = vec![0usize; n];
        let mut edges = Vec::with_capacity(self.m);
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..self.m {
            let size = rng.gen_range(self.min_size..=self.max_size);
            order.shuffle(rng);
            order.sort_by_key(|&v| degree[v]);
            let mut best: Vec<usize> = Vec::new();
            // a few seeds for the first vertex, keep the longest edge found
            for &start in order.iter().take(4) {
                let mut edge = vec![start];
                for &v in &order {
                    if edge.len() == size {
                        break;
                    }
                    if !edge.contains(&v) && edge.iter().all(|&u| !used[u][v]) {
                        edge.push(v);
                    }
                }
                if edge.len() > best.len() {
                    best = edge;
                }
                if best.len() == size {
                    break;
                }
            }
            if best.len() < 2 || (strict && best.len() < size) {
                return None;
            }
            for (i, &a) in best.iter().enumerate() {
                degree[a] += 1;
                for &b in &best[i + 1..] {
                    used[a][b] = true;
                    used[b][a] = true;
                }
            }
            best.sort_unstable();
            edges.push(best);
        }
        if degree.iter().any(|&d| d < self.min_degree.max(1)) {
            return None;
        }
        Some(edges)
    }
}

/// Linear hypergraph with `m` edges of size `target_rank` (shorter edges only
/// when the packing gets stuck) and minimum degree at least `min_degree`.
pub fn random_linear(n: usize, m: usize, target_rank: usize, min_degree: usize, seed: u64) -> Result<Hypergraph, GeneratorError> {
    RandomLinear { n, m, min_size: target_rank, max_size: target_rank, min_degree, seed }.generate()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    PathPower,
    CyclePower,
    PathPowerDual,
    CyclePowerDual,
    CyclePowerDualOdd,
    GraphDual,
    RandomLinear,
}

impl std::str::FromStr for GeneratorKind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.replace('_', "-").as_str() {
            "path-power" => GeneratorKind::PathPower,
            "cycle-power" => GeneratorKind::CyclePower,
            "path-power-dual" => GeneratorKind::PathPowerDual,
            "cycle-power-dual" => GeneratorKind::CyclePowerDual,
            "cycle-power-dual-odd" => GeneratorKind::CyclePowerDualOdd,
            "graph-dual" => GeneratorKind::GraphDual,
            "random-linear" => GeneratorKind::RandomLinear,
            other => return Err(bad(format!("unknown generator kind '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Graph(Graph),
    Hypergraph(Hypergraph),
}

/// Generator parameters. `k` doubles as the target rank for random
/// instances; `source` is the graph dualized by [`GeneratorKind::GraphDual`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub odd: bool,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_min_degree")]
    pub min_degree: usize,
    #[serde(skip)]
    pub source: Option<Graph>,
}

fn default_min_degree() -> usize {
    2
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, k: usize) -> Self {
        GeneratorSpec { kind, n, k, seed: 0, odd: false, m: None, min_degree: 2, source: None }
    }

    pub fn generate(&self) -> Result<Generated, GeneratorError> {
        use GeneratorKind::*;
        Ok(match self.kind {
            PathPower => Generated::Graph(path_power(self.n, self.k)?),
            CyclePower => Generated::Graph(cycle_power(self.n, self.k)?),
            PathPowerDual => Generated::Hypergraph(path_power_dual(self.n, self.k)?),
            CyclePowerDual => Generated::Hypergraph(cycle_power_dual(self.n, self.k, self.odd)?),
            CyclePowerDualOdd => Generated::Hypergraph(cycle_power_dual(self.n, self.k, true)?),
            GraphDual => {
                let g = self.source.as_ref().ok_or_else(|| bad("graph dual needs a source graph"))?;
                Generated::Hypergraph(graph_dual(g)?)
            }
            RandomLinear => {
                let m = self.m.unwrap_or(self.n);
                Generated::Hypergraph(random_linear(self.n, m, self.k, self.min_degree, self.seed)?)
            }
        })
    }
}

/// `G(n, p)` from a seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                g.add_edge(a, b).expect("in range");
            }
        }
    }
    g
}

/// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    Graph::from_edges(10, outer.chain(inner).chain(spokes)).expect("fixed edge list")
}
