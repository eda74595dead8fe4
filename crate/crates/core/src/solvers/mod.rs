//! Exact treewidth and supertree width at desk scale.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::decomposition::{validate_std, validate_td, SupertreeDecomposition, TreeDecomposition};
use crate::derivations::line_graph;
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;

mod brute;
pub mod elimination;
mod exact;

pub use brute::{brute_force_treewidth, BRUTE_FORCE_LIMIT};

/// Vertex limit for the exact solver unless `LHTW_EXACT_LIMIT` says otherwise.
pub const DEFAULT_EXACT_LIMIT: usize = 25;

pub const EXACT_LIMIT_ENV: &str = "LHTW_EXACT_LIMIT";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("{n} vertices exceed the solver limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("treewidth exceeds the cap of {cap}")]
    ExceedsCap { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Subset search between a lower and an upper bound.
    Dp,
    /// Lower and upper bound already met; no search was needed.
    BoundsMeet,
    Oracle,
    ViaLineGraph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Tree(TreeDecomposition),
    Supertree(SupertreeDecomposition),
}

#[derive(Debug, Clone)]
pub struct WidthResult {
    pub width: usize,
    pub certificate: Certificate,
    pub method: Method,
    pub elapsed: Duration,
}

impl WidthResult {
    pub fn tree_decomposition(&self) -> Option<&TreeDecomposition> {
        match &self.certificate {
            Certificate::Tree(d) => Some(d),
            Certificate::Supertree(_) => None,
        }
    }

    pub fn supertree_decomposition(&self) -> Option<&SupertreeDecomposition> {
        match &self.certificate {
            Certificate::Supertree(d) => Some(d),
            Certificate::Tree(_) => None,
        }
    }
}

/// The configured exact-solver limit (environment override, else the default).
pub fn exact_limit() -> usize {
    std::env::var(EXACT_LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .map_or(DEFAULT_EXACT_LIMIT, |l: usize| l.min(64))
}

pub fn exact_treewidth(g: &Graph, cap: Option<usize>) -> Result<WidthResult, SolverError> {
    exact_treewidth_with_limit(g, cap, exact_limit())
}

/// Exact `tw(G)` with a validated certificate; components are solved
/// separately and their decompositions chained together.
pub fn exact_treewidth_with_limit(g: &Graph, cap: Option<usize>, limit: usize) -> Result<WidthResult, SolverError> {
    let start = Instant::now();
    let limit = limit.min(64);
    if g.n() > limit {
        return Err(SolverError::TooLarge { n: g.n(), limit });
    }
    let mut width = 0;
    let mut searched = false;
    let mut parts = Vec::new();
    for comp in g.components() {
        let sub = g.induced(&comp);
        let lower = elimination::minor_min_width(&sub).max(elimination::degeneracy_bound(&sub));
        let (w, order) = exact::connected_treewidth(&sub, cap).ok_or(SolverError::ExceedsCap { cap: cap.unwrap_or(0) })?;
        searched |= w > lower;
        width = width.max(w);
        parts.push((elimination::decomposition_from_ordering(&sub, &order), comp));
    }
    let certificate = TreeDecomposition::join(parts);
    debug_assert!(validate_td(g, &certificate).is_valid());
    debug_assert_eq!(certificate.width(), width);
    Ok(WidthResult {
        width,
        certificate: Certificate::Tree(certificate),
        method: if searched { Method::Dp } else { Method::BoundsMeet },
        elapsed: start.elapsed(),
    })
}

/// `stw(H) = tw(L(H)) + 1`, certified by `B_t = ∪_{f∈λ_t} f` over an optimal
/// decomposition of the line graph.
pub fn supertree_width(h: &Hypergraph) -> Result<WidthResult, SolverError> {
    supertree_width_with_limit(h, exact_limit())
}

pub fn supertree_width_with_limit(h: &Hypergraph, limit: usize) -> Result<WidthResult, SolverError> {
    let start = Instant::now();
    let lg = line_graph(h);
    let inner = exact_treewidth_with_limit(&lg, None, limit)?;
    let td = inner.tree_decomposition().expect("tree certificate");
    let std = SupertreeDecomposition::from_line_graph_decomposition(h, td);
    debug_assert!(validate_std(h, &std).is_valid());
    Ok(WidthResult {
        width: std.width(),
        certificate: Certificate::Supertree(std),
        method: Method::ViaLineGraph,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
    }

    #[test]
    fn small_exact_values() {
        assert_eq!(exact_treewidth(&complete(4), None).unwrap().width, 3);
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(exact_treewidth(&c5, None).unwrap().width, 2);
        let p6 = Graph::from_edges(6, (0..5).map(|i| (i, i + 1))).unwrap();
        assert_eq!(exact_treewidth(&p6, None).unwrap().width, 1);
        assert_eq!(exact_treewidth(&Graph::empty(1), None).unwrap().width, 0);
    }

    #[test]
    fn certificates_validate() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3), (3, 5)]).unwrap();
        let r = exact_treewidth(&g, None).unwrap();
        let d = r.tree_decomposition().unwrap();
        assert!(validate_td(&g, d).is_valid());
        assert_eq!(d.width(), r.width);
    }

    #[test]
    fn limits_and_caps() {
        assert_eq!(
            exact_treewidth_with_limit(&Graph::empty(30), None, 25).unwrap_err(),
            SolverError::TooLarge { n: 30, limit: 25 }
        );
        assert_eq!(exact_treewidth(&complete(6), Some(3)).unwrap_err(), SolverError::ExceedsCap { cap: 3 });
    }

    #[test]
    fn supertree_examples() {
        let single = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        assert_eq!(supertree_width(&single).unwrap().width, 1);
        let tri = Hypergraph::new(3, [[0, 1], [1, 2], [0, 2]]).unwrap();
        let r = supertree_width(&tri).unwrap();
        assert_eq!(r.width, 3);
        assert!(validate_std(&tri, r.supertree_decomposition().unwrap()).is_valid());
        let two = Hypergraph::new(5, [[0, 1, 2], [2, 3, 4]]).unwrap();
        assert_eq!(supertree_width(&two).unwrap().width, 2);
    }
}
