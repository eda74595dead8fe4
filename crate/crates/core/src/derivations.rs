//! Graphs derived from a hypergraph (2-section, dual, line graph), the inverse
//! clique-cover construction, and isomorphism witnesses between them.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::Graph;
use crate::hypergraph::{Hypergraph, HypergraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error("hypergraph is not 2-regular")]
    NotTwoRegular,
    #[error("hypergraph is not linear")]
    NotLinear,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("dual is not a valid hypergraph: {0}")]
    InvalidDual(HypergraphError),
    #[error("witness map fails at pair ({0}, {1})")]
    WitnessMismatch(usize, usize),
}

/// `[H]_2`: `uv` is an edge iff some hyperedge contains both.
pub fn two_section(h: &Hypergraph) -> Graph {
    let mut g = Graph::empty(h.n());
    for e in h.edges() {
        for (i, &u) in e.iter().enumerate() {
            for &v in &e[i + 1..] {
                g.add_edge(u, v).expect("hyperedge vertices are distinct and in range");
            }
        }
    }
    g
}

/// `L(H)`: one vertex per hyperedge, adjacent iff the hyperedges intersect.
pub fn line_graph(h: &Hypergraph) -> Graph {
    let mut g = Graph::empty(h.m());
    for v in 0..h.n() {
        let es = h.incident(v);
        for (i, &a) in es.iter().enumerate() {
            for &b in &es[i + 1..] {
                g.add_edge(a, b).expect("distinct edge ids");
            }
        }
    }
    g
}

/// Raw dual family: `edges[i]` is the set of edge ids containing vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualFamily {
    /// Vertex count of the dual (the edge count of the original).
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
    /// `Ok` iff the family is itself a valid hypergraph.
    pub validity: Result<(), HypergraphError>,
}

impl DualFamily {
    pub fn is_valid(&self) -> bool {
        self.validity.is_ok()
    }

    pub fn to_hypergraph(&self) -> Result<Hypergraph, HypergraphError> {
        Hypergraph::new(self.n, self.edges.clone())
    }
}

/// `H*`, returned as a raw family with a validity report.
pub fn dual(h: &Hypergraph) -> DualFamily {
    let edges: Vec<Vec<usize>> = (0..h.n()).map(|v| h.incident(v).to_vec()).collect();
    let validity = Hypergraph::new(h.m(), edges.clone()).map(|_| ());
    DualFamily { n: h.m(), edges, validity }
}

/// Treats a graph without isolated vertices as a 2-uniform hypergraph whose
/// edge ids follow [`Graph::edges`].
pub fn graph_as_hypergraph(g: &Graph) -> Result<Hypergraph, DerivationError> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(DerivationError::IsolatedVertex(v));
    }
    Ok(Hypergraph::new(g.n(), g.edges().into_iter().map(|(u, v)| [u, v])).expect("simple graph without isolated vertices"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `[H]_2 ≅ L(H*)`, vertices of `H` to vertices of `L(H*)`.
    TwoSectionToLineOfDual,
    /// `H* ≅ L(H)`, vertices of `H*` to vertices of `L(H)`.
    DualToLineGraph,
}

/// A vertex bijection between two graphs, checked edge by edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionWitness {
    pub mapping: Vec<usize>,
    pub direction: WitnessKind,
}

impl BijectionWitness {
    /// Checks that `mapping` is a bijection with `uv ∈ E(a) ⇔ φ(u)φ(v) ∈ E(b)`
    /// for every vertex pair. Returns the first failing pair.
    pub fn verify(&self, a: &Graph, b: &Graph) -> Result<(), (usize, usize)> {
        is_isomorphism(&self.mapping, a, b)
    }
}

pub fn is_isomorphism(mapping: &[usize], a: &Graph, b: &Graph) -> Result<(), (usize, usize)> {
    let n = a.n();
    if mapping.len() != n || b.n() != n {
        return Err((n, b.n()));
    }
    let image: BTreeSet<usize> = mapping.iter().copied().collect();
    if image.len() != n || image.iter().any(|&x| x >= n) {
        return Err((n, n));
    }
    for u in 0..n {
        for v in u + 1..n {
            if a.has_edge(u, v) != b.has_edge(mapping[u], mapping[v]) {
                return Err((u, v));
            }
        }
    }
    Ok(())
}

fn require_two_regular_linear(h: &Hypergraph) -> Result<Hypergraph, DerivationError> {
    if !h.is_linear() {
        return Err(DerivationError::NotLinear);
    }
    if h.min_degree() != 2 || h.max_degree() != 2 {
        return Err(DerivationError::NotTwoRegular);
    }
    dual(h).to_hypergraph().map_err(DerivationError::InvalidDual)
}

/// The composed map `φσ : V([H]_2) → V(L(H*))` for a 2-regular linear `H`.
///
/// `σ` sends vertex `v_i` to the dual edge `g_i`, and `φ` sends `g_i` to the
/// `i`-th vertex of the line graph of `H*`, so the composition is the identity
/// on indices. The map is verified against both graphs before returning.
pub fn witness_lemma_1_1(h: &Hypergraph) -> Result<BijectionWitness, DerivationError> {
    let hd = require_two_regular_linear(h)?;
    let sigma: Vec<usize> = (0..h.n()).collect();
    let phi: Vec<usize> = (0..hd.m()).collect();
    let mapping = sigma.iter().map(|&g| phi[g]).collect();
    let w = BijectionWitness { mapping, direction: WitnessKind::TwoSectionToLineOfDual };
    w.verify(&two_section(h), &line_graph(&hd))
        .map_err(|(u, v)| DerivationError::WitnessMismatch(u, v))?;
    Ok(w)
}

/// Identity on edge ids: dual vertex `u_j` ↦ line-graph vertex `w_j`.
pub fn witness_lemma_1_2(h: &Hypergraph) -> Result<BijectionWitness, DerivationError> {
    let hd = require_two_regular_linear(h)?;
    let w = BijectionWitness {
        mapping: (0..h.m()).collect(),
        direction: WitnessKind::DualToLineGraph,
    };
    w.verify(&two_section(&hd), &line_graph(h))
        .map_err(|(u, v)| DerivationError::WitnessMismatch(u, v))?;
    Ok(w)
}

/// All maximal cliques (Bron–Kerbosch with pivoting), each sorted.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    fn expand(
        g: &Graph,
        r: &mut Vec<usize>,
        mut p: BTreeSet<usize>,
        mut x: BTreeSet<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        let pivot = *p
            .union(&x)
            .max_by_key(|&&u| p.intersection(g.neighbors(u)).count())
            .expect("p is nonempty");
        let branch: Vec<usize> = p.difference(g.neighbors(pivot)).copied().collect();
        for v in branch {
            let nv = g.neighbors(v);
            r.push(v);
            expand(
                g,
                r,
                p.intersection(nv).copied().collect(),
                x.intersection(nv).copied().collect(),
                out,
            );
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    expand(g, &mut Vec::new(), (0..g.n()).collect(), BTreeSet::new(), &mut out);
    out
}

/// A linear hypergraph whose 2-section is exactly `g`.
///
/// Maximal cliques are packed greedily, largest first and then by their sorted
/// vertex lists, keeping only cliques that meet every chosen clique in at most
/// one vertex. Edges left uncovered become 2-element hyperedges.
pub fn linear_cover(g: &Graph) -> Result<Hypergraph, DerivationError> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(DerivationError::IsolatedVertex(v));
    }
    let mut cliques = maximal_cliques(g);
    cliques.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    for c in cliques.into_iter().filter(|c| c.len() >= 3) {
        let compatible = chosen
            .iter()
            .all(|d| c.iter().filter(|v| d.binary_search(v).is_ok()).count() <= 1);
        if compatible {
            chosen.push(c);
        }
    }
    let mut covered = BTreeSet::new();
    for c in &chosen {
        for (i, &u) in c.iter().enumerate() {
            for &v in &c[i + 1..] {
                covered.insert((u, v));
            }
        }
    }
    let mut edges = chosen;
    edges.extend(
        g.edges()
            .into_iter()
            .filter(|e| !covered.contains(e))
            .map(|(u, v)| vec![u, v]),
    );
    Ok(Hypergraph::new(g.n(), edges).expect("clique packing yields a simple covering family"))
}
