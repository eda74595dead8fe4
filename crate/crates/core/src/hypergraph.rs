use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::{rat, Rational};

/// Default cap on the number of edges for exhaustive minimality checks.
pub const DEFAULT_MINIMALITY_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("edge {edge} has {size} vertex(es); hyperedges need at least 2")]
    LoopEdge { edge: usize, size: usize },
    #[error("edge {edge} is contained in edge {container}")]
    DuplicateOrNestedEdge { edge: usize, container: usize },
    #[error("vertex {vertex} lies in no edge")]
    UncoveredVertex { vertex: usize },
    #[error("edge {edge} references vertex {vertex}, but n = {n}")]
    OutOfRangeVertex { edge: usize, vertex: usize, n: usize },
    #[error("edge id {edge} does not exist")]
    UnknownEdge { edge: usize },
    #[error("edge sets overlap in edge {edge}")]
    OverlappingSets { edge: usize },
    #[error("edge subset must be nonempty and proper (|S| = {size}, m = {m})")]
    BadSubset { size: usize, m: usize },
    #[error("{m} edges exceed the enumeration cap of {cap}")]
    TooLarge { m: usize, cap: usize },
}

/// A simple, loop-free hypergraph on vertices `0..n` whose edges cover every
/// vertex. Edge ids are positions in the edge list; each edge is kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Validates and builds a hypergraph. Vertices repeated inside one edge are
    /// merged; edge order is preserved.
    pub fn new<E, I>(n: usize, edges: E) -> Result<Self, HypergraphError>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for (id, e) in edges.into_iter().enumerate() {
            let set: BTreeSet<usize> = e.into_iter().collect();
            if let Some(&v) = set.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::OutOfRangeVertex { edge: id, vertex: v, n });
            }
            if set.len() < 2 {
                return Err(HypergraphError::LoopEdge { edge: id, size: set.len() });
            }
            sets.push(set.into_iter().collect());
        }
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                if i != j && is_subset(&sets[i], &sets[j]) {
                    // report the later edge of an identical pair as the offender
                    let (edge, container) = if sets[i].len() == sets[j].len() && i < j {
                        (j, i)
                    } else {
                        (i, j)
                    };
                    return Err(HypergraphError::DuplicateOrNestedEdge { edge, container });
                }
            }
        }
        let mut incidence = vec![Vec::new(); n];
        for (id, e) in sets.iter().enumerate() {
            for &v in e {
                incidence[v].push(id);
            }
        }
        if let Some(vertex) = incidence.iter().position(Vec::is_empty) {
            return Err(HypergraphError::UncoveredVertex { vertex });
        }
        Ok(Hypergraph { n, edges: sets, incidence })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &[usize] {
        &self.edges[id]
    }

    /// `F(v)`: ids of the edges containing `v`, ascending.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn edge_contains(&self, edge: usize, v: usize) -> bool {
        self.edges[edge].binary_search(&v).is_ok()
    }

    /// Rebuilds the vertex-to-edge index from the edge list and compares.
    pub fn degree_index_consistent(&self) -> bool {
        let mut rebuilt = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            for &v in e {
                rebuilt[v].push(id);
            }
        }
        rebuilt == self.incidence
    }

    pub fn rank(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn anti_rank(&self) -> usize {
        self.edges.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn total_size(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// `l(H)`, the average edge size.
    pub fn avg_rank(&self) -> Rational {
        if self.m() == 0 {
            return rat(0);
        }
        Rational::new(self.total_size() as i64, self.m() as i64)
    }

    pub fn is_linear(&self) -> bool {
        // two edges sharing two vertices show up as the same edge pair twice
        let mut seen = BTreeSet::new();
        self.incidence
            .iter()
            .flat_map(|es| pairs(es))
            .all(|p| seen.insert(p))
    }

    pub fn stats(&self) -> HypergraphStats {
        let (min_degree, max_degree) = (self.min_degree(), self.max_degree());
        HypergraphStats {
            rank: self.rank(),
            anti_rank: self.anti_rank(),
            max_degree,
            min_degree,
            avg_rank: self.avg_rank(),
            is_linear: self.is_linear(),
            regular: (min_degree == max_degree).then_some(max_degree),
            m: self.m(),
            n: self.n(),
        }
    }

    fn check_edge_set(&self, set: &[usize]) -> Result<BTreeSet<usize>, HypergraphError> {
        let mut out = BTreeSet::new();
        for &e in set {
            if e >= self.m() {
                return Err(HypergraphError::UnknownEdge { edge: e });
            }
            out.insert(e);
        }
        Ok(out)
    }

    /// `deg_X(v)` for every vertex.
    fn degrees_in(&self, set: &BTreeSet<usize>) -> Vec<usize> {
        (0..self.n)
            .map(|v| self.incidence[v].iter().filter(|e| set.contains(e)).count())
            .collect()
    }

    /// σ-counts of an edge set `X`, and optionally the joint counts against a
    /// disjoint set `Y`.
    pub fn sigma_counts(&self, x: &[usize], y: Option<&[usize]>) -> Result<SigmaProfile, HypergraphError> {
        let xs = self.check_edge_set(x)?;
        let ys = y.map(|y| self.check_edge_set(y)).transpose()?;
        if let Some(ys) = &ys {
            if let Some(&edge) = xs.intersection(ys).next() {
                return Err(HypergraphError::OverlappingSets { edge });
            }
        }
        let dx = self.degrees_in(&xs);
        let mut counts = BTreeMap::new();
        for v in 0..self.n {
            if dx[v] > 0 {
                *counts.entry((self.degree(v), dx[v])).or_insert(0) += 1;
            }
        }
        let joint_counts = ys.map(|ys| {
            let dy = self.degrees_in(&ys);
            let mut joint = BTreeMap::new();
            for v in 0..self.n {
                if dx[v] + dy[v] > 0 {
                    *joint.entry((self.degree(v), dx[v], dy[v])).or_insert(0) += 1;
                }
            }
            joint
        });
        Ok(SigmaProfile {
            counts,
            joint_counts,
            range: (self.min_degree(), self.max_degree()),
        })
    }

    /// `l(H_S)`: weighted count of vertices untouched by `S`, divided by
    /// `m - |S|`.
    pub fn avg_rank_after_removal(&self, s: &[usize]) -> Result<Rational, HypergraphError> {
        let set = self.check_edge_set(s)?;
        if set.is_empty() || set.len() == self.m() {
            return Err(HypergraphError::BadSubset { size: set.len(), m: self.m() });
        }
        let untouched: usize = (0..self.n)
            .filter(|&v| self.incidence[v].iter().all(|e| !set.contains(e)))
            .map(|v| self.degree(v))
            .sum();
        Ok(Rational::new(untouched as i64, (self.m() - set.len()) as i64))
    }

    /// Exhaustive check that `l(H_S) < l(H)` for every nonempty proper `S`.
    pub fn is_minimal(&self, cap: usize) -> Result<bool, HypergraphError> {
        let m = self.m();
        if m > cap || m >= 63 {
            return Err(HypergraphError::TooLarge { m, cap });
        }
        let masks: Vec<u64> = self
            .incidence
            .iter()
            .map(|es| es.iter().fold(0u64, |acc, &e| acc | (1 << e)))
            .collect();
        let total = self.total_size() as i64;
        let full = (1u64 << m) - 1;
        for s in 1..full {
            let untouched: i64 = masks
                .iter()
                .filter(|&&mask| mask & s == 0)
                .map(|mask| mask.count_ones() as i64)
                .sum();
            let kept = m as i64 - s.count_ones() as i64;
            // untouched / kept < total / m
            if untouched * m as i64 >= total * kept {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same hypergraph with vertices renamed through `perm` (old -> new).
    pub fn relabel(&self, perm: &[usize]) -> Hypergraph {
        let edges: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v]).collect())
            .collect();
        Hypergraph::new(self.n, edges).expect("relabelling preserves validity")
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && a.iter().all(|v| b.binary_search(v).is_ok())
}

fn pairs(items: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    items
        .iter()
        .enumerate()
        .flat_map(move |(i, &a)| items[i + 1..].iter().map(move |&b| (a, b)))
}

/// Degree and rank statistics of a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergraphStats {
    pub rank: usize,
    pub anti_rank: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub avg_rank: Rational,
    pub is_linear: bool,
    pub regular: Option<usize>,
    pub m: usize,
    pub n: usize,
}

/// σ-counts of an edge set.
///
/// `counts[(i, j)]` is the number of degree-`i` vertices with exactly `j >= 1`
/// incident edges inside `X`. `joint_counts[(i, j, l)]` additionally splits by
/// the number `l` of incident edges inside `Y`; entries with `j = l = 0` are
/// not stored. Missing keys are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaProfile {
    pub counts: BTreeMap<(usize, usize), usize>,
    pub joint_counts: Option<BTreeMap<(usize, usize, usize), usize>>,
    pub range: (usize, usize),
}

impl SigmaProfile {
    pub fn sigma(&self, i: usize, j: usize) -> usize {
        self.counts.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn joint(&self, i: usize, j: usize, l: usize) -> usize {
        self.joint_counts
            .as_ref()
            .and_then(|jc| jc.get(&(i, j, l)).copied())
            .unwrap_or(0)
    }

    /// Σ_i σ_i^i(X): vertices all of whose edges lie in `X`.
    pub fn saturated(&self) -> usize {
        self.counts
            .iter()
            .filter(|((i, j), _)| i == j)
            .map(|(_, c)| c)
            .sum()
    }

    /// Σ_{i,j} j·σ_i^j(X), which equals Σ_{f∈X} |f|.
    pub fn incidences(&self) -> usize {
        self.counts.iter().map(|((_, j), c)| j * c).sum()
    }

    /// Σ_{i,j} σ_i^j(X)·(j − i/Δ) for the given Δ.
    pub fn excess(&self, max_degree: usize) -> Rational {
        self.counts
            .iter()
            .map(|(&(i, j), &c)| rat(c as i64) * (rat(j as i64) - Rational::new(i as i64, max_degree as i64)))
            .sum()
    }
}
