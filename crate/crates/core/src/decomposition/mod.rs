//! Tree and supertree decompositions with their validators.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::Graph;
use crate::hypergraph::Hypergraph;

mod leaf;

pub use leaf::{normalize_leaf_based, LeafBasedDecomposition, LeafViolation};
pub(crate) use leaf::spanned_bags;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("input decomposition is invalid: {0:?}")]
    InvalidInput(Vec<TdViolation>),
    #[error("{nodes} tree nodes but {bags} bags")]
    BagCountMismatch { nodes: usize, bags: usize },
}

/// Undirected graph on nodes `0..len`, meant to be a tree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tree {
    adj: Vec<BTreeSet<usize>>,
}

impl Tree {
    pub fn new(nodes: usize) -> Self {
        Tree { adj: vec![BTreeSet::new(); nodes] }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(nodes: usize, edges: I) -> Self {
        let mut t = Tree::new(nodes);
        for (a, b) in edges {
            t.add_edge(a, b);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.len() && b < self.len(), "bad tree edge ({a}, {b})");
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> bool {
        let had = self.adj[a].remove(&b);
        self.adj[b].remove(&a);
        had
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj.get(a).is_some_and(|nb| nb.contains(&b))
    }

    /// Replaces the edge `ab` with a path `a - new - b` and returns the new node.
    pub fn subdivide(&mut self, a: usize, b: usize) -> usize {
        assert!(self.remove_edge(a, b), "({a}, {b}) is not a tree edge");
        let t = self.add_node();
        self.add_edge(a, t);
        self.add_edge(t, b);
        t
    }

    pub fn neighbors(&self, t: usize) -> &BTreeSet<usize> {
        &self.adj[t]
    }

    pub fn degree(&self, t: usize) -> usize {
        self.adj[t].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nb) in self.adj.iter().enumerate() {
            out.extend(nb.range(a + 1..).map(|&b| (a, b)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.edge_count() + 1 == self.len() && self.reachable_from(0).iter().all(|&r| r)
    }

    fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(t) = stack.pop() {
            for &u in &self.adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Parent pointers and a BFS order from `root`.
    pub fn orient(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut parent = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        let mut order = Vec::with_capacity(self.len());
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(t) = queue.pop_front() {
            order.push(t);
            for &u in &self.adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(t);
                    queue.push_back(u);
                }
            }
        }
        (parent, order)
    }

    /// Nodes of the path from `a` to `b`, endpoints included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let (parent, _) = self.orient(b);
        let mut out = vec![a];
        let mut t = a;
        while let Some(p) = parent[t] {
            out.push(p);
            t = p;
        }
        out
    }

    /// True when `members` is nonempty and induces a connected subtree.
    pub fn is_connected_subset(&self, members: &[bool]) -> bool {
        let Some(s) = members.iter().position(|&x| x) else {
            return false;
        };
        let mut seen = vec![false; self.len()];
        seen[s] = true;
        let mut stack = vec![s];
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for &u in &self.adj[t] {
                if members[u] && !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == members.iter().filter(|&&x| x).count()
    }

    /// Membership vector of the smallest subtree containing every terminal.
    pub fn steiner(&self, terminals: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.len()];
        let Some(&root) = terminals.first() else {
            return inside;
        };
        let mut is_terminal = vec![false; self.len()];
        for &t in terminals {
            is_terminal[t] = true;
        }
        // rooted at a terminal, a node is needed iff its subtree holds a terminal
        let (parent, order) = self.orient(root);
        for &t in order.iter().rev() {
            if is_terminal[t] {
                inside[t] = true;
            }
            if inside[t] {
                if let Some(p) = parent[t] {
                    inside[p] = true;
                }
            }
        }
        inside
    }
}

/// A tree with one sorted vertex bag per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: Tree,
    pub bags: Vec<Vec<usize>>,
    pub root: Option<usize>,
}

impl TreeDecomposition {
    pub fn new(tree: Tree, bags: Vec<Vec<usize>>) -> Result<Self, DecompositionError> {
        if tree.len() != bags.len() {
            return Err(DecompositionError::BagCountMismatch { nodes: tree.len(), bags: bags.len() });
        }
        Ok(TreeDecomposition { tree, bags: bags.into_iter().map(normalize_bag).collect(), root: None })
    }

    pub fn single_bag(bag: Vec<usize>) -> Self {
        TreeDecomposition { tree: Tree::new(1), bags: vec![normalize_bag(bag)], root: None }
    }

    /// Largest bag size minus one (zero for empty bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `B⁻¹(v)` for every vertex `< n`, each ascending.
    pub fn occurrences(&self, n: usize) -> Vec<Vec<usize>> {
        let mut occ = vec![Vec::new(); n];
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v < n {
                    occ[v].push(t);
                }
            }
        }
        occ
    }

    /// Places decompositions side by side, links consecutive parts by an edge
    /// between their first nodes, and maps local vertex ids through `labels`.
    pub fn join(parts: Vec<(TreeDecomposition, Vec<usize>)>) -> TreeDecomposition {
        let mut tree = Tree::new(0);
        let mut bags = Vec::new();
        let mut prev_first = None;
        for (part, labels) in parts {
            let offset = tree.len();
            for _ in 0..part.tree.len() {
                tree.add_node();
            }
            for (a, b) in part.tree.edges() {
                tree.add_edge(a + offset, b + offset);
            }
            bags.extend(part.bags.into_iter().map(|b| normalize_bag(b.into_iter().map(|v| labels[v]).collect())));
            if let Some(p) = prev_first {
                tree.add_edge(p, offset);
            }
            prev_first = Some(offset);
        }
        if tree.is_empty() {
            return TreeDecomposition::single_bag(Vec::new());
        }
        TreeDecomposition { tree, bags, root: None }
    }
}

fn normalize_bag(mut bag: Vec<usize>) -> Vec<usize> {
    bag.sort_unstable();
    bag.dedup();
    bag
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    NotATree,
    BagCountMismatch { nodes: usize, bags: usize },
    VertexOutOfRange { node: usize, vertex: usize },
    /// (T1): the vertex appears in no bag.
    VertexMissing { vertex: usize },
    /// (T1): the bags holding the vertex are not connected.
    VertexDisconnected { vertex: usize },
    /// (T2): no bag holds both ends.
    EdgeUncovered { u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdReport {
    pub violations: Vec<TdViolation>,
    pub width: usize,
}

impl TdReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every violation of (T1) and (T2), plus structural problems.
pub fn validate_td(g: &Graph, d: &TreeDecomposition) -> TdReport {
    let mut violations = Vec::new();
    let width = d.width();
    if d.tree.len() != d.bags.len() {
        violations.push(TdViolation::BagCountMismatch { nodes: d.tree.len(), bags: d.bags.len() });
        return TdReport { violations, width };
    }
    if !d.tree.is_tree() {
        violations.push(TdViolation::NotATree);
        return TdReport { violations, width };
    }
    for (node, bag) in d.bags.iter().enumerate() {
        violations.extend(
            bag.iter()
                .filter(|&&v| v >= g.n())
                .map(|&vertex| TdViolation::VertexOutOfRange { node, vertex }),
        );
    }
    let occ = d.occurrences(g.n());
    let mut members = vec![false; d.tree.len()];
    for (vertex, nodes) in occ.iter().enumerate() {
        if nodes.is_empty() {
            violations.push(TdViolation::VertexMissing { vertex });
            continue;
        }
        for &t in nodes {
            members[t] = true;
        }
        if !d.tree.is_connected_subset(&members) {
            violations.push(TdViolation::VertexDisconnected { vertex });
        }
        for &t in nodes {
            members[t] = false;
        }
    }
    for (u, v) in g.edges() {
        if !sorted_intersect(&occ[u], &occ[v]) {
            violations.push(TdViolation::EdgeUncovered { u, v });
        }
    }
    TdReport { violations, width }
}

fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// A tree with a vertex bag `B_t` and an edge bag `λ_t` per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupertreeDecomposition {
    pub tree: Tree,
    pub vertex_bags: Vec<Vec<usize>>,
    pub edge_bags: Vec<Vec<usize>>,
}

impl SupertreeDecomposition {
    pub fn new(tree: Tree, vertex_bags: Vec<Vec<usize>>, edge_bags: Vec<Vec<usize>>) -> Result<Self, DecompositionError> {
        for len in [vertex_bags.len(), edge_bags.len()] {
            if len != tree.len() {
                return Err(DecompositionError::BagCountMismatch { nodes: tree.len(), bags: len });
            }
        }
        Ok(SupertreeDecomposition {
            tree,
            vertex_bags: vertex_bags.into_iter().map(normalize_bag).collect(),
            edge_bags: edge_bags.into_iter().map(normalize_bag).collect(),
        })
    }

    /// Builds the decomposition with `λ_t` taken from a tree decomposition of
    /// `L(H)` and `B_t = ∪_{f∈λ_t} f`.
    pub fn from_line_graph_decomposition(h: &Hypergraph, d: &TreeDecomposition) -> Self {
        let vertex_bags = d
            .bags
            .iter()
            .map(|lam| normalize_bag(lam.iter().flat_map(|&f| h.edge(f).iter().copied()).collect()))
            .collect();
        SupertreeDecomposition { tree: d.tree.clone(), vertex_bags, edge_bags: d.bags.clone() }
    }

    /// `max |λ_t|`.
    pub fn width(&self) -> usize {
        self.edge_bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn vertex_decomposition(&self) -> TreeDecomposition {
        TreeDecomposition { tree: self.tree.clone(), bags: self.vertex_bags.clone(), root: None }
    }

    /// `λ⁻¹(f)` for every edge id `< m`, each ascending.
    pub fn edge_occurrences(&self, m: usize) -> Vec<Vec<usize>> {
        let mut occ = vec![Vec::new(); m];
        for (t, lam) in self.edge_bags.iter().enumerate() {
            for &f in lam {
                if f < m {
                    occ[f].push(t);
                }
            }
        }
        occ
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StdViolation {
    /// (TI): the vertex bags fail as a tree decomposition of the 2-section.
    Td(TdViolation),
    EdgeOutOfRange { node: usize, edge: usize },
    /// (TII): a bag vertex is not covered by the node's edges.
    BagNotCovered { node: usize, vertex: usize },
    /// (TIII): the edge appears in no edge bag.
    EdgeMissing { edge: usize },
    /// (TIII): the nodes holding the edge are not connected.
    EdgeDisconnected { edge: usize },
    /// (TIV): two intersecting edges never share an edge bag.
    PairNotCovered { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StdReport {
    pub violations: Vec<StdViolation>,
    pub width: usize,
}

impl StdReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks (TI) through (TIV) and reports the width `max |λ_t|`.
pub fn validate_std(h: &Hypergraph, d: &SupertreeDecomposition) -> StdReport {
    let width = d.width();
    if d.edge_bags.len() != d.tree.len() {
        let v = TdViolation::BagCountMismatch { nodes: d.tree.len(), bags: d.edge_bags.len() };
        return StdReport { violations: vec![StdViolation::Td(v)], width };
    }
    let td = validate_td(&crate::derivations::two_section(h), &d.vertex_decomposition());
    let mut violations: Vec<StdViolation> = td.violations.iter().cloned().map(StdViolation::Td).collect();
    if td.violations.iter().any(|v| matches!(v, TdViolation::NotATree | TdViolation::BagCountMismatch { .. })) {
        return StdReport { violations, width };
    }
    for (node, lam) in d.edge_bags.iter().enumerate() {
        violations.extend(
            lam.iter()
                .filter(|&&f| f >= h.m())
                .map(|&edge| StdViolation::EdgeOutOfRange { node, edge }),
        );
        let covered = |v: &usize| lam.iter().any(|&f| f < h.m() && h.edge_contains(f, *v));
        violations.extend(
            d.vertex_bags[node]
                .iter()
                .filter(|v| !covered(v))
                .map(|&vertex| StdViolation::BagNotCovered { node, vertex }),
        );
    }
    let occ = d.edge_occurrences(h.m());
    let mut members = vec![false; d.tree.len()];
    for (edge, nodes) in occ.iter().enumerate() {
        if nodes.is_empty() {
            violations.push(StdViolation::EdgeMissing { edge });
            continue;
        }
        for &t in nodes {
            members[t] = true;
        }
        if !d.tree.is_connected_subset(&members) {
            violations.push(StdViolation::EdgeDisconnected { edge });
        }
        for &t in nodes {
            members[t] = false;
        }
    }
    for (first, second) in crate::derivations::line_graph(h).edges() {
        if !sorted_intersect(&occ[first], &occ[second]) {
            violations.push(StdViolation::PairNotCovered { first, second });
        }
    }
    StdReport { violations, width }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn single_bag_clique() {
        let d = TreeDecomposition::single_bag(vec![2, 0, 1]);
        let r = validate_td(&k3(), &d);
        assert!(r.is_valid());
        assert_eq!(r.width, 2);
    }

    #[test]
    fn path_two_bags_and_broken_variant() {
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let d = TreeDecomposition::new(Tree::from_edges(2, [(0, 1)]), vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(validate_td(&p, &d).is_valid());
        assert_eq!(d.width(), 1);

        let broken = TreeDecomposition::new(
            Tree::from_edges(3, [(0, 1), (1, 2)]),
            vec![vec![0, 1], vec![0], vec![1, 2]],
        )
        .unwrap();
        let r = validate_td(&p, &broken);
        assert_eq!(r.violations, vec![TdViolation::VertexDisconnected { vertex: 1 }]);
    }

    #[test]
    fn widths() {
        assert_eq!(TreeDecomposition::single_bag(vec![0, 1, 2, 3]).width(), 3);
        let d = TreeDecomposition::new(Tree::from_edges(2, [(0, 1)]), vec![vec![0], vec![1]]).unwrap();
        assert_eq!(d.width(), 0);
        let d = TreeDecomposition::new(
            Tree::from_edges(3, [(0, 1), (1, 2)]),
            vec![vec![0, 1], vec![1, 2, 3], vec![2, 3, 4]],
        )
        .unwrap();
        assert_eq!(d.width(), 2);
    }

    #[test]
    fn detects_uncovered_edge_and_cycle() {
        let d = TreeDecomposition::new(Tree::from_edges(2, [(0, 1)]), vec![vec![0, 1], vec![2]]).unwrap();
        let r = validate_td(&k3(), &d);
        assert!(r.violations.contains(&TdViolation::EdgeUncovered { u: 1, v: 2 }));
        let cyc = TreeDecomposition::new(
            Tree::from_edges(3, [(0, 1), (1, 2), (0, 2)]),
            vec![vec![0, 1, 2]; 3],
        )
        .unwrap();
        assert_eq!(validate_td(&k3(), &cyc).violations, vec![TdViolation::NotATree]);
    }

    #[test]
    fn std_examples() {
        let h = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        let d = SupertreeDecomposition::new(Tree::new(1), vec![vec![0, 1, 2]], vec![vec![0]]).unwrap();
        let r = validate_std(&h, &d);
        assert!(r.is_valid());
        assert_eq!(r.width, 1);

        let tri = Hypergraph::new(3, [[0, 1], [1, 2], [0, 2]]).unwrap();
        let d = SupertreeDecomposition::new(Tree::new(1), vec![vec![0, 1, 2]], vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(validate_std(&tri, &d).width, 3);
        assert!(validate_std(&tri, &d).is_valid());

        let d = SupertreeDecomposition::new(Tree::new(1), vec![vec![0, 1, 2]], vec![vec![0, 2]]).unwrap();
        let r = validate_std(&tri, &d);
        assert!(r.violations.contains(&StdViolation::EdgeMissing { edge: 1 }));
        assert!(r.violations.contains(&StdViolation::PairNotCovered { first: 0, second: 1 }));
    }

    #[test]
    fn steiner_subtree() {
        // 0 - 1 - 2 - 3 with a branch 1 - 4
        let t = Tree::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)]);
        assert_eq!(t.steiner(&[0, 2]), vec![true, true, true, false, false]);
        assert_eq!(t.steiner(&[4]), vec![false, false, false, false, true]);
        assert_eq!(t.path(3, 4), vec![3, 2, 1, 4]);
    }
}
