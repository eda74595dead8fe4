//! Leaf-based normal form: a rooted binary decomposition whose leaves are in
//! bijection with the hyperedges and whose vertex occurrences are exactly the
//! subtrees spanned by the base leaves.

use super::{validate_td, DecompositionError, TdViolation, Tree, TreeDecomposition};
use crate::derivations::two_section;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafBasedDecomposition {
    pub td: TreeDecomposition,
    /// `base[f]` is the leaf `b(f)`.
    pub base: Vec<usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// Set when `m = 1`: the root then has a single child.
    pub single_edge: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeafViolation {
    Td(TdViolation),
    MissingRoot,
    NotBinary { node: usize, children: usize },
    BaseNotLeaf { edge: usize, node: usize },
    BaseNotBijective,
    EdgeNotInBase { edge: usize },
    /// `B⁻¹(v)` differs from the subtree spanned by the base leaves of `F(v)`.
    SubtreeMismatch { vertex: usize },
}

impl LeafBasedDecomposition {
    /// Wraps a rooted decomposition and a base assignment without checking.
    pub fn from_parts(td: TreeDecomposition, root: usize, base: Vec<usize>) -> Self {
        let (parent, order) = td.tree.orient(root);
        let mut children = vec![Vec::new(); td.tree.len()];
        for &t in &order {
            if let Some(p) = parent[t] {
                children[p].push(t);
            }
        }
        let single_edge = base.len() == 1;
        let mut td = td;
        td.root = Some(root);
        LeafBasedDecomposition { td, base, parent, children, single_edge }
    }

    pub fn root(&self) -> usize {
        self.td.root.expect("leaf-based decompositions are rooted")
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    pub fn is_leaf(&self, t: usize) -> bool {
        self.children[t].is_empty()
    }

    pub fn width(&self) -> usize {
        self.td.width()
    }

    /// `z(T_t)` for every node: the edges whose base leaf lies below `t`.
    pub fn z_sets(&self) -> Vec<Vec<usize>> {
        let n = self.td.tree.len();
        let mut z = vec![Vec::new(); n];
        for (f, &leaf) in self.base.iter().enumerate() {
            let mut t = Some(leaf);
            while let Some(x) = t {
                z[x].push(f);
                t = self.parent[x];
            }
        }
        z
    }

    /// Every structural invariant of the normal form, checked against `h`.
    pub fn check(&self, h: &Hypergraph) -> Vec<LeafViolation> {
        let mut out: Vec<LeafViolation> = validate_td(&two_section(h), &self.td)
            .violations
            .into_iter()
            .map(LeafViolation::Td)
            .collect();
        if !out.is_empty() {
            return out;
        }
        if self.td.root.is_none() {
            out.push(LeafViolation::MissingRoot);
            return out;
        }
        for t in 0..self.td.tree.len() {
            let c = self.children[t].len();
            let allowed = c == 0 || c == 2 || (self.single_edge && t == self.root() && c == 1);
            if !allowed {
                out.push(LeafViolation::NotBinary { node: t, children: c });
            }
        }
        let mut hit = vec![false; self.td.tree.len()];
        for (edge, &node) in self.base.iter().enumerate() {
            if !self.is_leaf(node) {
                out.push(LeafViolation::BaseNotLeaf { edge, node });
            }
            hit[node] = true;
            if !h.edge(edge).iter().all(|v| self.td.bags[node].binary_search(v).is_ok()) {
                out.push(LeafViolation::EdgeNotInBase { edge });
            }
        }
        let leaves = (0..hit.len()).filter(|&t| self.is_leaf(t)).count();
        if self.base.len() != h.m() || leaves != h.m() || (0..hit.len()).any(|t| self.is_leaf(t) && !hit[t]) {
            out.push(LeafViolation::BaseNotBijective);
        }
        let occ = self.td.occurrences(h.n());
        for (vertex, nodes) in occ.iter().enumerate() {
            let terminals: Vec<usize> = h.incident(vertex).iter().map(|&f| self.base[f]).collect();
            let st = self.td.tree.steiner(&terminals);
            let expected: Vec<usize> = (0..st.len()).filter(|&t| st[t]).collect();
            if &expected != nodes {
                out.push(LeafViolation::SubtreeMismatch { vertex });
            }
        }
        out
    }
}

/// Bags `{v : t ∈ ST_v}` where `ST_v` is spanned by the base leaves of `F(v)`.
pub(crate) fn spanned_bags(h: &Hypergraph, tree: &Tree, base: &[usize]) -> Vec<Vec<usize>> {
    let mut bags = vec![Vec::new(); tree.len()];
    for v in 0..h.n() {
        let terminals: Vec<usize> = h.incident(v).iter().map(|&f| base[f]).collect();
        for (t, inside) in tree.steiner(&terminals).into_iter().enumerate() {
            if inside {
                bags[t].push(v);
            }
        }
    }
    bags
}

/// Converts a tree decomposition of `[H]_2` into leaf-based normal form.
///
/// Each edge takes as base the lowest-id node whose bag contains it; a fresh
/// leaf is hung below that node per edge, the tree is cut down to the subtree
/// spanned by these leaves, non-root nodes with one child are suppressed, and
/// nodes with three or more children are split into chains of copies with
/// children ordered by their smallest edge id. Bags are then recomputed as the
/// spanned subtrees, which never enlarges any bag.
pub fn normalize_leaf_based(h: &Hypergraph, d: &TreeDecomposition) -> Result<LeafBasedDecomposition, DecompositionError> {
    let report = validate_td(&two_section(h), d);
    if !report.is_valid() {
        return Err(DecompositionError::InvalidInput(report.violations));
    }
    let m = h.m();
    if m == 0 {
        return Err(DecompositionError::InvalidInput(Vec::new()));
    }
    if m == 1 {
        let tree = Tree::from_edges(2, [(0, 1)]);
        let td = TreeDecomposition { tree, bags: vec![Vec::new(), h.edge(0).to_vec()], root: Some(0) };
        return Ok(LeafBasedDecomposition::from_parts(td, 0, vec![1]));
    }

    let mut extended = d.tree.clone();
    let original = d.tree.len();
    let mut leaf_of = Vec::with_capacity(m);
    for f in 0..m {
        let host = (0..original)
            .find(|&t| h.edge(f).iter().all(|v| d.bags[t].binary_search(v).is_ok()))
            .expect("(T2) puts every hyperedge clique in some bag");
        let leaf = extended.add_node();
        extended.add_edge(host, leaf);
        leaf_of.push(leaf);
    }
    let inside = extended.steiner(&leaf_of);
    let root = (0..original).find(|&t| inside[t]).expect("two leaves are joined through an original node");

    let mut edge_of_leaf = vec![usize::MAX; extended.len()];
    for (f, &leaf) in leaf_of.iter().enumerate() {
        edge_of_leaf[leaf] = f;
    }
    let (parent, order) = extended.orient(root);
    let mut kids = vec![Vec::new(); extended.len()];
    let mut min_edge = edge_of_leaf.clone();
    for &t in order.iter().rev() {
        if !inside[t] {
            continue;
        }
        if let Some(p) = parent[t] {
            kids[p].push(t);
            min_edge[p] = min_edge[p].min(min_edge[t]);
        }
    }

    let mut tree = Tree::new(1);
    let mut base = vec![0; m];
    // (old node, new node) pairs still to expand
    let mut stack = vec![(root, 0usize)];
    while let Some((old, new)) = stack.pop() {
        if edge_of_leaf[old] != usize::MAX {
            base[edge_of_leaf[old]] = new;
            continue;
        }
        let mut reps: Vec<usize> = kids[old]
            .iter()
            .map(|&c| {
                let mut x = c;
                while kids[x].len() == 1 {
                    x = kids[x][0];
                }
                x
            })
            .collect();
        reps.sort_by_key(|&c| min_edge[c]);
        let mut current = new;
        let last = reps.len().saturating_sub(2);
        for (i, &c) in reps.iter().enumerate() {
            if i > 0 && i <= last {
                let copy = tree.add_node();
                tree.add_edge(current, copy);
                current = copy;
            }
            let child = tree.add_node();
            tree.add_edge(current, child);
            stack.push((c, child));
        }
    }
    let bags = spanned_bags(h, &tree, &base);
    let td = TreeDecomposition { tree, bags, root: Some(0) };
    Ok(LeafBasedDecomposition::from_parts(td, 0, base))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Hypergraph {
        Hypergraph::new(3, [[0, 1], [1, 2], [0, 2]]).unwrap()
    }

    #[test]
    fn single_edge_case() {
        let h = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        let d = normalize_leaf_based(&h, &TreeDecomposition::single_bag(vec![0, 1, 2])).unwrap();
        assert!(d.single_edge);
        assert_eq!(d.width(), 2);
        assert!(d.check(&h).is_empty());
        assert_eq!(d.td.bags[d.base[0]], vec![0, 1, 2]);
    }

    #[test]
    fn triangle_from_single_bag() {
        let h = tri();
        let d = normalize_leaf_based(&h, &TreeDecomposition::single_bag(vec![0, 1, 2])).unwrap();
        assert!(d.check(&h).is_empty(), "{:?}", d.check(&h));
        assert_eq!(d.base.len(), 3);
        assert!(d.width() <= 2);
        assert_eq!(d.td.tree.len(), 5);
        for f in 0..3 {
            assert_eq!(d.td.bags[d.base[f]], h.edge(f));
        }
    }

    #[test]
    fn wide_star_is_binarized() {
        // five edges through one vertex, given as one bag plus junk leaves
        let h = Hypergraph::new(6, (1..6).map(|i| [0, i])).unwrap();
        let tree = Tree::from_edges(3, [(0, 1), (0, 2)]);
        let td = TreeDecomposition::new(tree, vec![(0..6).collect(), vec![0], vec![3]]).unwrap();
        let d = normalize_leaf_based(&h, &td).unwrap();
        assert!(d.check(&h).is_empty());
        assert_eq!(d.td.tree.len(), 9);
        assert!(d.width() <= 5);
    }

    #[test]
    fn rejects_invalid_input() {
        let td = TreeDecomposition::single_bag(vec![0, 1]);
        assert!(matches!(normalize_leaf_based(&tri(), &td), Err(DecompositionError::InvalidInput(_))));
    }

    #[test]
    fn z_sets_count_edges_below() {
        let h = tri();
        let d = normalize_leaf_based(&h, &TreeDecomposition::single_bag(vec![0, 1, 2])).unwrap();
        let z = d.z_sets();
        assert_eq!(z[d.root()].len(), 3);
        for f in 0..3 {
            assert_eq!(z[d.base[f]], vec![f]);
        }
    }
}
