//! Conversions between tree decompositions of `[H]_2` and supertree
//! decompositions of `H`, with the width guarantees that relate `tw([H]_2)`
//! and `stw(H)`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::decomposition::{
    spanned_bags, validate_std, validate_td, LeafBasedDecomposition, StdViolation, SupertreeDecomposition, TdViolation,
    Tree, TreeDecomposition,
};
use crate::derivations::two_section;
use crate::hypergraph::Hypergraph;
use crate::{rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hypergraph is not linear")]
    NotLinear,
    #[error("tree node {node} has degree {degree} > 3")]
    DegreeTooHigh { node: usize, degree: usize },
    #[error("edge {edge} has size {size} <= k - 1 = {}", .k.saturating_sub(1))]
    NotLarge { edge: usize, size: usize, k: usize },
    #[error("edge {edge} occupies a single tree node")]
    NoEdge { edge: usize },
    #[error("no tree edge splits edge {edge} within the threshold")]
    NoBalancedEdge { edge: usize },
    #[error("an edge of the subdivided tree still corresponds to {count} tuples")]
    TupleOverflow { count: usize },
    #[error("constructed supertree decomposition is invalid: {0:?}")]
    InvalidSupertree(Vec<StdViolation>),
    #[error("constructed tree decomposition is invalid: {0:?}")]
    InvalidTree(Vec<TdViolation>),
}

/// `(Δ − 1)(w + 1) + 1`: the supertree width [`td_to_supertree`] may reach
/// from a decomposition of width `w`.
pub fn supertree_width_bound(max_degree: usize, td_width: usize) -> usize {
    max_degree.saturating_sub(1) * (td_width + 1) + 1
}

/// `(k − 1)((2/3)r + (k − 1)/3) + r`: the bag size [`supertree_to_td`] may
/// reach from a supertree decomposition of width `k`.
pub fn bag_size_bound(k: usize, rank: usize) -> Rational {
    let (k1, r) = (rat(k as i64 - 1), rat(rank as i64));
    k1 * (Rational::new(2, 3) * r + k1 / 3) + r
}

/// The vertex, and the two chosen edges `f¹ < f²` through it.
type Tuple = (usize, usize, usize);

/// Tuples `(v, f¹, f²)` for which `f¹ ∈ λ_a \ λ_b` and `f² ∈ λ_b \ λ_a`.
fn corresponding(lam: &[BTreeSet<usize>], a: usize, b: usize, tuples: &[Tuple]) -> Vec<Tuple> {
    tuples
        .iter()
        .filter(|&&(_, f1, f2)| lam[a].contains(&f1) && !lam[b].contains(&f1) && lam[b].contains(&f2) && !lam[a].contains(&f2))
        .copied()
        .collect()
}

/// Builds a supertree decomposition from a leaf-based tree decomposition of
/// `[H]_2`. For each vertex `v` of degree at least 2, `f¹, f²` are its two
/// lowest edge ids; `F(v) \ {f²}` goes on every node of `B⁻¹(v)` except
/// `b(f²)`, which takes `F(v) \ {f¹}`. Tree edges corresponding to two or more
/// tuples are subdivided until each corresponds to at most one, and finally
/// `f¹` is copied across its corresponding edge.
pub fn td_to_supertree(h: &Hypergraph, d: &LeafBasedDecomposition) -> Result<SupertreeDecomposition, ConstructionError> {
    if h.max_degree() < 2 {
        return Err(ConstructionError::InvalidInput("needs maximum degree at least 2".into()));
    }
    let problems = d.check(h);
    if !problems.is_empty() {
        return Err(ConstructionError::InvalidInput(format!("{problems:?}")));
    }
    let mut tree = d.td.tree.clone();
    let mut bags = d.td.bags.clone();
    let mut occ = d.td.occurrences(h.n());
    // a vertex of degree >= 2 needs two nodes; hang a copy of its only bag
    for v in 0..h.n() {
        if h.degree(v) >= 2 && occ[v].len() == 1 {
            let t = occ[v][0];
            let leaf = tree.add_node();
            tree.add_edge(t, leaf);
            bags.push(bags[t].clone());
            for &u in &bags[t] {
                occ[u].push(leaf);
            }
        }
    }
    let mut lam: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); tree.len()];
    let mut tuples = Vec::new();
    for v in 0..h.n() {
        let fv = h.incident(v);
        if fv.len() == 1 {
            for &t in &occ[v] {
                lam[t].insert(fv[0]);
            }
            continue;
        }
        let (f1, f2) = (fv[0], fv[1]);
        let b2 = d.base[f2];
        for &t in &occ[v] {
            let skip = if t == b2 { f1 } else { f2 };
            lam[t].extend(fv.iter().copied().filter(|&f| f != skip));
        }
        tuples.push((v, f1, f2));
    }

    let cap = 4 * (tree.len() + tuples.len() + 1) * (tuples.len() + 1);
    for _ in 0..cap {
        let crowded = tree.edges().into_iter().find_map(|(a, b)| {
            let fwd = corresponding(&lam, a, b, &tuples);
            let back = corresponding(&lam, b, a, &tuples);
            if fwd.len() + back.len() < 2 {
                return None;
            }
            Some(match fwd.first() {
                Some(&t) => (a, b, t),
                None => (b, a, back[0]),
            })
        });
        let Some((a, b, (_, f1, f2))) = crowded else {
            break;
        };
        let mid = tree.subdivide(a, b);
        let shared: Vec<usize> = bags[a].iter().filter(|v| bags[b].binary_search(v).is_ok()).copied().collect();
        bags.push(shared);
        let mut l = lam[a].clone();
        l.remove(&f1);
        l.insert(f2);
        lam.push(l);
        debug_assert_eq!(mid + 1, lam.len());
    }

    let mut additions = Vec::new();
    for (a, b) in tree.edges() {
        let fwd = corresponding(&lam, a, b, &tuples);
        let back = corresponding(&lam, b, a, &tuples);
        if fwd.len() + back.len() > 1 {
            return Err(ConstructionError::TupleOverflow { count: fwd.len() + back.len() });
        }
        additions.extend(fwd.iter().map(|&(_, f1, _)| (b, f1)));
        additions.extend(back.iter().map(|&(_, f1, _)| (a, f1)));
    }
    for (t, f) in additions {
        lam[t].insert(f);
    }

    let std = SupertreeDecomposition::new(tree, bags, lam.into_iter().map(|s| s.into_iter().collect()).collect())
        .expect("one bag pair per node");
    let report = validate_std(h, &std);
    if !report.is_valid() {
        return Err(ConstructionError::InvalidSupertree(report.violations));
    }
    Ok(std)
}

/// A tree edge `e` of `T(f)` and the two sides `α(e,f)`, `β(e,f)`, each the
/// union of `γ_t(f) = {v ∈ f ∩ g : g ∈ λ_t \ {f}}` over one half of `T(f) − e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitEvaluation {
    pub edge: (usize, usize),
    pub alpha_side: Vec<usize>,
    pub beta_side: Vec<usize>,
    /// `(2/3)|f| + (1/3)(k − 1)`.
    pub threshold: Rational,
}

fn gamma(h: &Hypergraph, lam: &[usize], f: usize) -> BTreeSet<usize> {
    lam.iter()
        .filter(|&&g| g != f)
        .flat_map(|&g| h.edge(g).iter().copied().filter(|&v| h.edge_contains(f, v)))
        .collect()
}

/// Scans the edges of `T(f)` in order and returns the first whose sides both
/// stay within the threshold.
pub fn find_splitting_edge(h: &Hypergraph, d: &SupertreeDecomposition, f: usize, k: usize) -> Result<SplitEvaluation, ConstructionError> {
    let size = h.edge(f).len();
    if size + 1 <= k {
        return Err(ConstructionError::NotLarge { edge: f, size, k });
    }
    let nodes = d.edge_occurrences(h.m()).swap_remove(f);
    if nodes.len() <= 1 {
        return Err(ConstructionError::NoEdge { edge: f });
    }
    let mut inside = vec![false; d.tree.len()];
    for &t in &nodes {
        inside[t] = true;
    }
    let threshold = Rational::new(2, 3) * rat(size as i64) + Rational::new(k as i64 - 1, 3);
    for (a, b) in d.tree.edges() {
        if !inside[a] || !inside[b] {
            continue;
        }
        let side_a = side(&d.tree, &inside, a, b);
        let (mut alpha, mut beta) = (BTreeSet::new(), BTreeSet::new());
        for &t in &nodes {
            let target = if side_a[t] { &mut alpha } else { &mut beta };
            target.extend(gamma(h, &d.edge_bags[t], f));
        }
        if rat(alpha.len() as i64) <= threshold && rat(beta.len() as i64) <= threshold {
            return Ok(SplitEvaluation {
                edge: (a, b),
                alpha_side: alpha.into_iter().collect(),
                beta_side: beta.into_iter().collect(),
                threshold,
            });
        }
    }
    Err(ConstructionError::NoBalancedEdge { edge: f })
}

/// Nodes of `inside` reachable from `a` without crossing the edge `ab`.
fn side(tree: &Tree, inside: &[bool], a: usize, b: usize) -> Vec<bool> {
    let mut seen = vec![false; tree.len()];
    seen[a] = true;
    let mut stack = vec![a];
    while let Some(t) = stack.pop() {
        for &u in tree.neighbors(t) {
            if inside[u] && !seen[u] && !(t == a && u == b) {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

/// Splits nodes of degree above 3 by chaining copies of their bags.
pub fn cap_tree_degree(d: &SupertreeDecomposition) -> SupertreeDecomposition {
    let mut d = d.clone();
    while let Some(t) = (0..d.tree.len()).find(|&t| d.tree.degree(t) > 3) {
        let moved: Vec<usize> = d.tree.neighbors(t).iter().skip(2).copied().collect();
        let copy = d.tree.add_node();
        d.vertex_bags.push(d.vertex_bags[t].clone());
        d.edge_bags.push(d.edge_bags[t].clone());
        for u in moved {
            d.tree.remove_edge(t, u);
            d.tree.add_edge(copy, u);
        }
        d.tree.add_edge(t, copy);
    }
    d
}

/// Output of [`supertree_to_td`], with the per-node bookkeeping used to check
/// the bag-size argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdConstruction {
    pub td: TreeDecomposition,
    /// `b(f)` in the subdivided tree.
    pub base: Vec<usize>,
    /// Node of the (degree-capped) supertree decomposition whose `λ` is the
    /// corresponding bag of each output node.
    pub corresponding: Vec<usize>,
    /// The degree-capped input the construction ran on.
    pub source: SupertreeDecomposition,
    pub k: usize,
    pub bag_bound: Rational,
    /// `(node, vertex)` pairs with no edge of `F(vertex)` in the corresponding `λ`.
    pub uncovered: Vec<(usize, usize)>,
    /// `(node, edge)` pairs where a non-base node meets a large edge in more
    /// than `(2/3)|f| + (1/3)(k − 1)` vertices.
    pub overfull: Vec<(usize, usize)>,
}

impl TdConstruction {
    pub fn within_bound(&self) -> bool {
        rat(self.td.max_bag_size() as i64) <= self.bag_bound
    }
}

/// [`supertree_to_td_cubic`] after capping the tree degree at 3.
pub fn supertree_to_td(h: &Hypergraph, d: &SupertreeDecomposition) -> Result<TdConstruction, ConstructionError> {
    supertree_to_td_cubic(h, &cap_tree_degree(d))
}

/// Builds a tree decomposition of `[H]_2` from a supertree decomposition
/// whose tree has maximum degree 3. Small edges (`|f| ≤ k − 1`) take the
/// lowest node of `λ⁻¹(f)` as base; each large edge subdivides its splitting
/// edge and takes the new node. Bags are then the subtrees spanned by bases.
pub fn supertree_to_td_cubic(h: &Hypergraph, d: &SupertreeDecomposition) -> Result<TdConstruction, ConstructionError> {
    if !h.is_linear() {
        return Err(ConstructionError::NotLinear);
    }
    let report = validate_std(h, d);
    if !report.is_valid() {
        return Err(ConstructionError::InvalidInput(format!("{:?}", report.violations)));
    }
    if let Some(node) = (0..d.tree.len()).find(|&t| d.tree.degree(t) > 3) {
        return Err(ConstructionError::DegreeTooHigh { node, degree: d.tree.degree(node) });
    }
    let k = d.width();
    let occ = d.edge_occurrences(h.m());
    let mut tree = d.tree.clone();
    let mut corresponding: Vec<usize> = (0..tree.len()).collect();
    let mut base = vec![usize::MAX; h.m()];
    let mut splits: Vec<((usize, usize), usize)> = Vec::new();
    for f in 0..h.m() {
        if h.edge(f).len() + 1 <= k {
            base[f] = occ[f][0];
            continue;
        }
        match find_splitting_edge(h, d, f, k) {
            Ok(s) => splits.push(((s.edge.0.min(s.edge.1), s.edge.0.max(s.edge.1)), f)),
            Err(ConstructionError::NoEdge { .. }) => {
                let t = occ[f][0];
                let p = tree.add_node();
                tree.add_edge(t, p);
                corresponding.push(t);
                base[f] = p;
            }
            Err(e) => return Err(e),
        }
    }
    splits.sort_unstable();
    let mut last: Option<((usize, usize), usize)> = None;
    for ((a, b), f) in splits {
        // repeated splits of one edge extend a chain from `a`
        let from = match last {
            Some((e, prev)) if e == (a, b) => prev,
            _ => a,
        };
        let t = tree.subdivide(from, b);
        corresponding.push(a);
        base[f] = t;
        last = Some(((a, b), t));
    }
    let bags = spanned_bags(h, &tree, &base);
    let td = TreeDecomposition::new(tree, bags).expect("one bag per node");
    let check = validate_td(&two_section(h), &td);
    if !check.is_valid() {
        return Err(ConstructionError::InvalidTree(check.violations));
    }
    let mut uncovered = Vec::new();
    let mut overfull = Vec::new();
    let mut is_base = vec![false; td.tree.len()];
    for &b in &base {
        is_base[b] = true;
    }
    for (t, bag) in td.bags.iter().enumerate() {
        let lam = &d.edge_bags[corresponding[t]];
        for &v in bag {
            if !h.incident(v).iter().any(|f| lam.binary_search(f).is_ok()) {
                uncovered.push((t, v));
            }
        }
        for f in 0..h.m() {
            let size = h.edge(f).len();
            if size + 1 <= k || base[f] == t {
                continue;
            }
            let meet = bag.iter().filter(|&&v| h.edge_contains(f, v)).count();
            let threshold = Rational::new(2, 3) * rat(size as i64) + Rational::new(k as i64 - 1, 3);
            if rat(meet as i64) > threshold {
                overfull.push((t, f));
            }
        }
    }
    Ok(TdConstruction {
        td,
        base,
        corresponding,
        source: d.clone(),
        k,
        bag_bound: bag_size_bound(k, h.rank()),
        uncovered,
        overfull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::normalize_leaf_based;
    use crate::generators::cycle_power_dual;
    use crate::solvers::{exact_treewidth, supertree_width};

    fn leaf_based(h: &Hypergraph) -> LeafBasedDecomposition {
        let r = exact_treewidth(&two_section(h), None).unwrap();
        normalize_leaf_based(h, r.tree_decomposition().unwrap()).unwrap()
    }

    fn tri() -> Hypergraph {
        Hypergraph::new(3, [[0, 1], [1, 2], [0, 2]]).unwrap()
    }

    #[test]
    fn lifting_small_cases() {
        let h = tri();
        let d = leaf_based(&h);
        let s = td_to_supertree(&h, &d).unwrap();
        assert!(validate_std(&h, &s).is_valid());
        assert!(s.width() <= supertree_width_bound(2, 2));

        let single = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        assert!(td_to_supertree(&single, &leaf_based(&single)).is_err());
        let two = Hypergraph::new(5, [[0, 1, 2], [2, 3, 4]]).unwrap();
        let s = td_to_supertree(&two, &leaf_based(&two)).unwrap();
        assert!(s.width() <= supertree_width_bound(2, 2));
    }

    #[test]
    fn lifting_sharp_family() {
        let h = cycle_power_dual(8, 2, false).unwrap();
        let s = td_to_supertree(&h, &leaf_based(&h)).unwrap();
        assert!(validate_std(&h, &s).is_valid());
        assert!(s.width() <= supertree_width_bound(2, 7));
    }

    #[test]
    fn splitting_edge_examples() {
        let h = Hypergraph::new(5, [[0, 1, 2, 3, 4]]).unwrap();
        let d = SupertreeDecomposition::new(Tree::from_edges(2, [(0, 1)]), vec![vec![0, 1, 2, 3, 4]; 2], vec![vec![0]; 2]).unwrap();
        let s = find_splitting_edge(&h, &d, 0, 1).unwrap();
        assert!(s.alpha_side.is_empty() && s.beta_side.is_empty());
        assert!(matches!(find_splitting_edge(&h, &d, 0, 6), Err(ConstructionError::NotLarge { .. })));

        // f = {0..5} on a 3-node path; each node carries one other edge through two of f's vertices
        let h = Hypergraph::new(
            9,
            [vec![0, 1, 2, 3, 4, 5], vec![0, 6], vec![1, 6], vec![2, 7], vec![3, 7], vec![4, 8], vec![5, 8]],
        )
        .unwrap();
        let lam = vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6]];
        let bags = lam.iter().map(|l: &Vec<usize>| l.iter().flat_map(|&g| h.edge(g).to_vec()).collect()).collect();
        let d = SupertreeDecomposition::new(Tree::from_edges(3, [(0, 1), (1, 2)]), bags, lam).unwrap();
        let s = find_splitting_edge(&h, &d, 0, 3).unwrap();
        assert_eq!(s.threshold, Rational::new(14, 3));
        assert!(s.alpha_side.len() <= 4 && s.beta_side.len() <= 4);
    }

    #[test]
    fn lowering_small_cases() {
        let h = Hypergraph::new(5, [[0, 1, 2, 3, 4]]).unwrap();
        let d = supertree_width(&h).unwrap().supertree_decomposition().unwrap().clone();
        let c = supertree_to_td(&h, &d).unwrap();
        assert_eq!(c.td.width(), 4);
        assert_eq!(c.bag_bound, rat(5));

        let h = tri();
        let d = supertree_width(&h).unwrap().supertree_decomposition().unwrap().clone();
        let c = supertree_to_td(&h, &d).unwrap();
        assert_eq!(c.bag_bound, rat(6));
        assert!(c.within_bound() && c.uncovered.is_empty() && c.overfull.is_empty());
    }

    #[test]
    fn degree_capping() {
        let h = Hypergraph::new(6, [[0, 1], [0, 2], [0, 3], [0, 4], [0, 5]]).unwrap();
        let tree = Tree::from_edges(6, (1..6).map(|t| (0, t)));
        let lam: Vec<Vec<usize>> = std::iter::once((0..5).collect()).chain((0..5).map(|f| vec![f])).collect();
        let bags = lam.iter().map(|l| l.iter().flat_map(|&g| h.edge(g).to_vec()).collect()).collect();
        let d = SupertreeDecomposition::new(tree, bags, lam).unwrap();
        assert!(matches!(supertree_to_td_cubic(&h, &d), Err(ConstructionError::DegreeTooHigh { .. })));
        let capped = cap_tree_degree(&d);
        assert!(capped.tree.max_degree() <= 3);
        assert!(validate_std(&h, &capped).is_valid());
        assert!(supertree_to_td(&h, &d).unwrap().within_bound());
    }
}
