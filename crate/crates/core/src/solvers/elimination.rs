//! Elimination orderings: widths, greedy heuristics, a minor-based lower
//! bound, and conversion of an ordering into a tree decomposition.

use std::collections::BTreeSet;

use crate::decomposition::{Tree, TreeDecomposition};
use crate::graph::Graph;

fn adjacency(g: &Graph) -> Vec<BTreeSet<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).clone()).collect()
}

/// Eliminates `v`: its remaining neighbours become a clique.
fn eliminate(adj: &mut [BTreeSet<usize>], v: usize) -> BTreeSet<usize> {
    let nb = std::mem::take(&mut adj[v]);
    for &a in &nb {
        adj[a].remove(&v);
        for &b in &nb {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
    nb
}

/// Largest neighbourhood met while eliminating in `order`.
pub fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    let mut adj = adjacency(g);
    order.iter().map(|&v| eliminate(&mut adj, v).len()).max().unwrap_or(0)
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        missing += nb[i + 1..].iter().filter(|&&b| !adj[a].contains(&b)).count();
    }
    missing
}

fn greedy<F: Fn(&[BTreeSet<usize>], usize) -> (usize, usize)>(g: &Graph, score: F) -> Vec<usize> {
    let mut adj = adjacency(g);
    let mut alive: BTreeSet<usize> = (0..g.n()).collect();
    let mut order = Vec::with_capacity(g.n());
    while let Some(&v) = alive.iter().min_by_key(|&&v| (score(&adj, v), v)) {
        alive.remove(&v);
        eliminate(&mut adj, v);
        order.push(v);
    }
    order
}

/// Repeatedly eliminates a vertex of minimum degree (ties: fewest fill edges, then id).
pub fn min_degree_ordering(g: &Graph) -> Vec<usize> {
    greedy(g, |adj, v| (adj[v].len(), fill_in(adj, v)))
}

/// Repeatedly eliminates a vertex adding the fewest fill edges (ties: degree, then id).
pub fn min_fill_ordering(g: &Graph) -> Vec<usize> {
    greedy(g, |adj, v| (fill_in(adj, v), adj[v].len()))
}

/// The better of the two greedy orderings, with its width.
pub fn heuristic_upper_bound(g: &Graph) -> (usize, Vec<usize>) {
    [min_fill_ordering(g), min_degree_ordering(g)]
        .into_iter()
        .map(|o| (elimination_width(g, &o), o))
        .min_by_key(|(w, _)| *w)
        .expect("two candidates")
}

/// Minor-min-width: contract a minimum-degree vertex into its neighbour of
/// least degree, recording the largest minimum degree seen.
pub fn minor_min_width(g: &Graph) -> usize {
    let mut adj = adjacency(g);
    let mut alive: BTreeSet<usize> = (0..g.n()).collect();
    let mut best = 0;
    while alive.len() > 1 {
        let v = *alive.iter().min_by_key(|&&v| (adj[v].len(), v)).expect("nonempty");
        best = best.max(adj[v].len());
        alive.remove(&v);
        let nb = std::mem::take(&mut adj[v]);
        let Some(&u) = nb.iter().min_by_key(|&&u| (adj[u].len(), u)) else {
            continue;
        };
        for &w in &nb {
            adj[w].remove(&v);
            if w != u {
                adj[w].insert(u);
                adj[u].insert(w);
            }
        }
    }
    best
}

/// Degeneracy-style bound: the second smallest degree is a lower bound on
/// treewidth, also for every subgraph.
pub fn degeneracy_bound(g: &Graph) -> usize {
    let mut adj = adjacency(g);
    let mut alive: BTreeSet<usize> = (0..g.n()).collect();
    let mut best = 0;
    while alive.len() > 1 {
        let mut degs: Vec<(usize, usize)> = alive.iter().map(|&v| (adj[v].len(), v)).collect();
        degs.sort_unstable();
        best = best.max(degs[1].0);
        let v = degs[0].1;
        alive.remove(&v);
        for u in std::mem::take(&mut adj[v]) {
            adj[u].remove(&v);
        }
    }
    best
}

/// Tree decomposition whose bags are `{v} ∪` the later neighbours of `v` in
/// the filled graph. Each bag hangs off the bag of its earliest later
/// neighbour; bags with no later neighbour are chained to the next bag.
pub fn decomposition_from_ordering(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "ordering must list every vertex once");
    if n == 0 {
        return TreeDecomposition::single_bag(Vec::new());
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj = adjacency(g);
    let mut bags = Vec::with_capacity(n);
    let mut tree = Tree::new(n);
    for (i, &v) in order.iter().enumerate() {
        let later = eliminate(&mut adj, v);
        let mut bag: Vec<usize> = later.iter().copied().collect();
        bag.push(v);
        bags.push(bag);
        if i + 1 < n {
            let parent = later.iter().map(|&u| position[u]).min().unwrap_or(i + 1);
            tree.add_edge(i, parent);
        }
    }
    TreeDecomposition::new(tree, bags).expect("one bag per node")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_td;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cycle_bounds() {
        let c = cycle(6);
        assert_eq!(heuristic_upper_bound(&c).0, 2);
        assert_eq!(minor_min_width(&c), 2);
        assert_eq!(degeneracy_bound(&c), 2);
    }

    #[test]
    fn ordering_certificate_is_valid() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 5)]).unwrap();
        let order = min_fill_ordering(&g);
        let d = decomposition_from_ordering(&g, &order);
        let r = validate_td(&g, &d);
        assert!(r.is_valid(), "{:?}", r.violations);
        assert_eq!(d.width(), elimination_width(&g, &order));
    }

    #[test]
    fn width_of_explicit_order() {
        // eliminating the hub of a star first creates a clique on the leaves
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(elimination_width(&star, &[0, 1, 2, 3]), 3);
        assert_eq!(elimination_width(&star, &[1, 2, 3, 0]), 1);
    }
}
