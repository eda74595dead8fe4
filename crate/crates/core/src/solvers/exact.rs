//! Exact treewidth by a decision search over eliminated vertex sets.
//!
//! For a fixed `k` the search looks for an elimination ordering in which every
//! vertex, at the moment it is eliminated, has at most `k` neighbours in the
//! elimination graph. A state is the set `S` of vertices eliminated so far; the
//! neighbourhood of `v` after eliminating `S` is the set of vertices outside
//! `S` reachable from `v` through `S`, so states are order-independent and
//! refuted states are remembered.

use rustc_hash::FxHashSet;

use super::elimination::{degeneracy_bound, heuristic_upper_bound, minor_min_width};
use crate::graph::Graph;

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

struct Search<'a> {
    adj: &'a [u64],
    full: u64,
    k: u32,
    failed: FxHashSet<u64>,
    order: Vec<usize>,
}

impl Search<'_> {
    /// Neighbourhood of `v` in the elimination graph after eliminating `s`.
    fn reach(&self, s: u64, v: usize) -> u64 {
        let mut seen = 1u64 << v;
        let mut nb = self.adj[v];
        let mut frontier = nb & s;
        while frontier != 0 {
            seen |= frontier;
            let mut next = 0;
            for b in bits(frontier) {
                next |= self.adj[b];
            }
            nb |= next;
            frontier = next & s & !seen;
        }
        nb & !s & !(1u64 << v)
    }

    /// Minor-min-width of the elimination graph on `rest`.
    fn contraction_bound(&self, rest: u64, nbr: &[u64; 64]) -> u32 {
        let mut nbr = *nbr;
        let mut alive = rest;
        let mut best = 0;
        while alive.count_ones() > best + 1 {
            let (v, dv) = bits(alive)
                .map(|v| (v, nbr[v].count_ones()))
                .min_by_key(|&(v, d)| (d, v))
                .expect("alive is nonempty");
            best = best.max(dv);
            if best > self.k {
                return best;
            }
            alive &= !(1u64 << v);
            let nv = nbr[v];
            let Some(u) = bits(nv).min_by_key(|&u| (nbr[u].count_ones(), u)) else {
                continue;
            };
            for w in bits(nv) {
                nbr[w] &= !(1u64 << v);
            }
            let merged = (nbr[u] | nv) & !(1u64 << u);
            for w in bits(merged) {
                nbr[w] |= 1u64 << u;
            }
            nbr[u] = merged;
        }
        best
    }

    fn is_clique(nbr: &[u64; 64], set: u64) -> bool {
        bits(set).all(|w| set & !(1u64 << w) & !nbr[w] == 0)
    }

    /// Safe to eliminate first: the neighbourhood, minus at most one vertex,
    /// is a clique.
    fn almost_simplicial(nbr: &[u64; 64], v: usize) -> bool {
        let set = nbr[v];
        if Self::is_clique(nbr, set) {
            return true;
        }
        bits(set).any(|u| Self::is_clique(nbr, set & !(1u64 << u)))
    }

    fn solve(&mut self, s: u64) -> bool {
        let rest = self.full & !s;
        if rest.count_ones() <= self.k + 1 {
            self.order.extend(bits(rest));
            return true;
        }
        if self.failed.contains(&s) {
            return false;
        }
        let mut nbr = [0u64; 64];
        for v in bits(rest) {
            nbr[v] = self.reach(s, v);
        }
        if self.contraction_bound(rest, &nbr) > self.k {
            self.failed.insert(s);
            return false;
        }
        let mut candidates: Vec<(u32, usize)> = bits(rest)
            .map(|v| (nbr[v].count_ones(), v))
            .filter(|&(d, _)| d <= self.k)
            .collect();
        candidates.sort_unstable();
        if let Some(&(_, v)) = candidates.iter().find(|&&(_, v)| Self::almost_simplicial(&nbr, v)) {
            candidates = vec![(0, v)];
        }
        for (_, v) in candidates {
            self.order.push(v);
            if self.solve(s | (1u64 << v)) {
                return true;
            }
            self.order.pop();
        }
        self.failed.insert(s);
        false
    }
}

/// Outcome for one connected graph: the exact width and an optimal ordering,
/// or `None` when the width exceeds `cap`.
pub(crate) fn connected_treewidth(g: &Graph, cap: Option<usize>) -> Option<(usize, Vec<usize>)> {
    let n = g.n();
    if n <= 1 {
        return Some((0, (0..n).collect()));
    }
    let lower = minor_min_width(g).max(degeneracy_bound(g));
    if cap.is_some_and(|c| lower > c) {
        return None;
    }
    let (upper, upper_order) = heuristic_upper_bound(g);
    let adj = g.bitmasks();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for k in lower..upper {
        if cap.is_some_and(|c| k > c) {
            return None;
        }
        let mut search = Search { adj: &adj, full, k: k as u32, failed: FxHashSet::default(), order: Vec::with_capacity(n) };
        if search.solve(0) {
            return Some((k, search.order));
        }
    }
    if cap.is_some_and(|c| upper > c) {
        return None;
    }
    Some((upper, upper_order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::elimination::elimination_width;

    #[test]
    fn grid_3x4() {
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..4 {
                let v = r * 4 + c;
                if c + 1 < 4 {
                    edges.push((v, v + 1));
                }
                if r + 1 < 3 {
                    edges.push((v, v + 4));
                }
            }
        }
        let g = Graph::from_edges(12, edges).unwrap();
        let (w, order) = connected_treewidth(&g, None).unwrap();
        assert_eq!(w, 3);
        assert_eq!(elimination_width(&g, &order), 3);
    }

    #[test]
    fn cap_cuts_off() {
        let k5 = Graph::from_edges(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b)))).unwrap();
        assert_eq!(connected_treewidth(&k5, Some(3)), None);
        assert_eq!(connected_treewidth(&k5, Some(4)).map(|r| r.0), Some(4));
    }
}
