//! Direct checks of the counting inequalities used in the lower-bound proofs.

use super::BoundsError;
use crate::decomposition::{LeafBasedDecomposition, LeafViolation};
use crate::hypergraph::{Hypergraph, DEFAULT_MINIMALITY_CAP};
use crate::{rat, Rational};

fn require_minimal(h: &Hypergraph) -> Result<(), BoundsError> {
    if h.is_minimal(DEFAULT_MINIMALITY_CAP)? {
        Ok(())
    } else {
        Err(BoundsError::NotMinimal)
    }
}

/// For minimal `h` and a nonempty proper edge set `S`:
/// `l(H)/Δ < (Σ_{f∈S}|f| − Σ σ_i^j(S)(j − i/Δ)) / |S|`.
pub fn lemma_3_1_check(h: &Hypergraph, s: &[usize]) -> Result<bool, BoundsError> {
    require_minimal(h)?;
    let profile = h.sigma_counts(s, None)?;
    let count = {
        let mut v = s.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    if count == 0 || count == h.m() {
        return Err(BoundsError::PreconditionFailed(format!("S must be a nonempty proper subset, |S| = {count}")));
    }
    let big = h.max_degree() as i64;
    let lhs = h.avg_rank() / rat(big);
    let rhs = (rat(profile.incidences() as i64) - profile.excess(h.max_degree())) / rat(count as i64);
    Ok(lhs < rhs)
}

/// The same check over every nonempty proper `S`; returns the failing sets.
pub fn lemma_3_1_failures(h: &Hypergraph) -> Result<Vec<Vec<usize>>, BoundsError> {
    require_minimal(h)?;
    let m = h.m();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << m) - 1 {
        let s: Vec<usize> = (0..m).filter(|&f| mask >> f & 1 == 1).collect();
        if !lemma_3_1_check(h, &s)? {
            out.push(s);
        }
    }
    Ok(out)
}

fn require_shape(h: &Hypergraph, d: &LeafBasedDecomposition) -> Result<(), BoundsError> {
    let bad = d
        .check(h)
        .into_iter()
        .find(|v| matches!(v, LeafViolation::MissingRoot | LeafViolation::NotBinary { .. } | LeafViolation::BaseNotLeaf { .. } | LeafViolation::BaseNotBijective));
    match bad {
        Some(v) => Err(BoundsError::InvalidDecomposition(format!("{v:?}"))),
        None if d.td.root.is_none() => Err(BoundsError::InvalidDecomposition("unrooted".into())),
        None => Ok(()),
    }
}

/// Internal non-root nodes `t` (children `a`, `b`) where
/// `|B_t| > (|z_a| + |z_b|)·l(H)/Δ − Σσ_i^i(z_a) − Σσ_i^i(z_b)` fails.
/// Bag contents are taken as given, so a corrupted bag shows up here rather
/// than as an error.
pub fn lemma_3_2_failures(h: &Hypergraph, d: &LeafBasedDecomposition) -> Result<Vec<usize>, BoundsError> {
    require_minimal(h)?;
    require_shape(h, d)?;
    let z = d.z_sets();
    let l = h.avg_rank();
    let big = rat(h.max_degree() as i64);
    let mut out = Vec::new();
    for t in 0..d.td.tree.len() {
        if t == d.root() || d.is_leaf(t) {
            continue;
        }
        let mut rhs: Rational = rat(0);
        for &c in d.children(t) {
            let sat = h.sigma_counts(&z[c], None)?.saturated();
            rhs += rat(z[c].len() as i64) * l / big - rat(sat as i64);
        }
        if rat(d.td.bags[t].len() as i64) <= rhs {
            out.push(t);
        }
    }
    Ok(out)
}

pub fn lemma_3_2_check(h: &Hypergraph, d: &LeafBasedDecomposition) -> Result<bool, BoundsError> {
    Ok(lemma_3_2_failures(h, d)?.is_empty())
}

/// Root-to-leaf descent: move to the first child with `|z| > τ` until none
/// exists. The stop node has `|z| > τ` and all children at or below `τ`.
pub fn find_significant_node(d: &LeafBasedDecomposition, tau: Rational) -> Result<usize, BoundsError> {
    if tau < rat(1) {
        return Err(BoundsError::PreconditionFailed(format!("τ = {tau} is below 1")));
    }
    let m = d.base.len();
    if rat(m as i64) <= rat(2) * tau {
        return Err(BoundsError::PreconditionFailed(format!("|F| = {m} is at most 2τ = {}", rat(2) * tau)));
    }
    let z = d.z_sets();
    let big = |t: usize| rat(z[t].len() as i64) > tau;
    let mut t = d.root();
    while let Some(&next) = d.children(t).iter().find(|&&c| big(c)) {
        t = next;
    }
    if t == d.root() || d.is_leaf(t) {
        return Err(BoundsError::PreconditionFailed(format!("descent stopped at node {t}, which is the root or a leaf")));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::normalize_leaf_based;
    use crate::derivations::two_section;
    use crate::generators::graph_dual;
    use crate::graph::Graph;
    use crate::solvers::exact_treewidth;

    fn k3() -> Hypergraph {
        Hypergraph::new(3, [[0, 1], [1, 2], [0, 2]]).unwrap()
    }

    fn normalized(h: &Hypergraph) -> LeafBasedDecomposition {
        let r = exact_treewidth(&two_section(h), None).unwrap();
        normalize_leaf_based(h, r.tree_decomposition().unwrap()).unwrap()
    }

    #[test]
    fn lemma_3_1_on_triangle() {
        let h = k3();
        assert!(lemma_3_1_check(&h, &[0]).unwrap());
        assert!(lemma_3_1_failures(&h).unwrap().is_empty());
        // dropping the pendant edge leaves l(H_S) = 3 = l(H)
        let not_minimal = Hypergraph::new(5, [vec![0, 1, 2, 3], vec![3, 4]]).unwrap();
        assert_eq!(lemma_3_1_check(&not_minimal, &[0]), Err(BoundsError::NotMinimal));
    }

    #[test]
    fn lemma_3_2_examples() {
        let h = k3();
        let d = normalized(&h);
        assert!(lemma_3_2_check(&h, &d).unwrap());

        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let dual = graph_dual(&c6).unwrap();
        assert!(lemma_3_2_check(&dual, &normalized(&dual)).unwrap());

        let mut broken = normalized(&h);
        let t = (0..broken.td.tree.len()).find(|&t| t != broken.root() && !broken.is_leaf(t)).unwrap();
        broken.td.bags[t].clear();
        assert!(!lemma_3_2_check(&h, &broken).unwrap());
    }

    #[test]
    fn significant_node_on_triangle() {
        let d = normalized(&k3());
        let t = find_significant_node(&d, rat(1)).unwrap();
        assert_eq!(d.children(t).len(), 2);
        assert!(d.children(t).iter().all(|&c| d.is_leaf(c)));
        assert!(find_significant_node(&d, Rational::new(3, 2)).is_err());
        assert!(find_significant_node(&d, Rational::new(1, 2)).is_err());
    }
}
