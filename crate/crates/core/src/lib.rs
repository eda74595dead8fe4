//! Treewidth of 2-sections of linear hypergraphs.
//!
//! The crate bundles exact width solvers, tree and supertree decomposition
//! validators, the constructive decomposition transformations relating
//! `tw([H]_2)` to `stw(H)`, every closed-form bound on `tw([H]_2)` in terms of
//! degree and rank statistics, and generators for the extremal families on
//! which those bounds are sharp.
//!
//! All bound arithmetic is exact ([`Rational`]); floating point only appears in
//! the grid checks of [`bounds::appendix`].

pub mod bounds;
pub mod constructions;
pub mod corpus;
pub mod decomposition;
pub mod derivations;
pub mod generators;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod solvers;

/// Exact rational used for average ranks and every bound expression.
pub type Rational = num_rational::Ratio<i64>;

pub use decomposition::{LeafBasedDecomposition, SupertreeDecomposition, Tree, TreeDecomposition};
pub use graph::Graph;
pub use hypergraph::{Hypergraph, HypergraphStats, SigmaProfile};

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest integer strictly greater than `r`.
pub fn strict_ceil(r: &Rational) -> i64 {
    r.floor().to_integer() + 1
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}
