use lhtw::decomposition::{validate_std, validate_td};
use lhtw::derivations::two_section;
use lhtw::io::{self, Parsed};
use lhtw::Hypergraph;

const HYPERGRAPH: &str = "c triangle with a pendant edge\np htw 4 2\ne 1 2 3\n\nc the pendant\ne 3 4\n";

const STD: &str = "\
c width 2
s td 2 4 4
b 1 1 2 3 4
b 2 3 4
l 1 1 2
l 2 2
1 2
";

#[test]
fn hypergraph_file_is_one_indexed() {
    let h = io::parse_hypergraph(HYPERGRAPH).unwrap();
    assert_eq!(h, Hypergraph::new(4, [vec![0, 1, 2], vec![2, 3]]).unwrap());
    assert_eq!(io::write_hypergraph(&h), "p htw 4 2\ne 1 2 3\ne 3 4\n");
}

#[test]
fn graph_file_round_trips() {
    let text = "p tw 4 3\n1 2\n2 3\nc trailing comment\n3 4\n";
    let g = io::parse_graph(text).unwrap();
    assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);
    assert_eq!(io::write_graph(&g), "p tw 4 3\n1 2\n2 3\n3 4\n");
}

#[test]
fn supertree_file_keeps_edge_bags() {
    let h = io::parse_hypergraph(HYPERGRAPH).unwrap();
    let file = io::parse_decomposition(STD).unwrap();
    let std = file.supertree_decomposition().unwrap();
    assert!(validate_std(&h, &std).is_valid());
    assert_eq!(std.width(), 2);
    assert_eq!(io::write_std(&std, 4), STD.trim_start_matches("c width 2\n"));

    let td = file.tree_decomposition();
    assert!(validate_td(&two_section(&h), &td).is_valid());
    assert_eq!(td.width(), 3);
}

#[test]
fn plain_tree_decomposition_has_no_edge_bags() {
    let text = "s td 2 3 4\nb 1 1 2 3\nb 2 3 4\n1 2\n";
    let file = io::parse_decomposition(text).unwrap();
    assert!(file.edge_bags.is_none());
    assert!(file.supertree_decomposition().is_none());
    assert_eq!(io::write_td(&file.tree_decomposition(), 4), text);
}

#[test]
fn parse_any_dispatches_on_header() {
    assert!(matches!(io::parse_any(HYPERGRAPH), Ok(Parsed::Hypergraph(_))));
    assert!(matches!(io::parse_any("p tw 2 1\n1 2\n"), Ok(Parsed::Graph(_))));
    assert!(matches!(io::parse_any(STD), Ok(Parsed::Decomposition(_))));
    assert!(io::parse_any("p xyz 1 1\n").is_err());
}

#[test]
fn errors_carry_line_numbers() {
    let cases = [
        ("p htw 3 1\ne 1 4\n", 2),
        ("p htw 3 2\ne 1 2\n", 1),
        ("p htw 3 1\n1 2\n", 2),
        ("c only a comment\n", 1),
        ("p tw 3 1\n1 1\n", 2),
        ("p tw 3 1\n1 2 3\n", 2),
        ("s td 2 2 3\nb 1 1 2\nb 1 2 3\n1 2\n", 3),
        ("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 1\n", 4),
        ("s td 2 3 3\nb 1 1 2\nb 2 2 3\n1 2\n", 1),
        ("s td 2 2 3\nb 1 1 2\n1 2\n", 1),
    ];
    for (text, line) in cases {
        let e = io::parse_any(text).err().unwrap_or_else(|| panic!("{text:?} should not parse"));
        assert_eq!(e.line, line, "{text:?}: {e}");
    }
}

#[test]
fn nested_edges_are_rejected() {
    assert!(io::parse_hypergraph("p htw 3 2\ne 1 2 3\ne 1 2\n").is_err());
}
