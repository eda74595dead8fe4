//! Text formats, 1-indexed on disk and 0-indexed in memory.
//!
//! ```text
//! p tw <n> <m>          graph header, then one "u v" line per edge
//! p htw <n> <m>         hypergraph header, then m lines "e v1 v2 ..."
//! s td <bags> <max> <n> decomposition header, then "b <id> v..." and "a b" tree edges
//! l <id> e...           edge bag of a node (supertree decompositions only)
//! c ...                 comment, anywhere
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::decomposition::{SupertreeDecomposition, Tree, TreeDecomposition};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

fn number(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().or_else(|_| err(line, format!("expected a number, found '{tok}'")))
}

/// A 1-indexed id in `1..=bound`, returned 0-indexed.
fn id(line: usize, tok: &str, bound: usize, what: &str) -> Result<usize, ParseError> {
    let x = number(line, tok)?;
    if x == 0 || x > bound {
        return err(line, format!("{what} {x} outside 1..={bound}"));
    }
    Ok(x - 1)
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>, tag: &str, kind: &str, arity: usize) -> Result<(usize, Vec<usize>), ParseError> {
    let Some((line, toks)) = lines.next() else {
        return err(1, format!("missing '{tag} {kind}' header"));
    };
    if toks.len() != arity + 2 || toks[0] != tag || toks[1] != kind {
        return err(line, format!("expected '{tag} {kind}' header with {arity} numbers"));
    }
    let nums = toks[2..].iter().map(|t| number(line, t)).collect::<Result<_, _>>()?;
    Ok((line, nums))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, nums) = header(&mut lines, "p", "tw", 2)?;
    let (n, m) = (nums[0], nums[1]);
    let mut g = Graph::empty(n);
    let mut count = 0;
    for (line, toks) in lines {
        if toks.len() != 2 {
            return err(line, "edge lines hold exactly two vertices");
        }
        let (u, v) = (id(line, toks[0], n, "vertex")?, id(line, toks[1], n, "vertex")?);
        g.add_edge(u, v).or_else(|e| err(line, e.to_string()))?;
        count += 1;
    }
    if count != m {
        return err(hline, format!("header announces {m} edges, found {count}"));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, nums) = header(&mut lines, "p", "htw", 2)?;
    let (n, m) = (nums[0], nums[1]);
    let mut edges = Vec::with_capacity(m);
    let mut edge_lines = Vec::with_capacity(m);
    for (line, toks) in lines {
        if toks[0] != "e" {
            return err(line, format!("expected an 'e' line, found '{}'", toks[0]));
        }
        let e = toks[1..].iter().map(|t| id(line, t, n, "vertex")).collect::<Result<Vec<_>, _>>()?;
        edges.push(e);
        edge_lines.push(line);
    }
    if edges.len() != m {
        return err(hline, format!("header announces {m} edges, found {}", edges.len()));
    }
    Hypergraph::new(n, edges).map_err(|e| {
        use crate::hypergraph::HypergraphError::*;
        let line = match e {
            LoopEdge { edge, .. } | DuplicateOrNestedEdge { edge, .. } | OutOfRangeVertex { edge, .. } => edge_lines[edge],
            _ => hline,
        };
        ParseError { line, message: e.to_string() }
    })
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("p htw {} {}\n", h.n(), h.m());
    for e in h.edges() {
        out.push('e');
        for v in e {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}

/// A decomposition file: vertex bags, tree edges, and edge bags if any `l`
/// lines were present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionFile {
    pub n: usize,
    pub tree: Tree,
    pub bags: Vec<Vec<usize>>,
    pub edge_bags: Option<Vec<Vec<usize>>>,
}

impl DecompositionFile {
    pub fn tree_decomposition(&self) -> TreeDecomposition {
        TreeDecomposition::new(self.tree.clone(), self.bags.clone()).expect("parser keeps counts consistent")
    }

    pub fn supertree_decomposition(&self) -> Option<SupertreeDecomposition> {
        let lam = self.edge_bags.clone()?;
        SupertreeDecomposition::new(self.tree.clone(), self.bags.clone(), lam).ok()
    }
}

pub fn parse_decomposition(text: &str) -> Result<DecompositionFile, ParseError> {
    let mut lines = content_lines(text);
    let (hline, nums) = header(&mut lines, "s", "td", 3)?;
    let (count, max_bag, n) = (nums[0], nums[1], nums[2]);
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; count];
    let mut edge_bags: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut any_lambda = false;
    let mut tree = Tree::new(count);
    for (line, toks) in lines {
        match toks[0] {
            "b" | "l" => {
                if toks.len() < 2 {
                    return err(line, "missing node id");
                }
                let node = id(line, toks[1], count, "node")?;
                if toks[0] == "b" {
                    if bags[node].is_some() {
                        return err(line, format!("bag {} given twice", node + 1));
                    }
                    let bag = toks[2..].iter().map(|t| id(line, t, n, "vertex")).collect::<Result<Vec<_>, _>>()?;
                    bags[node] = Some(bag);
                } else {
                    any_lambda = true;
                    for t in &toks[2..] {
                        edge_bags[node].push(number(line, t)?.checked_sub(1).map_or_else(|| err(line, "edge ids start at 1"), Ok)?);
                    }
                }
            }
            _ => {
                if toks.len() != 2 {
                    return err(line, "tree edge lines hold exactly two nodes");
                }
                let (a, b) = (id(line, toks[0], count, "node")?, id(line, toks[1], count, "node")?);
                if a == b || tree.has_edge(a, b) {
                    return err(line, "tree edge is a loop or repeated");
                }
                tree.add_edge(a, b);
            }
        }
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(ParseError { line: hline, message: format!("bag {} missing", i + 1) }))
        .collect::<Result<_, _>>()?;
    let actual_max = bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual_max != max_bag {
        return err(hline, format!("header announces bag size {max_bag}, largest bag has {actual_max}"));
    }
    let td = TreeDecomposition::new(tree, bags).expect("counts match");
    Ok(DecompositionFile { n, tree: td.tree, bags: td.bags, edge_bags: any_lambda.then_some(edge_bags) })
}

fn write_common(out: &mut String, bags: &[Vec<usize>], n: usize) {
    let max = bags.iter().map(Vec::len).max().unwrap_or(0);
    let _ = writeln!(out, "s td {} {} {}", bags.len(), max, n);
    for (i, bag) in bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
}

fn write_tree_edges(out: &mut String, tree: &Tree) {
    for (a, b) in tree.edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
}

/// `n` is the vertex count of the decomposed graph.
pub fn write_td(d: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    write_common(&mut out, &d.bags, n);
    write_tree_edges(&mut out, &d.tree);
    out
}

pub fn write_std(d: &SupertreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    write_common(&mut out, &d.vertex_bags, n);
    for (i, lam) in d.edge_bags.iter().enumerate() {
        let _ = write!(out, "l {}", i + 1);
        for f in lam {
            let _ = write!(out, " {}", f + 1);
        }
        out.push('\n');
    }
    write_tree_edges(&mut out, &d.tree);
    out
}

/// Any of the formats, told apart by the header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Graph(Graph),
    Hypergraph(Hypergraph),
    Decomposition(DecompositionFile),
}

pub fn parse_any(text: &str) -> Result<Parsed, ParseError> {
    let first = content_lines(text).next();
    match first.as_ref().map(|(_, t)| (t[0], t.get(1).copied())) {
        Some(("p", Some("tw"))) => parse_graph(text).map(Parsed::Graph),
        Some(("p", Some("htw"))) => parse_hypergraph(text).map(Parsed::Hypergraph),
        Some(("s", Some("td"))) => parse_decomposition(text).map(Parsed::Decomposition),
        _ => err(first.map_or(1, |(l, _)| l), "unrecognised header"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "p tw 3 3\n1 2\n1 3\n2 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(write_graph(&g), text);
    }

    #[test]
    fn hypergraph_examples() {
        let h = parse_hypergraph("c a comment\np htw 3 1\ne 1 2 3\n").unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2]]);
        let e = parse_hypergraph("p htw 3 1\ne 1 2 9\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_hypergraph("p htw 3 2\ne 1 2 3\ne 1 2\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn decomposition_round_trip() {
        let text = "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let d = parse_decomposition(text).unwrap();
        assert!(d.edge_bags.is_none());
        assert_eq!(write_td(&d.tree_decomposition(), 3), text);
        let text = "s td 1 3 3\nb 1 1 2 3\nl 1 1 2 3\n";
        let d = parse_decomposition(text).unwrap();
        assert_eq!(write_std(&d.supertree_decomposition().unwrap(), 3), text);
    }

    #[test]
    fn parse_errors_are_located() {
        assert_eq!(parse_graph("p tw 2 1\n1 3\n").unwrap_err().line, 2);
        assert_eq!(parse_graph("p tw 2 2\n1 2\n").unwrap_err().line, 1);
        assert_eq!(parse_decomposition("s td 1 2 2\nb 1 1 2\nb 1 1\n").unwrap_err().line, 3);
        assert!(parse_any("x y\n").is_err());
    }
}
