//! Bracketed constituency trees and the leaf-sourced attention graph built
//! over them.
//!
//! A tree is read from the usual s-expression form produced by constituency
//! parsers, e.g. `(S (NP (DT The) (NN food)) (VP (VBD was) (ADJP (JJ great))))`.
//! Words are bare atoms; every parenthesised node carries a (possibly empty)
//! label followed by its children.
//!
//! The graph has one node per leaf and one per internal constituent. Leaves
//! occupy indices `0..n` in token order and internal nodes `n..n+m` in
//! pre-order. Only leaves emit edges: each leaf points to itself and to every
//! one of its ancestors, so the neighbour set of an internal node is exactly
//! the set of leaves it dominates.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rooted, labelled, ordered tree. A node carries a token iff it has no
/// children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseTree {
    pub label: String,
    pub children: Vec<ParseTree>,
    pub token: Option<String>,
}

impl ParseTree {
    /// A bare word.
    pub fn leaf(token: impl Into<String>) -> Self {
        ParseTree {
            label: String::new(),
            children: Vec::new(),
            token: Some(token.into()),
        }
    }

    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> Self {
        ParseTree {
            label: label.into(),
            children,
            token: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Tokens of the leaves, left to right.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.token {
            Some(tok) if self.children.is_empty() => out.push(tok),
            _ => {
                for child in &self.children {
                    child.collect_leaves(out);
                }
            }
        }
    }

    pub fn num_leaves(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(ParseTree::num_leaves).sum()
        }
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Checks the structural invariants of the type.
    pub fn check(&self) -> Result<()> {
        match (&self.token, self.children.is_empty()) {
            (Some(tok), true) => {
                if tok.is_empty() {
                    return Err(malformed(0, "leaf with an empty token"));
                }
                Ok(())
            }
            (None, false) => self.children.iter().try_for_each(ParseTree::check),
            (Some(tok), false) => Err(malformed(
                0,
                format!("node `{}` has both a token `{tok}` and children", self.label),
            )),
            (None, true) => Err(malformed(
                0,
                format!("node `{}` has neither children nor token", self.label),
            )),
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(tok), true) = (&self.token, self.children.is_empty()) {
            return f.write_str(tok);
        }
        write!(f, "({}", self.label)?;
        for child in &self.children {
            write!(f, " {child}")?;
        }
        f.write_str(")")
    }
}

fn malformed(offset: usize, message: impl Into<String>) -> Error {
    Error::MalformedTree {
        offset,
        message: message.into(),
    }
}

/// Reads one bracketed tree. Offsets in errors are byte offsets into `text`.
pub fn parse_bracketed(text: &str) -> Result<ParseTree> {
    let mut reader = Reader { text, pos: 0 };
    reader.skip_ws();
    if reader.at_end() {
        return Err(malformed(0, "empty input"));
    }
    if reader.peek() != Some('(') {
        return Err(malformed(reader.pos, "expected `(`"));
    }
    let tree = reader.node()?;
    reader.skip_ws();
    if !reader.at_end() {
        return Err(malformed(reader.pos, "trailing input after the tree"));
    }
    Ok(tree)
}

/// Reads a file body holding one tree per line. Blank lines are ignored.
pub fn parse_bracketed_lines(text: &str) -> Result<Vec<ParseTree>> {
    let mut base = 0;
    let mut trees = Vec::new();
    for line in text.split_inclusive('\n') {
        if !line.trim().is_empty() {
            let tree = parse_bracketed(line).map_err(|e| match e {
                Error::MalformedTree { offset, message } => Error::MalformedTree {
                    offset: base + offset,
                    message: format!("tree {}: {message}", trees.len() + 1),
                },
                other => other,
            })?;
            trees.push(tree);
        }
        base += line.len();
    }
    Ok(trees)
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn atom(&mut self) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    fn node(&mut self) -> Result<ParseTree> {
        let open = self.pos;
        // consume '('
        self.pos += 1;
        self.skip_ws();
        let label = self.atom().to_string();
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => {
                    return Err(malformed(
                        self.pos,
                        format!("unbalanced parentheses: node opened at offset {open} is never closed"),
                    ))
                }
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some('(') => children.push(self.node()?),
                Some(_) => children.push(ParseTree::leaf(self.atom())),
            }
        }
        if children.is_empty() {
            return Err(malformed(
                open,
                format!("node `{label}` has neither children nor token"),
            ));
        }
        Ok(ParseTree::node(label, children))
    }
}

/// Graph construction switches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphOptions {
    /// Count preterminals (a non-root node whose only child is a word) as
    /// internal nodes. When false the preterminal and its word become one
    /// leaf carrying the preterminal's tag.
    pub keep_preterminals: bool,
}

impl GraphOptions {
    pub fn keep_preterminals() -> Self {
        GraphOptions {
            keep_preterminals: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    /// Constituent tag; empty for untagged words.
    pub label: String,
    /// Present iff the node is a leaf.
    pub token: Option<String>,
    /// Half-open token span covered by the node.
    pub span: (usize, usize),
}

/// Directed graph over `n` leaves and `m` internal constituents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstituencyGraph {
    n_leaves: usize,
    nodes: Vec<GraphNode>,
    neighbors: Vec<Vec<usize>>,
}

impl ConstituencyGraph {
    /// Assembles a graph without checking any invariant. Pair with
    /// [`graph_validate`].
    pub fn from_raw_parts(
        n_leaves: usize,
        nodes: Vec<GraphNode>,
        neighbors: Vec<Vec<usize>>,
    ) -> Self {
        ConstituencyGraph {
            n_leaves,
            nodes,
            neighbors,
        }
    }

    /// Leaf count.
    pub fn n(&self) -> usize {
        self.n_leaves
    }

    /// Internal-node count.
    pub fn m(&self) -> usize {
        self.nodes.len() - self.n_leaves
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        node < self.n_leaves
    }

    pub fn root(&self) -> usize {
        if self.m() == 0 {
            0
        } else {
            self.n_leaves
        }
    }

    /// Source nodes of `node`, ascending.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn node(&self, node: usize) -> &GraphNode {
        &self.nodes[node]
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn tokens(&self) -> Vec<&str> {
        self.nodes[..self.n_leaves]
            .iter()
            .map(|n| n.token.as_deref().unwrap_or(""))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum()
    }

    /// All `(source, target)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(target, srcs)| srcs.iter().map(move |&s| (s, target)))
            .collect()
    }
}

/// Builds the leaf-sourced graph of `tree`.
pub fn tree_to_graph(tree: &ParseTree, opts: GraphOptions) -> Result<ConstituencyGraph> {
    tree.check()?;
    if tree.is_leaf() {
        return Err(malformed(0, "the root must be a constituent, not a bare word"));
    }
    let mut builder = GraphBuilder {
        opts,
        leaves: Vec::new(),
        internal: Vec::new(),
    };
    builder.walk(tree, true);

    let n = builder.leaves.len();
    let mut nodes = builder.leaves;
    let mut neighbors: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for (node, leaves) in builder.internal {
        nodes.push(node);
        neighbors.push(leaves.collect());
    }
    Ok(ConstituencyGraph {
        n_leaves: n,
        nodes,
        neighbors,
    })
}

struct GraphBuilder {
    opts: GraphOptions,
    leaves: Vec<GraphNode>,
    internal: Vec<(GraphNode, Range<usize>)>,
}

impl GraphBuilder {
    fn push_leaf(&mut self, label: &str, token: &str) {
        let idx = self.leaves.len();
        self.leaves.push(GraphNode {
            label: label.to_string(),
            token: Some(token.to_string()),
            span: (idx, idx + 1),
        });
    }

    fn walk(&mut self, tree: &ParseTree, is_root: bool) {
        if let Some(tok) = tree.token.as_deref().filter(|_| tree.is_leaf()) {
            self.push_leaf(&tree.label, tok);
            return;
        }
        if !self.opts.keep_preterminals && !is_root && is_preterminal(tree) {
            let tok = tree.children[0].token.as_deref().unwrap_or_default();
            self.push_leaf(&tree.label, tok);
            return;
        }
        let slot = self.internal.len();
        let start = self.leaves.len();
        self.internal.push((
            GraphNode {
                label: tree.label.clone(),
                token: None,
                span: (start, start),
            },
            start..start,
        ));
        for child in &tree.children {
            self.walk(child, false);
        }
        let end = self.leaves.len();
        self.internal[slot].0.span = (start, end);
        self.internal[slot].1 = start..end;
    }
}

fn is_preterminal(tree: &ParseTree) -> bool {
    tree.children.len() == 1 && tree.children[0].is_leaf()
}

/// One broken graph invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Offending node, when the violation is local to one.
    pub node: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(v) => write!(f, "node {v}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Lists every invariant `graph` breaks with respect to `tree`. At most one
/// violation is reported per node.
pub fn graph_validate(
    graph: &ConstituencyGraph,
    tree: &ParseTree,
    opts: GraphOptions,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let global = |message: String| Violation {
        node: None,
        message,
    };

    let n = graph.n_leaves;
    if graph.neighbors.len() != graph.nodes.len() {
        out.push(global(format!(
            "{} nodes but {} neighbour lists",
            graph.nodes.len(),
            graph.neighbors.len()
        )));
        return out;
    }
    if n > graph.nodes.len() {
        out.push(global(format!(
            "leaf count {n} exceeds node count {}",
            graph.nodes.len()
        )));
        return out;
    }

    let tokens = tree.leaves();
    if tokens.len() != n {
        out.push(global(format!(
            "graph has {n} leaves but the tree has {}",
            tokens.len()
        )));
    } else if graph.tokens() != tokens {
        out.push(global("leaf tokens differ from the tree's leaves".into()));
    }

    let expected = expected_internal_sets(tree, opts);
    if expected.len() != graph.m() {
        out.push(global(format!(
            "graph has {} internal nodes but the tree has {}",
            graph.m(),
            expected.len()
        )));
    }

    for (leaf, srcs) in graph.neighbors[..n].iter().enumerate() {
        if srcs.as_slice() != [leaf] {
            out.push(Violation {
                node: Some(leaf),
                message: format!("leaf neighbour set must be exactly its self-loop, got {srcs:?}"),
            });
        }
    }
    for (k, srcs) in graph.neighbors[n..].iter().enumerate() {
        let v = n + k;
        let message = if srcs.is_empty() {
            Some("empty neighbour set".to_string())
        } else if let Some(&u) = srcs.iter().find(|&&u| u >= n) {
            Some(format!("internal node {u} listed as a source"))
        } else if k == 0 && srcs.len() != n {
            Some(format!("root must see all {n} leaves, sees {}", srcs.len()))
        } else if expected.get(k).is_some_and(|e| e != srcs) {
            Some(format!(
                "neighbour set {srcs:?} differs from leaf descendants {:?}",
                expected[k]
            ))
        } else {
            None
        };
        if let Some(message) = message {
            out.push(Violation {
                node: Some(v),
                message,
            });
        }
    }
    out
}

/// Leaf descendants of every internal node in pre-order, collected by
/// walking each subtree separately.
fn expected_internal_sets(tree: &ParseTree, opts: GraphOptions) -> Vec<Vec<usize>> {
    fn leaf_count(t: &ParseTree, opts: GraphOptions, is_root: bool) -> usize {
        if t.is_leaf() || (!opts.keep_preterminals && !is_root && is_preterminal(t)) {
            1
        } else {
            t.children.iter().map(|c| leaf_count(c, opts, false)).sum()
        }
    }
    fn go(
        t: &ParseTree,
        opts: GraphOptions,
        is_root: bool,
        offset: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if t.is_leaf() || (!opts.keep_preterminals && !is_root && is_preterminal(t)) {
            return;
        }
        let count = leaf_count(t, opts, is_root);
        out.push((offset..offset + count).collect());
        let mut off = offset;
        for c in &t.children {
            go(c, opts, false, off, out);
            off += leaf_count(c, opts, false);
        }
    }
    let mut out = Vec::new();
    go(tree, opts, true, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(text: &str, keep: bool) -> ConstituencyGraph {
        let opts = GraphOptions {
            keep_preterminals: keep,
        };
        tree_to_graph(&parse_bracketed(text).unwrap(), opts).unwrap()
    }

    #[test]
    fn parses_minimal_tree() {
        let t = parse_bracketed("(X a)").unwrap();
        assert_eq!(t, ParseTree::node("X", vec![ParseTree::leaf("a")]));
    }

    #[test]
    fn parses_nested_tree() {
        let t = parse_bracketed("(S (NP a b) (VP c))").unwrap();
        let expected = ParseTree::node(
            "S",
            vec![
                ParseTree::node("NP", vec![ParseTree::leaf("a"), ParseTree::leaf("b")]),
                ParseTree::node("VP", vec![ParseTree::leaf("c")]),
            ],
        );
        assert_eq!(t, expected);
        assert_eq!(t.leaves(), ["a", "b", "c"]);
        assert_eq!(t.to_string(), "(S (NP a b) (VP c))");
    }

    #[test]
    fn parses_unlabelled_root_and_extra_whitespace() {
        let t = parse_bracketed("  ( (S\n (NP  food ) (VP was (ADJP good))) )\n").unwrap();
        assert_eq!(t.label, "");
        assert_eq!(t.leaves(), ["food", "was", "good"]);
        assert_eq!(parse_bracketed(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn rejects_malformed_input() {
        for (text, offset) in [
            ("(S (NP a b", 10),
            ("", 0),
            ("   ", 0),
            ("(S ())", 3),
            ("(S (X))", 3),
            ("(S a))", 5),
            ("word", 0),
        ] {
            match parse_bracketed(text) {
                Err(Error::MalformedTree { offset: got, .. }) => {
                    assert_eq!(got, offset, "offset for {text:?}")
                }
                other => panic!("{text:?} parsed as {other:?}"),
            }
        }
    }

    #[test]
    fn reads_one_tree_per_line() {
        let trees = parse_bracketed_lines("(X a)\n\n(Y b c)\n").unwrap();
        assert_eq!(trees.len(), 2);
        let err = parse_bracketed_lines("(X a)\n(Y b\n").unwrap_err();
        assert!(err.to_string().contains("tree 2"), "{err}");
    }

    #[test]
    fn single_leaf_graph() {
        let g = graph("(X a)", false);
        assert_eq!((g.n(), g.m()), (1, 1));
        assert_eq!(g.edges(), vec![(0, 0), (0, 1)]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn nine_edge_fixture() {
        let g = graph("(S (NP a b) (VP c))", true);
        assert_eq!((g.n(), g.m()), (3, 3));
        // pre-order: S=3, NP=4, VP=5
        assert_eq!(g.node(3).label, "S");
        assert_eq!(g.neighbors(3), [0, 1, 2]);
        assert_eq!(g.neighbors(4), [0, 1]);
        assert_eq!(g.neighbors(5), [2]);
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.node(4).span, (0, 2));
    }

    #[test]
    fn nested_preterminal_fixture() {
        let g = graph("(S (NP (ADJ a) b) c)", true);
        assert_eq!((g.n(), g.m()), (3, 3));
        let labels: Vec<_> = g.nodes()[3..].iter().map(|n| n.label.as_str()).collect();
        assert_eq!(labels, ["S", "NP", "ADJ"]);
        assert_eq!(g.neighbors(3), [0, 1, 2]);
        assert_eq!(g.neighbors(4), [0, 1]);
        assert_eq!(g.neighbors(5), [0]);
        assert_eq!(g.edge_count(), 9);
    }

    #[test]
    fn collapsing_folds_preterminals_into_leaves() {
        let g = graph("(S (NP (DT the) (NN food)) (VP (VBD was) (JJ good)))", false);
        assert_eq!((g.n(), g.m()), (4, 3));
        assert_eq!(g.node(1).label, "NN");
        assert_eq!(g.node(1).token.as_deref(), Some("food"));
        // collapsing never touches the root
        let g = graph("(X a)", false);
        assert_eq!(g.m(), 1);
        // the VP over a bare word is itself a preterminal
        let g = graph("(S (NP a b) (VP c))", false);
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.node(2).label, "VP");
    }

    #[test]
    fn valid_pair_has_no_violations() {
        for keep in [false, true] {
            let opts = GraphOptions {
                keep_preterminals: keep,
            };
            let t = parse_bracketed("(S (NP (ADJ a) b) (VP (V c) (NP d)))").unwrap();
            let g = tree_to_graph(&t, opts).unwrap();
            assert!(graph_validate(&g, &t, opts).is_empty());
        }
    }

    #[test]
    fn internal_source_is_reported_once() {
        let opts = GraphOptions::keep_preterminals();
        let t = parse_bracketed("(S (NP a b) (VP c))").unwrap();
        let g = tree_to_graph(&t, opts).unwrap();
        let mut neighbors = g.neighbors.clone();
        neighbors[4].push(5);
        let broken = ConstituencyGraph::from_raw_parts(g.n(), g.nodes.clone(), neighbors);
        let v = graph_validate(&broken, &t, opts);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].node, Some(4));
    }

    #[test]
    fn missing_self_loop_is_reported_once() {
        let opts = GraphOptions::keep_preterminals();
        let t = parse_bracketed("(S (NP a b) (VP c))").unwrap();
        let g = tree_to_graph(&t, opts).unwrap();
        let mut neighbors = g.neighbors.clone();
        neighbors[1].clear();
        let broken = ConstituencyGraph::from_raw_parts(g.n(), g.nodes.clone(), neighbors);
        let v = graph_validate(&broken, &t, opts);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].node, Some(1));
    }

    #[test]
    fn bare_leaf_root_is_rejected() {
        assert!(tree_to_graph(&ParseTree::leaf("a"), GraphOptions::default()).is_err());
        let bad = ParseTree::node("X", vec![]);
        assert!(tree_to_graph(&bad, GraphOptions::default()).is_err());
    }
}
