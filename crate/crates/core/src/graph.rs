//! Finite directed multigraphs with named vertices and edges.
//!
//! Declaration order is semantic: it fixes the canonical ordering of
//! vertices, edges, paths, and (downstream) monomials, and it designates
//! each regular vertex's *special* edge — the last edge that vertex emits.
//! Parsing and serialization therefore preserve order exactly.
//!
//! File format, line oriented:
//!
//! ```text
//! # comment
//! vertex v1
//! edge f1 v1 v2        # edge f1 from v1 to v2
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub range: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_lookup: HashMap<String, usize>,
    edge_lookup: HashMap<String, usize>,
}

/// Sinks emit nothing, sources receive nothing, regular vertices emit at
/// least one edge.  A vertex can be both a source and a sink (isolated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClasses {
    pub sinks: Vec<usize>,
    pub sources: Vec<usize>,
    pub regular: Vec<usize>,
}

impl DirectedGraph {
    pub fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let mut g = DirectedGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_lookup: HashMap::new(),
            edge_lookup: HashMap::new(),
        };
        for v in vertices {
            g.push_vertex(v, 0)?;
        }
        for (id, s, r) in edges {
            g.push_edge(id, s, r, 0)?;
        }
        Ok(g)
    }

    fn push_vertex(&mut self, id: &str, line: usize) -> Result<()> {
        if id.is_empty() {
            return Err(Error::parse(line, "empty vertex identifier"));
        }
        if self.vertex_lookup.contains_key(id) {
            return Err(Error::parse(line, format!("duplicate vertex `{id}`")));
        }
        self.vertex_lookup.insert(id.to_string(), self.vertices.len());
        self.vertices.push(id.to_string());
        Ok(())
    }

    fn push_edge(&mut self, id: &str, source: &str, range: &str, line: usize) -> Result<()> {
        if id.is_empty() {
            return Err(Error::parse(line, "empty edge identifier"));
        }
        if self.edge_lookup.contains_key(id) || self.vertex_lookup.contains_key(id) {
            return Err(Error::parse(line, format!("duplicate identifier `{id}`")));
        }
        let s = *self
            .vertex_lookup
            .get(source)
            .ok_or_else(|| Error::parse(line, format!("unknown source vertex `{source}`")))?;
        let r = *self
            .vertex_lookup
            .get(range)
            .ok_or_else(|| Error::parse(line, format!("unknown range vertex `{range}`")))?;
        self.edge_lookup.insert(id.to_string(), self.edges.len());
        self.edges.push(Edge {
            id: id.to_string(),
            source: s,
            range: r,
        });
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut g = DirectedGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_lookup: HashMap::new(),
            edge_lookup: HashMap::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["vertex", id] => g.push_vertex(id, line_no)?,
                ["edge", id, source, range] => g.push_edge(id, source, range, line_no)?,
                ["vertex", ..] => {
                    return Err(Error::parse(line_no, "vertex takes exactly one identifier"))
                }
                ["edge", ..] => {
                    return Err(Error::parse(
                        line_no,
                        "edge takes exactly: id, source vertex, range vertex",
                    ))
                }
                [kw, ..] => {
                    return Err(Error::parse(line_no, format!("unknown directive `{kw}`")))
                }
                [] => unreachable!(),
            }
        }
        Ok(g)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "vertex {v}");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "edge {} {} {}",
                e.id, self.vertices[e.source], self.vertices[e.range]
            );
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_lookup.get(name).copied()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_lookup.get(id).copied()
    }

    /// Edges emitted by `v`, in declaration order.
    pub fn edges_from(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].source == v)
            .collect()
    }

    /// Edges received by `v`, in declaration order.
    pub fn edges_into(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].range == v)
            .collect()
    }

    /// The designated special edge of `v`: the last edge `v` emits in
    /// declaration order.  `None` exactly when `v` is a sink.
    pub fn special_edge(&self, v: usize) -> Option<usize> {
        self.edges_from(v).last().copied()
    }

    pub fn classify_vertices(&self) -> VertexClasses {
        let mut classes = VertexClasses {
            sinks: Vec::new(),
            sources: Vec::new(),
            regular: Vec::new(),
        };
        for v in 0..self.vertices.len() {
            let emits = self.edges.iter().any(|e| e.source == v);
            let receives = self.edges.iter().any(|e| e.range == v);
            if emits {
                classes.regular.push(v);
            } else {
                classes.sinks.push(v);
            }
            if !receives {
                classes.sources.push(v);
            }
        }
        classes
    }

    pub fn has_sinks(&self) -> bool {
        !self.classify_vertices().sinks.is_empty()
    }

    pub fn is_acyclic(&self) -> bool {
        self.longest_path_len().is_some()
    }

    /// Length (edge count) of the longest path; `None` when the graph has a
    /// cycle.  Computed by iterating the longest-path relaxation; any
    /// growth beyond `#vertices` edges betrays a cycle.
    pub fn longest_path_len(&self) -> Option<usize> {
        let n = self.vertices.len();
        let mut best = vec![0usize; n];
        for round in 0..=n {
            let mut changed = false;
            for e in &self.edges {
                if best[e.source] < best[e.range] + 1 {
                    best[e.source] = best[e.range] + 1;
                    changed = true;
                }
            }
            if !changed {
                return best.into_iter().max().or(Some(0));
            }
            if round == n {
                break;
            }
        }
        None
    }

    /// All paths grouped by length, `result[k]` = paths of `k` edges in
    /// lexicographic order (by edge sequence; length-0 paths in vertex
    /// declaration order).
    pub fn enumerate_paths(&self, max_len: usize) -> Vec<Vec<Path>> {
        let mut by_len: Vec<Vec<Path>> = Vec::with_capacity(max_len + 1);
        by_len.push(
            (0..self.vertices.len())
                .map(|v| Path {
                    start: v,
                    edges: Vec::new(),
                })
                .collect(),
        );
        for len in 1..=max_len {
            let mut next = Vec::new();
            for p in &by_len[len - 1] {
                let end = p.end(self);
                for e in self.edges_from(end) {
                    let mut edges = p.edges.clone();
                    edges.push(e);
                    next.push(Path {
                        start: p.start,
                        edges,
                    });
                }
            }
            by_len.push(next);
        }
        by_len
    }
}

/// A finite path: a start vertex and a composable edge sequence.  The empty
/// path at a vertex is that vertex's idempotent downstream.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    // Field order matters: derived comparison is by edge sequence first,
    // which together with the length-major sort used elsewhere gives the
    // canonical monomial order.
    pub edges: Vec<usize>,
    pub start: usize,
}

impl Path {
    pub fn at_vertex(v: usize) -> Self {
        Path {
            start: v,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(g: &DirectedGraph, edges: &[usize]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::input("edge path needs at least one edge"));
        }
        let p = Path {
            start: g.edge(edges[0]).source,
            edges: edges.to_vec(),
        };
        p.check(g)?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, g: &DirectedGraph) -> usize {
        self.edges.last().map_or(self.start, |&e| g.edge(e).range)
    }

    pub fn check(&self, g: &DirectedGraph) -> Result<()> {
        let mut at = self.start;
        for &e in &self.edges {
            if g.edge(e).source != at {
                return Err(Error::input(format!(
                    "path breaks at edge `{}`: source mismatch",
                    g.edge(e).id
                )));
            }
            at = g.edge(e).range;
        }
        Ok(())
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.start == other.start
            && self.edges.len() <= other.edges.len()
            && self.edges == other.edges[..self.edges.len()]
    }

    /// `other` minus this prefix, as a path starting where this one ends.
    pub fn strip_prefix(&self, other: &Path, g: &DirectedGraph) -> Option<Path> {
        if !self.is_prefix_of(other) {
            return None;
        }
        Some(Path {
            start: self.end(g),
            edges: other.edges[self.edges.len()..].to_vec(),
        })
    }

    pub fn display(&self, g: &DirectedGraph) -> String {
        if self.edges.is_empty() {
            g.vertex_name(self.start).to_string()
        } else {
            self.edges
                .iter()
                .map(|&e| g.edge(e).id.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// Every directed multigraph with at most `max_v` labeled vertices and
/// `max_e` labeled edges, vertices named v1.. and edges e1.. — the sweep
/// corpus for the exhaustive tests.  Edges are ordered, so two graphs
/// differing only in edge declaration order both appear.
pub fn enumerate_graphs(max_v: usize, max_e: usize) -> Vec<DirectedGraph> {
    let mut out = Vec::new();
    for nv in 1..=max_v {
        let vnames: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
        let vrefs: Vec<&str> = vnames.iter().map(String::as_str).collect();
        for ne in 0..=max_e {
            // Each edge independently picks (source, range): nv² choices.
            let mut assignment = vec![0usize; ne];
            let slots = nv * nv;
            loop {
                let enames: Vec<String> = (1..=ne).map(|i| format!("e{i}")).collect();
                let edges: Vec<(&str, &str, &str)> = assignment
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| {
                        (
                            enames[i].as_str(),
                            vrefs[a / nv],
                            vrefs[a % nv],
                        )
                    })
                    .collect();
                out.push(DirectedGraph::build(&vrefs, &edges).expect("corpus graph is valid"));
                // Odometer increment over edge assignments.
                let mut i = 0;
                loop {
                    if i == ne {
                        break;
                    }
                    assignment[i] += 1;
                    if assignment[i] < slots {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
                if i == ne {
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_VERTEX: &str = "\n# one edge\nvertex v1\nvertex v2\nedge f1 v1 v2\n";

    #[test]
    fn parse_and_round_trip() {
        let g = DirectedGraph::parse(TWO_VERTEX).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        let again = DirectedGraph::parse(&g.serialize()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = DirectedGraph::parse("vertex v1\nedge f1 v1 missing\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = DirectedGraph::parse("vertex v1\nvertex v1\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        let err = DirectedGraph::parse("flurb x\n").unwrap_err();
        assert!(err.to_string().contains("unknown directive"), "{err}");
    }

    #[test]
    fn classification_of_two_vertex_graph() {
        let g = DirectedGraph::parse(TWO_VERTEX).unwrap();
        let c = g.classify_vertices();
        assert_eq!(c.sinks, vec![1]);
        assert_eq!(c.sources, vec![0]);
        assert_eq!(c.regular, vec![0]);
        assert_eq!(g.special_edge(0), Some(0));
        assert_eq!(g.special_edge(1), None);
    }

    #[test]
    fn loop_is_cyclic_chain_is_not() {
        let lp = DirectedGraph::build(&["v"], &[("f", "v", "v")]).unwrap();
        assert!(!lp.is_acyclic());
        let chain =
            DirectedGraph::build(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).unwrap();
        assert_eq!(chain.longest_path_len(), Some(2));
    }

    #[test]
    fn path_enumeration_is_lexicographic_and_complete() {
        let rose = DirectedGraph::build(&["v"], &[("a", "v", "v"), ("b", "v", "v")]).unwrap();
        let paths = rose.enumerate_paths(3);
        assert_eq!(paths[0].len(), 1);
        assert_eq!(paths[2].len(), 4);
        assert_eq!(paths[3].len(), 8);
        let seqs: Vec<Vec<usize>> = paths[2].iter().map(|p| p.edges.clone()).collect();
        assert_eq!(seqs, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn paths_validate_composability() {
        let chain =
            DirectedGraph::build(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).unwrap();
        assert!(Path::from_edges(&chain, &[0, 1]).is_ok());
        assert!(Path::from_edges(&chain, &[1, 0]).is_err());
    }

    #[test]
    fn prefix_stripping() {
        let chain =
            DirectedGraph::build(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).unwrap();
        let long = Path::from_edges(&chain, &[0, 1]).unwrap();
        let short = Path::from_edges(&chain, &[0]).unwrap();
        let rest = short.strip_prefix(&long, &chain).unwrap();
        assert_eq!(rest.start, 1);
        assert_eq!(rest.edges, vec![1]);
        assert!(long.strip_prefix(&short, &chain).is_none());
    }

    #[test]
    fn corpus_size_is_the_closed_form() {
        // Σ_{nv≤3} Σ_{ne≤3} (nv²)^ne = 4 + 85 + 820
        assert_eq!(enumerate_graphs(3, 3).len(), 909);
        assert_eq!(enumerate_graphs(1, 1).len(), 2);
    }
}
