//! Symmetric binary relations stored as simple undirected graphs.
//!
//! Every undirected edge `{u, v}` is kept in both orientations, so the
//! relation `R(A, B)` with `A = B = V(G)` is exactly the directed edge set.
//! Adjacency is held in CSR form with sorted neighbor lists.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub type VertexId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
}

impl Graph {
    /// Builds a graph on `vertex_count` vertices labelled `0..vertex_count`.
    ///
    /// Edges are symmetrized; self-loops and repeated edges are dropped.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let labels = (0..vertex_count).map(|v| v.to_string()).collect();
        let mut arcs = Vec::new();
        for (u, v) in edges {
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            push_arcs(&mut arcs, u, v);
        }
        Ok(Self::from_arcs(labels, arcs))
    }

    pub fn empty() -> Self {
        Self {
            labels: Vec::new(),
            offsets: vec![0],
            neighbors: Vec::new(),
        }
    }

    pub fn load_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = File::open(path.as_ref())?;
        load_edge_list(BufReader::new(file))
    }

    fn from_arcs(labels: Vec<String>, mut arcs: Vec<(VertexId, VertexId)>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        let n = labels.len();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = arcs.into_iter().map(|(_, v)| v).collect();
        Self {
            labels,
            offsets,
            neighbors,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// `|R|`: twice the number of undirected edges.
    pub fn directed_edge_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Checked variant of [`Graph::degree`].
    pub fn degree_of(&self, v: VertexId) -> Result<usize> {
        if (v as usize) < self.vertex_count() {
            Ok(self.degree(v))
        } else {
            Err(Error::domain(format!(
                "vertex {v} out of range for {} vertices",
                self.vertex_count()
            )))
        }
    }

    pub fn degrees(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as VertexId)
    }

    /// Iterates each undirected edge once as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count() as VertexId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Writes the canonical dump: one `u v` line per undirected edge, sorted
    /// by dense id with `u < v`, using the original vertex tokens.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.label(u), self.label(v))?;
        }
        out.flush()
    }
}

fn push_arcs(arcs: &mut Vec<(VertexId, VertexId)>, u: VertexId, v: VertexId) {
    if u != v {
        arcs.push((u, v));
        arcs.push((v, u));
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` and blank lines are skipped. Every other line must
/// hold exactly two tokens. Tokens are interned and then given dense ids in
/// sorted order (numeric when every token is an integer), which makes
/// dump-and-reload reproduce the same graph.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut raw_edges: Vec<(VertexId, VertexId)> = Vec::new();

    let mut intern = |token: &str| -> VertexId {
        if let Some(&id) = ids.get(token) {
            return id;
        }
        let id = labels.len() as VertexId;
        labels.push(token.to_owned());
        ids.insert(token.to_owned(), id);
        id
    };

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => {
                let u = intern(a);
                let v = intern(b);
                raw_edges.push((u, v));
            }
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!(
                        "expected two vertex tokens, found {}",
                        trimmed.split_whitespace().count()
                    ),
                })
            }
        }
    }

    let order = sorted_label_order(&labels);
    let mut remap = vec![0 as VertexId; labels.len()];
    for (new_id, &old_id) in order.iter().enumerate() {
        remap[old_id] = new_id as VertexId;
    }
    let sorted_labels: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();

    let mut arcs = Vec::with_capacity(raw_edges.len() * 2);
    for (u, v) in raw_edges {
        push_arcs(&mut arcs, remap[u as usize], remap[v as usize]);
    }
    Ok(Graph::from_arcs(sorted_labels, arcs))
}

fn sorted_label_order(labels: &[String]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    let numeric: Option<Vec<i128>> = labels.iter().map(|l| l.parse::<i128>().ok()).collect();
    match numeric {
        Some(values) => order.sort_by_key(|&i| values[i]),
        None => order.sort_by(|&a, &b| labels[a].cmp(&labels[b])),
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Graph {
        load_edge_list(text.as_bytes()).unwrap()
    }

    fn degree_by_label(g: &Graph, label: &str) -> usize {
        g.degree(g.vertex_by_label(label).unwrap())
    }

    #[test]
    fn two_edge_path() {
        let g = load("a b\nb c");
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.directed_edge_count(), 4);
        assert_eq!(degree_by_label(&g, "a"), 1);
        assert_eq!(degree_by_label(&g, "b"), 2);
        assert_eq!(degree_by_label(&g, "c"), 1);
    }

    #[test]
    fn duplicates_and_loops_dropped() {
        let g = load("a b\nb a\na a");
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.directed_edge_count(), 2);
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let g = load("# comment\n\n1 2\n");
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.vertex_count(), 2);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = load_edge_list("1 2\n3\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(matches!(
            load_edge_list("1 2 3\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let g = load("");
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.directed_edge_count(), 0);
        assert_eq!(g.max_degree(), 0);
        assert_eq!(g, Graph::empty());
    }

    #[test]
    fn numeric_tokens_sorted_numerically() {
        let g = load("10 2\n2 9");
        assert_eq!(g.label(0), "2");
        assert_eq!(g.label(1), "9");
        assert_eq!(g.label(2), "10");
    }

    #[test]
    fn degree_of_checks_range() {
        let g = load("a b\nb c");
        let b = g.vertex_by_label("b").unwrap();
        assert_eq!(g.degree_of(b).unwrap(), 2);
        assert!(matches!(g.degree_of(3), Err(Error::Domain(_))));
    }

    #[test]
    fn star_center_degree() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.degree_of(0).unwrap(), 3);
        assert!((1..4).all(|v| g.degree_of(v).unwrap() >= 1));
    }

    #[test]
    fn from_edges_rejects_out_of_range() {
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn canonical_dump_is_sorted() {
        let g = load("c b\nb a\na c\nd a");
        let mut out = Vec::new();
        g.write_edge_list(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a b\na c\na d\nb c\n");
    }
}
