// SPDX-License-Identifier: Apache-2.0

//! Immutable simple undirected graphs and edge-list ingestion.
//!
//! Nodes are addressed by dense internal indices `0..N` assigned in order of
//! first appearance; each index maps back to the external token it was read
//! from (an AS number, a hostname, anything whitespace-free).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};

/// Internal node index.
pub type NodeId = u32;

/// Compressed sparse row adjacency with sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    /// Treat lines starting with `#` as comments.
    pub allow_comments: bool,
    /// Merge repeated edges instead of rejecting them.
    pub dedupe: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            allow_comments: true,
            dedupe: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub dropped_self_loops: usize,
    pub merged_duplicates: usize,
    pub lines_read: usize,
}

impl Graph {
    /// Builds a graph over nodes `0..node_count` labelled by their decimal
    /// index. Self-loops and repeated edges are erased; the returned report
    /// counts what was removed (`lines_read` is the number of input pairs).
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> (Graph, IngestReport) {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Self::build(labels, edges)
    }

    /// Builds a graph with explicit labels, one per node.
    pub fn from_labeled_edges(
        labels: Vec<String>,
        edges: &[(NodeId, NodeId)],
    ) -> (Graph, IngestReport) {
        Self::build(labels, edges)
    }

    fn build(labels: Vec<String>, edges: &[(NodeId, NodeId)]) -> (Graph, IngestReport) {
        let n = labels.len();
        let mut report = IngestReport {
            lines_read: edges.len(),
            ..Default::default()
        };
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge endpoint out of range");
            if u != v {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut raw = vec![0 as NodeId; offsets[n]];
        for &(u, v) in edges {
            if u == v {
                report.dropped_self_loops += 1;
                continue;
            }
            raw[fill[u as usize]] = v;
            fill[u as usize] += 1;
            raw[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }

        // Sort and dedupe each list, then compact.
        let mut new_offsets = Vec::with_capacity(n + 1);
        new_offsets.push(0);
        let mut neighbors = Vec::with_capacity(raw.len());
        let mut removed_half_edges = 0usize;
        for v in 0..n {
            let list = &mut raw[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            for (i, &w) in list.iter().enumerate() {
                if i > 0 && list[i - 1] == w {
                    removed_half_edges += 1;
                    continue;
                }
                neighbors.push(w);
            }
            new_offsets.push(neighbors.len());
        }
        report.merged_duplicates = removed_half_edges / 2;

        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as NodeId))
            .collect();
        (
            Graph {
                offsets: new_offsets,
                neighbors,
                labels,
                index,
            },
            report,
        )
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        self.nodes().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        0..self.labels.len() as NodeId
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(min, max)` internal index pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// The subgraph induced by `set`, relabelled densely in ascending
    /// internal-index order and keeping the external labels.
    pub fn induced_subgraph(&self, set: &NodeSet) -> Graph {
        let mut remap = vec![NodeId::MAX; self.node_count()];
        let mut labels = Vec::with_capacity(set.len());
        for (i, &v) in set.members().iter().enumerate() {
            remap[v as usize] = i as NodeId;
            labels.push(self.labels[v as usize].clone());
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| set.contains(u) && set.contains(v))
            .map(|(u, v)| (remap[u as usize], remap[v as usize]))
            .collect();
        Graph::build(labels, &edges).0
    }

    /// Canonical edge list, LF-terminated. Each node is introduced in
    /// internal-index order (by its edge to an earlier node, or together
    /// with its smallest neighbour), then the remaining edges follow in
    /// `(min, max)` order. Reloading a graph that was itself loaded from an
    /// edge list reproduces it exactly. Degree-0 nodes have no representation.
    pub fn to_edge_list(&self) -> String {
        let n = self.node_count();
        let mut out = String::with_capacity(self.edge_count() * 12);
        let mut seen = vec![false; n];
        let mut used: Vec<(NodeId, NodeId)> = Vec::new();
        for v in 0..n as NodeId {
            if seen[v as usize] || self.degree(v) == 0 {
                continue;
            }
            // Neighbours are sorted: the first is the smallest, and is seen
            // whenever it is below v.
            let w = self.neighbors(v)[0];
            let _ = writeln!(out, "{} {}", self.label(v.min(w)), self.label(v.max(w)));
            seen[v as usize] = true;
            seen[w as usize] = true;
            used.push((v.min(w), v.max(w)));
        }
        used.sort_unstable();
        for e in self.edges() {
            if used.binary_search(&e).is_err() {
                let _ = writeln!(out, "{} {}", self.label(e.0), self.label(e.1));
            }
        }
        out
    }
}

/// Reads a whitespace-separated edge list.
pub fn load_edge_list<R: BufRead>(source: R, options: IngestOptions) -> Result<(Graph, IngestReport)> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, NodeId> = HashMap::new();
    let mut edges = Vec::new();
    let mut lines_read = 0usize;

    let mut intern = |tok: &str, labels: &mut Vec<String>| -> NodeId {
        if let Some(&id) = index.get(tok) {
            return id;
        }
        let id = labels.len() as NodeId;
        labels.push(tok.to_owned());
        index.insert(tok.to_owned(), id);
        id
    };

    for (lineno, line) in source.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        lines_read += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || (options.allow_comments && trimmed.starts_with('#')) {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(Error::Parse {
                line: lineno + 1,
                found: trimmed.split_whitespace().count(),
            });
        };
        let u = intern(a, &mut labels);
        let v = intern(b, &mut labels);
        edges.push((u, v));
    }

    let (graph, mut report) = Graph::build(labels, &edges);
    report.lines_read = lines_read;
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    if !options.dedupe && report.merged_duplicates > 0 {
        return Err(Error::InvalidArgument(format!(
            "{} duplicate edge(s) and deduplication disabled",
            report.merged_duplicates
        )));
    }
    Ok((graph, report))
}

/// A subset of a graph's nodes: membership mask plus sorted member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    mask: Vec<bool>,
    members: Vec<NodeId>,
}

impl NodeSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            mask: vec![false; universe],
            members: Vec::new(),
        }
    }

    pub fn all(universe: usize) -> Self {
        Self {
            mask: vec![true; universe],
            members: (0..universe as NodeId).collect(),
        }
    }

    pub fn from_nodes(universe: usize, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut mask = vec![false; universe];
        for v in nodes {
            mask[v as usize] = true;
        }
        Self::from_mask(mask)
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i as NodeId))
            .collect();
        Self { mask, members }
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.mask.get(v as usize).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mask = self
            .mask
            .iter()
            .zip(&other.mask)
            .map(|(a, b)| *a || *b)
            .collect();
        NodeSet::from_mask(mask)
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.members.iter().all(|&v| !other.contains(v))
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }
}

/// Orders labels numerically when both parse as integers, otherwise
/// lexicographically. AS numbers then sort the way operators expect.
pub fn compare_labels(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<i128>(), b.parse::<i128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Result<(Graph, IngestReport)> {
        load_edge_list(s.as_bytes(), IngestOptions::default())
    }

    #[test]
    fn triangle() {
        let (g, r) = load("1 2\n2 3\n3 1\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(r.lines_read, 3);
        assert_eq!(g.label(0), "1");
        assert_eq!(g.neighbors(0), &[1, 2]);
    }

    #[test]
    fn normalization_counts() {
        let (g, r) = load("a b\nb a\n# note\na a\n").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(r.merged_duplicates, 1);
        assert_eq!(r.dropped_self_loops, 1);
        assert_eq!(r.lines_read, 4);
    }

    #[test]
    fn wrong_token_count_reports_line() {
        match load("1 2\n2\n") {
            Err(Error::Parse { line, found }) => {
                assert_eq!(line, 2);
                assert_eq!(found, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("1 2 3\n"), Err(Error::Parse { line: 1, found: 3 })));
    }

    #[test]
    fn empty_input_has_no_edges() {
        assert!(matches!(load(""), Err(Error::NoEdges)));
        assert!(matches!(load("# only\n\n"), Err(Error::NoEdges)));
        assert!(matches!(load("x x\n"), Err(Error::NoEdges)));
    }

    #[test]
    fn comments_disabled_are_tokens() {
        let opts = IngestOptions {
            allow_comments: false,
            dedupe: true,
        };
        let (g, _) = load_edge_list("# x\n1 2\n".as_bytes(), opts).unwrap();
        assert_eq!(g.node_count(), 4);
    }

    #[test]
    fn strict_mode_rejects_duplicates() {
        let opts = IngestOptions {
            allow_comments: true,
            dedupe: false,
        };
        assert!(load_edge_list("1 2\n2 1\n".as_bytes(), opts).is_err());
        assert!(load_edge_list("1 2\n2 3\n".as_bytes(), opts).is_ok());
    }

    #[test]
    fn canonical_emission() {
        let (g, _) = load("b a\nc a\n").unwrap();
        // b=0, a=1, c=2
        assert_eq!(g.to_edge_list(), "b a\na c\n");
        let (h, _) = load(&g.to_edge_list()).unwrap();
        assert_eq!(h.to_edge_list(), g.to_edge_list());
    }

    #[test]
    fn induced_subgraph_keeps_labels() {
        let (g, _) = load("a b\nb c\nc d\n").unwrap();
        let set = NodeSet::from_nodes(4, [1, 2, 3]);
        let h = g.induced_subgraph(&set);
        assert_eq!(h.labels(), &["b", "c", "d"]);
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn label_order() {
        let mut v = vec!["10", "9", "b", "a", "100"];
        v.sort_by(|a, b| compare_labels(a, b));
        assert_eq!(v, ["9", "10", "100", "a", "b"]);
    }
}
