// SPDX-License-Identifier: Apache-2.0

//! Components, BFS distances, mean path length and diameter on (induced
//! sub)graphs. All routines take an optional [`NodeSet`] filter and never
//! step outside it.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Component of each node, `None` for nodes outside the filter.
    pub component_id: Vec<Option<u32>>,
    /// Sizes in descending order; index `c` is the size of component `c`.
    pub sizes: Vec<usize>,
    pub count: usize,
}

impl ComponentPartition {
    pub fn largest(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }

    pub fn second_largest(&self) -> usize {
        self.sizes.get(1).copied().unwrap_or(0)
    }

    pub fn members(&self, component: u32) -> NodeSet {
        NodeSet::from_mask(
            self.component_id
                .iter()
                .map(|c| *c == Some(component))
                .collect(),
        )
    }
}

#[inline]
fn admitted(filter: Option<&NodeSet>, v: NodeId) -> bool {
    filter.map_or(true, |f| f.contains(v))
}

/// Connected components of `g`, or of the subgraph induced by `filter`.
///
/// Component ids are dense and ordered by descending size; equal sizes keep
/// the order of their smallest member.
pub fn connected_components(g: &Graph, filter: Option<&NodeSet>) -> ComponentPartition {
    let n = g.node_count();
    let mut raw: Vec<u32> = vec![u32::MAX; n];
    let mut raw_sizes: Vec<usize> = Vec::new();
    let mut stack: Vec<NodeId> = Vec::new();
    for s in g.nodes() {
        if raw[s as usize] != u32::MAX || !admitted(filter, s) {
            continue;
        }
        let c = raw_sizes.len() as u32;
        raw[s as usize] = c;
        stack.push(s);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in g.neighbors(v) {
                if raw[w as usize] == u32::MAX && admitted(filter, w) {
                    raw[w as usize] = c;
                    stack.push(w);
                }
            }
        }
        raw_sizes.push(size);
    }

    // Discovery order already follows smallest member, so a stable sort
    // by size gives the tie rule.
    let mut order: Vec<u32> = (0..raw_sizes.len() as u32).collect();
    order.sort_by(|&a, &b| raw_sizes[b as usize].cmp(&raw_sizes[a as usize]));
    let mut rank = vec![0u32; order.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c as usize] = r as u32;
    }
    ComponentPartition {
        component_id: raw
            .iter()
            .map(|&c| (c != u32::MAX).then(|| rank[c as usize]))
            .collect(),
        sizes: order.iter().map(|&c| raw_sizes[c as usize]).collect(),
        count: order.len(),
    }
}

/// Hop distances from `source`; `None` marks nodes that are unreachable or
/// outside the filter.
pub fn bfs_distances(g: &Graph, source: NodeId, filter: Option<&NodeSet>) -> Result<Vec<Option<u32>>> {
    if source as usize >= g.node_count() || !admitted(filter, source) {
        return Err(Error::NodeOutOfRange(source as usize));
    }
    let mut bfs = Bfs::new(g.node_count());
    bfs.run(g, source, filter, u32::MAX);
    Ok((0..g.node_count())
        .map(|v| bfs.distance(v as NodeId))
        .collect())
}

/// Reusable BFS scratch space. Distances are stamped per run so repeated
/// searches cost only what they visit.
#[derive(Debug, Clone)]
pub(crate) struct Bfs {
    dist: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: VecDeque<NodeId>,
    visited: Vec<NodeId>,
}

impl Bfs {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            dist: vec![0; n],
            stamp: vec![0; n],
            epoch: 0,
            queue: VecDeque::new(),
            visited: Vec::new(),
        }
    }

    /// Runs BFS up to `max_depth` hops; returns the visited nodes in BFS order.
    pub(crate) fn run(
        &mut self,
        g: &Graph,
        source: NodeId,
        filter: Option<&NodeSet>,
        max_depth: u32,
    ) -> &[NodeId] {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.visited.clear();
        self.queue.clear();
        self.stamp[source as usize] = self.epoch;
        self.dist[source as usize] = 0;
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            self.visited.push(v);
            let d = self.dist[v as usize];
            if d >= max_depth {
                continue;
            }
            for &w in g.neighbors(v) {
                if self.stamp[w as usize] != self.epoch && admitted(filter, w) {
                    self.stamp[w as usize] = self.epoch;
                    self.dist[w as usize] = d + 1;
                    self.queue.push_back(w);
                }
            }
        }
        &self.visited
    }

    /// BFS up to `max_depth` hops that stops as soon as `stop` returns true
    /// for a visited node, or when `budget` visits have been spent. Returns
    /// whether `stop` fired.
    pub(crate) fn search(
        &mut self,
        g: &Graph,
        source: NodeId,
        filter: Option<&NodeSet>,
        max_depth: u32,
        budget: &mut usize,
        mut stop: impl FnMut(NodeId) -> bool,
    ) -> bool {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.queue.clear();
        self.stamp[source as usize] = self.epoch;
        self.dist[source as usize] = 0;
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            if stop(v) {
                return true;
            }
            let d = self.dist[v as usize];
            if d >= max_depth {
                continue;
            }
            for &w in g.neighbors(v) {
                if self.stamp[w as usize] != self.epoch && admitted(filter, w) {
                    self.stamp[w as usize] = self.epoch;
                    self.dist[w as usize] = d + 1;
                    self.queue.push_back(w);
                }
            }
        }
        false
    }

    #[inline]
    pub(crate) fn distance(&self, v: NodeId) -> Option<u32> {
        (self.stamp[v as usize] == self.epoch).then(|| self.dist[v as usize])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceConfig {
    /// Sets up to this size get exact all-pairs means.
    pub exact_threshold: usize,
    /// BFS sources drawn (without replacement) for larger sets.
    pub sample_sources: usize,
    pub seed: u64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self {
            exact_threshold: 1000,
            sample_sources: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanDistance {
    pub mean_distance: f64,
    pub exact: bool,
}

/// Mean hop distance between distinct nodes of a connected node set.
pub fn average_distance(g: &Graph, set: &NodeSet, config: &DistanceConfig) -> Result<MeanDistance> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = set.len();
    if n == 1 {
        return Ok(MeanDistance {
            mean_distance: 0.0,
            exact: true,
        });
    }
    let exact = n <= config.exact_threshold || config.sample_sources >= n;
    let sources: Vec<NodeId> = if exact {
        set.members().to_vec()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut picked: Vec<NodeId> = sample(&mut rng, n, config.sample_sources.max(1))
            .into_iter()
            .map(|i| set.members()[i])
            .collect();
        picked.sort_unstable();
        picked
    };

    let per_source: Vec<Option<u64>> = sources
        .par_chunks(16)
        .flat_map_iter(|chunk| {
            let mut bfs = Bfs::new(g.node_count());
            chunk
                .iter()
                .map(|&s| {
                    if bfs.run(g, s, Some(set), u32::MAX).len() != n {
                        return None;
                    }
                    Some(bfs.visited.iter().map(|&v| bfs.dist[v as usize] as u64).sum())
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let mut total = 0u64;
    for t in per_source {
        total += t.ok_or(Error::NotConnected)?;
    }
    let pairs = sources.len() as f64 * (n - 1) as f64;
    Ok(MeanDistance {
        mean_distance: total as f64 / pairs,
        exact,
    })
}

/// Exact diameter of the subgraph induced by a connected node set.
pub fn diameter(g: &Graph, set: &NodeSet) -> Result<u32> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut bfs = Bfs::new(g.node_count());
    let mut best = 0;
    for s in set.iter() {
        let visited = bfs.run(g, s, Some(set), u32::MAX);
        if visited.len() != set.len() {
            return Err(Error::NotConnected);
        }
        let last = *visited.last().unwrap();
        best = best.max(bfs.dist[last as usize]);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::from_edges(n, edges).0
    }

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        graph(n, &e)
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                e.push((i, j));
            }
        }
        graph(n, &e)
    }

    #[test]
    fn components_triangle_plus_edge() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]);
        let p = connected_components(&g, None);
        assert_eq!(p.sizes, vec![3, 2]);
        assert_eq!(p.count, 2);
        assert_eq!(p.component_id[4], Some(1));
    }

    #[test]
    fn components_of_k5() {
        assert_eq!(connected_components(&complete(5), None).sizes, vec![5]);
    }

    #[test]
    fn components_with_filter() {
        let g = path(3);
        let f = NodeSet::from_nodes(3, [0, 2]);
        let p = connected_components(&g, Some(&f));
        assert_eq!(p.sizes, vec![1, 1]);
        assert_eq!(p.component_id, vec![Some(0), None, Some(1)]);
        let empty = NodeSet::empty(3);
        assert_eq!(connected_components(&g, Some(&empty)).count, 0);
    }

    #[test]
    fn component_ties_go_to_smallest_member() {
        // {0,3} and {1,2} both size 2; {0,3} holds node 0
        let g = graph(4, &[(0, 3), (1, 2)]);
        let p = connected_components(&g, None);
        assert_eq!(p.component_id, vec![Some(0), Some(1), Some(1), Some(0)]);
    }

    #[test]
    fn bfs_examples() {
        let d = bfs_distances(&path(4), 0, None).unwrap();
        assert_eq!(d, vec![Some(0), Some(1), Some(2), Some(3)]);
        let d = bfs_distances(&complete(5), 3, None).unwrap();
        assert_eq!(d, vec![Some(1), Some(1), Some(1), Some(0), Some(1)]);
        let g = graph(4, &[(0, 1), (2, 3)]);
        let d = bfs_distances(&g, 0, None).unwrap();
        assert_eq!(d, vec![Some(0), Some(1), None, None]);
    }

    #[test]
    fn bfs_source_errors() {
        let g = path(3);
        assert!(bfs_distances(&g, 7, None).is_err());
        let f = NodeSet::from_nodes(3, [0, 1]);
        assert!(bfs_distances(&g, 2, Some(&f)).is_err());
    }

    #[test]
    fn average_distance_small() {
        let cfg = DistanceConfig::default();
        let m = average_distance(&path(4), &NodeSet::all(4), &cfg).unwrap();
        assert!((m.mean_distance - 10.0 / 6.0).abs() < 1e-12);
        assert!(m.exact);
        let m = average_distance(&complete(5), &NodeSet::all(5), &cfg).unwrap();
        assert_eq!(m.mean_distance, 1.0);
    }

    #[test]
    fn average_distance_rejects_disconnected() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        let r = average_distance(&g, &NodeSet::all(4), &DistanceConfig::default());
        assert!(matches!(r, Err(Error::NotConnected)));
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&complete(5), &NodeSet::all(5)).unwrap(), 1);
        assert_eq!(diameter(&path(4), &NodeSet::all(4)).unwrap(), 3);
        let c6 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert_eq!(diameter(&c6, &NodeSet::all(6)).unwrap(), 3);
        let g = graph(4, &[(0, 1), (2, 3)]);
        assert!(diameter(&g, &NodeSet::all(4)).is_err());
    }
}
