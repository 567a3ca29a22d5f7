// SPDX-License-Identifier: Apache-2.0

//! Three-way split of a network into nucleus, peer-connected component and
//! isolated component.
//!
//! * nucleus: the k_max-shell;
//! * peer-connected: the largest connected component of the
//!   (k_max - 1)-crust;
//! * isolated: every other crust node. These reach the rest of the graph
//!   only through the nucleus.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{compare_labels, Graph, NodeSet};
use crate::kshell::{k_crust, ShellAssignment};
use crate::traversal::{connected_components, diameter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedusaPartition {
    pub nucleus: NodeSet,
    pub peer_connected: NodeSet,
    pub isolated: NodeSet,
    pub k_max: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IsolatedBreakdown {
    /// Singleton clusters whose original degree is 1.
    pub leaves: usize,
    /// Singleton clusters with two or more links, all into the nucleus.
    pub direct_multilink: usize,
    /// Nodes in clusters of two or more.
    pub small_clusters: usize,
    /// Singleton clusters with no links at all (shell 0).
    pub detached: usize,
    /// Cluster size -> number of clusters of that size.
    pub cluster_size_histogram: BTreeMap<usize, usize>,
    pub max_cluster_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NucleusStats {
    pub size: usize,
    /// Fraction of nucleus pairs joined by an edge (0 for fewer than 2 nodes).
    pub internal_edge_density: f64,
    /// `None` when the nucleus subgraph is disconnected.
    pub diameter: Option<u32>,
    pub mean_internal_degree_fraction: f64,
    pub degree_min: usize,
    pub degree_max: usize,
}

pub fn classify(g: &Graph, sa: &ShellAssignment) -> MedusaPartition {
    let n = g.node_count();
    let nucleus = sa.shell_members(sa.k_max);
    if sa.k_max == 0 {
        return MedusaPartition {
            nucleus,
            peer_connected: NodeSet::empty(n),
            isolated: NodeSet::empty(n),
            k_max: 0,
        };
    }
    let crust = k_crust(sa, sa.k_max - 1);
    let parts = connected_components(g, Some(&crust));
    let peer_connected = if parts.count > 0 {
        parts.members(0)
    } else {
        NodeSet::empty(n)
    };
    let isolated = NodeSet::from_mask(
        (0..n)
            .map(|v| crust.contains(v as u32) && !peer_connected.contains(v as u32))
            .collect(),
    );
    MedusaPartition {
        nucleus,
        peer_connected,
        isolated,
        k_max: sa.k_max,
    }
}

pub fn isolated_breakdown(g: &Graph, mp: &MedusaPartition) -> IsolatedBreakdown {
    let mut out = IsolatedBreakdown::default();
    if mp.isolated.is_empty() {
        return out;
    }
    let parts = connected_components(g, Some(&mp.isolated));
    for &size in &parts.sizes {
        *out.cluster_size_histogram.entry(size).or_insert(0) += 1;
        if size >= 2 {
            out.small_clusters += size;
        }
    }
    for v in mp.isolated.iter() {
        let c = parts.component_id[v as usize].expect("isolated node has a cluster");
        if parts.sizes[c as usize] == 1 {
            match g.degree(v) {
                0 => out.detached += 1,
                1 => out.leaves += 1,
                _ => out.direct_multilink += 1,
            }
        }
    }
    out.max_cluster_size = parts.largest();
    out
}

pub fn nucleus_stats(g: &Graph, mp: &MedusaPartition) -> NucleusStats {
    let size = mp.nucleus.len();
    let mut internal_half_edges = 0usize;
    let mut degree_min = usize::MAX;
    let mut degree_max = 0usize;
    let mut fraction_sum = 0.0;
    for v in mp.nucleus.iter() {
        let inside = g
            .neighbors(v)
            .iter()
            .filter(|&&w| mp.nucleus.contains(w))
            .count();
        internal_half_edges += inside;
        if size > 1 {
            fraction_sum += inside as f64 / (size - 1) as f64;
        }
        degree_min = degree_min.min(g.degree(v));
        degree_max = degree_max.max(g.degree(v));
    }
    let pairs = size * size.saturating_sub(1) / 2;
    NucleusStats {
        size,
        internal_edge_density: if pairs > 0 {
            (internal_half_edges / 2) as f64 / pairs as f64
        } else {
            0.0
        },
        diameter: diameter(g, &mp.nucleus).ok(),
        mean_internal_degree_fraction: if size > 1 {
            fraction_sum / size as f64
        } else {
            0.0
        },
        degree_min: if size > 0 { degree_min } else { 0 },
        degree_max,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MedusaReport {
    pub k_max: u32,
    pub nucleus: NucleusSection,
    pub peer_connected: PeerSection,
    pub isolated: IsolatedSection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NucleusSection {
    pub size: usize,
    pub members: Vec<String>,
    pub density: f64,
    pub diameter: Option<u32>,
    pub degree_min: usize,
    pub degree_max: usize,
    pub mean_internal_degree_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeerSection {
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsolatedSection {
    pub size: usize,
    pub leaves: usize,
    pub direct_multilink: usize,
    pub small_clusters: usize,
    pub detached: usize,
    pub max_cluster_size: usize,
    pub histogram: BTreeMap<usize, usize>,
}

impl MedusaReport {
    pub fn build(g: &Graph, mp: &MedusaPartition) -> Self {
        let stats = nucleus_stats(g, mp);
        let iso = isolated_breakdown(g, mp);
        let mut members: Vec<String> = mp.nucleus.iter().map(|v| g.label(v).to_owned()).collect();
        members.sort_by(|a, b| compare_labels(a, b));
        MedusaReport {
            k_max: mp.k_max,
            nucleus: NucleusSection {
                size: stats.size,
                members,
                density: stats.internal_edge_density,
                diameter: stats.diameter,
                degree_min: stats.degree_min,
                degree_max: stats.degree_max,
                mean_internal_degree_fraction: stats.mean_internal_degree_fraction,
            },
            peer_connected: PeerSection {
                size: mp.peer_connected.len(),
            },
            isolated: IsolatedSection {
                size: mp.isolated.len(),
                leaves: iso.leaves,
                direct_multilink: iso.direct_multilink,
                small_clusters: iso.small_clusters,
                detached: iso.detached,
                max_cluster_size: iso.max_cluster_size,
                histogram: iso.cluster_size_histogram,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kshell::decompose;

    fn complete_edges(n: u32) -> Vec<(u32, u32)> {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        e
    }

    /// K5 on 0..5; a=5 linked to 0 and 1; path a-b-c with b=6, c=7; pendant
    /// d=8 on node 2; optional e=9 with links to 3 and 4.
    fn medusa_example(with_e: bool) -> Graph {
        let mut e = complete_edges(5);
        e.extend([(5, 0), (5, 1), (5, 6), (6, 7), (8, 2)]);
        let mut n = 9;
        if with_e {
            e.extend([(9, 3), (9, 4)]);
            n = 10;
        }
        Graph::from_edges(n, &e).0
    }

    #[test]
    fn classify_k5_with_tendrils() {
        let g = medusa_example(false);
        let sa = decompose(&g);
        assert_eq!(sa.shell_index, vec![4, 4, 4, 4, 4, 2, 1, 1, 1]);
        let mp = classify(&g, &sa);
        assert_eq!(mp.nucleus.members(), &[0, 1, 2, 3, 4]);
        assert_eq!(mp.peer_connected.members(), &[5, 6, 7]);
        assert_eq!(mp.isolated.members(), &[8]);
    }

    #[test]
    fn classify_k4_pendant_degenerate() {
        let mut e = complete_edges(4);
        e.push((0, 4));
        let g = Graph::from_edges(5, &e).0;
        let mp = classify(&g, &decompose(&g));
        assert_eq!(mp.nucleus.members(), &[0, 1, 2, 3]);
        assert_eq!(mp.peer_connected.members(), &[4]);
        assert!(mp.isolated.is_empty());
    }

    #[test]
    fn classify_k5_alone() {
        let g = Graph::from_edges(5, &complete_edges(5)).0;
        let mp = classify(&g, &decompose(&g));
        assert_eq!(mp.nucleus.len(), 5);
        assert!(mp.peer_connected.is_empty());
        assert!(mp.isolated.is_empty());
    }

    #[test]
    fn breakdown_leaf_and_multilink() {
        let g = medusa_example(true);
        let mp = classify(&g, &decompose(&g));
        assert_eq!(mp.isolated.members(), &[8, 9]);
        let b = isolated_breakdown(&g, &mp);
        assert_eq!((b.leaves, b.direct_multilink, b.small_clusters), (1, 1, 0));
        assert_eq!(b.cluster_size_histogram, BTreeMap::from([(1, 2)]));
        assert_eq!(b.max_cluster_size, 1);
    }

    #[test]
    fn breakdown_small_cluster() {
        // f=9 links to nucleus node 3 and to g=10, which links to node 4.
        let mut e = complete_edges(5);
        e.extend([(5, 0), (5, 1), (5, 6), (6, 7), (9, 3), (9, 10), (10, 4)]);
        let g = Graph::from_edges(11, &e).0;
        let sa = decompose(&g);
        let mp = classify(&g, &sa);
        // node 8 has no links: shell 0, a detached singleton
        assert_eq!(mp.isolated.members(), &[8, 9, 10]);
        let b = isolated_breakdown(&g, &mp);
        assert_eq!(b.small_clusters, 2);
        assert_eq!(b.detached, 1);
        assert_eq!(b.cluster_size_histogram, BTreeMap::from([(1, 1), (2, 1)]));
    }

    #[test]
    fn empty_isolated_breakdown() {
        let g = Graph::from_edges(5, &complete_edges(5)).0;
        let mp = classify(&g, &decompose(&g));
        assert_eq!(isolated_breakdown(&g, &mp), IsolatedBreakdown::default());
    }

    #[test]
    fn nucleus_stats_complete_and_cycle() {
        let g = Graph::from_edges(5, &complete_edges(5)).0;
        let mp = classify(&g, &decompose(&g));
        let s = nucleus_stats(&g, &mp);
        assert_eq!(s.size, 5);
        assert_eq!(s.internal_edge_density, 1.0);
        assert_eq!(s.diameter, Some(1));
        assert_eq!(s.mean_internal_degree_fraction, 1.0);
        assert_eq!((s.degree_min, s.degree_max), (4, 4));

        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).0;
        let mp = classify(&c5, &decompose(&c5));
        let s = nucleus_stats(&c5, &mp);
        assert_eq!(s.internal_edge_density, 0.5);
        assert_eq!(s.diameter, Some(2));
    }

    #[test]
    fn disconnected_nucleus_has_no_diameter() {
        // two disjoint triangles: both are the 2-shell
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).0;
        let mp = classify(&g, &decompose(&g));
        assert_eq!(mp.nucleus.len(), 6);
        let s = nucleus_stats(&g, &mp);
        assert_eq!(s.diameter, None);
        assert!((s.internal_edge_density - 6.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn report_json_shape() {
        let g = medusa_example(true);
        let mp = classify(&g, &decompose(&g));
        let v = serde_json::to_value(MedusaReport::build(&g, &mp)).unwrap();
        assert_eq!(v["k_max"], 4);
        assert_eq!(v["nucleus"]["members"], serde_json::json!(["0", "1", "2", "3", "4"]));
        assert_eq!(v["peer_connected"]["size"], 3);
        assert_eq!(v["isolated"]["histogram"]["1"], 2);
    }
}
