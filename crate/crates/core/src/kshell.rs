// SPDX-License-Identifier: Apache-2.0

//! k-shell decomposition.
//!
//! Nodes are pruned in rounds: with `k = 1, 2, ...`, every node whose
//! remaining degree is at most `k` is removed (together with its links),
//! repeatedly, and assigned to shell `k`. The shell index of a node equals
//! its core number, which the bucket-queue pass below computes in
//! `O(N + E)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::{compare_labels, Graph, NodeId, NodeSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShellAssignment {
    pub shell_index: Vec<u32>,
    pub k_max: u32,
    /// Occupied shells only.
    pub shell_sizes: BTreeMap<u32, usize>,
}

impl ShellAssignment {
    pub fn node_count(&self) -> usize {
        self.shell_index.len()
    }

    #[inline]
    pub fn shell(&self, v: NodeId) -> u32 {
        self.shell_index[v as usize]
    }

    /// Nodes with shell index exactly `k`.
    pub fn shell_members(&self, k: u32) -> NodeSet {
        NodeSet::from_mask(self.shell_index.iter().map(|&s| s == k).collect())
    }

    /// Shell dump: `node,shell` rows, shell descending then label.
    pub fn to_csv(&self, g: &Graph) -> String {
        let mut rows: Vec<NodeId> = g.nodes().collect();
        rows.sort_by(|&a, &b| {
            self.shell(b)
                .cmp(&self.shell(a))
                .then_with(|| compare_labels(g.label(a), g.label(b)))
        });
        let mut out = String::from("node,shell\n");
        for v in rows {
            let _ = writeln!(out, "{},{}", g.label(v), self.shell(v));
        }
        out
    }
}

/// Assigns every node its shell index.
pub fn decompose(g: &Graph) -> ShellAssignment {
    let n = g.node_count();
    if n == 0 {
        return ShellAssignment {
            shell_index: Vec::new(),
            k_max: 0,
            shell_sizes: BTreeMap::new(),
        };
    }

    let mut deg: Vec<u32> = g.nodes().map(|v| g.degree(v) as u32).collect();
    let max_deg = *deg.iter().max().unwrap() as usize;

    // Counting sort into degree bins: `vert` holds nodes ordered by current
    // degree, `pos` is each node's slot, `bin[d]` the first slot of degree d.
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d as usize] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0 as NodeId; n];
    for v in 0..n {
        let d = deg[v] as usize;
        pos[v] = bin[d];
        vert[bin[d]] = v as NodeId;
        bin[d] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i];
        let dv = deg[v as usize];
        for &u in g.neighbors(v) {
            let du = deg[u as usize];
            if du > dv {
                // Swap u with the first node of its bin, then shrink the bin.
                let pu = pos[u as usize];
                let pw = bin[du as usize];
                let w = vert[pw];
                if u != w {
                    pos[u as usize] = pw;
                    vert[pu] = w;
                    pos[w as usize] = pu;
                    vert[pw] = u;
                }
                bin[du as usize] += 1;
                deg[u as usize] = du - 1;
            }
        }
    }

    let k_max = deg.iter().copied().max().unwrap_or(0);
    let mut shell_sizes = BTreeMap::new();
    for &s in &deg {
        *shell_sizes.entry(s).or_insert(0) += 1;
    }
    ShellAssignment {
        shell_index: deg,
        k_max,
        shell_sizes,
    }
}

/// `{ v : shell(v) >= k }`.
pub fn k_core(sa: &ShellAssignment, k: u32) -> NodeSet {
    NodeSet::from_mask(sa.shell_index.iter().map(|&s| s >= k).collect())
}

/// `{ v : shell(v) <= k }`, the complement of the `(k+1)`-core.
pub fn k_crust(sa: &ShellAssignment, k: u32) -> NodeSet {
    NodeSet::from_mask(sa.shell_index.iter().map(|&s| s <= k).collect())
}
