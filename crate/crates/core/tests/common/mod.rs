// Shared oracles and graph builders for the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use medusa_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
    Graph::from_edges(n, edges).0
}

/// Shell indices by literal repeated deletion: for k = 1, 2, ... keep
/// removing any remaining node of degree <= k. Isolated nodes get 0.
pub fn naive_shells(g: &Graph) -> Vec<u32> {
    let n = g.node_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v as u32)).collect();
    let mut shell = vec![0u32; n];
    let mut left = n;
    for v in 0..n {
        if deg[v] == 0 {
            alive[v] = false;
            left -= 1;
        }
    }
    let mut k = 1;
    while left > 0 {
        loop {
            let Some(v) = (0..n).find(|&v| alive[v] && deg[v] <= k) else { break };
            alive[v] = false;
            left -= 1;
            shell[v] = k as u32;
            for &w in g.neighbors(v as u32) {
                if alive[w as usize] {
                    deg[w as usize] -= 1;
                }
            }
        }
        k += 1;
    }
    shell
}

pub fn all_pairs(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.node_count();
    (0..n)
        .map(|s| {
            let mut d = vec![None; n];
            d[s] = Some(0);
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in g.neighbors(v as u32) {
                    if d[w as usize].is_none() {
                        d[w as usize] = Some(d[v].unwrap() + 1);
                        q.push_back(w as usize);
                    }
                }
            }
            d
        })
        .collect()
}

/// Fewest boxes (pairwise distance < l_b) covering all nodes of a graph of
/// at most 16 nodes, by dynamic programming over subsets.
pub fn min_box_count(g: &Graph, l_b: u32) -> usize {
    let n = g.node_count();
    assert!(n <= 16);
    let d = all_pairs(g);
    let close = |a: usize, b: usize| d[a][b].is_some_and(|x| x < l_b);
    let full = (1usize << n) - 1;
    let mut valid = vec![false; full + 1];
    valid[0] = true;
    for s in 1..=full {
        let top = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let rest = s & !(1 << top);
        valid[s] = valid[rest] && (0..n).all(|v| rest & (1 << v) == 0 || close(v, top));
    }
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // boxes containing the lowest node of mask
        let mut sub = rest;
        loop {
            let s = sub | low;
            if valid[s] && best[mask & !s] != usize::MAX {
                best[mask] = best[mask].min(best[mask & !s] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full]
}

pub fn erdos_renyi(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut e = Vec::new();
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    graph(n, &e)
}

pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let e: Vec<_> = (1..n as u32).map(|v| (rng.gen_range(0..v), v)).collect();
    graph(n, &e)
}

/// A random connected graph: a random tree plus extra edges with probability p.
pub fn random_connected(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut e: Vec<_> = (1..n as u32).map(|v| (rng.gen_range(0..v), v)).collect();
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    graph(n, &e)
}

pub fn complete(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            e.push((i, j));
        }
    }
    graph(n, &e)
}

pub fn cycle(n: usize) -> Graph {
    let e: Vec<_> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
    graph(n, &e)
}

pub fn star(leaves: usize) -> Graph {
    let e: Vec<_> = (1..=leaves as u32).map(|i| (0, i)).collect();
    graph(leaves + 1, &e)
}

pub fn path(n: usize) -> Graph {
    let e: Vec<_> = (1..n as u32).map(|i| (i - 1, i)).collect();
    graph(n, &e)
}

/// Nodes reachable from `source` without entering `blocked`.
pub fn reachable_avoiding(g: &Graph, source: u32, blocked: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    seen[source as usize] = true;
    let mut q = VecDeque::from([source]);
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w as usize] && !blocked[w as usize] {
                seen[w as usize] = true;
                q.push_back(w);
            }
        }
    }
    seen
}
