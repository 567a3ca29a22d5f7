// SPDX-License-Identifier: Apache-2.0

//! Box covering, box-counting dimension, renormalization, finite-cluster
//! statistics of crusts and per-shell contributions to the peer-connected
//! component.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_exponential, fit_histogram, fit_power_law, Binning, ExponentialFit, PowerLawFit};
use crate::graph::{Graph, NodeId, NodeSet};
use crate::kshell::{k_crust, ShellAssignment};
use crate::medusa::MedusaPartition;
use crate::traversal::{connected_components, Bfs};

/// A partition of a node set into boxes whose members are pairwise closer
/// than `box_size` hops, measured inside the covered subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxCovering {
    pub box_size: u32,
    pub boxes: Vec<Vec<NodeId>>,
    pub box_count: usize,
}

/// Candidate probes that may fail in a row before a box is closed.
pub const MAX_CONSECUTIVE_MISSES: usize = 32;

/// Node visits the probes of one box may spend, per node of the seed's
/// `l_b - 1` ball (floored at [`MIN_PROBE_BUDGET`]). Keeps boxes on large
/// small-world sets, where every ball is most of the set, linear in the ball.
pub const PROBE_BUDGET_PER_BALL_NODE: usize = 8;
pub const MIN_PROBE_BUDGET: usize = 1 << 16;

/// Greedy random-sequential box covering.
///
/// Seeds are visited in a shuffled order. Each uncovered seed opens a box
/// holding every uncovered node within `(l_b - 1) / 2` hops of it; those are
/// pairwise closer than `l_b` through the seed. The remaining uncovered nodes
/// within `l_b - 1` hops are then tried nearest-first (ties: fewest uncovered
/// neighbours, then BFS order) and join only if every member is within
/// `l_b - 1` hops of them. A box stops growing after
/// [`MAX_CONSECUTIVE_MISSES`] candidates in a row fail to join, or once its
/// probes exhaust their visit budget.
pub fn box_cover(g: &Graph, set: &NodeSet, l_b: u32, seed: u64) -> Result<BoxCovering> {
    if l_b == 0 {
        return Err(Error::InvalidArgument("box size must be at least 1".into()));
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.node_count();
    if l_b == 1 {
        return Ok(BoxCovering {
            box_size: 1,
            boxes: set.iter().map(|v| vec![v]).collect(),
            box_count: set.len(),
        });
    }

    let reach = l_b - 1;
    let core_radius = reach / 2;
    let mut order: Vec<NodeId> = set.members().to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut covered = vec![false; n];
    let mut uncovered_degree: Vec<u32> = vec![0; n];
    for v in set.iter() {
        uncovered_degree[v as usize] = g.neighbors(v).iter().filter(|&&w| set.contains(w)).count() as u32;
    }
    // box_stamp[v] == box id marks v as a member of the box being grown.
    let mut box_stamp = vec![u32::MAX; n];
    let mut bfs = Bfs::new(n);
    let mut probe = Bfs::new(n);
    let mut boxes: Vec<Vec<NodeId>> = Vec::new();

    for &s in &order {
        if covered[s as usize] {
            continue;
        }
        let box_id = boxes.len() as u32;
        let ball = bfs.run(g, s, Some(set), reach).to_vec();
        // Members in nondecreasing seed distance, with those distances.
        let mut members = Vec::new();
        let mut member_dist = Vec::new();
        let mut candidates: Vec<(u32, u32, usize, NodeId)> = Vec::new();
        for (i, &v) in ball.iter().enumerate() {
            if covered[v as usize] {
                continue;
            }
            let d = bfs.distance(v).unwrap();
            if d <= core_radius {
                box_stamp[v as usize] = box_id;
                members.push(v);
                member_dist.push(d);
            } else {
                candidates.push((d, uncovered_degree[v as usize], i, v));
            }
        }
        candidates.sort_unstable();

        let mut misses = 0;
        let mut budget = (PROBE_BUDGET_PER_BALL_NODE * ball.len()).max(MIN_PROBE_BUDGET);
        for &(dc, _, _, c) in &candidates {
            if misses == MAX_CONSECUTIVE_MISSES || budget == 0 {
                break;
            }
            // Members within reach - dc of the seed are within reach of c
            // through the seed; only the rest need a probe.
            let near = member_dist.partition_point(|&d| d + dc <= reach);
            let needed = members.len() - near;
            let fits = needed == 0 || {
                let mut found = 0;
                probe.search(g, c, Some(set), reach, &mut budget, |v| {
                    if box_stamp[v as usize] == box_id && bfs.distance(v).unwrap() + dc > reach {
                        found += 1;
                    }
                    found == needed
                })
            };
            if fits {
                box_stamp[c as usize] = box_id;
                members.push(c);
                member_dist.push(dc);
                misses = 0;
            } else {
                misses += 1;
            }
        }

        for &m in &members {
            covered[m as usize] = true;
        }
        for &m in &members {
            for &w in g.neighbors(m) {
                if set.contains(w) {
                    uncovered_degree[w as usize] -= 1;
                }
            }
        }
        members.sort_unstable();
        boxes.push(members);
    }

    Ok(BoxCovering {
        box_size: l_b,
        box_count: boxes.len(),
        boxes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    PowerLaw,
    Exponential,
    Crossover,
}

/// r² margin below which neither model is preferred.
pub const CROSSOVER_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCurvePoint {
    pub box_size: u32,
    pub mean_boxes: f64,
    pub std_boxes: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractalDimension {
    pub curve: Vec<BoxCurvePoint>,
    /// Log-log fit of N_B against l_B; the exponent is the box dimension.
    pub fit: PowerLawFit,
    pub exponential_fit: ExponentialFit,
    pub regime: Regime,
}

impl FractalDimension {
    pub fn dimension(&self) -> f64 {
        self.fit.exponent
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("l_B,mean_boxes,std_boxes,trials\n");
        for p in &self.curve {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6},{}",
                p.box_size, p.mean_boxes, p.std_boxes, p.trials
            );
        }
        out
    }
}

/// Fits both a power law and an exponential to a box-count curve and picks
/// the regime with the better r².
pub fn classify_box_curve(curve: &[(f64, f64)]) -> Result<(PowerLawFit, ExponentialFit, Regime)> {
    let power = fit_power_law(curve, Binning::Linear)?;
    let expo = fit_exponential(curve)?;
    let regime = if (power.r_squared - expo.r_squared).abs() < CROSSOVER_MARGIN {
        Regime::Crossover
    } else if power.r_squared > expo.r_squared {
        Regime::PowerLaw
    } else {
        Regime::Exponential
    };
    Ok((power, expo, regime))
}

fn trial_seed(seed: u64, l_b: u32, trial: usize) -> u64 {
    let mut x = seed ^ ((l_b as u64) << 32) ^ trial as u64;
    // splitmix64 finalizer
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Box-counting dimension of the subgraph induced by `set`.
pub fn fractal_dimension(
    g: &Graph,
    set: &NodeSet,
    l_range: &[u32],
    trials: usize,
    seed: u64,
) -> Result<FractalDimension> {
    if set.len() < 10 {
        return Err(Error::InsufficientForFit(format!(
            "node set of {} nodes, need at least 10",
            set.len()
        )));
    }
    if l_range.len() < 3 {
        return Err(Error::InsufficientForFit("need at least 3 box sizes".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let jobs: Vec<(u32, usize)> = l_range
        .iter()
        .flat_map(|&l| (0..trials).map(move |t| (l, t)))
        .collect();
    let counts: Vec<usize> = jobs
        .par_iter()
        .map(|&(l, t)| box_cover(g, set, l, trial_seed(seed, l, t)).map(|c| c.box_count))
        .collect::<Result<_>>()?;

    let mut curve = Vec::with_capacity(l_range.len());
    for (i, &l) in l_range.iter().enumerate() {
        let xs: Vec<f64> = counts[i * trials..(i + 1) * trials]
            .iter()
            .map(|&c| c as f64)
            .collect();
        let mean = xs.iter().sum::<f64>() / trials as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / trials as f64;
        curve.push(BoxCurvePoint {
            box_size: l,
            mean_boxes: mean,
            std_boxes: var.sqrt(),
            trials,
        });
    }
    let points: Vec<(f64, f64)> = curve.iter().map(|p| (p.box_size as f64, p.mean_boxes)).collect();
    let (fit, exponential_fit, regime) = classify_box_curve(&points)?;
    Ok(FractalDimension {
        curve,
        fit,
        exponential_fit,
        regime,
    })
}

/// Box-renormalized graph: one supernode per box, linked when any edge
/// crosses between the two boxes. Supernode `i` is box `i` of the covering.
pub fn renormalize(g: &Graph, set: &NodeSet, l_b: u32, seed: u64) -> Result<Graph> {
    let cover = box_cover(g, set, l_b, seed)?;
    Ok(renormalize_with(g, set, &cover))
}

pub fn renormalize_with(g: &Graph, set: &NodeSet, cover: &BoxCovering) -> Graph {
    let mut box_of = vec![u32::MAX; g.node_count()];
    for (i, b) in cover.boxes.iter().enumerate() {
        for &v in b {
            box_of[v as usize] = i as u32;
        }
    }
    let edges: Vec<(NodeId, NodeId)> = g
        .edges()
        .filter(|&(u, v)| set.contains(u) && set.contains(v))
        .map(|(u, v)| (box_of[u as usize], box_of[v as usize]))
        .filter(|(a, b)| a != b)
        .collect();
    Graph::from_edges(cover.box_count, &edges).0
}

/// Kolmogorov-Smirnov distance between the degree distributions of two
/// graphs after rescaling each degree by its graph's mean degree.
pub fn degree_distribution_ks(a: &Graph, b: &Graph) -> f64 {
    fn scaled(g: &Graph) -> Vec<f64> {
        let mean = 2.0 * g.edge_count() as f64 / g.node_count().max(1) as f64;
        let mut v: Vec<f64> = g
            .nodes()
            .map(|u| g.degree(u) as f64 / if mean > 0.0 { mean } else { 1.0 })
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
    let xa = scaled(a);
    let xb = scaled(b);
    if xa.is_empty() || xb.is_empty() {
        return 1.0;
    }
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = 0.0f64;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        let fa = i as f64 / xa.len() as f64;
        let fb = j as f64 / xb.len() as f64;
        best = best.max((fa - fb).abs());
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterDistribution {
    pub k: u32,
    /// Cluster size -> number of finite clusters of that size.
    pub histogram: BTreeMap<usize, usize>,
    pub finite_clusters: usize,
    pub largest_excluded: usize,
    /// Present when at least 3 distinct sizes exist. Exponent is tau.
    pub fit: Option<PowerLawFit>,
}

impl ClusterDistribution {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,count,probability\n");
        for (&s, &c) in &self.histogram {
            let _ = writeln!(out, "{},{},{:.9}", s, c, c as f64 / self.finite_clusters as f64);
        }
        out
    }
}

/// Octave-spaced bins covering `1..=max_size`, at least 3.
pub fn octave_bins(max_size: usize) -> usize {
    ((max_size as f64 + 1.0).log2().ceil() as usize).max(3)
}

/// Size distribution of the finite clusters of the k-crust: every
/// component except the single largest one.
pub fn cluster_size_distribution(g: &Graph, sa: &ShellAssignment, k: u32) -> Result<ClusterDistribution> {
    let crust = k_crust(sa, k);
    let parts = connected_components(g, Some(&crust));
    if parts.count < 2 {
        return Err(Error::InvalidArgument(format!(
            "{k}-crust has {} component(s), need at least 2",
            parts.count
        )));
    }
    let mut histogram = BTreeMap::new();
    for &s in &parts.sizes[1..] {
        *histogram.entry(s).or_insert(0) += 1;
    }
    let fit = if histogram.len() >= 3 {
        let max = *histogram.keys().next_back().unwrap();
        fit_histogram(&histogram, octave_bins(max)).ok()
    } else {
        None
    };
    Ok(ClusterDistribution {
        k,
        finite_clusters: parts.count - 1,
        largest_excluded: parts.largest(),
        histogram,
        fit,
    })
}

/// r² under which a shell-contribution fit is flagged as poor.
pub const POOR_FIT_R2: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellContribution {
    /// Shell index -> number of peer-connected nodes in that shell.
    pub counts: BTreeMap<u32, usize>,
    pub fit: Option<PowerLawFit>,
    pub poor_fit: bool,
}

/// Per-shell membership of the peer-connected component.
pub fn shell_contribution(mp: &MedusaPartition, sa: &ShellAssignment) -> Result<ShellContribution> {
    if mp.peer_connected.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut counts = BTreeMap::new();
    for v in mp.peer_connected.iter() {
        *counts.entry(sa.shell(v)).or_insert(0) += 1;
    }
    Ok(shell_contribution_from_counts(counts))
}

/// Fits count against shell index from the most populated shell onwards
/// (the decaying range). Shell 0 cannot sit on a log axis and is skipped.
pub fn shell_contribution_from_counts(counts: BTreeMap<u32, usize>) -> ShellContribution {
    let points: Vec<(f64, f64)> = counts
        .iter()
        .filter(|(&k, &c)| k > 0 && c > 0)
        .map(|(&k, &c)| (k as f64, c as f64))
        .collect();
    let peak = points
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, p)| match best {
            Some((_, y)) if y >= p.1 => best,
            _ => Some((i, p.1)),
        })
        .map_or(0, |b| b.0);
    let fit = fit_power_law(&points[peak.min(points.len())..], Binning::Linear).ok();
    let poor_fit = fit.map_or(true, |f| f.r_squared < POOR_FIT_R2);
    ShellContribution {
        counts,
        fit,
        poor_fit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traversal::bfs_distances;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::from_edges(n, edges).0
    }

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        graph(n, &e)
    }

    fn assert_valid_cover(g: &Graph, set: &NodeSet, c: &BoxCovering) {
        let mut seen = vec![0u32; g.node_count()];
        for b in &c.boxes {
            for &v in b {
                seen[v as usize] += 1;
                let d = bfs_distances(g, v, Some(set)).unwrap();
                for &w in b {
                    assert!(d[w as usize].unwrap() < c.box_size, "box too wide");
                }
            }
        }
        for v in g.nodes() {
            assert_eq!(seen[v as usize], set.contains(v) as u32);
        }
        assert_eq!(c.box_count, c.boxes.len());
    }

    #[test]
    fn unit_boxes_are_singletons() {
        let g = path(6);
        let c = box_cover(&g, &NodeSet::all(6), 1, 3).unwrap();
        assert_eq!(c.box_count, 6);
    }

    #[test]
    fn path_of_four_needs_two_boxes_from_any_seed() {
        let g = path(4);
        for seed in 0..50 {
            let c = box_cover(&g, &NodeSet::all(4), 2, seed).unwrap();
            assert_eq!(c.box_count, 2, "seed {seed}");
            assert_valid_cover(&g, &NodeSet::all(4), &c);
        }
    }

    #[test]
    fn wide_boxes_cover_everything_at_once() {
        let g = path(7);
        let c = box_cover(&g, &NodeSet::all(7), 7, 1).unwrap();
        assert_eq!(c.box_count, 1);
    }

    #[test]
    fn distances_stay_inside_the_set() {
        // cycle of 6; dropping node 0 leaves a path 1..5 where 1 and 5 are 4 apart
        let e: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let g = graph(6, &e);
        let set = NodeSet::from_nodes(6, [1, 2, 3, 4, 5]);
        for seed in 0..20 {
            let c = box_cover(&g, &set, 3, seed).unwrap();
            assert_valid_cover(&g, &set, &c);
        }
    }

    #[test]
    fn bad_arguments() {
        let g = path(3);
        assert!(box_cover(&g, &NodeSet::all(3), 0, 0).is_err());
        assert!(box_cover(&g, &NodeSet::empty(3), 2, 0).is_err());
        assert!(fractal_dimension(&g, &NodeSet::all(3), &[1, 2, 3], 1, 0).is_err());
    }

    #[test]
    fn synthetic_power_law_curve() {
        let curve: Vec<_> = [1.0, 2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&l: &f64| (l, 100.0 * l.powi(-2)))
            .collect();
        let (p, _, regime) = classify_box_curve(&curve).unwrap();
        assert!((p.exponent - 2.0).abs() < 1e-12);
        assert_eq!(regime, Regime::PowerLaw);
    }

    #[test]
    fn synthetic_exponential_curve() {
        let curve: Vec<_> = (1..=10).map(|l| (l as f64, 100.0 * (-(l as f64)).exp())).collect();
        let (_, e, regime) = classify_box_curve(&curve).unwrap();
        assert!((e.rate - 1.0).abs() < 1e-12);
        assert_eq!(regime, Regime::Exponential);
    }

    #[test]
    fn renormalize_path() {
        let g = path(4);
        let r = renormalize(&g, &NodeSet::all(4), 2, 5).unwrap();
        assert_eq!((r.node_count(), r.edge_count()), (2, 1));
        let r = renormalize(&g, &NodeSet::all(4), 1, 5).unwrap();
        assert_eq!((r.node_count(), r.edge_count()), (4, 3));
        let r = renormalize(&g, &NodeSet::all(4), 9, 5).unwrap();
        assert_eq!((r.node_count(), r.edge_count()), (1, 0));
    }

    #[test]
    fn ks_of_identical_graphs_is_zero() {
        let g = path(10);
        assert_eq!(degree_distribution_ks(&g, &g), 0.0);
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(degree_distribution_ks(&g, &star) > 0.0);
    }

    #[test]
    fn finite_cluster_histogram() {
        // components of sizes 9,4,2,2,1,1,1 as paths, all shell <= 1
        let sizes = [9usize, 4, 2, 2, 1, 1, 1];
        let mut edges = Vec::new();
        let mut next = 0u32;
        for &s in &sizes {
            for i in 0..s as u32 - 1 {
                edges.push((next + i, next + i + 1));
            }
            next += s as u32;
        }
        let g = graph(next as usize, &edges);
        let sa = crate::kshell::decompose(&g);
        let d = cluster_size_distribution(&g, &sa, 1).unwrap();
        assert_eq!(d.histogram, BTreeMap::from([(1, 3), (2, 2), (4, 1)]));
        assert_eq!(d.largest_excluded, 9);
        assert_eq!(d.finite_clusters, 6);
        assert!(d.fit.is_some());
    }

    #[test]
    fn single_component_crust_is_rejected() {
        let g = path(5);
        let sa = crate::kshell::decompose(&g);
        assert!(cluster_size_distribution(&g, &sa, 1).is_err());
    }

    #[test]
    fn shell_contribution_constructed_law() {
        let counts = BTreeMap::from([(1, 800), (2, 132), (3, 46)]);
        let sc = shell_contribution_from_counts(counts);
        let f = sc.fit.unwrap();
        assert!((f.exponent - 2.6).abs() < 0.01, "{f:?}");
        assert!(!sc.poor_fit);
    }

    #[test]
    fn shell_contribution_uniform() {
        let counts = BTreeMap::from([(1, 50), (2, 50), (3, 50), (4, 50)]);
        let sc = shell_contribution_from_counts(counts);
        assert!(sc.fit.unwrap().exponent.abs() < 1e-12);
        assert!(sc.poor_fit);
        let sc = shell_contribution_from_counts(BTreeMap::from([(1, 5), (2, 3)]));
        assert!(sc.fit.is_none());
    }
}
