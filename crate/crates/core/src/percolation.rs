// SPDX-License-Identifier: Apache-2.0

//! Crust percolation profile: how the components of the k-crust grow as
//! k increases, and where the giant component emerges.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::Graph;
use crate::kshell::{k_crust, ShellAssignment};
use crate::traversal::{average_distance, connected_components, DistanceConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrustRow {
    pub k: u32,
    pub crust_size: usize,
    pub largest_component: usize,
    pub second_largest: usize,
    pub mean_distance_largest: Option<f64>,
    pub exact_distance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrustProfile {
    /// One row per k in `0..=k_max`.
    pub rows: Vec<CrustRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransitionReport {
    /// Smallest k maximizing the second-largest component; `None` when
    /// every candidate row has no second component.
    pub k_star_second: Option<u32>,
    /// Smallest k maximizing the mean distance in the largest component.
    pub k_star_distance: Option<u32>,
    pub coincide: bool,
    /// The second-largest maximum is attained at exactly one k, strictly
    /// between 0 and k_max.
    pub unique_interior_peak: bool,
}

fn row_seed(seed: u64, k: u32) -> u64 {
    seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Builds the crust profile for `k = 0..=k_max`.
pub fn crust_profile(g: &Graph, sa: &ShellAssignment, config: &DistanceConfig) -> CrustProfile {
    let rows = (0..=sa.k_max)
        .into_par_iter()
        .map(|k| {
            let crust = k_crust(sa, k);
            let parts = connected_components(g, Some(&crust));
            let largest = parts.largest();
            let (mean, exact) = if largest >= 2 {
                let members = parts.members(0);
                let cfg = DistanceConfig {
                    seed: row_seed(config.seed, k),
                    ..*config
                };
                // The largest component is connected by construction.
                let md = average_distance(g, &members, &cfg).expect("component is connected");
                (Some(md.mean_distance), md.exact)
            } else {
                (None, false)
            };
            CrustRow {
                k,
                crust_size: crust.len(),
                largest_component: largest,
                second_largest: parts.second_largest(),
                mean_distance_largest: mean,
                exact_distance: exact,
            }
        })
        .collect();
    CrustProfile { rows }
}

impl CrustProfile {
    pub fn k_max(&self) -> u32 {
        self.rows.last().map_or(0, |r| r.k)
    }

    pub fn row(&self, k: u32) -> Option<&CrustRow> {
        self.rows.get(k as usize)
    }

    /// k values at or above `from` where the largest component shrinks
    /// relative to the previous row.
    pub fn growth_violations(&self, from: u32) -> Vec<u32> {
        self.rows
            .windows(2)
            .filter(|w| w[1].k > from && w[1].largest_component < w[0].largest_component)
            .map(|w| w[1].k)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,crust_size,largest,second_largest,mean_distance,exact\n");
        for r in &self.rows {
            let md = r
                .mean_distance_largest
                .map(|d| format!("{d:.6}"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.k, r.crust_size, r.largest_component, r.second_largest, md, r.exact_distance
            );
        }
        out
    }
}

/// Locates the percolation transition. Only rows `k < k_max` are candidates:
/// the k_max-crust is the whole graph.
pub fn detect_transition(profile: &CrustProfile) -> TransitionReport {
    let candidates = if profile.rows.len() > 1 {
        &profile.rows[..profile.rows.len() - 1]
    } else {
        &profile.rows[..0]
    };

    let mut k_second: Option<(u32, usize)> = None;
    for r in candidates {
        if r.second_largest > 0 && k_second.map_or(true, |(_, best)| r.second_largest > best) {
            k_second = Some((r.k, r.second_largest));
        }
    }
    let mut k_dist: Option<(u32, f64)> = None;
    for r in candidates {
        if let Some(d) = r.mean_distance_largest {
            if k_dist.map_or(true, |(_, best)| d > best) {
                k_dist = Some((r.k, d));
            }
        }
    }

    let unique_interior_peak = match k_second {
        Some((k, best)) => {
            let ties = candidates.iter().filter(|r| r.second_largest == best).count();
            ties == 1 && k > 0 && k < profile.k_max()
        }
        None => false,
    };
    let k_star_second = k_second.map(|p| p.0);
    let k_star_distance = k_dist.map(|p| p.0);
    TransitionReport {
        k_star_second,
        k_star_distance,
        coincide: k_star_second.is_some() && k_star_second == k_star_distance,
        unique_interior_peak,
    }
}
