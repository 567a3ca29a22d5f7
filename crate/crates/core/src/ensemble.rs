// SPDX-License-Identifier: Apache-2.0

//! Seeded scale-free graphs from the erased configuration model, and the
//! experiment measuring how k_max and the nucleus grow with N.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_power_law, Binning, PowerLawFit};
use crate::graph::{Graph, NodeId};
use crate::kshell::decompose;

/// Erased stubs above this fraction are worth a warning.
pub const ERASURE_WARN_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    /// Degree exponent, P(k) ~ k^-gamma.
    pub gamma: f64,
    pub k_min: usize,
    /// Largest target degree; `None` means the natural cutoff
    /// `N^(1/(gamma-1))`, capped at `N - 1`.
    pub cutoff: Option<usize>,
    pub seed: u64,
    pub replicates: usize,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            n: 10_000,
            gamma: 2.1,
            k_min: 2,
            cutoff: None,
            seed: 1,
            replicates: 1,
        }
    }
}

impl EnsembleSpec {
    pub fn effective_cutoff(&self) -> usize {
        match self.cutoff {
            Some(c) => c,
            None => {
                let natural = (self.n as f64).powf(1.0 / (self.gamma - 1.0)).floor() as usize;
                natural.min(self.n.saturating_sub(1))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 2.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidSpec(format!("gamma must exceed 2, got {}", self.gamma)));
        }
        if self.n < 2 {
            return Err(Error::InvalidSpec("need at least 2 nodes".into()));
        }
        let cutoff = self.effective_cutoff();
        if self.k_min < 1 || self.k_min > cutoff || cutoff > self.n - 1 {
            return Err(Error::InvalidSpec(format!(
                "need 1 <= k_min ({}) <= cutoff ({}) <= N-1 ({})",
                self.k_min,
                cutoff,
                self.n - 1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedGraph {
    pub graph: Graph,
    pub stubs: usize,
    pub erased_self_loops: usize,
    pub erased_multi_edges: usize,
}

impl GeneratedGraph {
    /// Fraction of stubs lost to erasure.
    pub fn erased_fraction(&self) -> f64 {
        if self.stubs == 0 {
            return 0.0;
        }
        2.0 * (self.erased_self_loops + self.erased_multi_edges) as f64 / self.stubs as f64
    }

    pub fn erasure_warning(&self) -> bool {
        self.erased_fraction() > ERASURE_WARN_FRACTION
    }
}

/// Inverse-transform sampler over the normalized discrete law
/// `P(k) ∝ k^-gamma` on `k_min..=cutoff`.
struct DegreeSampler {
    k_min: usize,
    cdf: Vec<f64>,
}

impl DegreeSampler {
    fn new(gamma: f64, k_min: usize, cutoff: usize) -> Self {
        let weights: Vec<f64> = (k_min..=cutoff).map(|k| (k as f64).powf(-gamma)).collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total
            })
            .collect();
        *cdf.last_mut().unwrap() = 1.0;
        Self { k_min, cdf }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.k_min + self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }
}

/// Erased configuration model with a power-law degree sequence.
pub fn generate_scale_free(spec: &EnsembleSpec) -> Result<GeneratedGraph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sampler = DegreeSampler::new(spec.gamma, spec.k_min, spec.effective_cutoff());
    let mut degrees: Vec<usize> = (0..spec.n).map(|_| sampler.sample(&mut rng)).collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        let v = rng.gen_range(0..spec.n);
        degrees[v] += 1;
    }
    Ok(configuration_model(&degrees, &mut rng))
}

/// Uniform stub matching for a degree sequence with even sum; self-loops and
/// parallel edges are erased.
pub fn configuration_model<R: Rng>(degrees: &[usize], rng: &mut R) -> GeneratedGraph {
    let mut stubs: Vec<NodeId> = Vec::with_capacity(degrees.iter().sum());
    for (v, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat(v as NodeId).take(d));
    }
    stubs.shuffle(rng);
    let edges: Vec<(NodeId, NodeId)> = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    let (graph, report) = Graph::from_edges(degrees.len(), &edges);
    GeneratedGraph {
        graph,
        stubs: stubs.len(),
        erased_self_loops: report.dropped_self_loops,
        erased_multi_edges: report.merged_duplicates,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub replicate: usize,
    pub k_max: u32,
    pub nucleus_size: usize,
}

/// A growth law fitted on replicate means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    /// Log-log slope; positive means growth with N.
    pub slope: f64,
    pub fit: PowerLawFit,
    /// The quantity does not change with N.
    pub flat: bool,
}

impl GrowthFit {
    fn from_means(points: &[(f64, f64)]) -> Result<Self> {
        let fit = fit_power_law(points, Binning::Linear)?;
        let slope = -fit.exponent;
        Ok(Self {
            slope,
            fit,
            flat: slope.abs() < 1e-12,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingResult {
    pub rows: Vec<ScalingRow>,
    pub k_max_fit: GrowthFit,
    pub nucleus_fit: GrowthFit,
}

impl ScalingResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,replicate,k_max,nucleus_size\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.n, r.replicate, r.k_max, r.nucleus_size);
        }
        out
    }

    /// (N, mean k_max, mean nucleus size) per size, in input order.
    pub fn means(&self) -> Vec<(usize, f64, f64)> {
        replicate_means(&self.rows)
    }
}

fn replicate_means(rows: &[ScalingRow]) -> Vec<(usize, f64, f64)> {
    let mut acc: Vec<(usize, f64, f64, usize)> = Vec::new();
    for r in rows {
        match acc.iter_mut().find(|m| m.0 == r.n) {
            Some(m) => {
                m.1 += r.k_max as f64;
                m.2 += r.nucleus_size as f64;
                m.3 += 1;
            }
            None => acc.push((r.n, r.k_max as f64, r.nucleus_size as f64, 1)),
        }
    }
    acc.into_iter()
        .map(|(n, k, s, c)| (n, k / c as f64, s / c as f64))
        .collect()
}

/// Seed for one (size, replicate) job, independent of scheduling.
pub fn job_seed(base: u64, n: usize, replicate: usize) -> u64 {
    let mut x = base
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((n as u64).rotate_left(21))
        .wrapping_add((replicate as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generates, decomposes and records k_max and nucleus size for every
/// `(N, replicate)`, then fits both against N.
pub fn nucleus_scaling(sizes: &[usize], base: &EnsembleSpec, replicates: usize, seed: u64) -> Result<ScalingResult> {
    nucleus_scaling_with(sizes, replicates, seed, |n, s| {
        let spec = EnsembleSpec {
            n,
            seed: s,
            replicates,
            ..*base
        };
        generate_scale_free(&spec).map(|g| g.graph)
    })
}

/// [`nucleus_scaling`] over an arbitrary seeded graph family.
pub fn nucleus_scaling_with<F>(sizes: &[usize], replicates: usize, seed: u64, generate: F) -> Result<ScalingResult>
where
    F: Fn(usize, u64) -> Result<Graph> + Sync,
{
    if sizes.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 sizes, got {}",
            sizes.len()
        )));
    }
    if replicates == 0 {
        return Err(Error::InvalidArgument("replicates must be at least 1".into()));
    }
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&n| (0..replicates).map(move |r| (n, r)))
        .collect();
    let rows: Vec<ScalingRow> = jobs
        .par_iter()
        .map(|&(n, r)| {
            let g = generate(n, job_seed(seed, n, r))?;
            let sa = decompose(&g);
            Ok(ScalingRow {
                n,
                replicate: r,
                k_max: sa.k_max,
                nucleus_size: sa.shell_sizes.get(&sa.k_max).copied().unwrap_or(0),
            })
        })
        .collect::<Result<_>>()?;

    let means = replicate_means(&rows);
    let k_pts: Vec<(f64, f64)> = means.iter().map(|m| (m.0 as f64, m.1)).collect();
    let s_pts: Vec<(f64, f64)> = means.iter().map(|m| (m.0 as f64, m.2)).collect();
    Ok(ScalingResult {
        k_max_fit: GrowthFit::from_means(&k_pts)?,
        nucleus_fit: GrowthFit::from_means(&s_pts)?,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_graph() {
        let spec = EnsembleSpec {
            n: 10,
            gamma: 2.5,
            k_min: 1,
            seed: 42,
            ..Default::default()
        };
        let a = generate_scale_free(&spec).unwrap();
        let b = generate_scale_free(&spec).unwrap();
        assert_eq!(a.graph, b.graph);
        assert!(a.graph.edge_count() <= a.stubs / 2);
        let c = generate_scale_free(&EnsembleSpec { seed: 43, ..spec }).unwrap();
        assert_eq!(c.graph.node_count(), 10);
    }

    #[test]
    fn infeasible_specs() {
        let bad = EnsembleSpec {
            n: 100,
            k_min: 5,
            cutoff: Some(3),
            ..Default::default()
        };
        assert!(matches!(generate_scale_free(&bad), Err(Error::InvalidSpec(_))));
        let bad = EnsembleSpec {
            gamma: 2.0,
            ..Default::default()
        };
        assert!(generate_scale_free(&bad).is_err());
        let bad = EnsembleSpec {
            n: 10,
            cutoff: Some(10),
            ..Default::default()
        };
        assert!(generate_scale_free(&bad).is_err());
    }

    #[test]
    fn natural_cutoff() {
        let spec = EnsembleSpec {
            n: 10_000,
            gamma: 2.5,
            ..Default::default()
        };
        // 10^4^(2/3) = 464.1
        assert_eq!(spec.effective_cutoff(), 464);
        let tiny = EnsembleSpec {
            n: 4,
            gamma: 2.1,
            k_min: 1,
            ..Default::default()
        };
        assert_eq!(tiny.effective_cutoff(), 3);
    }

    #[test]
    fn sampler_respects_bounds_and_law() {
        let s = DegreeSampler::new(2.5, 2, 50);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = vec![0usize; 51];
        for _ in 0..200_000 {
            let k = s.sample(&mut rng);
            assert!((2..=50).contains(&k));
            counts[k] += 1;
        }
        // P(2)/P(4) = 2^2.5
        let ratio = counts[2] as f64 / counts[4] as f64;
        assert!((ratio - 2f64.powf(2.5)).abs() < 0.3, "{ratio}");
    }

    #[test]
    fn single_size_is_rejected() {
        let r = nucleus_scaling(&[1000], &EnsembleSpec::default(), 1, 0);
        assert!(r.is_err());
    }

    #[test]
    fn cycles_give_flat_k_max() {
        let r = nucleus_scaling_with(&[10, 20, 40], 2, 0, |n, _| {
            let e: Vec<_> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
            Ok(Graph::from_edges(n, &e).0)
        })
        .unwrap();
        assert!(r.rows.iter().all(|row| row.k_max == 2));
        assert!(r.k_max_fit.flat);
        assert_eq!(r.k_max_fit.slope, 0.0);
        // the whole cycle is the nucleus
        assert!((r.nucleus_fit.slope - 1.0).abs() < 1e-12);
        assert_eq!(r.rows.len(), 6);
    }
}
