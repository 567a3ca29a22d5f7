// SPDX-License-Identifier: Apache-2.0

//! k-shell analysis of network topologies.
//!
//! A graph is pruned into k-shells ([`kshell`]); the shells drive a crust
//! percolation profile ([`percolation`]), the nucleus / peer-connected /
//! isolated split ([`medusa`]), box-covering and cluster statistics of the
//! crusts ([`fractal`]) and scaling experiments on random scale-free graphs
//! ([`ensemble`]). [`cli`] wires these into the `medusa` binary.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod fit;
pub mod fractal;
pub mod graph;
pub mod kshell;
pub mod medusa;
pub mod percolation;
pub mod traversal;

pub use error::{Error, Result};
pub use graph::{load_edge_list, Graph, IngestOptions, IngestReport, NodeId, NodeSet};
pub use kshell::{decompose, k_core, k_crust, ShellAssignment};
pub use medusa::{classify, MedusaPartition};
pub use percolation::{crust_profile, detect_transition, CrustProfile, TransitionReport};
pub use traversal::DistanceConfig;
