//! Causal discovery toolkit for discrete Bayesian networks.
//!
//! The crate covers the full benchmarking loop:
//!
//! * [`bayesnet`] — BIF parsing, embedded benchmark networks, and
//!   ancestral sampling of observational data.
//! * [`sample`] — row-subset selection strategies and Pearson correlation.
//! * [`prompt`] — text rendering for pairwise and breadth-first-search
//!   causal elicitation, with optional data or correlation blocks.
//! * [`gateway`] — chat-completion transports (HTTP, deterministic mock
//!   oracle, scripted, replay) with retry, logging, and answer parsing.
//! * [`discover`] — the pairwise and BFS discovery strategies.
//! * [`baselines`] — the PC algorithm (chi-square or d-separation oracle
//!   tests) and greedy equivalence search over BIC/BDeu scores.
//! * [`metrics`] — precision/recall/F1, normalized Hamming distance, and
//!   the NHD ratio for predicted-vs-true graphs.
//! * [`runner`] — experiment grids, persistence, and report tables.
//!
//! Numeric code is generic over the scalar type via [`num::Real`]; the
//! `f64` instantiations are the defaults and carry crate-root aliases.

pub mod bayesnet;
pub mod data;
pub mod graph;
pub mod metrics;
pub mod num;
pub mod stats;

pub use data::DataTable;
pub use graph::CausalGraph;

/// `f64` network, the default for all CLI and runner paths.
pub type BayesNet64 = bayesnet::BayesNet<f64>;
/// Single-precision network for memory-constrained callers.
pub type BayesNet32 = bayesnet::BayesNet<f32>;
/// `f64` metrics report.
pub type MetricsReport64 = metrics::MetricsReport<f64>;
/// Single-precision metrics report.
pub type MetricsReport32 = metrics::MetricsReport<f32>;
