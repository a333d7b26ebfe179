//! Scoring a predicted graph against ground truth.
//!
//! Directed edges are treated as a classification target: an edge is a
//! positive prediction, so precision/recall/F1 fall out of the usual
//! confusion counts. Two distance-style metrics complete the report:
//!
//! * `nhd` — normalized Hamming distance between the directed adjacency
//!   matrices, `(fp + fn) / n^2`.
//! * `baseline_nhd` — the NHD a prediction with the same edge count but
//!   zero overlap would score, `(|pred| + |truth|) / n^2`.
//! * `ratio` — `nhd / baseline_nhd`. Under these definitions the identity
//!   `ratio == 1 - f1` holds exactly whenever the edge sets are not both
//!   empty.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::CausalGraph;
use crate::num::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("graphs must be over the same variables (pred has {pred}, truth has {truth})")]
    VariableMismatch { pred: String, truth: String },
    #[error("cannot aggregate an empty report sequence")]
    EmptyAggregate,
}

/// Edge-level confusion counts over directed edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

/// One scored prediction. Serializes with fixed field names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport<F = f64> {
    pub precision: F,
    pub recall: F,
    pub f1: F,
    pub nhd: F,
    pub baseline_nhd: F,
    pub ratio: F,
}

fn check_same_variables(pred: &CausalGraph, truth: &CausalGraph) -> Result<(), MetricsError> {
    let a: HashSet<&str> = pred.variables().iter().map(String::as_str).collect();
    let b: HashSet<&str> = truth.variables().iter().map(String::as_str).collect();
    if a != b {
        return Err(MetricsError::VariableMismatch {
            pred: pred.variables().join(","),
            truth: truth.variables().join(","),
        });
    }
    Ok(())
}

/// Confusion counts between directed edge sets. Variable sets must match
/// by name; declaration order may differ.
pub fn confusion_counts(pred: &CausalGraph, truth: &CausalGraph) -> Result<ConfusionCounts, MetricsError> {
    check_same_variables(pred, truth)?;
    let truth_edges: HashSet<(&str, &str)> = truth.edge_names().collect();
    let pred_edges: HashSet<(&str, &str)> = pred.edge_names().collect();
    let true_positives = pred_edges.intersection(&truth_edges).count();
    Ok(ConfusionCounts {
        true_positives,
        false_positives: pred_edges.len() - true_positives,
        false_negatives: truth_edges.len() - true_positives,
    })
}

/// Scores `pred` against `truth`.
///
/// Degenerate cases: a zero denominator yields 0 for the affected metric,
/// except that two empty graphs agree perfectly and score
/// precision = recall = f1 = 1, nhd = baseline_nhd = 0, ratio = 0.
pub fn score<F: Real>(pred: &CausalGraph, truth: &CausalGraph) -> Result<MetricsReport<F>, MetricsError> {
    let counts = confusion_counts(pred, truth)?;
    let n = pred.variable_count();
    Ok(report_from_counts(counts, n))
}

pub(crate) fn report_from_counts<F: Real>(counts: ConfusionCounts, n_variables: usize) -> MetricsReport<F> {
    let tp = counts.true_positives;
    let fp = counts.false_positives;
    let fn_ = counts.false_negatives;
    let zero = F::zero();
    let one = F::one();
    if tp + fp + fn_ == 0 {
        // Both edge sets empty: perfect agreement.
        return MetricsReport { precision: one, recall: one, f1: one, nhd: zero, baseline_nhd: zero, ratio: zero };
    }
    let frac = |num: usize, den: usize| if den == 0 { zero } else { F::from_count(num) / F::from_count(den) };
    let n_sq = n_variables * n_variables;
    let pred_edges = tp + fp;
    let truth_edges = tp + fn_;
    MetricsReport {
        precision: frac(tp, pred_edges),
        recall: frac(tp, truth_edges),
        f1: frac(2 * tp, 2 * tp + fp + fn_),
        nhd: frac(fp + fn_, n_sq),
        baseline_nhd: frac(pred_edges + truth_edges, n_sq),
        ratio: frac(fp + fn_, pred_edges + truth_edges),
    }
}

/// Field-wise arithmetic mean of a non-empty report sequence.
pub fn aggregate<F: Real>(reports: &[MetricsReport<F>]) -> Result<MetricsReport<F>, MetricsError> {
    if reports.is_empty() {
        return Err(MetricsError::EmptyAggregate);
    }
    let n = F::from_count(reports.len());
    let mean = |get: fn(&MetricsReport<F>) -> F| reports.iter().map(get).sum::<F>() / n;
    Ok(MetricsReport {
        precision: mean(|r| r.precision),
        recall: mean(|r| r.recall),
        f1: mean(|r| r.f1),
        nhd: mean(|r| r.nhd),
        baseline_nhd: mean(|r| r.baseline_nhd),
        ratio: mean(|r| r.ratio),
    })
}

/// F1 of the undirected skeletons (unordered adjacency pairs).
pub fn skeleton_f1<F: Real>(pred: &CausalGraph, truth: &CausalGraph) -> Result<F, MetricsError> {
    check_same_variables(pred, truth)?;
    let undirect = |g: &CausalGraph| -> HashSet<(String, String)> {
        g.edge_names()
            .map(|(a, b)| if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) })
            .collect()
    };
    let p = undirect(pred);
    let t = undirect(truth);
    let tp = p.intersection(&t).count();
    let denom = p.len() + t.len();
    if denom == 0 {
        return Ok(F::one());
    }
    Ok(F::from_count(2 * tp) / F::from_count(denom))
}
