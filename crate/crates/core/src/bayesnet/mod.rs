//! Discrete Bayesian networks: BIF ingestion, ground-truth graphs, and
//! ancestral sampling.
//!
//! The three benchmark networks (`asia`, `cancer`, `survey`) are vendored
//! as BIF text and embedded in the binary, so benchmarks run without any
//! external files.

mod bif;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::data::{DataTable, Provenance};
use crate::graph::CausalGraph;
use crate::num::Real;

const ASIA_BIF: &str = include_str!("../../networks/asia.bif");
const CANCER_BIF: &str = include_str!("../../networks/cancer.bif");
const SURVEY_BIF: &str = include_str!("../../networks/survey.bif");

/// Names accepted by [`load_benchmark`].
pub const BENCHMARK_NAMES: [&str; 3] = ["asia", "cancer", "survey"];

#[derive(Debug, Error, PartialEq)]
pub enum BifError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("invalid network: {0}")]
    Semantic(String),
    #[error("unknown benchmark '{name}' and no such file; available: {availablement}", availablement = BENCHMARK_NAMES.join(", "))]
    UnknownBenchmark { name: String },
    #[error("failed to read {path}: {message}")]
    Io { path: String, message: String },
    #[error("sample size must be at least 1")]
    EmptySample,
}

/// A named discrete variable with its state labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub states: Vec<String>,
}

/// A discrete Bayesian network: variables in declaration order, per-variable
/// parent lists, and one conditional probability table per variable.
///
/// CPT rows are indexed by the mixed-radix parent configuration (first
/// parent slowest); each row is a distribution over the child's states.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesNet<F = f64> {
    variables: Vec<Variable>,
    parents: Vec<Vec<usize>>,
    cpts: Vec<Vec<Vec<F>>>,
}

impl<F: Real> BayesNet<F> {
    /// Builds and validates a network. CPT rows must sum to 1 within
    /// `1e-9` (widened for low-precision scalars).
    pub fn new(
        variables: Vec<Variable>,
        parents: Vec<Vec<usize>>,
        cpts: Vec<Vec<Vec<F>>>,
    ) -> Result<Self, BifError> {
        Self::from_parts(variables, parents, cpts, 1e-9)
    }

    fn from_parts(
        variables: Vec<Variable>,
        parents: Vec<Vec<usize>>,
        cpts: Vec<Vec<Vec<F>>>,
        tol: f64,
    ) -> Result<Self, BifError> {
        let net = Self { variables, parents, cpts };
        net.validate(tol)?;
        Ok(net)
    }

    pub(crate) fn from_f64_parts(
        variables: Vec<Variable>,
        parents: Vec<Vec<usize>>,
        cpts: Vec<Vec<Vec<f64>>>,
        tol: f64,
    ) -> Result<Self, BifError> {
        let cpts = cpts
            .into_iter()
            .map(|table| {
                table.into_iter().map(|row| row.into_iter().map(F::from_f64_lit).collect()).collect()
            })
            .collect();
        Self::from_parts(variables, parents, cpts, tol)
    }

    fn validate(&self, tol: f64) -> Result<(), BifError> {
        let n = self.variables.len();
        if self.parents.len() != n || self.cpts.len() != n {
            return Err(BifError::Semantic("parent and CPT lists must cover every variable".into()));
        }
        // Allow for accumulation error when the scalar is low-precision.
        let width_max = self.variables.iter().map(|v| v.states.len()).max().unwrap_or(1);
        let eps = F::epsilon().to_f64_lossy() * width_max as f64 * 4.0;
        let tol = tol.max(eps);
        for (i, v) in self.variables.iter().enumerate() {
            if v.states.len() < 2 {
                return Err(BifError::Semantic(format!("variable {} needs at least 2 states", v.name)));
            }
            for &p in &self.parents[i] {
                if p >= n {
                    return Err(BifError::Semantic(format!("variable {} has out-of-range parent index {p}", v.name)));
                }
                if p == i {
                    return Err(BifError::Semantic(format!("variable {} lists itself as a parent", v.name)));
                }
            }
            let expected_rows: usize = self.parents[i].iter().map(|&p| self.variables[p].states.len()).product();
            if self.cpts[i].len() != expected_rows {
                return Err(BifError::Semantic(format!(
                    "variable {}: CPT has {} rows, expected {expected_rows}",
                    v.name,
                    self.cpts[i].len()
                )));
            }
            for (r, row) in self.cpts[i].iter().enumerate() {
                if row.len() != v.states.len() {
                    return Err(BifError::Semantic(format!(
                        "variable {}: CPT row {r} has {} values, expected {}",
                        v.name,
                        row.len(),
                        v.states.len()
                    )));
                }
                let mut sum = 0.0f64;
                for &p in row {
                    let p = p.to_f64_lossy();
                    if !(0.0..=1.0 + tol).contains(&p) {
                        return Err(BifError::Semantic(format!(
                            "variable {}: CPT row {r} holds out-of-range probability {p}",
                            v.name
                        )));
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > tol {
                    return Err(BifError::Semantic(format!(
                        "variable {}: CPT row {r} sums to {sum}, not 1",
                        v.name
                    )));
                }
            }
        }
        // The parent relation must be acyclic.
        self.truth_graph().topological_order().map_err(|_| {
            BifError::Semantic("parent relation contains a cycle".into())
        })?;
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn arity(&self, i: usize) -> usize {
        self.variables[i].states.len()
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn cpt_row_count(&self, i: usize) -> usize {
        self.cpts[i].len()
    }

    pub fn cpt_row(&self, i: usize, row: usize) -> &[F] {
        &self.cpts[i][row]
    }

    /// The parent-to-child ground-truth graph.
    pub fn truth_graph(&self) -> CausalGraph {
        let mut g = CausalGraph::new(self.variables.iter().map(|v| v.name.clone()))
            .expect("validated variable names");
        for (child, parents) in self.parents.iter().enumerate() {
            for &p in parents {
                g.insert_edge(p, child).expect("validated parent indices");
            }
        }
        g
    }

    /// Serializes back to BIF text.
    pub fn to_bif(&self) -> String {
        bif::write(self)
    }

    /// Structural and numeric equality within `tol` on CPT entries.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.variables != other.variables || self.parents != other.parents {
            return false;
        }
        self.cpts.iter().zip(&other.cpts).all(|(a, b)| {
            a.len() == b.len()
                && a.iter().zip(b).all(|(ra, rb)| {
                    ra.len() == rb.len()
                        && ra.iter().zip(rb).all(|(&x, &y)| (x.to_f64_lossy() - y.to_f64_lossy()).abs() <= tol)
                })
        })
    }

    /// Draws `n` rows by sampling each variable in topological order,
    /// conditioned on its sampled parents. Deterministic given `seed`;
    /// columns follow variable declaration order.
    pub fn ancestral_sample(&self, n: usize, seed: u64) -> Result<DataTable, BifError> {
        if n == 0 {
            return Err(BifError::EmptySample);
        }
        let order = self.truth_graph().topological_order().expect("validated acyclic");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let width = self.variables.len();
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row = vec![0usize; width];
            for &v in &order {
                let config: Vec<usize> = self.parents[v].iter().map(|&p| row[p]).collect();
                let row_index = bif::config_to_row(&config, &self.parents[v], &self.variables);
                row[v] = draw_state(&self.cpts[v][row_index], &mut rng);
            }
            rows.push(row);
        }
        Ok(DataTable::new(self.variable_names(), rows).expect("constructed width"))
    }

    /// Like [`ancestral_sample`](Self::ancestral_sample) but records where
    /// the table came from.
    pub fn ancestral_sample_with_provenance(
        &self,
        network: &str,
        n: usize,
        seed: u64,
    ) -> Result<DataTable, BifError> {
        Ok(self
            .ancestral_sample(n, seed)?
            .with_provenance(Provenance { network: network.to_string(), seed, n }))
    }

    /// Exact per-variable marginals by brute-force enumeration of the
    /// joint. Intended for verification on small networks.
    pub fn exact_marginals(&self) -> Vec<Vec<f64>> {
        let n = self.variables.len();
        let mut marginals: Vec<Vec<f64>> = self.variables.iter().map(|v| vec![0.0; v.states.len()]).collect();
        let mut assignment = vec![0usize; n];
        loop {
            let mut joint = 1.0f64;
            for v in 0..n {
                let config: Vec<usize> = self.parents[v].iter().map(|&p| assignment[p]).collect();
                let row = bif::config_to_row(&config, &self.parents[v], &self.variables);
                joint *= self.cpts[v][row][assignment[v]].to_f64_lossy();
            }
            for v in 0..n {
                marginals[v][assignment[v]] += joint;
            }
            // Next assignment in mixed-radix order.
            let mut v = n;
            loop {
                if v == 0 {
                    return marginals;
                }
                v -= 1;
                assignment[v] += 1;
                if assignment[v] < self.variables[v].states.len() {
                    break;
                }
                assignment[v] = 0;
            }
        }
    }
}

fn draw_state<F: Real>(distribution: &[F], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0f64;
    for (state, &p) in distribution.iter().enumerate() {
        acc += p.to_f64_lossy();
        if u < acc {
            return state;
        }
    }
    distribution.len() - 1
}

/// Parses BIF text into a validated network.
pub fn parse_bif<F: Real>(text: &str) -> Result<BayesNet<F>, BifError> {
    bif::parse(text)
}

/// Loads one of the embedded benchmarks by name (case-insensitive), or
/// parses a BIF file at the given path.
pub fn load_benchmark<F: Real>(name: &str) -> Result<BayesNet<F>, BifError> {
    match name.to_ascii_lowercase().as_str() {
        "asia" => parse_bif(ASIA_BIF),
        "cancer" => parse_bif(CANCER_BIF),
        "survey" => parse_bif(SURVEY_BIF),
        _ => {
            let path = std::path::Path::new(name);
            if path.is_file() {
                let text = std::fs::read_to_string(path).map_err(|e| BifError::Io {
                    path: name.to_string(),
                    message: e.to_string(),
                })?;
                parse_bif(&text)
            } else {
                Err(BifError::UnknownBenchmark { name: name.to_string() })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Two-variable fixture: P(A=yes) = 0.3, B depends on A.
    const TWO_VAR: &str = r#"
network unknown {
}
variable A {
  type discrete [ 2 ] { yes, no };
}
variable B {
  type discrete [ 2 ] { yes, no };
}
probability ( A ) {
  table 0.3, 0.7;
}
probability ( B | A ) {
  (yes) 0.8, 0.2;
  (no) 0.1, 0.9;
}
"#;

    #[test]
    fn parses_two_variable_fixture() {
        let net: BayesNet = parse_bif(TWO_VAR).unwrap();
        assert_eq!(net.variable_count(), 2);
        assert_eq!(net.truth_graph().edge_count(), 1);
        assert_eq!(net.parents(1), &[0]);
        assert_abs_diff_eq!(net.cpt_row(0, 0)[0].to_f64_lossy(), 0.3);
        // Row order follows parent state order: A=yes first.
        assert_abs_diff_eq!(net.cpt_row(1, 0)[0].to_f64_lossy(), 0.8);
        assert_abs_diff_eq!(net.cpt_row(1, 1)[0].to_f64_lossy(), 0.1);
    }

    #[test]
    fn truncated_file_names_the_offending_line() {
        let truncated = "network unknown {\n}\nvariable A {\n  type discrete [ 2 ] { yes, no };\n";
        match parse_bif::<f64>(truncated) {
            Err(BifError::Syntax { line, .. }) => assert!(line >= 4, "line = {line}"),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn bad_row_sum_is_a_semantic_error() {
        let bad = TWO_VAR.replace("table 0.3, 0.7;", "table 0.3, 0.6;");
        match parse_bif::<f64>(&bad) {
            Err(BifError::Semantic(msg)) => assert!(msg.contains("sums to"), "{msg}"),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn undeclared_parent_is_a_semantic_error() {
        let bad = TWO_VAR.replace("( B | A )", "( B | Z )");
        match parse_bif::<f64>(&bad) {
            Err(BifError::Semantic(msg)) => assert!(msg.contains("undeclared parent"), "{msg}"),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn missing_row_is_a_semantic_error() {
        let bad = TWO_VAR.replace("  (no) 0.1, 0.9;\n", "");
        match parse_bif::<f64>(&bad) {
            Err(BifError::Semantic(msg)) => assert!(msg.contains("missing"), "{msg}"),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_row_width_is_a_semantic_error() {
        let bad = TWO_VAR.replace("(yes) 0.8, 0.2;", "(yes) 0.8, 0.1, 0.1;");
        assert!(matches!(parse_bif::<f64>(&bad), Err(BifError::Semantic(_))));
    }

    #[test]
    fn benchmarks_load_with_expected_shapes() {
        let asia: BayesNet = load_benchmark("asia").unwrap();
        assert_eq!(asia.variable_count(), 8);
        assert_eq!(asia.truth_graph().edge_count(), 8);

        let cancer: BayesNet = load_benchmark("cancer").unwrap();
        assert_eq!(cancer.variable_count(), 5);
        assert_eq!(cancer.truth_graph().edge_count(), 4);

        let survey: BayesNet = load_benchmark("survey").unwrap();
        assert_eq!(survey.variable_count(), 6);
        assert_eq!(survey.truth_graph().edge_count(), 6);
    }

    #[test]
    fn unknown_benchmark_lists_available_names() {
        let err = load_benchmark::<f64>("unknown").unwrap_err();
        let msg = err.to_string();
        for name in BENCHMARK_NAMES {
            assert!(msg.contains(name), "{msg}");
        }
    }

    #[test]
    fn asia_roots_are_smoke_and_asia() {
        let net: BayesNet = load_benchmark("asia").unwrap();
        let graph = net.truth_graph();
        let roots: std::collections::HashSet<&str> = graph.roots().into_iter().collect();
        assert_eq!(roots, ["smoke", "asia"].into_iter().collect());
    }

    #[test]
    fn two_var_truth_graph() {
        let net: BayesNet = parse_bif(TWO_VAR).unwrap();
        let g = net.truth_graph();
        assert_eq!(g.edge_names().collect::<Vec<_>>(), vec![("A", "B")]);
    }

    #[test]
    fn single_variable_net_has_empty_truth_graph() {
        let one = "variable A {\n  type discrete [ 2 ] { yes, no };\n}\nprobability ( A ) {\n  table 0.5, 0.5;\n}\n";
        let net: BayesNet = parse_bif(one).unwrap();
        assert_eq!(net.truth_graph().edge_count(), 0);
    }

    #[test]
    fn deterministic_cpts_give_constant_rows() {
        let text = "variable A {\n  type discrete [ 2 ] { s0, s1 };\n}\nvariable B {\n  type discrete [ 2 ] { s0, s1 };\n}\nprobability ( A ) {\n  table 0.0, 1.0;\n}\nprobability ( B | A ) {\n  (s0) 1.0, 0.0;\n  (s1) 0.0, 1.0;\n}\n";
        let net: BayesNet = parse_bif(text).unwrap();
        let table = net.ancestral_sample(50, 123).unwrap();
        for row in table.rows() {
            assert_eq!(row, &vec![1, 1]);
        }
    }

    #[test]
    fn sample_shape_and_determinism() {
        let net: BayesNet = load_benchmark("asia").unwrap();
        let a = net.ancestral_sample(100, 9).unwrap();
        assert_eq!(a.row_count(), 100);
        assert_eq!(a.columns().len(), 8);
        let b = net.ancestral_sample(100, 9).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let c = net.ancestral_sample(100, 10).unwrap();
        assert_ne!(a.to_csv(), c.to_csv());
    }

    #[test]
    fn bif_round_trip_on_benchmarks() {
        for name in BENCHMARK_NAMES {
            let net: BayesNet = load_benchmark(name).unwrap();
            let back: BayesNet = parse_bif(&net.to_bif()).unwrap();
            assert!(net.approx_eq(&back, 1e-9), "{name} round trip drifted");
        }
    }

    #[test]
    fn bif_round_trip_on_random_nets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let n = rng.random_range(1..5);
            let variables: Vec<Variable> = (0..n)
                .map(|i| Variable {
                    name: format!("v{i}"),
                    states: (0..rng.random_range(2..4usize)).map(|s| format!("s{s}")).collect(),
                })
                .collect();
            // Parents only among earlier variables keeps the net acyclic.
            let parents: Vec<Vec<usize>> = (0..n)
                .map(|i| (0..i).filter(|_| rng.random_bool(0.4)).collect())
                .collect();
            let cpts: Vec<Vec<Vec<f64>>> = (0..n)
                .map(|i| {
                    let rows: usize = parents[i].iter().map(|&p| variables[p].states.len()).product();
                    (0..rows)
                        .map(|_| {
                            let raw: Vec<f64> =
                                (0..variables[i].states.len()).map(|_| rng.random_range(0.05..1.0)).collect();
                            let total: f64 = raw.iter().sum();
                            raw.into_iter().map(|x| x / total).collect()
                        })
                        .collect()
                })
                .collect();
            let net: BayesNet = BayesNet::from_f64_parts(variables, parents, cpts, 1e-9).unwrap();
            let back: BayesNet = parse_bif(&net.to_bif()).unwrap();
            assert!(net.approx_eq(&back, 1e-9));
        }
    }

    #[test]
    fn exact_marginals_sum_to_one() {
        let net: BayesNet = load_benchmark("asia").unwrap();
        for m in net.exact_marginals() {
            assert_abs_diff_eq!(m.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_marginals_match_hand_computation() {
        let net: BayesNet = parse_bif(TWO_VAR).unwrap();
        let m = net.exact_marginals();
        assert_abs_diff_eq!(m[0][0], 0.3, epsilon = 1e-12);
        // P(B=yes) = 0.3 * 0.8 + 0.7 * 0.1
        assert_abs_diff_eq!(m[1][0], 0.31, epsilon = 1e-12);
    }

    #[test]
    fn cyclic_parent_relation_rejected() {
        let variables = vec![
            Variable { name: "a".into(), states: vec!["0".into(), "1".into()] },
            Variable { name: "b".into(), states: vec!["0".into(), "1".into()] },
        ];
        let parents = vec![vec![1], vec![0]];
        let cpts = vec![
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
        ];
        match BayesNet::<f64>::new(variables, parents, cpts) {
            Err(BifError::Semantic(msg)) => assert!(msg.contains("cycle")),
            other => panic!("expected cycle rejection, got {other:?}"),
        }
    }

    #[test]
    fn parses_in_f32_too() {
        let net: BayesNet<f32> = parse_bif(TWO_VAR).unwrap();
        assert_eq!(net.variable_count(), 2);
    }
}
