//! Directed causal graphs over named variables.
//!
//! Variable identity is the name string; indices are an internal detail.
//! The plain [`CausalGraph::insert_edge`] allows cycles (some discovery
//! strategies emit cyclic graphs and are scored as-is), while
//! [`CausalGraph::insert_edge_checked`] refuses any edge that would close
//! a directed cycle.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("variable index {index} out of bounds (graph has {count} variables)")]
    IndexOutOfBounds { index: usize, count: usize },
    #[error("unknown variable name: {0}")]
    UnknownVariable(String),
    #[error("duplicate variable name: {0}")]
    DuplicateVariable(String),
    #[error("variable names must be non-empty")]
    EmptyVariableName,
    #[error("self-loop on variable index {0} is not allowed")]
    SelfLoop(usize),
    #[error("graph contains a directed cycle")]
    CycleDetected,
    #[error("failed to parse graph: {0}")]
    Parse(String),
}

/// Outcome of a cycle-checked edge insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeInsert {
    Inserted,
    AlreadyPresent,
    /// Refused: the edge would have closed a directed cycle.
    WouldCycle,
}

/// A directed graph over an ordered set of uniquely named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalGraph {
    variables: Vec<String>,
    index: HashMap<String, usize>,
    /// Sorted edge set as (from, to) index pairs.
    edges: Vec<(usize, usize)>,
}

impl CausalGraph {
    /// Builds an edgeless graph. Names must be unique and non-empty.
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Result<Self, GraphError> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(variables.len());
        for (i, name) in variables.iter().enumerate() {
            if name.is_empty() {
                return Err(GraphError::EmptyVariableName);
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVariable(name.clone()));
            }
        }
        Ok(Self { variables, index, edges: Vec::new() })
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn name(&self, i: usize) -> &str {
        &self.variables[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    fn require_index(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name).ok_or_else(|| GraphError::UnknownVariable(name.to_string()))
    }

    fn check_bounds(&self, i: usize) -> Result<(), GraphError> {
        if i >= self.variables.len() {
            return Err(GraphError::IndexOutOfBounds { index: i, count: self.variables.len() });
        }
        Ok(())
    }

    /// Edges as sorted (from, to) index pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as (from-name, to-name) pairs in sorted index order.
    pub fn edge_names(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|&(u, v)| (self.variables[u].as_str(), self.variables[v].as_str()))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.binary_search(&(from, to)).is_ok()
    }

    /// Inserts `from -> to` without a cycle check. Self-loops are still
    /// refused (they are never meaningful here). Returns whether the edge
    /// was newly added.
    pub fn insert_edge(&mut self, from: usize, to: usize) -> Result<bool, GraphError> {
        self.check_bounds(from)?;
        self.check_bounds(to)?;
        if from == to {
            return Err(GraphError::SelfLoop(from));
        }
        match self.edges.binary_search(&(from, to)) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.edges.insert(pos, (from, to));
                Ok(true)
            }
        }
    }

    /// Inserts `from -> to` only if it keeps the graph acyclic. A refusal
    /// is an ordinary outcome, not an error: callers decide whether to log
    /// the dropped edge.
    pub fn insert_edge_checked(&mut self, from: usize, to: usize) -> Result<EdgeInsert, GraphError> {
        if self.has_edge(from, to) {
            self.check_bounds(from)?;
            self.check_bounds(to)?;
            return Ok(EdgeInsert::AlreadyPresent);
        }
        if self.would_create_cycle(from, to)? {
            return Ok(EdgeInsert::WouldCycle);
        }
        self.insert_edge(from, to)?;
        Ok(EdgeInsert::Inserted)
    }

    pub fn insert_edge_by_name(&mut self, from: &str, to: &str) -> Result<bool, GraphError> {
        let (f, t) = (self.require_index(from)?, self.require_index(to)?);
        self.insert_edge(f, t)
    }

    /// True iff adding `from -> to` would close a directed cycle (a
    /// self-loop counts). The graph is left unmodified.
    pub fn would_create_cycle(&self, from: usize, to: usize) -> Result<bool, GraphError> {
        self.check_bounds(from)?;
        self.check_bounds(to)?;
        if from == to {
            return Ok(true);
        }
        // A cycle appears iff `from` is already reachable from `to`.
        let mut seen = vec![false; self.variables.len()];
        let mut queue = VecDeque::new();
        seen[to] = true;
        queue.push_back(to);
        while let Some(u) = queue.pop_front() {
            if u == from {
                return Ok(true);
            }
            for &(a, b) in self.edges_from(u) {
                debug_assert_eq!(a, u);
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        Ok(false)
    }

    fn edges_from(&self, u: usize) -> &[(usize, usize)] {
        let start = self.edges.partition_point(|&(a, _)| a < u);
        let end = self.edges.partition_point(|&(a, _)| a <= u);
        &self.edges[start..end]
    }

    /// Children of `u` in index order.
    pub fn children(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges_from(u).iter().map(|&(_, v)| v)
    }

    /// Parents of `u` in index order.
    pub fn parents(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |&&(_, v)| v == u).map(|&(p, _)| p)
    }

    /// Deterministic topological order: among ready nodes, the one declared
    /// first goes first. Errors if the edge set contains a cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>, GraphError> {
        let n = self.variables.len();
        let mut in_degree = vec![0usize; n];
        for &(_, v) in &self.edges {
            in_degree[v] += 1;
        }
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
            (0..n).filter(|&i| in_degree[i] == 0).map(std::cmp::Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(u)) = ready.pop() {
            order.push(u);
            for &(_, v) in self.edges_from(u) {
                in_degree[v] -= 1;
                if in_degree[v] == 0 {
                    ready.push(std::cmp::Reverse(v));
                }
            }
        }
        if order.len() != n {
            return Err(GraphError::CycleDetected);
        }
        Ok(order)
    }

    pub fn is_cyclic(&self) -> bool {
        self.topological_order().is_err()
    }

    /// Names of the variables with in-degree zero, in declaration order.
    pub fn roots(&self) -> Vec<&str> {
        let mut has_parent = vec![false; self.variables.len()];
        for &(_, v) in &self.edges {
            has_parent[v] = true;
        }
        self.variables
            .iter()
            .enumerate()
            .filter(|&(i, _)| !has_parent[i])
            .map(|(_, name)| name.as_str())
            .collect()
    }

    /// Plain-text edge list: one `from -> to` line per edge. Isolated
    /// variables are declared by a bare-name line so the variable set
    /// survives a round trip even for edgeless graphs.
    pub fn to_edge_list(&self) -> String {
        let mut mentioned = vec![false; self.variables.len()];
        for &(u, v) in &self.edges {
            mentioned[u] = true;
            mentioned[v] = true;
        }
        let mut out = String::new();
        for (i, name) in self.variables.iter().enumerate() {
            if !mentioned[i] {
                out.push_str(name);
                out.push('\n');
            }
        }
        for (from, to) in self.edge_names() {
            out.push_str(from);
            out.push_str(" -> ");
            out.push_str(to);
            out.push('\n');
        }
        out
    }

    /// Parses the [`to_edge_list`](Self::to_edge_list) format. Variables
    /// appear in first-mention order; `#` starts a comment line.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut variables: Vec<String> = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<(String, String)> = Vec::new();
        let mut intern = |name: &str, variables: &mut Vec<String>, seen: &mut HashMap<String, usize>| {
            if !seen.contains_key(name) {
                seen.insert(name.to_string(), variables.len());
                variables.push(name.to_string());
            }
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((from, to)) = line.split_once("->") {
                let (from, to) = (from.trim(), to.trim());
                if from.is_empty() || to.is_empty() {
                    return Err(GraphError::Parse(format!("line {}: malformed edge '{}'", lineno + 1, raw)));
                }
                intern(from, &mut variables, &mut seen);
                intern(to, &mut variables, &mut seen);
                edges.push((from.to_string(), to.to_string()));
            } else if line.split_whitespace().count() == 1 {
                intern(line, &mut variables, &mut seen);
            } else {
                return Err(GraphError::Parse(format!("line {}: expected 'from -> to' or a bare variable name, got '{}'", lineno + 1, raw)));
            }
        }
        let mut graph = CausalGraph::new(variables)?;
        for (from, to) in edges {
            graph.insert_edge_by_name(&from, &to)?;
        }
        Ok(graph)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphJson::from(self)).expect("graph serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let parsed: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        let mut graph = CausalGraph::new(parsed.variables)?;
        for (from, to) in parsed.edges {
            graph.insert_edge_by_name(&from, &to)?;
        }
        Ok(graph)
    }

    /// Accepts either the JSON form or the edge-list text form.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_edge_list(text)
        }
    }
}

/// JSON wire form: `{"variables": [...], "edges": [["from","to"], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    variables: Vec<String>,
    edges: Vec<(String, String)>,
}

impl From<&CausalGraph> for GraphJson {
    fn from(g: &CausalGraph) -> Self {
        Self {
            variables: g.variables.clone(),
            edges: g.edge_names().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }
}
