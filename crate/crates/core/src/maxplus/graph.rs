//! Precedence graph `G(A)` of a square matrix: strongly connected
//! components and the sign of the heaviest circuit.
//!
//! `G(A)` has an edge `j → i` of weight `a_ij` whenever `a_ij ≠ −∞`.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::scalar::{Rational, Scalar};
use super::{Matrix, MaxPlusError};

/// Sign of the heaviest circuit, ordered from least to most severe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CircuitSign {
    /// The graph is acyclic.
    NoCircuit,
    AllNegative,
    /// No circuit is positive, at least one weighs exactly zero.
    HasZero,
    HasPositive,
}

impl CircuitSign {
    /// `A^k → O` holds exactly in these cases.
    pub fn is_contracting(self) -> bool {
        matches!(self, CircuitSign::NoCircuit | CircuitSign::AllNegative)
    }

    /// The Kleene star exists exactly in these cases.
    pub fn admits_star(self) -> bool {
        self != CircuitSign::HasPositive
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAnalysis {
    pub scc_count: usize,
    /// Component id of every vertex.
    pub scc_of: Vec<usize>,
    /// Component ids in topological order of the condensation (sources first).
    pub condensation_order: Vec<usize>,
    /// Circuit sign restricted to each component.
    pub component_signs: Vec<CircuitSign>,
    pub worst_circuit_weight_sign: CircuitSign,
}

impl GraphAnalysis {
    pub fn members(&self, component: usize) -> Vec<usize> {
        (0..self.scc_of.len())
            .filter(|&v| self.scc_of[v] == component)
            .collect()
    }
}

pub fn analyze_graph(a: &Matrix) -> Result<GraphAnalysis, MaxPlusError> {
    if !a.is_square() {
        return Err(MaxPlusError::NotSquare {
            op: "analyze_graph",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut graph = DiGraph::<usize, ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|v| graph.add_node(v)).collect();
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j).is_finite() {
                graph.add_edge(nodes[j], nodes[i], ());
            }
        }
    }
    // tarjan_scc yields components in reverse topological order.
    let mut components = tarjan_scc(&graph);
    components.reverse();

    let mut scc_of = vec![0; n];
    for (c, members) in components.iter().enumerate() {
        for node in members {
            scc_of[graph[*node]] = c;
        }
    }
    let component_signs = components
        .iter()
        .map(|members| {
            let mut vertices: Vec<usize> = members.iter().map(|node| graph[*node]).collect();
            vertices.sort_unstable();
            component_sign(a, &vertices)
        })
        .collect::<Vec<_>>();
    let worst = component_signs
        .iter()
        .copied()
        .max()
        .unwrap_or(CircuitSign::NoCircuit);
    Ok(GraphAnalysis {
        scc_count: components.len(),
        scc_of,
        condensation_order: (0..components.len()).collect(),
        component_signs,
        worst_circuit_weight_sign: worst,
    })
}

/// Classifies the circuits inside one strongly connected component.
///
/// Longest-path Bellman–Ford from a virtual source: a relaxation that still
/// succeeds after `|V|` rounds witnesses a positive circuit. Otherwise the
/// potentials make every edge weight non-positive after reduction, and a
/// zero-weight circuit exists iff the tight edges contain a cycle.
fn component_sign(a: &Matrix, vertices: &[usize]) -> CircuitSign {
    let size = vertices.len();
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    for (li, &i) in vertices.iter().enumerate() {
        for (lj, &j) in vertices.iter().enumerate() {
            if let Scalar::Finite(w) = a.get(i, j) {
                edges.push((lj, li, w));
            }
        }
    }
    if edges.is_empty() {
        return CircuitSign::NoCircuit;
    }
    let mut potential = vec![Rational::from_integer(0); size];
    for round in 0..=size {
        let mut changed = false;
        for &(from, to, w) in &edges {
            let candidate = potential[from] + w;
            if candidate > potential[to] {
                potential[to] = candidate;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if round == size {
            return CircuitSign::HasPositive;
        }
    }
    let tight: Vec<(usize, usize)> = edges
        .iter()
        .filter(|&&(from, to, w)| potential[from] + w == potential[to])
        .map(|&(from, to, _)| (from, to))
        .collect();
    if has_cycle(size, &tight) {
        CircuitSign::HasZero
    } else {
        CircuitSign::AllNegative
    }
}

/// Kahn's algorithm; self-loops count as cycles.
fn has_cycle(size: usize, edges: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0usize; size];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); size];
    for &(from, to) in edges {
        indegree[to] += 1;
        out[from].push(to);
    }
    let mut stack: Vec<usize> = (0..size).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                stack.push(w);
            }
        }
    }
    removed < size
}
