use super::maxflow::{MaxFlowGraph, Side};
use crate::error::{Error, Result};

/// Sweeps over all labels performed at most by [`solve_alpha_expansion`].
pub const MAX_SWEEPS: usize = 10;

/// Discrete energy with per-node unary costs and weighted pairwise terms
/// `w * penalty(l_i, l_j)`.
#[derive(Clone, Debug)]
pub struct MultiLabelProblem {
    num_nodes: usize,
    num_labels: usize,
    unary: Vec<f64>,
    pairs: Vec<(usize, usize, f64)>,
    penalty: Vec<f64>,
    forbidden: Vec<bool>,
    locked: Vec<bool>,
}

impl MultiLabelProblem {
    /// Zero unaries, no pairs, Potts penalty.
    pub fn new(num_nodes: usize, num_labels: usize) -> Self {
        let mut penalty = vec![1.0; num_labels * num_labels];
        for l in 0..num_labels {
            penalty[l * num_labels + l] = 0.0;
        }
        MultiLabelProblem {
            num_nodes,
            num_labels,
            unary: vec![0.0; num_nodes * num_labels],
            pairs: Vec::new(),
            penalty,
            forbidden: vec![false; num_nodes * num_labels],
            locked: vec![false; num_nodes],
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn unary(&self, node: usize, label: usize) -> f64 {
        self.unary[node * self.num_labels + label]
    }

    pub fn set_unary(&mut self, node: usize, label: usize, cost: f64) {
        debug_assert!(cost >= 0.0);
        self.unary[node * self.num_labels + label] = cost;
    }

    pub fn add_pair(&mut self, i: usize, j: usize, weight: f64) {
        debug_assert!(weight >= 0.0 && i != j);
        self.pairs.push((i, j, weight));
    }

    pub fn pairs(&self) -> &[(usize, usize, f64)] {
        &self.pairs
    }

    /// Replaces the penalty table. It must be symmetric with a zero
    /// diagonal; expansion moves additionally assume the triangle inequality.
    pub fn set_penalty(&mut self, table: Vec<f64>) {
        let k = self.num_labels;
        assert_eq!(table.len(), k * k);
        for a in 0..k {
            assert_eq!(table[a * k + a], 0.0, "penalty diagonal must be zero");
            for b in 0..k {
                assert_eq!(table[a * k + b], table[b * k + a], "penalty must be symmetric");
            }
        }
        self.penalty = table;
    }

    pub fn penalty(&self, a: usize, b: usize) -> f64 {
        self.penalty[a * self.num_labels + b]
    }

    pub fn forbid(&mut self, node: usize, label: usize) {
        self.forbidden[node * self.num_labels + label] = true;
    }

    pub fn is_forbidden(&self, node: usize, label: usize) -> bool {
        self.forbidden[node * self.num_labels + label]
    }

    /// Locked nodes keep their initial label.
    pub fn lock(&mut self, node: usize) {
        self.locked[node] = true;
    }

    pub fn is_locked(&self, node: usize) -> bool {
        self.locked[node]
    }

    /// Energy of `labels`; infinite if a forbidden label is used.
    pub fn energy(&self, labels: &[usize]) -> f64 {
        assert_eq!(labels.len(), self.num_nodes);
        let mut e = 0.0;
        for (p, &l) in labels.iter().enumerate() {
            if self.is_forbidden(p, l) && !self.locked[p] {
                return f64::INFINITY;
            }
            e += self.unary(p, l);
        }
        for &(i, j, w) in &self.pairs {
            e += w * self.penalty(labels[i], labels[j]);
        }
        e
    }

    fn cheapest_allowed(&self, p: usize) -> Result<usize> {
        (0..self.num_labels)
            .filter(|&l| !self.is_forbidden(p, l))
            .min_by(|&a, &b| self.unary(p, a).total_cmp(&self.unary(p, b)))
            .ok_or(Error::Infeasible { node: p })
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub labels: Vec<usize>,
    pub initial_energy: f64,
    /// Energy after each completed sweep.
    pub sweep_energies: Vec<f64>,
}

impl ExpansionResult {
    pub fn energy(&self) -> f64 {
        self.sweep_energies.last().copied().unwrap_or(self.initial_energy)
    }
}

/// Minimizes the problem's energy with alpha-expansion moves, sweeping the
/// labels in ascending order until a sweep makes no improving move (at most
/// [`MAX_SWEEPS`] sweeps). Unlocked nodes whose initial label is forbidden
/// start from their cheapest allowed label.
pub fn solve_alpha_expansion(problem: &MultiLabelProblem, init: &[usize]) -> Result<ExpansionResult> {
    assert_eq!(init.len(), problem.num_nodes);
    let mut labels = init.to_vec();
    for p in 0..problem.num_nodes {
        if problem.locked[p] {
            continue;
        }
        if (0..problem.num_labels).all(|l| problem.is_forbidden(p, l)) {
            return Err(Error::Infeasible { node: p });
        }
        if problem.is_forbidden(p, labels[p]) {
            labels[p] = problem.cheapest_allowed(p)?;
        }
    }

    let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); problem.num_nodes];
    for &(i, j, w) in &problem.pairs {
        neighbors[i].push((j, w));
        neighbors[j].push((i, w));
    }

    let mut energy = problem.energy(&labels);
    let initial_energy = energy;
    let mut sweep_energies = Vec::new();
    for _ in 0..MAX_SWEEPS {
        let mut improved = false;
        for alpha in 0..problem.num_labels {
            if let Some(candidate) = expansion_move(problem, &labels, alpha) {
                let e = problem.energy(&candidate);
                if e < energy {
                    labels = candidate;
                    energy = e;
                    improved = true;
                }
            }
        }
        sweep_energies.push(energy);
        if !improved {
            break;
        }
    }
    Ok(ExpansionResult { labels, initial_energy, sweep_energies })
}

// Best labeling reachable from `labels` by switching any subset of the free
// nodes to `alpha`. Returns None when no node can switch.
fn expansion_move(problem: &MultiLabelProblem, labels: &[usize], alpha: usize) -> Option<Vec<usize>> {
    let n = problem.num_nodes;
    let mut var = vec![usize::MAX; n];
    let mut nodes = Vec::new();
    for p in 0..n {
        if !problem.locked[p] && labels[p] != alpha && !problem.is_forbidden(p, alpha) {
            var[p] = nodes.len();
            nodes.push(p);
        }
    }
    if nodes.is_empty() {
        return None;
    }

    // cost when keeping the label (x = 0, source side) or switching (x = 1)
    let mut keep: Vec<f64> = nodes.iter().map(|&p| problem.unary(p, labels[p])).collect();
    let mut switch: Vec<f64> = nodes.iter().map(|&p| problem.unary(p, alpha)).collect();
    let mut graph = MaxFlowGraph::new(nodes.len());
    for &(i, j, w) in &problem.pairs {
        let (vi, vj) = (var[i], var[j]);
        match (vi != usize::MAX, vj != usize::MAX) {
            (false, false) => {}
            (true, false) => {
                keep[vi] += w * problem.penalty(labels[i], labels[j]);
                switch[vi] += w * problem.penalty(alpha, labels[j]);
            }
            (false, true) => {
                keep[vj] += w * problem.penalty(labels[i], labels[j]);
                switch[vj] += w * problem.penalty(labels[i], alpha);
            }
            (true, true) => {
                let a = w * problem.penalty(labels[i], labels[j]);
                let b = w * problem.penalty(labels[i], alpha);
                let c = w * problem.penalty(alpha, labels[j]);
                // a + (c - a) x_i + (0 - c) x_j + (b + c - a) (1 - x_i) x_j
                keep[vi] += a;
                switch[vi] += c;
                switch[vj] -= c;
                let coupling = (b + c - a).max(0.0);
                if coupling > 0.0 {
                    graph.add_edge(vi, vj, coupling, 0.0);
                }
            }
        }
    }
    for v in 0..nodes.len() {
        let m = keep[v].min(switch[v]);
        graph.add_terminal(v, switch[v] - m, keep[v] - m);
    }
    graph.max_flow();

    let mut out = labels.to_vec();
    let mut changed = false;
    for (v, &p) in nodes.iter().enumerate() {
        if graph.side(v) == Side::Sink {
            out[p] = alpha;
            changed = true;
        }
    }
    changed.then_some(out)
}
