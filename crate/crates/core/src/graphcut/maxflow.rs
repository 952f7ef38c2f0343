//! Max-flow / min-cut with two search trees grown from the terminals and
//! orphan adoption after each augmentation (Boykov-Kolmogorov style).
//!
//! Terminal links are stored as a single signed residual per node: positive
//! values are residual capacity from the source, negative values residual
//! capacity to the sink.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Source,
    Sink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tree {
    Free,
    Source,
    Sink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Parent {
    None,
    Terminal,
    // source tree: arc pointing into the node; sink tree: arc leaving it
    Arc(usize),
}

#[derive(Clone, Debug)]
pub struct MaxFlowGraph {
    adjacency: Vec<Vec<usize>>,
    // arc `a` and `a ^ 1` are sisters
    head: Vec<usize>,
    residual: Vec<f64>,
    terminal: Vec<f64>,
    base_flow: f64,
    tree: Vec<Tree>,
}

impl MaxFlowGraph {
    pub fn new(num_nodes: usize) -> Self {
        MaxFlowGraph {
            adjacency: vec![Vec::new(); num_nodes],
            head: Vec::new(),
            residual: Vec::new(),
            terminal: vec![0.0; num_nodes],
            base_flow: 0.0,
            tree: vec![Tree::Free; num_nodes],
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    /// Adds arcs `i -> j` and `j -> i` with the given capacities.
    pub fn add_edge(&mut self, i: usize, j: usize, cap_ij: f64, cap_ji: f64) {
        debug_assert!(cap_ij >= 0.0 && cap_ji >= 0.0);
        let a = self.head.len();
        self.head.push(j);
        self.residual.push(cap_ij);
        self.head.push(i);
        self.residual.push(cap_ji);
        self.adjacency[i].push(a);
        self.adjacency[j].push(a + 1);
    }

    /// Adds capacity from the source to `i` and from `i` to the sink. The
    /// common part of both is pushed immediately.
    pub fn add_terminal(&mut self, i: usize, cap_source: f64, cap_sink: f64) {
        debug_assert!(cap_source >= 0.0 && cap_sink >= 0.0);
        let (mut s, mut t) = (cap_source, cap_sink);
        let delta = self.terminal[i];
        if delta > 0.0 {
            s += delta;
        } else {
            t -= delta;
        }
        self.base_flow += s.min(t);
        self.terminal[i] = s - t;
    }

    fn tail(&self, a: usize) -> usize {
        self.head[a ^ 1]
    }

    /// Computes the maximum flow. Afterwards `side` reports a minimum cut:
    /// the source side is exactly the set reachable from the source in the
    /// residual graph.
    pub fn max_flow(&mut self) -> f64 {
        let n = self.num_nodes();
        let mut parent = vec![Parent::None; n];
        let mut stamp = vec![0u64; n];
        let mut time = 0u64;
        let mut active = VecDeque::new();
        let mut orphans: Vec<usize> = Vec::new();
        let mut flow = self.base_flow;

        for v in 0..n {
            self.tree[v] = Tree::Free;
            if self.terminal[v] > 0.0 {
                self.tree[v] = Tree::Source;
                parent[v] = Parent::Terminal;
                active.push_back(v);
            } else if self.terminal[v] < 0.0 {
                self.tree[v] = Tree::Sink;
                parent[v] = Parent::Terminal;
                active.push_back(v);
            }
        }

        loop {
            // growth: find an arc from the source tree into the sink tree
            let mut bridge = None;
            while let Some(p) = active.pop_front() {
                match self.tree[p] {
                    Tree::Free => continue,
                    Tree::Source => {
                        for &a in &self.adjacency[p] {
                            if self.residual[a] <= 0.0 {
                                continue;
                            }
                            let q = self.head[a];
                            match self.tree[q] {
                                Tree::Free => {
                                    self.tree[q] = Tree::Source;
                                    parent[q] = Parent::Arc(a);
                                    active.push_back(q);
                                }
                                Tree::Sink => {
                                    bridge = Some(a);
                                    break;
                                }
                                Tree::Source => {}
                            }
                        }
                    }
                    Tree::Sink => {
                        for &a in &self.adjacency[p] {
                            let into = a ^ 1;
                            if self.residual[into] <= 0.0 {
                                continue;
                            }
                            let q = self.head[a];
                            match self.tree[q] {
                                Tree::Free => {
                                    self.tree[q] = Tree::Sink;
                                    parent[q] = Parent::Arc(into);
                                    active.push_back(q);
                                }
                                Tree::Source => {
                                    bridge = Some(into);
                                    break;
                                }
                                Tree::Sink => {}
                            }
                        }
                    }
                }
                if bridge.is_some() {
                    active.push_front(p);
                    break;
                }
            }
            let Some(bridge) = bridge else { break };

            // augmentation
            let mut amount = self.residual[bridge];
            let mut v = self.tail(bridge);
            while let Parent::Arc(a) = parent[v] {
                amount = amount.min(self.residual[a]);
                v = self.tail(a);
            }
            amount = amount.min(self.terminal[v]);
            let mut v = self.head[bridge];
            while let Parent::Arc(a) = parent[v] {
                amount = amount.min(self.residual[a]);
                v = self.head[a];
            }
            amount = amount.min(-self.terminal[v]);

            self.residual[bridge] -= amount;
            self.residual[bridge ^ 1] += amount;
            let mut v = self.tail(bridge);
            while let Parent::Arc(a) = parent[v] {
                self.residual[a] -= amount;
                self.residual[a ^ 1] += amount;
                let up = self.tail(a);
                if self.residual[a] <= 0.0 {
                    parent[v] = Parent::None;
                    orphans.push(v);
                }
                v = up;
            }
            self.terminal[v] -= amount;
            if self.terminal[v] <= 0.0 {
                parent[v] = Parent::None;
                orphans.push(v);
            }
            let mut v = self.head[bridge];
            while let Parent::Arc(a) = parent[v] {
                self.residual[a] -= amount;
                self.residual[a ^ 1] += amount;
                let up = self.head[a];
                if self.residual[a] <= 0.0 {
                    parent[v] = Parent::None;
                    orphans.push(v);
                }
                v = up;
            }
            self.terminal[v] += amount;
            if self.terminal[v] >= 0.0 {
                parent[v] = Parent::None;
                orphans.push(v);
            }
            flow += amount;

            // adoption
            time += 1;
            while let Some(p) = orphans.pop() {
                self.adopt(p, &mut parent, &mut stamp, time, &mut active, &mut orphans);
            }
        }
        flow
    }

    // Whether `q`'s parent chain reaches its terminal. Verified nodes are
    // stamped with `time` so later walks can stop early.
    fn rooted(&self, q: usize, parent: &[Parent], stamp: &mut [u64], time: u64) -> bool {
        let source = self.tree[q] == Tree::Source;
        let mut v = q;
        let ok = loop {
            if stamp[v] == time {
                break true;
            }
            match parent[v] {
                Parent::Terminal => break true,
                Parent::None => break false,
                Parent::Arc(a) => v = if source { self.tail(a) } else { self.head[a] },
            }
        };
        if ok {
            let mut v = q;
            while stamp[v] != time {
                stamp[v] = time;
                match parent[v] {
                    Parent::Arc(a) => v = if source { self.tail(a) } else { self.head[a] },
                    _ => break,
                }
            }
        }
        ok
    }

    fn adopt(
        &mut self,
        p: usize,
        parent: &mut [Parent],
        stamp: &mut [u64],
        time: u64,
        active: &mut VecDeque<usize>,
        orphans: &mut Vec<usize>,
    ) {
        let tree = self.tree[p];
        let source = tree == Tree::Source;
        for &a in &self.adjacency[p] {
            let q = self.head[a];
            if self.tree[q] != tree {
                continue;
            }
            // the arc that would link p into q's tree
            let link = if source { a ^ 1 } else { a };
            if self.residual[link] > 0.0 && self.rooted(q, parent, stamp, time) {
                parent[p] = Parent::Arc(link);
                return;
            }
        }
        for &a in &self.adjacency[p] {
            let q = self.head[a];
            if self.tree[q] != tree {
                continue;
            }
            let toward_p = if source { a ^ 1 } else { a };
            if self.residual[toward_p] > 0.0 {
                active.push_back(q);
            }
            let child_link = if source { a } else { a ^ 1 };
            if parent[q] == Parent::Arc(child_link) {
                parent[q] = Parent::None;
                orphans.push(q);
            }
        }
        self.tree[p] = Tree::Free;
        parent[p] = Parent::None;
    }

    /// Side of node `i` in the minimum cut found by the last `max_flow`.
    pub fn side(&self, i: usize) -> Side {
        if self.tree[i] == Tree::Source {
            Side::Source
        } else {
            Side::Sink
        }
    }
}

/// Convenience wrapper returning the flow value and every node's side.
pub fn max_flow_min_cut(g: &mut MaxFlowGraph) -> (f64, Vec<Side>) {
    let flow = g.max_flow();
    let sides = (0..g.num_nodes()).map(|i| g.side(i)).collect();
    (flow, sides)
}
