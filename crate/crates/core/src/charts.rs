//! Charts, chart boundaries and corners induced by a labeling, plus the
//! validity proxy computed from them.

use std::collections::VecDeque;

use crate::label::{Label, Labeling};
use crate::mesh::SurfaceMesh;

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub label: Label,
    pub triangles: Vec<usize>,
    /// Distinct edge-adjacent charts, ascending.
    pub neighbors: Vec<usize>,
}

/// A maximal path of mesh edges separating the same two charts. Open paths
/// start and end at corners; closed ones are cycles without corners.
///
/// The path is oriented so that chart `left` (always the smaller id) lies on
/// its left when seen from outside the surface. Edge `k` joins `vertices[k]`
/// and `vertices[k + 1]` (wrapping around for closed boundaries).
#[derive(Clone, Debug, PartialEq)]
pub struct Boundary {
    pub left: usize,
    pub right: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub closed: bool,
}

impl Boundary {
    pub fn edge_endpoints(&self, k: usize) -> (usize, usize) {
        (self.vertices[k], self.vertices[(k + 1) % self.vertices.len()])
    }

    pub fn other_chart(&self, c: usize) -> usize {
        if self.left == c {
            self.right
        } else {
            self.left
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Corner {
    pub vertex: usize,
    /// Number of boundary edges incident to the vertex.
    pub valency: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartGraph {
    chart_of: Vec<usize>,
    charts: Vec<Chart>,
    boundaries: Vec<Boundary>,
    corners: Vec<Corner>,
    edge_boundary: Vec<Option<usize>>,
    vertex_valency: Vec<usize>,
}

/// Breakdown of the validity proxy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Validity {
    /// Corners with valency at least 4.
    pub invalid_corners: usize,
    /// Boundaries between charts with opposite labels.
    pub invalid_boundaries: usize,
    /// Sum of `4 - N_c` over charts with fewer than 4 neighbors.
    pub chart_deficit: usize,
}

impl Validity {
    pub fn total(&self) -> usize {
        self.invalid_corners + self.invalid_boundaries + self.chart_deficit
    }
}

impl ChartGraph {
    pub fn chart_of(&self, t: usize) -> usize {
        self.chart_of[t]
    }

    pub fn chart_ids(&self) -> &[usize] {
        &self.chart_of
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, c: usize) -> &Chart {
        &self.charts[c]
    }

    pub fn num_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn boundaries(&self) -> &[Boundary] {
        &self.boundaries
    }

    pub fn boundary(&self, b: usize) -> &Boundary {
        &self.boundaries[b]
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    /// Boundary containing mesh edge `e`, if it separates two charts.
    pub fn boundary_of_edge(&self, e: usize) -> Option<usize> {
        self.edge_boundary[e]
    }

    /// Number of boundary edges incident to vertex `v`.
    pub fn vertex_valency(&self, v: usize) -> usize {
        self.vertex_valency[v]
    }

    pub fn is_corner(&self, v: usize) -> bool {
        self.vertex_valency[v] >= 3
    }

    /// Vertices incident to at least one boundary edge, ascending.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertex_valency.len()).filter(|&v| self.vertex_valency[v] > 0).collect()
    }

    /// Whether boundary `b` separates charts with opposite labels.
    pub fn is_opposite_boundary(&self, b: usize) -> bool {
        let bd = &self.boundaries[b];
        self.charts[bd.left].label.is_opposite(self.charts[bd.right].label)
    }

    pub fn invalid_charts(&self) -> Vec<usize> {
        (0..self.charts.len()).filter(|&c| self.charts[c].neighbors.len() < 4).collect()
    }

    pub fn invalid_boundaries(&self) -> Vec<usize> {
        (0..self.boundaries.len()).filter(|&b| self.is_opposite_boundary(b)).collect()
    }

    pub fn invalid_corners(&self) -> Vec<usize> {
        (0..self.corners.len()).filter(|&i| self.corners[i].valency >= 4).collect()
    }

    pub fn validity(&self) -> Validity {
        Validity {
            invalid_corners: self.invalid_corners().len(),
            invalid_boundaries: self.invalid_boundaries().len(),
            chart_deficit: self.charts.iter().map(|c| 4usize.saturating_sub(c.neighbors.len())).sum(),
        }
    }

    /// Labeling rebuilt from chart labels.
    pub fn to_labeling(&self) -> Labeling {
        Labeling::new(self.chart_of.iter().map(|&c| self.charts[c].label).collect())
    }
}

/// Validity proxy: invalid corners plus opposite-label boundaries plus the
/// neighbor deficit of charts with fewer than four neighbors. Zero means
/// pseudo-valid.
pub fn validity_proxy(g: &ChartGraph) -> usize {
    g.validity().total()
}

pub fn extract_charts(mesh: &SurfaceMesh, l: &Labeling) -> ChartGraph {
    let nt = mesh.num_triangles();
    debug_assert_eq!(l.len(), nt);

    // flood fill in triangle order so chart ids are deterministic
    let mut chart_of = vec![usize::MAX; nt];
    let mut charts: Vec<Chart> = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..nt {
        if chart_of[seed] != usize::MAX {
            continue;
        }
        let id = charts.len();
        let label = l.label(seed);
        let mut triangles = Vec::new();
        chart_of[seed] = id;
        queue.push_back(seed);
        while let Some(t) = queue.pop_front() {
            triangles.push(t);
            for n in mesh.triangle_neighbors(t) {
                if chart_of[n] == usize::MAX && l.label(n) == label {
                    chart_of[n] = id;
                    queue.push_back(n);
                }
            }
        }
        triangles.sort_unstable();
        charts.push(Chart { label, triangles, neighbors: Vec::new() });
    }

    let nv = mesh.num_vertices();
    let mut vertex_valency = vec![0usize; nv];
    let mut is_boundary = vec![false; mesh.num_edges()];
    for (e, edge) in mesh.edges().iter().enumerate() {
        let [c0, c1] = edge.triangles.map(|t| chart_of[t]);
        if c0 != c1 {
            is_boundary[e] = true;
            vertex_valency[edge.vertices[0]] += 1;
            vertex_valency[edge.vertices[1]] += 1;
            charts[c0].neighbors.push(c1);
            charts[c1].neighbors.push(c0);
        }
    }
    for c in &mut charts {
        c.neighbors.sort_unstable();
        c.neighbors.dedup();
    }

    let corners: Vec<Corner> = (0..nv)
        .filter(|&v| vertex_valency[v] >= 3)
        .map(|v| Corner { vertex: v, valency: vertex_valency[v] })
        .collect();

    let mut edge_boundary = vec![None; mesh.num_edges()];
    let mut boundaries = Vec::new();
    let mut walk = |start: usize, first_edge: usize, edge_boundary: &mut Vec<Option<usize>>| {
        let id = boundaries.len();
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut current = start;
        let mut e = first_edge;
        let closed = loop {
            edge_boundary[e] = Some(id);
            edges.push(e);
            let next = mesh.edge(e).other_vertex(current);
            if next == start && vertex_valency[next] < 3 {
                break true;
            }
            vertices.push(next);
            if vertex_valency[next] >= 3 {
                break false;
            }
            current = next;
            match mesh
                .vertex_edges(next)
                .iter()
                .copied()
                .find(|&f| f != e && is_boundary[f] && edge_boundary[f].is_none())
            {
                Some(f) => e = f,
                None => unreachable!("regular boundary vertex {next} must continue the path"),
            }
        };
        let [t0, t1] = mesh.edge(edges[0]).triangles;
        let (c0, c1) = (chart_of[t0], chart_of[t1]);
        let (left, right) = (c0.min(c1), c0.max(c1));
        let left_tri = if c0 == left { t0 } else { t1 };
        let mut bd = Boundary { left, right, vertices, edges, closed };
        let (a, b) = bd.edge_endpoints(0);
        if !mesh.has_directed_edge(left_tri, a, b) {
            if closed {
                bd.vertices[1..].reverse();
            } else {
                bd.vertices.reverse();
            }
            bd.edges.reverse();
        }
        boundaries.push(bd);
    };

    for corner in &corners {
        for &e in mesh.vertex_edges(corner.vertex) {
            if is_boundary[e] && edge_boundary[e].is_none() {
                walk(corner.vertex, e, &mut edge_boundary);
            }
        }
    }
    for e in 0..mesh.num_edges() {
        if is_boundary[e] && edge_boundary[e].is_none() {
            let start = mesh.edge(e).vertices[0];
            walk(start, e, &mut edge_boundary);
        }
    }

    ChartGraph { chart_of, charts, boundaries, corners, edge_boundary, vertex_valency }
}
