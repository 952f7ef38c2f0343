//! Alpha-expansion on the triangle dual graph, used for the initial
//! labeling and for relabeling removed charts.

mod expansion;
mod maxflow;

pub use expansion::{solve_alpha_expansion, ExpansionResult, MultiLabelProblem, MAX_SWEEPS};
pub use maxflow::{max_flow_min_cut, MaxFlowGraph, Side};

use crate::error::Result;
use crate::label::{naive_normal_labeling, Label, Labeling};
use crate::mesh::SurfaceMesh;

/// Default ratio between the unary and binary weights.
pub const DEFAULT_RATIO: f64 = 3.0;

/// Width of the Gaussian on `n1 . n2 - 1` that makes nearly coplanar
/// neighbors expensive to separate.
pub const COPLANARITY_WIDTH: f64 = 0.25;

/// Cost of giving triangle `t` label `l`: area-weighted misalignment.
pub fn unary_cost(mesh: &SurfaceMesh, t: usize, l: Label, ratio: f64) -> f64 {
    let misalignment = (1.0 - mesh.normal(t).dot(&l.direction())).max(0.0);
    ratio * mesh.area(t) / mesh.avg_area() * misalignment
}

/// Weight of the Potts term between the two triangles of edge `e`.
pub fn edge_weight(mesh: &SurfaceMesh, e: usize) -> f64 {
    let [a, b] = mesh.edge(e).triangles;
    let x = (mesh.normal(a).dot(&mesh.normal(b)) - 1.0) / COPLANARITY_WIDTH;
    (-0.5 * x * x).exp()
}

/// The six-label problem on the triangle dual graph.
pub fn labeling_problem(mesh: &SurfaceMesh, ratio: f64) -> MultiLabelProblem {
    let mut p = MultiLabelProblem::new(mesh.num_triangles(), 6);
    for t in 0..mesh.num_triangles() {
        for l in Label::ALL {
            p.set_unary(t, l.index(), unary_cost(mesh, t, l, ratio));
        }
    }
    for (e, edge) in mesh.edges().iter().enumerate() {
        p.add_pair(edge.triangles[0], edge.triangles[1], edge_weight(mesh, e));
    }
    p
}

fn to_labels(codes: &[usize]) -> Vec<Label> {
    codes.iter().map(|&c| Label::ALL[c]).collect()
}

/// Graph-cut labeling started from the naive normal labeling. Neighbors
/// with opposite labels are allowed; all stamps are 0.
pub fn graphcut_initial_labeling(mesh: &SurfaceMesh, ratio: f64) -> Labeling {
    assert!(ratio > 0.0, "ratio must be positive");
    let problem = labeling_problem(mesh, ratio);
    let init: Vec<usize> = naive_normal_labeling(mesh).labels().iter().map(|l| l.index()).collect();
    let result = solve_alpha_expansion(&problem, &init).expect("no label is forbidden");
    Labeling::new(to_labels(&result.labels))
}

/// Relabels `region` with the initial-labeling energy while every other
/// triangle stays fixed and `exclude` is forbidden inside the region.
/// Returns the new label of each region triangle, in region order.
pub fn relabel_region(
    mesh: &SurfaceMesh,
    labeling: &Labeling,
    region: &[usize],
    exclude: Label,
    ratio: f64,
) -> Result<Vec<Label>> {
    let mut problem = labeling_problem(mesh, ratio);
    let mut inside = vec![false; mesh.num_triangles()];
    for &t in region {
        inside[t] = true;
        problem.forbid(t, exclude.index());
    }
    for t in 0..mesh.num_triangles() {
        if !inside[t] {
            problem.lock(t);
        }
    }
    let init: Vec<usize> = labeling.labels().iter().map(|l| l.index()).collect();
    let result = solve_alpha_expansion(&problem, &init)?;
    Ok(region.iter().map(|&t| Label::ALL[result.labels[t]]).collect())
}
