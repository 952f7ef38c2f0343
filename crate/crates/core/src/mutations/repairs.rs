use rayon::prelude::*;

use super::region::grow_region;
use crate::charts::{extract_charts, ChartGraph};
use crate::fitness::{evaluate_fitness, FitnessValue, FitnessWeights};
use crate::label::{Label, Labeling};
use crate::mesh::SurfaceMesh;

/// Band sizes tried by the repairs, in multiples of the average edge length.
pub const REPAIR_SIZES: [f64; 3] = [1.0, 2.0, 3.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandSide {
    Both,
    Left,
    Right,
}

struct Candidate {
    region: Vec<usize>,
    label: Label,
}

// Applies every candidate, evaluates it and returns the best one (first
// wins ties). Candidates are evaluated in parallel but compared in order.
// The winner is kept only if it lowers the total or the validity proxy of
// `l`; a repair that makes everything worse is skipped.
fn best_candidate(
    mesh: &SurfaceMesh,
    l: &Labeling,
    candidates: Vec<Candidate>,
    w: &FitnessWeights,
    generation: u32,
) -> Option<Labeling> {
    let evaluated: Vec<(FitnessValue, Labeling)> = candidates
        .into_par_iter()
        .map(|c| {
            let mut out = l.clone();
            for &t in &c.region {
                out.set(t, c.label, generation);
            }
            (evaluate_fitness(mesh, &out, w), out)
        })
        .collect();
    let mut best: Option<(FitnessValue, Labeling)> = None;
    for (f, out) in evaluated {
        if best.as_ref().is_none_or(|(b, _)| f.total < b.total) {
            best = Some((f, out));
        }
    }
    let (f, out) = best?;
    let current = evaluate_fitness(mesh, l, w);
    if f.total <= current.total || f.v_p < current.v_p {
        Some(out)
    } else {
        log::debug!("repair skipped: best candidate {:.6} vs current {:.6}", f.total, current.total);
        None
    }
}

// Labels orthogonal to the boundary's (shared) axis.
fn remaining_labels(axis: usize) -> Vec<Label> {
    Label::ALL.into_iter().filter(|l| l.axis() != axis).collect()
}

fn opposite_edge(mesh: &SurfaceMesh, l: &Labeling, e: usize) -> bool {
    let [a, b] = mesh.edge(e).triangles;
    l.label(a).is_opposite(l.label(b))
}

/// Inserts a chart of a new label along every boundary between opposite
/// labels, choosing side, label and size by fitness. Boundaries are
/// handled in id order of the input's chart graph; one already fixed by an
/// earlier insertion is skipped.
pub fn repair_opposite_boundary(mesh: &SurfaceMesh, l: &Labeling, w: &FitnessWeights, generation: u32) -> Labeling {
    let initial = extract_charts(mesh, l);
    let targets: Vec<Vec<usize>> =
        initial.invalid_boundaries().into_iter().map(|b| initial.boundary(b).edges.clone()).collect();
    let l_avg = mesh.avg_edge_length();
    let mut current = l.clone();
    for edges in targets {
        let Some(&e) = edges.iter().find(|&&e| opposite_edge(mesh, &current, e)) else {
            continue;
        };
        let g = extract_charts(mesh, &current);
        let b = g.boundary_of_edge(e).expect("opposite edge lies on a boundary");
        let bd = g.boundary(b);
        let (left, right) = (bd.left, bd.right);
        let axis = g.chart(left).label.axis();
        let mut candidates = Vec::new();
        for side in [BandSide::Both, BandSide::Left, BandSide::Right] {
            for label in remaining_labels(axis) {
                for size in REPAIR_SIZES {
                    let region = grow_region(mesh, &bd.vertices, size * l_avg, |t| {
                        let c = g.chart_of(t);
                        match side {
                            BandSide::Both => c == left || c == right,
                            BandSide::Left => c == left,
                            BandSide::Right => c == right,
                        }
                    });
                    candidates.push(Candidate { region, label });
                }
            }
        }
        if let Some(best) = best_candidate(mesh, &current, candidates, w, generation) {
            current = best;
        }
    }
    current
}

/// Labels not carried by any chart around vertex `v`.
fn labels_missing_at(mesh: &SurfaceMesh, g: &ChartGraph, v: usize) -> Vec<Label> {
    let mut present = [false; 6];
    for &t in mesh.vertex_triangles(v) {
        present[g.chart(g.chart_of(t)).label.index()] = true;
    }
    Label::ALL.into_iter().filter(|l| !present[l.index()]).collect()
}

/// Inserts a disk of a new label around every corner of valency four or
/// more, choosing label and size by fitness. Corners are handled in
/// ascending vertex order; corners whose neighborhood already carries all
/// six labels are skipped with a warning.
pub fn repair_high_valency_corner(mesh: &SurfaceMesh, l: &Labeling, w: &FitnessWeights, generation: u32) -> Labeling {
    let initial = extract_charts(mesh, l);
    let targets: Vec<usize> = initial.invalid_corners().into_iter().map(|i| initial.corners()[i].vertex).collect();
    let l_avg = mesh.avg_edge_length();
    let mut current = l.clone();
    for v in targets {
        let g = extract_charts(mesh, &current);
        if g.vertex_valency(v) < 4 {
            continue;
        }
        let labels = labels_missing_at(mesh, &g, v);
        if labels.is_empty() {
            log::warn!("corner at vertex {v} touches all six labels; leaving it to mutations");
            continue;
        }
        let mut candidates = Vec::new();
        for &label in &labels {
            for size in REPAIR_SIZES {
                let region = grow_region(mesh, &[v], size * l_avg, |_| true);
                candidates.push(Candidate { region, label });
            }
        }
        if let Some(best) = best_candidate(mesh, &current, candidates, w, generation) {
            current = best;
        }
    }
    current
}

/// Both repairs, opposite boundaries first.
pub fn repair(mesh: &SurfaceMesh, l: &Labeling, w: &FitnessWeights, generation: u32) -> Labeling {
    let l = repair_opposite_boundary(mesh, l, w, generation);
    repair_high_valency_corner(mesh, &l, w, generation)
}
