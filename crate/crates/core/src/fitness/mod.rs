//! Fitness of a labeling: validity proxy, workability of the fast surface
//! polycube, normal fidelity and corner count.

mod distortion;
mod polycube;

pub use distortion::{
    area_integrand, singular_values_2x2, triangle_jacobian, workability_from_singular, workability_integrand, CLAMP,
    MIN_SINGULAR_VALUE,
};
pub use polycube::{fast_surface_polycube, AxisSystem, FastPolycube, MAX_ITERATIONS};

use serde::{Deserialize, Serialize};

use crate::charts::{extract_charts, validity_proxy, ChartGraph, Validity};
use crate::label::{Label, Labeling};
use crate::mesh::SurfaceMesh;
use crate::mutations::smooth_boundaries;
use crate::turning::detect_turning_points;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessWeights {
    pub workability: f64,
    pub fidelity: f64,
    pub compactness: f64,
}

impl Default for FitnessWeights {
    fn default() -> Self {
        FitnessWeights { workability: 1e2, fidelity: 1e-2, compactness: 1e-2 }
    }
}

/// Fitness components; lower `total` is better.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessValue {
    pub v_p: usize,
    pub e_w: f64,
    pub e_f: f64,
    pub e_c: usize,
    pub total: f64,
}

impl FitnessValue {
    pub fn new(v_p: usize, e_w: f64, e_f: f64, e_c: usize, w: &FitnessWeights) -> Self {
        let total = v_p as f64 + w.workability * e_w + w.fidelity * e_f + w.compactness * e_c as f64;
        FitnessValue { v_p, e_w, e_f, e_c, total }
    }

    pub fn is_pseudo_valid(&self) -> bool {
        self.v_p == 0
    }
}

/// Clamped workability integrand of triangle `t`.
pub fn triangle_distortion(mesh: &SurfaceMesh, l: &Labeling, pc: &FastPolycube, t: usize) -> f64 {
    workability_integrand(&triangle_jacobian(mesh, &pc.positions, l.label(t), t))
}

/// Area-weighted mean of the squared workability integrand.
pub fn workability(mesh: &SurfaceMesh, l: &Labeling, pc: &FastPolycube) -> f64 {
    let sum: f64 = (0..mesh.num_triangles())
        .map(|t| {
            let e = triangle_distortion(mesh, l, pc, t);
            mesh.area(t) * e * e
        })
        .sum();
    sum / mesh.total_area()
}

/// Area-weighted mean of `(s1 s2 + 1 / (s1 s2)) / 2`; 1 for an
/// area-preserving map.
pub fn area_distortion(mesh: &SurfaceMesh, l: &Labeling, pc: &FastPolycube) -> f64 {
    let sum: f64 = (0..mesh.num_triangles())
        .map(|t| mesh.area(t) * area_integrand(&triangle_jacobian(mesh, &pc.positions, l.label(t), t)))
        .sum();
    sum / mesh.total_area()
}

/// Area-weighted mean of `1 - n . d`, in `[0, 2]`.
pub fn fidelity_error(mesh: &SurfaceMesh, l: &Labeling) -> f64 {
    let sum: f64 = (0..mesh.num_triangles())
        .map(|t| mesh.area(t) * (1.0 - mesh.normal(t).dot(&l.label(t).direction())))
        .sum();
    sum / mesh.total_area()
}

/// Number of corners.
pub fn compactness(g: &ChartGraph) -> usize {
    g.corners().len()
}

/// Fitness of `l` exactly as given, without the smoothing pass.
pub fn evaluate_unsmoothed(mesh: &SurfaceMesh, l: &Labeling, w: &FitnessWeights) -> FitnessValue {
    let g = extract_charts(mesh, l);
    let e_w = match fast_surface_polycube(mesh, &g) {
        Ok(pc) => workability(mesh, l, &pc),
        Err(err) => {
            log::debug!("fast polycube failed: {err}");
            CLAMP
        }
    };
    FitnessValue::new(validity_proxy(&g), e_w, fidelity_error(mesh, l), compactness(&g), w)
}

/// Smooths `l` and evaluates the result, returning both.
pub fn evaluate_smoothed(mesh: &SurfaceMesh, l: &Labeling, w: &FitnessWeights) -> (Labeling, FitnessValue) {
    let smoothed = smooth_boundaries(mesh, l);
    let fitness = evaluate_unsmoothed(mesh, &smoothed, w);
    (smoothed, fitness)
}

/// Fitness of `l` after boundary smoothing.
pub fn evaluate_fitness(mesh: &SurfaceMesh, l: &Labeling, w: &FitnessWeights) -> FitnessValue {
    evaluate_smoothed(mesh, l, w).1
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartStats {
    pub id: usize,
    pub label: String,
    pub triangles: usize,
    pub area: f64,
    pub neighbors: usize,
    pub fidelity: f64,
    pub coordinate: Option<f64>,
}

/// Everything the command line reports about a labeling.
#[derive(Clone, Debug, Serialize)]
pub struct FitnessReport {
    #[serde(flatten)]
    pub fitness: FitnessValue,
    pub d_a: f64,
    pub validity: Validity,
    pub charts: usize,
    pub boundaries: usize,
    pub corners: usize,
    pub turning_points: usize,
    pub polycube_error: Option<String>,
    pub residual: Option<f64>,
    pub chart_stats: Vec<ChartStats>,
}

/// Report for `l` as given (no smoothing).
pub fn fitness_report(mesh: &SurfaceMesh, l: &Labeling, w: &FitnessWeights) -> FitnessReport {
    let g = extract_charts(mesh, l);
    let polycube = fast_surface_polycube(mesh, &g);
    let (e_w, d_a, polycube_error, residual) = match &polycube {
        Ok(pc) => (workability(mesh, l, pc), area_distortion(mesh, l, pc), None, Some(pc.residual)),
        Err(err) => (CLAMP, CLAMP, Some(err.to_string()), None),
    };
    let fitness = FitnessValue::new(validity_proxy(&g), e_w, fidelity_error(mesh, l), compactness(&g), w);
    let chart_stats = g
        .charts()
        .iter()
        .enumerate()
        .map(|(id, c)| {
            let area: f64 = c.triangles.iter().map(|&t| mesh.area(t)).sum();
            let dir = c.label.direction();
            let misfit: f64 = c.triangles.iter().map(|&t| mesh.area(t) * (1.0 - mesh.normal(t).dot(&dir))).sum();
            ChartStats {
                id,
                label: c.label.to_string(),
                triangles: c.triangles.len(),
                area,
                neighbors: c.neighbors.len(),
                fidelity: misfit / area,
                coordinate: polycube.as_ref().ok().map(|pc| pc.chart_coordinates[id]),
            }
        })
        .collect();
    FitnessReport {
        fitness,
        d_a,
        validity: g.validity(),
        charts: g.num_charts(),
        boundaries: g.boundaries().len(),
        corners: g.corners().len(),
        turning_points: detect_turning_points(mesh, &g).count(),
        polycube_error,
        residual,
        chart_stats,
    }
}

/// Labeling with every triangle set to `label`; handy for tests and tools.
pub fn uniform_labeling(mesh: &SurfaceMesh, label: Label) -> Labeling {
    Labeling::uniform(mesh.num_triangles(), label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::naive_normal_labeling;
    use crate::shapes;

    #[test]
    fn cube_components() {
        let mesh = shapes::unit_cube();
        let l = naive_normal_labeling(&mesh);
        let f = evaluate_fitness(&mesh, &l, &FitnessWeights::default());
        assert_eq!(f.v_p, 0);
        assert_eq!(f.e_c, 8);
        assert!((f.e_w - 1.0).abs() < 1e-12);
        assert!(f.e_f.abs() < 1e-15);
        assert!((f.total - 100.08).abs() < 1e-9);
        let r = fitness_report(&mesh, &l, &FitnessWeights::default());
        assert!((r.d_a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flipped_cube_fidelity_is_two() {
        let mesh = shapes::unit_cube();
        let l = naive_normal_labeling(&mesh);
        let flipped = Labeling::new(l.labels().iter().map(|x| x.opposite()).collect());
        assert!((fidelity_error(&mesh, &flipped) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_weights_leave_validity() {
        let mesh = shapes::subdivided_cube(2);
        let l = uniform_labeling(&mesh, Label::POS_Z);
        let w = FitnessWeights { workability: 0.0, fidelity: 0.0, compactness: 0.0 };
        let f = evaluate_fitness(&mesh, &l, &w);
        assert_eq!(f.total, 4.0);
        assert_eq!(f.v_p, 4);
    }

    #[test]
    fn one_flipped_face_is_worse() {
        let mesh = shapes::unit_cube();
        let mut l = naive_normal_labeling(&mesh);
        let base = evaluate_fitness(&mesh, &l, &FitnessWeights::default()).total;
        let t = 0;
        let flipped = l.label(t).opposite();
        l.set(t, flipped, 1);
        assert!(evaluate_fitness(&mesh, &l, &FitnessWeights::default()).total > base);
    }
}
