//! Fast surface polycube: each chart is flattened onto a shared coordinate
//! along its label axis while edge vectors on the other axes are preserved
//! in the least-squares sense.
//!
//! The three axes decouple. On axis `a`, every vertex touching a chart whose
//! label lies on `a` is replaced by that chart's shared variable; same-axis
//! charts meeting at a vertex share one variable. Every other vertex keeps a
//! free coordinate. The objective is
//! `sum over edges (x_i - x_j - (p_i - p_j))^2`, a graph Laplacian system
//! solved by preconditioned conjugate gradients after pinning one variable
//! per connected component.

use crate::charts::ChartGraph;
use crate::error::{Error, Result};
use crate::mesh::{SurfaceMesh, Vec3};

pub const MAX_ITERATIONS: usize = 5000;
pub const RELATIVE_TOLERANCE: f64 = 1e-8;
/// Gradient norm above which hitting the iteration cap is an error.
pub const FAILURE_GRADIENT: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct FastPolycube {
    pub positions: Vec<Vec3>,
    /// Shared coordinate of each chart on its label axis.
    pub chart_coordinates: Vec<f64>,
    /// Final least-squares objective summed over the three axes.
    pub residual: f64,
}

/// Variable layout of one axis.
#[derive(Clone, Debug)]
pub struct AxisSystem {
    /// Variable of each vertex.
    pub var_of: Vec<usize>,
    pub num_vars: usize,
    /// Initial value of each variable; pinned variables keep it.
    pub start: Vec<f64>,
    pub pinned: Vec<bool>,
    /// Edges between distinct variables with their target difference
    /// `x_i - x_j`.
    pub terms: Vec<(usize, usize, f64)>,
    /// Objective contribution of edges collapsed onto a single variable.
    pub constant: f64,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl AxisSystem {
    pub fn build(mesh: &SurfaceMesh, g: &ChartGraph, axis: usize) -> AxisSystem {
        let nv = mesh.num_vertices();
        let nc = g.num_charts();

        // merge same-axis charts that meet at a vertex
        let mut parent: Vec<usize> = (0..nc).collect();
        let mut vertex_chart = vec![usize::MAX; nv];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let c = g.chart_of(t);
            if g.chart(c).label.axis() != axis {
                continue;
            }
            for &v in tri {
                if vertex_chart[v] == usize::MAX {
                    vertex_chart[v] = c;
                } else {
                    let (a, b) = (find(&mut parent, vertex_chart[v]), find(&mut parent, c));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }

        let mut group_var = vec![usize::MAX; nc];
        let mut num_vars = 0;
        for c in 0..nc {
            if g.chart(c).label.axis() == axis {
                let root = find(&mut parent, c);
                if group_var[root] == usize::MAX {
                    group_var[root] = num_vars;
                    num_vars += 1;
                }
            }
        }
        let num_groups = num_vars;
        let mut var_of = vec![usize::MAX; nv];
        for v in 0..nv {
            if vertex_chart[v] != usize::MAX {
                var_of[v] = group_var[find(&mut parent, vertex_chart[v])];
            } else {
                var_of[v] = num_vars;
                num_vars += 1;
            }
        }

        let mut start = vec![0.0; num_vars];
        let mut count = vec![0usize; num_groups];
        for v in 0..nv {
            let x = mesh.vertex(v)[axis];
            let k = var_of[v];
            if k < num_groups {
                start[k] += x;
                count[k] += 1;
            } else {
                start[k] = x;
            }
        }
        for k in 0..num_groups {
            start[k] /= count[k] as f64;
        }

        let mut terms = Vec::with_capacity(mesh.num_edges());
        let mut constant = 0.0;
        let mut comp: Vec<usize> = (0..num_vars).collect();
        for edge in mesh.edges() {
            let [i, j] = edge.vertices;
            let d = mesh.vertex(i)[axis] - mesh.vertex(j)[axis];
            let (vi, vj) = (var_of[i], var_of[j]);
            if vi == vj {
                constant += d * d;
            } else {
                terms.push((vi, vj, d));
                let (a, b) = (find(&mut comp, vi), find(&mut comp, vj));
                if a != b {
                    comp[a.max(b)] = a.min(b);
                }
            }
        }
        // the smallest index of a component is its root: pin it
        let pinned = (0..num_vars).map(|k| find(&mut comp, k) == k).collect();

        AxisSystem { var_of, num_vars, start, pinned, terms, constant }
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|&(i, j, d)| {
                    let r = x[i] - x[j] - d;
                    r * r
                })
                .sum::<f64>()
    }

    /// Gradient of the objective with respect to every variable (pinned
    /// ones included).
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut grad = vec![0.0; self.num_vars];
        for &(i, j, d) in &self.terms {
            let r = 2.0 * (x[i] - x[j] - d);
            grad[i] += r;
            grad[j] -= r;
        }
        grad
    }

    /// Minimizes the objective over the unpinned variables.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.num_vars;
        let mut diag = vec![0.0; n];
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, &(i, j, _)) in self.terms.iter().enumerate() {
            diag[i] += 1.0;
            diag[j] += 1.0;
            adjacency[i].push(k);
            adjacency[j].push(k);
        }
        let apply = |p: &[f64], out: &mut [f64]| {
            for v in 0..n {
                if self.pinned[v] {
                    out[v] = 0.0;
                    continue;
                }
                let mut s = 0.0;
                for &k in &adjacency[v] {
                    let (i, j, _) = self.terms[k];
                    s += if i == v { p[i] - p[j] } else { p[j] - p[i] };
                }
                out[v] = s;
            }
        };

        let mut x = self.start.clone();
        // residual of the normal equations: -grad / 2
        let mut r: Vec<f64> = self.gradient(&x).iter().map(|g| -0.5 * g).collect();
        for v in 0..n {
            if self.pinned[v] {
                r[v] = 0.0;
            }
        }
        let precondition = |r: &[f64], z: &mut [f64]| {
            for v in 0..n {
                z[v] = if self.pinned[v] || diag[v] == 0.0 { 0.0 } else { r[v] / diag[v] };
            }
        };
        let mut z = vec![0.0; n];
        precondition(&r, &mut z);
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();

        let converged = |x: &[f64], r: &[f64]| {
            let grad = 2.0 * r.iter().map(|v| v * v).sum::<f64>().sqrt();
            (grad, grad <= RELATIVE_TOLERANCE * (1.0 + self.objective(x)))
        };
        for _ in 0..MAX_ITERATIONS {
            let (_, done) = converged(&x, &r);
            if done {
                return Ok(x);
            }
            apply(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            for v in 0..n {
                x[v] += alpha * p[v];
                r[v] -= alpha * ap[v];
            }
            precondition(&r, &mut z);
            let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_next / rz;
            rz = rz_next;
            for v in 0..n {
                p[v] = z[v] + beta * p[v];
            }
        }
        let (grad, done) = converged(&x, &r);
        if done || grad <= FAILURE_GRADIENT {
            Ok(x)
        } else {
            Err(Error::Solve { gradient_norm: grad, iterations: MAX_ITERATIONS })
        }
    }
}

pub fn fast_surface_polycube(mesh: &SurfaceMesh, g: &ChartGraph) -> Result<FastPolycube> {
    let mut positions = vec![Vec3::zeros(); mesh.num_vertices()];
    let mut chart_coordinates = vec![0.0; g.num_charts()];
    let mut residual = 0.0;
    for axis in 0..3 {
        let system = AxisSystem::build(mesh, g, axis);
        let x = system.solve()?;
        residual += system.objective(&x);
        for (v, p) in positions.iter_mut().enumerate() {
            p[axis] = x[system.var_of[v]];
        }
        for (c, chart) in g.charts().iter().enumerate() {
            if chart.label.axis() == axis {
                let v = mesh.triangle(chart.triangles[0])[0];
                chart_coordinates[c] = x[system.var_of[v]];
            }
        }
    }
    Ok(FastPolycube { positions, chart_coordinates, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::extract_charts;
    use crate::label::{naive_normal_labeling, Label, Labeling};
    use crate::shapes;

    #[test]
    fn cube_is_its_own_polycube() {
        let mesh = shapes::subdivided_cube(2);
        let g = extract_charts(&mesh, &naive_normal_labeling(&mesh));
        let pc = fast_surface_polycube(&mesh, &g).unwrap();
        assert!(pc.residual < 1e-20);
        for (p, q) in pc.positions.iter().zip(mesh.vertices()) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn single_chart_sphere_flattens() {
        let mesh = shapes::icosphere(2);
        let l = Labeling::uniform(mesh.num_triangles(), Label::POS_X);
        let g = extract_charts(&mesh, &l);
        let pc = fast_surface_polycube(&mesh, &g).unwrap();
        let x0 = pc.positions[0].x;
        assert!(pc.positions.iter().all(|p| p.x == x0));
        assert_eq!(pc.chart_coordinates, vec![x0]);
    }

    #[test]
    fn chart_constraint_is_exact() {
        let mesh = shapes::rotate_z(&shapes::subdivided_cube(2), 10f64.to_radians());
        let g = extract_charts(&mesh, &naive_normal_labeling(&mesh));
        let pc = fast_surface_polycube(&mesh, &g).unwrap();
        for (c, chart) in g.charts().iter().enumerate() {
            let a = chart.label.axis();
            for &t in &chart.triangles {
                for v in mesh.triangle(t) {
                    assert_eq!(pc.positions[v][a], pc.chart_coordinates[c]);
                }
            }
        }
    }
}
