//! Reference computations shared by the integration tests and the
//! acceptance suite. Everything here is written against plain definitions,
//! without reusing the library's solvers.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3x2};
use polylabel::charts::ChartGraph;
use polylabel::fitness::CLAMP;
use polylabel::mesh::{SurfaceMesh, Vec3};
use polylabel::{Label, Labeling};

/// Per-vertex equivalence classes on `axis`: vertices of every triangle whose
/// chart lies on `axis` must share one coordinate.
pub fn constrained_classes(mesh: &SurfaceMesh, g: &ChartGraph, axis: usize) -> Vec<usize> {
    let n = mesh.num_vertices();
    let mut class: Vec<usize> = (0..n).collect();
    fn root(class: &mut [usize], mut v: usize) -> usize {
        while class[v] != v {
            v = class[v];
        }
        v
    }
    for (t, tri) in mesh.triangles().iter().enumerate() {
        if g.chart(g.chart_of(t)).label.axis() == axis {
            for w in tri.windows(2) {
                let (a, b) = (root(&mut class, w[0]), root(&mut class, w[1]));
                class[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| root(&mut class, v)).collect();
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    roots
        .iter()
        .map(|&r| {
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            ids[r]
        })
        .collect()
}

/// Dense least-squares solve of the fast-polycube problem by the
/// pseudo-inverse. The result is defined up to a per-axis translation.
pub fn dense_polycube(mesh: &SurfaceMesh, g: &ChartGraph) -> Vec<Vec3> {
    let mut out = vec![Vec3::zeros(); mesh.num_vertices()];
    for axis in 0..3 {
        let class = constrained_classes(mesh, g, axis);
        let m = class.iter().max().unwrap() + 1;
        let mut a = DMatrix::<f64>::zeros(mesh.num_edges(), m);
        let mut b = DVector::<f64>::zeros(mesh.num_edges());
        for (e, edge) in mesh.edges().iter().enumerate() {
            let [i, j] = edge.vertices;
            a[(e, class[i])] += 1.0;
            a[(e, class[j])] -= 1.0;
            b[e] = mesh.vertex(i)[axis] - mesh.vertex(j)[axis];
        }
        let y = a.pseudo_inverse(1e-10).unwrap() * b;
        for (v, p) in out.iter_mut().enumerate() {
            p[axis] = y[class[v]];
        }
    }
    out
}

/// Least-squares objective of deformed positions.
pub fn polycube_objective(mesh: &SurfaceMesh, positions: &[Vec3]) -> f64 {
    mesh.edges()
        .iter()
        .map(|edge| {
            let [i, j] = edge.vertices;
            ((positions[i] - positions[j]) - (mesh.vertex(i) - mesh.vertex(j))).norm_squared()
        })
        .sum()
}

/// Singular values of the linear map taking the input triangle's edge vectors
/// to the deformed ones, from the eigenvalues of `G^-1 H` with Gram
/// matrices `G`, `H`, and the orientation of the image relative to `label`.
pub fn triangle_singular_values(mesh: &SurfaceMesh, deformed: &[Vec3], label: Label, t: usize) -> (f64, f64, bool) {
    let [i, j, k] = mesh.triangle(t);
    let a = Matrix3x2::from_columns(&[mesh.vertex(j) - mesh.vertex(i), mesh.vertex(k) - mesh.vertex(i)]);
    let b = Matrix3x2::from_columns(&[deformed[j] - deformed[i], deformed[k] - deformed[i]]);
    let gram_a: Matrix2<f64> = a.transpose() * a;
    let gram_b: Matrix2<f64> = b.transpose() * b;
    let l = gram_a.cholesky().unwrap().l();
    let li = l.try_inverse().unwrap();
    let m = li * gram_b * li.transpose();
    let ev = m.symmetric_eigenvalues();
    let (hi, lo) = (ev[0].max(ev[1]), ev[0].min(ev[1]));
    let flipped = b.column(0).cross(&b.column(1)).dot(&label.direction()) < 0.0;
    (hi.max(0.0).sqrt(), lo.max(0.0).sqrt(), flipped)
}

pub fn workability_oracle(mesh: &SurfaceMesh, l: &Labeling, deformed: &[Vec3]) -> f64 {
    let mut sum = 0.0;
    for t in 0..mesh.num_triangles() {
        let (s1, s2, flipped) = triangle_singular_values(mesh, deformed, l.label(t), t);
        let e = if flipped || s2 < 1e-9 {
            CLAMP
        } else {
            (s1 + s2 + 1.0 / (s1 * s2) + s1 / s2 + s2 / s1 - 4.0).min(CLAMP)
        };
        sum += mesh.area(t) * e * e;
    }
    sum / mesh.total_area()
}

pub fn area_distortion_oracle(mesh: &SurfaceMesh, l: &Labeling, deformed: &[Vec3]) -> f64 {
    let mut sum = 0.0;
    for t in 0..mesh.num_triangles() {
        let (s1, s2, flipped) = triangle_singular_values(mesh, deformed, l.label(t), t);
        let e = if flipped || s2 < 1e-9 { CLAMP } else { (0.5 * (s1 * s2 + 1.0 / (s1 * s2))).min(CLAMP) };
        sum += mesh.area(t) * e;
    }
    sum / mesh.total_area()
}

/// Area-weighted `1 - n . d` summed straight from triangle geometry.
pub fn fidelity_oracle(mesh: &SurfaceMesh, l: &Labeling) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let [a, b, c] = tri.map(|v| mesh.vertex(v));
        let cross = (b - a).cross(&(c - a));
        let area = 0.5 * cross.norm();
        let mut d = Vec3::zeros();
        let lab = l.label(t);
        d[lab.axis()] = if lab.is_positive() { 1.0 } else { -1.0 };
        num += area * (1.0 - cross.normalize().dot(&d));
        den += area;
    }
    num / den
}

/// Exhaustive minimum of a binary cut problem with terminal capacities
/// `(source, sink)` and directed arc pairs `(i, j, cap_ij, cap_ji)`.
pub fn brute_min_cut(terminals: &[(f64, f64)], arcs: &[(usize, usize, f64, f64)]) -> f64 {
    let n = terminals.len();
    (0u32..1 << n)
        .map(|mask| {
            let sink = |i: usize| mask >> i & 1 == 1;
            let mut cut = 0.0;
            for (i, &(s, t)) in terminals.iter().enumerate() {
                cut += if sink(i) { s } else { t };
            }
            for &(i, j, cij, cji) in arcs {
                if !sink(i) && sink(j) {
                    cut += cij;
                }
                if sink(i) && !sink(j) {
                    cut += cji;
                }
            }
            cut
        })
        .fold(f64::INFINITY, f64::min)
}
