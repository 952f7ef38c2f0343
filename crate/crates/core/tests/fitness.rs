mod support;

use nalgebra::Matrix2;
use polylabel::charts::extract_charts;
use polylabel::fitness::{
    area_distortion, compactness, evaluate_fitness, fast_surface_polycube, fidelity_error, uniform_labeling,
    workability, workability_integrand, AxisSystem, FitnessWeights, CLAMP,
};
use polylabel::mesh::{SurfaceMesh, Vec3};
use polylabel::{graphcut_initial_labeling, labeling_from_fn, naive_normal_labeling, shapes, Label, Labeling};
use proptest::prelude::*;

fn rotated_cube() -> SurfaceMesh {
    shapes::rotate_z(&shapes::subdivided_cube(2), 10f64.to_radians())
}

/// Positions relative to vertex 0, which removes the translation gauge.
fn relative(p: &[Vec3]) -> Vec<Vec3> {
    p.iter().map(|q| q - p[0]).collect()
}

#[test]
fn rotated_cube_matches_dense_oracle() {
    let mesh = rotated_cube();
    let l = naive_normal_labeling(&mesh);
    let g = extract_charts(&mesh, &l);
    let pc = fast_surface_polycube(&mesh, &g).unwrap();
    let oracle = support::dense_polycube(&mesh, &g);
    for (a, b) in relative(&pc.positions).iter().zip(relative(&oracle)) {
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() <= 1e-6 * b[k].abs().max(1.0), "{a} vs {b}");
        }
    }
    // the result is an axis-aligned box: every chart is flat on its axis
    for chart in g.charts() {
        let axis = chart.label.axis();
        let v0 = mesh.triangle(chart.triangles[0])[0];
        for &t in &chart.triangles {
            for v in mesh.triangle(t) {
                assert!((pc.positions[v][axis] - pc.positions[v0][axis]).abs() < 1e-9);
            }
        }
    }
    let objective = support::polycube_objective(&mesh, &pc.positions);
    assert!((objective - pc.residual).abs() <= 1e-9 * (1.0 + objective));
    let oracle_objective = support::polycube_objective(&mesh, &oracle);
    assert!(objective <= oracle_objective * (1.0 + 1e-9) + 1e-12);
}

#[test]
fn solution_is_stationary() {
    let mesh = rotated_cube();
    let l = naive_normal_labeling(&mesh);
    let g = extract_charts(&mesh, &l);
    let pc = fast_surface_polycube(&mesh, &g).unwrap();
    let h = 1e-5 * mesh.bbox_diagonal();
    for axis in 0..3 {
        let sys = AxisSystem::build(&mesh, &g, axis);
        assert!(sys.num_vars <= 200);
        let mut x = vec![0.0; sys.num_vars];
        for (v, p) in pc.positions.iter().enumerate() {
            x[sys.var_of[v]] = p[axis];
        }
        let obj = sys.objective(&x);
        let grad = sys.gradient(&x);
        for k in (0..sys.num_vars).filter(|&k| !sys.pinned[k]) {
            let mut xp = x.clone();
            xp[k] += h;
            let mut xm = x.clone();
            xm[k] -= h;
            let fd = (sys.objective(&xp) - sys.objective(&xm)) / (2.0 * h);
            assert!(grad[k].abs() <= 1e-6 * (1.0 + obj), "gradient {}", grad[k]);
            assert!(fd.abs() <= 1e-6 * (1.0 + obj), "finite difference {fd}");
        }
    }
}

#[test]
fn distortion_matches_oracle_on_rotated_cube() {
    let mesh = rotated_cube();
    let l = naive_normal_labeling(&mesh);
    let g = extract_charts(&mesh, &l);
    let pc = fast_surface_polycube(&mesh, &g).unwrap();
    let oracle = support::dense_polycube(&mesh, &g);
    let e_w = workability(&mesh, &l, &pc);
    let e_w_oracle = support::workability_oracle(&mesh, &l, &oracle);
    assert!((e_w - e_w_oracle).abs() <= 1e-9 * e_w_oracle, "{e_w} vs {e_w_oracle}");
    let d_a = area_distortion(&mesh, &l, &pc);
    let d_a_oracle = support::area_distortion_oracle(&mesh, &l, &oracle);
    assert!((d_a - d_a_oracle).abs() <= 1e-9 * d_a_oracle);
    assert!(e_w > 1.0 && d_a > 1.0);
}

#[test]
fn distortion_matches_oracle_on_graphcut_sphere() {
    let mesh = shapes::icosphere(2);
    let l = graphcut_initial_labeling(&mesh, 3.0);
    let g = extract_charts(&mesh, &l);
    let pc = fast_surface_polycube(&mesh, &g).unwrap();
    let e_w = workability(&mesh, &l, &pc);
    let oracle = support::workability_oracle(&mesh, &l, &pc.positions);
    assert!((e_w - oracle).abs() <= 1e-9 * oracle);
}

#[test]
fn cube_reference_values() {
    let mesh = shapes::unit_cube();
    let l = naive_normal_labeling(&mesh);
    let w = FitnessWeights::default();
    let f = evaluate_fitness(&mesh, &l, &w);
    assert_eq!(f.v_p, 0);
    assert_eq!(f.e_c, 8);
    assert!((f.e_w - 1.0).abs() < 1e-12);
    assert!(f.e_f.abs() < 1e-12);
    assert!((f.total - 100.08).abs() < 1e-9);

    let flipped = Labeling::new(l.labels().iter().map(|x| x.opposite()).collect());
    assert!((fidelity_error(&mesh, &flipped) - 2.0).abs() < 1e-12);

    let zero = FitnessWeights { workability: 0.0, fidelity: 0.0, compactness: 0.0 };
    let single = uniform_labeling(&mesh, Label::POS_X);
    assert_eq!(evaluate_fitness(&mesh, &single, &zero).total, 4.0);
    assert_eq!(compactness(&extract_charts(&mesh, &single)), 0);
}

#[test]
fn one_flipped_face_costs_more() {
    let mesh = shapes::subdivided_cube(2);
    let l = labeling_from_fn(&mesh, |_, naive| if naive == Label::POS_Z { Label::NEG_Z } else { naive });
    let f = evaluate_fitness(&mesh, &l, &FitnessWeights::default());
    // two disjoint -Z charts are allowed by the proxy; the cost shows up in
    // fidelity and in the inverted polycube face
    assert!(f.e_f > 0.0);
    assert!(f.total > 100.08);
}

#[test]
fn sphere_fidelity_matches_summation() {
    let mesh = shapes::icosphere(3);
    let l = naive_normal_labeling(&mesh);
    let e_f = fidelity_error(&mesh, &l);
    assert!(e_f > 0.0 && e_f <= 1.0 - 1.0 / 3f64.sqrt());
    assert!((e_f - support::fidelity_oracle(&mesh, &l)).abs() < 1e-12);
}

#[test]
fn collapsed_triangle_dominates_workability() {
    assert_eq!(workability_integrand(&Matrix2::new(1.0, 0.0, 0.0, 0.0)), CLAMP);
    // squash one vertex of a fine cube onto its neighbor's position in the
    // polycube: its triangles collapse
    let mesh = shapes::subdivided_cube(8);
    let l = naive_normal_labeling(&mesh);
    let g = extract_charts(&mesh, &l);
    let mut pc = fast_surface_polycube(&mesh, &g).unwrap();
    let [a, b, _] = mesh.triangle(0);
    pc.positions[a] = pc.positions[b];
    assert!(workability(&mesh, &l, &pc) > 1e6);
}

#[test]
fn compact_labeling_has_fewer_corners() {
    // on a bumpy sphere the graph-cut labeling trades fidelity for far fewer
    // corners than the per-triangle best fit
    let mesh = shapes::icosphere(3)
        .map_vertices(|p| p * (1.0 + 0.05 * (7.0 * p.x).sin() * (5.0 * p.y).cos()))
        .unwrap();
    let compact = graphcut_initial_labeling(&mesh, 3.0);
    let faithful = naive_normal_labeling(&mesh);
    let (gc, gf) = (extract_charts(&mesh, &compact), extract_charts(&mesh, &faithful));
    assert!(compactness(&gc) < compactness(&gf), "{} vs {}", compactness(&gc), compactness(&gf));
    assert!(fidelity_error(&mesh, &compact) >= fidelity_error(&mesh, &faithful));
}

#[test]
fn total_is_monotone_in_each_weight() {
    let mesh = shapes::icosphere(2);
    let l = graphcut_initial_labeling(&mesh, 3.0);
    let w = FitnessWeights::default();
    let base = evaluate_fitness(&mesh, &l, &w);
    for bumped in [
        FitnessWeights { workability: 2.0 * w.workability, ..w },
        FitnessWeights { fidelity: 2.0 * w.fidelity, ..w },
        FitnessWeights { compactness: 2.0 * w.compactness, ..w },
    ] {
        assert!(evaluate_fitness(&mesh, &l, &bumped).total > base.total);
    }
}

fn permute_mesh(mesh: &SurfaceMesh, perm: [usize; 3]) -> SurfaceMesh {
    // an odd permutation reverses orientation; mirror one axis as well to
    // keep outward normals
    let odd = matches!(perm, [0, 2, 1] | [1, 0, 2] | [2, 1, 0]);
    mesh.map_vertices(|p| {
        let mut q = Vec3::zeros();
        for a in 0..3 {
            q[perm[a]] = p[a];
        }
        if odd {
            q[0] = -q[0];
        }
        q
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn metrics_ignore_translation(dx in -5.0..5.0f64, dy in -5.0..5.0f64, dz in -5.0..5.0f64) {
        let mesh = shapes::icosphere(2);
        let moved = mesh.map_vertices(|p| p + Vec3::new(dx, dy, dz)).unwrap();
        let l = graphcut_initial_labeling(&mesh, 3.0);
        let (g, gm) = (extract_charts(&mesh, &l), extract_charts(&moved, &l));
        let (pc, pm) = (fast_surface_polycube(&mesh, &g).unwrap(), fast_surface_polycube(&moved, &gm).unwrap());
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-7 * a.abs().max(1.0);
        prop_assert!(rel(fidelity_error(&mesh, &l), fidelity_error(&moved, &l)));
        prop_assert!(rel(workability(&mesh, &l, &pc), workability(&moved, &l, &pm)));
        prop_assert!(rel(area_distortion(&mesh, &l, &pc), area_distortion(&moved, &l, &pm)));
    }

    #[test]
    fn fidelity_is_permutation_equivariant(perm_index in 0usize..6, seed in 0u64..1000) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let perm = perms[perm_index];
        let odd = matches!(perm, [0, 2, 1] | [1, 0, 2] | [2, 1, 0]);
        let mesh = shapes::icosphere(2);
        let moved = permute_mesh(&mesh, perm);
        let l = labeling_from_fn(&mesh, |c, _| Label::ALL[((c.x * 1e3).abs() as u64 ^ seed) as usize % 6]);
        let mapped = Labeling::new(l.labels().iter().map(|x| {
            let axis = perm[x.axis()];
            Label::from_axis(axis, x.is_positive() != (odd && axis == 0))
        }).collect());
        prop_assert!((fidelity_error(&mesh, &l) - fidelity_error(&moved, &mapped)).abs() < 1e-12);
    }
}
