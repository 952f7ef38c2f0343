use polylabel::charts::extract_charts;
use polylabel::fitness::{evaluate_fitness, FitnessWeights, CLAMP};
use polylabel::fixtures;
use polylabel::label::closest_label;
use polylabel::mesh::Vec3;
use polylabel::turning::{detect_turning_points, ChainProblem};
use polylabel::{naive_normal_labeling, shapes, validity_proxy, Label, Labeling};
use proptest::prelude::*;

#[test]
fn island_has_deficit_three() {
    let mesh = shapes::subdivided_cube(4);
    let g = extract_charts(&mesh, &fixtures::island(&mesh));
    let v = g.validity();
    assert_eq!(g.num_charts(), 7);
    assert_eq!((v.invalid_corners, v.invalid_boundaries, v.chart_deficit), (0, 0, 3));
}

#[test]
fn opposite_split_has_one_invalid_boundary() {
    let mesh = shapes::subdivided_cube(4);
    let g = extract_charts(&mesh, &fixtures::opposite_split(&mesh));
    let v = g.validity();
    assert_eq!((v.invalid_corners, v.invalid_boundaries, v.chart_deficit), (0, 1, 0));
}

#[test]
fn quadrants_have_a_valency_four_corner() {
    let mesh = shapes::subdivided_cube(4);
    let g = extract_charts(&mesh, &fixtures::quadrants(&mesh));
    let v = g.validity();
    assert_eq!((v.invalid_corners, v.invalid_boundaries, v.chart_deficit), (1, 0, 2));
    let center = g.corners().iter().find(|c| c.valency == 4).unwrap().vertex;
    assert!((mesh.vertex(center) - Vec3::new(0.5, 0.5, 1.0)).norm() < 1e-12);
}

#[test]
fn proxy_is_not_necessary() {
    // a voxel polycube labeled by its own faces is realizable by construction
    let mesh = fixtures::valency_four_polycube(1);
    let l = naive_normal_labeling(&mesh);
    let g = extract_charts(&mesh, &l);
    assert_eq!(validity_proxy(&g), 1);
    assert_eq!(g.validity().invalid_corners, 1);
    let f = evaluate_fitness(&mesh, &l, &FitnessWeights::default());
    assert!((f.e_w - 1.0).abs() < 1e-9, "the exact polycube is undistorted");
}

#[test]
fn proxy_is_not_sufficient() {
    let mesh = shapes::unit_cube();
    let l = fixtures::swapped_x_faces(&mesh);
    let g = extract_charts(&mesh, &l);
    assert_eq!(validity_proxy(&g), 0);
    // the fast polycube has to turn the X faces inside out
    let f = evaluate_fitness(&mesh, &l, &FitnessWeights::default());
    assert!(f.e_w >= CLAMP);
}

#[test]
fn naive_tie_breaks() {
    assert_eq!(closest_label(&Vec3::new(1.0, 0.0, 0.0)), Label::POS_X);
    let s = 0.5f64.sqrt();
    assert_eq!(closest_label(&Vec3::new(s, s, 0.0)), Label::POS_X);
}

#[test]
fn folding_a_face_onto_its_neighbor_leaves_one_invalid_boundary() {
    // relabeling +Z to -X merges it into the -X chart, which then touches +X
    let mesh = shapes::subdivided_cube(2);
    for target in [Label::NEG_X, Label::POS_X] {
        let mut l = naive_normal_labeling(&mesh);
        for t in 0..mesh.num_triangles() {
            if l.label(t) == Label::POS_Z {
                l.set(t, target, 1);
            }
        }
        let g = extract_charts(&mesh, &l);
        assert_eq!(g.num_charts(), 5);
        assert_eq!(g.validity().invalid_boundaries, 1);
    }
}

#[test]
fn l_block_counts() {
    let mesh = shapes::l_block(2);
    let g = extract_charts(&mesh, &naive_normal_labeling(&mesh));
    assert_eq!(g.num_charts(), 8);
    assert_eq!(g.corners().len(), 12);
    assert_eq!(validity_proxy(&g), 0);
}

fn check_graph_invariants(mesh: &polylabel::SurfaceMesh, l: &Labeling) {
    let g = extract_charts(mesh, l);
    let total: usize = g.charts().iter().map(|c| c.triangles.len()).sum();
    assert_eq!(total, mesh.num_triangles());
    // every separating edge lies on exactly one boundary path
    let mut seen = vec![0usize; mesh.num_edges()];
    for bd in g.boundaries() {
        for &e in &bd.edges {
            seen[e] += 1;
        }
        if !bd.closed {
            assert!(g.is_corner(bd.vertices[0]) && g.is_corner(*bd.vertices.last().unwrap()));
        }
    }
    for (e, edge) in mesh.edges().iter().enumerate() {
        let separates = l.label(edge.triangles[0]) != l.label(edge.triangles[1]);
        assert_eq!(seen[e], separates as usize);
    }
    // corner valency equals the number of boundary path ends at the corner
    for c in g.corners() {
        let ends: usize = g
            .boundaries()
            .iter()
            .filter(|b| !b.closed)
            .map(|b| (b.vertices[0] == c.vertex) as usize + (*b.vertices.last().unwrap() == c.vertex) as usize)
            .sum();
        assert_eq!(ends, c.valency);
    }
    // re-extracting from the chart labels reproduces the graph
    assert_eq!(extract_charts(mesh, &g.to_labeling()), g);
    // turning points lie strictly inside open boundaries
    let tps = detect_turning_points(mesh, &g);
    for tp in tps.iter(&g) {
        let bd = g.boundary(tp.boundary);
        if !bd.closed {
            assert!(tp.index > 0 && tp.index + 1 < bd.vertices.len());
        }
    }
}

// Permutation of axes applied to labels, preserving opposites.
fn permute(l: Label, perm: [usize; 3], flip: [bool; 3]) -> Label {
    let axis = perm[l.axis()];
    Label::from_axis(axis, l.is_positive() != flip[axis])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_labelings_keep_graph_invariants(seed_labels in proptest::collection::vec(0u8..6, 96)) {
        let mesh = shapes::subdivided_cube(2);
        let l = Labeling::new(seed_labels[..mesh.num_triangles()].iter().map(|&c| Label::new(c).unwrap()).collect());
        check_graph_invariants(&mesh, &l);
    }

    #[test]
    fn proxy_invariant_under_axis_permutation(
        codes in proptest::collection::vec(0u8..6, 96),
        perm_index in 0usize..6,
        flip in proptest::array::uniform3(any::<bool>()),
    ) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let perm = perms[perm_index];
        let mesh = shapes::subdivided_cube(2);
        let l = Labeling::new(codes[..mesh.num_triangles()].iter().map(|&c| Label::new(c).unwrap()).collect());
        let p = Labeling::new(l.labels().iter().map(|&x| permute(x, perm, flip)).collect());
        prop_assert_eq!(validity_proxy(&extract_charts(&mesh, &l)), validity_proxy(&extract_charts(&mesh, &p)));
    }

    #[test]
    fn chain_solver_matches_enumeration(
        dirs in proptest::collection::vec(proptest::array::uniform3(-1.0..1.0f64), 1..=12),
        closed in any::<bool>(),
    ) {
        let dirs: Vec<Vec3> = dirs.iter().map(|d| Vec3::new(d[0], d[1], d[2])).filter(|d| d.norm() > 1e-3).map(|d| d.normalize()).collect();
        prop_assume!(!dirs.is_empty());
        let axis = Vec3::new(1.0, 0.0, 0.0);
        let p = ChainProblem::from_directions(&dirs, &axis, closed);
        let best = (0u32..1 << dirs.len())
            .map(|m| {
                let labels: Vec<u8> = (0..dirs.len()).map(|i| (m >> i & 1) as u8).collect();
                p.energy(&labels)
            })
            .fold(f64::INFINITY, f64::min);
        prop_assert_eq!(p.energy(&p.solve()), best);
    }
}

#[test]
fn boundary_chain_example() {
    // four edges along +axis, +axis, -axis, -axis: one turning point between
    // the second and third edge
    let axis = Vec3::new(1.0, 0.0, 0.0);
    let dirs = [axis, axis, -axis, -axis];
    let p = ChainProblem::from_directions(&dirs, &axis, false);
    let labels = p.solve();
    assert_eq!(polylabel::turning::switch_vertices(&labels, false), vec![2]);
}
