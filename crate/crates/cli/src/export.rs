use std::fmt::Write;

use polylabel::charts::extract_charts;
use polylabel::fitness::fast_surface_polycube;
use polylabel::mesh::{obj_string, SurfaceMesh};
use polylabel::{Label, Labeling};

/// Face color of each label: saturated for positive directions, dark for
/// negative ones.
pub fn label_color(l: Label) -> [u8; 3] {
    let mut c = [0u8; 3];
    c[l.axis()] = if l.is_positive() { 255 } else { 128 };
    c
}

pub fn colored_ply(mesh: &SurfaceMesh, labeling: &Labeling) -> String {
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    writeln!(out, "element vertex {}", mesh.num_vertices()).unwrap();
    out.push_str("property double x\nproperty double y\nproperty double z\n");
    writeln!(out, "element face {}", mesh.num_triangles()).unwrap();
    out.push_str("property list uchar int vertex_indices\n");
    out.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n");
    for v in mesh.vertices() {
        writeln!(out, "{} {} {}", v.x, v.y, v.z).unwrap();
    }
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let [r, g, b] = label_color(labeling.label(t));
        writeln!(out, "3 {} {} {} {r} {g} {b}", tri[0], tri[1], tri[2]).unwrap();
    }
    out
}

/// Fast polycube positions as OBJ. Falls back to the input positions when
/// the least-squares solve fails so export never depends on validity.
pub fn polycube_obj(mesh: &SurfaceMesh, labeling: &Labeling) -> String {
    let g = extract_charts(mesh, labeling);
    let positions = match fast_surface_polycube(mesh, &g) {
        Ok(pc) => pc.positions,
        Err(err) => {
            log::warn!("fast polycube failed ({err}); exporting input positions");
            mesh.vertices().to_vec()
        }
    };
    obj_string(&positions, mesh.triangles())
}
