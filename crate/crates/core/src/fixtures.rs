//! Hand-built labelings on the procedural shapes, each exhibiting one
//! specific configuration of the validity proxy or the repairs.

use std::f64::consts::PI;

use crate::label::{labeling_from_fn, Label, Labeling};
use crate::mesh::SurfaceMesh;
use crate::shapes;

fn on_top(c: &crate::mesh::Vec3, naive: Label) -> bool {
    naive == Label::POS_Z && (c.z - 1.0).abs() < 1e-9
}

/// Subdivided unit cube (4 x 4 quads per face) with a +X island in the
/// middle of the top face. The island has a single neighbor, so its chart
/// deficit is 3; everything else is valid.
pub fn island(mesh: &SurfaceMesh) -> Labeling {
    labeling_from_fn(mesh, |c, naive| {
        if on_top(&c, naive) && (0.25..0.75).contains(&c.x) && (0.25..0.75).contains(&c.y) {
            Label::POS_X
        } else {
            naive
        }
    })
}

/// Top face split at `x = 0.5` into +Z and -Z halves: one boundary between
/// opposite labels, no other defect.
pub fn opposite_split(mesh: &SurfaceMesh) -> Labeling {
    labeling_from_fn(mesh, |c, naive| if on_top(&c, naive) && c.x > 0.5 { Label::NEG_Z } else { naive })
}

/// Top face split into quadrants labeled +Z, +X, +Z, +Y counterclockwise
/// from the origin. The +X and +Y quadrants merge with the side faces, the
/// two +Z quadrants touch only at the center, which becomes a corner of
/// valency 4, and the far +Z quadrant is left with two neighbors.
pub fn quadrants(mesh: &SurfaceMesh) -> Labeling {
    labeling_from_fn(mesh, |c, naive| {
        if !on_top(&c, naive) {
            return naive;
        }
        match (c.x > 0.5, c.y > 0.5) {
            (false, false) | (true, true) => Label::POS_Z,
            (true, false) => Label::POS_X,
            (false, true) => Label::POS_Y,
        }
    })
}

/// Top face of a finely subdivided cube split by a wavy line into a +Z part
/// and a +Y part; the triangulation makes the boundary jagged.
pub fn wavy_boundary(mesh: &SurfaceMesh) -> Labeling {
    labeling_from_fn(mesh, |c, naive| {
        let limit = 0.5 + 0.15 * (6.0 * PI * c.x).sin();
        if on_top(&c, naive) && c.y > limit {
            Label::POS_Y
        } else {
            naive
        }
    })
}

/// Unit cube whose two X faces carry each other's label: every proxy
/// condition holds, yet no polycube has this orientation.
pub fn swapped_x_faces(mesh: &SurfaceMesh) -> Labeling {
    labeling_from_fn(mesh, |_, naive| if naive.axis() == 0 { naive.opposite() } else { naive })
}

/// Voxel cells of a polycube whose own face labeling has a corner of
/// valency 4, so the proxy rejects a realizable labeling.
pub const VALENCY_FOUR_VOXELS: [[i64; 3]; 4] = [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 0, 0]];

pub fn valency_four_polycube(n: usize) -> SurfaceMesh {
    shapes::voxel_surface(&VALENCY_FOUR_VOXELS, n)
}
