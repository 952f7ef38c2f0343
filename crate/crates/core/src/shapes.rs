//! Procedural closed meshes: cubes, voxel unions, icospheres, a U-shaped
//! tube and a thin wedge. Used as fixtures and demo inputs.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use nalgebra::Rotation3;

use crate::mesh::{SurfaceMesh, Vec3};

/// Axis-aligned unit cube, 8 vertices and 12 triangles.
pub fn unit_cube() -> SurfaceMesh {
    voxel_surface(&[[0, 0, 0]], 1)
}

/// Unit cube with every face split into an `n` x `n` grid of quads.
pub fn subdivided_cube(n: usize) -> SurfaceMesh {
    voxel_surface(&[[0, 0, 0]], n)
}

/// L-shaped prism made of three unit voxels (an L in the XZ plane extruded
/// one unit along Y), each voxel face split into `n` x `n` quads.
pub fn l_block(n: usize) -> SurfaceMesh {
    voxel_surface(&[[0, 0, 0], [1, 0, 0], [0, 0, 1]], n)
}

/// Boundary of a union of unit voxels. Every exposed voxel face becomes an
/// `n` x `n` grid of quads split into two triangles each. The voxel set must
/// not touch itself along bare edges or vertices.
pub fn voxel_surface(cells: &[[i64; 3]], n: usize) -> SurfaceMesh {
    assert!(n >= 1);
    let occupied: HashSet<[i64; 3]> = cells.iter().copied().collect();
    let n_i = n as i64;
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();

    let mut vertex = |lattice: [i64; 3]| -> usize {
        *index.entry(lattice).or_insert_with(|| {
            vertices.push(Vec3::new(lattice[0] as f64, lattice[1] as f64, lattice[2] as f64) / n as f64);
            vertices.len() - 1
        })
    };

    for cell in cells {
        for axis in 0..3 {
            for positive in [true, false] {
                let mut neighbor = *cell;
                neighbor[axis] += if positive { 1 } else { -1 };
                if occupied.contains(&neighbor) {
                    continue;
                }
                // tangent axes ordered so that (u x v) points outward
                let (mut u, mut v) = ((axis + 1) % 3, (axis + 2) % 3);
                if !positive {
                    std::mem::swap(&mut u, &mut v);
                }
                let plane = (cell[axis] + positive as i64) * n_i;
                for i in 0..n_i {
                    for j in 0..n_i {
                        let corner = |di: i64, dj: i64| {
                            let mut p = [0i64; 3];
                            p[axis] = plane;
                            p[u] = cell[u] * n_i + i + di;
                            p[v] = cell[v] * n_i + j + dj;
                            p
                        };
                        let a = vertex(corner(0, 0));
                        let b = vertex(corner(1, 0));
                        let c = vertex(corner(1, 1));
                        let d = vertex(corner(0, 1));
                        triangles.push([a, b, c]);
                        triangles.push([a, c, d]);
                    }
                }
            }
        }
    }
    SurfaceMesh::new(vertices, triangles).expect("voxel surface is a closed manifold")
}

/// Unit icosphere with `20 * 4^level` triangles.
pub fn icosphere(level: usize) -> SurfaceMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| Vec3::new(p[0], p[1], p[2]).normalize())
    .collect();
    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let (v, t) = split_triangles(&vertices, &triangles, true);
        vertices = v;
        triangles = t;
    }
    SurfaceMesh::new(vertices, triangles).expect("icosphere is a closed manifold")
}

/// Splits every triangle into four at its edge midpoints, `levels` times.
pub fn subdivide(mesh: &SurfaceMesh, levels: usize) -> SurfaceMesh {
    let mut vertices = mesh.vertices().to_vec();
    let mut triangles = mesh.triangles().to_vec();
    for _ in 0..levels {
        let (v, t) = split_triangles(&vertices, &triangles, false);
        vertices = v;
        triangles = t;
    }
    SurfaceMesh::new(vertices, triangles).expect("subdivision preserves manifoldness")
}

fn split_triangles(vertices: &[Vec3], triangles: &[[usize; 3]], project: bool) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let mut vertices = vertices.to_vec();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vec3>| -> usize {
        *midpoints.entry((a.min(b), a.max(b))).or_insert_with(|| {
            let mut p = (vertices[a] + vertices[b]) / 2.0;
            if project {
                p = p.normalize();
            }
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let mut out = Vec::with_capacity(triangles.len() * 4);
    for &[a, b, c] in triangles {
        let ab = mid(a, b, &mut vertices);
        let bc = mid(b, c, &mut vertices);
        let ca = mid(c, a, &mut vertices);
        out.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
    }
    (vertices, out)
}

/// A circular tube swept along a U-shaped centerline lying in the XZ plane:
/// two vertical legs joined by a half-circle bend at the top, both ends
/// closed by flat caps. `around` is the number of segments of the circular
/// cross-section, `along` the number of segments per leg and for the bend.
pub fn u_tube(around: usize, along: usize) -> SurfaceMesh {
    let bend_radius = 1.5;
    let tube_radius = 0.6;
    let leg = 3.0;

    // centerline samples with unit tangents
    let mut path: Vec<(Vec3, Vec3)> = Vec::new();
    for i in 0..along {
        let z = leg * i as f64 / along as f64;
        path.push((Vec3::new(-bend_radius, 0.0, z), Vec3::z()));
    }
    for i in 0..along {
        let theta = PI * i as f64 / along as f64;
        let p = Vec3::new(-bend_radius * theta.cos(), 0.0, leg + bend_radius * theta.sin());
        let tangent = Vec3::new(theta.sin(), 0.0, theta.cos());
        path.push((p, tangent));
    }
    for i in 0..=along {
        let z = leg * (1.0 - i as f64 / along as f64);
        path.push((Vec3::new(bend_radius, 0.0, z), -Vec3::z()));
    }

    let mut vertices = Vec::new();
    let mut rings = Vec::new();
    for (center, tangent) in &path {
        let normal = tangent.cross(&Vec3::y()).normalize();
        let ring: Vec<usize> = (0..around)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / around as f64;
                vertices.push(center + tube_radius * (phi.cos() * normal + phi.sin() * Vec3::y()));
                vertices.len() - 1
            })
            .collect();
        rings.push(ring);
    }

    let mut triangles = Vec::new();
    for w in rings.windows(2) {
        let (r0, r1) = (&w[0], &w[1]);
        for j in 0..around {
            let k = (j + 1) % around;
            triangles.push([r0[j], r0[k], r1[k]]);
            triangles.push([r0[j], r1[k], r1[j]]);
        }
    }
    let first_center = vertices.len();
    vertices.push(path[0].0);
    let last_center = vertices.len();
    vertices.push(path[path.len() - 1].0);
    let (first, last) = (&rings[0], &rings[rings.len() - 1]);
    for j in 0..around {
        let k = (j + 1) % around;
        triangles.push([first_center, first[k], first[j]]);
        triangles.push([last_center, last[j], last[k]]);
    }
    SurfaceMesh::new(vertices, triangles).expect("U tube is a closed manifold")
}

/// A thin triangular prism (opening angle about 20 degrees) rotated 45
/// degrees about Z, subdivided `levels` times.
pub fn rotated_wedge(levels: usize) -> SurfaceMesh {
    let half = (10f64).to_radians();
    let tip = Vec3::new(0.0, 0.0, 0.0);
    let a = Vec3::new(2.0 * half.cos(), 2.0 * half.sin(), 0.0);
    let b = Vec3::new(2.0 * half.cos(), -2.0 * half.sin(), 0.0);
    let h = Vec3::new(0.0, 0.0, 1.0);
    let vertices = vec![tip, a, b, tip + h, a + h, b + h];
    let triangles = vec![[0, 1, 2], [3, 5, 4], [0, 2, 5], [0, 5, 3], [2, 1, 4], [2, 4, 5], [1, 0, 3], [1, 3, 4]];
    let prism = SurfaceMesh::new(vertices, triangles).expect("prism is closed");
    rotate_z(&subdivide(&prism, levels), 45f64.to_radians())
}

/// Rotates a mesh about the Z axis by `angle` radians.
pub fn rotate_z(mesh: &SurfaceMesh, angle: f64) -> SurfaceMesh {
    let rot = Rotation3::from_axis_angle(&Vec3::z_axis(), angle);
    mesh.map_vertices(|p| rot * p).expect("rotation preserves mesh validity")
}
