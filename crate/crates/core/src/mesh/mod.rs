//! Immutable closed triangle meshes and their loaders.

mod io;
mod tet;

use std::collections::HashMap;

use nalgebra::Vector3;

use crate::error::{Error, Result};

pub use io::{
    load_input, load_surface, load_surface_auto, obj_string, parse_obj, parse_ply, parse_stl, InputFormat, SurfaceFormat,
};
pub use tet::{extract_boundary, load_tet_medit, parse_medit, TetMesh};

pub type Vec3 = Vector3<f64>;

/// An undirected mesh edge with its two incident triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Endpoints, smaller index first.
    pub vertices: [usize; 2],
    pub triangles: [usize; 2],
}

impl Edge {
    pub fn other_triangle(&self, t: usize) -> usize {
        if self.triangles[0] == t {
            self.triangles[1]
        } else {
            self.triangles[0]
        }
    }

    pub fn other_vertex(&self, v: usize) -> usize {
        if self.vertices[0] == v {
            self.vertices[1]
        } else {
            self.vertices[0]
        }
    }
}

/// A closed, edge-manifold, consistently outward-oriented triangle mesh.
///
/// All derived quantities (normals, areas, adjacency) are computed once at
/// construction; the mesh is read-only afterwards and can be shared freely
/// between threads.
#[derive(Clone, Debug)]
pub struct SurfaceMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Vec3>,
    areas: Vec<f64>,
    centroids: Vec<Vec3>,
    edges: Vec<Edge>,
    // edge k of a triangle runs from corner k to corner (k + 1) % 3
    triangle_edges: Vec<[usize; 3]>,
    triangle_neighbors: Vec<[usize; 3]>,
    vertex_triangles: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    avg_edge_length: f64,
    total_area: f64,
    bbox_diagonal: f64,
}

impl SurfaceMesh {
    /// Builds a mesh from raw arrays, validating closedness, manifoldness and
    /// orientation. Unreferenced vertices are dropped. A mesh whose enclosed
    /// signed volume is negative is flipped so that normals point outward.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Topology("mesh has no triangles".into()));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Parse(format!("triangle {t} references a missing vertex")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::Degenerate { triangle: t, area: 0.0 });
            }
        }
        if vertices.iter().any(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::Parse("non-finite vertex coordinate".into()));
        }

        let (vertices, mut triangles) = compact(vertices, triangles);

        let signed_volume: f64 = triangles
            .iter()
            .map(|&[a, b, c]| vertices[a].dot(&vertices[b].cross(&vertices[c])))
            .sum();
        if signed_volume < 0.0 {
            for tri in &mut triangles {
                tri.swap(1, 2);
            }
        }

        Self::build(vertices, triangles)
    }

    fn build(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let (lo, hi) = bounding_box(&vertices);
        let bbox_diagonal = (hi - lo).norm();
        let area_floor = 1e-16 * bbox_diagonal * bbox_diagonal;

        let mut normals = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        let mut centroids = Vec::with_capacity(triangles.len());
        for (t, &[a, b, c]) in triangles.iter().enumerate() {
            let cross = (vertices[b] - vertices[a]).cross(&(vertices[c] - vertices[a]));
            let norm = cross.norm();
            let area = 0.5 * norm;
            if !(area > area_floor) {
                return Err(Error::Degenerate { triangle: t, area });
            }
            normals.push(cross / norm);
            areas.push(area);
            centroids.push((vertices[a] + vertices[b] + vertices[c]) / 3.0);
        }

        // directed half-edge occurrences keyed by undirected endpoints
        let mut occurrences: HashMap<(usize, usize), Vec<(usize, usize, bool)>> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                occurrences.entry(key).or_default().push((t, k, a < b));
            }
        }

        let mut keys: Vec<_> = occurrences.keys().copied().collect();
        keys.sort_unstable();

        let mut edges = Vec::with_capacity(keys.len());
        let mut triangle_edges = vec![[usize::MAX; 3]; triangles.len()];
        let mut triangle_neighbors = vec![[usize::MAX; 3]; triangles.len()];
        let mut vertex_edges = vec![Vec::new(); vertices.len()];
        let mut length_sum = 0.0;
        for key in keys {
            let occ = &occurrences[&key];
            if occ.len() != 2 {
                let kind = if occ.len() == 1 { "boundary" } else { "non-manifold" };
                return Err(Error::Topology(format!(
                    "{kind} edge ({}, {}) has {} incident triangles",
                    key.0,
                    key.1,
                    occ.len()
                )));
            }
            let (t0, k0, forward0) = occ[0];
            let (t1, k1, forward1) = occ[1];
            if forward0 == forward1 {
                return Err(Error::Topology(format!(
                    "inconsistent orientation across edge ({}, {})",
                    key.0, key.1
                )));
            }
            let id = edges.len();
            edges.push(Edge { vertices: [key.0, key.1], triangles: [t0, t1] });
            triangle_edges[t0][k0] = id;
            triangle_edges[t1][k1] = id;
            triangle_neighbors[t0][k0] = t1;
            triangle_neighbors[t1][k1] = t0;
            vertex_edges[key.0].push(id);
            vertex_edges[key.1].push(id);
            length_sum += (vertices[key.0] - vertices[key.1]).norm();
        }

        let mut vertex_triangles = vec![Vec::new(); vertices.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                vertex_triangles[v].push(t);
            }
        }

        let total_area = areas.iter().sum();
        Ok(SurfaceMesh {
            avg_edge_length: length_sum / edges.len() as f64,
            vertices,
            triangles,
            normals,
            areas,
            centroids,
            edges,
            triangle_edges,
            triangle_neighbors,
            vertex_triangles,
            vertex_edges,
            total_area,
            bbox_diagonal,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Vec3 {
        self.vertices[v]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    pub fn normal(&self, t: usize) -> Vec3 {
        self.normals[t]
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn centroid(&self, t: usize) -> Vec3 {
        self.centroids[t]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Edge ids of triangle `t`; entry `k` joins corners `k` and `k + 1`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    /// Triangles across each edge of `t`, in `triangle_edges` order.
    pub fn triangle_neighbors(&self, t: usize) -> [usize; 3] {
        self.triangle_neighbors[t]
    }

    pub fn vertex_triangles(&self, v: usize) -> &[usize] {
        &self.vertex_triangles[v]
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    /// Mean length over all unique edges.
    pub fn avg_edge_length(&self) -> f64 {
        self.avg_edge_length
    }

    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    pub fn avg_area(&self) -> f64 {
        self.total_area / self.triangles.len() as f64
    }

    pub fn bbox_diagonal(&self) -> f64 {
        self.bbox_diagonal
    }

    /// Whether the directed edge `a -> b` appears in the winding of `t`.
    pub fn has_directed_edge(&self, t: usize, a: usize, b: usize) -> bool {
        let tri = self.triangles[t];
        (0..3).any(|k| tri[k] == a && tri[(k + 1) % 3] == b)
    }

    /// Returns a copy with every vertex mapped through `f`. Fails if the
    /// transformed mesh violates any mesh invariant.
    pub fn map_vertices(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<Self> {
        let vertices = self.vertices.iter().map(f).collect();
        SurfaceMesh::new(vertices, self.triangles.clone())
    }
}

pub(crate) fn bounding_box(points: &[Vec3]) -> (Vec3, Vec3) {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

fn compact(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let mut remap = vec![usize::MAX; vertices.len()];
    let mut kept = Vec::new();
    let triangles = triangles
        .into_iter()
        .map(|tri| {
            tri.map(|v| {
                if remap[v] == usize::MAX {
                    remap[v] = kept.len();
                    kept.push(vertices[v]);
                }
                remap[v]
            })
        })
        .collect();
    (kept, triangles)
}
