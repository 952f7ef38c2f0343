use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::mesh::SurfaceMesh;

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then triangle id
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Triangles within approximate geodesic distance `radius` of the seed
/// vertices, ascending by id. Distances start at the centroid-to-vertex
/// distance for triangles around a seed and then accumulate centroid to
/// centroid across shared edges. Only triangles accepted by `allowed` are
/// visited.
pub fn grow_region(
    mesh: &SurfaceMesh,
    seeds: &[usize],
    radius: f64,
    allowed: impl Fn(usize) -> bool,
) -> Vec<usize> {
    let nt = mesh.num_triangles();
    let mut dist = vec![f64::INFINITY; nt];
    let mut heap = BinaryHeap::new();
    for &v in seeds {
        for &t in mesh.vertex_triangles(v) {
            if !allowed(t) {
                continue;
            }
            let d = (mesh.centroid(t) - mesh.vertex(v)).norm();
            if d <= radius && d < dist[t] {
                dist[t] = d;
                heap.push(Entry(d, t));
            }
        }
    }
    let mut done = vec![false; nt];
    while let Some(Entry(d, t)) = heap.pop() {
        if done[t] {
            continue;
        }
        done[t] = true;
        for n in mesh.triangle_neighbors(t) {
            if done[n] || !allowed(n) {
                continue;
            }
            let nd = d + (mesh.centroid(n) - mesh.centroid(t)).norm();
            if nd <= radius && nd < dist[n] {
                dist[n] = nd;
                heap.push(Entry(nd, n));
            }
        }
    }
    (0..nt).filter(|&t| done[t]).collect()
}
