use crate::label::Labeling;
use crate::mesh::SurfaceMesh;

pub const MAX_SMOOTHING_ITERATIONS: usize = 10;

/// Relabels every triangle whose neighbors across chart boundaries include
/// two with the same foreign label, all triangles at once, until nothing
/// changes or the iteration cap is hit. Stamps are left untouched.
pub fn smooth_boundaries(mesh: &SurfaceMesh, l: &Labeling) -> Labeling {
    smooth_boundaries_counted(mesh, l).0
}

/// As [`smooth_boundaries`], also returning the number of iterations that
/// changed something.
pub fn smooth_boundaries_counted(mesh: &SurfaceMesh, l: &Labeling) -> (Labeling, usize) {
    let mut labels = l.labels().to_vec();
    let mut changes = Vec::new();
    for iteration in 0..MAX_SMOOTHING_ITERATIONS {
        changes.clear();
        for (t, &own) in labels.iter().enumerate() {
            let [a, b, c] = mesh.triangle_neighbors(t).map(|n| labels[n]);
            let target = if a != own && (a == b || a == c) {
                Some(a)
            } else if b != own && b == c {
                Some(b)
            } else {
                None
            };
            if let Some(x) = target {
                changes.push((t, x));
            }
        }
        if changes.is_empty() {
            return (Labeling::from_parts(labels, l.stamps().to_vec()), iteration);
        }
        for &(t, x) in &changes {
            labels[t] = x;
        }
    }
    (Labeling::from_parts(labels, l.stamps().to_vec()), MAX_SMOOTHING_ITERATIONS)
}
