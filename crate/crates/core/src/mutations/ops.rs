use rand::Rng;
use serde::Serialize;

use super::region::grow_region;
use crate::charts::ChartGraph;
use crate::error::Result;
use crate::graphcut::relabel_region;
use crate::label::{Label, Labeling};
use crate::mesh::{SurfaceMesh, Vec3};
use crate::turning::TurningPointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MutationKind {
    DirectionalPath,
    ChartRemoval,
    ChartPropagation,
}

impl MutationKind {
    pub const ALL: [MutationKind; 3] =
        [MutationKind::DirectionalPath, MutationKind::ChartRemoval, MutationKind::ChartPropagation];
}

/// A fully parameterized mutation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum MutationSpec {
    /// Walk from `vertex` across `chart` along `direction` and relabel a
    /// band of half-width `width` around the walk.
    DirectionalPath { vertex: usize, chart: usize, direction: Label, width: f64 },
    /// Relabel the whole chart, forbidding its current label.
    ChartRemoval { chart: usize },
    /// Let `invading` take over a band of the chart on the other side of
    /// `boundary`, around turning point `turning_point` (an index into the
    /// boundary's vertex path) or along the whole boundary.
    ChartPropagation { boundary: usize, turning_point: Option<usize>, invading: usize, width: f64 },
}

impl MutationSpec {
    pub fn kind(&self) -> MutationKind {
        match self {
            MutationSpec::DirectionalPath { .. } => MutationKind::DirectionalPath,
            MutationSpec::ChartRemoval { .. } => MutationKind::ChartRemoval,
            MutationSpec::ChartPropagation { .. } => MutationKind::ChartPropagation,
        }
    }
}

/// The four directions orthogonal to `label`'s axis, ascending by code.
pub fn orthogonal_directions(label: Label) -> [Label; 4] {
    let mut out = [Label::POS_X; 4];
    let mut k = 0;
    for l in Label::ALL {
        if l.axis() != label.axis() {
            out[k] = l;
            k += 1;
        }
    }
    out
}

/// Greedy walk from `start` over edges interior to `chart`, each step
/// maximizing the alignment of its unit direction with `dir`. Stops on the
/// first boundary vertex after the start, or when no step moves forward.
/// Returns `None` if no step is possible or the step cap is exceeded.
pub fn directional_walk(mesh: &SurfaceMesh, g: &ChartGraph, start: usize, chart: usize, dir: &Vec3) -> Option<Vec<usize>> {
    let cap = (10.0 * mesh.bbox_diagonal() / mesh.avg_edge_length()).ceil() as usize;
    let mut path = vec![start];
    let mut visited = std::collections::HashSet::from([start]);
    let mut current = start;
    for _ in 0..cap {
        let mut best: Option<(f64, usize)> = None;
        for &e in mesh.vertex_edges(current) {
            let edge = mesh.edge(e);
            if edge.triangles.iter().any(|&t| g.chart_of(t) != chart) {
                continue;
            }
            let u = edge.other_vertex(current);
            if visited.contains(&u) {
                continue;
            }
            let score = (mesh.vertex(u) - mesh.vertex(current)).normalize().dot(dir);
            if score > 0.0 && best.is_none_or(|(s, b)| score > s || (score == s && u < b)) {
                best = Some((score, u));
            }
        }
        let Some((_, u)) = best else {
            return (path.len() > 1).then_some(path);
        };
        path.push(u);
        visited.insert(u);
        if g.vertex_valency(u) > 0 {
            return Some(path);
        }
        current = u;
    }
    None
}

fn relabel(l: &Labeling, region: &[usize], label: Label, generation: u32) -> Labeling {
    let mut out = l.clone();
    for &t in region {
        out.set(t, label, generation);
    }
    out
}

pub fn directional_path(
    mesh: &SurfaceMesh,
    l: &Labeling,
    g: &ChartGraph,
    vertex: usize,
    chart: usize,
    direction: Label,
    width: f64,
    generation: u32,
) -> Labeling {
    let chart_label = g.chart(chart).label;
    debug_assert_ne!(chart_label.axis(), direction.axis());
    let Some(path) = directional_walk(mesh, g, vertex, chart, &direction.direction()) else {
        return l.clone();
    };
    let band = grow_region(mesh, &path, width, |t| g.chart_of(t) == chart);
    if band.is_empty() {
        return l.clone();
    }
    let mut best: Option<(f64, Label)> = None;
    for candidate in Label::ALL {
        if candidate.axis() == chart_label.axis() || candidate.axis() == direction.axis() {
            continue;
        }
        let d = candidate.direction();
        let score: f64 = band.iter().map(|&t| mesh.area(t) * mesh.normal(t).dot(&d)).sum();
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((score, candidate));
        }
    }
    relabel(l, &band, best.expect("two candidates remain").1, generation)
}

pub fn chart_removal(
    mesh: &SurfaceMesh,
    l: &Labeling,
    g: &ChartGraph,
    chart: usize,
    ratio: f64,
    generation: u32,
) -> Result<Labeling> {
    let c = g.chart(chart);
    let labels = relabel_region(mesh, l, &c.triangles, c.label, ratio)?;
    let mut out = l.clone();
    for (&t, &x) in c.triangles.iter().zip(&labels) {
        out.set(t, x, generation);
    }
    Ok(out)
}

/// Vertices of the part of `boundary` around turning point `tp`, running
/// between the neighboring turning points (or path ends). `None` selects
/// the whole boundary.
pub fn propagation_segment(g: &ChartGraph, tps: &TurningPointSet, boundary: usize, tp: Option<usize>) -> Vec<usize> {
    let bd = g.boundary(boundary);
    let n = bd.vertices.len();
    let Some(tp) = tp else { return bd.vertices.clone() };
    let ts = tps.on_boundary(boundary);
    let Some(k) = ts.iter().position(|&i| i == tp) else { return bd.vertices.clone() };
    let m = ts.len();
    if bd.closed {
        if m == 1 {
            return bd.vertices.clone();
        }
        let lo = ts[(k + m - 1) % m];
        let hi = ts[(k + 1) % m];
        let mut out = vec![bd.vertices[lo]];
        let mut i = lo;
        while i != hi {
            i = (i + 1) % n;
            out.push(bd.vertices[i]);
        }
        out
    } else {
        let lo = if k > 0 { ts[k - 1] } else { 0 };
        let hi = if k + 1 < m { ts[k + 1] } else { n - 1 };
        bd.vertices[lo..=hi].to_vec()
    }
}

#[allow(clippy::too_many_arguments)]
pub fn chart_propagation(
    mesh: &SurfaceMesh,
    l: &Labeling,
    g: &ChartGraph,
    tps: &TurningPointSet,
    boundary: usize,
    turning_point: Option<usize>,
    invading: usize,
    width: f64,
    generation: u32,
) -> Labeling {
    let receiving = g.boundary(boundary).other_chart(invading);
    let segment = propagation_segment(g, tps, boundary, turning_point);
    let band = grow_region(mesh, &segment, width, |t| g.chart_of(t) == receiving);
    relabel(l, &band, g.chart(invading).label, generation)
}

pub fn apply_mutation(
    mesh: &SurfaceMesh,
    l: &Labeling,
    g: &ChartGraph,
    tps: &TurningPointSet,
    spec: &MutationSpec,
    ratio: f64,
    generation: u32,
) -> Result<Labeling> {
    Ok(match *spec {
        MutationSpec::DirectionalPath { vertex, chart, direction, width } => {
            directional_path(mesh, l, g, vertex, chart, direction, width, generation)
        }
        MutationSpec::ChartRemoval { chart } => chart_removal(mesh, l, g, chart, ratio, generation)?,
        MutationSpec::ChartPropagation { boundary, turning_point, invading, width } => {
            chart_propagation(mesh, l, g, tps, boundary, turning_point, invading, width, generation)
        }
    })
}

/// A location on a boundary: boundary id and index in its vertex path.
fn sample_boundary_location<R: Rng + ?Sized>(
    g: &ChartGraph,
    tps: &TurningPointSet,
    rng: &mut R,
) -> Option<(usize, usize, bool)> {
    if !tps.is_empty() {
        let k = rng.gen_range(0..tps.count());
        let tp = tps.iter(g).nth(k).expect("index below count");
        return Some((tp.boundary, tp.index, true));
    }
    let vertices = g.boundary_vertices();
    if vertices.is_empty() {
        return None;
    }
    let v = vertices[rng.gen_range(0..vertices.len())];
    let mut containing = Vec::new();
    for (b, bd) in g.boundaries().iter().enumerate() {
        if let Some(i) = bd.vertices.iter().position(|&x| x == v) {
            containing.push((b, i));
        }
    }
    let (b, i) = containing[rng.gen_range(0..containing.len())];
    Some((b, i, false))
}

/// Draws a mutation: kind uniformly, chart removal on a uniform invalid
/// chart when any exist, path and propagation mutations at a uniform
/// turning point or, without turning points, a uniform boundary vertex.
/// Returns `None` when the labeling has no boundary to act on.
pub fn sample_mutation<R: Rng + ?Sized>(
    mesh: &SurfaceMesh,
    g: &ChartGraph,
    tps: &TurningPointSet,
    rng: &mut R,
) -> Option<MutationSpec> {
    let kind = MutationKind::ALL[rng.gen_range(0..3)];
    let l_avg = mesh.avg_edge_length();
    match kind {
        MutationKind::ChartRemoval => {
            let invalid = g.invalid_charts();
            let chart = if invalid.is_empty() {
                rng.gen_range(0..g.num_charts())
            } else {
                invalid[rng.gen_range(0..invalid.len())]
            };
            Some(MutationSpec::ChartRemoval { chart })
        }
        MutationKind::DirectionalPath => {
            let (b, index, _) = sample_boundary_location(g, tps, rng)?;
            let width = rng.gen_range(l_avg..=5.0 * l_avg);
            let bd = g.boundary(b);
            let chart = if rng.gen_bool(0.5) { bd.left } else { bd.right };
            let direction = orthogonal_directions(g.chart(chart).label)[rng.gen_range(0..4)];
            Some(MutationSpec::DirectionalPath { vertex: bd.vertices[index], chart, direction, width })
        }
        MutationKind::ChartPropagation => {
            let (b, index, is_turning) = sample_boundary_location(g, tps, rng)?;
            let width = rng.gen_range(l_avg..=5.0 * l_avg);
            let bd = g.boundary(b);
            let invading = if rng.gen_bool(0.5) { bd.left } else { bd.right };
            let turning_point = (is_turning && !tps.on_boundary(b).is_empty()).then_some(index);
            Some(MutationSpec::ChartPropagation { boundary: b, turning_point, invading, width })
        }
    }
}

/// Samples and applies one mutation. Degenerate draws give an unchanged
/// labeling.
pub fn random_mutation<R: Rng + ?Sized>(
    mesh: &SurfaceMesh,
    l: &Labeling,
    g: &ChartGraph,
    tps: &TurningPointSet,
    rng: &mut R,
    ratio: f64,
    generation: u32,
) -> (Labeling, Option<MutationSpec>) {
    let Some(spec) = sample_mutation(mesh, g, tps, rng) else {
        return (l.clone(), None);
    };
    match apply_mutation(mesh, l, g, tps, &spec, ratio, generation) {
        Ok(out) => (out, Some(spec)),
        Err(err) => {
            log::debug!("mutation {spec:?} failed: {err}");
            (l.clone(), Some(spec))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::extract_charts;
    use crate::graphcut::DEFAULT_RATIO;
    use crate::label::naive_normal_labeling;
    use crate::shapes;
    use crate::turning::detect_turning_points;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn top_chart(g: &ChartGraph) -> usize {
        (0..g.num_charts()).find(|&c| g.chart(c).label == Label::POS_Z).unwrap()
    }

    #[test]
    fn directional_band_gets_remaining_labels() {
        let mesh = shapes::subdivided_cube(6);
        let l = naive_normal_labeling(&mesh);
        let g = extract_charts(&mesh, &l);
        let c = top_chart(&g);
        // midpoint of the top face's -X edge
        let start = (0..mesh.num_vertices())
            .find(|&v| {
                let p = mesh.vertex(v);
                p.z == 1.0 && p.x == 0.0 && (p.y - 0.5).abs() < 1e-12
            })
            .unwrap();
        let out = directional_path(&mesh, &l, &g, start, c, Label::POS_X, mesh.avg_edge_length(), 3);
        let changed: Vec<usize> = (0..mesh.num_triangles()).filter(|&t| out.label(t) != l.label(t)).collect();
        assert!(!changed.is_empty());
        for &t in &changed {
            assert!(matches!(out.label(t), Label::POS_Y | Label::NEG_Y));
            assert_eq!(out.stamp(t), 3);
            assert_eq!(l.label(t), Label::POS_Z);
        }
        // the band crosses the face: it touches the +X edge of the top face
        assert!(changed.iter().any(|&t| mesh.triangle(t).iter().any(|&v| mesh.vertex(v).x == 1.0)));
    }

    #[test]
    fn removal_never_keeps_label() {
        let mesh = shapes::subdivided_cube(2);
        let l = naive_normal_labeling(&mesh);
        let g = extract_charts(&mesh, &l);
        let c = top_chart(&g);
        let out = chart_removal(&mesh, &l, &g, c, DEFAULT_RATIO, 1).unwrap();
        for &t in &g.chart(c).triangles {
            assert_ne!(out.label(t), Label::POS_Z);
        }
        assert!(crate::charts::validity_proxy(&extract_charts(&mesh, &out)) > 0);
    }

    #[test]
    fn monotone_propagation_flips_a_strip() {
        let mesh = shapes::subdivided_cube(4);
        let l = naive_normal_labeling(&mesh);
        let g = extract_charts(&mesh, &l);
        let tps = detect_turning_points(&mesh, &g);
        let b = 0;
        let bd = g.boundary(b);
        let out = chart_propagation(&mesh, &l, &g, &tps, b, None, bd.left, mesh.avg_edge_length(), 2);
        let changed: Vec<usize> = (0..mesh.num_triangles()).filter(|&t| out.label(t) != l.label(t)).collect();
        assert!(!changed.is_empty());
        let right = &g.chart(bd.right).triangles;
        assert!(changed.iter().all(|t| right.contains(t)));
        assert!(changed.iter().all(|&t| out.label(t) == g.chart(bd.left).label));
        // a single strip: every changed triangle touches the boundary
        assert!(changed.iter().all(|&t| mesh.triangle(t).iter().any(|v| bd.vertices.contains(v))));
    }

    #[test]
    fn same_seed_same_mutation() {
        let mesh = shapes::icosphere(2);
        let l = crate::graphcut::graphcut_initial_labeling(&mesh, DEFAULT_RATIO);
        let g = extract_charts(&mesh, &l);
        let tps = detect_turning_points(&mesh, &g);
        for seed in 0..10 {
            let a = random_mutation(&mesh, &l, &g, &tps, &mut ChaCha8Rng::seed_from_u64(seed), DEFAULT_RATIO, 1);
            let b = random_mutation(&mesh, &l, &g, &tps, &mut ChaCha8Rng::seed_from_u64(seed), DEFAULT_RATIO, 1);
            assert_eq!(a, b);
            assert_eq!(a.0.len(), l.len());
        }
    }

    #[test]
    fn invalid_chart_is_the_only_removal_target() {
        let mesh = shapes::subdivided_cube(3);
        let mut l = naive_normal_labeling(&mesh);
        let t = (0..mesh.num_triangles())
            .find(|&t| l.label(t) == Label::POS_Z && mesh.triangle_neighbors(t).iter().all(|&n| l.label(n) == Label::POS_Z))
            .unwrap();
        l.set(t, Label::POS_X, 0);
        let g = extract_charts(&mesh, &l);
        let invalid = g.invalid_charts();
        assert_eq!(invalid, vec![g.chart_of(t)]);
        let tps = detect_turning_points(&mesh, &g);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            if let Some(MutationSpec::ChartRemoval { chart }) = sample_mutation(&mesh, &g, &tps, &mut rng) {
                assert_eq!(chart, invalid[0]);
            }
        }
    }
}
