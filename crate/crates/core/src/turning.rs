//! Turning points: vertices where a chart boundary reverses its travel
//! direction along the axis orthogonal to both adjacent labels.
//!
//! Each boundary edge gets one of two labels; a unary term biases the label
//! by the sign of the edge's projection on the boundary axis, and a pairwise
//! term charges label switches between well-aligned consecutive edges. The
//! two-label chain (or cycle) is solved exactly by dynamic programming.

use crate::charts::ChartGraph;
use crate::mesh::{SurfaceMesh, Vec3};

/// Turning points per boundary, stored as indices into the boundary's vertex
/// path.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TurningPointSet {
    per_boundary: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TurningPoint {
    pub boundary: usize,
    /// Position in the boundary's vertex path.
    pub index: usize,
    pub vertex: usize,
}

impl TurningPointSet {
    pub fn on_boundary(&self, b: usize) -> &[usize] {
        &self.per_boundary[b]
    }

    pub fn count(&self) -> usize {
        self.per_boundary.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn iter<'a>(&'a self, g: &'a ChartGraph) -> impl Iterator<Item = TurningPoint> + 'a {
        self.per_boundary.iter().enumerate().flat_map(move |(b, idx)| {
            idx.iter().map(move |&index| TurningPoint { boundary: b, index, vertex: g.boundary(b).vertices[index] })
        })
    }
}

/// Two-label energy on a chain or cycle of boundary edges.
#[derive(Clone, Debug)]
pub struct ChainProblem {
    pub unary: Vec<[f64; 2]>,
    /// `pairwise[i]` is charged when edges `i` and `i + 1` disagree; for a
    /// cycle the last entry couples the last and first edges.
    pub pairwise: Vec<f64>,
    pub closed: bool,
}

fn unary_penalty(dot: f64) -> f64 {
    1.0 - (-0.5 * (dot / 0.9).powi(2)).exp()
}

impl ChainProblem {
    /// Builds the cost system for unit edge directions `dirs` and the
    /// boundary axis.
    pub fn from_directions(dirs: &[Vec3], axis: &Vec3, closed: bool) -> Self {
        let unary = dirs
            .iter()
            .map(|e| {
                let d = e.dot(axis);
                [if d < 0.0 { unary_penalty(d) } else { 0.0 }, if d > 0.0 { unary_penalty(d) } else { 0.0 }]
            })
            .collect();
        let n = dirs.len();
        let couplings = if closed { n } else { n.saturating_sub(1) };
        let pairwise = (0..couplings)
            .map(|i| {
                let c = dirs[i].dot(&dirs[(i + 1) % n]) - 1.0;
                (-(c * c) / 2.0).exp()
            })
            .collect();
        ChainProblem { unary, pairwise, closed }
    }

    pub fn len(&self) -> usize {
        self.unary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unary.is_empty()
    }

    pub fn energy(&self, labels: &[u8]) -> f64 {
        let n = labels.len();
        let mut e = 0.0;
        for i in 0..n {
            e += self.unary[i][labels[i] as usize];
        }
        for (i, &w) in self.pairwise.iter().enumerate() {
            if labels[i] != labels[(i + 1) % n] {
                e += w;
            }
        }
        e
    }

    /// Exact minimizer. Ties prefer label 0 for the final (or, on cycles,
    /// the first) edge and otherwise keep the label unchanged.
    pub fn solve(&self) -> Vec<u8> {
        let n = self.len();
        if n == 0 {
            return Vec::new();
        }
        if !self.closed {
            return self.solve_from(None).1;
        }
        let (e0, l0) = self.solve_from(Some(0));
        let (e1, l1) = self.solve_from(Some(1));
        if e1 < e0 {
            l1
        } else {
            l0
        }
    }

    // Viterbi pass; `first` pins the first edge's label (used for cycles,
    // where the closing coupling is then added at the end).
    fn solve_from(&self, first: Option<u8>) -> (f64, Vec<u8>) {
        let n = self.len();
        let mut cost = vec![[0.0f64; 2]; n];
        let mut back = vec![[0u8; 2]; n];
        for l in 0..2 {
            cost[0][l] = match first {
                Some(f) if f as usize != l => f64::INFINITY,
                _ => self.unary[0][l],
            };
        }
        for i in 1..n {
            for l in 0..2 {
                let stay = cost[i - 1][l];
                let switch = cost[i - 1][1 - l] + self.pairwise[i - 1];
                let (best, from) = if switch < stay { (switch, 1 - l) } else { (stay, l) };
                cost[i][l] = best + self.unary[i][l];
                back[i][l] = from as u8;
            }
        }
        let mut tail = cost[n - 1];
        if let Some(f) = first {
            let closing = self.pairwise[n - 1];
            tail[1 - f as usize] += closing;
        }
        let mut l = if tail[1] < tail[0] { 1u8 } else { 0u8 };
        let energy = tail[l as usize];
        let mut labels = vec![0u8; n];
        for i in (0..n).rev() {
            labels[i] = l;
            l = back[i][l as usize];
        }
        (energy, labels)
    }
}

/// Positions in a vertex path where consecutive edge labels switch.
pub fn switch_vertices(labels: &[u8], closed: bool) -> Vec<usize> {
    let n = labels.len();
    let mut out = Vec::new();
    if closed && n > 1 && labels[n - 1] != labels[0] {
        out.push(0);
    }
    for i in 0..n.saturating_sub(1) {
        if labels[i] != labels[i + 1] {
            out.push(i + 1);
        }
    }
    out
}

/// Axis orthogonal to both labels of boundary `b`, oriented as the cross
/// product of the left and right label directions. `None` when the two
/// labels share an axis.
pub fn boundary_axis(g: &ChartGraph, b: usize) -> Option<Vec3> {
    let bd = g.boundary(b);
    let (l, r) = (g.chart(bd.left).label, g.chart(bd.right).label);
    if l.axis() == r.axis() {
        return None;
    }
    Some(l.direction().cross(&r.direction()))
}

/// Unit directions of the edges of boundary `b`, in path order.
pub fn boundary_directions(mesh: &SurfaceMesh, g: &ChartGraph, b: usize) -> Vec<Vec3> {
    let bd = g.boundary(b);
    (0..bd.edges.len())
        .map(|k| {
            let (a, c) = bd.edge_endpoints(k);
            (mesh.vertex(c) - mesh.vertex(a)).normalize()
        })
        .collect()
}

/// Labels of the exact chain solution on boundary `b`, or `None` for
/// boundaries between charts sharing an axis.
pub fn boundary_edge_labels(mesh: &SurfaceMesh, g: &ChartGraph, b: usize) -> Option<Vec<u8>> {
    let axis = boundary_axis(g, b)?;
    let dirs = boundary_directions(mesh, g, b);
    Some(ChainProblem::from_directions(&dirs, &axis, g.boundary(b).closed).solve())
}

pub fn detect_turning_points(mesh: &SurfaceMesh, g: &ChartGraph) -> TurningPointSet {
    let per_boundary = (0..g.boundaries().len())
        .map(|b| match boundary_edge_labels(mesh, g, b) {
            Some(labels) => switch_vertices(&labels, g.boundary(b).closed),
            None => Vec::new(),
        })
        .collect();
    TurningPointSet { per_boundary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::extract_charts;
    use crate::label::naive_normal_labeling;
    use crate::shapes;

    fn brute_force(p: &ChainProblem) -> f64 {
        let n = p.len();
        (0..1u32 << n)
            .map(|mask| {
                let labels: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                p.energy(&labels)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn dirs_from_dots(dots: &[f64]) -> Vec<Vec3> {
        // unit vectors with the requested projection on +X, bending in XY
        dots.iter().map(|&d| Vec3::new(d, (1.0 - d * d).max(0.0).sqrt(), 0.0)).collect()
    }

    #[test]
    fn straight_boundary_has_no_turning_point() {
        let p = ChainProblem::from_directions(&dirs_from_dots(&[1.0; 5]), &Vec3::x(), false);
        let labels = p.solve();
        assert_eq!(p.energy(&labels), 0.0);
        assert!(switch_vertices(&labels, false).is_empty());
    }

    #[test]
    fn single_reversal() {
        let p = ChainProblem::from_directions(&dirs_from_dots(&[1.0, 1.0, -1.0, -1.0]), &Vec3::x(), false);
        let labels = p.solve();
        assert_eq!(p.energy(&labels), brute_force(&p));
        assert_eq!(switch_vertices(&labels, false), vec![2]);
    }

    #[test]
    fn u_turn_matches_enumeration() {
        let dirs = vec![Vec3::new(1.0, 0.1, 0.0).normalize(), Vec3::new(-1.0, 0.2, 0.0).normalize(), Vec3::x()];
        for closed in [false, true] {
            let p = ChainProblem::from_directions(&dirs, &Vec3::x(), closed);
            let labels = p.solve();
            assert_eq!(p.energy(&labels), brute_force(&p));
        }
    }

    #[test]
    fn cube_boundaries_are_monotone() {
        let mesh = shapes::subdivided_cube(3);
        let g = extract_charts(&mesh, &naive_normal_labeling(&mesh));
        assert_eq!(detect_turning_points(&mesh, &g).count(), 0);
    }

    #[test]
    fn convex_cube_edges_project_positively() {
        let mesh = shapes::unit_cube();
        let g = extract_charts(&mesh, &naive_normal_labeling(&mesh));
        for b in 0..g.boundaries().len() {
            let axis = boundary_axis(&g, b).unwrap();
            for d in boundary_directions(&mesh, &g, b) {
                assert!((d.dot(&axis) - 1.0).abs() < 1e-12);
            }
        }
    }
}
