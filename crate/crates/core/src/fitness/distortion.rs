//! Per-triangle distortion of the map from the input surface to the fast
//! polycube.

use nalgebra::Matrix2;

use crate::label::Label;
use crate::mesh::{SurfaceMesh, Vec3};

/// Value given to degenerate, inverted or exploding triangles.
pub const CLAMP: f64 = 1e6;
/// Smallest singular value below which a map counts as collapsed.
pub const MIN_SINGULAR_VALUE: f64 = 1e-9;

/// Singular values `(s1, s2)`, `s1 >= s2 >= 0`, of a 2x2 matrix, and the
/// sign of its determinant.
pub fn singular_values_2x2(j: &Matrix2<f64>) -> (f64, f64, f64) {
    let (a, b, c, d) = (j[(0, 0)], j[(0, 1)], j[(1, 0)], j[(1, 1)]);
    let e = 0.5 * (a + d);
    let f = 0.5 * (a - d);
    let g = 0.5 * (c + b);
    let h = 0.5 * (c - b);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let det = a * d - b * c;
    (q + r, (q - r).abs(), det)
}

/// Workability integrand from singular values, without clamping.
pub fn workability_from_singular(s1: f64, s2: f64) -> f64 {
    s1 + s2 + 1.0 / (s1 * s2) + s1 / s2 + s2 / s1 - 4.0
}

/// Clamped workability integrand of a Jacobian.
pub fn workability_integrand(j: &Matrix2<f64>) -> f64 {
    let (s1, s2, det) = singular_values_2x2(j);
    if s2 < MIN_SINGULAR_VALUE || det < 0.0 {
        return CLAMP;
    }
    let e = workability_from_singular(s1, s2);
    if e.is_finite() && e <= CLAMP {
        e
    } else {
        CLAMP
    }
}

/// Clamped area-distortion integrand `(s1 s2 + 1 / (s1 s2)) / 2`.
pub fn area_integrand(j: &Matrix2<f64>) -> f64 {
    let (s1, s2, det) = singular_values_2x2(j);
    if s2 < MIN_SINGULAR_VALUE || det < 0.0 {
        return CLAMP;
    }
    let s = s1 * s2;
    (0.5 * (s + 1.0 / s)).min(CLAMP)
}

/// Orthonormal in-plane axes `(f1, f2)` with `f1 x f2` equal to the label
/// direction.
fn label_frame(label: Label) -> (Vec3, Vec3) {
    let a = label.axis();
    let mut u = Vec3::zeros();
    let mut v = Vec3::zeros();
    u[(a + 1) % 3] = 1.0;
    v[(a + 2) % 3] = 1.0;
    if label.is_positive() {
        (u, v)
    } else {
        (v, u)
    }
}

/// Jacobian of the affine map taking triangle `t` of `mesh` to the same
/// triangle over `deformed` positions. The input frame follows the input
/// normal; the output frame uses the label direction as its normal, so a
/// negative determinant means the image faces away from the label.
pub fn triangle_jacobian(mesh: &SurfaceMesh, deformed: &[Vec3], label: Label, t: usize) -> Matrix2<f64> {
    let [i, j, k] = mesh.triangle(t);
    let (p0, p1, p2) = (mesh.vertex(i), mesh.vertex(j), mesh.vertex(k));
    let e1 = p1 - p0;
    let len = e1.norm();
    let x = e1 / len;
    let y = mesh.normal(t).cross(&x);
    let e2 = p2 - p0;
    let source = Matrix2::new(len, e2.dot(&x), 0.0, e2.dot(&y));

    let (f1, f2) = label_frame(label);
    let d1 = deformed[j] - deformed[i];
    let d2 = deformed[k] - deformed[i];
    let image = Matrix2::new(d1.dot(&f1), d2.dot(&f1), d1.dot(&f2), d2.dot(&f2));

    // the source matrix is upper triangular with a positive diagonal
    let inv = Matrix2::new(1.0 / len, -e2.dot(&x) / (len * e2.dot(&y)), 0.0, 1.0 / e2.dot(&y));
    debug_assert!((source * inv - Matrix2::identity()).norm() < 1e-9);
    image * inv
}
