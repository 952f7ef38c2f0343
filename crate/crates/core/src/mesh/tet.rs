use std::collections::HashMap;
use std::path::Path;

use super::{bounding_box, SurfaceMesh, Vec3};
use crate::error::{Error, Result};

/// A tetrahedral mesh with positively oriented cells.
#[derive(Clone, Debug)]
pub struct TetMesh {
    vertices: Vec<Vec3>,
    tets: Vec<[usize; 4]>,
}

impl TetMesh {
    /// Reorients negatively oriented tets; zero-volume tets are rejected.
    pub fn new(vertices: Vec<Vec3>, mut tets: Vec<[usize; 4]>) -> Result<Self> {
        let (lo, hi) = bounding_box(&vertices);
        let diag = (hi - lo).norm();
        let floor = 1e-18 * diag * diag * diag;
        for (i, tet) in tets.iter_mut().enumerate() {
            if tet.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Parse(format!("tetrahedron {i} references a missing vertex")));
            }
            let vol = signed_volume(&vertices, tet);
            if !(vol.abs() > floor) {
                return Err(Error::Orientation { tet: i });
            }
            if vol < 0.0 {
                tet.swap(2, 3);
            }
        }
        Ok(TetMesh { vertices, tets })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }
}

fn signed_volume(vertices: &[Vec3], t: &[usize; 4]) -> f64 {
    let o = vertices[t[0]];
    (vertices[t[1]] - o).dot(&(vertices[t[2]] - o).cross(&(vertices[t[3]] - o))) / 6.0
}

pub fn load_tet_medit(path: impl AsRef<Path>) -> Result<TetMesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_medit(&text)
}

// Number of tokens per record for the MEDIT sections we may have to skip.
fn section_arity(keyword: &str) -> Option<usize> {
    Some(match keyword {
        "Vertices" => 4,
        "Edges" => 3,
        "Triangles" => 4,
        "Quadrilaterals" => 5,
        "Tetrahedra" => 5,
        "Prisms" => 7,
        "Hexahedra" => 9,
        "Corners" | "Ridges" | "RequiredVertices" | "RequiredEdges" | "RequiredTriangles" => 1,
        "Normals" | "Tangents" => 3,
        "NormalAtVertices" | "TangentAtVertices" => 2,
        "NormalAtTriangleVertices" => 3,
        _ => return None,
    })
}

/// Parses an ASCII MEDIT `.mesh` file. Only `Vertices` and `Tetrahedra` are
/// kept; other known sections are skipped.
pub fn parse_medit(text: &str) -> Result<TetMesh> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .peekable();

    let mut vertices = Vec::new();
    let mut tets = Vec::new();
    let mut saw_tets = false;

    let next_usize = |tokens: &mut dyn Iterator<Item = &str>, what: &str| -> Result<usize> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected integer for {what}")))
    };

    while let Some(keyword) = tokens.next() {
        match keyword {
            "MeshVersionFormatted" | "Dimension" => {
                let value = next_usize(&mut tokens, keyword)?;
                if keyword == "Dimension" && value != 3 {
                    return Err(Error::Parse(format!("unsupported dimension {value}")));
                }
            }
            "End" => break,
            "Vertices" => {
                let n = next_usize(&mut tokens, "vertex count")?;
                for _ in 0..n {
                    let mut c = [0.0; 3];
                    for x in &mut c {
                        *x = tokens
                            .next()
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| Error::Parse("bad vertex coordinate".into()))?;
                    }
                    tokens.next().ok_or_else(|| Error::Parse("missing vertex reference".into()))?;
                    vertices.push(Vec3::new(c[0], c[1], c[2]));
                }
            }
            "Tetrahedra" => {
                saw_tets = true;
                let n = next_usize(&mut tokens, "tetrahedron count")?;
                for _ in 0..n {
                    let mut t = [0usize; 4];
                    for v in &mut t {
                        let idx = next_usize(&mut tokens, "tetrahedron vertex")?;
                        if idx == 0 {
                            return Err(Error::Parse("MEDIT indices are 1-based".into()));
                        }
                        *v = idx - 1;
                    }
                    next_usize(&mut tokens, "tetrahedron reference")?;
                    tets.push(t);
                }
            }
            other => {
                let arity =
                    section_arity(other).ok_or_else(|| Error::Parse(format!("unknown MEDIT keyword '{other}'")))?;
                let n = next_usize(&mut tokens, other)?;
                for _ in 0..n * arity {
                    tokens.next().ok_or_else(|| Error::Parse(format!("{other} section truncated")))?;
                }
            }
        }
    }

    if !saw_tets {
        return Err(Error::Parse("missing Tetrahedra section".into()));
    }
    TetMesh::new(vertices, tets)
}

/// Triangles incident to exactly one tet, oriented outward.
pub fn extract_boundary(mesh: &TetMesh) -> Result<SurfaceMesh> {
    // outward faces of a positively oriented tet
    const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

    let mut count: HashMap<[usize; 3], (usize, [usize; 3])> = HashMap::new();
    let mut order = Vec::new();
    for tet in mesh.tets() {
        for f in FACES {
            let face = f.map(|i| tet[i]);
            let mut key = face;
            key.sort_unstable();
            let entry = count.entry(key).or_insert_with(|| {
                order.push(key);
                (0, face)
            });
            entry.0 += 1;
        }
    }

    let mut triangles = Vec::new();
    for key in order {
        match count[&key] {
            (1, face) => triangles.push(face),
            (2, _) => {}
            (n, _) => {
                return Err(Error::Topology(format!("tet face {key:?} is shared by {n} tetrahedra")));
            }
        }
    }
    SurfaceMesh::new(mesh.vertices().to_vec(), triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SINGLE_TET: &str = "MeshVersionFormatted 1\nDimension 3\nVertices\n4\n\
        0 0 0 0\n1 0 0 0\n0 1 0 0\n0 0 1 0\nTetrahedra\n1\n1 2 3 4 1\nEnd\n";

    /// Unit cube split into 6 tets around the main diagonal 0-6.
    pub(crate) fn cube_six_tets(edge: f64) -> String {
        let corners = [
            [0, 0, 0],
            [1, 0, 0],
            [1, 1, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 0, 1],
            [1, 1, 1],
            [0, 1, 1],
        ];
        let tets = [[0, 1, 2, 6], [0, 2, 3, 6], [0, 3, 7, 6], [0, 7, 4, 6], [0, 4, 5, 6], [0, 5, 1, 6]];
        let mut s = String::from("MeshVersionFormatted 1\nDimension 3\nVertices\n8\n");
        for c in corners {
            s.push_str(&format!("{} {} {} 0\n", c[0] as f64 * edge, c[1] as f64 * edge, c[2] as f64 * edge));
        }
        s.push_str("Tetrahedra\n6\n");
        for t in tets {
            s.push_str(&format!("{} {} {} {} 0\n", t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1));
        }
        s.push_str("End\n");
        s
    }

    #[test]
    fn single_tet_boundary_faces_outward() {
        let tets = parse_medit(SINGLE_TET).unwrap();
        assert_eq!(tets.num_tets(), 1);
        let surf = extract_boundary(&tets).unwrap();
        assert_eq!(surf.num_triangles(), 4);
        let centroid = Vec3::repeat(0.25);
        for t in 0..4 {
            assert!((surf.centroid(t) - centroid).dot(&surf.normal(t)) > 0.0);
        }
    }

    #[test]
    fn six_tet_cube_boundary() {
        let edge = 2.0;
        let tets = parse_medit(&cube_six_tets(edge)).unwrap();
        let surf = extract_boundary(&tets).unwrap();
        // brute force: faces that appear in exactly one tet
        let mut multiplicity: HashMap<[usize; 3], usize> = HashMap::new();
        for t in tets.tets() {
            for skip in 0..4 {
                let mut f: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| t[i]).collect();
                f.sort_unstable();
                *multiplicity.entry([f[0], f[1], f[2]]).or_default() += 1;
            }
        }
        let expected = multiplicity.values().filter(|&&m| m == 1).count();
        assert_eq!(expected, 12);
        assert_eq!(surf.num_triangles(), expected);
        assert!((surf.total_area() - 6.0 * edge * edge).abs() < 1e-12);
    }

    #[test]
    fn glued_tets_drop_shared_face() {
        let text = "Vertices\n5\n0 0 0 0\n1 0 0 0\n0 1 0 0\n0 0 1 0\n1 1 1 0\n\
                    Tetrahedra\n2\n1 2 3 4 0\n2 3 4 5 0\nEnd\n";
        let tets = parse_medit(text).unwrap();
        let surf = extract_boundary(&tets).unwrap();
        assert_eq!(surf.num_triangles(), 6);
    }

    #[test]
    fn negative_tets_are_reoriented() {
        let text = SINGLE_TET.replace("1 2 3 4 1", "1 3 2 4 1");
        let tets = parse_medit(&text).unwrap();
        assert!(signed_volume(tets.vertices(), &tets.tets()[0]) > 0.0);
    }

    #[test]
    fn flat_tet_rejected() {
        let text = SINGLE_TET.replace("0 0 1 0\nTet", "1 1 0 0\nTet");
        assert!(matches!(parse_medit(&text).unwrap_err(), Error::Orientation { tet: 0 }));
    }

    #[test]
    fn missing_tetrahedra_keyword() {
        let text = "MeshVersionFormatted 1\nDimension 3\nVertices\n1\n0 0 0 0\nEnd\n";
        assert!(matches!(parse_medit(text).unwrap_err(), Error::Parse(_)));
    }

    #[test]
    fn skips_triangle_section() {
        let text = SINGLE_TET.replace("Tetrahedra", "Triangles\n1\n1 2 3 0\nTetrahedra");
        assert_eq!(parse_medit(&text).unwrap().num_tets(), 1);
    }
}
