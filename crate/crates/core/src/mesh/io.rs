use std::collections::HashMap;
use std::path::Path;

use super::{bounding_box, SurfaceMesh, Vec3};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceFormat {
    Obj,
    Stl,
    Ply,
}

impl SurfaceFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "obj" => Some(SurfaceFormat::Obj),
            "stl" => Some(SurfaceFormat::Stl),
            "ply" => Some(SurfaceFormat::Ply),
            _ => None,
        }
    }
}

pub fn load_surface(path: impl AsRef<Path>, format: SurfaceFormat) -> Result<SurfaceMesh> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    match format {
        SurfaceFormat::Obj => parse_obj(&utf8(&bytes)?),
        SurfaceFormat::Stl => parse_stl(&bytes),
        SurfaceFormat::Ply => parse_ply(&utf8(&bytes)?),
    }
}

/// Loads a surface mesh, picking the format from the file extension.
pub fn load_surface_auto(path: impl AsRef<Path>) -> Result<SurfaceMesh> {
    let path = path.as_ref();
    let format = SurfaceFormat::from_path(path)
        .ok_or_else(|| Error::Parse(format!("unrecognized surface extension: {}", path.display())))?;
    load_surface(path, format)
}

/// Any supported input: a surface file or a MEDIT tetrahedral mesh whose
/// boundary is extracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Obj,
    Stl,
    Ply,
    Medit,
}

impl InputFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "mesh" => Some(InputFormat::Medit),
            _ => SurfaceFormat::from_path(path).map(|f| match f {
                SurfaceFormat::Obj => InputFormat::Obj,
                SurfaceFormat::Stl => InputFormat::Stl,
                SurfaceFormat::Ply => InputFormat::Ply,
            }),
        }
    }
}

/// Loads a surface from any supported file, choosing the format by
/// extension.
pub fn load_input(path: impl AsRef<Path>) -> Result<(SurfaceMesh, InputFormat)> {
    let path = path.as_ref();
    let format = InputFormat::from_path(path)
        .ok_or_else(|| Error::Parse(format!("unrecognized mesh extension: {}", path.display())))?;
    let mesh = match format {
        InputFormat::Obj => load_surface(path, SurfaceFormat::Obj)?,
        InputFormat::Stl => load_surface(path, SurfaceFormat::Stl)?,
        InputFormat::Ply => load_surface(path, SurfaceFormat::Ply)?,
        InputFormat::Medit => super::extract_boundary(&super::load_tet_medit(path)?)?,
    };
    Ok((mesh, format))
}

/// OBJ text for a triangle soup.
pub fn obj_string(vertices: &[Vec3], triangles: &[[usize; 3]]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for v in vertices {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z).expect("write to string");
    }
    for t in triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).expect("write to string");
    }
    out
}

fn utf8(bytes: &[u8]) -> Result<String> {
    String::from_utf8(bytes.to_vec()).map_err(|_| Error::Parse("file is not valid UTF-8 text".into()))
}

fn parse_f64(token: Option<&str>, line: usize) -> Result<f64> {
    token
        .ok_or_else(|| Error::Parse(format!("line {line}: missing coordinate")))?
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number")))
}

/// Parses `v` and `f` records; polygons are fan-triangulated, everything else
/// is ignored.
pub fn parse_obj(text: &str) -> Result<SurfaceMesh> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let x = parse_f64(tokens.next(), lineno)?;
                let y = parse_f64(tokens.next(), lineno)?;
                let z = parse_f64(tokens.next(), lineno)?;
                vertices.push(Vec3::new(x, y, z));
            }
            Some("f") => {
                let mut poly = Vec::new();
                for tok in tokens {
                    let idx: i64 = tok
                        .split('/')
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("line {lineno}: bad face index '{tok}'")))?;
                    let resolved = if idx > 0 {
                        idx - 1
                    } else if idx < 0 {
                        vertices.len() as i64 + idx
                    } else {
                        -1
                    };
                    if resolved < 0 || resolved as usize >= vertices.len() {
                        return Err(Error::Parse(format!("line {lineno}: face index {idx} out of range")));
                    }
                    poly.push(resolved as usize);
                }
                if poly.len() < 3 {
                    return Err(Error::Parse(format!("line {lineno}: face with fewer than 3 vertices")));
                }
                for k in 1..poly.len() - 1 {
                    triangles.push([poly[0], poly[k], poly[k + 1]]);
                }
            }
            _ => {}
        }
    }
    SurfaceMesh::new(vertices, triangles)
}

/// Parses binary or ASCII STL and welds the triangle soup. Vertices closer
/// than 1e-9 of the bounding-box diagonal are merged.
pub fn parse_stl(bytes: &[u8]) -> Result<SurfaceMesh> {
    let soup = if looks_like_ascii_stl(bytes) {
        parse_stl_ascii(&utf8(bytes)?)?
    } else {
        parse_stl_binary(bytes)?
    };
    let (vertices, triangles) = weld(&soup);
    SurfaceMesh::new(vertices, triangles)
}

fn looks_like_ascii_stl(bytes: &[u8]) -> bool {
    let head = &bytes[..bytes.len().min(512)];
    let start = head.iter().position(|b| !b.is_ascii_whitespace()).unwrap_or(0);
    head[start..].starts_with(b"solid") && bytes.windows(5).any(|w| w == b"facet")
}

fn parse_stl_ascii(text: &str) -> Result<Vec<[Vec3; 3]>> {
    let mut soup = Vec::new();
    let mut current = Vec::with_capacity(3);
    for (i, line) in text.lines().enumerate() {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("vertex") => {
                let x = parse_f64(tokens.next(), i + 1)?;
                let y = parse_f64(tokens.next(), i + 1)?;
                let z = parse_f64(tokens.next(), i + 1)?;
                current.push(Vec3::new(x, y, z));
            }
            Some("endloop") => {
                if current.len() != 3 {
                    return Err(Error::Parse(format!("line {}: facet without 3 vertices", i + 1)));
                }
                soup.push([current[0], current[1], current[2]]);
                current.clear();
            }
            _ => {}
        }
    }
    if soup.is_empty() {
        return Err(Error::Parse("STL contains no facets".into()));
    }
    Ok(soup)
}

fn parse_stl_binary(bytes: &[u8]) -> Result<Vec<[Vec3; 3]>> {
    if bytes.len() < 84 {
        return Err(Error::Parse("binary STL shorter than its header".into()));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    if bytes.len() < 84 + 50 * count {
        return Err(Error::Parse(format!("binary STL truncated: expected {count} facets")));
    }
    let read = |off: usize| f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as f64;
    let soup = (0..count)
        .map(|i| {
            let base = 84 + 50 * i + 12; // skip the stored normal
            let corner = |k: usize| {
                let o = base + 12 * k;
                Vec3::new(read(o), read(o + 4), read(o + 8))
            };
            [corner(0), corner(1), corner(2)]
        })
        .collect();
    Ok(soup)
}

fn weld(soup: &[[Vec3; 3]]) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let all: Vec<Vec3> = soup.iter().flatten().copied().collect();
    let (lo, hi) = bounding_box(&all);
    let tol = 1e-9 * (hi - lo).norm().max(f64::MIN_POSITIVE);
    let cell = |p: &Vec3| -> [i64; 3] { [0, 1, 2].map(|a| ((p[a] - lo[a]) / tol).floor() as i64) };

    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut index_of = |p: Vec3| -> usize {
        let c = cell(&p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = grid.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                        if let Some(&id) = ids.iter().find(|&&id| (vertices[id] - p).norm() <= tol) {
                            return id;
                        }
                    }
                }
            }
        }
        let id = vertices.len();
        vertices.push(p);
        grid.entry(c).or_default().push(id);
        id
    };
    let triangles = soup.iter().map(|tri| tri.map(&mut index_of)).collect();
    (vertices, triangles)
}

/// Parses ASCII PLY with a `vertex` element carrying x/y/z properties and a
/// `face` element carrying a vertex index list.
pub fn parse_ply(text: &str) -> Result<SurfaceMesh> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err(Error::Parse("missing 'ply' magic".into()));
    }

    struct Element {
        name: String,
        count: usize,
        props: Vec<String>,
    }
    let mut elements: Vec<Element> = Vec::new();
    loop {
        let line = lines.next().ok_or_else(|| Error::Parse("PLY header not terminated".into()))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["end_header"] => break,
            ["format", fmt, ..] if *fmt != "ascii" => {
                return Err(Error::Parse(format!("unsupported PLY format '{fmt}'")));
            }
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count.parse().map_err(|_| Error::Parse("bad PLY element count".into()))?,
                props: Vec::new(),
            }),
            ["property", .., name] => elements
                .last_mut()
                .ok_or_else(|| Error::Parse("PLY property before element".into()))?
                .props
                .push(name.to_string()),
            _ => {}
        }
    }

    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut body = lines.filter(|l| !l.trim().is_empty());
    for element in &elements {
        for _ in 0..element.count {
            let line = body.next().ok_or_else(|| Error::Parse(format!("PLY {} data truncated", element.name)))?;
            let values: Vec<&str> = line.split_whitespace().collect();
            match element.name.as_str() {
                "vertex" => {
                    let coord = |name: &str| -> Result<f64> {
                        let i = element
                            .props
                            .iter()
                            .position(|p| p == name)
                            .ok_or_else(|| Error::Parse(format!("PLY vertex lacks '{name}'")))?;
                        values
                            .get(i)
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| Error::Parse("bad PLY vertex value".into()))
                    };
                    vertices.push(Vec3::new(coord("x")?, coord("y")?, coord("z")?));
                }
                "face" => {
                    let ids: Vec<usize> = values
                        .iter()
                        .map(|s| s.parse())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Parse("bad PLY face index".into()))?;
                    let n = *ids.first().ok_or_else(|| Error::Parse("empty PLY face".into()))?;
                    if n < 3 || ids.len() < n + 1 {
                        return Err(Error::Parse("malformed PLY face".into()));
                    }
                    let poly = &ids[1..=n];
                    for k in 1..n - 1 {
                        triangles.push([poly[0], poly[k], poly[k + 1]]);
                    }
                }
                _ => {}
            }
        }
    }
    SurfaceMesh::new(vertices, triangles)
}
