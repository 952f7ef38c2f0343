use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{SurfaceMesh, Vec3};

/// One of the six signed axis directions, encoded `0..6` as
/// `+X, -X, +Y, -Y, +Z, -Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Label(u8);

impl Label {
    pub const POS_X: Label = Label(0);
    pub const NEG_X: Label = Label(1);
    pub const POS_Y: Label = Label(2);
    pub const NEG_Y: Label = Label(3);
    pub const POS_Z: Label = Label(4);
    pub const NEG_Z: Label = Label(5);

    pub const ALL: [Label; 6] = [Label(0), Label(1), Label(2), Label(3), Label(4), Label(5)];

    pub fn new(code: u8) -> Option<Label> {
        (code < 6).then_some(Label(code))
    }

    pub fn from_axis(axis: usize, positive: bool) -> Label {
        debug_assert!(axis < 3);
        Label((2 * axis) as u8 + (!positive) as u8)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn axis(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn opposite(self) -> Label {
        Label(self.0 ^ 1)
    }

    pub fn is_opposite(self, other: Label) -> bool {
        self.0 ^ 1 == other.0
    }

    pub fn direction(self) -> Vec3 {
        let mut d = Vec3::zeros();
        d[self.axis()] = if self.is_positive() { 1.0 } else { -1.0 };
        d
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(code: u8) -> std::result::Result<Self, Self::Error> {
        Label::new(code).ok_or_else(|| format!("label code {code} outside 0..5"))
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_positive() { '+' } else { '-' };
        let axis = ['X', 'Y', 'Z'][self.axis()];
        write!(f, "{sign}{axis}")
    }
}

/// Per-triangle labels plus, for each triangle, the generation at which its
/// label last changed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<Label>,
    stamps: Vec<u32>,
}

impl Labeling {
    /// A labeling with every stamp at generation 0.
    pub fn new(labels: Vec<Label>) -> Self {
        let stamps = vec![0; labels.len()];
        Labeling { labels, stamps }
    }

    pub fn uniform(len: usize, label: Label) -> Self {
        Labeling::new(vec![label; len])
    }

    pub fn from_parts(labels: Vec<Label>, stamps: Vec<u32>) -> Self {
        assert_eq!(labels.len(), stamps.len());
        Labeling { labels, stamps }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, t: usize) -> Label {
        self.labels[t]
    }

    pub fn stamp(&self, t: usize) -> u32 {
        self.stamps[t]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn stamps(&self) -> &[u32] {
        &self.stamps
    }

    /// Relabels `t`, stamping it with `generation` if the label changes.
    /// Returns whether anything changed.
    pub fn set(&mut self, t: usize, label: Label, generation: u32) -> bool {
        if self.labels[t] == label {
            return false;
        }
        self.labels[t] = label;
        self.stamps[t] = generation;
        true
    }

    pub fn same_labels(&self, other: &Labeling) -> bool {
        self.labels == other.labels
    }

    pub fn check_mesh(&self, mesh: &SurfaceMesh) -> Result<()> {
        if self.len() != mesh.num_triangles() {
            return Err(Error::LabelingLength { expected: mesh.num_triangles(), found: self.len() });
        }
        Ok(())
    }

    /// One label code per line, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(2 * self.len());
        for l in &self.labels {
            s.push((b'0' + l.0) as char);
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Labeling> {
        let labels = text
            .lines()
            .enumerate()
            .filter(|(_, line)| !line.trim().is_empty())
            .map(|(i, line)| {
                line.trim()
                    .parse::<u8>()
                    .ok()
                    .and_then(Label::new)
                    .ok_or_else(|| Error::Parse(format!("line {}: expected a label in 0..5, got '{}'", i + 1, line.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Labeling::new(labels))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Labeling> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Labeling::parse_text(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Label whose direction best matches `normal`; ties go to the lower code.
pub fn closest_label(normal: &Vec3) -> Label {
    let mut best = Label::POS_X;
    let mut best_dot = f64::NEG_INFINITY;
    for l in Label::ALL {
        let d = normal.dot(&l.direction());
        if d > best_dot {
            best = l;
            best_dot = d;
        }
    }
    best
}

/// Assigns every triangle the label closest to its normal.
pub fn naive_normal_labeling(mesh: &SurfaceMesh) -> Labeling {
    Labeling::new(mesh.normals().iter().map(closest_label).collect())
}

/// Labels each triangle with `f(centroid, closest label to the normal)`.
pub fn labeling_from_fn(mesh: &SurfaceMesh, f: impl Fn(Vec3, Label) -> Label) -> Labeling {
    Labeling::new((0..mesh.num_triangles()).map(|t| f(mesh.centroid(t), closest_label(&mesh.normal(t)))).collect())
}
