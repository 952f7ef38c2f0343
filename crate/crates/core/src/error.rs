use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("topology error: {0}")]
    Topology(String),

    #[error("degenerate triangle {triangle} (area {area:e})")]
    Degenerate { triangle: usize, area: f64 },

    #[error("tetrahedron {tet} has zero volume")]
    Orientation { tet: usize },

    #[error("labeling has {found} entries but the mesh has {expected} triangles")]
    LabelingLength { expected: usize, found: usize },

    #[error("least-squares solve did not converge: gradient norm {gradient_norm:e} after {iterations} iterations")]
    Solve { gradient_norm: f64, iterations: usize },

    #[error("node {node} has every label forbidden")]
    Infeasible { node: usize },

    #[error("archive is empty")]
    EmptyArchive,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
