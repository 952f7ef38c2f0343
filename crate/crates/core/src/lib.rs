//! Polycube labeling of closed triangle meshes.
//!
//! A labeling assigns one of the six signed axis directions to every surface
//! triangle. Starting from a graph-cut initialization, an evolutionary loop
//! mutates, crosses and ranks labelings with a fitness built from a validity
//! proxy, the distortion of a fast least-squares surface polycube, normal
//! fidelity and corner count.

pub mod charts;
pub mod error;
pub mod evolution;
pub mod fitness;
pub mod fixtures;
pub mod graphcut;
pub mod label;
pub mod mesh;
pub mod mutations;
pub mod shapes;
pub mod turning;

pub use charts::{extract_charts, validity_proxy, ChartGraph};
pub use error::{Error, Result};
pub use evolution::{run_evolution, Archive, EvolutionResult, GaConfig, Individual};
pub use fitness::{evaluate_fitness, FitnessValue, FitnessWeights};
pub use graphcut::graphcut_initial_labeling;
pub use label::{labeling_from_fn, naive_normal_labeling, Label, Labeling};
pub use mesh::{SurfaceMesh, TetMesh};
pub use turning::{detect_turning_points, TurningPointSet};
