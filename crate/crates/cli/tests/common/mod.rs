#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polylabel::mesh::{obj_string, SurfaceMesh};

pub fn write_obj(dir: &Path, name: &str, mesh: &SurfaceMesh) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, obj_string(mesh.vertices(), mesh.triangles())).unwrap();
    path
}

/// Runs the binary in `dir` with a clean `POLYLABEL_*` environment.
pub fn run(dir: &Path, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polylabel"));
    cmd.current_dir(dir).args(args);
    for (key, _) in std::env::vars() {
        if key.starts_with("POLYLABEL_") {
            cmd.env_remove(key);
        }
    }
    cmd.output().expect("binary runs")
}

pub fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}
