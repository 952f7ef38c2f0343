use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use polylabel::charts::extract_charts;
use polylabel::evolution::{run_evolution, EvolutionResult, GaConfig};
use polylabel::fitness::{evaluate_smoothed, fitness_report, FitnessReport, FitnessWeights};
use polylabel::graphcut::graphcut_initial_labeling;
use polylabel::mesh::{load_input, InputFormat, SurfaceMesh};
use polylabel::mutations::{apply_mutation, repair, sample_mutation, MutationKind};
use polylabel::turning::detect_turning_points;
use polylabel::Labeling;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::export;
use crate::{EvaluateArgs, ExportArgs, InitArgs, KindArg, MutateArgs, OptimizeArgs, WeightArgs};

impl WeightArgs {
    fn weights(&self) -> FitnessWeights {
        FitnessWeights { workability: self.w1, fidelity: self.w2, compactness: self.w3 }
    }
}

fn load(path: &Path) -> Result<(SurfaceMesh, InputFormat)> {
    load_input(path).with_context(|| format!("loading {}", path.display()))
}

fn load_labeling(path: &Path, mesh: &SurfaceMesh) -> Result<Labeling> {
    let l = Labeling::read(path).with_context(|| format!("reading labeling {}", path.display()))?;
    l.check_mesh(mesh).with_context(|| format!("labeling {}", path.display()))?;
    Ok(l)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn exit_for(v_p: usize) -> ExitCode {
    if v_p == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn check_ratio(ratio: f64) -> Result<()> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        bail!("ratio must be a positive number, got {ratio}");
    }
    Ok(())
}

pub fn init(args: &InitArgs) -> Result<ExitCode> {
    check_ratio(args.ratio)?;
    let (mesh, _) = load(&args.input)?;
    let weights = args.weights.weights();
    let mut labeling = graphcut_initial_labeling(&mesh, args.ratio);
    if !args.no_repair {
        labeling = repair(&mesh, &labeling, &weights, 0);
    }
    let output = args.output.clone().unwrap_or_else(|| default_labeling_path(&args.input));
    labeling.write(&output).with_context(|| format!("writing {}", output.display()))?;
    let report = fitness_report(&mesh, &labeling, &weights);
    let report_path = args.report.clone().unwrap_or_else(|| output.with_extension("json"));
    write_json(&report_path, &report)?;
    if report.fitness.v_p > 0 {
        eprintln!("initial labeling is not pseudo-valid (v_p = {})", report.fitness.v_p);
    }
    Ok(exit_for(report.fitness.v_p))
}

fn default_labeling_path(input: &Path) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "mesh".into());
    PathBuf::from(format!("{stem}.labeling.txt"))
}

#[derive(Serialize)]
struct StageTime {
    stage: String,
    seconds: f64,
}

#[derive(Serialize)]
struct Attempt {
    ratio: f64,
    v_p: usize,
    total: f64,
    generations: u32,
}

impl Attempt {
    fn new(ratio: f64, r: &EvolutionResult) -> Self {
        Attempt { ratio, v_p: r.best.fitness.v_p, total: r.best.fitness.total, generations: r.generations_run }
    }
}

#[derive(Serialize)]
struct RunManifest {
    input: PathBuf,
    format: InputFormat,
    config: GaConfig,
    graphcut_ratio: f64,
    initial_labeling: Option<PathBuf>,
    retried: bool,
    retry_ratio: Option<f64>,
    attempts: Vec<Attempt>,
    out_dir: PathBuf,
    version: &'static str,
    stages: Vec<StageTime>,
}

#[derive(Serialize)]
struct OptimizeReport {
    #[serde(flatten)]
    metrics: FitnessReport,
    generations: u32,
    stalled: bool,
    retried: bool,
}

struct Timer {
    stages: Vec<StageTime>,
}

impl Timer {
    fn run<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.stages.push(StageTime { stage: stage.to_string(), seconds: start.elapsed().as_secs_f64() });
        out
    }
}

pub fn optimize(args: &OptimizeArgs) -> Result<ExitCode> {
    check_ratio(args.ratio)?;
    let mut timer = Timer { stages: Vec::new() };
    let (mesh, format) = timer.run("load", || load(&args.input))?;
    let cfg = GaConfig {
        population: args.population,
        crossovers: args.crossovers,
        generations: args.generations,
        stall_limit: args.stall_limit,
        archive_size: args.archive_size,
        weights: args.weights.weights(),
        seed: args.seed,
        threads: args.threads,
        graphcut_ratio: args.ratio,
    };
    cfg.validate()?;

    let init = match &args.labeling {
        Some(path) => load_labeling(path, &mesh)?,
        None => timer.run("init", || graphcut_initial_labeling(&mesh, args.ratio)),
    };
    let mut result: EvolutionResult = timer.run("evolve", || run_evolution(&mesh, &init, &cfg))?;
    let mut attempts = vec![Attempt::new(args.ratio, &result)];

    let mut retried = false;
    let mut retry_ratio = None;
    if result.best.fitness.v_p > 0 && args.labeling.is_none() {
        let ratio = args.ratio / 3.0;
        log::warn!("no pseudo-valid labeling found (v_p = {}); retrying with ratio {ratio}", result.best.fitness.v_p);
        eprintln!("retrying with graph-cut ratio {ratio}");
        retried = true;
        retry_ratio = Some(ratio);
        let init = timer.run("retry_init", || graphcut_initial_labeling(&mesh, ratio));
        let second = timer.run("retry_evolve", || run_evolution(&mesh, &init, &cfg))?;
        attempts.push(Attempt::new(ratio, &second));
        if second.best.fitness.total < result.best.fitness.total {
            result = second;
        }
    }

    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let labeling_path = args.out_dir.join("labeling.txt");
    result.best.labeling.write(&labeling_path).with_context(|| format!("writing {}", labeling_path.display()))?;

    let history_path = args.out_dir.join("history.csv");
    let mut writer = csv::Writer::from_path(&history_path).with_context(|| format!("writing {}", history_path.display()))?;
    for row in &result.history {
        writer.serialize(row)?;
    }
    writer.flush()?;

    let metrics = timer.run("report", || fitness_report(&mesh, &result.best.labeling, &cfg.weights));
    let v_p = metrics.fitness.v_p;
    let report = OptimizeReport { metrics, generations: result.generations_run, stalled: result.stalled, retried };
    write_json(&args.out_dir.join("report.json"), &report)?;

    let manifest = RunManifest {
        input: args.input.clone(),
        format,
        config: cfg,
        graphcut_ratio: args.ratio,
        initial_labeling: args.labeling.clone(),
        retried,
        retry_ratio,
        attempts,
        out_dir: args.out_dir.clone(),
        version: env!("CARGO_PKG_VERSION"),
        stages: timer.stages,
    };
    write_json(&args.out_dir.join("manifest.json"), &manifest)?;

    if v_p > 0 {
        eprintln!("no pseudo-valid labeling found: v_p = {v_p}");
    }
    Ok(exit_for(v_p))
}

pub fn evaluate(args: &EvaluateArgs) -> Result<ExitCode> {
    let (mesh, _) = load(&args.input)?;
    let mut labeling = load_labeling(&args.labeling, &mesh)?;
    let weights = args.weights.weights();
    if args.smooth {
        labeling = evaluate_smoothed(&mesh, &labeling, &weights).0;
    }
    let report = fitness_report(&mesh, &labeling, &weights);
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &args.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn export_viz(args: &ExportArgs) -> Result<ExitCode> {
    let (mesh, _) = load(&args.input)?;
    let labeling = load_labeling(&args.labeling, &mesh)?;
    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let ply = args.out_dir.join("labeling.ply");
    fs::write(&ply, export::colored_ply(&mesh, &labeling)).with_context(|| format!("writing {}", ply.display()))?;
    let obj = args.out_dir.join("polycube.obj");
    fs::write(&obj, export::polycube_obj(&mesh, &labeling)).with_context(|| format!("writing {}", obj.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn wanted(kind: KindArg) -> Option<MutationKind> {
    match kind {
        KindArg::Random => None,
        KindArg::DirectionalPath => Some(MutationKind::DirectionalPath),
        KindArg::ChartRemoval => Some(MutationKind::ChartRemoval),
        KindArg::ChartPropagation => Some(MutationKind::ChartPropagation),
    }
}

pub fn mutate(args: &MutateArgs) -> Result<ExitCode> {
    check_ratio(args.ratio)?;
    let (mesh, _) = load(&args.input)?;
    let labeling = load_labeling(&args.labeling, &mesh)?;
    let g = extract_charts(&mesh, &labeling);
    let tps = detect_turning_points(&mesh, &g);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let target = wanted(args.kind);
    // redraw until the requested kind comes up
    let spec = (0..1000)
        .filter_map(|_| sample_mutation(&mesh, &g, &tps, &mut rng))
        .find(|s| target.is_none_or(|k| s.kind() == k));
    let Some(spec) = spec else {
        bail!("no applicable mutation of the requested kind for this labeling");
    };
    let out = apply_mutation(&mesh, &labeling, &g, &tps, &spec, args.ratio, args.generation)?;
    out.write(&args.output).with_context(|| format!("writing {}", args.output.display()))?;
    println!("{}", serde_json::to_string(&spec)?);
    Ok(ExitCode::SUCCESS)
}
