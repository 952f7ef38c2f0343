//! Evolutionary search over labelings: an elite archive, rank-based
//! selection, mutation, recombination and early stopping.

mod archive;

pub use archive::{crossover, label_digest, select_rank, Archive, Individual};

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charts::extract_charts;
use crate::error::{Error, Result};
use crate::fitness::{evaluate_smoothed, FitnessValue, FitnessWeights};
use crate::graphcut::DEFAULT_RATIO;
use crate::label::Labeling;
use crate::mesh::SurfaceMesh;
use crate::mutations::{random_mutation, repair};
use crate::turning::detect_turning_points;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    /// Individuals selected and mutated per generation.
    pub population: usize,
    /// Crossover children per generation.
    pub crossovers: usize,
    pub generations: u32,
    /// Consecutive generations without a new best before stopping.
    pub stall_limit: u32,
    pub archive_size: usize,
    pub weights: FitnessWeights,
    pub seed: u64,
    /// Worker threads; 0 lets the pool pick.
    pub threads: usize,
    /// Unary/binary ratio used when chart removal re-solves a region.
    pub graphcut_ratio: f64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 100,
            crossovers: 10,
            generations: 40,
            stall_limit: 3,
            archive_size: 100,
            weights: FitnessWeights::default(),
            seed: 0,
            threads: 0,
            graphcut_ratio: DEFAULT_RATIO,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 || self.generations == 0 || self.archive_size == 0 {
            return Err(Error::Parse("population, generations and archive size must be positive".into()));
        }
        Ok(())
    }
}

/// One line of the per-generation log.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub generation: u32,
    pub best_total: f64,
    pub v_p: usize,
    pub e_w: f64,
    pub e_f: f64,
    pub e_c: usize,
    pub archive_size: usize,
}

impl HistoryRow {
    fn new(generation: u32, archive: &Archive) -> Self {
        let best = archive.best().expect("archive is seeded").fitness;
        HistoryRow {
            generation,
            best_total: best.total,
            v_p: best.v_p,
            e_w: best.e_w,
            e_f: best.e_f,
            e_c: best.e_c,
            archive_size: archive.len(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenerationStats {
    pub evaluations: usize,
    pub inserted: usize,
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    /// Best individual after the final repairs.
    pub best: Individual,
    pub archive: Archive,
    /// Row 0 describes the seeded archive.
    pub history: Vec<HistoryRow>,
    pub generations_run: u32,
    pub stalled: bool,
    pub seconds: f64,
}

/// Generator for one (generation, slot) pair. Slot 0 drives selection and
/// crossover; slot `k >= 1` drives the `k`-th mutation.
pub fn stream_rng(seed: u64, generation: u32, slot: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((generation as u64) << 32) | slot as u64);
    rng
}

fn evaluate(mesh: &SurfaceMesh, l: &Labeling, w: &FitnessWeights) -> (Labeling, FitnessValue) {
    evaluate_smoothed(mesh, l, w)
}

/// Selection, mutation, crossover and archive insertion for one
/// generation. Mutations and their evaluations run in parallel on the
/// current rayon pool; results are gathered by slot so the outcome does
/// not depend on scheduling.
pub fn run_generation(archive: &mut Archive, cfg: &GaConfig, generation: u32, mesh: &SurfaceMesh) -> GenerationStats {
    assert!(!archive.is_empty(), "run_generation needs a seeded archive");
    let mut rng = stream_rng(cfg.seed, generation, 0);
    let parents: Vec<usize> =
        (0..cfg.population).map(|_| select_rank(archive.len(), &mut rng).expect("non-empty")).collect();
    let lineage_base = generation as u64 * (cfg.population + cfg.crossovers + 1) as u64;

    let mutants: Vec<Individual> = parents
        .par_iter()
        .enumerate()
        .map(|(slot, &rank)| {
            let parent = archive.get(rank);
            let mut mrng = stream_rng(cfg.seed, generation, slot as u32 + 1);
            let g = extract_charts(mesh, &parent.labeling);
            let tps = detect_turning_points(mesh, &g);
            let (child, _) =
                random_mutation(mesh, &parent.labeling, &g, &tps, &mut mrng, cfg.graphcut_ratio, generation);
            let (labeling, fitness) = evaluate(mesh, &child, &cfg.weights);
            Individual { labeling, fitness, birth: generation, lineage: lineage_base + slot as u64 }
        })
        .collect();

    let mut pool: Vec<&Individual> = mutants.iter().chain(archive.iter()).collect();
    pool.sort_by(|a, b| a.fitness.total.total_cmp(&b.fitness.total));
    let mut children = Vec::with_capacity(cfg.crossovers);
    for k in 0..cfg.crossovers {
        let i = select_rank(pool.len(), &mut rng).expect("non-empty");
        let mut j = i;
        if pool.len() > 1 {
            while j == i {
                j = select_rank(pool.len(), &mut rng).expect("non-empty");
            }
        }
        let child = crossover(&pool[i].labeling, &pool[j].labeling);
        let (labeling, fitness) = evaluate(mesh, &child, &cfg.weights);
        children.push(Individual {
            labeling,
            fitness,
            birth: generation,
            lineage: lineage_base + (cfg.population + k) as u64,
        });
    }

    let evaluations = mutants.len() + children.len();
    let inserted = mutants.into_iter().chain(children).filter(|ind| archive.insert(ind.clone())).count();
    GenerationStats { evaluations, inserted }
}

fn thread_pool(threads: usize) -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if threads > 0 {
        builder = builder.num_threads(threads);
    }
    builder.build().expect("thread pool")
}

/// Repairs and evaluates `init`, evolves it for up to `cfg.generations`
/// generations (stopping after `cfg.stall_limit` generations without a new
/// best), then repairs the best individual again.
pub fn run_evolution(mesh: &SurfaceMesh, init: &Labeling, cfg: &GaConfig) -> Result<EvolutionResult> {
    init.check_mesh(mesh)?;
    cfg.validate()?;
    let started = Instant::now();
    thread_pool(cfg.threads).install(|| {
        let repaired = repair(mesh, init, &cfg.weights, 0);
        let (labeling, fitness) = evaluate(mesh, &repaired, &cfg.weights);
        let mut archive = Archive::new(cfg.archive_size);
        archive.insert(Individual { labeling, fitness, birth: 0, lineage: 0 });
        let mut history = vec![HistoryRow::new(0, &archive)];

        let mut best_digest = label_digest(&archive.best().expect("seeded").labeling);
        let mut stall = 0;
        let mut generations_run = 0;
        let mut stalled = false;
        for generation in 1..=cfg.generations {
            run_generation(&mut archive, cfg, generation, mesh);
            generations_run = generation;
            history.push(HistoryRow::new(generation, &archive));
            let digest = label_digest(&archive.best().expect("seeded").labeling);
            if digest == best_digest {
                stall += 1;
            } else {
                stall = 0;
                best_digest = digest;
            }
            log::info!(
                "generation {generation}: best {:.6} (v_p {}), archive {}",
                archive.best().expect("seeded").fitness.total,
                archive.best().expect("seeded").fitness.v_p,
                archive.len()
            );
            if stall >= cfg.stall_limit {
                stalled = true;
                break;
            }
        }

        let best = archive.best().expect("seeded").clone();
        let final_generation = generations_run + 1;
        let repaired = repair(mesh, &best.labeling, &cfg.weights, final_generation);
        let best = if repaired.same_labels(&best.labeling) {
            best
        } else {
            let (labeling, fitness) = evaluate(mesh, &repaired, &cfg.weights);
            Individual { labeling, fitness, birth: final_generation, lineage: best.lineage }
        };
        Ok(EvolutionResult {
            best,
            archive,
            history,
            generations_run,
            stalled,
            seconds: started.elapsed().as_secs_f64(),
        })
    })
}
