use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use ksrd::{AttackSets, Graph, SolverConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::SearchArgs;
use crate::record::{Algorithm, RunRecord, Summary};
use crate::solve::{attack_sets, run_once};

pub const CSV_HEADER: [&str; 9] = [
    "instance",
    "n",
    "k",
    "algo",
    "mean_obj",
    "sigma_pct",
    "mean_t_best",
    "runs",
    "seed_base",
];

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ManifestRow {
    pub instance: PathBuf,
    pub k: usize,
    pub runs: usize,
    pub time_limit: f64,
    #[serde(default)]
    pub algo: Option<Algorithm>,
    #[serde(default)]
    pub max_iters: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub algo: Algorithm,
    pub mean_obj: f64,
    pub sigma_pct: f64,
    pub mean_t_best: f64,
    pub runs: usize,
    pub seed_base: u64,
}

/// Reads a manifest; relative instance paths are resolved against the
/// manifest's directory.
pub fn read_manifest(path: &Path) -> anyhow::Result<Vec<ManifestRow>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read manifest {}", path.display()))?;
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, row) in reader.deserialize::<ManifestRow>().enumerate() {
        let mut row = row.with_context(|| format!("manifest row {}", i + 1))?;
        if row.instance.is_relative() {
            row.instance = base.join(&row.instance);
        }
        if row.runs == 0 {
            bail!("manifest row {}: runs must be positive", i + 1);
        }
        rows.push(row);
    }
    Ok(rows)
}

struct Prepared {
    name: String,
    graph: Graph,
    sets: AttackSets,
    algo: Algorithm,
    config: SolverConfig,
    runs: usize,
}

/// Runs every (row, seed) pair on a pool of `jobs` threads. Seeds are
/// `seed_base + i` for run `i` of a row, so results do not depend on `jobs`.
pub fn run_bench(
    rows: &[ManifestRow],
    jobs: usize,
    seed_base: u64,
    search: &SearchArgs,
) -> anyhow::Result<Vec<BenchRow>> {
    let mut prepared = Vec::with_capacity(rows.len());
    for row in rows {
        let graph = crate::load_instance(&row.instance)?;
        let config = search.config(
            row.k,
            seed_base,
            row.time_limit,
            row.max_iters.unwrap_or(SolverConfig::new(row.k).iter_max),
        );
        config.validate()?;
        let sets = attack_sets(&graph, &config)?;
        prepared.push(Prepared {
            name: crate::instance_name(&row.instance),
            graph,
            sets,
            algo: row.algo.unwrap_or(Algorithm::Vns),
            config,
            runs: row.runs,
        });
    }
    let tasks: Vec<(usize, u64)> = prepared
        .iter()
        .enumerate()
        .flat_map(|(r, p)| (0..p.runs as u64).map(move |i| (r, i)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    let records: Vec<RunRecord> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(r, i)| {
                let p = &prepared[r];
                let cfg = SolverConfig {
                    seed: seed_base.wrapping_add(i),
                    ..p.config.clone()
                };
                run_once(&p.graph, &p.name, p.algo, &cfg, &p.sets, false)
            })
            .collect::<anyhow::Result<Vec<_>>>()
    })?;

    let mut out = Vec::with_capacity(prepared.len());
    let mut offset = 0;
    for p in &prepared {
        let chunk = &records[offset..offset + p.runs];
        offset += p.runs;
        let summary = Summary::from_records(chunk).expect("runs is positive");
        out.push(BenchRow {
            instance: p.name.clone(),
            n: p.graph.n(),
            k: p.config.k,
            algo: p.algo,
            mean_obj: summary.mean_obj,
            sigma_pct: summary.sigma_pct,
            mean_t_best: summary.mean_t_best,
            runs: p.runs,
            seed_base,
        });
    }
    Ok(out)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> anyhow::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn run(args: &crate::args::BenchArgs) -> anyhow::Result<()> {
    let rows = read_manifest(&args.manifest)?;
    let results = run_bench(&rows, args.jobs, args.seed_base, &args.search)?;
    match &args.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            write_csv(&results, file)
        }
        None => write_csv(&results, std::io::stdout().lock()),
    }
}
