use std::time::Instant;

use ksrd::attacks::generate_attacks_with_radius;
use ksrd::vns::vns_solve_with_attacks;
use ksrd::{
    brute_force_optimum, exact_non_defended, greedy, AttackSets, FeasibilityMode, Graph,
    OracleBudget, Solution, SolverConfig,
};

use crate::args::SolveArgs;
use crate::record::{Algorithm, RunRecord};
use crate::verify::{quasi_check, QuasiParams};

/// Undefended attacks of `s`, counted the same way `verify` does for the
/// given mode.
pub fn final_non_defended(
    g: &Graph,
    s: &Solution,
    cfg: &SolverConfig,
    sets: &AttackSets,
) -> anyhow::Result<(FeasibilityMode, u64)> {
    let mode = FeasibilityMode::of(sets);
    let count = match mode {
        FeasibilityMode::Exact => exact_non_defended(g, s, cfg.k, &OracleBudget::default())?.0,
        FeasibilityMode::Quasi => {
            let params = QuasiParams {
                seed: cfg.seed,
                cutoff: cfg.cutoff,
                tries: cfg.tries,
                attack_bound: cfg.comb_take_all_bound,
                ball_radius: cfg.ball_radius,
            };
            quasi_check(g, s, &sets.intense, &params).0
        }
    };
    Ok((mode, count))
}

pub fn attack_sets(g: &Graph, cfg: &SolverConfig) -> anyhow::Result<AttackSets> {
    if cfg.k > g.n() {
        return Err(ksrd::Error::KExceedsN { k: cfg.k, n: g.n() }.into());
    }
    Ok(generate_attacks_with_radius(
        g,
        cfg.k,
        cfg.comb_take_all_bound,
        cfg.ball_radius,
    )?)
}

/// One run of `algo` with precomputed attack sets.
pub fn run_once(
    g: &Graph,
    instance: &str,
    algo: Algorithm,
    cfg: &SolverConfig,
    sets: &AttackSets,
    verbose: bool,
) -> anyhow::Result<RunRecord> {
    cfg.validate()?;
    let started = Instant::now();
    let (best, iterations, time_to_best) = match algo {
        Algorithm::Greedy => {
            let s = greedy(g, cfg.k);
            (s, 0, started.elapsed().as_secs_f64())
        }
        Algorithm::Exact => {
            let (_, s) = brute_force_optimum(g, cfg.k, g.n() as u64, &OracleBudget::default())?;
            (s, 0, started.elapsed().as_secs_f64())
        }
        Algorithm::Vns => {
            let report = vns_solve_with_attacks(g, cfg, sets, |p| {
                if verbose {
                    eprintln!(
                        "[{instance} seed {}] iter {} weight {} undefended {} at {:.3}s",
                        cfg.seed, p.iteration, p.fitness.weight, p.fitness.infeasibility, p.elapsed
                    );
                }
            })?;
            (report.best, report.iterations, report.time_to_best)
        }
    };
    let total_time = started.elapsed().as_secs_f64();
    let (mode, non_defended) = final_non_defended(g, &best, cfg, sets)?;
    Ok(RunRecord {
        instance: instance.to_string(),
        n: g.n(),
        k: cfg.k,
        algorithm: algo,
        objective: best.weight(),
        labels: best.labels().to_vec(),
        mode,
        non_defended,
        time_to_best,
        total_time,
        iterations,
        seed: cfg.seed,
        config: cfg.clone(),
    })
}

/// `runs` consecutive runs with seeds `seed, seed + 1, ...`, reported through
/// `emit` as they finish.
pub fn solve_runs(
    g: &Graph,
    instance: &str,
    args: &SolveArgs,
    mut emit: impl FnMut(&RunRecord),
) -> anyhow::Result<Vec<RunRecord>> {
    let t_max = args
        .time_limit
        .unwrap_or_else(|| crate::default_time_limit(g.n()));
    let base = args.search.config(args.k, args.seed, t_max, args.max_iters);
    base.validate()?;
    let sets = attack_sets(g, &base)?;
    let mut records = Vec::with_capacity(args.runs);
    for i in 0..args.runs {
        let cfg = SolverConfig {
            seed: args.seed.wrapping_add(i as u64),
            ..base.clone()
        };
        let record = run_once(g, instance, args.algo, &cfg, &sets, args.verbose)?;
        emit(&record);
        records.push(record);
    }
    Ok(records)
}

pub fn run(args: &SolveArgs) -> anyhow::Result<()> {
    let g = crate::load_instance(&args.instance)?;
    let name = crate::instance_name(&args.instance);
    let records = solve_runs(&g, &name, args, |r| println!("{}", r.to_json_line()))?;
    if args.summary {
        if let Some(summary) = crate::Summary::from_records(&records) {
            println!("{}", serde_json::to_string(&summary)?);
        }
    }
    Ok(())
}
