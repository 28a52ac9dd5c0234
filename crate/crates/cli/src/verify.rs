use std::path::Path;

use anyhow::{bail, Context};
use ksrd::attacks::generate_attacks_with_radius;
use ksrd::rng::VerifyStream;
use ksrd::{exact_non_defended, quasi_infeasibility, Attack, Graph, OracleBudget, Solution};
use serde::{Deserialize, Serialize};

use crate::args::{VerifyArgs, VerifyMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub instance: String,
    pub k: usize,
    pub mode: VerifyMode,
    pub weight: u64,
    pub feasible: bool,
    pub attacks_checked: u64,
    pub non_defended: u64,
    pub first_failing: Option<Vec<usize>>,
}

/// Parameters of the heuristic check in quasi mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiParams {
    pub seed: u64,
    pub cutoff: u64,
    pub tries: u32,
    pub attack_bound: u64,
    pub ball_radius: usize,
}

/// Reads labels given inline or as a path to a file. Separators may be commas,
/// whitespace or JSON brackets.
pub fn parse_labels(arg: &str) -> anyhow::Result<Vec<u32>> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("cannot read {arg}"))?
    } else {
        arg.to_string()
    };
    let labels = text
        .split(|c: char| c == ',' || c == '[' || c == ']' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .with_context(|| format!("invalid label {t:?}"))
        })
        .collect::<anyhow::Result<Vec<u32>>>()?;
    if labels.is_empty() {
        bail!("no labels given");
    }
    Ok(labels)
}

/// Heuristic count over the intense attack set, replaying the roulette
/// streams of `seed`. Returns the number of undefended attacks, the number
/// checked and the first failure.
pub fn quasi_check(
    g: &Graph,
    s: &Solution,
    attacks: &[Attack],
    params: &QuasiParams,
) -> (u64, Option<Attack>) {
    let stream = VerifyStream::new(params.seed);
    let (count, info) = quasi_infeasibility(g, s, attacks, params.cutoff, params.tries, &stream, 0);
    let first = info
        .non_defended
        .first()
        .map(|&i| attacks[i as usize].clone());
    (count as u64, first)
}

pub fn verify(
    g: &Graph,
    instance: &str,
    k: usize,
    labels: Vec<u32>,
    mode: VerifyMode,
    params: &QuasiParams,
) -> anyhow::Result<VerifyReport> {
    let s = Solution::for_graph(g, k, labels)?;
    let (attacks_checked, non_defended, first) = match mode {
        VerifyMode::Exact => {
            let (count, first) = exact_non_defended(g, &s, k, &OracleBudget::default())?;
            (ksrd::binomial(g.n(), k).unwrap_or(u64::MAX), count, first)
        }
        VerifyMode::Quasi => {
            let sets = generate_attacks_with_radius(g, k, params.attack_bound, params.ball_radius)?;
            let (count, first) = quasi_check(g, &s, &sets.intense, params);
            (sets.intense.len() as u64, count, first)
        }
    };
    Ok(VerifyReport {
        instance: instance.to_string(),
        k,
        mode,
        weight: s.weight(),
        feasible: non_defended == 0,
        attacks_checked,
        non_defended,
        first_failing: first.map(|a| a.nodes().to_vec()),
    })
}

pub fn run(args: &VerifyArgs) -> anyhow::Result<VerifyReport> {
    let g = crate::load_instance(&args.instance)?;
    let labels = parse_labels(&args.labels)?;
    let params = QuasiParams {
        seed: args.seed,
        cutoff: args.cutoff,
        tries: args.tries,
        attack_bound: args.attack_bound,
        ball_radius: args.ball_radius,
    };
    verify(
        &g,
        &crate::instance_name(&args.instance),
        args.k,
        labels,
        args.mode,
        &params,
    )
}
