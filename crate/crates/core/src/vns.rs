//! Variable neighborhood search.
//!
//! The incumbent starts from [`greedy`] and is only ever replaced by a
//! solution with no undefended intense attack. Each neighborhood step shakes
//! the incumbent (`r` increments, `r + 1` decrements), repairs it with a
//! swap-based local search judged on the lightweight attacks, and then
//! compares the local-search fitness against the incumbent fitness. The two
//! fitness values are measured on different attack sets; this asymmetry is
//! intentional and matches the acceptance rule of the method.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attacks::{generate_attacks_with_radius, DEFAULT_BALL_RADIUS, DEFAULT_TAKE_ALL_BOUND};
use crate::defense::{first_non_defended, quasi_infeasibility, DefenseScratch, Lenders};
use crate::rng::{run_rng, VerifyStream};
use crate::{
    greedy, label_cap, Attack, AttackSets, CoverageInfo, Error, Graph, Node, Result, Solution,
};

/// Lexicographic `(undefended attacks, weight)`; smaller is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fitness {
    pub infeasibility: usize,
    pub weight: u64,
}

impl Fitness {
    pub fn new(infeasibility: usize, weight: u64) -> Self {
        Fitness {
            infeasibility,
            weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub k: usize,
    pub r_min: usize,
    pub r_max: usize,
    /// Equal-fitness candidates are verified when `move_prob < u`, `u ~ U(0, 1)`.
    pub move_prob: f64,
    pub cutoff: u64,
    pub tries: u32,
    pub comb_take_all_bound: u64,
    pub ball_radius: usize,
    /// Wall-clock limit in seconds.
    pub t_max: f64,
    pub iter_max: u64,
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(k: usize) -> Self {
        SolverConfig {
            k,
            r_min: 1,
            r_max: 10,
            move_prob: 0.5,
            cutoff: 100,
            tries: 10,
            comb_take_all_bound: DEFAULT_TAKE_ALL_BOUND,
            ball_radius: DEFAULT_BALL_RADIUS,
            t_max: 300.0,
            iter_max: 5000,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.k == 0 {
            return Err(Error::ZeroK);
        }
        if self.r_min == 0 || self.r_min > self.r_max {
            return bad("need 1 <= r_min <= r_max");
        }
        if !(0.0..=1.0).contains(&self.move_prob) {
            return bad("move_prob must lie in [0, 1]");
        }
        if self.cutoff == 0 {
            return bad("cutoff must be at least 1");
        }
        if self.tries == 0 {
            return bad("tries must be at least 1");
        }
        if self.t_max.is_nan() || self.t_max < 0.0 {
            return bad("time limit must be non-negative");
        }
        Ok(())
    }
}

/// Whether feasibility was judged on every attack or on a sampled subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeasibilityMode {
    Exact,
    Quasi,
}

impl FeasibilityMode {
    pub fn of(sets: &AttackSets) -> Self {
        if sets.exhaustive {
            FeasibilityMode::Exact
        } else {
            FeasibilityMode::Quasi
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub best: Solution,
    pub fitness: Fitness,
    pub greedy_weight: u64,
    pub iterations: u64,
    pub time_to_best: f64,
    pub total_time: f64,
    pub mode: FeasibilityMode,
    pub seed: u64,
}

/// Snapshot passed to the progress sink whenever the incumbent improves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub iteration: u64,
    pub fitness: Fitness,
    pub elapsed: f64,
}

/// Result of [`shake`], with the number of moves actually applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shaken {
    pub solution: Solution,
    pub increments: usize,
    pub decrements: usize,
}

/// `r` increments on uniformly chosen nodes below `cap`, then `r + 1`
/// decrements chosen by roulette over the labels (weight = label value).
/// Steps with no eligible node are skipped.
pub fn shake<R: Rng + ?Sized>(s: &Solution, r: usize, cap: u32, rng: &mut R) -> Shaken {
    let mut out = s.clone();
    let mut increments = 0;
    let mut eligible = Vec::with_capacity(out.len());
    for _ in 0..r {
        eligible.clear();
        eligible.extend((0..out.len()).filter(|&v| out.get(v) < cap));
        let Some(&v) = eligible.choose(rng) else {
            break;
        };
        out.set(v, out.get(v) + 1);
        increments += 1;
    }
    let mut decrements = 0;
    for _ in 0..=r {
        let total = out.weight();
        if total == 0 {
            break;
        }
        let mut ticket = rng.gen_range(0..total);
        let v = (0..out.len())
            .find(|&v| {
                let w = u64::from(out.get(v));
                if ticket < w {
                    true
                } else {
                    ticket -= w;
                    false
                }
            })
            .expect("ticket below total weight");
        out.set(v, out.get(v) - 1);
        decrements += 1;
    }
    Shaken {
        solution: out,
        increments,
        decrements,
    }
}

/// All `(x, y)` with `x + y == a + b` and both within `0..=cap`, except
/// `(a, b)` itself, by increasing `x`.
pub fn two_decompositions(a: u32, b: u32, cap: u32) -> Vec<(u32, u32)> {
    let sum = a + b;
    let lo = sum.saturating_sub(cap);
    let hi = sum.min(cap);
    (lo..=hi)
        .filter(|&x| x != a)
        .map(|x| (x, sum - x))
        .collect()
}

/// Counts undefended attacks for `s_new`, which differs from `s` only at the
/// nodes in `changed`, re-verifying only attacks that may have changed state:
/// those undefended before and those whose recorded defense relied on more
/// armies than a lowered node still has. The remaining attacks keep a valid
/// recorded defense.
#[allow(clippy::too_many_arguments)]
pub fn incremental_recheck(
    g: &Graph,
    prev: &CoverageInfo,
    s: &Solution,
    s_new: &Solution,
    changed: (Node, Node),
    attacks: &[Attack],
    cutoff: u64,
    tries: u32,
    stream: &VerifyStream,
    epoch: u64,
) -> usize {
    Rechecker::new(attacks.len())
        .count_below(
            g,
            prev,
            s,
            s_new,
            changed,
            attacks,
            cutoff,
            tries,
            stream,
            epoch,
            &Lenders::new(g, s),
            None,
            usize::MAX,
        )
        .expect("no count reaches usize::MAX")
}

/// Reusable state for [`incremental_recheck`].
struct Rechecker {
    marks: Vec<u32>,
    stamp: u32,
    scratch: DefenseScratch,
}

impl Rechecker {
    fn new(attack_count: usize) -> Self {
        Rechecker {
            marks: vec![0; attack_count],
            stamp: 0,
            scratch: DefenseScratch::default(),
        }
    }

    /// New undefended count, or `None` as soon as it is known to be at least
    /// `below`. Of the previously undefended attacks only `fixable` is
    /// re-verified (all of them when `None`); the rest are counted as still
    /// undefended. They are checked first so that a move fixing none of them
    /// is rejected without touching the defended ones.
    #[allow(clippy::too_many_arguments)]
    fn count_below(
        &mut self,
        g: &Graph,
        prev: &CoverageInfo,
        s: &Solution,
        s_new: &Solution,
        (i, j): (Node, Node),
        attacks: &[Attack],
        cutoff: u64,
        tries: u32,
        stream: &VerifyStream,
        epoch: u64,
        lenders: &Lenders,
        fixable: Option<&[u32]>,
        below: usize,
    ) -> Option<usize> {
        let patch: &[Node] = if i == j { &[i][..] } else { &[i, j][..] };
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.marks.fill(0);
            self.stamp = 1;
        }
        let fixable = fixable.unwrap_or(&prev.non_defended);
        let mut failures = prev.non_defended.len() - fixable.len();
        if failures >= below {
            return None;
        }
        for &idx in fixable {
            let rng = || stream.attack_rng(epoch, idx as usize);
            if !self.scratch.check_with(
                g,
                s_new,
                lenders,
                patch,
                attacks[idx as usize].nodes(),
                cutoff,
                tries,
                rng,
            ) {
                failures += 1;
            }
        }
        if failures >= below {
            return None;
        }
        // by_node only lists defended attacks, so these never overlap `fixable`
        for v in [i, j] {
            if (v == j && i == j) || s_new.get(v) >= s.get(v) {
                continue;
            }
            let label = s_new.get(v);
            for (&idx, &need) in prev.by_node[v].iter().zip(&prev.required[v]) {
                if need <= label {
                    continue;
                }
                let slot = &mut self.marks[idx as usize];
                if *slot == self.stamp {
                    continue;
                }
                *slot = self.stamp;
                let rng = || stream.attack_rng(epoch, idx as usize);
                if !self.scratch.check_with(
                    g,
                    s_new,
                    lenders,
                    patch,
                    attacks[idx as usize].nodes(),
                    cutoff,
                    tries,
                    rng,
                ) {
                    failures += 1;
                    if failures >= below {
                        return None;
                    }
                }
            }
        }
        Some(failures)
    }
}

/// Verification context shared by local search and the acceptance step.
struct Verifier<'a> {
    g: &'a Graph,
    cutoff: u64,
    tries: u32,
    stream: VerifyStream,
    epoch: u64,
}

impl Verifier<'_> {
    fn next_epoch(&mut self) -> u64 {
        self.epoch += 1;
        self.epoch
    }

    fn full(&mut self, s: &Solution, attacks: &[Attack]) -> (usize, CoverageInfo) {
        let epoch = self.next_epoch();
        quasi_infeasibility(
            self.g,
            s,
            attacks,
            self.cutoff,
            self.tries,
            &self.stream,
            epoch,
        )
    }

    fn all_defended(&mut self, s: &Solution, attacks: &[Attack]) -> bool {
        let epoch = self.next_epoch();
        first_non_defended(
            self.g,
            s,
            attacks,
            self.cutoff,
            self.tries,
            &self.stream,
            epoch,
        )
        .is_none()
    }
}

const LS_TIME_CHECK_EVERY: u64 = 1000;

/// First-improvement swap local search on the lightweight attacks.
struct LocalSearch<'a> {
    attacks: &'a [Attack],
    cap: u32,
    rechecker: Rechecker,
    pairs: Vec<(Node, Node)>,
    /// Undefended attacks that raising a node's label could fix: those
    /// containing the node or one of its neighbors labeled 0.
    touching: Vec<Vec<u32>>,
    /// Undefended attacks containing the node.
    as_member: Vec<Vec<u32>>,
    evaluations: u64,
}

impl<'a> LocalSearch<'a> {
    fn new(g: &Graph, attacks: &'a [Attack], cap: u32) -> Self {
        let n = g.n();
        let pairs = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        LocalSearch {
            attacks,
            cap,
            rechecker: Rechecker::new(attacks.len()),
            pairs,
            touching: vec![Vec::new(); n],
            as_member: vec![Vec::new(); n],
            evaluations: 0,
        }
    }

    fn index_fixable(&mut self, g: &Graph, s: &Solution, info: &CoverageInfo) {
        for list in self.touching.iter_mut().chain(&mut self.as_member) {
            list.clear();
        }
        let touching = &mut self.touching;
        let mut add = |v: Node, idx: u32| {
            if touching[v].last() != Some(&idx) {
                touching[v].push(idx);
            }
        };
        for &idx in &info.non_defended {
            for &v in self.attacks[idx as usize].nodes() {
                self.as_member[v].push(idx);
                add(v, idx);
                if s.get(v) == 0 {
                    for &u in g.neighbors(v) {
                        add(u, idx);
                    }
                }
            }
        }
    }

    fn run<R: Rng + ?Sized>(
        &mut self,
        verifier: &mut Verifier<'_>,
        start: Solution,
        rng: &mut R,
        deadline: Option<Instant>,
    ) -> (Solution, Fitness) {
        let mut current = start;
        loop {
            let (count, info) = verifier.full(&current, self.attacks);
            if count == 0 {
                let weight = current.weight();
                return (current, Fitness::new(0, weight));
            }
            self.index_fixable(verifier.g, &current, &info);
            let lenders = Lenders::new(verifier.g, &current);
            self.pairs.shuffle(rng);
            let mut improved = false;
            let mut candidate = current.clone();
            'scan: for idx in 0..self.pairs.len() {
                let (i, j) = self.pairs[idx];
                let (a, b) = (current.get(i), current.get(j));
                for (x, y) in two_decompositions(a, b, self.cap) {
                    let (raised, label) = if x > a { (i, x) } else { (j, y) };
                    // A node labeled 1 cannot lend, so it only helps attacks it belongs to.
                    let fixable = if label >= 2 {
                        &self.touching[raised]
                    } else {
                        &self.as_member[raised]
                    };
                    if fixable.is_empty() {
                        continue;
                    }
                    candidate.set(i, x);
                    candidate.set(j, y);
                    let epoch = verifier.next_epoch();
                    let c = self.rechecker.count_below(
                        verifier.g,
                        &info,
                        &current,
                        &candidate,
                        (i, j),
                        self.attacks,
                        verifier.cutoff,
                        verifier.tries,
                        &verifier.stream,
                        epoch,
                        &lenders,
                        Some(fixable),
                        count,
                    );
                    if let Some(c) = c {
                        current = candidate;
                        if c == 0 {
                            let weight = current.weight();
                            return (current, Fitness::new(0, weight));
                        }
                        improved = true;
                        break 'scan;
                    }
                    candidate.set(i, a);
                    candidate.set(j, b);
                    self.evaluations += 1;
                    if self.evaluations % LS_TIME_CHECK_EVERY == 0
                        && deadline.is_some_and(|d| Instant::now() >= d)
                    {
                        let weight = current.weight();
                        return (current, Fitness::new(count, weight));
                    }
                }
            }
            if !improved {
                let weight = current.weight();
                return (current, Fitness::new(count, weight));
            }
        }
    }
}

/// Generates the attack sets for `cfg` and runs [`vns_solve_with_attacks`].
pub fn vns_solve(
    g: &Graph,
    cfg: &SolverConfig,
    progress: impl FnMut(&Progress),
) -> Result<RunReport> {
    cfg.validate()?;
    if cfg.k > g.n() {
        return Err(Error::KExceedsN { k: cfg.k, n: g.n() });
    }
    let sets = generate_attacks_with_radius(g, cfg.k, cfg.comb_take_all_bound, cfg.ball_radius)?;
    vns_solve_with_attacks(g, cfg, &sets, progress)
}

/// Runs the search with precomputed attack sets, which may be shared between
/// concurrent runs on the same graph.
pub fn vns_solve_with_attacks(
    g: &Graph,
    cfg: &SolverConfig,
    sets: &AttackSets,
    mut progress: impl FnMut(&Progress),
) -> Result<RunReport> {
    cfg.validate()?;
    if cfg.k > g.n() {
        return Err(Error::KExceedsN { k: cfg.k, n: g.n() });
    }
    let started = Instant::now();
    let deadline = if cfg.t_max.is_finite() {
        started.checked_add(Duration::from_secs_f64(cfg.t_max))
    } else {
        None
    };
    let out_of_time = || deadline.is_some_and(|d| Instant::now() >= d);

    let cap = label_cap(g, cfg.k);
    let mut rng = run_rng(cfg.seed);
    let mut verifier = Verifier {
        g,
        cutoff: cfg.cutoff,
        tries: cfg.tries,
        stream: VerifyStream::new(cfg.seed),
        epoch: 0,
    };
    let mut ls = LocalSearch::new(g, &sets.lightweight, cap);

    let mut best = greedy(g, cfg.k);
    let greedy_weight = best.weight();
    let (infeasibility, _) = verifier.full(&best, &sets.intense);
    let mut best_fitness = Fitness::new(infeasibility, best.weight());
    let mut time_to_best = started.elapsed().as_secs_f64();
    let mut iterations = 0u64;

    'outer: while !out_of_time() && iterations < cfg.iter_max {
        for r in cfg.r_min..=cfg.r_max {
            if iterations >= cfg.iter_max || out_of_time() {
                break 'outer;
            }
            iterations += 1;
            let shaken = shake(&best, r, cap, &mut rng);
            let (candidate, fitness) = ls.run(&mut verifier, shaken.solution, &mut rng, deadline);
            let worth_verifying = fitness < best_fitness
                || (fitness == best_fitness && cfg.move_prob < rng.gen::<f64>());
            if worth_verifying && verifier.all_defended(&candidate, &sets.intense) {
                let new_fitness = Fitness::new(0, candidate.weight());
                if new_fitness < best_fitness {
                    time_to_best = started.elapsed().as_secs_f64();
                    progress(&Progress {
                        iteration: iterations,
                        fitness: new_fitness,
                        elapsed: time_to_best,
                    });
                }
                best = candidate;
                best_fitness = new_fitness;
                break;
            }
        }
    }

    Ok(RunReport {
        best,
        fitness: best_fitness,
        greedy_weight,
        iterations,
        time_to_best,
        total_time: started.elapsed().as_secs_f64(),
        mode: FeasibilityMode::of(sets),
        seed: cfg.seed,
    })
}
