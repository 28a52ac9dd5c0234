//! Attack defense.
//!
//! An attacked node with a positive label defends itself. Every attacked node
//! labeled 0 must be assigned its own neighbor `u` with `f(u) >= 2`, and `u`
//! may lend at most `f(u) - 1` armies in total. Attacked nodes with `f >= 2`
//! therefore both defend themselves and remain available as lenders.
//!
//! [`is_attack_defended`] is the heuristic check used by the search: it
//! enumerates all defender assignments when there are fewer than `cutoff` of
//! them and otherwise falls back to randomized roulette passes, which can
//! miss a defense but never invent one. [`defend_exact`] decides the same
//! question exactly through capacitated bipartite matching.

use rand::Rng;

use crate::rng::VerifyStream;
use crate::{Attack, Graph, Node, Solution};

/// Result of a defense attempt.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DefenseOutcome {
    pub defended: bool,
    /// Attacked nodes with a positive label.
    pub self_defenders: Vec<Node>,
    /// `(attacked node labeled 0, lending neighbor)` pairs.
    pub assignments: Vec<(Node, Node)>,
}

impl DefenseOutcome {
    fn undefended() -> Self {
        DefenseOutcome::default()
    }

    /// Distinct nodes taking part in the defense, self-defenders included.
    pub fn defending_nodes(&self) -> Vec<Node> {
        let mut out: Vec<Node> = self
            .self_defenders
            .iter()
            .copied()
            .chain(self.assignments.iter().map(|&(_, u)| u))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks a defended outcome against the defense rules and capacities.
    pub fn is_valid_for(&self, g: &Graph, s: &Solution, attack: &Attack) -> bool {
        if !self.defended {
            return false;
        }
        let mut expected_self: Vec<Node> = attack
            .nodes()
            .iter()
            .copied()
            .filter(|&v| s.get(v) > 0)
            .collect();
        let mut got_self = self.self_defenders.clone();
        expected_self.sort_unstable();
        got_self.sort_unstable();
        if expected_self != got_self {
            return false;
        }
        let mut zeros: Vec<Node> = attack
            .nodes()
            .iter()
            .copied()
            .filter(|&v| s.get(v) == 0)
            .collect();
        let mut covered: Vec<Node> = self.assignments.iter().map(|&(v, _)| v).collect();
        zeros.sort_unstable();
        covered.sort_unstable();
        if zeros != covered {
            return false;
        }
        let mut lent: Vec<(Node, u32)> = Vec::new();
        for &(v, u) in &self.assignments {
            if !g.has_edge(u, v) || s.get(u) < 2 {
                return false;
            }
            bump(&mut lent, u);
        }
        lent.iter().all(|&(u, c)| c < s.get(u))
    }
}

/// Uses recorded by each lender, for the tiny per-attack working sets.
fn uses(lent: &[(Node, u32)], u: Node) -> u32 {
    lent.iter().find(|&&(w, _)| w == u).map_or(0, |&(_, c)| c)
}

fn bump(lent: &mut Vec<(Node, u32)>, u: Node) {
    match lent.iter_mut().find(|(w, _)| *w == u) {
        Some((_, c)) => *c += 1,
        None => lent.push((u, 1)),
    }
}

/// Neighbors of `v` that can lend an army (label at least 2), sorted.
pub fn alternatives_for(g: &Graph, s: &Solution, v: Node) -> Vec<Node> {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&u| s.get(u) >= 2)
        .collect()
}

/// Lending neighbors (label at least 2) of every node under one solution,
/// sorted like the adjacency lists.
#[derive(Debug, Clone, Default)]
pub(crate) struct Lenders {
    lists: Vec<Vec<Node>>,
}

impl Lenders {
    pub(crate) fn new(g: &Graph, s: &Solution) -> Self {
        let lists = (0..g.n())
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| s.get(u) >= 2)
                    .collect()
            })
            .collect();
        Lenders { lists }
    }

    /// Appends the lenders of `v` under `s`, where `s` may differ from the
    /// table's solution at the nodes in `patch`.
    fn fill(&self, g: &Graph, s: &Solution, patch: &[Node], v: Node, out: &mut Vec<Node>) {
        let base = &self.lists[v];
        if patch.is_empty() {
            out.extend_from_slice(base);
            return;
        }
        let start = out.len();
        out.extend(
            base.iter()
                .copied()
                .filter(|u| !patch.contains(u) || s.get(*u) >= 2),
        );
        let mut inserted = false;
        for &c in patch {
            if s.get(c) >= 2 && !base.contains(&c) && g.has_edge(v, c) && !out[start..].contains(&c)
            {
                out.push(c);
                inserted = true;
            }
        }
        if inserted {
            out[start..].sort_unstable();
        }
    }
}

/// Reusable buffers for the per-attack check.
#[derive(Debug, Default)]
pub(crate) struct DefenseScratch {
    self_defenders: Vec<Node>,
    reduced: Vec<Node>,
    alt_flat: Vec<Node>,
    alt_ranges: Vec<(usize, usize)>,
    assign: Vec<Node>,
    lent: Vec<(Node, u32)>,
    odometer: Vec<usize>,
}

impl DefenseScratch {
    /// Heuristic check of one attack. On success the defenders are left in
    /// `self_defenders` and `assign` (aligned with `reduced`). The stream is
    /// only created when the roulette path is taken.
    pub(crate) fn check<R: Rng>(
        &mut self,
        g: &Graph,
        s: &Solution,
        attack: &[Node],
        cutoff: u64,
        tries: u32,
        rng: impl FnOnce() -> R,
    ) -> bool {
        self.check_by(s, attack, cutoff, tries, rng, |v, out| {
            out.extend(g.neighbors(v).iter().copied().filter(|&u| s.get(u) >= 2))
        })
    }

    /// [`Self::check`] reading alternatives from `lenders`, a table built for
    /// a solution that differs from `s` at most at the nodes in `patch`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn check_with<R: Rng>(
        &mut self,
        g: &Graph,
        s: &Solution,
        lenders: &Lenders,
        patch: &[Node],
        attack: &[Node],
        cutoff: u64,
        tries: u32,
        rng: impl FnOnce() -> R,
    ) -> bool {
        self.check_by(s, attack, cutoff, tries, rng, |v, out| {
            lenders.fill(g, s, patch, v, out)
        })
    }

    fn check_by<R: Rng>(
        &mut self,
        s: &Solution,
        attack: &[Node],
        cutoff: u64,
        tries: u32,
        rng: impl FnOnce() -> R,
        mut alternatives: impl FnMut(Node, &mut Vec<Node>),
    ) -> bool {
        self.self_defenders.clear();
        self.reduced.clear();
        self.alt_flat.clear();
        self.alt_ranges.clear();
        let mut product: u64 = 1;
        for &v in attack {
            if s.get(v) > 0 {
                self.self_defenders.push(v);
                continue;
            }
            let start = self.alt_flat.len();
            alternatives(v, &mut self.alt_flat);
            let count = self.alt_flat.len() - start;
            if count == 0 {
                return false;
            }
            self.reduced.push(v);
            self.alt_ranges.push((start, self.alt_flat.len()));
            product = product.saturating_mul(count as u64);
        }
        if product < cutoff {
            odometer_search(
                s,
                &self.alt_flat,
                &self.alt_ranges,
                &mut self.assign,
                &mut self.lent,
                &mut self.odometer,
            )
        } else {
            let mut rng = rng();
            roulette_search(
                s,
                &self.alt_flat,
                &self.alt_ranges,
                tries,
                &mut rng,
                &mut self.assign,
                &mut self.lent,
            )
        }
    }

    /// Nodes that took part in the last successful check, each with the
    /// smallest label that keeps this defense valid: one more than the armies
    /// it lent, or 1 for a node that only defended itself.
    pub(crate) fn defenders(&self, out: &mut Vec<(Node, u32)>) {
        out.clear();
        out.extend(self.lent.iter().map(|&(u, c)| (u, c + 1)));
        for &v in &self.self_defenders {
            if uses(&self.lent, v) == 0 {
                out.push((v, 1));
            }
        }
    }

    fn outcome(&self, defended: bool) -> DefenseOutcome {
        if !defended {
            return DefenseOutcome::undefended();
        }
        DefenseOutcome {
            defended,
            self_defenders: self.self_defenders.clone(),
            assignments: self
                .reduced
                .iter()
                .copied()
                .zip(self.assign.iter().copied())
                .collect(),
        }
    }
}

/// Walks the Cartesian product of alternatives in lexicographic order (first
/// attacked node most significant) without materializing it. A prefix that
/// already violates a capacity rules out every assignment extending it, so the
/// odometer advances at the failing position.
fn odometer_search(
    s: &Solution,
    alt_flat: &[Node],
    alt_ranges: &[(usize, usize)],
    assign: &mut Vec<Node>,
    lent: &mut Vec<(Node, u32)>,
    odometer: &mut Vec<usize>,
) -> bool {
    let m = alt_ranges.len();
    odometer.clear();
    odometer.resize(m, 0);
    loop {
        assign.clear();
        lent.clear();
        let mut failed_at = None;
        for (p, &(start, _)) in alt_ranges.iter().enumerate() {
            let u = alt_flat[start + odometer[p]];
            if uses(lent, u) + 1 < s.get(u) {
                bump(lent, u);
                assign.push(u);
            } else {
                failed_at = Some(p);
                break;
            }
        }
        let Some(mut q) = failed_at else {
            return true;
        };
        loop {
            odometer[q] += 1;
            let (start, end) = alt_ranges[q];
            if odometer[q] < end - start {
                odometer[q + 1..].fill(0);
                break;
            }
            if q == 0 {
                return false;
            }
            odometer[q] = 0;
            q -= 1;
        }
    }
}

fn roulette_search<R: Rng + ?Sized>(
    s: &Solution,
    alt_flat: &[Node],
    alt_ranges: &[(usize, usize)],
    tries: u32,
    rng: &mut R,
    assign: &mut Vec<Node>,
    lent: &mut Vec<(Node, u32)>,
) -> bool {
    'pass: for _ in 0..tries {
        assign.clear();
        lent.clear();
        for &(start, end) in alt_ranges {
            let alts = &alt_flat[start..end];
            let free = |u: Node| (s.get(u) - 1).saturating_sub(uses(lent, u));
            let total: u64 = alts.iter().map(|&u| u64::from(free(u))).sum();
            if total == 0 {
                continue 'pass;
            }
            let mut ticket = rng.gen_range(0..total);
            let mut chosen = None;
            for &u in alts {
                let w = u64::from(free(u));
                if ticket < w {
                    chosen = Some(u);
                    break;
                }
                ticket -= w;
            }
            let u = chosen.expect("ticket below total weight");
            bump(lent, u);
            assign.push(u);
        }
        return true;
    }
    false
}

/// Heuristic defense of a single attack: exhaustive enumeration of defender
/// assignments when there are fewer than `cutoff` of them, `tries` roulette
/// passes otherwise.
pub fn is_attack_defended<R: Rng>(
    g: &Graph,
    s: &Solution,
    attack: &Attack,
    cutoff: u64,
    tries: u32,
    rng: &mut R,
) -> DefenseOutcome {
    let mut scratch = DefenseScratch::default();
    let defended = scratch.check(g, s, attack.nodes(), cutoff, tries, || &mut *rng);
    scratch.outcome(defended)
}

/// Searches the product of `alternatives` (one list per node of `reduced`)
/// for a capacity-consistent assignment. Complete over that product.
pub fn deterministic_defense(
    s: &Solution,
    reduced: &[Node],
    alternatives: &[Vec<Node>],
    self_defenders: &[Node],
) -> DefenseOutcome {
    assert_eq!(reduced.len(), alternatives.len());
    if alternatives.iter().any(Vec::is_empty) {
        return DefenseOutcome::undefended();
    }
    let mut alt_flat = Vec::new();
    let mut alt_ranges = Vec::new();
    for alts in alternatives {
        let start = alt_flat.len();
        alt_flat.extend_from_slice(alts);
        alt_ranges.push((start, alt_flat.len()));
    }
    let (mut assign, mut lent, mut odometer) = (Vec::new(), Vec::new(), Vec::new());
    if odometer_search(
        s,
        &alt_flat,
        &alt_ranges,
        &mut assign,
        &mut lent,
        &mut odometer,
    ) {
        DefenseOutcome {
            defended: true,
            self_defenders: self_defenders.to_vec(),
            assignments: reduced.iter().copied().zip(assign).collect(),
        }
    } else {
        DefenseOutcome::undefended()
    }
}

/// Up to `tries` randomized passes; in each pass every node of `reduced`
/// draws a lender with probability proportional to the lender's armies still
/// free in that pass.
pub fn roulette_defense<R: Rng + ?Sized>(
    g: &Graph,
    s: &Solution,
    reduced: &[Node],
    self_defenders: &[Node],
    tries: u32,
    rng: &mut R,
) -> DefenseOutcome {
    let (mut alt_flat, mut alt_ranges) = (Vec::new(), Vec::new());
    for &v in reduced {
        let start = alt_flat.len();
        alt_flat.extend(g.neighbors(v).iter().copied().filter(|&u| s.get(u) >= 2));
        alt_ranges.push((start, alt_flat.len()));
    }
    let (mut assign, mut lent) = (Vec::new(), Vec::new());
    if roulette_search(
        s,
        &alt_flat,
        &alt_ranges,
        tries,
        rng,
        &mut assign,
        &mut lent,
    ) {
        DefenseOutcome {
            defended: true,
            self_defenders: self_defenders.to_vec(),
            assignments: reduced.iter().copied().zip(assign).collect(),
        }
    } else {
        DefenseOutcome::undefended()
    }
}

/// Exact defense decision by capacitated bipartite matching between attacked
/// 0-nodes and lending neighbors.
pub fn defend_exact(g: &Graph, s: &Solution, attack: &Attack) -> DefenseOutcome {
    defend_exact_nodes(g, s, attack.nodes())
}

pub(crate) fn defend_exact_nodes(g: &Graph, s: &Solution, attack: &[Node]) -> DefenseOutcome {
    let self_defenders: Vec<Node> = attack.iter().copied().filter(|&v| s.get(v) > 0).collect();
    let zeros: Vec<Node> = attack.iter().copied().filter(|&v| s.get(v) == 0).collect();

    // lender -> attacked zero-node positions it currently serves
    let mut served: Vec<(Node, Vec<usize>)> = Vec::new();
    let mut matched: Vec<Option<Node>> = vec![None; zeros.len()];

    fn augment(
        g: &Graph,
        s: &Solution,
        zeros: &[Node],
        p: usize,
        visited: &mut Vec<Node>,
        served: &mut Vec<(Node, Vec<usize>)>,
        matched: &mut [Option<Node>],
    ) -> bool {
        for &u in g.neighbors(zeros[p]) {
            if s.get(u) < 2 || visited.contains(&u) {
                continue;
            }
            visited.push(u);
            let slot = match served.iter().position(|(w, _)| *w == u) {
                Some(i) => i,
                None => {
                    served.push((u, Vec::new()));
                    served.len() - 1
                }
            };
            if (served[slot].1.len() as u32) < s.get(u) - 1 {
                served[slot].1.push(p);
                matched[p] = Some(u);
                return true;
            }
            for idx in 0..served[slot].1.len() {
                let other = served[slot].1[idx];
                if augment(g, s, zeros, other, visited, served, matched) {
                    let slot = served.iter().position(|(w, _)| *w == u).unwrap();
                    served[slot].1[idx] = p;
                    matched[p] = Some(u);
                    return true;
                }
            }
        }
        false
    }

    for p in 0..zeros.len() {
        let mut visited = Vec::new();
        if !augment(g, s, &zeros, p, &mut visited, &mut served, &mut matched) {
            return DefenseOutcome::undefended();
        }
    }
    DefenseOutcome {
        defended: true,
        self_defenders,
        assignments: zeros
            .iter()
            .copied()
            .zip(matched.into_iter().map(Option::unwrap))
            .collect(),
    }
}

/// Attack indices each node helped defend in the last verification, plus the
/// indices of attacks that were not defended.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverageInfo {
    pub by_node: Vec<Vec<u32>>,
    /// Aligned with `by_node`: the smallest label of the node under which the
    /// recorded defense of that attack is still valid.
    pub required: Vec<Vec<u32>>,
    pub non_defended: Vec<u32>,
}

impl CoverageInfo {
    pub fn non_defended_count(&self) -> usize {
        self.non_defended.len()
    }
}

/// Runs the heuristic defense on every attack and records which nodes
/// defended which attacks. Attack `i` draws its roulette stream from
/// `stream.attack_rng(epoch, i)`.
pub fn quasi_infeasibility(
    g: &Graph,
    s: &Solution,
    attacks: &[Attack],
    cutoff: u64,
    tries: u32,
    stream: &VerifyStream,
    epoch: u64,
) -> (usize, CoverageInfo) {
    let mut scratch = DefenseScratch::default();
    let mut info = CoverageInfo {
        by_node: vec![Vec::new(); g.n()],
        required: vec![Vec::new(); g.n()],
        non_defended: Vec::new(),
    };
    let mut defenders = Vec::new();
    let lenders = Lenders::new(g, s);
    for (i, attack) in attacks.iter().enumerate() {
        let defended =
            scratch.check_with(g, s, &lenders, &[], attack.nodes(), cutoff, tries, || {
                stream.attack_rng(epoch, i)
            });
        if defended {
            scratch.defenders(&mut defenders);
            for &(u, need) in &defenders {
                info.by_node[u].push(i as u32);
                info.required[u].push(need);
            }
        } else {
            info.non_defended.push(i as u32);
        }
    }
    (info.non_defended.len(), info)
}

/// Index of the first attack the heuristic fails to defend, if any.
pub(crate) fn first_non_defended(
    g: &Graph,
    s: &Solution,
    attacks: &[Attack],
    cutoff: u64,
    tries: u32,
    stream: &VerifyStream,
    epoch: u64,
) -> Option<usize> {
    let mut scratch = DefenseScratch::default();
    let lenders = Lenders::new(g, s);
    attacks.iter().enumerate().position(|(i, attack)| {
        let rng = || stream.attack_rng(epoch, i);
        !scratch.check_with(g, s, &lenders, &[], attack.nodes(), cutoff, tries, rng)
    })
}
