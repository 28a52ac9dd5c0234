//! Predefined attack sets.
//!
//! When `C(n, k)` is below the take-all bound every k-subset is used. Otherwise
//! the intense set is the union of the k-subsets of every radius-3 ball, and
//! the lightweight set (used inside local search) falls back to the k-subsets
//! of closed neighborhoods once the intense set itself exceeds the bound.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Graph, Node, Result};

pub const DEFAULT_TAKE_ALL_BOUND: u64 = 50_000;
pub const DEFAULT_BALL_RADIUS: usize = 3;

/// A set of simultaneously attacked nodes, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Attack(Vec<Node>);

impl Attack {
    /// Sorts and validates `nodes`. Returns `None` on repeated nodes.
    pub fn new(mut nodes: Vec<Node>) -> Option<Self> {
        nodes.sort_unstable();
        if nodes.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Attack(nodes))
    }

    pub fn nodes(&self) -> &[Node] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Intense and lightweight attack lists, each deduplicated and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackSets {
    pub intense: Vec<Attack>,
    pub lightweight: Vec<Attack>,
    /// The intense list holds all `C(n, k)` attacks.
    pub exhaustive: bool,
}

/// `C(n, k)`, or `None` when it does not fit in a `u64`.
pub fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut c: u64 = 1;
    for i in 0..k {
        // c * (n - i) is divisible by (i + 1); go through u128 to avoid spurious overflow
        let next = u128::from(c) * u128::from(n - i) / u128::from(i + 1);
        c = u64::try_from(next).ok()?;
    }
    Some(c)
}

/// All k-subsets of `set` in lexicographic order. `set` need not be sorted.
pub fn k_combinations(set: &[Node], k: usize) -> Vec<Attack> {
    let mut items = set.to_vec();
    items.sort_unstable();
    items.dedup();
    let mut out = Vec::new();
    for_each_combination(&items, k, |c| out.push(Attack(c.to_vec())));
    out
}

pub(crate) fn for_each_combination(items: &[Node], k: usize, mut f: impl FnMut(&[Node])) {
    let m = items.len();
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<Node> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        // advance the rightmost index that still has room
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < m - k + p) else {
            return;
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
        for p in pos..k {
            buf[p] = items[idx[p]];
        }
    }
}

fn union_of_combinations(groups: impl IntoIterator<Item = Vec<Node>>, k: usize) -> Vec<Attack> {
    let mut seen_groups = HashSet::new();
    let mut out = Vec::new();
    for group in groups {
        if group.len() < k || !seen_groups.insert(group.clone()) {
            continue;
        }
        for_each_combination(&group, k, |c| out.push(Attack(c.to_vec())));
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn generate_attacks(g: &Graph, k: usize, take_all_bound: u64) -> Result<AttackSets> {
    generate_attacks_with_radius(g, k, take_all_bound, DEFAULT_BALL_RADIUS)
}

/// Same as [`generate_attacks`] with a configurable ball radius for the
/// intense set.
pub fn generate_attacks_with_radius(
    g: &Graph,
    k: usize,
    take_all_bound: u64,
    ball_radius: usize,
) -> Result<AttackSets> {
    let n = g.n();
    if k == 0 {
        return Err(Error::ZeroK);
    }
    if k > n {
        return Err(Error::KExceedsN { k, n });
    }
    let total = binomial(n, k);
    let all: Vec<Node> = (0..n).collect();
    if matches!(total, Some(t) if t < take_all_bound) {
        let intense = k_combinations(&all, k);
        return Ok(AttackSets {
            lightweight: intense.clone(),
            intense,
            exhaustive: true,
        });
    }

    let balls: Vec<Vec<Node>> = (0..n).map(|v| g.ball(v, ball_radius).unwrap()).collect();
    let intense = if balls.iter().any(|b| b.len() == n) {
        k_combinations(&all, k)
    } else {
        union_of_combinations(balls, k)
    };
    let exhaustive = total == Some(intense.len() as u64);
    let lightweight = if (intense.len() as u64) <= take_all_bound {
        intense.clone()
    } else {
        union_of_combinations((0..n).map(|v| g.closed_neighborhood(v).unwrap()), k)
    };
    Ok(AttackSets {
        intense,
        lightweight,
        exhaustive,
    })
}
