//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the solver's own defense or oracle code.
#![allow(dead_code)]

use ksrd::{label_cap, Graph, Solution};
use rand::Rng;

pub fn fig1() -> Graph {
    Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (1, 4)]).unwrap()
}

/// G(n, p) graph.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Labels in `0..=cap`, zero about half the time.
pub fn random_labeling<R: Rng>(rng: &mut R, g: &Graph, k: usize) -> Solution {
    let cap = label_cap(g, k);
    let labels = (0..g.n())
        .map(|_| {
            if rng.gen_bool(0.5) {
                0
            } else {
                rng.gen_range(1..=cap)
            }
        })
        .collect();
    Solution::from_labels(labels)
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Tries every assignment of lenders to the attacked zero-labeled nodes.
pub fn naive_defendable(g: &Graph, s: &Solution, attack: &[usize]) -> bool {
    let zeros: Vec<usize> = attack.iter().copied().filter(|&v| s.get(v) == 0).collect();
    let mut lent = vec![0u32; g.n()];
    fn rec(g: &Graph, s: &Solution, zeros: &[usize], lent: &mut [u32]) -> bool {
        let Some((&v, rest)) = zeros.split_first() else {
            return true;
        };
        for &u in g.neighbors(v) {
            let label = s.get(u);
            if label >= 2 && lent[u] < label - 1 {
                lent[u] += 1;
                let ok = rec(g, s, rest, lent);
                lent[u] -= 1;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(g, s, &zeros, &mut lent)
}

pub fn naive_non_defended(g: &Graph, s: &Solution, k: usize) -> usize {
    subsets(g.n(), k)
        .iter()
        .filter(|a| !naive_defendable(g, s, a))
        .count()
}

/// Minimum weight over all labelings in `0..=cap` per node.
pub fn naive_optimum(g: &Graph, k: usize) -> u64 {
    let n = g.n();
    let cap = label_cap(g, k);
    let base = cap as u64 + 1;
    let total = base.pow(n as u32);
    let mut best = u64::MAX;
    for code in 0..total {
        let mut c = code;
        let labels: Vec<u32> = (0..n)
            .map(|_| {
                let d = (c % base) as u32;
                c /= base;
                d
            })
            .collect();
        let w: u64 = labels.iter().map(|&l| l as u64).sum();
        if w >= best {
            continue;
        }
        let s = Solution::from_labels(labels);
        if naive_non_defended(g, &s, k) == 0 {
            best = w;
        }
    }
    best
}
