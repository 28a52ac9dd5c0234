//! Coverage-based greedy construction.

use crate::{label_cap, Graph, Node, Solution};

/// Repeatedly labels the unprocessed node whose closed neighborhood has the
/// most uncovered nodes, preferring uncovered nodes on ties and then the
/// smallest id. The chosen node receives one army per newly covered neighbor
/// plus one for itself, clamped to the label cap.
pub fn greedy(g: &Graph, k: usize) -> Solution {
    let n = g.n();
    let cap = label_cap(g, k);
    let mut s = Solution::zeros(n);
    let mut covered = vec![false; n];
    let mut processed = vec![false; n];
    let mut uncovered_count = n;

    let gain = |covered: &[bool], v: Node| {
        usize::from(!covered[v]) + g.neighbors(v).iter().filter(|&&u| !covered[u]).count()
    };

    while uncovered_count > 0 {
        let mut best: Option<(usize, bool, Node)> = None;
        for v in (0..n).filter(|&v| !processed[v]) {
            let cand = (gain(&covered, v), !covered[v], v);
            let better = match best {
                None => true,
                Some((bg, bu, _)) => cand.0 > bg || (cand.0 == bg && cand.1 && !bu),
            };
            if better {
                best = Some(cand);
            }
        }
        let (g_value, uncovered_self, v) = best.expect("an uncovered node is never processed");
        let label = (g_value + usize::from(!uncovered_self)).min(k + 1) as u32;
        s.set(v, label.min(cap));
        processed[v] = true;
        for u in std::iter::once(v).chain(g.neighbors(v).iter().copied()) {
            if !covered[u] {
                covered[u] = true;
                uncovered_count -= 1;
            }
        }
    }
    s
}
