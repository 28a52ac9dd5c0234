//! Brute-force ground truth for small graphs.

use crate::attacks::for_each_combination;
use crate::defense::defend_exact_nodes;
use crate::{binomial, label_cap, Attack, Error, Graph, Result, Solution};

/// Limits that keep the exhaustive routines at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_attacks: u64,
    pub max_labelings: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_attacks: 10_000_000,
            max_labelings: 100_000_000,
        }
    }
}

fn check_attack_budget(g: &Graph, k: usize, budget: &OracleBudget) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    if k > g.n() {
        return Err(Error::KExceedsN { k, n: g.n() });
    }
    match binomial(g.n(), k) {
        Some(c) if c <= budget.max_attacks => Ok(()),
        _ => Err(Error::BudgetExceeded(format!(
            "C({}, {}) attacks exceed the limit of {}",
            g.n(),
            k,
            budget.max_attacks
        ))),
    }
}

/// Number of the `C(n, k)` attacks that cannot be defended, and the
/// lexicographically first of them.
pub fn exact_non_defended(
    g: &Graph,
    s: &Solution,
    k: usize,
    budget: &OracleBudget,
) -> Result<(u64, Option<Attack>)> {
    check_attack_budget(g, k, budget)?;
    let nodes: Vec<usize> = (0..g.n()).collect();
    let mut count = 0;
    let mut first = None;
    for_each_combination(&nodes, k, |attack| {
        if !defend_exact_nodes(g, s, attack).defended {
            count += 1;
            if first.is_none() {
                first = Attack::new(attack.to_vec());
            }
        }
    });
    Ok((count, first))
}

fn all_defended(g: &Graph, s: &Solution, k: usize) -> bool {
    let nodes: Vec<usize> = (0..g.n()).collect();
    let mut ok = true;
    // no early exit in for_each_combination, so skip work once a failure is seen
    for_each_combination(&nodes, k, |attack| {
        if ok && !defend_exact_nodes(g, s, attack).defended {
            ok = false;
        }
    });
    ok
}

/// True iff every one of the `C(n, k)` attacks is defendable under `s`.
pub fn exact_feasible(g: &Graph, s: &Solution, k: usize) -> Result<bool> {
    check_attack_budget(g, k, &OracleBudget::default())?;
    Ok(all_defended(g, s, k))
}

/// Minimum weight of a k-SRD function on `g` together with a witness, found by
/// enumerating labelings of weight 0, 1, 2, ... up to `weight_cap`.
pub fn brute_force_optimum(
    g: &Graph,
    k: usize,
    weight_cap: u64,
    budget: &OracleBudget,
) -> Result<(u64, Solution)> {
    check_attack_budget(g, k, budget)?;
    let n = g.n();
    let cap = label_cap(g, k);
    let mut enumerated: u64 = 0;
    let mut labels = vec![0u32; n];
    for weight in 0..=weight_cap.min(n as u64) {
        let mut search = Search {
            g,
            k,
            cap,
            budget,
            enumerated: &mut enumerated,
            labels: &mut labels,
        };
        if search.fill(0, weight)? {
            let witness = Solution::from_labels(labels.clone());
            return Ok((weight, witness));
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no k-SRD function of weight at most {weight_cap}"
    )))
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    cap: u32,
    budget: &'a OracleBudget,
    enumerated: &'a mut u64,
    labels: &'a mut Vec<u32>,
}

impl Search<'_> {
    /// Distributes `remaining` over `labels[pos..]`; true once a feasible
    /// labeling is found (left in `labels`).
    fn fill(&mut self, pos: usize, remaining: u64) -> Result<bool> {
        let n = self.labels.len();
        if pos == n {
            if remaining != 0 {
                return Ok(false);
            }
            *self.enumerated += 1;
            if *self.enumerated > self.budget.max_labelings {
                return Err(Error::BudgetExceeded(format!(
                    "more than {} labelings enumerated",
                    self.budget.max_labelings
                )));
            }
            let s = Solution::from_labels(self.labels.clone());
            return Ok(all_defended(self.g, &s, self.k));
        }
        let slots_left = (n - pos - 1) as u64;
        let top = u64::from(self.cap).min(remaining);
        for label in (0..=top).rev() {
            if remaining - label > slots_left * u64::from(self.cap) {
                break;
            }
            self.labels[pos] = label as u32;
            if self.fill(pos + 1, remaining - label)? {
                return Ok(true);
            }
        }
        self.labels[pos] = 0;
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (1, 4)]).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn fig_labelings() {
        let g = fig1();
        assert!(exact_feasible(&g, &Solution::from_labels(vec![1, 0, 2, 1, 1]), 3).unwrap());
        let bad = Solution::from_labels(vec![0, 0, 3, 0, 1]);
        assert!(!exact_feasible(&g, &bad, 3).unwrap());
        let (count, first) = exact_non_defended(&g, &bad, 3, &OracleBudget::default()).unwrap();
        assert_eq!(count, 1);
        assert_eq!(first.unwrap().nodes(), &[0, 1, 3]);
        assert!(exact_feasible(&g, &Solution::ones(5), 3).unwrap());
    }

    #[test]
    fn optima() {
        let budget = OracleBudget::default();
        let (gamma, witness) = brute_force_optimum(&fig1(), 3, 5, &budget).unwrap();
        assert_eq!(gamma, 5);
        assert!(exact_feasible(&fig1(), &witness, 3).unwrap());
        assert_eq!(
            brute_force_optimum(&complete(2), 2, 2, &budget).unwrap().0,
            2
        );
        assert_eq!(
            brute_force_optimum(&complete(3), 2, 3, &budget).unwrap().0,
            3
        );
    }

    #[test]
    fn budget_guards() {
        let tiny = OracleBudget {
            max_attacks: 5,
            max_labelings: 10,
        };
        assert!(matches!(
            exact_non_defended(&fig1(), &Solution::ones(5), 3, &tiny),
            Err(Error::BudgetExceeded(_))
        ));
        let small = OracleBudget {
            max_attacks: 100,
            max_labelings: 10,
        };
        assert!(matches!(
            brute_force_optimum(&fig1(), 3, 5, &small),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            brute_force_optimum(&fig1(), 3, 3, &OracleBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
        assert_eq!(
            exact_feasible(&fig1(), &Solution::ones(5), 6),
            Err(Error::KExceedsN { k: 6, n: 5 })
        );
    }
}
