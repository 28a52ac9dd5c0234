//! Army labelings.

use serde::{Deserialize, Serialize};

use crate::{Error, Graph, Node, Result};

/// Largest admissible label: `min(Δ(G), k) + 1`.
pub fn label_cap(g: &Graph, k: usize) -> u32 {
    (g.max_degree().min(k) + 1) as u32
}

/// A labeling `f(v)` with its cached total weight `ω(f)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Solution {
    labels: Vec<u32>,
    weight: u64,
}

impl Solution {
    pub fn zeros(n: usize) -> Self {
        Solution {
            labels: vec![0; n],
            weight: 0,
        }
    }

    pub fn ones(n: usize) -> Self {
        Solution {
            labels: vec![1; n],
            weight: n as u64,
        }
    }

    /// Wraps `labels` without checking them against a graph.
    pub fn from_labels(labels: Vec<u32>) -> Self {
        let weight = labels.iter().map(|&l| u64::from(l)).sum();
        Solution { labels, weight }
    }

    /// Wraps `labels` after checking length and the label cap for `(g, k)`.
    pub fn for_graph(g: &Graph, k: usize, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != g.n() {
            return Err(Error::LabelLength {
                expected: g.n(),
                got: labels.len(),
            });
        }
        let cap = label_cap(g, k);
        if let Some((node, &label)) = labels.iter().enumerate().find(|(_, &l)| l > cap) {
            return Err(Error::LabelExceedsCap { node, label, cap });
        }
        Ok(Self::from_labels(labels))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, v: Node) -> u32 {
        self.labels[v]
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    #[inline]
    pub fn set(&mut self, v: Node, label: u32) {
        self.weight = self.weight - u64::from(self.labels[v]) + u64::from(label);
        self.labels[v] = label;
    }
}

impl TryFrom<Vec<u32>> for Solution {
    type Error = std::convert::Infallible;

    fn try_from(labels: Vec<u32>) -> std::result::Result<Self, Self::Error> {
        Ok(Solution::from_labels(labels))
    }
}

impl From<Solution> for Vec<u32> {
    fn from(s: Solution) -> Self {
        s.labels
    }
}
