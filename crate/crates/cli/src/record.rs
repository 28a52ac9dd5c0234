use clap::ValueEnum;
use ksrd::{FeasibilityMode, SolverConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Vns,
    Exact,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Vns => "vns",
            Algorithm::Exact => "exact",
        }
    }
}

/// One solver run, emitted as a JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub algorithm: Algorithm,
    pub objective: u64,
    pub labels: Vec<u32>,
    pub mode: FeasibilityMode,
    /// Undefended attacks of the final labeling: over all C(n, k) attacks in
    /// exact mode, over the intense set otherwise.
    pub non_defended: u64,
    pub time_to_best: f64,
    pub total_time: f64,
    pub iterations: u64,
    pub seed: u64,
    pub config: SolverConfig,
}

impl RunRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    /// The record with its wall-clock fields zeroed; everything left is a
    /// function of (instance, config, seed) when the iteration limit binds.
    pub fn without_timing(&self) -> RunRecord {
        RunRecord {
            time_to_best: 0.0,
            total_time: 0.0,
            ..self.clone()
        }
    }
}

/// Aggregate over repeated runs of one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub instance: String,
    pub k: usize,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub mean_obj: f64,
    /// Population standard deviation of the objective relative to its mean, in percent.
    pub sigma_pct: f64,
    pub mean_t_best: f64,
}

impl Summary {
    pub fn from_records(records: &[RunRecord]) -> Option<Summary> {
        let first = records.first()?;
        let count = records.len() as f64;
        let mean_obj = records.iter().map(|r| r.objective as f64).sum::<f64>() / count;
        let var = records
            .iter()
            .map(|r| (r.objective as f64 - mean_obj).powi(2))
            .sum::<f64>()
            / count;
        let sigma_pct = if mean_obj > 0.0 {
            100.0 * var.sqrt() / mean_obj
        } else {
            0.0
        };
        let mean_t_best = records.iter().map(|r| r.time_to_best).sum::<f64>() / count;
        Some(Summary {
            instance: first.instance.clone(),
            k: first.k,
            algorithm: first.algorithm,
            runs: records.len(),
            mean_obj,
            sigma_pct,
            mean_t_best,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(objective: u64, t: f64) -> RunRecord {
        RunRecord {
            instance: "x".into(),
            n: 3,
            k: 2,
            algorithm: Algorithm::Vns,
            objective,
            labels: vec![],
            mode: FeasibilityMode::Exact,
            non_defended: 0,
            time_to_best: t,
            total_time: t,
            iterations: 0,
            seed: 0,
            config: SolverConfig::new(2),
        }
    }

    #[test]
    fn summary_statistics() {
        let s = Summary::from_records(&[record(4, 1.0), record(6, 3.0)]).unwrap();
        assert_eq!(s.mean_obj, 5.0);
        assert!((s.sigma_pct - 20.0).abs() < 1e-12);
        assert_eq!(s.mean_t_best, 2.0);
        let flat = Summary::from_records(&vec![record(5, 0.0); 10]).unwrap();
        assert_eq!(flat.sigma_pct, 0.0);
        assert!(Summary::from_records(&[]).is_none());
    }

    #[test]
    fn json_schema_fields() {
        let v: serde_json::Value = serde_json::from_str(&record(5, 0.5).to_json_line()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for key in [
            "instance",
            "n",
            "k",
            "algorithm",
            "objective",
            "labels",
            "mode",
            "non_defended",
            "time_to_best",
            "total_time",
            "iterations",
            "seed",
            "config",
        ] {
            assert!(keys.contains(&key), "missing {key}");
        }
        assert_eq!(v["algorithm"], "vns");
        assert_eq!(v["mode"], "exact");
    }
}
