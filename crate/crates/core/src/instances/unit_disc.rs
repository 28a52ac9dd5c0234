use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::run_rng;
use crate::{Error, Graph, Result};

/// Unit disc model: `n` points uniform in the unit square, joined when at
/// Euclidean distance at most `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitDiscParams {
    pub n: usize,
    pub radius: f64,
    pub seed: u64,
}

impl UnitDiscParams {
    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius < 1.0) {
            return Err(Error::InvalidRadius(self.radius));
        }
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(())
    }
}

/// Sampled coordinates; point `i` takes two consecutive draws `(x, y)` from
/// the ChaCha8 stream of `seed`.
pub fn gen_unit_disc_points(p: &UnitDiscParams) -> Result<Vec<[f64; 2]>> {
    p.validate()?;
    let mut rng = run_rng(p.seed);
    Ok((0..p.n)
        .map(|_| [rng.gen::<f64>(), rng.gen::<f64>()])
        .collect())
}

pub fn gen_unit_disc(p: &UnitDiscParams) -> Result<Graph> {
    let points = gen_unit_disc_points(p)?;
    unit_disc_from_points(&points, p.radius)
}

pub fn unit_disc_from_points(points: &[[f64; 2]], radius: f64) -> Result<Graph> {
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for (u, a) in points.iter().enumerate() {
        for (v, b) in points.iter().enumerate().skip(u + 1) {
            let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
            if dx * dx + dy * dy <= r2 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(points.len(), &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_points() {
        let g = unit_disc_from_points(&[[0.0, 0.0], [0.2, 0.0]], 0.3).unwrap();
        assert_eq!(g.edge_count(), 1);
        let g = unit_disc_from_points(&[[0.0, 0.0], [0.5, 0.5]], 0.3).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn deterministic() {
        let p = UnitDiscParams {
            n: 100,
            radius: 0.6,
            seed: 11,
        };
        assert_eq!(gen_unit_disc(&p).unwrap(), gen_unit_disc(&p).unwrap());
        let other = UnitDiscParams { seed: 12, ..p };
        assert_ne!(gen_unit_disc(&p).unwrap(), gen_unit_disc(&other).unwrap());
    }

    #[test]
    fn invalid_params() {
        for radius in [0.0, 1.0, 1.5, -0.2, f64::NAN] {
            let p = UnitDiscParams {
                n: 10,
                radius,
                seed: 0,
            };
            assert!(matches!(gen_unit_disc(&p), Err(Error::InvalidRadius(_))));
        }
        assert_eq!(
            gen_unit_disc(&UnitDiscParams {
                n: 0,
                radius: 0.5,
                seed: 0
            }),
            Err(Error::EmptyGraph)
        );
    }

    #[test]
    fn monotone_in_radius() {
        for seed in 0..10 {
            let small = gen_unit_disc(&UnitDiscParams {
                n: 40,
                radius: 0.2,
                seed,
            })
            .unwrap();
            let large = gen_unit_disc(&UnitDiscParams {
                n: 40,
                radius: 0.35,
                seed,
            })
            .unwrap();
            assert!(small.edges().all(|(u, v)| large.has_edge(u, v)));
        }
    }

    #[test]
    fn density_grows_with_radius() {
        let mean_edges = |radius: f64| {
            (0..30)
                .map(|seed| {
                    gen_unit_disc(&UnitDiscParams {
                        n: 30,
                        radius,
                        seed,
                    })
                    .unwrap()
                    .edge_count()
                })
                .sum::<usize>() as f64
                / 30.0
        };
        let densities: Vec<f64> = [0.3, 0.4, 0.5, 0.6].into_iter().map(mean_edges).collect();
        assert!(densities.windows(2).all(|w| w[0] < w[1]), "{densities:?}");
    }
}
