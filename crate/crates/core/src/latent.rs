//! Latent geometric graphs: nodes uniform in the unit-volume D-ball, linked
//! when their Euclidean distance is below `r`.

use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Real;

/// `C_D = π^{D/2} / Γ(D/2 + 1)`, the volume of the unit-radius D-ball.
pub fn unit_radius_volume<F: Real>(dimension: usize) -> Result<F> {
    if dimension == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let half = dimension as f64 / 2.0;
    Ok(F::lit(
        (half * std::f64::consts::PI.ln() - ln_gamma(half + 1.0)).exp(),
    ))
}

/// Radius `R_D` of the D-ball with unit volume.
pub fn unit_ball_radius<F: Real>(dimension: usize) -> Result<F> {
    let c: F = unit_radius_volume(dimension)?;
    Ok(c.powf(-F::one() / F::from_count(dimension)))
}

/// Volume of the radius-`r` ball inside the unit-volume ball; clamps to 1
/// once `r` exceeds the ball radius.
pub fn omega<F: Real>(dimension: usize, r: F) -> Result<F> {
    if !(r > F::zero()) || !r.is_finite() {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let c: F = unit_radius_volume(dimension)?;
    let volume = c * r.powi(dimension as i32);
    if volume > F::one() {
        log::warn!("radius {r} exceeds the unit-volume ball radius; clamping omega to 1");
        return Ok(F::one());
    }
    Ok(volume)
}

/// Radius whose ball has volume `omega`, for `omega` in (0, 1].
pub fn radius_for_omega<F: Real>(dimension: usize, omega: F) -> Result<F> {
    if !(omega > F::zero() && omega <= F::one()) {
        return Err(invalid(format!("omega must lie in (0, 1], got {omega}")));
    }
    let big_r: F = unit_ball_radius(dimension)?;
    Ok(big_r * omega.powf(F::one() / F::from_count(dimension)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatentModel<F> {
    dimension: usize,
    radius: F,
    ball_radius: F,
    /// Row-major `node_count × dimension`.
    positions: Vec<F>,
}

impl<F: Real> LatentModel<F> {
    /// Model over explicit positions (not required to lie inside the ball).
    pub fn from_positions(dimension: usize, radius: F, positions: Vec<Vec<F>>) -> Result<Self> {
        let ball_radius = unit_ball_radius(dimension)?;
        if !(radius > F::zero()) {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        let mut flat = Vec::with_capacity(positions.len() * dimension);
        for (u, p) in positions.iter().enumerate() {
            if p.len() != dimension {
                return Err(invalid(format!(
                    "node {u} has {} coordinates, expected {dimension}",
                    p.len()
                )));
            }
            flat.extend_from_slice(p);
        }
        Ok(Self {
            dimension,
            radius,
            ball_radius,
            positions: flat,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn radius(&self) -> F {
        self.radius
    }

    pub fn ball_radius(&self) -> F {
        self.ball_radius
    }

    pub fn node_count(&self) -> usize {
        self.positions.len() / self.dimension
    }

    pub fn omega(&self) -> Result<F> {
        omega(self.dimension, self.radius)
    }

    fn check(&self, u: NodeId) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u,
                node_count: self.node_count(),
            })
        }
    }

    pub fn position(&self, u: NodeId) -> Result<&[F]> {
        self.check(u)?;
        Ok(&self.positions[u * self.dimension..(u + 1) * self.dimension])
    }

    #[inline]
    fn dist_unchecked(&self, u: NodeId, v: NodeId) -> F {
        let d = self.dimension;
        let (a, b) = (
            &self.positions[u * d..(u + 1) * d],
            &self.positions[v * d..(v + 1) * d],
        );
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x - y) * (x - y))
            .sum::<F>()
            .sqrt()
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Result<F> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.dist_unchecked(u, v))
    }

    /// Distances from `u` to `items`, in list order.
    pub fn latent_distances(&self, u: NodeId, items: &[NodeId]) -> Result<Vec<F>> {
        self.check(u)?;
        items.iter().map(|&v| self.distance(u, v)).collect()
    }

    /// `pool` ordered by increasing distance from `u`, ties by node id.
    pub fn ideal_ranking(&self, u: NodeId, pool: &[NodeId]) -> Result<Vec<NodeId>> {
        self.check(u)?;
        if pool.contains(&u) {
            return Err(Error::InvalidPool(format!(
                "pool contains the query node {u}"
            )));
        }
        let mut keyed = pool
            .iter()
            .map(|&v| Ok((self.distance(u, v)?, v)))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.1.cmp(&b.1))
        });
        Ok(keyed.into_iter().map(|(_, v)| v).collect())
    }

    /// Graph linking every pair closer than the model radius.
    pub fn graph(&self) -> Graph {
        let n = self.node_count();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if self.dist_unchecked(u, v) < self.radius {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges).expect("node ids within range")
    }

    /// CSV `node,x_1,...,x_D`.
    pub fn write_positions_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header: Vec<String> = (1..=self.dimension).map(|i| format!("x_{i}")).collect();
        writeln!(out, "node,{}", header.join(","))?;
        for u in 0..self.node_count() {
            let coords: Vec<String> = self.position(u)?.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{u},{}", coords.join(","))?;
        }
        Ok(())
    }

    /// Reads positions written by [`LatentModel::write_positions_csv`].
    pub fn read_positions_csv<R: BufRead>(reader: R, radius: F) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let dimension = match lines.next() {
            Some((_, header)) => header?.split(',').count().saturating_sub(1),
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "missing header".into(),
                })
            }
        };
        let mut positions = Vec::new();
        for (idx, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let node: usize = fields[0].trim().parse().map_err(|e| Error::Parse {
                line: idx + 1,
                message: format!("bad node id: {e}"),
            })?;
            if node != positions.len() || fields.len() != dimension + 1 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "rows must list nodes 0.. in order with one value per coordinate"
                        .into(),
                });
            }
            let coords = fields[1..]
                .iter()
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map(F::lit)
                        .map_err(|e| Error::Parse {
                            line: idx + 1,
                            message: format!("bad coordinate: {e}"),
                        })
                })
                .collect::<Result<Vec<F>>>()?;
            positions.push(coords);
        }
        Self::from_positions(dimension, radius, positions)
    }
}

/// Samples `n` positions uniformly in the unit-volume `dimension`-ball and
/// links pairs closer than `r`.
pub fn generate<F: Real, R: Rng + ?Sized>(
    n: usize,
    dimension: usize,
    r: F,
    rng: &mut R,
) -> Result<(LatentModel<F>, Graph)> {
    if !(r > F::zero()) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let ball_radius: F = unit_ball_radius(dimension)?;
    let big_r = ball_radius.as_f64();
    let mut positions = Vec::with_capacity(n * dimension);
    let mut direction = vec![0.0_f64; dimension];
    for _ in 0..n {
        let norm = loop {
            for x in direction.iter_mut() {
                *x = StandardNormal.sample(rng);
            }
            let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                break norm;
            }
        };
        let u: f64 = rng.random();
        let rho = big_r * u.powf(1.0 / dimension as f64);
        positions.extend(direction.iter().map(|x| F::lit(x / norm * rho)));
    }
    let model = LatentModel {
        dimension,
        radius: r,
        ball_radius,
        positions,
    };
    let graph = model.graph();
    Ok((model, graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{task_rng, Purpose};

    #[test]
    fn ball_radii() {
        assert!((unit_ball_radius::<f64>(1).unwrap() - 0.5).abs() < 1e-12);
        let r2: f64 = unit_ball_radius(2).unwrap();
        assert!((r2 - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!((r2 - 0.564190).abs() < 1e-6);
        let r3: f64 = unit_ball_radius(3).unwrap();
        assert!((r3 - (3.0 / (4.0 * std::f64::consts::PI)).cbrt()).abs() < 1e-12);
        assert!((r3 - 0.620350).abs() < 1e-6);
        assert!(unit_ball_radius::<f64>(0).is_err());
    }

    #[test]
    fn omega_values() {
        for d in 1..=10 {
            let r: f64 = unit_ball_radius(d).unwrap();
            assert!((omega(d, r).unwrap() - 1.0).abs() < 1e-12, "D={d}");
        }
        let r2: f64 = unit_ball_radius(2).unwrap();
        assert!((omega(2, r2 / 2.0).unwrap() - 0.25).abs() < 1e-12);
        let r3: f64 = unit_ball_radius(3).unwrap();
        assert!((omega(3, r3 * 0.05_f64.cbrt()).unwrap() - 0.05).abs() < 1e-12);
        assert_eq!(omega(2, 10.0 * r2).unwrap(), 1.0);
        assert!(omega(2, 0.0).is_err());
        assert!(omega(2, -1.0).is_err());
        let r = radius_for_omega(3, 0.05).unwrap();
        assert!((omega(3, r).unwrap() - 0.05_f64).abs() < 1e-12);
        assert!(radius_for_omega(2, 1.5).is_err());
    }

    #[test]
    fn generator_edge_cases() {
        let mut rng = task_rng(1, Purpose::Generator, 0, 0);
        let (m, g) = generate::<f64, _>(0, 2, 0.1, &mut rng).unwrap();
        assert_eq!((m.node_count(), g.node_count(), g.edge_count()), (0, 0, 0));

        let big_r: f64 = unit_ball_radius(3).unwrap();
        let (m, g) = generate(30, 3, 2.0 * big_r + 1e-9, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 30 * 29 / 2);
        for u in 0..30 {
            let norm: f64 = m
                .position(u)
                .unwrap()
                .iter()
                .map(|x| x * x)
                .sum::<f64>()
                .sqrt();
            assert!(norm <= big_r + 1e-12);
        }
        assert!(generate::<f64, _>(3, 2, 0.0, &mut rng).is_err());
    }

    #[test]
    fn ideal_ranking_on_a_line() {
        let pos = (0..4).map(|i| vec![i as f64, 0.0]).collect();
        let m = LatentModel::from_positions(2, 0.5, pos).unwrap();
        assert_eq!(m.ideal_ranking(0, &[3, 1, 2]).unwrap(), vec![1, 2, 3]);
        assert_eq!(m.ideal_ranking(0, &[2]).unwrap(), vec![2]);
        assert_eq!(
            m.latent_distances(0, &[1, 2, 3]).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert!(m.latent_distances(0, &[]).unwrap().is_empty());
        assert!(m.ideal_ranking(0, &[0, 1]).is_err());
        assert!(m.latent_distances(0, &[7]).is_err());
    }

    #[test]
    fn ideal_ranking_matches_pairwise_sort() {
        let mut rng = task_rng(5, Purpose::Generator, 0, 0);
        let (m, _) = generate::<f64, _>(60, 3, 0.2, &mut rng).unwrap();
        let pool: Vec<NodeId> = (1..60).collect();
        let ranked = m.ideal_ranking(0, &pool).unwrap();
        let x0 = m.position(0).unwrap().to_vec();
        let mut brute: Vec<(f64, NodeId)> = pool
            .iter()
            .map(|&v| {
                let xv = m.position(v).unwrap();
                let d2: f64 = x0.iter().zip(xv).map(|(a, b)| (a - b).powi(2)).sum();
                (d2, v)
            })
            .collect();
        brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(ranked, brute.iter().map(|&(_, v)| v).collect::<Vec<_>>());
        let dists = m.latent_distances(0, &ranked).unwrap();
        for (d, &(d2, _)) in dists.iter().zip(&brute) {
            assert!((d - d2.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn positions_round_trip_through_csv() {
        let mut rng = task_rng(2, Purpose::Generator, 0, 0);
        let (m, g) = generate::<f64, _>(25, 2, 0.3, &mut rng).unwrap();
        let mut buf = Vec::new();
        m.write_positions_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("node,x_1,x_2\n"));
        let back = LatentModel::read_positions_csv(buf.as_slice(), 0.3).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.graph(), g);
    }
}
