//! Seeded random host graphs for tests and benchmark manifests.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

fn check_capacity(n: usize, m: usize) -> Result<()> {
    let max = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > max {
        return Err(Error::domain(format!(
            "{m} edges do not fit in a simple graph on {n} vertices"
        )));
    }
    Ok(())
}

/// Uniform simple graph with exactly `m` edges on `n` vertices.
pub fn gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    check_capacity(n, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n) as VertexId;
        let v = rng.random_range(0..n) as VertexId;
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_edges(n, edges)
}

/// Chung–Lu style graph: endpoints drawn with probability proportional to
/// `(i + 1)^(-1 / (exponent - 1))`, giving a power-law degree tail with the
/// given exponent. Loops and repeats are redrawn until `m` edges exist.
pub fn power_law(n: usize, m: usize, exponent: f64, seed: u64) -> Result<Graph> {
    check_capacity(n, m)?;
    if exponent <= 1.0 || !exponent.is_finite() {
        return Err(Error::domain("power-law exponent must exceed 1"));
    }
    let weights: Vec<f64> = (0..n)
        .map(|i| ((i + 1) as f64).powf(-1.0 / (exponent - 1.0)))
        .collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    let mut attempts: u64 = 0;
    let max_attempts = 1000 * m as u64 + 1000;
    while edges.len() < m {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::domain(
                "power-law sampler saturated; lower the edge count or exponent skew",
            ));
        }
        let u = dist.sample(&mut rng) as VertexId;
        let v = dist.sample(&mut rng) as VertexId;
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnm_has_exact_edge_count() {
        let g = gnm(100, 300, 7).unwrap();
        assert_eq!(g.edge_count(), 300);
        assert_eq!(g, gnm(100, 300, 7).unwrap());
    }

    #[test]
    fn power_law_is_skewed() {
        let g = power_law(1000, 3000, 2.2, 1).unwrap();
        assert_eq!(g.edge_count(), 3000);
        let mean = g.directed_edge_count() as f64 / g.vertex_count() as f64;
        assert!(g.max_degree() as f64 > 5.0 * mean);
    }

    #[test]
    fn capacity_checked() {
        assert!(gnm(4, 7, 0).is_err());
        assert!(power_law(10, 5, 1.0, 0).is_err());
    }
}
