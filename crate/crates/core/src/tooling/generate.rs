//! Deterministic fixture families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::height::Height;
use crate::reeb::ReebGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// One edge from `a` to `b`.
    Segment(Height, Height),
    /// Two vertices at `a` and `b` joined by two parallel edges.
    Cycle(Height, Height),
    /// A path through the given heights.
    Zigzag(Vec<Height>),
    /// `k` rungs; left rail at heights `0, 2, 4, …`, right rail at `1, 3, 5, …`.
    Ladder(usize),
    /// A connected multigraph with `n` vertices and `m` edges and small rational heights.
    Random { n: usize, m: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: ReebGraph,
    /// Rejected random draws before an acceptable one.
    pub retries: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

const MAX_RETRIES: u32 = 10_000;

pub fn generate(family: &Family) -> Result<Generated, GenError> {
    let bad = |s: &str| GenError::InvalidParams(s.to_string());
    let fixed = |heights: Vec<Height>, pairs: &[(u32, u32)], what: &str| {
        ReebGraph::from_heights(heights, pairs).map(|graph| Generated { graph, retries: 0 }).map_err(|_| bad(what))
    };
    match family {
        Family::Segment(a, b) => fixed(vec![a.clone(), b.clone()], &[(0, 1)], "segment ends must differ"),
        Family::Cycle(a, b) => fixed(vec![a.clone(), b.clone()], &[(0, 1), (0, 1)], "cycle ends must differ"),
        Family::Zigzag(hs) => {
            if hs.is_empty() {
                return Err(bad("zigzag needs at least one height"));
            }
            let pairs: Vec<(u32, u32)> = (1..hs.len() as u32).map(|i| (i - 1, i)).collect();
            fixed(hs.clone(), &pairs, "consecutive zigzag heights must differ")
        }
        Family::Ladder(k) => {
            if *k == 0 {
                return Err(bad("ladder needs at least one rung"));
            }
            let heights = (0..2 * *k as i64).map(Height::int).collect();
            let mut pairs = Vec::with_capacity(3 * k);
            for i in 0..*k as u32 {
                pairs.push((2 * i, 2 * i + 1));
                if i + 1 < *k as u32 {
                    pairs.push((2 * i, 2 * i + 2));
                    pairs.push((2 * i + 1, 2 * i + 3));
                }
            }
            fixed(heights, &pairs, "ladder")
        }
        Family::Random { n, m, seed } => random(*n, *m, *seed),
    }
}

fn random(n: usize, m: usize, seed: u64) -> Result<Generated, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParams("random graph needs a vertex".into()));
    }
    if m + 1 < n {
        return Err(GenError::InvalidParams(format!("{m} edges cannot connect {n} vertices")));
    }
    if n == 1 && m > 0 {
        return Err(GenError::InvalidParams("a single vertex admits no edges".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for retries in 0..MAX_RETRIES {
        let heights: Vec<Height> = (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=4i64);
                Height::new(rng.gen_range(0..=4 * n as i64 * d), d)
            })
            .collect();
        let mut pairs = Vec::with_capacity(m);
        for i in 1..n as u32 {
            pairs.push((rng.gen_range(0..i), i));
        }
        while pairs.len() < m {
            let a = rng.gen_range(0..n as u32);
            let b = rng.gen_range(0..n as u32);
            if a != b {
                pairs.push((a, b));
            }
        }
        if let Ok(graph) = ReebGraph::from_heights(heights, &pairs) {
            return Ok(Generated { graph, retries });
        }
    }
    Err(GenError::InvalidParams("no valid draw within the retry limit".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::h;
    use crate::reeb::is_connected;

    #[test]
    fn ladder_shape() {
        let g = generate(&Family::Ladder(4)).unwrap().graph;
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 10);
        assert!(is_connected(&g));
    }

    #[test]
    fn random_is_deterministic() {
        let f = Family::Random { n: 7, m: 9, seed: 42 };
        let a = generate(&f).unwrap();
        let b = generate(&f).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.retries, b.retries);
        assert!(is_connected(&a.graph));
        assert_eq!(a.graph.edge_count(), 9);
    }

    #[test]
    fn invalid_params() {
        assert!(generate(&Family::Segment(h(1, 1), h(1, 1))).is_err());
        assert!(generate(&Family::Random { n: 5, m: 2, seed: 0 }).is_err());
        assert!(generate(&Family::Zigzag(vec![])).is_err());
    }
}
