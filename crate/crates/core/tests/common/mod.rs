#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reebflow::metrics::find_isomorphism;
use reebflow::tooling::{generate, Family};
use reebflow::{Height, ReebGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random rational `lo + (hi − lo)·k/d` with `d ≤ 12`.
pub fn rational(r: &mut ChaCha8Rng, lo: &Height, hi: &Height) -> Height {
    let d = r.gen_range(1..=12i64);
    let k = r.gen_range(0..=d);
    lo + &(&(hi - lo) * &Height::new(k, d))
}

/// A connected graph with between 1 and `max_n` vertices and up to three extra edges.
pub fn connected(r: &mut ChaCha8Rng, max_n: usize) -> ReebGraph {
    let n = r.gen_range(1..=max_n);
    let extra = if n == 1 { 0 } else { r.gen_range(0..=3) };
    let seed = r.gen();
    generate(&Family::Random { n, m: n - 1 + extra, seed }).unwrap().graph
}

/// Disjoint union of two graphs, ids of `b` shifted past those of `a`.
pub fn union(a: &ReebGraph, b: &ReebGraph) -> ReebGraph {
    let mut heights: Vec<Height> = a.vertices().iter().map(|v| v.height.clone()).collect();
    let off = heights.len() as u32;
    heights.extend(b.vertices().iter().map(|v| v.height.clone()));
    let mut pairs: Vec<(u32, u32)> = (0..a.edge_count())
        .map(|ei| {
            let (x, y) = a.ends_at(ei);
            (x as u32, y as u32)
        })
        .collect();
    pairs.extend((0..b.edge_count()).map(|ei| {
        let (x, y) = b.ends_at(ei);
        (x as u32 + off, y as u32 + off)
    }));
    ReebGraph::from_heights(heights, &pairs).unwrap()
}

/// Isomorphism with a verified witness.
pub fn iso(a: &ReebGraph, b: &ReebGraph) -> bool {
    let a = Arc::new(a.clone());
    let b = Arc::new(b.clone());
    find_isomorphism(&a, &b, 5_000_000).witness().is_some_and(|w| w.verify())
}
