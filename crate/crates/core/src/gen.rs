//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::WeightedTree;
use crate::{Error, Result};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Path `1 - 2 - ... - n` with unit weights, rooted at 1. Its tree metric is
/// the uniform line metric on `[1, n]`.
pub fn uniform_line(n: usize) -> Result<WeightedTree> {
    if n == 0 {
        return Err(Error::input("n must be positive"));
    }
    let edges: Vec<_> = (1..n as u64).map(|i| (i, i + 1, 1.0)).collect();
    WeightedTree::from_edges(1, &edges, None)
}

/// Random tree on vertices `0..n` rooted at 0 with integer weights in
/// `[1, max_weight]`. Each vertex attaches to a uniformly chosen vertex among
/// the previous `window` ones, with `window` drawn per tree, so the shapes
/// range from near-paths to bushy trees.
pub fn random_tree(n: usize, max_weight: u64, seed: u64) -> Result<WeightedTree> {
    if n == 0 {
        return Err(Error::input("n must be positive"));
    }
    if max_weight == 0 {
        return Err(Error::input("max weight must be positive"));
    }
    let mut r = rng(seed);
    let window = match r.gen_range(0..4) {
        0 => 1,
        1 => 2 + r.gen_range(0..4),
        _ => n,
    };
    let edges: Vec<_> = (1..n)
        .map(|i| {
            let lo = i.saturating_sub(window);
            let p = r.gen_range(lo..i);
            (p as u64, i as u64, r.gen_range(1..=max_weight) as f64)
        })
        .collect();
    WeightedTree::from_edges(0, &edges, None)
}

/// `n` distinct points in `[0, side)^dim` with integer coordinates.
pub fn random_points(n: usize, dim: usize, side: u64, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n == 0 || dim == 0 || side == 0 {
        return Err(Error::input("n, dimension and side must be positive"));
    }
    let room = (side as f64).powi(dim.min(64) as i32);
    if room < 2.0 * n as f64 {
        return Err(Error::input(format!("{n} distinct points do not fit comfortably in [0, {side})^{dim}")));
    }
    let mut r = rng(seed);
    let mut seen = std::collections::HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p: Vec<u64> = (0..dim).map(|_| r.gen_range(0..side)).collect();
        if seen.insert(p.clone()) {
            out.push(p.into_iter().map(|c| c as f64).collect());
        }
    }
    Ok(out)
}
