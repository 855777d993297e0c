#![allow(dead_code)]

use nodetopo::{PersistenceDiagram, ScalarField, WeightedGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi style graph with edge probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j, rng.random::<f64>()));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// Values drawn from a small integer set (many ties) or continuously.
pub fn random_field(rng: &mut ChaCha8Rng, g: &WeightedGraph) -> ScalarField {
    let tied = rng.random::<bool>();
    let values = (0..g.n_vertices())
        .map(|_| {
            if tied {
                rng.random_range(0..4) as f64
            } else {
                rng.random::<f64>() * 10.0 - 5.0
            }
        })
        .collect();
    ScalarField::new(g, values).unwrap()
}

pub fn random_diagram(rng: &mut ChaCha8Rng, max_points: usize) -> PersistenceDiagram {
    let k = rng.random_range(0..=max_points);
    let pairs = (0..k)
        .map(|_| {
            let b = rng.random::<f64>() * 4.0;
            (b, b + rng.random::<f64>() * 3.0)
        })
        .collect();
    PersistenceDiagram::from_pairs(pairs)
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Exhaustive W_q: every partial injection of `x` into `y`; unmatched points
/// on either side pay the distance to their diagonal projection.
pub fn brute_force_wasserstein(x: &[(f64, f64)], y: &[(f64, f64)], q: f64) -> f64 {
    fn go(i: usize, x: &[(f64, f64)], y: &[(f64, f64)], used: &mut Vec<bool>, acc: f64, q: f64, best: &mut f64) {
        if i == x.len() {
            let rest: f64 = y
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(p, _)| ((p.1 - p.0) / 2.0).powf(q))
                .sum();
            *best = best.min(acc + rest);
            return;
        }
        go(i + 1, x, y, used, acc + ((x[i].1 - x[i].0) / 2.0).powf(q), q, best);
        for j in 0..y.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, x, y, used, acc + linf(x[i], y[j]).powf(q), q, best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, x, y, &mut vec![false; y.len()], 0.0, q, &mut best);
    best.powf(1.0 / q)
}

pub fn cycle(n: usize, rng: &mut ChaCha8Rng) -> WeightedGraph {
    WeightedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0 + 0.1 * rng.random::<f64>()))).unwrap()
}

/// Uniform random recursive tree: each new vertex attaches to an earlier one.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> WeightedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let edges: Vec<(usize, usize, f64)> = (1..n)
        .map(|i| {
            let parent = order[rng.random_range(0..i)];
            (order[i], parent, 1.0 + 0.1 * rng.random::<f64>())
        })
        .collect();
    WeightedGraph::new(n, edges).unwrap()
}

pub fn grid(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> WeightedGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1), 1.0 + 0.1 * rng.random::<f64>()));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c), 1.0 + 0.1 * rng.random::<f64>()));
            }
        }
    }
    WeightedGraph::new(rows * cols, edges).unwrap()
}
