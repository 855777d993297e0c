//! Scalar node encoders: random-walk corpora (DeepWalk, node2vec, Diff2Vec
//! style), one-dimensional skip-gram with negative sampling, and a
//! deterministic degree baseline.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::util::{fmt_f64, mix_seed};

/// Embedding values are kept inside `[-EMBED_CLAMP, EMBED_CLAMP]`.
pub const EMBED_CLAMP: f64 = 50.0;

/// Tie-breaking jitter of the degree encoder.
pub const DEGREE_JITTER: f64 = 1e-9;

/// One real value per vertex, bound to the graph it was computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
    graph_fingerprint: u64,
}

impl ScalarField {
    pub fn new(g: &WeightedGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != g.n_vertices() {
            return Err(Error::FieldLength {
                got: values.len(),
                expected: g.n_vertices(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(ScalarField {
            values,
            graph_fingerprint: g.fingerprint(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn graph_fingerprint(&self) -> u64 {
        self.graph_fingerprint
    }

    pub fn check_binds(&self, g: &WeightedGraph) -> Result<()> {
        let graph = g.fingerprint();
        if graph != self.graph_fingerprint {
            return Err(Error::FingerprintMismatch {
                field: self.graph_fingerprint,
                graph,
            });
        }
        Ok(())
    }

    /// Restriction to a subgraph, given the subgraph's new-to-old id table.
    pub fn restrict(&self, sub: &WeightedGraph, remap: &[usize]) -> Result<ScalarField> {
        let values = remap
            .iter()
            .map(|&v| {
                self.values.get(v).copied().ok_or(Error::VertexOutOfRange {
                    v,
                    n: self.values.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ScalarField::new(sub, values)
    }

    /// `max_v |f(v) - g(v)|`.
    pub fn sup_distance(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex,value\n");
        for (v, x) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", v, fmt_f64(*x));
        }
        out
    }

    /// Reads a `vertex,value` CSV (header optional) and binds it to `g`.
    pub fn from_csv(text: &str, g: &WeightedGraph) -> Result<ScalarField> {
        let mut values = vec![f64::NAN; g.n_vertices()];
        let mut seen = vec![false; g.n_vertices()];
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || (lineno == 1 && line.starts_with("vertex")) {
                continue;
            }
            let bad = |msg: &str| Error::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            let (v, x) = line.split_once(',').ok_or_else(|| bad("expected `vertex,value`"))?;
            let v: usize = v.trim().parse().map_err(|_| bad("bad vertex id"))?;
            let x: f64 = x.trim().parse().map_err(|_| bad("bad value"))?;
            g.check_vertex(v)?;
            if seen[v] {
                return Err(bad("vertex listed twice"));
            }
            seen[v] = true;
            values[v] = x;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Config(format!("field CSV has no value for vertex {}", v)));
        }
        ScalarField::new(g, values)
    }
}

/// Hyperparameters shared by the walk generators and the skip-gram trainer.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// node2vec return parameter.
    pub p: f64,
    /// node2vec in-out parameter.
    pub q: f64,
    pub diffusion_size: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 10,
            walk_length: 40,
            window: 5,
            negatives: 5,
            epochs: 5,
            learning_rate: 0.025,
            seed: 0,
            p: 1.0,
            q: 1.0,
            diffusion_size: 40,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("walks_per_node", self.walks_per_node),
            ("walk_length", self.walk_length),
            ("window", self.window),
            ("negatives", self.negatives),
            ("epochs", self.epochs),
            ("diffusion_size", self.diffusion_size),
        ];
        for (name, c) in counts {
            if c == 0 {
                return Err(Error::Config(format!("{} must be >= 1", name)));
            }
        }
        for (name, x) in [("learning_rate", self.learning_rate), ("p", self.p), ("q", self.q)] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::Config(format!("{} must be > 0, got {}", name, x)));
            }
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> WalkConfig {
        WalkConfig {
            seed,
            ..self.clone()
        }
    }
}

pub type Corpus = Vec<Vec<usize>>;

fn walk_rng(seed: u64, start: usize, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, start as u64 + 1, index as u64))
}

fn non_empty(g: &WeightedGraph) -> Result<()> {
    if g.n_vertices() == 0 {
        Err(Error::EmptyGraph)
    } else {
        Ok(())
    }
}

/// Uniform random walks, `walks_per_node` per start vertex.
pub fn deepwalk_walks(g: &WeightedGraph, cfg: &WalkConfig) -> Result<Corpus> {
    non_empty(g)?;
    cfg.validate()?;
    Ok(seeded_walks(g, cfg, |start, rng| {
        let mut walk = Vec::with_capacity(cfg.walk_length);
        walk.push(start);
        while walk.len() < cfg.walk_length {
            let nbrs = g.neighbors(*walk.last().unwrap());
            if nbrs.is_empty() {
                break;
            }
            walk.push(nbrs[rng.random_range(0..nbrs.len())]);
        }
        walk
    }))
}

fn seeded_walks<F>(g: &WeightedGraph, cfg: &WalkConfig, walk: F) -> Corpus
where
    F: Fn(usize, &mut ChaCha8Rng) -> Vec<usize> + Sync,
{
    let seed = cfg.seed;
    (0..g.n_vertices())
        .into_par_iter()
        .flat_map_iter(|start| (0..cfg.walks_per_node).map(move |i| (start, i)))
        .map(|(start, i)| walk(start, &mut walk_rng(seed, start, i)))
        .collect()
}

/// Second-order walks: coming from `t` into `v`, neighbor `x` of `v` has
/// unnormalized weight `1/p` if `x == t`, `1` if `x` neighbors `t`, else `1/q`.
pub fn node2vec_walks(g: &WeightedGraph, cfg: &WalkConfig) -> Result<Corpus> {
    non_empty(g)?;
    cfg.validate()?;
    let (inv_p, inv_q) = (1.0 / cfg.p, 1.0 / cfg.q);
    Ok(seeded_walks(g, cfg, |start, rng| {
        let mut walk = Vec::with_capacity(cfg.walk_length);
        walk.push(start);
        let mut weights = Vec::new();
        while walk.len() < cfg.walk_length {
            let v = *walk.last().unwrap();
            let nbrs = g.neighbors(v);
            if nbrs.is_empty() {
                break;
            }
            let next = if walk.len() == 1 {
                nbrs[rng.random_range(0..nbrs.len())]
            } else {
                let t = walk[walk.len() - 2];
                weights.clear();
                weights.extend(nbrs.iter().map(|&x| {
                    if x == t {
                        inv_p
                    } else if g.has_edge(t, x) {
                        1.0
                    } else {
                        inv_q
                    }
                }));
                let total: f64 = weights.iter().sum();
                let mut r = rng.random::<f64>() * total;
                let mut pick = nbrs.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    if r < *w {
                        pick = i;
                        break;
                    }
                    r -= w;
                }
                nbrs[pick]
            };
            walk.push(next);
        }
        walk
    }))
}

/// Random diffusion tree rooted at `start` with up to `size` vertices.
/// Returns parent links as `(child, parent)` in attachment order.
fn diffusion_tree(g: &WeightedGraph, start: usize, size: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut in_tree = vec![false; g.n_vertices()];
    in_tree[start] = true;
    let mut members = vec![start];
    let mut links = Vec::new();
    let mut outside = Vec::new();
    while members.len() < size {
        let frontier: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&m| g.neighbors(m).iter().any(|&x| !in_tree[x]))
            .collect();
        if frontier.is_empty() {
            break;
        }
        let from = frontier[rng.random_range(0..frontier.len())];
        outside.clear();
        outside.extend(g.neighbors(from).iter().copied().filter(|&x| !in_tree[x]));
        let to = outside[rng.random_range(0..outside.len())];
        in_tree[to] = true;
        members.push(to);
        links.push((to, from));
    }
    links
}

fn euler_tour(root: usize, links: &[(usize, usize)]) -> Vec<usize> {
    let mut children: std::collections::HashMap<usize, Vec<usize>> = Default::default();
    for &(child, parent) in links {
        children.entry(parent).or_default().push(child);
    }
    let mut tour = vec![root];
    // (vertex, next child index)
    let mut stack = vec![(root, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        let kids = children.get(&v).map(Vec::as_slice).unwrap_or(&[]);
        if next < kids.len() {
            top.1 += 1;
            tour.push(kids[next]);
            stack.push((kids[next], 0));
        } else {
            stack.pop();
            if let Some(&(parent, _)) = stack.last() {
                tour.push(parent);
            }
        }
    }
    tour
}

/// One diffusion tree per start vertex, emitted as its Euler tour.
pub fn diff2vec_sequences(g: &WeightedGraph, cfg: &WalkConfig) -> Result<Corpus> {
    non_empty(g)?;
    cfg.validate()?;
    let seed = cfg.seed;
    Ok((0..g.n_vertices())
        .into_par_iter()
        .map(|start| {
            let mut rng = walk_rng(seed, start, 0);
            let links = diffusion_tree(g, start, cfg.diffusion_size, &mut rng);
            euler_tour(start, &links)
        })
        .collect())
}

/// `value(v) = degree(v) + v * 1e-9`.
pub fn degree_encoder(g: &WeightedGraph) -> ScalarField {
    let values = (0..g.n_vertices())
        .map(|v| g.degree(v) as f64 + v as f64 * DEGREE_JITTER)
        .collect();
    ScalarField::new(g, values).expect("degree values are finite")
}

pub fn corpus_to_string(corpus: &Corpus) -> String {
    let mut out = String::new();
    for walk in corpus {
        let line: Vec<String> = walk.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// A positive (center, context) pair with its sampled negatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SgnsSample {
    pub center: usize,
    pub context: usize,
    pub negatives: Vec<usize>,
}

fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `sum log s(z_u z_v) + sum_n log s(-z_u z_n)` over the samples.
pub fn sgns_objective(z: &[f64], samples: &[SgnsSample]) -> f64 {
    samples
        .iter()
        .map(|s| {
            let zu = z[s.center];
            log_sigmoid(zu * z[s.context])
                + s.negatives
                    .iter()
                    .map(|&n| log_sigmoid(-zu * z[n]))
                    .sum::<f64>()
        })
        .sum()
}

/// Adds the gradient of one sample's objective term into `grad`.
fn accumulate_sample_gradient(z: &[f64], s: &SgnsSample, grad: &mut [f64]) {
    let zu = z[s.center];
    let zv = z[s.context];
    let pos = 1.0 - sigmoid(zu * zv);
    grad[s.center] += pos * zv;
    grad[s.context] += pos * zu;
    for &n in &s.negatives {
        let neg = sigmoid(zu * z[n]);
        grad[s.center] -= neg * z[n];
        grad[n] -= neg * zu;
    }
}

/// Analytic gradient of [`sgns_objective`].
pub fn sgns_gradient(z: &[f64], samples: &[SgnsSample]) -> Vec<f64> {
    let mut grad = vec![0.0; z.len()];
    for s in samples {
        accumulate_sample_gradient(z, s, &mut grad);
    }
    grad
}

/// Noise distribution over vertices: corpus unigram counts raised to 0.75.
struct NoiseTable {
    dist: WeightedIndex<f64>,
}

impl NoiseTable {
    fn new(counts: &[u64]) -> Self {
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(0.75)).collect();
        NoiseTable {
            dist: WeightedIndex::new(weights).expect("corpus is non-empty"),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        self.dist.sample(rng)
    }
}

/// Enumerates (center, context) pairs of the corpus in order, drawing fresh
/// negatives for each. Negatives equal to the context are skipped.
fn for_each_sample<F>(corpus: &Corpus, cfg: &WalkConfig, noise: &NoiseTable, rng: &mut ChaCha8Rng, mut f: F)
where
    F: FnMut(&SgnsSample),
{
    let mut sample = SgnsSample {
        center: 0,
        context: 0,
        negatives: Vec::with_capacity(cfg.negatives),
    };
    for seq in corpus {
        for (i, &center) in seq.iter().enumerate() {
            let lo = i.saturating_sub(cfg.window);
            let hi = (i + cfg.window + 1).min(seq.len());
            for (j, &context) in seq.iter().enumerate().take(hi).skip(lo) {
                if j == i {
                    continue;
                }
                sample.center = center;
                sample.context = context;
                sample.negatives.clear();
                for _ in 0..cfg.negatives {
                    let n = noise.draw(rng);
                    if n != context {
                        sample.negatives.push(n);
                    }
                }
                f(&sample);
            }
        }
    }
}

fn count_pairs(corpus: &Corpus, window: usize) -> usize {
    corpus
        .iter()
        .map(|seq| {
            (0..seq.len())
                .map(|i| {
                    let lo = i.saturating_sub(window);
                    let hi = (i + window + 1).min(seq.len());
                    hi - lo - 1
                })
                .sum::<usize>()
        })
        .sum()
}

/// Result of 1-d skip-gram training.
#[derive(Debug, Clone)]
pub struct SgnsModel {
    pub values: Vec<f64>,
    /// Objective on a fixed evaluation sample set: before training, then after each epoch.
    pub objective_trace: Vec<f64>,
    /// Vertices absent from the corpus; they keep their initial value.
    pub unobserved: Vec<usize>,
    /// Fixed evaluation samples used for `objective_trace`.
    pub eval_samples: Vec<SgnsSample>,
}

impl SgnsModel {
    pub fn into_field(self, g: &WeightedGraph) -> Result<ScalarField> {
        ScalarField::new(g, self.values)
    }
}

/// Skip-gram with negative sampling, one dimension, plain SGD with a linearly
/// decaying learning rate. Single-threaded so the result depends only on the
/// inputs and `cfg.seed`.
pub fn train_sgns_1d(corpus: &Corpus, n_vertices: usize, cfg: &WalkConfig) -> Result<SgnsModel> {
    cfg.validate()?;
    if corpus.iter().all(|s| s.is_empty()) {
        return Err(Error::EmptyCorpus);
    }
    let mut counts = vec![0u64; n_vertices];
    for &v in corpus.iter().flatten() {
        if v >= n_vertices {
            return Err(Error::VertexOutOfRange { v, n: n_vertices });
        }
        counts[v] += 1;
    }
    let unobserved: Vec<usize> = (0..n_vertices).filter(|&v| counts[v] == 0).collect();
    if !unobserved.is_empty() {
        log::warn!(
            "{} vertices never appear in the corpus; they keep their initial embedding",
            unobserved.len()
        );
    }
    let noise = NoiseTable::new(&counts);

    let mut init_rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 0, 1));
    let mut z: Vec<f64> = (0..n_vertices)
        .map(|_| init_rng.random::<f64>() - 0.5)
        .collect();

    let mut eval_rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 0, 2));
    let mut eval_samples = Vec::new();
    for_each_sample(corpus, cfg, &noise, &mut eval_rng, |s| eval_samples.push(s.clone()));

    let total_steps = (count_pairs(corpus, cfg.window) * cfg.epochs).max(1) as f64;
    let min_lr = cfg.learning_rate * 1e-4;
    let mut step = 0usize;
    let mut trace = vec![sgns_objective(&z, &eval_samples)];
    let mut train_rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 0, 3));
    let mut grad = vec![0.0; n_vertices];
    for _ in 0..cfg.epochs {
        for_each_sample(corpus, cfg, &noise, &mut train_rng, |s| {
            let lr = (cfg.learning_rate * (1.0 - step as f64 / total_steps)).max(min_lr);
            step += 1;
            accumulate_sample_gradient(&z, s, &mut grad);
            for v in std::iter::once(s.center)
                .chain(std::iter::once(s.context))
                .chain(s.negatives.iter().copied())
            {
                if grad[v] != 0.0 {
                    z[v] = (z[v] + lr * grad[v]).clamp(-EMBED_CLAMP, EMBED_CLAMP);
                    grad[v] = 0.0;
                }
            }
        });
        trace.push(sgns_objective(&z, &eval_samples));
    }
    Ok(SgnsModel {
        values: z,
        objective_trace: trace,
        unobserved,
        eval_samples,
    })
}

/// Which scalar encoder produces the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoder {
    DeepWalk,
    Node2Vec,
    Diff2Vec,
    Degree,
}

impl Encoder {
    pub fn is_stochastic(self) -> bool {
        self != Encoder::Degree
    }

    pub fn name(self) -> &'static str {
        match self {
            Encoder::DeepWalk => "deepwalk",
            Encoder::Node2Vec => "node2vec",
            Encoder::Diff2Vec => "diff2vec",
            Encoder::Degree => "degree",
        }
    }

    pub fn corpus(self, g: &WeightedGraph, cfg: &WalkConfig) -> Result<Option<Corpus>> {
        Ok(match self {
            Encoder::DeepWalk => Some(deepwalk_walks(g, cfg)?),
            Encoder::Node2Vec => Some(node2vec_walks(g, cfg)?),
            Encoder::Diff2Vec => Some(diff2vec_sequences(g, cfg)?),
            Encoder::Degree => None,
        })
    }

    pub fn embed(self, g: &WeightedGraph, cfg: &WalkConfig) -> Result<ScalarField> {
        match self.corpus(g, cfg)? {
            Some(corpus) => train_sgns_1d(&corpus, g.n_vertices(), cfg)?.into_field(g),
            None => Ok(degree_encoder(g)),
        }
    }
}

impl FromStr for Encoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "deepwalk" => Ok(Encoder::DeepWalk),
            "node2vec" => Ok(Encoder::Node2Vec),
            "diff2vec" => Ok(Encoder::Diff2Vec),
            "degree" => Ok(Encoder::Degree),
            other => Err(Error::Config(format!("unknown encoder `{}`", other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    fn star(leaves: usize) -> WeightedGraph {
        WeightedGraph::new(leaves + 1, (1..=leaves).map(|i| (0, i, 1.0))).unwrap()
    }

    fn small_cfg() -> WalkConfig {
        WalkConfig {
            walks_per_node: 4,
            walk_length: 8,
            seed: 11,
            ..WalkConfig::default()
        }
    }

    #[test]
    fn degree_encoder_examples() {
        let f = degree_encoder(&path3());
        assert_eq!(f.values()[0], 1.0);
        assert!((f.values()[1] - 2.0).abs() < 1e-8);
        assert!((f.values()[2] - 1.0).abs() < 1e-8);
        assert!(f.values()[2] > f.values()[0]);

        let mut e = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                e.push((i, j, 1.0));
            }
        }
        let k4 = WeightedGraph::new(4, e).unwrap();
        let f = degree_encoder(&k4);
        assert!(f.values().windows(2).all(|w| w[0] < w[1]));
        assert!(f.values().iter().all(|v| (v - 3.0).abs() < 1e-8));

        let iso = WeightedGraph::empty(1);
        assert_eq!(degree_encoder(&iso).values(), &[0.0]);
    }

    #[test]
    fn scalar_field_validation() {
        let g = path3();
        assert!(matches!(
            ScalarField::new(&g, vec![0.0, 1.0]),
            Err(Error::FieldLength { got: 2, expected: 3 })
        ));
        assert!(matches!(
            ScalarField::new(&g, vec![0.0, f64::NAN, 1.0]),
            Err(Error::NonFinite { index: 1 })
        ));
        let f = ScalarField::new(&g, vec![0.0, 2.0, 1.0]).unwrap();
        assert!(f.check_binds(&g).is_ok());
        assert!(f.check_binds(&star(2)).is_err());
    }

    #[test]
    fn field_csv_round_trip() {
        let g = path3();
        let f = ScalarField::new(&g, vec![0.1, -2.0, 1.0 / 3.0]).unwrap();
        assert_eq!(ScalarField::from_csv(&f.to_csv(), &g).unwrap(), f);
        assert!(ScalarField::from_csv("vertex,value\n0,1\n1,2\n", &g).is_err());
    }

    #[test]
    fn single_edge_walks_alternate() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let cfg = WalkConfig {
            walk_length: 4,
            ..small_cfg()
        };
        for corpus in [deepwalk_walks(&g, &cfg).unwrap(), node2vec_walks(&g, &cfg).unwrap()] {
            assert_eq!(corpus.len(), 2 * cfg.walks_per_node);
            for w in corpus {
                assert!(w == vec![0, 1, 0, 1] || w == vec![1, 0, 1, 0]);
            }
        }
    }

    #[test]
    fn walks_stop_at_isolated_vertex() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        let corpus = deepwalk_walks(&g, &small_cfg()).unwrap();
        assert!(corpus.iter().filter(|w| w[0] == 2).all(|w| w == &vec![2]));
    }

    #[test]
    fn walks_are_deterministic() {
        let g = star(5);
        let cfg = small_cfg();
        assert_eq!(deepwalk_walks(&g, &cfg).unwrap(), deepwalk_walks(&g, &cfg).unwrap());
        assert_eq!(node2vec_walks(&g, &cfg).unwrap(), node2vec_walks(&g, &cfg).unwrap());
        assert_eq!(
            diff2vec_sequences(&g, &cfg).unwrap(),
            diff2vec_sequences(&g, &cfg).unwrap()
        );
        assert_ne!(
            deepwalk_walks(&g, &cfg).unwrap(),
            deepwalk_walks(&g, &cfg.with_seed(12)).unwrap()
        );
    }

    #[test]
    fn diff2vec_degenerate_size() {
        let cfg = WalkConfig {
            diffusion_size: 1,
            ..small_cfg()
        };
        let corpus = diff2vec_sequences(&star(4), &cfg).unwrap();
        for (v, seq) in corpus.iter().enumerate() {
            assert_eq!(seq, &vec![v]);
        }
    }

    #[test]
    fn diff2vec_star_center() {
        let cfg = WalkConfig {
            diffusion_size: 3,
            ..small_cfg()
        };
        let corpus = diff2vec_sequences(&star(6), &cfg).unwrap();
        let tour = &corpus[0];
        assert_eq!(tour.len(), 5);
        assert_eq!(tour[0], 0);
        assert_eq!(tour[2], 0);
        assert_eq!(tour[4], 0);
        assert_ne!(tour[1], tour[3]);
    }

    #[test]
    fn diff2vec_capped_by_component() {
        let g = WeightedGraph::new(5, [(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0)]).unwrap();
        let corpus = diff2vec_sequences(&g, &small_cfg()).unwrap();
        for (start, tour) in corpus.iter().enumerate() {
            let mut distinct = tour.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let expected = if start < 3 { 3 } else { 2 };
            assert_eq!(distinct.len(), expected);
            assert_eq!(tour.len(), 2 * expected - 1);
        }
    }

    #[test]
    fn euler_tour_shape() {
        // 0 -> {1, 2}, 1 -> {3}
        let tour = euler_tour(0, &[(1, 0), (2, 0), (3, 1)]);
        assert_eq!(tour, vec![0, 1, 3, 1, 0, 2, 0]);
    }

    #[test]
    fn sgns_rejects_empty_corpus() {
        assert!(matches!(
            train_sgns_1d(&vec![], 3, &small_cfg()),
            Err(Error::EmptyCorpus)
        ));
        assert!(matches!(
            train_sgns_1d(&vec![vec![0, 7]], 3, &small_cfg()),
            Err(Error::VertexOutOfRange { v: 7, .. })
        ));
    }

    #[test]
    fn sgns_unobserved_vertices_reported() {
        let model = train_sgns_1d(&vec![vec![0, 1, 0, 1]], 3, &small_cfg()).unwrap();
        assert_eq!(model.unobserved, vec![2]);
        assert!(model.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn sgns_is_deterministic_and_bounded() {
        let g = star(6);
        let cfg = small_cfg();
        let a = Encoder::DeepWalk.embed(&g, &cfg).unwrap();
        let b = Encoder::DeepWalk.embed(&g, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.values().iter().all(|v| v.abs() <= EMBED_CLAMP));
        assert!(a.check_binds(&g).is_ok());
    }

    #[test]
    fn sgns_clamps_with_huge_learning_rate() {
        let g = star(4);
        let cfg = WalkConfig {
            learning_rate: 1e6,
            ..small_cfg()
        };
        let f = Encoder::Node2Vec.embed(&g, &cfg).unwrap();
        assert!(f.values().iter().all(|v| v.is_finite() && v.abs() <= EMBED_CLAMP));
    }

    #[test]
    fn config_validation() {
        assert!(WalkConfig::default().validate().is_ok());
        assert!(WalkConfig { p: 0.0, ..WalkConfig::default() }.validate().is_err());
        assert!(WalkConfig { window: 0, ..WalkConfig::default() }.validate().is_err());
        assert!("Node2Vec".parse::<Encoder>().is_ok());
        assert!("word2vec".parse::<Encoder>().is_err());
    }
}
