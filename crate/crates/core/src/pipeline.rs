//! End-to-end descriptors, the seed-stability experiment, classical MDS and
//! the experiment runner behind the `run` command.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::encoders::{Encoder, ScalarField, WalkConfig};
use crate::error::{Error, Result};
use crate::filtration::lower_star;
use crate::graph::{load_graph, WeightedGraph};
use crate::metrics::{distance_matrix, wasserstein, DistanceMatrix};
use crate::persistence::{zero_persistence, FinitizePolicy, PersistenceDiagram};
use crate::util::{fmt_f64, mix_seed, sha256_hex};

/// Encoder choice plus post-processing of the raw diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorConfig {
    pub encoder: Encoder,
    pub walk: WalkConfig,
    /// `None` keeps essential classes.
    pub finitize: Option<FinitizePolicy>,
}

impl DescriptorConfig {
    pub fn new(encoder: Encoder) -> Self {
        DescriptorConfig {
            encoder,
            walk: WalkConfig::default(),
            finitize: Some(FinitizePolicy::CapAtFmax),
        }
    }
}

fn diagram_of_field(g: &WeightedGraph, f: &ScalarField, finitize: Option<FinitizePolicy>) -> Result<PersistenceDiagram> {
    let d = zero_persistence(&lower_star(g, f)?);
    Ok(match finitize {
        Some(policy) => d.finitize(policy),
        None => d,
    })
}

/// Encoder, lower-star filtration, 0-dim persistence, finitization. Also
/// returns the scalar field the diagram was computed from.
pub fn graph_descriptor_with_field(g: &WeightedGraph, cfg: &DescriptorConfig) -> Result<(PersistenceDiagram, ScalarField)> {
    let f = cfg.encoder.embed(g, &cfg.walk)?;
    Ok((diagram_of_field(g, &f, cfg.finitize)?, f))
}

pub fn graph_descriptor(g: &WeightedGraph, cfg: &DescriptorConfig) -> Result<PersistenceDiagram> {
    Ok(graph_descriptor_with_field(g, cfg)?.0)
}

/// Diagram of the graph-level field restricted to the `hops`-hop ego network of `center`.
pub fn node_descriptor_from_field(
    g: &WeightedGraph,
    f: &ScalarField,
    center: usize,
    hops: usize,
    finitize: Option<FinitizePolicy>,
) -> Result<PersistenceDiagram> {
    f.check_binds(g)?;
    let (sub, remap) = g.ego_network(center, hops)?;
    let restricted = f.restrict(&sub, &remap)?;
    diagram_of_field(&sub, &restricted, finitize)
}

pub fn node_descriptor(g: &WeightedGraph, center: usize, hops: usize, cfg: &DescriptorConfig) -> Result<PersistenceDiagram> {
    g.check_vertex(center)?;
    let f = cfg.encoder.embed(g, &cfg.walk)?;
    node_descriptor_from_field(g, &f, center, hops, cfg.finitize)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityStats {
    pub runs: usize,
    pub pairs: usize,
    pub diagram_mean: f64,
    pub diagram_max: f64,
    pub field_mean: f64,
    pub field_max: f64,
}

fn mean_max(xs: &[f64]) -> (f64, f64) {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    (mean, xs.iter().copied().fold(0.0, f64::max))
}

/// Runs the descriptor once per seed and summarizes pairwise W_q between the
/// diagrams next to pairwise sup-norm distances between the raw fields.
pub fn stability_experiment(g: &WeightedGraph, cfg: &DescriptorConfig, seeds: &[u64], q: f64) -> Result<StabilityStats> {
    if seeds.len() < 2 {
        return Err(Error::Config("stability needs at least two seeds".into()));
    }
    let finitize = cfg.finitize.or(Some(FinitizePolicy::CapAtFmax));
    let runs = seeds
        .par_iter()
        .map(|&seed| {
            let run_cfg = DescriptorConfig {
                walk: cfg.walk.with_seed(seed),
                finitize,
                ..cfg.clone()
            };
            graph_descriptor_with_field(g, &run_cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut diagram_d = Vec::new();
    let mut field_d = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            diagram_d.push(wasserstein(&runs[i].0, &runs[j].0, q)?);
            field_d.push(runs[i].1.sup_distance(&runs[j].1));
        }
    }
    let (diagram_mean, diagram_max) = mean_max(&diagram_d);
    let (field_mean, field_max) = mean_max(&field_d);
    Ok(StabilityStats {
        runs: runs.len(),
        pairs: diagram_d.len(),
        diagram_mean,
        diagram_max,
        field_mean,
        field_max,
    })
}

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 10_000;

fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum()).collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Dominant eigenpair of `a + shift*I` by power iteration from a fixed start
/// vector, returned unshifted.
fn power_iteration(a: &[Vec<f64>], shift: f64) -> (f64, Vec<f64>) {
    let n = a.len();
    // low-discrepancy start, not orthogonal to centered eigenvectors
    let mut x: Vec<f64> = (0..n)
        .map(|i| ((i + 1) as f64 * 0.754_877_666_246_692_7).fract() - 0.5)
        .collect();
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let mut y = mat_vec(a, &x);
        y.iter_mut().zip(&x).for_each(|(yi, xi)| *yi += shift * xi);
        lambda = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let residual = norm(&y.iter().zip(&x).map(|(yi, xi)| yi - lambda * xi).collect::<Vec<_>>());
        let ny = norm(&y);
        if ny == 0.0 {
            return (-shift, x);
        }
        if residual <= POWER_TOL * lambda.abs().max(1.0) {
            break;
        }
        x = y.into_iter().map(|v| v / ny).collect();
    }
    (lambda - shift, x)
}

/// Largest algebraic eigenpair of a symmetric matrix.
fn top_eigenpair(a: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let (lambda, v) = power_iteration(a, 0.0);
    if lambda >= 0.0 {
        return (lambda, v);
    }
    // dominant eigenvalue is negative; shift the spectrum to find the top one
    power_iteration(a, -lambda)
}

/// Classical MDS into `dim` dimensions. Eigenpairs of the double-centered
/// matrix `-1/2 J D² J` come from power iteration with deflation; negative
/// eigenvalues are clamped to zero.
pub fn mds_project(m: &DistanceMatrix, dim: usize) -> Result<Vec<Vec<f64>>> {
    m.validate()?;
    let n = m.len();
    let sq: Vec<Vec<f64>> = m.values.iter().map(|r| r.iter().map(|d| d * d).collect()).collect();
    let row_mean: Vec<f64> = sq.iter().map(|r| r.iter().sum::<f64>() / n as f64).collect();
    let grand = row_mean.iter().sum::<f64>() / n.max(1) as f64;
    let mut b: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| -0.5 * (sq[i][j] - row_mean[i] - row_mean[j] + grand))
                .collect()
        })
        .collect();

    let mut coords = vec![vec![0.0; dim]; n];
    for k in 0..dim {
        if n == 0 {
            break;
        }
        let (lambda, v) = top_eigenpair(&b);
        if lambda <= 0.0 {
            break;
        }
        let scale = lambda.sqrt();
        for i in 0..n {
            coords[i][k] = v[i] * scale;
        }
        for i in 0..n {
            for j in 0..n {
                b[i][j] -= lambda * v[i] * v[j];
            }
        }
    }
    Ok(coords)
}

pub fn projection_to_csv(labels: &[String], coords: &[Vec<f64>]) -> String {
    let dim = coords.first().map_or(2, Vec::len);
    let mut out = String::from("label");
    for k in 0..dim {
        let _ = write!(out, ",x{}", k);
    }
    out.push('\n');
    for (l, c) in labels.iter().zip(coords) {
        out.push_str(l);
        for x in c {
            let _ = write!(out, ",{}", fmt_f64(*x));
        }
        out.push('\n');
    }
    out
}

/// Settings of a `run`, read from a flat `key = value` file.
///
/// ```text
/// input = cat0 meshes/cat0.off     # repeatable: label and path
/// encoder = node2vec
/// walk.walk_length = 40            # any WalkConfig field
/// q = 2
/// finitize = cap
/// seeds = 1, 2, 3
/// k = 2                            # ego hops, used with `node`
/// node = 0                         # optional: node-level descriptors
/// output = out
/// ```
///
/// Relative paths are resolved against the spec file's directory.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub inputs: Vec<(String, PathBuf)>,
    pub encoder: Encoder,
    pub walk: WalkConfig,
    pub k: usize,
    pub node: Option<usize>,
    pub q: f64,
    pub finitize: FinitizePolicy,
    pub seeds: Vec<u64>,
    pub output: PathBuf,
}

impl ExperimentSpec {
    pub fn parse(text: &str, base_dir: &Path) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec {
            inputs: Vec::new(),
            encoder: Encoder::Degree,
            walk: WalkConfig::default(),
            k: 1,
            node: None,
            q: 2.0,
            finitize: FinitizePolicy::CapAtFmax,
            seeds: Vec::new(),
            output: base_dir.join("out"),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Parse { line, msg };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| bad("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("bad number `{}` for {}", v, key)));
            let count = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("bad count `{}` for {}", v, key)));
            match key {
                "input" => {
                    let (label, path) = value
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| bad("expected `input = <label> <path>`".into()))?;
                    spec.inputs.push((label.to_string(), base_dir.join(path.trim())));
                }
                "encoder" => spec.encoder = value.parse()?,
                "k" => spec.k = count(value)?,
                "node" => spec.node = Some(count(value)?),
                "q" => spec.q = num(value)?,
                "finitize" => spec.finitize = value.parse()?,
                "seeds" => {
                    spec.seeds = value
                        .split(',')
                        .map(|s| s.trim().parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad(format!("bad seed list `{}`", value)))?;
                }
                "output" => spec.output = base_dir.join(value),
                "walk.walks_per_node" => spec.walk.walks_per_node = count(value)?,
                "walk.walk_length" => spec.walk.walk_length = count(value)?,
                "walk.window" => spec.walk.window = count(value)?,
                "walk.negatives" => spec.walk.negatives = count(value)?,
                "walk.epochs" => spec.walk.epochs = count(value)?,
                "walk.learning_rate" => spec.walk.learning_rate = num(value)?,
                "walk.p" => spec.walk.p = num(value)?,
                "walk.q" => spec.walk.q = num(value)?,
                "walk.diffusion_size" => spec.walk.diffusion_size = count(value)?,
                other => return Err(bad(format!("unknown key `{}`", other))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::Config("spec lists no inputs".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("spec lists no seeds".into()));
        }
        if !(self.q >= 1.0) {
            return Err(Error::InvalidOrder(self.q));
        }
        self.walk.validate()
    }

    /// Canonical rendering; hashed into the manifest. Input paths are
    /// reduced to file names so the hash does not depend on where the
    /// experiment lives.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (label, path) in &self.inputs {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let _ = writeln!(out, "input = {} {}", label, name);
        }
        let w = &self.walk;
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        let _ = write!(
            out,
            "encoder = {}\nk = {}\nnode = {}\nq = {}\nfinitize = {:?}\nseeds = {}\n\
             walk = {} {} {} {} {} {} {} {} {}\n",
            self.encoder.name(),
            self.k,
            self.node.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
            fmt_f64(self.q),
            self.finitize,
            seeds.join(","),
            w.walks_per_node,
            w.walk_length,
            w.window,
            w.negatives,
            w.epochs,
            fmt_f64(w.learning_rate),
            fmt_f64(w.p),
            fmt_f64(w.q),
            w.diffusion_size
        );
        out
    }
}

/// What happened to each input of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputRecord {
    pub label: String,
    pub input_sha256: Option<String>,
    pub n_vertices: Option<usize>,
    pub n_edges: Option<usize>,
    pub n_points: Option<usize>,
    pub stability: Option<StabilityStats>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub spec_sha256: String,
    pub files: BTreeMap<String, String>,
    pub inputs: Vec<InputRecord>,
    pub failures: usize,
}

impl Manifest {
    /// Hash over the whole manifest; equal across identical runs.
    pub fn checksum(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("manifest serializes").as_bytes())
    }
}

struct InputResult {
    record: InputRecord,
    diagram: Option<PersistenceDiagram>,
}

fn process_input(spec: &ExperimentSpec, label: &str, path: &Path) -> InputResult {
    let mut record = InputRecord {
        label: label.to_string(),
        input_sha256: None,
        n_vertices: None,
        n_edges: None,
        n_points: None,
        stability: None,
        error: None,
    };
    let outcome = (|| -> Result<PersistenceDiagram> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        record.input_sha256 = Some(sha256_hex(&bytes));
        let g = load_graph(path)?;
        record.n_vertices = Some(g.n_vertices());
        record.n_edges = Some(g.n_edges());
        // the stream depends on graph content, not list position, so
        // identical inputs get identical embeddings
        let fp = g.fingerprint();
        let cfg = DescriptorConfig {
            encoder: spec.encoder,
            walk: spec.walk.with_seed(mix_seed(spec.seeds[0], fp, 0)),
            finitize: Some(spec.finitize),
        };
        let diagram = match spec.node {
            Some(w) => node_descriptor(&g, w, spec.k, &cfg)?,
            None => graph_descriptor(&g, &cfg)?,
        };
        if spec.seeds.len() >= 2 {
            let seeds: Vec<u64> = spec.seeds.iter().map(|&s| mix_seed(s, fp, 0)).collect();
            record.stability = Some(stability_experiment(&g, &cfg, &seeds, spec.q)?);
        }
        record.n_points = Some(diagram.len());
        Ok(diagram)
    })();
    match outcome {
        Ok(d) => InputResult {
            record,
            diagram: Some(d),
        },
        Err(e) => {
            log::warn!("input `{}` failed: {}", label, e);
            // keep the manifest independent of where the experiment lives
            let e = match e {
                Error::Io { path, source } => Error::Io {
                    path: path.file_name().map(PathBuf::from).unwrap_or(path),
                    source,
                },
                other => other,
            };
            record.error = Some(e.to_string());
            InputResult {
                record,
                diagram: None,
            }
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str, files: &mut BTreeMap<String, String>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    files.insert(name.to_string(), sha256_hex(contents.as_bytes()));
    Ok(())
}

/// Full pipeline over every input. Per-input failures are recorded in the
/// manifest and the remaining inputs still run. Writes `diagrams.json`,
/// `distances.csv`, `projection.csv`, `stats.json` and `manifest.json`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Manifest> {
    spec.validate()?;
    std::fs::create_dir_all(&spec.output).map_err(|e| Error::io(&spec.output, e))?;

    let results: Vec<InputResult> = spec
        .inputs
        .par_iter()
        .map(|(label, path)| process_input(spec, label, path))
        .collect();

    let mut labels = Vec::new();
    let mut diagrams = Vec::new();
    for r in &results {
        if let Some(d) = &r.diagram {
            labels.push(r.record.label.clone());
            diagrams.push(d.clone());
        }
    }

    let mut diagrams_json = String::from("{\n");
    for (i, (l, d)) in labels.iter().zip(&diagrams).enumerate() {
        let sep = if i + 1 == labels.len() { "" } else { "," };
        let _ = writeln!(diagrams_json, "  {}: {}{}", serde_json::to_string(l)?, d.to_json(), sep);
    }
    diagrams_json.push_str("}\n");

    let matrix = distance_matrix(&labels, &diagrams, spec.q)?;
    let coords = mds_project(&matrix, 2)?;
    let records: Vec<InputRecord> = results.into_iter().map(|r| r.record).collect();

    #[derive(Serialize)]
    struct Stats<'a> {
        encoder: &'a str,
        q: f64,
        inputs: &'a [InputRecord],
    }
    let stats = serde_json::to_string_pretty(&Stats {
        encoder: spec.encoder.name(),
        q: spec.q,
        inputs: &records,
    })? + "\n";

    let mut files = BTreeMap::new();
    write_file(&spec.output, "diagrams.json", &diagrams_json, &mut files)?;
    write_file(&spec.output, "distances.csv", &matrix.to_csv(), &mut files)?;
    write_file(&spec.output, "projection.csv", &projection_to_csv(&labels, &coords), &mut files)?;
    write_file(&spec.output, "stats.json", &stats, &mut files)?;

    let failures = records.iter().filter(|r| r.error.is_some()).count();
    let manifest = Manifest {
        spec_sha256: sha256_hex(spec.canonical_text().as_bytes()),
        files,
        inputs: records,
        failures,
    };
    let path = spec.output.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
