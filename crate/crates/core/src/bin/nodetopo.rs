use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nodetopo::encoders::corpus_to_string;
use nodetopo::pipeline::{node_descriptor_from_field, projection_to_csv};
use nodetopo::vectorize::{vectorize, ImageParams, Scheme, VectorizeGrid, VectorizeParams};
use nodetopo::{
    distance_matrix, load_graph, lower_star, mds_project, run_experiment, stability_experiment, zero_persistence,
    DescriptorConfig, DistanceMatrix, Encoder, Error, ExperimentSpec, FinitizePolicy, PersistenceDiagram, Result,
    ScalarField, WalkConfig, WeightedGraph,
};

#[derive(Parser)]
#[command(name = "nodetopo", version, about = "Persistence descriptors of graphs from node embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a graph (edge list or .off mesh) and print it in canonical edge-list form.
    Ingest {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute a scalar field on the vertices.
    Embed {
        graph: PathBuf,
        #[command(flatten)]
        enc: EncoderArgs,
        /// Also write the walk corpus here.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Zero-dimensional persistence diagram of the lower-star filtration.
    Diagram {
        graph: PathBuf,
        /// Use a precomputed `vertex,value` field instead of running an encoder.
        #[arg(long)]
        field: Option<PathBuf>,
        #[command(flatten)]
        enc: EncoderArgs,
        /// Node-level descriptor: restrict to the ego network of this vertex.
        #[arg(long)]
        node: Option<usize>,
        /// Ego network radius in hops.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Finitize essential points before writing (cap or drop).
        #[arg(long)]
        finitize: Option<FinitizePolicy>,
        /// Also write the filtration order here.
        #[arg(long)]
        filtration: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pairwise Wasserstein distances between diagram files.
    Dist {
        #[arg(required = true)]
        diagrams: Vec<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value = "cap")]
        finitize: FinitizePolicy,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn diagram files into fixed-length feature rows.
    Vectorize {
        #[arg(required = true)]
        diagrams: Vec<PathBuf>,
        #[arg(long)]
        scheme: Scheme,
        #[arg(long, default_value = "cap")]
        finitize: FinitizePolicy,
        /// Sample count for betti and landscape.
        #[arg(long, default_value_t = 50)]
        resolution: usize,
        /// Sampling range; defaults to the span of all inputs.
        #[arg(long, requires = "t_max", allow_hyphen_values = true)]
        t_min: Option<f64>,
        #[arg(long, requires = "t_min", allow_hyphen_values = true)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 20)]
        nx: usize,
        #[arg(long, default_value_t = 20)]
        ny: usize,
        /// Gaussian width; defaults to a tenth of the image extent.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classical MDS of a distance-matrix CSV.
    Project {
        matrix: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-embed with several seeds and compare diagrams and fields.
    Stability {
        graph: PathBuf,
        #[command(flatten)]
        enc: EncoderArgs,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value = "cap")]
        finitize: FinitizePolicy,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Execute an experiment spec file.
    Run { spec: PathBuf },
}

#[derive(Args)]
struct EncoderArgs {
    #[arg(long, default_value = "degree")]
    encoder: Encoder,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    walks_per_node: Option<usize>,
    #[arg(long)]
    walk_length: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    negatives: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    /// node2vec return parameter.
    #[arg(long)]
    p: Option<f64>,
    /// node2vec in-out parameter for `embed`, `diagram` and `stability`.
    #[arg(long = "walk-q")]
    walk_q: Option<f64>,
    #[arg(long)]
    diffusion_size: Option<usize>,
}

impl EncoderArgs {
    fn walk(&self) -> Result<WalkConfig> {
        let d = WalkConfig::default();
        let cfg = WalkConfig {
            walks_per_node: self.walks_per_node.unwrap_or(d.walks_per_node),
            walk_length: self.walk_length.unwrap_or(d.walk_length),
            window: self.window.unwrap_or(d.window),
            negatives: self.negatives.unwrap_or(d.negatives),
            epochs: self.epochs.unwrap_or(d.epochs),
            learning_rate: self.learning_rate.unwrap_or(d.learning_rate),
            seed: self.seed,
            p: self.p.unwrap_or(d.p),
            q: self.walk_q.unwrap_or(d.q),
            diffusion_size: self.diffusion_size.unwrap_or(d.diffusion_size),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn descriptor(&self, finitize: Option<FinitizePolicy>) -> Result<DescriptorConfig> {
        Ok(DescriptorConfig {
            encoder: self.encoder,
            walk: self.walk()?,
            finitize,
        })
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn label_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn load_diagrams(paths: &[PathBuf], policy: FinitizePolicy) -> Result<(Vec<String>, Vec<PersistenceDiagram>)> {
    let mut labels = Vec::new();
    let mut diagrams = Vec::new();
    for p in paths {
        labels.push(label_of(p));
        diagrams.push(PersistenceDiagram::from_json(&read(p)?)?.finitize(policy));
    }
    Ok((labels, diagrams))
}

fn field_for(g: &WeightedGraph, field: Option<&Path>, enc: &EncoderArgs) -> Result<ScalarField> {
    match field {
        Some(path) => ScalarField::from_csv(&read(path)?, g),
        None => enc.encoder.embed(g, &enc.walk()?),
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ingest { input, output } => {
            let g = load_graph(&input)?;
            eprintln!(
                "{}: {} vertices, {} edges, {} components",
                input.display(),
                g.n_vertices(),
                g.n_edges(),
                g.connected_components().len()
            );
            emit(output.as_deref(), &g.to_edge_list_string())
        }
        Command::Embed {
            graph,
            enc,
            corpus,
            output,
        } => {
            let g = load_graph(&graph)?;
            let cfg = enc.walk()?;
            if let Some(path) = corpus {
                let walks = enc
                    .encoder
                    .corpus(&g, &cfg)?
                    .ok_or_else(|| Error::Config(format!("encoder `{}` has no corpus", enc.encoder.name())))?;
                emit(Some(&path), &corpus_to_string(&walks))?;
            }
            emit(output.as_deref(), &enc.encoder.embed(&g, &cfg)?.to_csv())
        }
        Command::Diagram {
            graph,
            field,
            enc,
            node,
            k,
            finitize,
            filtration,
            output,
        } => {
            let g = load_graph(&graph)?;
            let f = field_for(&g, field.as_deref(), &enc)?;
            if let Some(path) = filtration {
                emit(Some(&path), &lower_star(&g, &f)?.dump())?;
            }
            let d = match node {
                Some(w) => node_descriptor_from_field(&g, &f, w, k, finitize)?,
                None => {
                    let d = zero_persistence(&lower_star(&g, &f)?);
                    finitize.map_or(d.clone(), |p| d.finitize(p))
                }
            };
            emit(output.as_deref(), &(d.to_json() + "\n"))
        }
        Command::Dist {
            diagrams,
            q,
            finitize,
            output,
        } => {
            let (labels, ds) = load_diagrams(&diagrams, finitize)?;
            emit(output.as_deref(), &distance_matrix(&labels, &ds, q)?.to_csv())
        }
        Command::Vectorize {
            diagrams,
            scheme,
            finitize,
            resolution,
            t_min,
            t_max,
            levels,
            nx,
            ny,
            sigma,
            output,
        } => {
            let (labels, ds) = load_diagrams(&diagrams, finitize)?;
            let grid = match (t_min, t_max) {
                (Some(lo), Some(hi)) => VectorizeGrid::new(lo, hi, resolution)?,
                _ => VectorizeGrid::covering(&ds, resolution)?,
            };
            let params = match scheme {
                Scheme::Betti => VectorizeParams::Betti(grid),
                Scheme::Landscape => VectorizeParams::Landscape { levels, grid },
                Scheme::Image => {
                    let max_p = ds
                        .iter()
                        .flat_map(|d| d.finite.iter().map(|(b, dd)| dd - b))
                        .fold(0.0, f64::max);
                    let y_max = if max_p > 0.0 { max_p } else { 1.0 };
                    let extent = (grid.t_max - grid.t_min).max(y_max);
                    VectorizeParams::Image(ImageParams {
                        nx,
                        ny,
                        sigma: sigma.unwrap_or(extent / 10.0),
                        x_min: grid.t_min,
                        x_max: grid.t_max,
                        y_min: 0.0,
                        y_max,
                        max_persistence: Some(y_max),
                    })
                }
            };
            let mut text = String::new();
            for (label, d) in labels.iter().zip(&ds) {
                text += &vectorize(d, &params)?.to_csv_row(label);
                text.push('\n');
            }
            emit(output.as_deref(), &text)
        }
        Command::Project { matrix, dim, output } => {
            let m = DistanceMatrix::from_csv(&read(&matrix)?)?;
            let coords = mds_project(&m, dim)?;
            emit(output.as_deref(), &projection_to_csv(&m.labels, &coords))
        }
        Command::Stability {
            graph,
            enc,
            runs,
            q,
            finitize,
            output,
        } => {
            let g = load_graph(&graph)?;
            let cfg = enc.descriptor(Some(finitize))?;
            let seeds: Vec<u64> = (0..runs as u64).map(|i| enc.seed + i).collect();
            let stats = stability_experiment(&g, &cfg, &seeds, q)?;
            emit(output.as_deref(), &(serde_json::to_string_pretty(&stats)? + "\n"))
        }
        Command::Run { spec } => {
            let spec = ExperimentSpec::load(&spec)?;
            let manifest = run_experiment(&spec)?;
            for rec in manifest.inputs.iter().filter(|r| r.error.is_some()) {
                eprintln!("{}: {}", rec.label, rec.error.as_deref().unwrap_or_default());
            }
            println!("{}", manifest.checksum());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap reports usage errors with 2, which is reserved for numeric failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
