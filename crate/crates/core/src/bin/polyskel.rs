use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyskel::adjacency::{averaging_certificate_search, build_graph, edge_status, BuildOptions, Method};
use polyskel::analytics::{count_averaging_tuples, ThresholdConstants};
use polyskel::harness::{self, ExactClassifier, Metric, SweepConfig, VerifyConfig};
use polyskel::hypercube::Interval;
use polyskel::metrics::MetricsReport;
use polyskel::{sample_with_rate, Error, Point, RateSpec, VertexSet};

/// Random 0/1 polytopes: sampling, exact 1-skeletons and threshold sweeps.
#[derive(Parser)]
#[command(name = "polyskel", version)]
struct Cli {
    /// Base seed for sampling and pair selection.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Adjacency method: auto, lp, oracle-full, oracle-hyperplane.
    #[arg(long, global = true, default_value = "auto")]
    method: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Vertex set file (`n=<int>` then one hex point per line).
    #[arg(long, conflicts_with_all = ["n", "rate"])]
    input: Option<PathBuf>,
    /// Dimension of a freshly sampled set.
    #[arg(long, requires = "rate")]
    n: Option<u32>,
    /// Rate schedule, e.g. `pow2:c=0.6`, `explicit:p=0.5`, `half:eps=-0.1`, `delta:eps=+0.03`.
    #[arg(long, requires = "n")]
    rate: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a vertex set and write it in the vertex set file format.
    Sample {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        rate: String,
    },
    /// Classify all pairs and write the graph JSON.
    Graph {
        #[command(flatten)]
        source: Source,
        /// Classify only this many random pairs.
        #[arg(long)]
        pair_budget: Option<u64>,
        /// Store certificates of non-edges in the JSON.
        #[arg(long, default_value_t = false)]
        certificates: bool,
    },
    /// Decide one pair and print its certificate.
    Pair {
        #[command(flatten)]
        source: Source,
        /// First endpoint as a binary string, coordinate 1 first.
        #[arg(long)]
        x: String,
        /// Second endpoint as a binary string, coordinate 1 first.
        #[arg(long)]
        y: String,
        /// Also search for an averaging tuple with k up to this value.
        #[arg(long)]
        k_max: Option<u32>,
    },
    /// Build the graph and print its metrics as JSON.
    Metrics {
        #[command(flatten)]
        source: Source,
        /// Compute the exact edge expansion (at most 24 vertices).
        #[arg(long, default_value_t = false)]
        expansion: bool,
    },
    /// Run a parameter sweep and write the CSV.
    Sweep {
        /// Dimensions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Rate schedules; repeat the flag for several.
        #[arg(long, required = true)]
        rate: Vec<String>,
        #[arg(long, default_value_t = 10)]
        trials: u32,
        /// density, density_sampled[:budget], min_degree, clique, expansion, quadruples.
        #[arg(long, value_delimiter = ',', default_value = "density,clique")]
        metrics: Vec<String>,
        /// Run trials one after another.
        #[arg(long, default_value_t = false)]
        serial: bool,
        /// Never fall back to pair sampling for density.
        #[arg(long, default_value_t = false)]
        no_auto_sample: bool,
    },
    /// Cross-check all adjacency methods on random small instances.
    Verify {
        #[arg(long, default_value_t = 3)]
        n_min: u32,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        /// Inclusion probabilities, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,0.8")]
        p: Vec<f64>,
        /// Use the full cube for each n instead of random sets.
        #[arg(long, default_value_t = false)]
        full_cube: bool,
    },
    /// Print the threshold constants.
    Delta,
    /// Count ordered 2k-tuples averaging to the midpoint of x and y.
    CountTuples {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        k: u32,
        /// Points to draw from (default: the whole box of x and y); points outside the box are ignored.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        exclude_endpoints: bool,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
    Disagreement(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(msg) => Failure::Runtime(msg),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}

fn load(source: &Source, seed: u64) -> Result<VertexSet, Failure> {
    match (&source.input, source.n, &source.rate) {
        (Some(path), _, _) => Ok(VertexSet::read_file(path)?),
        (None, Some(n), Some(rate)) => Ok(sample_with_rate(n, &RateSpec::parse(rate)?, seed)?),
        _ => Err(Failure::Config("give --input or both --n and --rate".into())),
    }
}

fn point(s: &str, q_dim: Option<u32>) -> Result<Point, Failure> {
    let p = Point::parse_binary(s)?;
    match q_dim {
        Some(n) if n != p.dim() => Err(Error::DimensionMismatch { left: p.dim(), right: n }.into()),
        _ => Ok(p),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let method = Method::parse(&cli.method)?;
    match cli.command {
        Command::Sample { n, rate } => {
            let q = sample_with_rate(n, &RateSpec::parse(&rate)?, cli.seed)?;
            emit(&cli.out, &q.to_text())
        }
        Command::Graph {
            source,
            pair_budget,
            certificates,
        } => {
            let q = load(&source, cli.seed)?;
            let opts = BuildOptions {
                method,
                pair_budget,
                keep_certificates: certificates,
                sample_seed: cli.seed,
                parallel: true,
            };
            let mut buf = Vec::new();
            harness::emit_graph_json(&build_graph(&q, &opts), &mut buf)?;
            emit(&cli.out, &String::from_utf8_lossy(&buf))
        }
        Command::Pair { source, x, y, k_max } => {
            let q = load(&source, cli.seed)?;
            let (x, y) = (point(&x, Some(q.dim()))?, point(&y, Some(q.dim()))?);
            let status = edge_status(&q, &x, &y, method)?;
            let mut report = serde_json::json!({
                "x": x.to_hex(),
                "y": y.to_hex(),
                "method": method.name(),
                "verdict": if status.is_edge() { "edge" } else { "non_edge" },
                "certificate": status.certificate.to_json(),
                "replays": status.replays(&q, &x, &y),
            });
            if let Some(k) = k_max {
                report["averaging_tuple"] = match averaging_certificate_search(&q, &x, &y, k) {
                    Ok(Some(t)) => polyskel::Certificate::AveragingTuple(t).to_json(),
                    Ok(None) => serde_json::Value::Null,
                    Err(e) => serde_json::json!({ "error": e.to_string() }),
                };
            }
            emit(&cli.out, &format!("{report:#}\n"))
        }
        Command::Metrics { source, expansion } => {
            let q = load(&source, cli.seed)?;
            let g = build_graph(&q, &BuildOptions::with_method(method));
            let report = MetricsReport::compute(&g, expansion);
            emit(&cli.out, &format!("{:#}\n", report.to_json()))
        }
        Command::Sweep {
            n,
            rate,
            trials,
            metrics,
            serial,
            no_auto_sample,
        } => {
            let rates = rate.iter().map(|r| RateSpec::parse(r)).collect::<Result<Vec<_>, _>>()?;
            let metrics = metrics.iter().map(|m| Metric::parse(m)).collect::<Result<Vec<_>, _>>()?;
            let mut cfg = SweepConfig::new(n, rates, trials, cli.seed, metrics);
            cfg.method = method;
            cfg.parallel = !serial;
            if no_auto_sample {
                cfg.auto_sample_pairs = None;
            }
            for w in cfg.validate()? {
                eprintln!("warning: {w}");
            }
            let records = harness::run_sweep(&cfg)?;
            emit(&cli.out, &harness::csv_string(&records))
        }
        Command::Verify {
            n_min,
            n_max,
            trials,
            p,
            full_cube,
        } => {
            let cfg = VerifyConfig {
                n_min,
                n_max,
                rates: p,
                trials,
                seed: cli.seed,
                force_full_cube: full_cube,
            };
            let report = harness::run_verify(&cfg, &ExactClassifier)?;
            let mut text = report.summary() + "\n";
            for d in &report.disagreements {
                text += &d.dump();
            }
            emit(&cli.out, &text)?;
            if report.ok() {
                Ok(())
            } else {
                Err(Failure::Disagreement(format!("{} disagreements", report.disagreements.len())))
            }
        }
        Command::Delta => {
            let c = ThresholdConstants::compute();
            let text = format!(
                "delta_star {:.12}\nf_max_arg {:.12}\nf_max {:.12}\nweak_exponent {:.12}\n",
                c.delta_star, c.f_max_arg, c.f_max, c.weak_exponent
            );
            emit(&cli.out, &text)
        }
        Command::CountTuples {
            x,
            y,
            k,
            input,
            exclude_endpoints,
        } => {
            let (x, y) = (point(&x, None)?, point(&y, None)?);
            let interval = Interval::spanned_by(&x, &y)?;
            let pool: Vec<Point> = match input {
                Some(path) => {
                    let q = VertexSet::read_file(&path)?;
                    if q.dim() != x.dim() {
                        return Err(Error::DimensionMismatch { left: x.dim(), right: q.dim() }.into());
                    }
                    q.points().iter().copied().filter(|z| interval.contains(z)).collect()
                }
                None => interval.points().collect(),
            };
            let count = count_averaging_tuples(&pool, &x, &y, k, exclude_endpoints)?;
            emit(&cli.out, &format!("{count}\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Disagreement(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
