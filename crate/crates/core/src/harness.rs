//! Parameter sweeps, CSV and JSON output, and the method cross-check.
//!
//! Each sweep cell `(n, rate, trial)` gets its own seed
//! `mix64(base_seed, cell_index)`, with cells numbered in that nesting
//! order. Records come back in the same order whatever the execution
//! strategy.
//!
//! Pair sampling: density falls back to an estimate over
//! [`DEFAULT_PAIR_BUDGET`] random pairs once `C(|Q|, 2)` passes
//! [`AUTO_SAMPLE_PAIRS`], unless another requested metric (minimum degree,
//! expansion) needs every pair. In sampled rows `num_edges` and
//! `num_non_edges` count the classified pairs only.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::adjacency::{build_graph, edge_status, find_non_edge, BuildOptions, EdgeStatus, Method, Verdict};
use crate::analytics::count_witness_quadruples;
use crate::error::{Error, Result};
use crate::fmt_sig;
use crate::hypercube::Point;
use crate::metrics;
use crate::sampling::{mix64, resolve_rate, sample_vertex_set, sample_with_rate, RateSpec, VertexSet};

pub const AUTO_SAMPLE_PAIRS: u64 = 200_000;
pub const DEFAULT_PAIR_BUDGET: u64 = 10_000;
/// Quadruple counts are skipped above this many vertices.
pub const QUADRUPLE_MAX_VERTICES: usize = 4096;

pub const CSV_HEADER: [&str; 14] = [
    "n",
    "rate_label",
    "p",
    "trial",
    "seed",
    "num_vertices",
    "num_edges",
    "density",
    "min_degree",
    "is_clique",
    "num_non_edges",
    "quadruples",
    "expansion",
    "elapsed_ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Density,
    /// Density estimated from this many random pairs.
    DensitySampled(u64),
    MinDegree,
    Clique,
    Expansion,
    Quadruples,
}

impl Metric {
    /// `density`, `density_sampled` or `density_sampled:<budget>`, `min_degree`,
    /// `clique`, `expansion`, `quadruples`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "density" => Metric::Density,
            "density_sampled" => Metric::DensitySampled(DEFAULT_PAIR_BUDGET),
            "min_degree" => Metric::MinDegree,
            "clique" => Metric::Clique,
            "expansion" => Metric::Expansion,
            "quadruples" => Metric::Quadruples,
            _ => match s.strip_prefix("density_sampled:") {
                Some(b) => Metric::DensitySampled(
                    b.parse().map_err(|_| Error::Config(format!("bad pair budget in {s:?}")))?,
                ),
                None => return Err(Error::Config(format!("unknown metric {s:?}"))),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n_list: Vec<u32>,
    pub rates: Vec<RateSpec>,
    pub trials: u32,
    pub base_seed: u64,
    pub metrics: Vec<Metric>,
    pub method: Method,
    pub parallel: bool,
    /// Pair count above which density alone is estimated from samples; `None` disables.
    pub auto_sample_pairs: Option<u64>,
}

impl SweepConfig {
    pub fn new(n_list: Vec<u32>, rates: Vec<RateSpec>, trials: u32, base_seed: u64, metrics: Vec<Metric>) -> Self {
        SweepConfig {
            n_list,
            rates,
            trials,
            base_seed,
            metrics,
            method: Method::Auto,
            parallel: true,
            auto_sample_pairs: Some(AUTO_SAMPLE_PAIRS),
        }
    }

    fn wants(&self, m: Metric) -> bool {
        self.metrics.contains(&m)
    }

    fn sampled_budget(&self) -> Option<u64> {
        self.metrics.iter().find_map(|m| match m {
            Metric::DensitySampled(b) => Some(*b),
            _ => None,
        })
    }

    /// Checks the grid and returns warnings for cells where expansion is
    /// expected to be skipped.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.n_list.is_empty() || self.rates.is_empty() {
            return Err(Error::Config("need at least one n and one rate".into()));
        }
        let mut warnings = Vec::new();
        for &n in &self.n_list {
            if n == 0 || n > crate::sampling::DENSE_MAX_DIM {
                return Err(Error::InvalidDimension(n));
            }
            for rate in &self.rates {
                let p = resolve_rate(rate, n)?;
                let expected = p * libm::exp2(n as f64);
                if self.wants(Metric::Expansion) && expected > metrics::EXPANSION_MAX_VERTICES as f64 {
                    warnings.push(format!(
                        "n={n} {rate}: expected |Q| = {expected:.1} exceeds {}; expansion will mostly be empty",
                        metrics::EXPANSION_MAX_VERTICES
                    ));
                }
            }
        }
        if let Some(0) = self.sampled_budget() {
            return Err(Error::Config("pair budget must be >= 1".into()));
        }
        Ok(warnings)
    }

    fn cells(&self) -> Vec<(u64, u32, RateSpec, u32)> {
        let mut out = Vec::new();
        for &n in &self.n_list {
            for rate in &self.rates {
                for t in 0..self.trials {
                    out.push((out.len() as u64, n, *rate, t));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub n: u32,
    pub rate_label: String,
    pub p: f64,
    pub trial: u32,
    pub seed: u64,
    pub num_vertices: usize,
    pub num_edges: Option<u64>,
    pub density: Option<f64>,
    pub min_degree: Option<u64>,
    pub is_clique: Option<bool>,
    pub num_non_edges: Option<u64>,
    pub quadruples: Option<String>,
    pub expansion: Option<f64>,
    pub elapsed_ms: u64,
}

impl TrialRecord {
    fn fields(&self) -> Vec<String> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(String::new, T::to_string)
        }
        vec![
            self.n.to_string(),
            self.rate_label.clone(),
            fmt_sig(self.p),
            self.trial.to_string(),
            self.seed.to_string(),
            self.num_vertices.to_string(),
            opt(&self.num_edges),
            self.density.map_or_else(String::new, fmt_sig),
            opt(&self.min_degree),
            opt(&self.is_clique),
            opt(&self.num_non_edges),
            opt(&self.quadruples),
            self.expansion.map_or_else(String::new, fmt_sig),
            self.elapsed_ms.to_string(),
        ]
    }
}

fn ratio_f64(r: num_rational::Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn run_trial(cfg: &SweepConfig, cell: u64, n: u32, rate: RateSpec, trial: u32) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = mix64(cfg.base_seed, cell);
    let q = sample_with_rate(n, &rate, seed)?;
    let p = resolve_rate(&rate, n)?;
    let mut rec = TrialRecord {
        n,
        rate_label: rate.label(),
        p,
        trial,
        seed,
        num_vertices: q.len(),
        num_edges: None,
        density: None,
        min_degree: None,
        is_clique: None,
        num_non_edges: None,
        quadruples: None,
        expansion: None,
        elapsed_ms: 0,
    };
    let m = q.len() as u64;
    let pairs = m * m.saturating_sub(1) / 2;
    if m > 0 {
        let needs_full = cfg.wants(Metric::MinDegree) || cfg.wants(Metric::Expansion);
        let wants_density = cfg.wants(Metric::Density);
        let budget = match cfg.sampled_budget() {
            Some(b) => Some(b),
            None if wants_density && !needs_full && cfg.auto_sample_pairs.is_some_and(|t| pairs > t) => {
                Some(DEFAULT_PAIR_BUDGET)
            }
            None => None,
        };
        let build = needs_full || wants_density || budget.is_some();
        let opts = BuildOptions {
            method: cfg.method,
            pair_budget: budget,
            keep_certificates: false,
            sample_seed: mix64(seed, 1),
            parallel: !cfg.parallel,
        };
        if build {
            let g = build_graph(&q, &opts);
            rec.num_edges = Some(g.num_edges() as u64);
            rec.num_non_edges = Some(g.non_edges.len() as u64);
            rec.density = if g.sampled {
                metrics::density_estimate(&g).ok().map(|d| d.value)
            } else {
                metrics::density(&g).ok().map(ratio_f64)
            };
            if cfg.wants(Metric::MinDegree) {
                rec.min_degree = metrics::min_degree(&g).ok().map(|d| d as u64);
            }
            if cfg.wants(Metric::Clique) {
                rec.is_clique = metrics::is_clique(&g).ok();
            }
            if cfg.wants(Metric::Expansion) && q.len() <= metrics::EXPANSION_MAX_VERTICES {
                rec.expansion = metrics::edge_expansion(&g).ok().map(ratio_f64);
            }
        } else if cfg.wants(Metric::Clique) {
            rec.is_clique = Some(find_non_edge(&q, cfg.method).is_none());
        }
        if cfg.wants(Metric::Quadruples) && q.len() <= QUADRUPLE_MAX_VERTICES {
            rec.quadruples = Some(count_witness_quadruples(&q, None).to_string());
        }
    }
    rec.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(rec)
}

/// One record per `(n, rate, trial)` cell in canonical order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let run = |&(cell, n, rate, t): &(u64, u32, RateSpec, u32)| run_trial(cfg, cell, n, rate, t);
    if cfg.parallel {
        cells.par_iter().map(run).collect()
    } else {
        cells.iter().map(run).collect()
    }
}

/// Writes the sweep CSV; an empty slice gives the header alone.
pub fn emit_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record(r.fields()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[TrialRecord]) -> String {
    let mut buf = Vec::new();
    emit_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn write_csv_file(records: &[TrialRecord], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(records))?;
    Ok(())
}

pub fn emit_graph_json<W: Write>(graph: &crate::adjacency::PolytopeGraph, mut out: W) -> Result<()> {
    let text = serde_json::to_string(&graph.to_json()).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Decides a single pair; the cross-check runs every method through this.
pub trait PairClassifier: Sync {
    fn classify(&self, q: &VertexSet, x: &Point, y: &Point, method: Method) -> Result<EdgeStatus>;
}

/// The library's own decision procedures.
pub struct ExactClassifier;

impl PairClassifier for ExactClassifier {
    fn classify(&self, q: &VertexSet, x: &Point, y: &Point, method: Method) -> Result<EdgeStatus> {
        edge_status(q, x, y, method)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub rates: Vec<f64>,
    pub trials: u32,
    pub seed: u64,
    /// Use the full cube for every `n` in range instead of random sets.
    pub force_full_cube: bool,
}

impl VerifyConfig {
    pub fn new(n_max: u32, trials: u32, seed: u64) -> Self {
        VerifyConfig {
            n_min: 3.min(n_max),
            n_max,
            rates: vec![0.2, 0.5, 0.8],
            trials,
            seed,
            force_full_cube: false,
        }
    }
}

/// A pair on which methods disagree or a certificate fails to replay.
#[derive(Clone, Debug, PartialEq)]
pub struct Disagreement {
    pub instance: VertexSet,
    pub x: Point,
    pub y: Point,
    pub verdicts: Vec<(Method, Option<Verdict>, bool)>,
}

impl Disagreement {
    pub fn dump(&self) -> String {
        let mut s = format!("pair x={} y={}\n", self.x.to_binary(), self.y.to_binary());
        for (m, v, replays) in &self.verdicts {
            s += &format!("  {m}: {v:?} replays={replays}\n");
        }
        s + &self.instance.to_text()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub instances: u64,
    pub pairs: u64,
    pub edges: u64,
    pub disagreements: Vec<Disagreement>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "instances={} pairs={} edges={} disagreements={}",
            self.instances,
            self.pairs,
            self.edges,
            self.disagreements.len()
        )
    }
}

fn verify_instance(q: &VertexSet, classifier: &dyn PairClassifier, report: &mut VerifyReport) {
    report.instances += 1;
    let pts = q.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (x, y) = (&pts[i], &pts[j]);
            let verdicts: Vec<(Method, Option<Verdict>, bool)> = Method::ALL
                .iter()
                .map(|&m| match classifier.classify(q, x, y, m) {
                    Ok(s) => (m, Some(s.verdict), s.replays(q, x, y)),
                    Err(_) => (m, None, false),
                })
                .collect();
            report.pairs += 1;
            let first = verdicts[0].1;
            let agree = verdicts.iter().all(|(_, v, r)| *r && *v == first && v.is_some());
            if agree {
                if first == Some(Verdict::Edge) {
                    report.edges += 1;
                }
            } else {
                report.disagreements.push(Disagreement {
                    instance: q.clone(),
                    x: *x,
                    y: *y,
                    verdicts,
                });
            }
        }
    }
}

/// Classifies every pair of each instance under all methods and replays
/// every certificate.
pub fn run_verify(cfg: &VerifyConfig, classifier: &dyn PairClassifier) -> Result<VerifyReport> {
    if cfg.n_max > 6 || cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(Error::Config(format!(
            "need 1 <= n_min <= n_max <= 6, got {}..={}",
            cfg.n_min, cfg.n_max
        )));
    }
    let mut report = VerifyReport::default();
    if cfg.force_full_cube {
        for n in cfg.n_min..=cfg.n_max {
            verify_instance(&VertexSet::full_cube(n)?, classifier, &mut report);
        }
        return Ok(report);
    }
    if cfg.rates.is_empty() {
        return Err(Error::Config("need at least one rate".into()));
    }
    let span = (cfg.n_max - cfg.n_min + 1) as u64;
    for t in 0..cfg.trials as u64 {
        let n = cfg.n_min + (t % span) as u32;
        let p = cfg.rates[((t / span) % cfg.rates.len() as u64) as usize];
        let q = sample_vertex_set(n, p, mix64(cfg.seed, t))?;
        verify_instance(&q, classifier, &mut report);
    }
    Ok(report)
}
