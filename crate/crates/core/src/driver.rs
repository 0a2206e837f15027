//! End-to-end experiment runs: load or generate a graph, count on `p`
//! simulated PEs, and report counts together with communication metrics.

use std::fmt;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::{
    cetric_run, ditric_run, ApproxOptions, DistError, DistOptions, DistributedGraph, ExchangeMode,
    PhaseTimings,
};
use crate::gen::{generate, normalize, read_edge_list, GenError, GeneratorSpec, Graph};
use crate::graph::{orient_and_sort, GhostDegrees, LocalGraph, Partition};
use crate::num::Real;
use crate::runtime::{CostModel, Routing, Runtime, RuntimeConfig, RuntimeError, Scheduler, Tag};
use crate::seq::{edge_iterator_with, lcc};

/// Smallest default aggregation threshold, in words.
pub const MIN_DEFAULT_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Seq,
    Ditric,
    Ditric2,
    Cetric,
    Cetric2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Seq,
        Algorithm::Ditric,
        Algorithm::Ditric2,
        Algorithm::Cetric,
        Algorithm::Cetric2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Seq => "seq",
            Algorithm::Ditric => "ditric",
            Algorithm::Ditric2 => "ditric2",
            Algorithm::Cetric => "cetric",
            Algorithm::Cetric2 => "cetric2",
        }
    }

    pub fn routing(self) -> Routing {
        match self {
            Algorithm::Ditric2 | Algorithm::Cetric2 => Routing::Indirect,
            _ => Routing::Direct,
        }
    }

    pub fn is_two_phase(self) -> bool {
        matches!(self, Algorithm::Cetric | Algorithm::Cetric2)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = DriverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.to_ascii_lowercase())
            .ok_or_else(|| DriverError::Config(format!("unknown algorithm '{s}'")))
    }
}

/// Where the graph comes from. Written as `file:<path>` or `gen:<spec>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Input {
    File(PathBuf),
    Generator(GeneratorSpec),
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::File(path) => write!(f, "file:{}", path.display()),
            Input::Generator(spec) => write!(f, "gen:{spec}"),
        }
    }
}

impl From<Input> for String {
    fn from(input: Input) -> String {
        input.to_string()
    }
}

impl TryFrom<String> for Input {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        if let Some(path) = s.strip_prefix("file:") {
            Ok(Input::File(PathBuf::from(path)))
        } else if let Some(spec) = s.strip_prefix("gen:") {
            spec.parse()
                .map(Input::Generator)
                .map_err(|e| e.to_string())
        } else {
            Err(format!(
                "input must start with 'file:' or 'gen:', got '{s}'"
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub pes: usize,
    pub input: Input,
    /// Aggregation threshold for every PE. Defaults to the PE's number of
    /// adjacency entries, but at least [`MIN_DEFAULT_THRESHOLD`].
    pub delta: Option<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub lcc: bool,
    pub approx: bool,
    pub fpr: f64,
    pub seed: u64,
    pub scheduler: Scheduler,
    pub degree_exchange: ExchangeMode,
    /// Record wall-clock phase times. Reports are byte-for-byte reproducible
    /// only when this is off.
    pub wall_clock: bool,
    /// Where to write per-vertex counts and clustering coefficients.
    pub lcc_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, pes: usize, input: Input) -> Self {
        Self {
            algorithm,
            pes,
            input,
            delta: None,
            alpha: 1.0,
            beta: 0.01,
            lcc: false,
            approx: false,
            fpr: 0.01,
            seed: 0,
            scheduler: Scheduler::Deterministic,
            degree_exchange: ExchangeMode::Sparse,
            wall_clock: false,
            lcc_out: None,
        }
    }

    pub fn validate(&self) -> Result<(), DriverError> {
        if self.pes == 0 {
            return Err(DriverError::Config("at least one PE is required".into()));
        }
        if self.approx && !self.algorithm.is_two_phase() {
            return Err(DriverError::Config(format!(
                "approximate counting is only available for cetric and cetric2, not {}",
                self.algorithm
            )));
        }
        if self.approx && !(self.fpr > 0.0 && self.fpr < 1.0) {
            return Err(DriverError::Config(format!(
                "false-positive rate must lie in (0, 1), got {}",
                self.fpr
            )));
        }
        if self.delta == Some(0) {
            return Err(DriverError::Config("delta must be positive".into()));
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0) {
            return Err(DriverError::Config(
                "alpha and beta must be non-negative".into(),
            ));
        }
        if self.lcc_out.is_some() && !self.lcc {
            return Err(DriverError::Config("an LCC output file needs --lcc".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(GenError),
    #[error("output error: {0}")]
    Output(String),
    #[error(transparent)]
    Dist(#[from] DistError),
}

impl DriverError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            DriverError::Config(_) => 2,
            DriverError::Input(GenError::Parameter(_)) => 2,
            DriverError::Input(_) | DriverError::Output(_) => 3,
            DriverError::Dist(DistError::Runtime(
                RuntimeError::Livelock { .. } | RuntimeError::Timeout(_),
            )) => 4,
            DriverError::Dist(DistError::Parameter(_)) => 2,
            DriverError::Dist(_) => 1,
        }
    }
}

/// Supplies the input graph. Loading is never part of the reported time.
pub trait GraphSource {
    fn load(&self) -> Result<Graph, DriverError>;
}

impl GraphSource for Input {
    fn load(&self) -> Result<Graph, DriverError> {
        match self {
            Input::File(path) => {
                let edges = read_edge_list(path).map_err(DriverError::Input)?;
                Ok(normalize(&edges))
            }
            Input::Generator(spec) => generate(spec).map_err(DriverError::Input),
        }
    }
}

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub preprocessing: f64,
    pub local: f64,
    pub contraction: f64,
    pub global: f64,
    pub postprocessing: f64,
    pub total: f64,
}

impl From<&PhaseTimings> for Timings {
    fn from(t: &PhaseTimings) -> Self {
        Self {
            preprocessing: t.preprocessing.as_secs_f64(),
            local: t.local.as_secs_f64(),
            contraction: t.contraction.as_secs_f64(),
            global: t.global.as_secs_f64(),
            postprocessing: t.postprocessing.as_secs_f64(),
            total: t.total().as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RunReport<S: Real = f64> {
    pub config: RunConfig,
    pub n: u64,
    pub m: u64,
    pub triangles: u64,
    pub local_phase: u64,
    pub global_phase: u64,
    pub approximate: bool,
    pub estimate: Option<S>,
    pub timings: Timings,
    /// Maximum number of messages sent by one PE.
    pub max_outgoing_messages: u64,
    /// Maximum number of words sent by one PE.
    pub bottleneck_volume: u64,
    pub total_messages: u64,
    pub total_words: u64,
    /// Largest per-PE `alpha * messages + beta * words`.
    pub modeled_time: S,
    /// Maximum payload words of neighborhoods (or their filters) sent by one PE.
    pub neighborhood_bottleneck_words: u64,
    pub max_buffer_occupancy: u64,
    pub max_record_words: u64,
}

fn default_thresholds(graph: &DistributedGraph) -> Vec<usize> {
    graph
        .locals
        .iter()
        .map(|lg| lg.num_adjacency_entries().max(MIN_DEFAULT_THRESHOLD))
        .collect()
}

/// Runs `config` on the graph it names.
pub fn run<S: Real>(config: &RunConfig) -> Result<RunReport<S>, DriverError> {
    run_with_source(config, &config.input)
}

/// Runs `config` on the graph supplied by `source`.
pub fn run_with_source<S: Real>(
    config: &RunConfig,
    source: &dyn GraphSource,
) -> Result<RunReport<S>, DriverError> {
    config.validate()?;
    let graph = source.load()?;
    if config.algorithm != Algorithm::Seq && config.pes as u64 > graph.n {
        return Err(DriverError::Config(format!(
            "{} PEs requested for a graph with {} vertices",
            config.pes, graph.n
        )));
    }
    let outcome = match config.algorithm {
        Algorithm::Seq => run_sequential::<S>(config, &graph)?,
        _ => run_distributed::<S>(config, &graph)?,
    };
    if let (Some(path), Some((delta, lcc))) = (&config.lcc_out, &outcome.per_vertex) {
        write_lcc(path, &graph, delta, lcc)?;
    }
    let mut report = outcome.report;
    if !config.wall_clock {
        report.timings = Timings::default();
    }
    Ok(report)
}

/// Runs `config` once for every PE count in `pes`.
pub fn sweep<S: Real>(config: &RunConfig, pes: &[usize]) -> Result<Vec<RunReport<S>>, DriverError> {
    pes.iter()
        .map(|&p| {
            let mut c = config.clone();
            c.pes = p;
            run(&c)
        })
        .collect()
}

struct Outcome<S: Real> {
    report: RunReport<S>,
    per_vertex: Option<(Vec<S>, Vec<S>)>,
}

fn empty_report<S: Real>(config: &RunConfig, graph: &Graph) -> RunReport<S> {
    RunReport {
        config: config.clone(),
        n: graph.n,
        m: graph.edges.len() as u64,
        triangles: 0,
        local_phase: 0,
        global_phase: 0,
        approximate: false,
        estimate: None,
        timings: Timings::default(),
        max_outgoing_messages: 0,
        bottleneck_volume: 0,
        total_messages: 0,
        total_words: 0,
        modeled_time: S::zero(),
        neighborhood_bottleneck_words: 0,
        max_buffer_occupancy: 0,
        max_record_words: 0,
    }
}

fn run_sequential<S: Real>(config: &RunConfig, graph: &Graph) -> Result<Outcome<S>, DriverError> {
    let mut report = empty_report(config, graph);
    if graph.n == 0 {
        return Ok(Outcome {
            report,
            per_vertex: config.lcc.then(|| (Vec::new(), Vec::new())),
        });
    }
    let part = Partition::balanced(graph.n, 1).map_err(DistError::from)?;
    let lg = LocalGraph::build(&graph.edges, &part, 0).map_err(DistError::from)?;

    let start = Instant::now();
    let og = orient_and_sort(&lg, &GhostDegrees::new()).map_err(DistError::from)?;
    let preprocessing = start.elapsed();

    let start = Instant::now();
    let mut count = 0u64;
    let mut delta = vec![0u64; if config.lcc { graph.n as usize } else { 0 }];
    edge_iterator_with(&og, |v, u, w| {
        count += 1;
        if config.lcc {
            delta[v as usize] += 1;
            delta[u as usize] += 1;
            delta[w as usize] += 1;
        }
    });
    let local = start.elapsed();

    report.triangles = count;
    report.local_phase = count;
    report.timings = Timings::from(&PhaseTimings {
        preprocessing,
        local,
        ..Default::default()
    });
    let per_vertex = config.lcc.then(|| {
        let coefficients = delta
            .iter()
            .enumerate()
            .map(|(v, &t)| lcc::<S>(t, lg.local_degree(v as u64)))
            .collect();
        (delta.iter().map(|&t| S::of_u64(t)).collect(), coefficients)
    });
    Ok(Outcome { report, per_vertex })
}

fn run_distributed<S: Real>(config: &RunConfig, graph: &Graph) -> Result<Outcome<S>, DriverError> {
    let dg =
        DistributedGraph::from_edges(&graph.edges, graph.n, config.pes).map_err(DistError::from)?;
    let mut rt = Runtime::new(RuntimeConfig {
        pes: config.pes,
        cost: CostModel::new(S::of_f64(config.alpha), S::of_f64(config.beta)),
        scheduler: config.scheduler,
        ..Default::default()
    })
    .map_err(DistError::from)?;
    let thresholds = match config.delta {
        Some(delta) => vec![delta; config.pes],
        None => default_thresholds(&dg),
    };
    rt.set_thresholds(thresholds).map_err(DistError::from)?;

    let opts = DistOptions {
        routing: config.algorithm.routing(),
        degree_exchange: config.degree_exchange,
        lcc: config.lcc,
        approx: config.approx.then(|| ApproxOptions {
            fpr: S::of_f64(config.fpr),
            seed: config.seed,
        }),
    };
    let result = if config.algorithm.is_two_phase() {
        cetric_run(&mut rt, &dg, &opts)?
    } else {
        ditric_run(&mut rt, &dg, &opts)?
    };

    let cost = &result.cost;
    let neighborhood_tag = if result.approximate {
        Tag::Filter
    } else {
        Tag::Neighborhood
    };
    let report = RunReport {
        triangles: result.total,
        local_phase: result.local_phase,
        global_phase: result.global_phase,
        approximate: result.approximate,
        estimate: result.estimate,
        timings: Timings::from(&result.timings),
        max_outgoing_messages: cost.max_messages_sent(),
        bottleneck_volume: cost.bottleneck_volume(),
        total_messages: cost.total_messages(),
        total_words: cost.total_words(),
        modeled_time: cost.max_modeled_time(),
        neighborhood_bottleneck_words: cost.bottleneck_payload_words(neighborhood_tag),
        max_buffer_occupancy: cost.max_buffer_occupancy(),
        max_record_words: cost
            .per_pe
            .iter()
            .map(|s| s.max_record_words)
            .max()
            .unwrap_or(0),
        ..empty_report(config, graph)
    };
    let per_vertex = match (result.delta, result.approx_delta, result.lcc) {
        (Some(delta), _, Some(lcc)) => {
            Some((delta.delta.iter().map(|&t| S::of_u64(t)).collect(), lcc))
        }
        (None, Some(delta), Some(lcc)) => Some((delta, lcc)),
        _ => None,
    };
    Ok(Outcome { report, per_vertex })
}

fn write_lcc<S: Real>(
    path: &PathBuf,
    graph: &Graph,
    delta: &[S],
    lcc: &[S],
) -> Result<(), DriverError> {
    let out_err = |e: std::io::Error| DriverError::Output(format!("{}: {e}", path.display()));
    let file = std::fs::File::create(path).map_err(out_err)?;
    let mut out = std::io::BufWriter::new(file);
    writeln!(out, "# vertex triangles lcc").map_err(out_err)?;
    for (v, (t, c)) in delta.iter().zip(lcc).enumerate() {
        let id = graph.remap.as_ref().map_or(v as u64, |r| r[v]);
        writeln!(out, "{id} {t} {c}").map_err(out_err)?;
    }
    out.flush().map_err(out_err)
}

/// One CSV row: the report with its configuration flattened.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CsvRow<S: Real = f64> {
    pub algorithm: Algorithm,
    pub pes: usize,
    pub input: String,
    pub delta: Option<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub lcc: bool,
    pub approx: bool,
    pub fpr: f64,
    pub seed: u64,
    pub scheduler: Scheduler,
    pub degree_exchange: ExchangeMode,
    pub wall_clock: bool,
    pub lcc_out: Option<String>,
    pub n: u64,
    pub m: u64,
    pub triangles: u64,
    pub local_phase: u64,
    pub global_phase: u64,
    pub approximate: bool,
    pub estimate: Option<S>,
    pub time_preprocessing: f64,
    pub time_local: f64,
    pub time_contraction: f64,
    pub time_global: f64,
    pub time_postprocessing: f64,
    pub time_total: f64,
    pub max_outgoing_messages: u64,
    pub bottleneck_volume: u64,
    pub total_messages: u64,
    pub total_words: u64,
    pub modeled_time: S,
    pub neighborhood_bottleneck_words: u64,
    pub max_buffer_occupancy: u64,
    pub max_record_words: u64,
}

impl<S: Real> From<&RunReport<S>> for CsvRow<S> {
    fn from(r: &RunReport<S>) -> Self {
        let c = &r.config;
        Self {
            algorithm: c.algorithm,
            pes: c.pes,
            input: c.input.to_string(),
            delta: c.delta,
            alpha: c.alpha,
            beta: c.beta,
            lcc: c.lcc,
            approx: c.approx,
            fpr: c.fpr,
            seed: c.seed,
            scheduler: c.scheduler,
            degree_exchange: c.degree_exchange,
            wall_clock: c.wall_clock,
            lcc_out: c.lcc_out.as_ref().map(|p| p.display().to_string()),
            n: r.n,
            m: r.m,
            triangles: r.triangles,
            local_phase: r.local_phase,
            global_phase: r.global_phase,
            approximate: r.approximate,
            estimate: r.estimate,
            time_preprocessing: r.timings.preprocessing,
            time_local: r.timings.local,
            time_contraction: r.timings.contraction,
            time_global: r.timings.global,
            time_postprocessing: r.timings.postprocessing,
            time_total: r.timings.total,
            max_outgoing_messages: r.max_outgoing_messages,
            bottleneck_volume: r.bottleneck_volume,
            total_messages: r.total_messages,
            total_words: r.total_words,
            modeled_time: r.modeled_time,
            neighborhood_bottleneck_words: r.neighborhood_bottleneck_words,
            max_buffer_occupancy: r.max_buffer_occupancy,
            max_record_words: r.max_record_words,
        }
    }
}

impl<S: Real> TryFrom<CsvRow<S>> for RunReport<S> {
    type Error = DriverError;

    fn try_from(row: CsvRow<S>) -> Result<Self, Self::Error> {
        let input = Input::try_from(row.input).map_err(DriverError::Config)?;
        Ok(Self {
            config: RunConfig {
                algorithm: row.algorithm,
                pes: row.pes,
                input,
                delta: row.delta,
                alpha: row.alpha,
                beta: row.beta,
                lcc: row.lcc,
                approx: row.approx,
                fpr: row.fpr,
                seed: row.seed,
                scheduler: row.scheduler,
                degree_exchange: row.degree_exchange,
                wall_clock: row.wall_clock,
                lcc_out: row.lcc_out.map(PathBuf::from),
            },
            n: row.n,
            m: row.m,
            triangles: row.triangles,
            local_phase: row.local_phase,
            global_phase: row.global_phase,
            approximate: row.approximate,
            estimate: row.estimate,
            timings: Timings {
                preprocessing: row.time_preprocessing,
                local: row.time_local,
                contraction: row.time_contraction,
                global: row.time_global,
                postprocessing: row.time_postprocessing,
                total: row.time_total,
            },
            max_outgoing_messages: row.max_outgoing_messages,
            bottleneck_volume: row.bottleneck_volume,
            total_messages: row.total_messages,
            total_words: row.total_words,
            modeled_time: row.modeled_time,
            neighborhood_bottleneck_words: row.neighborhood_bottleneck_words,
            max_buffer_occupancy: row.max_buffer_occupancy,
            max_record_words: row.max_record_words,
        })
    }
}

/// Serializes reports: a JSON array (a single object for one report) or a
/// CSV table with a header row and one row per report.
pub fn emit<S: Real>(reports: &[RunReport<S>], format: Format) -> Result<String, DriverError> {
    match format {
        Format::Json => {
            let text = if let [single] = reports {
                serde_json::to_string_pretty(single)
            } else {
                serde_json::to_string_pretty(reports)
            };
            text.map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| DriverError::Output(e.to_string()))
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for report in reports {
                writer
                    .serialize(CsvRow::from(report))
                    .map_err(|e| DriverError::Output(e.to_string()))?;
            }
            if reports.is_empty() {
                writer
                    .write_record(csv_header())
                    .map_err(|e| DriverError::Output(e.to_string()))?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| DriverError::Output(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| DriverError::Output(e.to_string()))
        }
    }
}

fn csv_header() -> Vec<&'static str> {
    vec![
        "algorithm",
        "pes",
        "input",
        "delta",
        "alpha",
        "beta",
        "lcc",
        "approx",
        "fpr",
        "seed",
        "scheduler",
        "degree_exchange",
        "wall_clock",
        "lcc_out",
        "n",
        "m",
        "triangles",
        "local_phase",
        "global_phase",
        "approximate",
        "estimate",
        "time_preprocessing",
        "time_local",
        "time_contraction",
        "time_global",
        "time_postprocessing",
        "time_total",
        "max_outgoing_messages",
        "bottleneck_volume",
        "total_messages",
        "total_words",
        "modeled_time",
        "neighborhood_bottleneck_words",
        "max_buffer_occupancy",
        "max_record_words",
    ]
}

/// Parses the output of [`emit`].
pub fn parse<S: Real>(text: &str, format: Format) -> Result<Vec<RunReport<S>>, DriverError> {
    let bad = |e: String| {
        DriverError::Input(GenError::Parse {
            line: 0,
            message: e,
        })
    };
    match format {
        Format::Json => {
            let value: serde_json::Value =
                serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
            if value.is_array() {
                serde_json::from_value(value).map_err(|e| bad(e.to_string()))
            } else {
                serde_json::from_value(value)
                    .map(|r| vec![r])
                    .map_err(|e| bad(e.to_string()))
            }
        }
        Format::Csv => {
            let mut reader = csv::Reader::from_reader(text.as_bytes());
            reader
                .deserialize::<CsvRow<S>>()
                .map(|row| RunReport::try_from(row.map_err(|e| bad(e.to_string()))?))
                .collect()
        }
    }
}

/// Elapsed time helper used by callers that time their own ingestion.
pub fn seconds(d: Duration) -> f64 {
    d.as_secs_f64()
}
