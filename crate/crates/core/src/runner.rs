//! Scenario experiments and their file outputs.
//!
//! Every experiment takes an [`ExperimentConfig`], derives all of its seeds
//! from the single top-level seed, and writes fixed file names into an output
//! directory. Reruns with the same configuration produce byte-identical files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connection::{self, ConnectionFunction, ContinuousForm, Preset};
use crate::error::{Error, Result};
use crate::graphgen::{self, Graph, LayeredGraph};
use crate::io;
use crate::pointset::{self, CitySpec, FranceParams, Point, PointSet};
use crate::rng::derive_seed;
use crate::spectral;
use crate::stats::{self, GraphSummary};
use crate::walks::{self, mean_sd, ReplicationRecord, WalkBatchStats};

/// The shipped France city list.
pub const DEFAULT_CITIES_TOML: &str = include_str!("../config/france_cities.toml");

const SEED_POINTS: u64 = 11;
const SEED_GRAPH: u64 = 12;
const SEED_WALKS: u64 = 13;
const SEED_REPLICATION: u64 = 14;
const SEED_FIGURE1: u64 = 15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PointSetSpec {
    Uniform {
        n: usize,
        width: f64,
        height: f64,
    },
    Grid {
        nx: usize,
        ny: usize,
        width: f64,
        height: f64,
    },
    France {
        /// TOML city list; the built-in list when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cities: Option<PathBuf>,
        #[serde(default = "default_grid")]
        grid_nx: usize,
        #[serde(default = "default_grid")]
        grid_ny: usize,
        #[serde(default = "default_total")]
        total_n: usize,
        #[serde(default = "default_side")]
        width: f64,
        #[serde(default = "default_side")]
        height: f64,
    },
    File {
        path: PathBuf,
        width: f64,
        height: f64,
    },
}

fn default_grid() -> usize {
    60
}
fn default_total() -> usize {
    6000
}
fn default_side() -> f64 {
    8.0
}

impl Default for PointSetSpec {
    fn default() -> Self {
        PointSetSpec::France {
            cities: None,
            grid_nx: default_grid(),
            grid_ny: default_grid(),
            total_n: default_total(),
            width: default_side(),
            height: default_side(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConnectionSpec {
    Preset { name: Preset },
    Bands { bands: Vec<(f64, f64)> },
    File { path: PathBuf },
    Continuous { form: ContinuousForm, h: f64, r_max: f64 },
}

impl Default for ConnectionSpec {
    fn default() -> Self {
        ConnectionSpec::Preset { name: Preset::U }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkConfig {
    pub num_walks: usize,
    pub steps: usize,
    pub delay: usize,
    /// Start coordinate of the replicating walk; the centre of `start_city` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<(f64, f64)>,
    pub start_city: String,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { num_walks: 100, steps: 100, delay: 10, start: None, start_city: "Lille".into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// The grid is `r_min + i (r_max - r_min) / count` for `i = 1..=count`.
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { r_min: 0.15, r_max: 4.0, count: 40 }
    }
}

impl SweepConfig {
    pub fn radii(&self) -> Vec<f64> {
        (1..=self.count).map(|i| self.r_min + i as f64 * (self.r_max - self.r_min) / self.count as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Figure1Config {
    pub n: usize,
    pub side: f64,
    pub levels: usize,
}

impl Default for Figure1Config {
    fn default() -> Self {
        Figure1Config { n: 200, side: 8.0, levels: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub iterations: usize,
    pub tol: f64,
    pub pointset: PointSetSpec,
    pub connection: ConnectionSpec,
    pub walks: WalkConfig,
    pub sweep: SweepConfig,
    pub figure1: Figure1Config,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 2021,
            iterations: 20,
            tol: spectral::DEFAULT_TOL,
            pointset: PointSetSpec::default(),
            connection: ConnectionSpec::default(),
            walks: WalkConfig::default(),
            sweep: SweepConfig::default(),
            figure1: Figure1Config::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a config file; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut self.pointset {
            PointSetSpec::France { cities: Some(p), .. } | PointSetSpec::File { path: p, .. } => fix(p),
            _ => {}
        }
        if let ConnectionSpec::File { path } = &mut self.connection {
            fix(path);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config("tol must be positive".into()));
        }
        if self.sweep.count == 0 || !(self.sweep.r_max > self.sweep.r_min) || !(self.sweep.r_min >= 0.0) {
            return Err(Error::Config("sweep needs count >= 1 and 0 <= r_min < r_max".into()));
        }
        if self.walks.num_walks == 0 {
            return Err(Error::Config("walks.num_walks must be >= 1".into()));
        }
        if self.figure1.n < 2 || self.figure1.levels == 0 || !(self.figure1.side > 0.0) {
            return Err(Error::Config("figure1 needs n >= 2, levels >= 1 and a positive side".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn cities(&self) -> Result<Vec<CitySpec>> {
        match &self.pointset {
            PointSetSpec::France { cities: Some(path), .. } => pointset::load_cities(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
            _ => pointset::parse_cities(DEFAULT_CITIES_TOML),
        }
    }

    /// Width and height of the square the points live in.
    pub fn bbox(&self) -> (f64, f64) {
        match &self.pointset {
            PointSetSpec::Uniform { width, height, .. }
            | PointSetSpec::Grid { width, height, .. }
            | PointSetSpec::France { width, height, .. }
            | PointSetSpec::File { width, height, .. } => (*width, *height),
        }
    }

    pub fn point_seed(&self) -> u64 {
        derive_seed(self.seed, &[SEED_POINTS])
    }

    pub fn build_points(&self) -> Result<PointSet> {
        let seed = self.point_seed();
        match &self.pointset {
            PointSetSpec::Uniform { n, width, height } => pointset::sample_uniform(*n, *width, *height, seed),
            PointSetSpec::Grid { nx, ny, width, height } => pointset::make_grid(*nx, *ny, *width, *height),
            PointSetSpec::France { grid_nx, grid_ny, total_n, width, height, .. } => {
                let params = FranceParams { grid_nx: *grid_nx, grid_ny: *grid_ny, total_n: *total_n, bbox: (*width, *height) };
                pointset::france_model(&self.cities()?, &params, seed)
            }
            PointSetSpec::File { path, width, height } => io::read_points(path, (*width, *height), "file"),
        }
    }

    pub fn build_connection(&self) -> Result<ConnectionFunction> {
        match &self.connection {
            ConnectionSpec::Preset { name } => Ok(name.function()),
            ConnectionSpec::Bands { bands } => ConnectionFunction::from_bands(bands).map_err(|e| Error::Config(e.to_string())),
            ConnectionSpec::File { path } => ConnectionFunction::load(path),
            ConnectionSpec::Continuous { form, h, r_max } => {
                connection::discretize(|r| form.eval(r), *h, *r_max).map_err(|e| Error::Config(e.to_string()))
            }
        }
    }

    /// Seed of graph `iteration` of a scenario.
    pub fn graph_seed(&self, scenario: usize, iteration: usize) -> u64 {
        derive_seed(self.seed, &[SEED_GRAPH, scenario as u64, iteration as u64])
    }

    /// Start coordinate of the replicating walk.
    pub fn replication_start(&self) -> Result<Point> {
        if let Some((x, y)) = self.walks.start {
            return Ok(Point::new(x, y));
        }
        let cities = self.cities()?;
        cities
            .iter()
            .find(|c| c.name == self.walks.start_city)
            .map(|c| c.center)
            .ok_or_else(|| Error::Config(format!("no city named {:?} in the city list", self.walks.start_city)))
    }
}

fn scenario_index(p: Preset) -> usize {
    Preset::ALL.iter().position(|&q| q == p).unwrap()
}

/// Iterations run for a scenario: one for deterministic functions.
pub fn scenario_iterations(cfg: &ExperimentConfig, p: Preset) -> usize {
    if p.is_deterministic() {
        1
    } else {
        cfg.iterations
    }
}

/// Graph `iteration` of scenario `p` on the shared point set.
pub fn scenario_graph(cfg: &ExperimentConfig, points: &Arc<PointSet>, p: Preset, iteration: usize) -> Result<LayeredGraph> {
    graphgen::generate(Arc::clone(points), &p.function(), cfg.graph_seed(scenario_index(p), iteration))
}

/// Mean and spread of one statistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub group: String,
    pub statistic: String,
    pub index: Option<usize>,
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

impl AggregateRow {
    pub fn from_samples(group: &str, statistic: &str, index: Option<usize>, xs: &[f64]) -> Self {
        let (mean, sd) = mean_sd(xs);
        AggregateRow { group: group.into(), statistic: statistic.into(), index, mean, sd, count: xs.len() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Row {
    pub graph: Preset,
    pub iteration: usize,
    pub summary: GraphSummary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
    pub failures: Vec<(Preset, usize, String)>,
}

pub const TABLE1_STATS: [&str; 5] = ["lambda1", "sparsity", "max_valency", "avg_valency", "avg_clustering"];

impl Table1 {
    pub fn presets(&self) -> Vec<Preset> {
        Preset::ALL.iter().copied().filter(|&p| self.rows.iter().any(|r| r.graph == p)).collect()
    }

    pub fn samples(&self, p: Preset, statistic: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.graph == p)
            .map(|r| match statistic {
                "lambda1" => r.summary.lambda1,
                "sparsity" => r.summary.sparsity,
                "max_valency" => r.summary.max_valency as f64,
                "avg_valency" => r.summary.avg_valency,
                "avg_clustering" => r.summary.avg_clustering,
                other => panic!("unknown statistic {other}"),
            })
            .collect()
    }

    pub fn mean(&self, p: Preset, statistic: &str) -> f64 {
        mean_sd(&self.samples(p, statistic)).0
    }

    pub fn aggregates(&self) -> Vec<AggregateRow> {
        self.presets()
            .into_iter()
            .flat_map(|p| TABLE1_STATS.iter().map(move |s| (p, s)))
            .map(|(p, s)| AggregateRow::from_samples(p.name(), s, None, &self.samples(p, s)))
            .collect()
    }

    /// Mean λ₁ of each scenario.
    pub fn references(&self) -> BTreeMap<Preset, f64> {
        self.presets().into_iter().map(|p| (p, self.mean(p, "lambda1"))).collect()
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut out = String::from("graph,iteration,lambda1,sparsity,max_valency,avg_valency,avg_clustering\n");
        for r in &self.rows {
            let s = &r.summary;
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.graph, r.iteration, s.lambda1, s.sparsity, s.max_valency, s.avg_valency, s.avg_clustering
            ));
        }
        io::write_text(&dir.join("table1.csv"), &out)?;
        write_aggregates(&dir.join("table1_summary.csv"), &self.aggregates())
    }
}

fn write_aggregates(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    let mut out = String::from("group,statistic,index,mean,sd,count\n");
    for r in rows {
        let index = r.index.map(|i| i.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{},{},{}\n", r.group, r.statistic, index, r.mean, r.sd, r.count));
    }
    io::write_text(path, &out)
}

/// Summaries of every scenario graph; failed iterations are logged and left out.
pub fn run_table1(cfg: &ExperimentConfig, points: &Arc<PointSet>) -> Result<Table1> {
    run_scenarios(cfg, points, &Preset::ALL)
}

/// [`run_table1`] restricted to some scenarios.
pub fn run_scenarios(cfg: &ExperimentConfig, points: &Arc<PointSet>, presets: &[Preset]) -> Result<Table1> {
    let jobs: Vec<(Preset, usize)> =
        presets.iter().flat_map(|&p| (0..scenario_iterations(cfg, p)).map(move |i| (p, i))).collect();
    let results: Vec<(Preset, usize, Result<GraphSummary>)> = jobs
        .par_iter()
        .map(|&(p, i)| {
            let summary = scenario_graph(cfg, points, p, i).and_then(|lg| stats::summarize(&lg.graph(), cfg.tol));
            (p, i, summary)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (graph, iteration, res) in results {
        match res {
            Ok(summary) => rows.push(Table1Row { graph, iteration, summary }),
            Err(e) => {
                warn!("{graph} iteration {iteration} failed: {e}");
                failures.push((graph, iteration, e.to_string()));
            }
        }
    }
    if rows.is_empty() {
        return Err(failures
            .into_iter()
            .next()
            .map(|(_, _, msg)| Error::invalid(msg))
            .unwrap_or_else(|| Error::invalid("no scenario produced a result")));
    }
    Ok(Table1 { rows, failures })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table2 {
    pub rows: Vec<(Preset, WalkBatchStats)>,
}

impl Table2 {
    pub fn get(&self, p: Preset) -> &WalkBatchStats {
        &self.rows.iter().find(|(q, _)| *q == p).expect("all scenarios present").1
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut out = String::from("graph,mean_of_means,sd_of_means,mean_of_maxes,sd_of_maxes,num_walks,steps\n");
        for (p, s) in &self.rows {
            out.push_str(&format!(
                "{p},{},{},{},{},{},{}\n",
                s.mean_of_means, s.sd_of_means, s.mean_of_maxes, s.sd_of_maxes, s.num_walks, s.steps
            ));
        }
        io::write_text(&dir.join("table2.csv"), &out)
    }
}

/// The first graph of each scenario, as used by the walk experiments.
pub fn scenario_graphs(cfg: &ExperimentConfig, points: &Arc<PointSet>) -> Result<Vec<(Preset, Graph)>> {
    Preset::ALL.par_iter().map(|&p| Ok((p, scenario_graph(cfg, points, p, 0)?.graph()))).collect()
}

/// Walk statistics on each scenario graph. The same start vertices and walk
/// seeds are used on every graph.
pub fn run_table2(cfg: &ExperimentConfig, points: &PointSet, graphs: &[(Preset, Graph)]) -> Result<Table2> {
    let seed = derive_seed(cfg.seed, &[SEED_WALKS]);
    let rows = graphs
        .iter()
        .map(|(p, g)| Ok((*p, walks::batch_walk_stats(g, points, cfg.walks.num_walks, cfg.walks.steps, seed)?)))
        .collect::<Result<_>>()?;
    Ok(Table2 { rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Replication {
    pub start_vertex: usize,
    pub records: Vec<(Preset, ReplicationRecord)>,
}

impl Replication {
    pub fn get(&self, p: Preset) -> &ReplicationRecord {
        &self.records.iter().find(|(q, _)| *q == p).expect("all scenarios present").1
    }

    pub fn write(&self, dir: &Path, points: &PointSet) -> Result<()> {
        let mut summary = String::from("graph,start_vertex,replicants,walking_replicants,visited,max_spawn_distance\n");
        for (p, rec) in &self.records {
            io::write_replication(&dir.join(format!("replication_{p}.csv")), rec, points)?;
            summary.push_str(&format!(
                "{p},{},{},{},{},{}\n",
                rec.start,
                rec.replicants.len(),
                rec.walking_replicants(),
                rec.visited.len(),
                rec.max_spawn_distance(points)
            ));
        }
        io::write_text(&dir.join("replication_summary.csv"), &summary)
    }
}

/// Replicating walk from the vertex nearest the configured start on every
/// scenario graph.
pub fn run_replicating(cfg: &ExperimentConfig, points: &PointSet, graphs: &[(Preset, Graph)]) -> Result<Replication> {
    let start = cfg.replication_start()?;
    let start_vertex = points.nearest(start).ok_or_else(|| Error::invalid("empty point set"))?;
    let seed = derive_seed(cfg.seed, &[SEED_REPLICATION]);
    let records = graphs
        .iter()
        .map(|(p, g)| Ok((*p, walks::replicating_walk(g, start_vertex, cfg.walks.steps, cfg.walks.delay, seed)?)))
        .collect::<Result<_>>()?;
    Ok(Replication { start_vertex, records })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    /// 0 for disconnected graphs.
    pub lambda1: f64,
    pub connected: bool,
    pub edge_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub references: BTreeMap<Preset, f64>,
    /// Radius at which the curve first reaches the Γ_C reference.
    pub crossing: Option<f64>,
}

/// Linear-interpolated radius where `(r, value)` first reaches `target`.
pub fn find_crossing(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    let i = curve.iter().position(|&(_, v)| v >= target)?;
    if i == 0 {
        return Some(curve[0].0);
    }
    let (r0, v0) = curve[i - 1];
    let (r1, v1) = curve[i];
    Some(r0 + (target - v0) * (r1 - r0) / (v1 - v0))
}

impl Sweep {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let refs: Vec<String> = [Preset::U, Preset::S, Preset::C]
            .iter()
            .map(|p| self.references.get(p).map(|v| v.to_string()).unwrap_or_default())
            .collect();
        let mut out = String::from("r,lambda1,connected,edge_count,ref_U,ref_S,ref_C\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", row.r, row.lambda1, row.connected, row.edge_count, refs.join(",")));
        }
        io::write_text(&dir.join("sweep.csv"), &out)?;
        let crossing = match self.crossing {
            Some(r) => format!("reference,lambda1_reference,crossing_r\nC,{},{r}\n", refs[2]),
            None => format!("reference,lambda1_reference,crossing_r\nC,{},no crossing in range\n", refs[2]),
        };
        io::write_text(&dir.join("sweep_crossing.csv"), &crossing)
    }
}

/// λ₁ of the deterministic threshold graphs over the configured radius grid,
/// and the crossing with the Γ_C reference.
pub fn run_r_sweep(cfg: &ExperimentConfig, points: &PointSet, references: BTreeMap<Preset, f64>) -> Result<Sweep> {
    let mut rows = Vec::with_capacity(cfg.sweep.count);
    for r in cfg.sweep.radii() {
        let g = graphgen::threshold_graph(points, r)?;
        let connected = g.is_connected();
        let lambda1 = if connected { spectral::lambda1(&g, cfg.tol)?.lambda1 } else { 0.0 };
        info!("sweep r = {r:.4}: {} edges, lambda1 = {lambda1:.6}", g.edge_count());
        rows.push(SweepRow { r, lambda1, connected, edge_count: g.edge_count() });
    }
    let crossing = references.get(&Preset::C).and_then(|&target| {
        let curve: Vec<(f64, f64)> = rows.iter().map(|row| (row.r, row.lambda1)).collect();
        find_crossing(&curve, target)
    });
    Ok(Sweep { rows, references, crossing })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Figure1Row {
    pub function: usize,
    pub level: usize,
    pub r: f64,
    pub lambda1: AggregateRow,
    pub max_valency: AggregateRow,
    pub avg_valency: AggregateRow,
    pub sparsity: AggregateRow,
    /// Iterations whose layer was disconnected (λ₁ recorded as 0).
    pub disconnected: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Figure1 {
    pub rows: Vec<Figure1Row>,
}

impl Figure1 {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut out = String::from(
            "function,level,r,lambda1_mean,lambda1_sd,max_valency_mean,max_valency_sd,avg_valency_mean,avg_valency_sd,sparsity_mean,sparsity_sd,iterations,disconnected\n",
        );
        for row in &self.rows {
            out.push_str(&format!(
                "phi{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.function + 1,
                row.level,
                row.r,
                row.lambda1.mean,
                row.lambda1.sd,
                row.max_valency.mean,
                row.max_valency.sd,
                row.avg_valency.mean,
                row.avg_valency.sd,
                row.sparsity.mean,
                row.sparsity.sd,
                row.lambda1.count,
                row.disconnected
            ));
        }
        io::write_text(&dir.join("figure1.csv"), &out)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct LayerSample {
    lambda1: f64,
    max_valency: f64,
    avg_valency: f64,
    sparsity: f64,
    connected: bool,
}

fn layer_samples(lg: &LayeredGraph, tol: f64) -> Result<Vec<LayerSample>> {
    (1..=lg.num_layers())
        .map(|k| {
            let g = lg.layer(k)?;
            let connected = g.is_connected();
            let lambda1 = if connected { spectral::lambda1(&g, tol)?.lambda1 } else { 0.0 };
            let val = stats::valency_stats(&g)?;
            Ok(LayerSample { lambda1, max_valency: val.max as f64, avg_valency: val.avg, sparsity: stats::sparsity(&g)?, connected })
        })
        .collect()
}

/// Layer-by-layer statistics on a uniform point set for the five
/// uniform-square connection functions.
pub fn run_figure1(cfg: &ExperimentConfig) -> Result<Figure1> {
    let f1 = &cfg.figure1;
    let seed = derive_seed(cfg.seed, &[SEED_FIGURE1]);
    let points = Arc::new(pointset::sample_uniform(f1.n, f1.side, f1.side, seed)?);
    let diag = f1.side * 2f64.sqrt();
    let h = diag / f1.levels as f64;
    let functions: Vec<ConnectionFunction> = connection::uniform_square_forms()
        .iter()
        .map(|form| connection::discretize(|r| form.eval(r), h, diag))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..functions.len()).flat_map(|f| (0..cfg.iterations).map(move |i| (f, i))).collect();
    let samples: Vec<Vec<LayerSample>> = jobs
        .par_iter()
        .map(|&(f, i)| {
            let lg = graphgen::generate(Arc::clone(&points), &functions[f], derive_seed(seed, &[f as u64, i as u64]))?;
            layer_samples(&lg, cfg.tol)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (f, cf) in functions.iter().enumerate() {
        let runs = &samples[f * cfg.iterations..(f + 1) * cfg.iterations];
        for level in 0..cf.num_bands() {
            let col = |get: fn(&LayerSample) -> f64| runs.iter().map(|s| get(&s[level])).collect::<Vec<f64>>();
            let group = format!("phi{}", f + 1);
            rows.push(Figure1Row {
                function: f,
                level: level + 1,
                r: cf.radii()[level],
                lambda1: AggregateRow::from_samples(&group, "lambda1", Some(level + 1), &col(|s| s.lambda1)),
                max_valency: AggregateRow::from_samples(&group, "max_valency", Some(level + 1), &col(|s| s.max_valency)),
                avg_valency: AggregateRow::from_samples(&group, "avg_valency", Some(level + 1), &col(|s| s.avg_valency)),
                sparsity: AggregateRow::from_samples(&group, "sparsity", Some(level + 1), &col(|s| s.sparsity)),
                disconnected: runs.iter().filter(|s| !s[level].connected).count(),
            });
        }
    }
    Ok(Figure1 { rows })
}

/// Writes the points file and a snapshot of the resolved configuration.
pub fn write_common(dir: &Path, cfg: &ExperimentConfig, points: &PointSet) -> Result<()> {
    io::write_points(&dir.join("points.csv"), points)?;
    io::write_text(&dir.join("config.toml"), &cfg.to_toml())
}
