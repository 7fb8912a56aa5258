use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use horograph::connection::Preset;
use horograph::runner::{self, ConnectionSpec, ExperimentConfig};
use horograph::{graphgen, io, stats, walks, PointSet, Result};

#[derive(Parser)]
#[command(name = "horograph", version, about = "Layered random geometric graphs and walk experiments")]
struct Cli {
    /// Top-level random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Graphs per random scenario.
    #[arg(long, global = true)]
    iterations: Option<usize>,
    /// Eigenvalue tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Connection function: U, S, C, I or a TOML band file.
    #[arg(long, global = true)]
    phi: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the point set and one graph; writes points.csv and edges.csv.
    Generate,
    /// Summary statistics of one graph (generated, or read from files).
    Stats {
        #[arg(long, requires = "edges")]
        points: Option<PathBuf>,
        #[arg(long, requires = "points")]
        edges: Option<PathBuf>,
    },
    /// Statistics of the four scenario graphs.
    Table1,
    /// Simple random walk distances on the four scenario graphs.
    Table2,
    /// Layer statistics for the five uniform-square connection functions.
    Figure1,
    /// Replicating walk on the four scenario graphs.
    Repwalk,
    /// λ₁ of threshold graphs over a radius grid against the scenario references.
    Sweep,
    /// One simple random walk; writes walk.csv.
    Walk {
        /// Start vertex; random when absent.
        #[arg(long)]
        start: Option<usize>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(it) = cli.iterations {
        cfg.iterations = it;
    }
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    if let Some(phi) = &cli.phi {
        cfg.connection = match phi.parse::<Preset>() {
            Ok(name) => ConnectionSpec::Preset { name },
            Err(_) => ConnectionSpec::File { path: PathBuf::from(phi) },
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

type ScenarioGraphs = Vec<(Preset, graphgen::Graph)>;

fn points_and_graphs(cfg: &ExperimentConfig, out: &Path) -> Result<(Arc<PointSet>, ScenarioGraphs)> {
    let points = Arc::new(cfg.build_points()?);
    runner::write_common(out, cfg, &points)?;
    let graphs = runner::scenario_graphs(cfg, &points)?;
    Ok((points, graphs))
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let out = cli.out.as_path();
    match &cli.command {
        Command::Generate => {
            let points = Arc::new(cfg.build_points()?);
            runner::write_common(out, &cfg, &points)?;
            let lg = graphgen::generate(Arc::clone(&points), &cfg.build_connection()?, cfg.graph_seed(0, 0))?;
            io::write_edges(&out.join("edges.csv"), &lg)?;
            println!("{} points, {} edges", points.len(), lg.tagged_edges().len());
        }
        Command::Stats { points, edges } => {
            let cf = cfg.build_connection()?;
            let lg = match (points, edges) {
                (Some(p), Some(e)) => {
                    let bbox = cfg.bbox();
                    let ps = Arc::new(io::read_points(p, bbox, "file")?);
                    io::read_edges(e, ps, cf, cfg.graph_seed(0, 0))?
                }
                _ => {
                    let ps = Arc::new(cfg.build_points()?);
                    graphgen::generate(ps, &cf, cfg.graph_seed(0, 0))?
                }
            };
            let summary = stats::summarize(&lg.graph(), cfg.tol)?;
            let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            io::write_text(&out.join("stats.json"), &(json.clone() + "\n"))?;
            println!("{json}");
        }
        Command::Table1 => {
            let points = Arc::new(cfg.build_points()?);
            runner::write_common(out, &cfg, &points)?;
            let table = runner::run_table1(&cfg, &points)?;
            table.write(out)?;
            for row in table.aggregates() {
                println!("{} {:>15} {:>14.6} ± {:.6}", row.group, row.statistic, row.mean, row.sd);
            }
        }
        Command::Table2 => {
            let (points, graphs) = points_and_graphs(&cfg, out)?;
            let table = runner::run_table2(&cfg, &points, &graphs)?;
            table.write(out)?;
            for (p, s) in &table.rows {
                println!(
                    "{p}: mean {:.4} ± {:.4}, max {:.4} ± {:.4}",
                    s.mean_of_means, s.sd_of_means, s.mean_of_maxes, s.sd_of_maxes
                );
            }
        }
        Command::Figure1 => {
            let fig = runner::run_figure1(&cfg)?;
            io::write_text(&out.join("config.toml"), &cfg.to_toml())?;
            fig.write(out)?;
            println!("{} rows written to {}", fig.rows.len(), out.join("figure1.csv").display());
        }
        Command::Repwalk => {
            let (points, graphs) = points_and_graphs(&cfg, out)?;
            let rep = runner::run_replicating(&cfg, &points, &graphs)?;
            rep.write(out, &points)?;
            for (p, rec) in &rep.records {
                println!(
                    "{p}: {} replicants, max spawn distance {:.4}",
                    rec.replicants.len(),
                    rec.max_spawn_distance(&points)
                );
            }
        }
        Command::Sweep => {
            let points = Arc::new(cfg.build_points()?);
            runner::write_common(out, &cfg, &points)?;
            let refs = runner::run_scenarios(&cfg, &points, &[Preset::U, Preset::S, Preset::C])?.references();
            let sweep = runner::run_r_sweep(&cfg, &points, refs)?;
            sweep.write(out)?;
            match sweep.crossing {
                Some(r) => println!("crossing with the C reference at r = {r:.4}"),
                None => println!("no crossing in range"),
            }
        }
        Command::Walk { start, steps } => {
            let points = Arc::new(cfg.build_points()?);
            runner::write_common(out, &cfg, &points)?;
            let g = graphgen::generate(Arc::clone(&points), &cfg.build_connection()?, cfg.graph_seed(0, 0))?.graph();
            let start = match start {
                Some(v) => *v,
                None => walks::batch_walk_params(g.n(), cfg.seed, 0).0,
            };
            let trace = walks::simple_walk(&g, start, *steps, cfg.seed)?;
            io::write_trace(&out.join("walk.csv"), &trace, &points)?;
            let d = walks::trace_distance_stats(&trace, &points)?;
            println!("start {start}: mean distance {:.4}, max distance {:.4}", d.mean_pairwise, d.max_pairwise);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
