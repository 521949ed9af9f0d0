use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use landelig_core::catalog::{Catalog, CriterionEntry, Motivation};
use landelig_core::prior::{
    build_prior_proximity, build_prior_value, edge_index_for_threshold, interpolate_criterion, read_prior, write_prior,
    CriterionKind, ProximitySource, NO_INDICATION, PRIOR_NODATA,
};
use landelig_core::raster::io::{read_asc, write_asc};
use landelig_core::vector::geojson::read_geojson;
use landelig_core::vector::{filter_attributes, AttributeFilter};
use landelig_core::workflow::{run_workflow, WorkflowConfig};
use landelig_core::{Extent, FloatGrid, GeoRef, Srs};

#[derive(Parser)]
#[command(name = "landelig", version, about = "Land eligibility analysis")]
struct Cli {
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true, env = "LANDELIG_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a workflow config and write its artifacts.
    Run {
        config: PathBuf,
        /// Output directory, overriding the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build or inspect edge-indexed prior datasets.
    Prior {
        #[command(subcommand)]
        command: PriorCommand,
    },
    /// Browse the built-in criterion catalog.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Proximity,
    ValueBelow,
    ValueAbove,
}

impl From<KindArg> for CriterionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Proximity => CriterionKind::Proximity,
            KindArg::ValueBelow => CriterionKind::ValueBelow,
            KindArg::ValueAbove => CriterionKind::ValueAbove,
        }
    }
}

#[derive(Subcommand)]
enum PriorCommand {
    /// Build a prior from a vector source (proximity) or a value raster.
    Build {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Comma-separated, strictly increasing edges. Defaults to the
        /// railway edge set.
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<f64>>,
        /// GeoJSON features to measure distance from (proximity).
        #[arg(long)]
        vector: Option<PathBuf>,
        /// Attribute filter applied to `--vector`.
        #[arg(long)]
        filter: Option<String>,
        /// Value raster (.asc) for value priors, or the target grid for
        /// proximity priors.
        #[arg(long)]
        raster: Option<PathBuf>,
        /// Target bounds `x_min,y_min,x_max,y_max` when no raster is given.
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<f64>>,
        #[arg(long)]
        resolution: Option<f64>,
        #[arg(long, default_value = "local_meters")]
        srs: String,
        #[arg(long, default_value = "")]
        name: String,
        #[arg(long, default_value = "m")]
        units: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print a prior's edges and code histogram.
    Inspect {
        path: PathBuf,
        /// Show how a criterion threshold snaps to the edges.
        #[arg(long)]
        threshold: Option<f64>,
        /// Write the interpolated criterion estimate to this .asc file.
        #[arg(long)]
        interpolate: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List criteria, optionally for one motivation group.
    List {
        #[arg(long)]
        motivation: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Show one criterion with its thresholds and priors.
    Show { name: String },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring thread pool")?;
    }
    match cli.command {
        Command::Run { config, out } => run_config(&config, out.as_deref()),
        Command::Prior { command } => prior(command),
        Command::Catalog { command } => catalog(command),
    }
}

fn run_config(config: &Path, out: Option<&Path>) -> Result<()> {
    let (cfg, base) = WorkflowConfig::load(config)?;
    let report = run_workflow(&cfg, &base, out)?;
    for s in &report.steps {
        println!("{:<32} removed {:>9}  available {:>8.4}", s.label, s.removed, s.percent_available);
    }
    println!("available: {:.6} of {} region pixels", report.percent_available, report.region_pixels);
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

fn target_grid(raster: Option<&Path>, bounds: Option<&[f64]>, resolution: Option<f64>, srs: &str) -> Result<GeoRef> {
    match (raster, bounds, resolution) {
        (Some(p), None, None) => Ok(*read_asc::<f32>(p)?.0.georef()),
        (None, Some(b), Some(d)) => {
            if b.len() != 4 {
                bail!("--bounds takes four numbers: x_min,y_min,x_max,y_max");
            }
            let ext = Extent::new(b[0], b[1], b[2], b[3])?;
            Ok(GeoRef::from_extent(Srs::from_name(srs)?, ext, d, d)?)
        }
        _ => bail!("give either --raster or both --bounds and --resolution"),
    }
}

fn prior(cmd: PriorCommand) -> Result<()> {
    match cmd {
        PriorCommand::Build { kind, edges, vector, filter, raster, bounds, resolution, srs, name, units, output } => {
            let edges = edges.unwrap_or_else(landelig_core::prior::railway_edges);
            let p = match CriterionKind::from(kind) {
                CriterionKind::Proximity => {
                    let path = vector.context("proximity priors need --vector")?;
                    let mut fs = read_geojson(&path)?;
                    if let Some(f) = filter {
                        fs = filter_attributes(&fs, &AttributeFilter::parse(&f)?);
                    }
                    let g = target_grid(raster.as_deref(), bounds.as_deref(), resolution, &srs)?;
                    build_prior_proximity(ProximitySource::Features(&fs), &g, &edges)?
                }
                k => {
                    let path = raster.context("value priors need --raster")?;
                    let grid: FloatGrid = read_asc(&path)?.0;
                    build_prior_value(&grid, &edges, k)?
                }
            };
            let p = p.with_name(&name, &units);
            write_prior(&p, &output)?;
            println!("wrote {} ({} edges)", output.display(), p.edges.len());
        }
        PriorCommand::Inspect { path, threshold, interpolate } => {
            let p = read_prior(&path)?;
            let g = p.grid.georef();
            println!("name:  {}", p.name);
            println!("kind:  {}", p.kind.name());
            println!("units: {}", p.units);
            println!("grid:  {}×{} at {}×{} ({})", g.nx, g.ny, g.dx, g.dy, g.srs.name());
            let h = p.histogram();
            for (i, e) in p.edges.iter().enumerate() {
                println!("  {i:>3}  {e:>12}  {:>10}", h[i]);
            }
            println!("  {NO_INDICATION}  no indication  {:>10}", h[NO_INDICATION as usize]);
            println!("  {PRIOR_NODATA}  nodata         {:>10}", h[PRIOR_NODATA as usize]);
            if let Some(t) = threshold {
                let (th, warning) = edge_index_for_threshold(&p, t);
                println!(
                    "threshold {t} -> edge {} (index {}, error {})",
                    th.snapped_edge, th.snapped_index, th.snap_error
                );
                if let Some(w) = warning {
                    println!("warning: {w}");
                }
            }
            if let Some(out) = interpolate {
                write_asc(&interpolate_criterion(&p)?, &out, None)?;
                println!("wrote {}", out.display());
            }
        }
    }
    Ok(())
}

fn fmt_level(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| v.to_string())
}

fn catalog(cmd: CatalogCommand) -> Result<()> {
    let cat = Catalog::builtin();
    match cmd {
        CatalogCommand::List { motivation, json } => {
            let filter = motivation.as_deref().map(str::parse::<Motivation>).transpose()?;
            let entries = cat.list(filter);
            if json {
                println!("{}", serde_json::to_string_pretty(&entries)?);
                return Ok(());
            }
            for e in entries {
                let name = if e.is_general() { e.name.clone() } else { format!("  {}", e.name) };
                let excludes = e.excludes.map_or("", |x| x.phrase());
                println!(
                    "{:<30} {:<15} {:<16} {:>8} {:>8} {:>8} {}",
                    name,
                    e.motivation.name(),
                    excludes,
                    fmt_level(e.low),
                    fmt_level(e.typical),
                    fmt_level(e.high),
                    e.unit.as_deref().unwrap_or("")
                );
            }
        }
        CatalogCommand::Show { name } => {
            let e: &CriterionEntry = cat.entry(&name)?;
            println!("{}", serde_json::to_string_pretty(e)?);
            for p in cat.priors_for(&e.name) {
                println!("prior: {} ({} edges): {}", p.name, p.edges, p.description);
            }
        }
    }
    Ok(())
}
