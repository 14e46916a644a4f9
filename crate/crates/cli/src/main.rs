use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dla_cli::analyze::{cmd_analyze, LadderKind};
use dla_cli::config::{Analysis, Engine, ExperimentConfig};
use dla_cli::grow::{cmd_fixture, cmd_grow, fixture_kind, CONFIG_FILE};
use dla_cli::render::{cmd_render, SliceSpec};
use dla_cli::report::cmd_report;
use dla_cli::snapshot::Snapshot;
use dla_cli::CliError;

#[derive(Parser)]
#[command(name = "dla", version, about = "Lattice Laplacian growth experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a cluster and write cluster.snap, history.csv and config.json.
    Grow(GrowArgs),
    /// Fit dimensions of a snapshot and write results.json.
    Analyze(AnalyzeArgs),
    /// Compare 3D slicing estimates with the turbulence reference table.
    Report(ReportArgs),
    /// Draw a snapshot (or a slice of a 3D one) as a PGM image.
    Render(RenderArgs),
    /// Write a deterministic fractal fixture as a snapshot.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct Shared {
    /// JSON experiment config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    engine: Option<Engine>,
    /// Number of particles to attach.
    #[arg(long)]
    n: Option<usize>,
}

impl Shared {
    fn resolve(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = self.dim {
            cfg.dim = v;
        }
        if let Some(v) = self.engine {
            cfg.engine = v;
        }
        if let Some(v) = self.n {
            cfg.n_particles = v;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct GrowArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long)]
    launch_factor: Option<f64>,
    #[arg(long)]
    kill_factor: Option<f64>,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    grid_margin: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    /// SOR relaxation factor.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_sweeps: Option<usize>,
    /// Also write the final DBM potential to field.txt.
    #[arg(long)]
    dump_field: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    snapshot: PathBuf,
    #[command(flatten)]
    shared: Shared,
    #[arg(long)]
    boxdim: bool,
    #[arg(long)]
    rgdim: bool,
    /// Slice codimension: 1 for planes, 2 for lines.
    #[arg(long)]
    slicedim: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    slices: usize,
    #[arg(long, default_value = "dyadic")]
    ladder: LadderKind,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(required = true)]
    results: Vec<PathBuf>,
    /// Directory for report.txt and report.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    snapshot: PathBuf,
    /// Output .pgm file, or a directory to hold cluster.pgm.
    #[arg(long, default_value = "cluster.pgm")]
    out: PathBuf,
    /// Planar cut for 3D snapshots, e.g. z=0.
    #[arg(long)]
    slice: Option<SliceSpec>,
}

#[derive(Args)]
struct FixtureArgs {
    /// carpet, menger or square.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    depth: u32,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn grow(args: GrowArgs) -> anyhow::Result<()> {
    let mut cfg = args.shared.resolve()?;
    let w = &mut cfg.walker;
    if let Some(v) = args.launch_factor {
        w.launch_factor = v;
    }
    if let Some(v) = args.kill_factor {
        w.kill_factor = v;
    }
    if let Some(v) = args.max_steps {
        w.max_steps_per_walker = v;
    }
    let d = &mut cfg.dbm;
    if let Some(v) = args.grid_margin {
        d.grid_margin = v;
    }
    if let Some(v) = args.eta {
        d.eta = v;
    }
    if let Some(v) = args.k {
        d.k = v;
    }
    if let Some(v) = args.omega {
        d.sor_omega = v;
    }
    if let Some(v) = args.tol {
        d.tol = v;
    }
    if let Some(v) = args.max_sweeps {
        d.max_sweeps = v;
    }
    println!("{}", cmd_grow(&cfg, args.dump_field)?);
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> anyhow::Result<()> {
    let cfg = args.shared.resolve()?;
    let mut analyses = Vec::new();
    if args.boxdim {
        analyses.push(Analysis::Boxdim);
    }
    if args.rgdim {
        analyses.push(Analysis::Rgdim);
    }
    for codim in args.slicedim {
        analyses.push(Analysis::Slicedim {
            codim,
            n_slices: args.slices,
        });
    }
    if analyses.is_empty() {
        analyses = cfg.analysis.clone();
        // Without --config, fall back to the config saved by `grow`.
        if analyses.is_empty() && args.shared.config.is_none() {
            let saved = args.snapshot.with_file_name(CONFIG_FILE);
            if saved.exists() {
                analyses = ExperimentConfig::load(&saved)?.analysis;
            }
        }
    }
    let results = cmd_analyze(&args.snapshot, &analyses, args.ladder, &cfg.output_dir)?;
    for r in &results.results {
        println!(
            "{} d={:.4} stderr={:.4} r2={:.4} scales={}",
            r.analysis.label(),
            r.estimate.d,
            r.estimate.stderr,
            r.estimate.r2,
            r.estimate.n_scales
        );
    }
    Ok(())
}

fn report(args: ReportArgs) -> anyhow::Result<()> {
    let (_, text) = cmd_report(&args.results, args.out.as_deref())?;
    print!("{text}");
    Ok(())
}

fn render(args: RenderArgs) -> anyhow::Result<()> {
    let snapshot = Snapshot::read(&args.snapshot)?;
    let out = if args.out.extension().is_some_and(|e| e == "pgm") {
        args.out
    } else {
        args.out.join("cluster.pgm")
    };
    let pgm = cmd_render(&snapshot.cluster, args.slice, &out)?;
    println!("wrote {} ({}x{})", out.display(), pgm.width, pgm.height);
    Ok(())
}

fn fixture(args: FixtureArgs) -> anyhow::Result<()> {
    let kind = fixture_kind(&args.kind)?;
    let line = cmd_fixture(kind, args.depth, &args.out)
        .with_context(|| format!("building {} fixture", args.kind))?;
    println!("{line}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Grow(a) => grow(a),
        Command::Analyze(a) => analyze(a),
        Command::Report(a) => report(a),
        Command::Render(a) => render(a),
        Command::Fixture(a) => fixture(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .chain()
                .find_map(|e| e.downcast_ref::<CliError>())
                .map_or(1, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
