//! `torus-spectra`: build geometric graphs on the torus, compute Laplacian
//! spectra and run the RGG/DGG comparison experiments.
//!
//! Exit codes: 0 success, 2 config error, 3 numeric or singularity error,
//! 4 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use torus_spectra::analytic::{lemma1_spectrum, lemma2_spectrum};
use torus_spectra::experiments::{self, cdf_grid, RegimeConfig};
use torus_spectra::io;
use torus_spectra::spectra::{self, DEFAULT_DENSE_CAP};
use torus_spectra::{
    assemble, assemble_circulant, build_dgg, sample_rgg, DistanceReport, EigenOptions, Error,
    ErrorClass, GeometricGraph, GraphKind, Metric, PointSet, SpectralDistribution,
};

#[derive(Parser)]
#[command(
    name = "torus-spectra",
    version,
    about = "Regularized normalized Laplacian spectra of geometric graphs on the unit torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a random (rgg) or lattice (dgg) geometric graph and write its edge list.
    Graph {
        #[arg(value_enum)]
        kind: KindArg,
        #[command(flatten)]
        params: GraphArgs,
        /// Edge-list CSV; a JSON sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
        /// Also write the vertex coordinates as CSV.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Compute the full spectrum of the regularized normalized Laplacian.
    Spectrum(SpectrumArgs),
    /// Evaluate closed-form lattice spectra.
    Analytic {
        #[command(subcommand)]
        law: AnalyticCommand,
    },
    /// Lévy and Kolmogorov–Smirnov distances between two eigenvalue CSVs (JSON on stdout).
    Distance {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Bisection tolerance of the Lévy distance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run an experiment from a JSON config.
    Experiment {
        #[arg(value_enum)]
        which: ExperimentArg,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Parallel trial workers (overrides the config).
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Rgg,
    Dgg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Fig2a,
    Fig2b,
    Sweep,
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Number of vertices (a perfect d-th power for dgg).
    #[arg(long)]
    n: usize,
    /// Connection radius in (0, 1/2].
    #[arg(long)]
    r: f64,
    /// Torus dimension.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// euclidean, chebyshev or lp:<p>.
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
    /// RNG seed (rgg only).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Edge-list CSV written by `graph` (its JSON sidecar must sit next to it).
    #[arg(long, conflicts_with_all = ["kind", "n", "r"])]
    graph: Option<PathBuf>,
    /// Build the graph inline instead of reading it.
    #[arg(long, value_enum, requires_all = ["n", "r"])]
    kind: Option<KindArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Regularizer α >= 0.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Eigenvalue CSV output.
    #[arg(long)]
    out: PathBuf,
    /// Optional CDF CSV on a uniform grid over [0, 2].
    #[arg(long)]
    cdf_out: Option<PathBuf>,
    #[arg(long, default_value_t = io::DEFAULT_GRID_POINTS)]
    grid_points: usize,
    /// Use the dense solver even for 1-d lattice graphs.
    #[arg(long)]
    dense: bool,
    /// Check eigenpair residuals (dense solver only).
    #[arg(long)]
    verify: bool,
    /// Largest order accepted by the dense solver.
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    cap: usize,
    /// Write the dense matrix as CSV (n <= 1024).
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AnalyticCommand {
    /// Exact spectrum of the unregularized 1-d lattice graph with degree 2 floor(n r).
    Lemma1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        cdf_out: Option<PathBuf>,
        #[arg(long, default_value_t = io::DEFAULT_GRID_POINTS)]
        grid_points: usize,
    },
    /// Limiting spectrum for mean degree γ sampled at w_j = jπ/M.
    Lemma2 {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.001)]
        alpha: f64,
        /// Number of frequency samples M.
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        cdf_out: Option<PathBuf>,
        #[arg(long, default_value_t = io::DEFAULT_GRID_POINTS)]
        grid_points: usize,
    },
}

fn build_graph(kind: KindArg, p: &GraphArgs) -> torus_spectra::Result<GeometricGraph> {
    match kind {
        KindArg::Rgg => sample_rgg(p.n, p.r, p.d, p.metric, p.seed),
        KindArg::Dgg => build_dgg(p.n, p.r, p.d, p.metric),
    }
}

fn write_spectrum(
    f: &SpectralDistribution,
    out: &Path,
    cdf_out: Option<&Path>,
    grid_points: usize,
) -> torus_spectra::Result<()> {
    io::write_eigenvalues_csv(f, out)?;
    if let Some(path) = cdf_out {
        if grid_points < 2 {
            return Err(Error::InvalidParameter {
                name: "grid_points",
                reason: "need at least 2".into(),
            });
        }
        io::write_cdf_csv(f, &cdf_grid(grid_points), path)?;
    }
    Ok(())
}

fn spectrum(args: SpectrumArgs) -> torus_spectra::Result<()> {
    let graph = match (&args.graph, args.kind) {
        (Some(path), _) => io::read_graph(path)?,
        (None, Some(kind)) => build_graph(
            kind,
            &GraphArgs {
                n: args.n.unwrap_or_default(),
                r: args.r.unwrap_or_default(),
                d: args.d,
                metric: args.metric,
                seed: args.seed,
            },
        )?,
        (None, None) => {
            return Err(Error::Config(
                "give --graph <edges.csv> or --kind with --n and --r".into(),
            ))
        }
    };
    let circulant = !args.dense && graph.kind() == GraphKind::Dgg && graph.dim() == 1;
    let laplacian = if circulant {
        assemble_circulant(&graph, args.alpha)?
    } else {
        assemble(&graph, args.alpha)?
    };
    if let Some(path) = &args.dump_matrix {
        io::write_matrix_csv(&laplacian, path)?;
    }
    let opts = EigenOptions {
        cap: args.cap,
        verify: args.verify,
    };
    let f = spectra::eigenvalues(&laplacian, &opts)?;
    write_spectrum(&f, &args.out, args.cdf_out.as_deref(), args.grid_points)
}

fn experiment(
    which: ExperimentArg,
    config: &Path,
    out_dir: &Path,
    workers: Option<usize>,
) -> torus_spectra::Result<()> {
    let text = fs::read_to_string(config).map_err(|e| Error::Io {
        path: config.to_path_buf(),
        source: e,
    })?;
    let mut cfg: RegimeConfig = io::parse_config(&text)?;
    if let Some(w) = workers {
        cfg.workers = w;
        cfg.validate()?;
    }
    io::create_dir(out_dir)?;
    let manifest = match which {
        ExperimentArg::Fig2a => experiments::reproduce_fig2a(&cfg, out_dir)?,
        ExperimentArg::Fig2b => experiments::reproduce_fig2b(&cfg, out_dir)?,
        ExperimentArg::Sweep => experiments::run_sweep_to_dir(&cfg, out_dir)?.1,
    };
    for name in manifest.outputs.keys() {
        println!("{}", out_dir.join(name).display());
    }
    println!("{}", out_dir.join("manifest.json").display());
    Ok(())
}

fn run(cli: Cli) -> torus_spectra::Result<()> {
    match cli.command {
        Command::Graph {
            kind,
            params,
            out,
            points,
        } => {
            let graph = build_graph(kind, &params)?;
            io::write_graph(&graph, &out)?;
            if let Some(path) = points {
                let set = match kind {
                    KindArg::Rgg => PointSet::random(params.n, params.d, params.seed)?,
                    KindArg::Dgg => PointSet::lattice(params.n, params.d)?,
                };
                io::write_points_csv(&set, &path)?;
            }
            Ok(())
        }
        Command::Spectrum(args) => spectrum(args),
        Command::Analytic { law } => match law {
            AnalyticCommand::Lemma1 {
                n,
                r,
                out,
                cdf_out,
                grid_points,
            } => write_spectrum(
                &lemma1_spectrum(n, r)?,
                &out,
                cdf_out.as_deref(),
                grid_points,
            ),
            AnalyticCommand::Lemma2 {
                gamma,
                alpha,
                samples,
                out,
                cdf_out,
                grid_points,
            } => write_spectrum(
                &lemma2_spectrum(gamma, alpha, samples)?,
                &out,
                cdf_out.as_deref(),
                grid_points,
            ),
        },
        Command::Distance { a, b, tol } => {
            if tol.is_nan() || tol <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "tol",
                    reason: format!("must be > 0, got {tol}"),
                });
            }
            let fa = io::read_eigenvalues_csv(&a)?;
            let fb = io::read_eigenvalues_csv(&b)?;
            let report = DistanceReport::compute(&fa, &fb, tol);
            println!("{}", serde_json::to_string(&report)?);
            Ok(())
        }
        Command::Experiment {
            which,
            config,
            out_dir,
            workers,
        } => experiment(which, &config, &out_dir, workers),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Config => 2,
                ErrorClass::Numeric => 3,
                ErrorClass::Io => 4,
            })
        }
    }
}
