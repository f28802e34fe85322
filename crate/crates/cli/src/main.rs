use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dendrite::analysis::{empirical_bt, metrics, order_bounds};
use dendrite::geometry::Point;
use dendrite::maintree::{MainTree, MainTreeExport};
use dendrite::morphism::{
    check_equivalence, check_equivalence_permuted, conjugacy_residuals, conjugate_point,
    holder_certificate, Equivalence, HolderCertificate, ResidualReport,
};
use dendrite::render::{render_svg, RenderOptions};
use dendrite::system::{load_system, PolygonalTreeSystem};
use dendrite::Error;

/// Self-similar dendrites from polygonal tree systems.
#[derive(Parser)]
#[command(name = "dendrite", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Refinement or skeleton depth (default depends on the command).
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random samples (default depends on the command).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a spec file; exit 1 if it is rejected.
    Validate { spec: PathBuf },
    /// Draw refinement cells, optionally with the main tree, as SVG.
    Render {
        spec: PathBuf,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 800)]
        height: u32,
        /// Overlay the main tree skeleton.
        #[arg(long)]
        tree: bool,
        /// Circle the main ramification points.
        #[arg(long)]
        ramifications: bool,
        /// Leave out the cell layer.
        #[arg(long)]
        no_cells: bool,
        /// Skeleton depth for the overlay.
        #[arg(long)]
        tree_depth: Option<usize>,
    },
    /// Main tree skeleton and ramification points as JSON.
    Tree { spec: PathBuf },
    /// Order caps, vertex fibers and skeleton degrees.
    Orders { spec: PathBuf },
    /// Separation constants, bounded turning constant and order caps.
    Metrics { spec: PathBuf },
    /// Combinatorial equivalence and Hölder exponents of two systems.
    Morphism {
        first: PathBuf,
        second: PathBuf,
        /// Also try every relabelling of the second system's vertices.
        #[arg(long)]
        search_permutations: bool,
    },
    /// Image of a point under the conjugacy between two attractors.
    MapPoint {
        first: PathBuf,
        second: PathBuf,
        /// Coordinates as `x,y`.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
    },
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Point::new(x, y))
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_)
            | Error::Schema { .. }
            | Error::Polygon { .. }
            | Error::NotContraction { .. }
            | Error::NonFiniteMap { .. }
            | Error::TooFewMaps(_)
            | Error::Geometry(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<PolygonalTreeSystem, Failure> {
    load_system(path).map_err(|e| match e {
        Error::Io(io) => Failure::Usage(format!("{}: {io}", path.display())),
        e => Failure::from(e),
    })
}

/// Loads a system and refuses it unless it satisfies the axioms.
fn load_accepted(path: &Path) -> Result<PolygonalTreeSystem, Failure> {
    let sys = load(path)?;
    let report = sys.validate();
    if !report.accepted {
        return Err(Failure::Domain(format!(
            "{} is not a valid system\n{report}",
            path.display()
        )));
    }
    Ok(sys)
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn emit_json<T: Serialize>(common: &Common, value: &T) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    emit(common, &text)
}

#[derive(Serialize)]
struct MorphismReport {
    first: String,
    second: String,
    #[serde(flatten)]
    equivalence: Equivalence,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    beta: Option<f64>,
    beta_prime: Option<f64>,
    holder: Option<HolderCertificate>,
    residuals: Option<ResidualReport>,
}

#[derive(Serialize)]
struct MapPointReport {
    point: Point,
    image: Point,
    bound: f64,
    depth: usize,
    address: dendrite::attractor::Address,
    vertex: Option<usize>,
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Validate { spec } => {
            let sys = load(spec)?;
            let report = sys.validate();
            emit_json(c, &report)?;
            Ok(report.accepted)
        }
        Command::Render {
            spec,
            width,
            height,
            tree,
            ramifications,
            no_cells,
            tree_depth,
        } => {
            let sys = load_accepted(spec)?;
            let opts = RenderOptions {
                depth: c.depth.unwrap_or(6),
                tree_depth: *tree_depth,
                width: *width,
                height: *height,
                show_cells: !no_cells,
                show_tree: *tree,
                show_ramifications: *ramifications,
                ..Default::default()
            };
            let svg = render_svg(&sys, &opts).map_err(|e| match e {
                Error::Schema { message, .. } => Failure::Usage(message),
                e => Failure::from(e),
            })?;
            emit(c, &svg)?;
            Ok(true)
        }
        Command::Tree { spec } => {
            let sys = load_accepted(spec)?;
            let depth = c.depth.unwrap_or(8);
            let mt = MainTree::new(&sys)?;
            let tree = mt.skeleton_tree(depth)?;
            let ram = mt.main_ramification_points(depth)?;
            emit_json(c, &MainTreeExport::new(&sys, &tree, &ram))?;
            Ok(true)
        }
        Command::Orders { spec } => {
            let sys = load_accepted(spec)?;
            let tree = MainTree::new(&sys)?.skeleton_tree(c.depth.unwrap_or(8))?;
            emit_json(c, &order_bounds(&sys, &tree))?;
            Ok(true)
        }
        Command::Metrics { spec } => {
            let sys = load_accepted(spec)?;
            let mut report = metrics(&sys)?;
            let samples = c.samples.unwrap_or(1000);
            if samples > 0 {
                let tree = MainTree::new(&sys)?.skeleton_tree(c.depth.unwrap_or(8))?;
                report.empirical = Some(empirical_bt(&sys, &tree, samples, c.seed));
            }
            emit_json(c, &report)?;
            Ok(true)
        }
        Command::Morphism {
            first,
            second,
            search_permutations,
        } => {
            let a = load_accepted(first)?;
            let b = load_accepted(second)?;
            emit_json(c, &morphism_report(c, &a, &b, *search_permutations)?)?;
            Ok(true)
        }
        Command::MapPoint {
            first,
            second,
            point,
        } => {
            let a = load_accepted(first)?;
            let b = load_accepted(second)?;
            let depth = c.depth.unwrap_or(12);
            let r = conjugate_point(&a, &b, *point, depth)?;
            emit_json(
                c,
                &MapPointReport {
                    point: *point,
                    image: r.point,
                    bound: r.bound,
                    depth,
                    address: r.address,
                    vertex: r.vertex,
                },
            )?;
            Ok(true)
        }
    }
}

fn morphism_report(
    c: &Common,
    a: &PolygonalTreeSystem,
    b: &PolygonalTreeSystem,
    search: bool,
) -> Result<MorphismReport, Failure> {
    let mut report = MorphismReport {
        first: a.name().to_string(),
        second: b.name().to_string(),
        equivalence: Equivalence {
            equivalent: false,
            missing: Default::default(),
            extra: Default::default(),
            permutation: None,
        },
        reason: None,
        beta: None,
        beta_prime: None,
        holder: None,
        residuals: None,
    };
    let eq = if search {
        check_equivalence_permuted(a, b)
    } else {
        check_equivalence(a, b)
    };
    match eq {
        Ok(e) => report.equivalence = e,
        Err(Error::Mismatch(m)) => {
            report.reason = Some(m);
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    }
    if !report.equivalence.equivalent {
        return Ok(report);
    }
    // a relabelling that is a rotation can be undone on the second system
    let n = b.n();
    let aligned = match &report.equivalence.permutation {
        None => Some(b.clone()),
        Some(p) => {
            let shift = (n + 1 - p[0]) % n;
            let rotation = p.iter().enumerate().all(|(v, &t)| (t - 1 + shift) % n == v);
            if rotation {
                Some(b.rotate_vertices(shift)?)
            } else {
                report.reason = Some(
                    "vertex relabelling is not a rotation; conjugacy residuals skipped".into(),
                );
                None
            }
        }
    };
    let cert = holder_certificate(a, b)?;
    report.beta = Some(cert.beta);
    report.beta_prime = Some(cert.beta_prime);
    report.holder = Some(cert);
    if let Some(b) = aligned {
        let samples = c.samples.unwrap_or(100);
        if samples > 0 {
            report.residuals = Some(conjugacy_residuals(
                a,
                &b,
                c.depth.unwrap_or(12),
                samples,
                c.seed,
            )?);
        }
    }
    Ok(report)
}
