use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use frontal::classify::{classify_singular_point, Verdict};
use frontal::export::{field_samples, frame_rows, mesh_vertices, write_field_csv, write_frame_csv, write_frame_obj, write_obj_mesh, Grid};
use frontal::invariants::{edge_invariants, umbilic_analysis, InvariantProfile, UmbilicReport};
use frontal::ribaucour::{build_envelope, verify_ribaucour, ProfileCurve, RibaucourPair};
use frontal::suite::{run_suite, Group};
use frontal::surface::SurfaceDef;
use frontal::{Error, FrontalChart, NumericPolicy, SurfaceError};

/// Residual tolerance for Ribaucour pairs before `--tol-scale`.
const RIBAUCOUR_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "frontal", version, about = "Curvature, invariants and Ribaucour pairs of frontal surfaces")]
struct Cli {
    /// Worker threads for grid evaluation.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify points of the singular curve `v = 0`.
    Classify {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Points on the singular curve; may be repeated.
        #[arg(long = "u0", default_value = "0", allow_hyphen_values = true)]
        u0: Vec<f64>,
        #[arg(long)]
        allow_degenerate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Curvature field on a grid as CSV.
    Field {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value = "21x21")]
        grid: Grid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Curvature-line frames on a grid as CSV, or OBJ segments.
    Frames {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value = "21x21")]
        grid: Grid,
        /// Write OBJ line segments of this length instead of CSV.
        #[arg(long)]
        obj_scale: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Triangulated grid as OBJ.
    Mesh {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value = "41x41")]
        grid: Grid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariants along the singular curve.
    Invariants {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long = "u0", default_value = "0", allow_hyphen_values = true)]
        u0: Vec<f64>,
        /// Print JSON instead of the table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and check the Ribaucour pair of a circle profile.
    Ribaucour {
        /// Shipped profile.
        #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
        gallery: Option<String>,
        /// Profile TOML with `[profile]` and `[rho]` tables.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value = "32x32")]
        grid: Grid,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=12))]
        order: Option<u32>,
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        /// Directory for `f.obj`, `f_tilde.obj`, `center.obj` and `report.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long)]
        only: Option<Group>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=12))]
        order: Option<u32>,
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        /// Write the summary as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List shipped surfaces and profiles, or print one.
    Gallery {
        name: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct SurfaceArgs {
    #[arg(long, group = "source")]
    gallery: Option<String>,
    #[arg(long, group = "source")]
    surface: Option<PathBuf>,
    /// Jet order.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=12))]
    order: Option<u32>,
    /// Multiply every relative tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Surface(_) | Error::EmptyGrid { .. } => Failure::Usage(e.to_string()),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

impl From<SurfaceError> for Failure {
    fn from(e: SurfaceError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

type Outcome = Result<bool, Failure>;

fn policy(order: Option<u32>, tol_scale: f64) -> Result<NumericPolicy, Failure> {
    if !(tol_scale.is_finite() && tol_scale > 0.0) {
        return Err(Failure::Usage(format!("--tol-scale must be positive, got {tol_scale}")));
    }
    let mut p = NumericPolicy::default().scaled(tol_scale);
    if let Some(d) = order {
        p = p.with_order(d as usize);
    }
    Ok(p)
}

impl SurfaceArgs {
    fn chart(&self) -> Result<FrontalChart, Failure> {
        let p = policy(self.order, self.tol_scale)?;
        let def = match (&self.gallery, &self.surface) {
            (Some(name), _) => frontal::gallery::surface(name)?,
            (None, Some(path)) => SurfaceDef::from_toml(&fs::read_to_string(path)?)?,
            (None, None) => return Err(Failure::Usage("one of --gallery or --surface is required".into())),
        };
        Ok(FrontalChart::from_def(def, p))
    }
}

/// Writes to `path`, or to stdout.
fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> io::Result<()> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

fn classify(surface: &SurfaceArgs, u0: &[f64], allow_degenerate: bool, out: Option<&Path>) -> Outcome {
    let chart = surface.chart()?;
    let reports = u0.iter().map(|&u| classify_singular_point(&chart, u)).collect::<Result<Vec<_>, _>>()?;
    write_json(&reports, out)?;
    let degenerate = reports.iter().filter(|r| r.verdict == Verdict::Degenerate).count();
    if degenerate > 0 && !allow_degenerate {
        eprintln!("{degenerate} degenerate point(s); pass --allow-degenerate to accept");
        return Ok(false);
    }
    Ok(true)
}

fn field(surface: &SurfaceArgs, grid: Grid, out: Option<&Path>) -> Outcome {
    let chart = surface.chart()?;
    let samples = field_samples(&chart, grid)?;
    let mut w = sink(out)?;
    write_field_csv(&samples, &mut w)?;
    w.flush()?;
    Ok(true)
}

fn frames(surface: &SurfaceArgs, grid: Grid, obj_scale: Option<f64>, out: Option<&Path>) -> Outcome {
    let chart = surface.chart()?;
    let rows = frame_rows(&chart, grid)?;
    let mut w = sink(out)?;
    match obj_scale {
        Some(s) => write_frame_obj(&chart, &rows, s, &mut w)?,
        None => write_frame_csv(&rows, &mut w)?,
    }
    w.flush()?;
    Ok(true)
}

fn mesh(surface: &SurfaceArgs, grid: Grid, out: Option<&Path>) -> Outcome {
    let chart = surface.chart()?;
    let verts = mesh_vertices(&chart, grid)?;
    let mut w = sink(out)?;
    write_obj_mesh(chart.name(), &verts, grid, &mut w)?;
    w.flush()?;
    Ok(true)
}

#[derive(Serialize)]
struct InvariantEntry {
    profile: InvariantProfile,
    /// Absent where the point is not an umbilic of a non-front.
    umbilic: Option<UmbilicReport>,
    umbilic_note: Option<String>,
}

fn opt(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.6}"))
}

fn invariants(surface: &SurfaceArgs, u0: &[f64], json: bool, out: Option<&Path>) -> Outcome {
    let chart = surface.chart()?;
    let mut entries = Vec::with_capacity(u0.len());
    for &u in u0 {
        let profile = edge_invariants(&chart, u)?;
        let (umbilic, umbilic_note) = match umbilic_analysis(&chart, u) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        entries.push(InvariantEntry { profile, umbilic, umbilic_note });
    }
    if let Some(path) = out {
        write_json(&entries, Some(path))?;
    }
    if json {
        write_json(&entries, None)?;
        return Ok(true);
    }
    let mut w = sink(None)?;
    writeln!(w, "{}", chart.name())?;
    writeln!(
        w,
        "{:>10} {:>16} {:>12} {:>12} {:>12} {:>12} {:>12} {:>9}",
        "u0", "verdict", "kappa_nu", "kappa_c", "kappa_t", "r_b", "r_c", "extends"
    )?;
    for e in &entries {
        let p = &e.profile;
        writeln!(
            w,
            "{:>10.4} {:>16} {:>12.6} {:>12.6} {:>12.6} {:>12} {:>12} {:>9}",
            p.u0,
            p.verdict.to_string(),
            p.kappa_nu,
            p.kappa_c,
            p.kappa_t,
            opt(p.r_b),
            opt(p.r_c),
            p.extension_ok
        )?;
    }
    w.flush()?;
    Ok(true)
}

#[derive(Serialize)]
struct RibaucourSummary<'a> {
    profile: &'a str,
    tolerance: f64,
    passed: bool,
    report: &'a frontal::ribaucour::ResidualReport,
}

fn ribaucour(
    gallery: Option<&str>,
    profile: Option<&Path>,
    grid: Grid,
    order: Option<u32>,
    tol_scale: f64,
    out: Option<&Path>,
) -> Outcome {
    let p = policy(order, tol_scale)?;
    let (curve, rho) = match (gallery, profile) {
        (Some(name), _) => ProfileCurve::gallery(name)?,
        (None, Some(path)) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("profile");
            ProfileCurve::from_toml(&fs::read_to_string(path)?, stem)?
        }
        (None, None) => return Err(Failure::Usage("one of --gallery or --profile is required".into())),
    };
    let name = curve.name.clone();
    let pair = RibaucourPair::new(build_envelope(curve, rho, p)?)?;
    let report = verify_ribaucour(&pair, (grid.nu, grid.nv))?;
    let tolerance = RIBAUCOUR_TOL * tol_scale;
    let passed = report.passes(tolerance);
    let summary = RibaucourSummary { profile: &name, tolerance, passed, report: &report };
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for (file, chart) in [("f.obj", &pair.f), ("f_tilde.obj", &pair.f_tilde), ("center.obj", &pair.center)] {
                let verts = mesh_vertices(chart, grid)?;
                let mut w = io::BufWriter::new(fs::File::create(dir.join(file))?);
                write_obj_mesh(chart.name(), &verts, grid, &mut w)?;
                w.flush()?;
            }
            write_json(&summary, Some(&dir.join("report.json")))?;
        }
        None => write_json(&summary, None)?,
    }
    Ok(passed)
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    passed: bool,
    count: usize,
    failed: Vec<u8>,
    report: &'a frontal::suite::SuiteReport,
}

fn verify(only: Option<Group>, order: Option<u32>, tol_scale: f64, out: Option<&Path>) -> Outcome {
    let p = policy(order, tol_scale)?;
    let report = run_suite(&p, only);
    let mut w = sink(None)?;
    for r in &report.results {
        writeln!(w, "{}", r.line())?;
    }
    let failed: Vec<u8> = report.results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    writeln!(w, "{} of {} passed", report.results.len() - failed.len(), report.results.len())?;
    w.flush()?;
    let summary = VerifySummary { passed: failed.is_empty(), count: report.results.len(), failed, report: &report };
    if let Some(path) = out {
        write_json(&summary, Some(path))?;
    }
    Ok(summary.passed)
}

fn gallery(name: Option<&str>) -> Outcome {
    let mut w = sink(None)?;
    match name {
        None => {
            for (n, _) in frontal::gallery::SURFACES {
                writeln!(w, "surface {n}")?;
            }
            for (n, _) in frontal::gallery::PROFILES {
                writeln!(w, "profile {n}")?;
            }
        }
        Some(n) => {
            let text = frontal::gallery::SURFACES
                .iter()
                .chain(frontal::gallery::PROFILES)
                .find(|(k, _)| *k == n)
                .map(|(_, t)| *t)
                .ok_or_else(|| Failure::Usage(format!("unknown gallery entry `{n}`")))?;
            write!(w, "{text}")?;
        }
    }
    w.flush()?;
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Classify { surface, u0, allow_degenerate, out } => classify(&surface, &u0, allow_degenerate, out.as_deref()),
        Command::Field { surface, grid, out } => field(&surface, grid, out.as_deref()),
        Command::Frames { surface, grid, obj_scale, out } => frames(&surface, grid, obj_scale, out.as_deref()),
        Command::Mesh { surface, grid, out } => mesh(&surface, grid, out.as_deref()),
        Command::Invariants { surface, u0, json, out } => invariants(&surface, &u0, json, out.as_deref()),
        Command::Ribaucour { gallery, profile, grid, order, tol_scale, out } => {
            ribaucour(gallery.as_deref(), profile.as_deref(), grid, order, tol_scale, out.as_deref())
        }
        Command::Verify { only, order, tol_scale, out } => verify(only, order, tol_scale, out.as_deref()),
        Command::Gallery { name } => gallery(name.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
