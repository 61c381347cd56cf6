//! Batch front-end for `linekit <config-path>`.
//!
//! Relative paths in a config (output prefix, grid files) are resolved
//! against the directory holding the config file.

pub mod config;
pub mod output;
pub mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use config::{parse_config, Command, RunConfig};
pub use output::{csv_string, emit_csv, emit_obj, obj_string, Cell};

use crate::congruence::grid::GRID_COLUMNS;
use crate::congruence::{induced_metric, optical_scalars, signature_report, ClosedCurve, Congruence, Polynomial, SurfaceSpec};
use crate::error::{Error, Result};
use crate::geodesics::{connect_lines, geodesic_line, ruled_surface, GeodesicParams};
use crate::kahler::omega;
use crate::linespace::{line_through, phi, OrientedLine, C64};
use crate::maslov::{find_complex_points, maslov_index, SIGMA_TOL};

/// Text for standard output, files written, and whether all checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub stdout: String,
    pub files: Vec<PathBuf>,
    pub ok: bool,
}

/// Apply `LINEKIT_THREADS` to the global thread pool.
pub fn configure_threads() -> Result<()> {
    let Ok(text) = std::env::var("LINEKIT_THREADS") else { return Ok(()) };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config { line: 0, msg: format!("LINEKIT_THREADS must be a positive integer, got '{text}'") })?;
    #[cfg(feature = "parallel")]
    {
        // A pool may already exist when called twice in one process; keep it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

/// Read, parse and run the config at `path`.
pub fn run_file(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let cfg = parse_config(&text)?;
    run(&cfg, path.parent().unwrap_or(Path::new(".")))
}

pub fn run(cfg: &RunConfig, base: &Path) -> Result<Report> {
    let prefix = base.join(cfg.string("output"));
    match cfg.command {
        Command::Map => run_map(cfg, &prefix),
        Command::Geodesic => run_geodesic(cfg, &prefix),
        Command::Connect => run_connect(cfg),
        Command::Congruence => run_congruence(cfg, base, &prefix),
        Command::Maslov => run_maslov(cfg, base, &prefix),
        Command::Verify => run_verify(cfg, &prefix),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Standard-chart coordinates, NaN where the line is outside that chart.
fn standard_coords(line: &OrientedLine) -> [f64; 4] {
    match line.to_standard() {
        Ok(l) => [l.xi.re, l.xi.im, l.eta.re, l.eta.im],
        Err(_) => [f64::NAN; 4],
    }
}

fn run_map(cfg: &RunConfig, prefix: &Path) -> Result<Report> {
    let n = cfg.count("samples", 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.int("seed") as u64);
    let header = [
        "xi1", "xi2", "eta1", "eta2", "r", "x1", "x2", "x3", "d1", "d2", "d3", "xi1_back", "xi2_back", "eta1_back",
        "eta2_back", "r_back",
    ];
    let mut rows = Vec::with_capacity(n);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let line = OrientedLine::new(
            C64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
            C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        );
        let r = rng.gen_range(-3.0..3.0);
        let p = phi(&line, r)?.to_vec();
        let d = line.direction();
        let (back, r_back) = line_through(&p, &d)?;
        let back = back.to_standard()?;
        worst = worst.max((back.xi - line.xi).norm() + (back.eta - line.eta).norm() + (r_back - r).abs());
        let mut row: Vec<Cell> = [line.xi.re, line.xi.im, line.eta.re, line.eta.im, r].map(Cell::Real).to_vec();
        row.extend([p.x, p.y, p.z, d.x, d.y, d.z, back.xi.re, back.xi.im, back.eta.re, back.eta.im, r_back].map(Cell::Real));
        rows.push(row);
    }
    let path = with_suffix(prefix, "_map.csv");
    emit_csv(&header, &rows, &path)?;
    let stdout = format!("map: {n} samples, max round-trip error {:.3e}\nwrote {}\n", worst, path.display());
    Ok(Report { stdout, files: vec![path], ok: true })
}

fn run_geodesic(cfg: &RunConfig, prefix: &Path) -> Result<Report> {
    let p = GeodesicParams::new(cfg.real("C1"), cfg.real("C2"), cfg.real("C5"), cfg.real("theta"));
    let (n_s, n_r) = (cfg.count("n_s", 2)?, cfg.count("n_r", 2)?);
    let (s0, s1) = (cfg.real("s_min"), cfg.real("s_max"));
    let mesh = ruled_surface(&p, (s0, s1), (cfg.real("r_min"), cfg.real("r_max")), n_s, n_r)?;

    let header = ["s", "xi1", "xi2", "eta1", "eta2", "foot1", "foot2", "foot3", "d1", "d2", "d3"];
    let mut rows = Vec::with_capacity(n_s);
    for i in 0..n_s {
        let s = s0 + (s1 - s0) * i as f64 / (n_s - 1) as f64;
        let line = geodesic_line(&p, s)?;
        let (f, d) = (line.foot(), line.direction());
        let mut row = vec![Cell::Real(s)];
        row.extend(standard_coords(&line).map(Cell::Real));
        row.extend([f.x, f.y, f.z, d.x, d.y, d.z].map(Cell::Real));
        rows.push(row);
    }
    let (csv_path, obj_path) = (with_suffix(prefix, "_trajectory.csv"), with_suffix(prefix, "_mesh.obj"));
    emit_csv(&header, &rows, &csv_path)?;
    emit_obj(&mesh, &obj_path)?;
    let surface = if p.C1 == 0.0 { "plane" } else { "helicoid" };
    let stdout = format!(
        "geodesic: C1 = {} C2 = {} C5 = {} theta = {} ({surface})\nwrote {}\nwrote {}\n",
        p.C1,
        p.C2,
        p.C5,
        p.theta,
        csv_path.display(),
        obj_path.display()
    );
    Ok(Report { stdout, files: vec![csv_path, obj_path], ok: true })
}

fn run_connect(cfg: &RunConfig) -> Result<Report> {
    let line = |pk: &str, dk: &str| -> Result<OrientedLine> {
        let (p, d) = (Vector3::from(cfg.reals::<3>(pk)?), Vector3::from(cfg.reals::<3>(dk)?));
        if d.norm() == 0.0 {
            return Err(Error::Config { line: cfg.line(dk), msg: format!("key '{dk}' must be a nonzero vector") });
        }
        Ok(line_through(&p, &d.normalize())?.0)
    };
    let (g1, g2) = (line("point1", "direction1")?, line("point2", "direction2")?);
    let turns = u32::try_from(cfg.int("turns"))
        .map_err(|_| Error::Config { line: cfg.line("turns"), msg: "key 'turns' must be non-negative".into() })?;
    let c = connect_lines(&g1, &g2, turns)?;
    let mut out = String::new();
    let p = c.params;
    let _ = writeln!(out, "kind = {:?}", c.kind);
    let _ = writeln!(out, "C1 = {}\nC2 = {}\nC5 = {}\ntheta = {}\ns1 = {}", p.C1, p.C2, p.C5, p.theta, c.s1);
    let _ = writeln!(out, "l = {}\nd = {}", c.l, c.angle);
    if c.angle > 0.0 {
        let _ = writeln!(out, "-l^2/d = {}", -c.l * c.l / c.angle);
    }
    let _ = writeln!(out, "C1*s1^2 = {}", c.squared_length());
    Ok(Report { stdout: out, files: vec![], ok: true })
}

fn resolve(base: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn family(cfg: &RunConfig, base: &Path) -> Result<SurfaceSpec> {
    let name = cfg.string("family").to_ascii_lowercase().replace(['-', '_'], "");
    Ok(match name.as_str() {
        "sphere" => SurfaceSpec::Sphere { radius: cfg.real("radius") },
        "ellipsoid" => SurfaceSpec::Ellipsoid { a: cfg.real("a"), b: cfg.real("b"), c: cfg.real("c") },
        "torus" => SurfaceSpec::Torus { core: cfg.real("core"), tube: cfg.real("tube") },
        "graph" => SurfaceSpec::Graph {
            h: Polynomial::parse(cfg.string("h"))
                .map_err(|e| Error::Config { line: cfg.line("h"), msg: e.to_string() })?,
            half_width: cfg.real("half_width"),
        },
        "rotationfield" | "rotation" => SurfaceSpec::RotationField { b: cfg.real("b") },
        "torntorus" => SurfaceSpec::TornTorus { a: cfg.real("a"), b: cfg.real("b") },
        "csvgrid" | "csv" => {
            if cfg.string("path").is_empty() {
                return Err(Error::Config { line: cfg.line("family"), msg: "family csvgrid needs key 'path'".into() });
            }
            SurfaceSpec::CsvGrid { path: resolve(base, cfg.string("path")) }
        }
        other => {
            return Err(Error::Config { line: cfg.line("family"), msg: format!("unknown family '{other}'") });
        }
    })
}

/// `n` evenly spaced nodes per axis, ends included.
fn node_grid(domain: &[[f64; 2]; 2], n: usize) -> Vec<[f64; 2]> {
    let at = |k: usize, i: usize| domain[k][0] + (domain[k][1] - domain[k][0]) * i as f64 / (n - 1) as f64;
    (0..n).flat_map(|i| (0..n).map(move |j| [at(0, i), at(1, j)])).collect()
}

fn congruence_row(c: &Congruence, nu: [f64; 2], r_eval: Option<f64>) -> Result<(Vec<Cell>, String)> {
    let j = c.jet(nu)?;
    let sample = c.sample(nu)?;
    let metric = induced_metric(&j);
    let r = r_eval.unwrap_or(j.r_ref);
    let (lambda, sigma) = match optical_scalars(&j, r) {
        Ok(s) => (s.twist(), s.sigma),
        Err(Error::Caustic) => (f64::NAN, C64::new(f64::NAN, f64::NAN)),
        Err(e) => return Err(e),
    };
    let signature = match signature_report(c, nu, r_eval) {
        Ok(rep) => rep.signature.to_string(),
        Err(Error::AmbiguousSignature { .. }) => "Ambiguous".to_string(),
        Err(e) => return Err(e),
    };
    let mut row = vec![Cell::Real(nu[0]), Cell::Real(nu[1])];
    row.extend(standard_coords(&sample.line).map(Cell::Real));
    row.extend([lambda, sigma.re, sigma.im, metric.det()].map(Cell::Real));
    row.push(Cell::Text(signature.clone()));
    row.push(Cell::Real(omega(&j.d[0], &j.d[1])));
    Ok((row, signature))
}

fn run_congruence(cfg: &RunConfig, base: &Path, prefix: &Path) -> Result<Report> {
    let c = Congruence::from_spec(&family(cfg, base)?)?;
    let n = cfg.count("grid", 2)?;
    let r_eval = match cfg.string("r_eval") {
        "reference" => None,
        text => Some(text.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| Error::Config {
            line: cfg.line("r_eval"),
            msg: format!("key 'r_eval' expects a real number or 'reference', got '{text}'"),
        })?),
    };
    let nodes = node_grid(&c.domain, n);
    let results = crate::congruence::map_points(&nodes, |nu| congruence_row(&c, nu, r_eval));
    let mut rows = Vec::with_capacity(nodes.len());
    let mut counts = std::collections::BTreeMap::new();
    for r in results {
        let (row, sig) = r?;
        *counts.entry(sig).or_insert(0usize) += 1;
        rows.push(row);
    }
    let mut header: Vec<&str> = GRID_COLUMNS.to_vec();
    header.extend(["lambda", "sigma_re", "sigma_im", "det_g", "signature", "omega"]);
    let path = with_suffix(prefix, "_congruence.csv");
    emit_csv(&header, &rows, &path)?;
    let mut out = format!("congruence: {} points\n", rows.len());
    for (k, v) in &counts {
        let _ = writeln!(out, "{k}: {v}");
    }
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(Report { stdout: out, files: vec![path], ok: true })
}

fn curve(cfg: &RunConfig) -> Result<Option<ClosedCurve>> {
    Ok(match cfg.string("curve") {
        "none" => None,
        "circle" => Some(ClosedCurve::Circle { center: cfg.reals::<2>("curve_center")?, radius: cfg.real("curve_radius") }),
        "rectangle" => Some(ClosedCurve::rectangle(cfg.reals::<2>("curve_lo")?, cfg.reals::<2>("curve_hi")?)),
        other => {
            return Err(Error::Config {
                line: cfg.line("curve"),
                msg: format!("key 'curve' must be none, circle or rectangle, got '{other}'"),
            })
        }
    })
}

fn run_maslov(cfg: &RunConfig, base: &Path, prefix: &Path) -> Result<Report> {
    let c = Congruence::from_spec(&family(cfg, base)?)?;
    let curve = curve(cfg)?;
    let samples = cfg.count("samples", 1)?;
    let pts = find_complex_points(&c, cfg.count("grid", 4)?, SIGMA_TOL)?;
    let mut out = format!("complex points: {}\n", pts.len());
    let mut rows = Vec::new();
    for p in &pts {
        let _ = writeln!(out, "nu = ({}, {}) multiplicity = {}", p.nu[0], p.nu[1], p.multiplicity);
        rows.push(vec![Cell::Real(p.nu[0]), Cell::Real(p.nu[1]), Cell::Int(p.multiplicity as i64)]);
    }
    if let Some(curve) = curve {
        let r = maslov_index(&c, &curve, samples, &pts)?;
        let _ = writeln!(out, "index = {}", r.index);
        let _ = writeln!(out, "samples = {}", r.samples);
        let _ = writeln!(out, "enclosed multiplicity = {}", r.complex_points_enclosed);
    }
    let path = with_suffix(prefix, "_complex_points.csv");
    emit_csv(&["nu1", "nu2", "multiplicity"], &rows, &path)?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(Report { stdout: out, files: vec![path], ok: true })
}

fn run_verify(cfg: &RunConfig, prefix: &Path) -> Result<Report> {
    let checks = verify::run_suite(cfg.int("seed") as u64, cfg.count("samples", 1)?)?;
    let mut out = String::new();
    for c in &checks {
        out.push_str(&c.line());
        out.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(out, "{} checks, {failed} failed", checks.len());
    let path = with_suffix(prefix, "_verify.txt");
    std::fs::write(&path, &out).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(Report { stdout: out, files: vec![path], ok: failed == 0 })
}
