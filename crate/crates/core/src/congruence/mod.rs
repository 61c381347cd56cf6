//! Line congruences: two-parameter families of oriented lines `nu -> f(nu)`.
//!
//! Derivatives in `nu` are central differences of the sampler, taken in the
//! chart of the centre line. Optical scalars come from the Euclidean
//! derivative of the direction field `e0` at a chosen parameter `r` along
//! each line.

pub mod grid;
pub mod polynomial;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::Arc;

use nalgebra::{Matrix2, Matrix3, Vector3};

pub use grid::CsvGrid;
pub use polynomial::Polynomial;

use crate::error::{Error, Result};
use crate::kahler::{g_apply, omega, theta};
use crate::linespace::{dphi, line_through, ComplexVector, EuclideanVector, OrientedLine, TangentT, C64};
use crate::numerics::{derivative_fd, winding_number, FDScheme};

/// Surface or congruence families with their parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSpec {
    Sphere { radius: f64 },
    Ellipsoid { a: f64, b: f64, c: f64 },
    Torus { core: f64, tube: f64 },
    /// Graph `z = h(x, y)` over `[-half_width, half_width]^2`.
    Graph { h: Polynomial, half_width: f64 },
    /// `xi -> (xi, -b i xi)` over `[-2, 2]^2`.
    RotationField { b: f64 },
    /// `xi = tan(phi) e^{i theta}`, `eta = a (1 - b tan^2 phi) e^{i theta}`.
    TornTorus { a: f64, b: f64 },
    CsvGrid { path: PathBuf },
}

/// Margin from the poles for sphere-like parametrizations.
const POLE_MARGIN: f64 = 0.05;

impl SurfaceSpec {
    fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            Self::Sphere { radius } => pos("radius", *radius),
            Self::Ellipsoid { a, b, c } => pos("a", *a).and(pos("b", *b)).and(pos("c", *c)),
            Self::Torus { core, tube } => {
                pos("core", *core)?;
                pos("tube", *tube)?;
                if tube >= core {
                    return Err(Error::InvalidArgument("torus tube must be thinner than its core radius".into()));
                }
                Ok(())
            }
            Self::Graph { half_width, .. } => pos("half_width", *half_width),
            Self::RotationField { b } | Self::TornTorus { b, .. } if !b.is_finite() => {
                Err(Error::InvalidArgument("b must be finite".into()))
            }
            Self::TornTorus { a, .. } => pos("a", *a),
            _ => Ok(()),
        }
    }

    /// Point and unit normal for the surface families.
    pub fn point_normal(&self, nu: [f64; 2]) -> Option<(EuclideanVector, EuclideanVector)> {
        let [u, v] = nu;
        match *self {
            Self::Sphere { radius } => {
                let n = Vector3::new(u.sin() * v.cos(), u.sin() * v.sin(), u.cos());
                Some((n * radius, n))
            }
            Self::Ellipsoid { a, b, c } => {
                let p = Vector3::new(a * u.sin() * v.cos(), b * u.sin() * v.sin(), c * u.cos());
                let n = Vector3::new(p.x / (a * a), p.y / (b * b), p.z / (c * c)).normalize();
                Some((p, n))
            }
            Self::Torus { core, tube } => {
                let n = Vector3::new(v.cos() * u.cos(), v.cos() * u.sin(), v.sin());
                Some((Vector3::new(core * u.cos(), core * u.sin(), 0.0) + n * tube, n))
            }
            Self::Graph { ref h, .. } => {
                let (hx, hy) = h.gradient(u, v);
                Some((Vector3::new(u, v, h.eval(u, v)), Vector3::new(-hx, -hy, 1.0).normalize()))
            }
            _ => None,
        }
    }

    pub fn is_surface(&self) -> bool {
        matches!(self, Self::Sphere { .. } | Self::Ellipsoid { .. } | Self::Torus { .. } | Self::Graph { .. })
    }

    /// Parameter rectangle `[[nu1_min, nu1_max], [nu2_min, nu2_max]]`.
    pub fn domain(&self) -> [[f64; 2]; 2] {
        match self {
            Self::Sphere { .. } | Self::Ellipsoid { .. } => [[POLE_MARGIN, PI - POLE_MARGIN], [-PI / 2.0, 1.5 * PI]],
            Self::Torus { .. } => [[0.0, 2.0 * PI], [0.0, 2.0 * PI]],
            Self::Graph { half_width, .. } => [[-half_width, *half_width], [-half_width, *half_width]],
            Self::RotationField { .. } => [[-2.0, 2.0], [-2.0, 2.0]],
            Self::TornTorus { .. } => [[0.0, 2.0 * PI], [0.0, PI]],
            Self::CsvGrid { .. } => [[0.0, 1.0], [0.0, 1.0]],
        }
    }
}

/// A line of the congruence and the parameter `r` at which it meets the
/// reference surface (the orthogonal surface for normal congruences, the
/// perpendicular foot otherwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub line: OrientedLine,
    pub r_ref: f64,
}

type SamplerFn = dyn Fn([f64; 2]) -> Result<Sample> + Send + Sync;

#[derive(Clone)]
pub struct Congruence {
    sampler: Arc<SamplerFn>,
    pub domain: [[f64; 2]; 2],
    pub fd: FDScheme,
    /// True when built from the normals of a surface.
    pub normal: bool,
}

impl std::fmt::Debug for Congruence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Congruence").field("domain", &self.domain).field("normal", &self.normal).finish()
    }
}

/// Line and first derivatives at one parameter point, in the chart of the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub line: OrientedLine,
    pub r_ref: f64,
    pub d: [TangentT; 2],
}

impl Congruence {
    pub fn parametric(
        domain: [[f64; 2]; 2],
        f: impl Fn([f64; 2]) -> Result<OrientedLine> + Send + Sync + 'static,
    ) -> Self {
        Self {
            sampler: Arc::new(move |nu| f(nu).map(|line| Sample { line, r_ref: 0.0 })),
            domain,
            fd: FDScheme::central4(),
            normal: false,
        }
    }

    /// Lines along the normals of a surface given by point and unit normal.
    pub fn from_surface(
        domain: [[f64; 2]; 2],
        f: impl Fn([f64; 2]) -> (EuclideanVector, EuclideanVector) + Send + Sync + 'static,
    ) -> Self {
        Self {
            sampler: Arc::new(move |nu| {
                let (p, n) = f(nu);
                line_through(&p, &n).map(|(line, r_ref)| Sample { line, r_ref })
            }),
            domain,
            fd: FDScheme::central4(),
            normal: true,
        }
    }

    pub fn from_spec(spec: &SurfaceSpec) -> Result<Self> {
        spec.validate()?;
        if spec.is_surface() {
            return normal_congruence(spec);
        }
        let domain = spec.domain();
        Ok(match spec.clone() {
            SurfaceSpec::RotationField { b } => {
                Self::parametric(domain, move |[x, y]| {
                    let xi = C64::new(x, y);
                    Ok(OrientedLine::new(xi, -C64::i() * b * xi))
                })
            }
            SurfaceSpec::TornTorus { a, b } => Self::parametric(domain, move |[th, ph]| Ok(torn_torus(a, b, th, ph))),
            SurfaceSpec::CsvGrid { path } => {
                let grid = Arc::new(CsvGrid::load(&path)?);
                Self::from_grid(grid)
            }
            _ => unreachable!("surface families handled above"),
        })
    }

    pub fn from_grid(grid: Arc<CsvGrid>) -> Self {
        let domain = grid.domain();
        Self::parametric(domain, move |[u, v]| {
            let s = grid.interpolate(u, v);
            Ok(OrientedLine::new(C64::new(s[0], s[1]), C64::new(s[2], s[3])))
        })
    }

    pub fn sample(&self, nu: [f64; 2]) -> Result<Sample> {
        let s = (self.sampler)(nu)?;
        if !s.line.is_finite() || !s.r_ref.is_finite() {
            return Err(Error::NonFiniteSample { at: format!("congruence sample at {nu:?}") });
        }
        Ok(s)
    }

    /// Derivative of the line along `dir` at `nu`, in the chart of `base`.
    fn directional(&self, nu: [f64; 2], dir: [f64; 2], base: &OrientedLine) -> Result<TangentT> {
        let coords = |t: f64| -> [f64; 4] {
            let p = [nu[0] + t * dir[0], nu[1] + t * dir[1]];
            match self.sample(p).and_then(|s| s.line.to_chart(base.chart)) {
                Ok(l) => [l.xi.re, l.xi.im, l.eta.re, l.eta.im],
                Err(_) => [f64::NAN; 4],
            }
        };
        let d = derivative_fd(coords, 0.0, &self.fd)
            .map_err(|_| Error::NonFiniteSample { at: format!("congruence derivative at {nu:?}") })?;
        Ok(TangentT::from_real(*base, d))
    }

    pub fn jet(&self, nu: [f64; 2]) -> Result<Jet> {
        let s = self.sample(nu)?;
        let line = s.line.canonical();
        Ok(Jet {
            line,
            r_ref: s.r_ref,
            d: [self.directional(nu, [1.0, 0.0], &line)?, self.directional(nu, [0.0, 1.0], &line)?],
        })
    }
}

/// Torn torus line at `(theta, phi)`, switching chart past `phi = pi/4`.
fn torn_torus(a: f64, b: f64, th: f64, ph: f64) -> OrientedLine {
    let t = ph.tan();
    if t.abs() <= 1.0 {
        let e = C64::from_polar(1.0, th);
        OrientedLine::new(e * t, e * (a * (1.0 - b * t * t)))
    } else {
        // Flipped chart: xi' = cot(phi) e^{-i theta}, eta' = -a (cot^2 phi - b) e^{-i theta}.
        let (ct, e) = (1.0 / t, C64::from_polar(1.0, -th));
        OrientedLine::in_chart(e * ct, e * (-a * (ct * ct - b)), crate::linespace::Chart::Flipped)
    }
}

/// Congruence of normals to one of the surface families.
pub fn normal_congruence(spec: &SurfaceSpec) -> Result<Congruence> {
    spec.validate()?;
    if !spec.is_surface() {
        return Err(Error::InvalidArgument(format!("{spec:?} is not a surface")));
    }
    let s = spec.clone();
    Ok(Congruence::from_surface(spec.domain(), move |nu| s.point_normal(nu).expect("surface family")))
}

/// Optical scalars at one point of a congruence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalScalars {
    /// Divergence plus `i` times the twist.
    pub rho: C64,
    pub sigma: C64,
    pub r_eval: f64,
}

impl OpticalScalars {
    pub fn twist(&self) -> f64 {
        self.rho.im
    }

    /// `lambda^2 - |sigma|^2`.
    pub fn discriminant(&self) -> f64 {
        self.rho.im * self.rho.im - self.sigma.norm_sqr()
    }
}

fn bilinear(a: &ComplexVector, m: &Matrix3<f64>, b: &ComplexVector) -> C64 {
    let mb = m.map(|x| C64::new(x, 0.0)) * b;
    a.iter().zip(mb.iter()).map(|(x, y)| x * y).sum()
}

/// `rho = <e0, nabla_{e-} e+>`, `sigma = <e0, nabla_{e+} e+>` from the jet at
/// parameter `r` along the line.
pub fn optical_scalars(jet: &Jet, r_eval: f64) -> Result<OpticalScalars> {
    let l = &jet.line;
    let frame = l.frame();
    let mut v = [Vector3::zeros(); 2];
    let mut de = [Vector3::zeros(); 2];
    for a in 0..2 {
        let p0 = dphi(l, 0.0, &jet.d[a], 0.0)?;
        de[a] = dphi(l, 1.0, &jet.d[a], 0.0)? - p0;
        v[a] = p0 + de[a] * r_eval;
    }
    let m = Matrix3::from_columns(&[v[0], v[1], frame.e0]);
    let scale = (v[0].norm() + de[0].norm()) * (v[1].norm() + de[1].norm());
    if !(m.determinant().abs() > 1e-10 * scale) {
        return Err(Error::Caustic);
    }
    // The direction field is constant along each line, so nabla e0 kills e0.
    let grad = Matrix3::from_columns(&[de[0], de[1], Vector3::zeros()]) * m.try_inverse().ok_or(Error::Caustic)?;
    let (ep, em) = (frame.eplus, frame.eminus());
    Ok(OpticalScalars { rho: -bilinear(&ep, &grad, &em), sigma: -bilinear(&ep, &grad, &ep), r_eval })
}

pub fn spin_coefficients(c: &Congruence, nu: [f64; 2], r_eval: f64) -> Result<OpticalScalars> {
    optical_scalars(&c.jet(nu)?, r_eval)
}

/// Optical scalars on the reference surface of the congruence.
pub fn reference_scalars(c: &Congruence, nu: [f64; 2]) -> Result<OpticalScalars> {
    let j = c.jet(nu)?;
    optical_scalars(&j, j.r_ref)
}

/// `Omega(df(d/dnu1), df(d/dnu2))`.
pub fn pullback_omega(c: &Congruence, nu: [f64; 2]) -> Result<f64> {
    let j = c.jet(nu)?;
    Ok(omega(&j.d[0], &j.d[1]))
}

/// The same quantity through the complex derivatives `d = (d1 - i d2)/2`:
/// `4 Im(d eta dbar xibar + d etabar dbar xi
///   - 2 xibar eta/(1+|xi|^2) (d xi dbar xibar - dbar xi d xibar)) / (1+|xi|^2)^2`.
pub fn pullback_omega_complex(j: &Jet) -> f64 {
    let (xi, eta) = (j.line.xi, j.line.eta);
    let q = 1.0 + xi.norm_sqr();
    let half = C64::new(0.5, 0.0);
    let dz = |f: fn(&TangentT) -> C64| (f(&j.d[0]) - C64::i() * f(&j.d[1])) * half;
    let dzb = |f: fn(&TangentT) -> C64| (f(&j.d[0]) + C64::i() * f(&j.d[1])) * half;
    let (xi_, xib_, eta_, etab_): (fn(&TangentT) -> C64, fn(&TangentT) -> C64, fn(&TangentT) -> C64, fn(&TangentT) -> C64) =
        (|v| v.xidot, |v| v.xidot.conj(), |v| v.etadot, |v| v.etadot.conj());
    let x = dz(eta_) * dzb(xib_) + dz(etab_) * dzb(xi_)
        - xi.conj() * eta * (2.0 / q) * (dz(xi_) * dzb(xib_) - dzb(xi_) * dz(xib_));
    4.0 * x.im / (q * q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signature {
    Riemannian,
    Lorentzian,
    TotallyNull,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Riemannian => "Riemannian",
            Self::Lorentzian => "Lorentzian",
            Self::TotallyNull => "TotallyNull",
        })
    }
}

/// Pullback of G in the `(nu1, nu2)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedMetric2(pub Matrix2<f64>);

/// Entries below this are treated as zero when classifying.
pub const NULL_TOL: f64 = 1e-9;
/// Relative determinant band inside which the metric counts as degenerate.
pub const DET_BAND: f64 = 1e-8;

impl InducedMetric2 {
    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    /// Degenerate-aware sign of the determinant: `Some(0)` for degenerate.
    pub fn det_sign(&self) -> i8 {
        let m = self.max_abs();
        if m < NULL_TOL {
            return 0;
        }
        let rel = self.det() / (m * m);
        if rel > DET_BAND {
            1
        } else if rel < -DET_BAND {
            -1
        } else {
            0
        }
    }

    /// Null directions as angles in `[0, pi)` in the parameter plane.
    pub fn null_angles(&self) -> Option<[f64; 2]> {
        if self.det_sign() >= 0 {
            return None;
        }
        let (a, b, c) = (self.0[(0, 0)], self.0[(0, 1)], self.0[(1, 1)]);
        // a x^2 + 2 b x y + c y^2 = 0 on the unit circle.
        let disc = (b * b - a * c).sqrt();
        let dirs = if a.abs() >= c.abs() {
            [(-b + disc, a), (-b - disc, a)].map(|(x, y)| (y, x))
        } else {
            [(c, -b + disc), (c, -b - disc)].map(|(x, y)| (y, x))
        };
        // Each pair is (y, x) with a x^2 + 2bxy + c y^2 = 0 solved for x/y or y/x.
        let ang = dirs.map(|(y, x)| y.atan2(x).rem_euclid(PI));
        Some(ang)
    }
}

#[allow(non_snake_case)]
pub fn pullback_G(c: &Congruence, nu: [f64; 2]) -> Result<InducedMetric2> {
    let j = c.jet(nu)?;
    Ok(induced_metric(&j))
}

pub fn induced_metric(j: &Jet) -> InducedMetric2 {
    let g = |a: usize, b: usize| g_apply(&j.d[a], &j.d[b]);
    InducedMetric2(Matrix2::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1)))
}

/// Metric, optical scalars and their agreement at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignatureReport {
    pub metric: InducedMetric2,
    pub scalars: Option<OpticalScalars>,
    pub signature: Signature,
}

fn scalar_sign(s: &OpticalScalars) -> i8 {
    let d = s.discriminant();
    let scale = s.rho.im * s.rho.im + s.sigma.norm_sqr();
    if scale < NULL_TOL * NULL_TOL || d.abs() <= 1e-6 * scale {
        0
    } else if d > 0.0 {
        1
    } else {
        -1
    }
}

/// Classify `f*G` at `nu` by its determinant and compare with the sign of
/// `lambda^2 - |sigma|^2` (taken at `r_eval`, or the reference surface).
pub fn signature_report(c: &Congruence, nu: [f64; 2], r_eval: Option<f64>) -> Result<SignatureReport> {
    let j = c.jet(nu)?;
    let metric = induced_metric(&j);
    let scalars = match optical_scalars(&j, r_eval.unwrap_or(j.r_ref)) {
        Ok(s) => Some(s),
        Err(Error::Caustic) => None,
        Err(e) => return Err(e),
    };
    let sign = metric.det_sign();
    if let Some(s) = scalars {
        let ss = scalar_sign(&s);
        if ss != sign && (sign == 0 || ss == 0) {
            return Err(Error::AmbiguousSignature { det: metric.det(), scalars: s.discriminant() });
        }
    }
    let signature = match sign {
        1 => Signature::Riemannian,
        -1 => Signature::Lorentzian,
        _ => Signature::TotallyNull,
    };
    Ok(SignatureReport { metric, scalars, signature })
}

pub fn classify_signature(c: &Congruence, nu: [f64; 2]) -> Result<Signature> {
    signature_report(c, nu, None).map(|r| r.signature)
}

/// Centres of an `n1 x n2` grid of cells covering `domain`.
pub fn grid_points(domain: &[[f64; 2]; 2], n1: usize, n2: usize) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            out.push([
                domain[0][0] + (domain[0][1] - domain[0][0]) * (i as f64 + 0.5) / n1 as f64,
                domain[1][0] + (domain[1][1] - domain[1][0]) * (j as f64 + 0.5) / n2 as f64,
            ]);
        }
    }
    out
}

/// Map over parameter points, in parallel when enabled. Order is preserved.
pub fn map_points<T: Send>(points: &[[f64; 2]], f: impl Fn([f64; 2]) -> T + Send + Sync) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(|p| f(*p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(|p| f(*p)).collect()
    }
}

/// Whether `|f*Omega| < tol` on an `n x n` grid, with the largest value seen.
pub fn is_lagrangian(c: &Congruence, n: usize, tol: f64) -> Result<(bool, f64)> {
    let vals = map_points(&grid_points(&c.domain, n, n), |p| pullback_omega(c, p));
    let mut worst = 0.0f64;
    for v in vals {
        worst = worst.max(v?.abs());
    }
    Ok((worst < tol, worst))
}

/// Twist tolerance used by the potential and period integrals.
pub const CLOSED_TOL: f64 = 1e-7;

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// `Theta` applied to the derivative of the line along `dir` at `nu`.
fn theta_along(c: &Congruence, nu: [f64; 2], dir: [f64; 2]) -> Result<f64> {
    let s = c.sample(nu)?;
    let base = s.line.canonical();
    Ok(theta(&c.directional(nu, dir, &base)?))
}

fn check_closed(c: &Congruence, nu: [f64; 2]) -> Result<()> {
    let w = pullback_omega(c, nu)?;
    if w.abs() > CLOSED_TOL {
        return Err(Error::NotClosed(w));
    }
    Ok(())
}

/// Integral of `f*Theta` along the straight segment `a -> b`.
fn segment_integral(c: &Congruence, a: [f64; 2], b: [f64; 2], panels: usize) -> Result<f64> {
    let dir = [b[0] - a[0], b[1] - a[1]];
    if dir == [0.0, 0.0] {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for k in 0..panels {
        let (t0, t1) = (k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
        let (mid, half) = (0.5 * (t0 + t1), 0.5 * (t1 - t0));
        for (x, w) in GAUSS5 {
            let t = mid + half * x;
            total += w * half * theta_along(c, [a[0] + t * dir[0], a[1] + t * dir[1]], dir)?;
        }
        check_closed(c, [a[0] + mid * dir[0], a[1] + mid * dir[1]])?;
    }
    Ok(total)
}

/// Order of the two legs of a staircase path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Staircase {
    Nu1First,
    Nu2First,
}

/// Potential `r(nu) - r(nu0)` with `dr = f*Theta`, integrated along a
/// staircase path. Fails with `NotClosed` where the congruence twists.
pub fn reconstruct_r(c: &Congruence, nu0: [f64; 2], nu: [f64; 2], path: Staircase) -> Result<f64> {
    let corner = match path {
        Staircase::Nu1First => [nu[0], nu0[1]],
        Staircase::Nu2First => [nu0[0], nu[1]],
    };
    Ok(segment_integral(c, nu0, corner, 16)? + segment_integral(c, corner, nu, 16)?)
}

/// Points of the orthogonal surface through `phi(f(nu0), r0)`.
pub fn orthogonal_surface(c: &Congruence, nu0: [f64; 2], r0: f64, points: &[[f64; 2]]) -> Result<Vec<EuclideanVector>> {
    map_points(points, |p| {
        let r = r0 + reconstruct_r(c, nu0, p, Staircase::Nu1First)?;
        Ok(c.sample(p)?.line.point(r))
    })
    .into_iter()
    .collect()
}

/// Closed curves in the parameter plane, parametrized by `t` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedCurve {
    Circle { center: [f64; 2], radius: f64 },
    /// Vertices of a closed polygon (the last edge returns to the first vertex).
    Polygon(Vec<[f64; 2]>),
    /// A segment whose end points are identified by periodicity of the
    /// congruence (for instance a meridian of a torus).
    PeriodicSegment { start: [f64; 2], end: [f64; 2] },
    Reversed(Box<ClosedCurve>),
}

impl ClosedCurve {
    pub fn reversed(&self) -> Self {
        match self {
            Self::Reversed(inner) => (**inner).clone(),
            other => Self::Reversed(Box::new(other.clone())),
        }
    }

    pub fn rectangle(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Self::Polygon(vec![lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]])
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        match self {
            Self::Circle { center, radius } => {
                let a = 2.0 * PI * t;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
            Self::Polygon(v) => {
                let n = v.len();
                let s = t.rem_euclid(1.0) * n as f64;
                let k = (s.floor() as usize).min(n - 1);
                let f = s - k as f64;
                let (a, b) = (v[k], v[(k + 1) % n]);
                [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]
            }
            Self::PeriodicSegment { start, end } => {
                [start[0] + t * (end[0] - start[0]), start[1] + t * (end[1] - start[1])]
            }
            Self::Reversed(inner) => inner.point(1.0 - t),
        }
    }

    /// `d point / dt` (one-sided at polygon vertices).
    pub fn velocity(&self, t: f64) -> [f64; 2] {
        match self {
            Self::Circle { radius, .. } => {
                let a = 2.0 * PI * t;
                [-2.0 * PI * radius * a.sin(), 2.0 * PI * radius * a.cos()]
            }
            Self::Polygon(v) => {
                let n = v.len();
                let k = ((t.rem_euclid(1.0) * n as f64).floor() as usize).min(n - 1);
                let (a, b) = (v[k], v[(k + 1) % n]);
                [n as f64 * (b[0] - a[0]), n as f64 * (b[1] - a[1])]
            }
            Self::PeriodicSegment { start, end } => [end[0] - start[0], end[1] - start[1]],
            Self::Reversed(inner) => {
                let v = inner.velocity(1.0 - t);
                [-v[0], -v[1]]
            }
        }
    }

    fn base(&self) -> (&Self, bool) {
        match self {
            Self::Reversed(inner) => {
                let (b, r) = inner.base();
                (b, !r)
            }
            other => (other, false),
        }
    }

    /// Winding number of the curve around `p` in the parameter plane.
    pub fn winding_around(&self, p: [f64; 2]) -> Result<f64> {
        if matches!(self.base().0, Self::PeriodicSegment { .. }) {
            return Ok(0.0);
        }
        let n = 4096;
        let angles: Vec<f64> = (0..=n)
            .map(|k| {
                let q = self.point(k as f64 / n as f64);
                (q[1] - p[1]).atan2(q[0] - p[0])
            })
            .collect();
        winding_number(&angles, 2.0 * PI)
    }
}

/// `oint f*Theta` around `curve`.
pub fn theta_period(c: &Congruence, curve: &ClosedCurve, samples: usize) -> Result<f64> {
    let (base, rev) = curve.base();
    let sign = if rev { -1.0 } else { 1.0 };
    let total = match base {
        Self_::Polygon(v) => {
            let mut acc = 0.0;
            let per_edge = (samples / v.len()).max(1);
            for k in 0..v.len() {
                acc += segment_integral(c, v[k], v[(k + 1) % v.len()], per_edge.div_ceil(5))?;
            }
            acc
        }
        smooth => {
            // Trapezoid rule on a periodic integrand.
            let n = samples.max(8);
            let mut acc = 0.0;
            for k in 0..n {
                let t = k as f64 / n as f64;
                let p = smooth.point(t);
                check_closed(c, p)?;
                acc += theta_along(c, p, smooth.velocity(t))?;
            }
            acc / n as f64
        }
    };
    Ok(sign * total)
}

use ClosedCurve as Self_;
