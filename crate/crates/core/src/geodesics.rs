//! Geodesics of G: closed-form solutions through the x^3-axis, the ruled
//! surfaces they sweep (planes and helicoids), numerical integration and the
//! helicoid joining two skew lines.

use nalgebra::{Matrix3, Rotation3, SVector, UnitQuaternion, Vector3};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::isometry::{act, act_tangent, EuclideanMotion};
use crate::kahler::christoffel;
use crate::linespace::{phi, tangent_transition, EuclideanVector, OrientedLine, TangentT, C64, I};
use crate::numerics::{rk4_step, uniform_steps, ODEState};

/// Margin kept from the pole of `cos^2(C2 s)` in the closed form.
pub const SINGULARITY_MARGIN: f64 = 1e-6;

/// Constants of a geodesic starting on the x^3-axis.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GeodesicParams {
    pub C1: f64,
    pub C2: f64,
    pub C5: f64,
    pub theta: f64,
}

impl GeodesicParams {
    #[allow(non_snake_case)]
    pub fn new(C1: f64, C2: f64, C5: f64, theta: f64) -> Self {
        Self { C1, C2, C5, theta: theta.rem_euclid(2.0 * PI) }
    }

    /// Constants of the geodesic leaving the x^3-axis with velocity `(xidot, etadot)`.
    pub fn from_velocity(xidot: C64, etadot: C64) -> Self {
        let c2 = xidot.norm();
        if c2 == 0.0 {
            // Plane: eta = etadot s. Encoded as the C2 -> 0 limit.
            return Self::new(0.0, 0.0, 2.0 * etadot.norm(), etadot.arg());
        }
        let theta = xidot.arg();
        let w = etadot * C64::from_polar(1.0, -theta);
        Self::new(-4.0 * c2 * w.im, c2, 2.0 * w.re, theta)
    }

    /// Initial velocity at `s = 0`.
    pub fn velocity(&self) -> (C64, C64) {
        let ph = C64::from_polar(1.0, self.theta);
        if self.C2 == 0.0 {
            return (C64::new(0.0, 0.0), ph * (0.5 * self.C5));
        }
        (ph * self.C2, ph * C64::new(0.5 * self.C5, -0.25 * self.C1 / self.C2))
    }

    pub fn is_null(&self) -> bool {
        self.C1 == 0.0
    }

    /// Rigid motion taking the standard-position geodesic (`theta = 0`,
    /// `C5 = 0`) to this one: a translation along x^3 then a rotation about it.
    pub fn standardizing_motion(&self) -> EuclideanMotion {
        let lift = if self.C2 == 0.0 { 0.0 } else { -self.C5 / (2.0 * self.C2) };
        EuclideanMotion::rotation_about(&Vector3::z(), self.theta)
            .compose(&EuclideanMotion::translation(Vector3::new(0.0, 0.0, lift)))
    }

    pub fn standardized(&self) -> Self {
        Self { C5: 0.0, theta: 0.0, ..*self }
    }
}

/// Position, velocity and acceleration in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub xi: C64,
    pub eta: C64,
    pub xidot: C64,
    pub etadot: C64,
    pub xiddot: C64,
    pub etaddot: C64,
}

fn guard(p: &GeodesicParams, s: f64) -> Result<()> {
    if (p.C2 * s).abs() >= FRAC_PI_2 - SINGULARITY_MARGIN {
        return Err(Error::ParameterSingularity(s));
    }
    Ok(())
}

/// `xi = tan(C2 s) e^{i theta}`, `eta = (C5 sin 2C2 s - i C1 s) e^{i theta}/(4 C2 cos^2 C2 s)`.
pub fn geodesic_closed_form(p: &GeodesicParams, s: f64) -> Result<OrientedLine> {
    let j = closed_form_jet(p, s)?;
    Ok(OrientedLine::new(j.xi, j.eta))
}

/// Closed form with its first two derivatives in `s`.
pub fn closed_form_jet(p: &GeodesicParams, s: f64) -> Result<Jet> {
    guard(p, s)?;
    let ph = C64::from_polar(1.0, p.theta);
    let zero = C64::new(0.0, 0.0);
    if p.C2 == 0.0 {
        let v = ph * (0.5 * p.C5);
        return Ok(Jet { xi: zero, eta: v * s, xidot: zero, etadot: v, xiddot: zero, etaddot: zero });
    }
    let c2 = p.C2;
    let (t, sec2) = ((c2 * s).tan(), 1.0 / (c2 * s).cos().powi(2));
    let n = C64::new(p.C5 * (2.0 * c2 * s).sin(), -p.C1 * s);
    let n1 = C64::new(2.0 * c2 * p.C5 * (2.0 * c2 * s).cos(), -p.C1);
    let n2 = C64::new(-4.0 * c2 * c2 * p.C5 * (2.0 * c2 * s).sin(), 0.0);
    // d(sec^2)/ds = 2 C2 sec^2 tan, d(sec^2 tan)/ds = C2 (2 sec^2 tan^2 + sec^4).
    let eta = n * sec2;
    let etadot = n1 * sec2 + n * (2.0 * c2 * sec2 * t);
    let etaddot = n2 * sec2 + n1 * (4.0 * c2 * sec2 * t) + n * (2.0 * c2 * c2 * (2.0 * sec2 * t * t + sec2 * sec2));
    let k = ph / (4.0 * c2);
    Ok(Jet {
        xi: ph * t,
        eta: eta * k,
        xidot: ph * (c2 * sec2),
        etadot: etadot * k,
        xiddot: ph * (2.0 * c2 * c2 * sec2 * t),
        etaddot: etaddot * k,
    })
}

/// Screw motion carrying the x^3-axis to the standard-position geodesic
/// at parameter `s`: rotation by `2 C2 s` about x^2 followed by a shift of
/// `-C1 s/(2 C2)` along x^2.
fn standard_screw(p: &GeodesicParams, s: f64) -> EuclideanMotion {
    if p.C2 == 0.0 {
        return EuclideanMotion::translation(Vector3::new(0.0, 0.0, 0.0));
    }
    EuclideanMotion::new(
        UnitQuaternion::from_axis_angle(&Vector3::y_axis(), 2.0 * p.C2 * s),
        Vector3::new(0.0, -p.C1 * s / (2.0 * p.C2), 0.0),
    )
}

/// The geodesic for any `s`, continued past the coordinate singularity by
/// its screw symmetry.
pub fn geodesic_line(p: &GeodesicParams, s: f64) -> Result<OrientedLine> {
    if p.C2 == 0.0 {
        return geodesic_closed_form(p, s);
    }
    let m = p.standardizing_motion().compose(&standard_screw(p, s));
    act(&m, &OrientedLine::x3_axis())
}

/// Residuals of the complex geodesic equations
/// `xi'' - 2 xibar xi'^2/(1+|xi|^2) = 0` and
/// `eta'' - 4 xibar xi' eta'/(1+|xi|^2) + 2 (etabar + xibar^2 eta) xi'^2/(1+|xi|^2)^2 = 0`.
pub fn complex_equation_residual(j: &Jet) -> (C64, C64) {
    let d = 1.0 + j.xi.norm_sqr();
    let xb = j.xi.conj();
    let r1 = j.xiddot - xb * j.xidot * j.xidot * (2.0 / d);
    let r2 = j.etaddot - xb * j.xidot * j.etadot * (4.0 / d)
        + (j.eta.conj() + xb * xb * j.eta) * j.xidot * j.xidot * (2.0 / (d * d));
    (r1, r2)
}

/// Residual of `x'' + Gamma(x', x') = 0` with the Levi-Civita coefficients.
pub fn christoffel_residual(j: &Jet) -> [f64; 4] {
    let v = [j.xidot.re, j.xidot.im, j.etadot.re, j.etadot.im];
    let a = christoffel(&OrientedLine::new(j.xi, j.eta)).acceleration(&v);
    [j.xiddot.re - a[0], j.xiddot.im - a[1], j.etaddot.re - a[2], j.etaddot.im - a[3]]
}

/// Conserved quantity
/// `2i/(1+|xi|^2)^2 (eta' xibar' - etabar' xi' + 2(xi etabar - xibar eta)/(1+|xi|^2) |xi'|^2)`.
pub fn first_integral(v: &TangentT) -> f64 {
    let (xi, eta) = (v.base.xi, v.base.eta);
    let d = 1.0 + xi.norm_sqr();
    let inner = v.etadot * v.xidot.conj() - v.etadot.conj() * v.xidot
        + (xi * eta.conj() - xi.conj() * eta) * (2.0 / d) * v.xidot.norm_sqr();
    (I * inner * (2.0 / (d * d))).re
}

/// Initial line and velocity, with the motion taking the line to the x^3-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicIVP {
    pub line0: OrientedLine,
    pub v0: TangentT,
    pub normalization: EuclideanMotion,
}

impl GeodesicIVP {
    pub fn new(v0: TangentT) -> Self {
        let line0 = v0.base;
        let d = line0.direction();
        let rot = UnitQuaternion::rotation_between(&d, &Vector3::z())
            .unwrap_or_else(|| UnitQuaternion::from_axis_angle(&Vector3::x_axis(), PI));
        let normalization = EuclideanMotion::new(rot, -(rot * line0.foot()));
        Self { line0, v0, normalization }
    }

    /// Closed-form constants after normalization.
    pub fn params(&self) -> Result<GeodesicParams> {
        let w = act_tangent(&self.normalization, &self.v0)?;
        Ok(GeodesicParams::from_velocity(w.xidot, w.etadot))
    }

    /// The geodesic in world position at parameter `s`.
    pub fn line_at(&self, s: f64) -> Result<OrientedLine> {
        let p = self.params()?;
        act(&self.normalization.inverse(), &geodesic_line(&p, s)?)
    }
}

/// Chart switch threshold for numerical integration.
const SWITCH_AT: f64 = 2.0;

fn to_state(v: &TangentT) -> SVector<f64, 8> {
    let (x, w) = (v.base, v.to_real());
    SVector::<f64, 8>::from([x.xi.re, x.xi.im, x.eta.re, x.eta.im, w[0], w[1], w[2], w[3]])
}

fn from_state(y: &SVector<f64, 8>, like: &OrientedLine) -> TangentT {
    let base = OrientedLine { xi: C64::new(y[0], y[1]), eta: C64::new(y[2], y[3]), chart: like.chart };
    TangentT::from_real(base, [y[4], y[5], y[6], y[7]])
}

/// RK4 integration of the geodesic equations in chart coordinates,
/// switching chart whenever `|xi|` grows past 2. Returns the final tangent.
pub fn geodesic_rk4_tangent(ivp: &GeodesicIVP, s_end: f64, step: f64) -> Result<TangentT> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("step {step} must be positive")));
    }
    let mut v = ivp.v0;
    if v.base.xi.norm() > 1.0 {
        v = tangent_transition(&v)?;
    }
    let n = uniform_steps(s_end, step);
    let h = s_end / n as f64;
    let mut state = ODEState::new(0.0, to_state(&v));
    for _ in 0..n {
        let chart = v.base;
        let f = |_: f64, y: &SVector<f64, 8>| {
            let t = from_state(y, &chart);
            let a = christoffel(&t.base).acceleration(&t.to_real());
            SVector::<f64, 8>::from([y[4], y[5], y[6], y[7], a[0], a[1], a[2], a[3]])
        };
        state = rk4_step(&f, &state, h);
        if !state.y.iter().all(|c| c.is_finite()) {
            return Err(Error::Blowup { s: state.s });
        }
        v = from_state(&state.y, &chart);
        if v.base.xi.norm() > SWITCH_AT {
            v = tangent_transition(&v)?;
            state.y = to_state(&v);
        }
    }
    Ok(v)
}

pub fn geodesic_rk4(ivp: &GeodesicIVP, s_end: f64, step: f64) -> Result<OrientedLine> {
    geodesic_rk4_tangent(ivp, s_end, step).map(|v| v.base)
}

/// Grid of points `phi(line(s), r)` over an `(s, r)` rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct RuledSurfaceMesh {
    pub n_s: usize,
    pub n_r: usize,
    /// Row-major: index `i * n_r + j` for the `i`-th ruling and `j`-th `r`.
    pub vertices: Vec<EuclideanVector>,
    /// Quads as vertex indices, counter-clockwise in `(s, r)`.
    pub quads: Vec<[usize; 4]>,
}

impl RuledSurfaceMesh {
    pub fn vertex(&self, i: usize, j: usize) -> EuclideanVector {
        self.vertices[i * self.n_r + j]
    }

    /// Largest distance of a vertex from the line through the ends of its row.
    pub fn collinearity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n_s {
            let (a, b) = (self.vertex(i, 0), self.vertex(i, self.n_r - 1));
            let d = b - a;
            if d.norm() == 0.0 {
                continue;
            }
            let u = d.normalize();
            for j in 0..self.n_r {
                let w = self.vertex(i, j) - a;
                worst = worst.max((w - u * w.dot(&u)).norm());
            }
        }
        worst
    }
}

fn linspace(range: (f64, f64), n: usize, k: usize) -> f64 {
    if n == 1 {
        range.0
    } else {
        range.0 + (range.1 - range.0) * k as f64 / (n - 1) as f64
    }
}

fn mesh_row(p: &GeodesicParams, s: f64, r_range: (f64, f64), n_r: usize) -> Result<Vec<EuclideanVector>> {
    let line = geodesic_line(p, s)?;
    (0..n_r).map(|j| phi(&line, linspace(r_range, n_r, j)).map(|q| q.to_vec())).collect()
}

/// Mesh of the ruled surface swept by the geodesic `p`.
pub fn ruled_surface(
    p: &GeodesicParams,
    s_range: (f64, f64),
    r_range: (f64, f64),
    n_s: usize,
    n_r: usize,
) -> Result<RuledSurfaceMesh> {
    if n_s == 0 || n_r == 0 {
        return Err(Error::InvalidArgument("mesh needs at least one sample per direction".into()));
    }
    let rows: Vec<Result<Vec<EuclideanVector>>> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..n_s).into_par_iter().map(|i| mesh_row(p, linspace(s_range, n_s, i), r_range, n_r)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..n_s).map(|i| mesh_row(p, linspace(s_range, n_s, i), r_range, n_r)).collect()
        }
    };
    let mut vertices = Vec::with_capacity(n_s * n_r);
    for row in rows {
        vertices.extend(row?);
    }
    let mut quads = Vec::new();
    for i in 0..n_s.saturating_sub(1) {
        for j in 0..n_r.saturating_sub(1) {
            let a = i * n_r + j;
            quads.push([a, a + n_r, a + n_r + 1, a + 1]);
        }
    }
    Ok(RuledSurfaceMesh { n_s, n_r, vertices, quads })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    /// Skew lines: a helicoid.
    Helicoid,
    /// Intersecting lines: a plane pencil, null geodesic.
    PlanePencil,
    /// The same oriented line.
    Identical,
}

/// Geodesic joining two lines: `act(motion, geodesic_line(params, s))` is
/// the first line at `s = 0` and the second at `s = s1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection {
    pub params: GeodesicParams,
    pub motion: EuclideanMotion,
    pub s1: f64,
    pub kind: ConnectionKind,
    /// Signed length of the common perpendicular.
    pub l: f64,
    /// Angle swept by the ruling directions.
    pub angle: f64,
}

impl Connection {
    pub fn line_at(&self, s: f64) -> Result<OrientedLine> {
        act(&self.motion, &geodesic_line(&self.params, s)?)
    }

    /// `G(c', c') s1^2` for the constant-speed connecting geodesic.
    pub fn squared_length(&self) -> f64 {
        self.params.C1 * self.s1 * self.s1
    }
}

const PARALLEL_TOL: f64 = 1e-12;
const MEET_TOL: f64 = 1e-12;

/// Helicoid (or plane) through `g1` and `g2` whose ruling turns through
/// the principal angle plus `turns` full turns. Parametrized so `s1 = 1`.
pub fn connect_lines(g1: &OrientedLine, g2: &OrientedLine, turns: u32) -> Result<Connection> {
    let (d1, d2) = (g1.direction(), g2.direction());
    let (p1, p2) = (g1.foot(), g2.foot());
    let n = d1.cross(&d2);
    let scale = 1.0 + p1.norm().max(p2.norm());
    if n.norm() < PARALLEL_TOL {
        if d1.dot(&d2) > 0.0 && g1.distance_to(&p2) < MEET_TOL * scale && turns == 0 {
            let motion = GeodesicIVP::new(TangentT::new(*g1, C64::new(0.0, 0.0), C64::new(0.0, 0.0)))
                .normalization
                .inverse();
            return Ok(Connection {
                params: GeodesicParams::default(),
                motion,
                s1: 0.0,
                kind: ConnectionKind::Identical,
                l: 0.0,
                angle: 0.0,
            });
        }
        return Err(Error::NoHelicoid);
    }
    let nh = n.normalize();
    // Closest points p1 + t1 d1 and p2 + t2 d2.
    let w = p1 - p2;
    let (b, dd, e) = (d1.dot(&d2), d1.dot(&w), d2.dot(&w));
    let den = 1.0 - b * b;
    let t1 = (b * e - dd) / den;
    let c1 = p1 + d1 * t1;
    let c2 = p2 + d2 * ((e - b * dd) / den);
    let mut l = (c2 - c1).dot(&nh);
    let kind = if l.abs() < MEET_TOL * scale {
        l = 0.0;
        ConnectionKind::PlanePencil
    } else {
        ConnectionKind::Helicoid
    };
    let phi0 = n.norm().atan2(b);
    let angle = phi0 + 2.0 * PI * turns as f64;
    let ex = nh.cross(&d1);
    let frame = Rotation3::from_matrix_unchecked(Matrix3::from_columns(&[ex, nh, d1]));
    let motion = EuclideanMotion::new(UnitQuaternion::from_rotation_matrix(&frame), c1);
    let c2_ = angle / 2.0;
    let params = GeodesicParams::new(-2.0 * c2_ * l, c2_, 0.0, 0.0);
    Ok(Connection { params, motion, s1: 1.0, kind, l, angle })
}

/// `-l^2/d` for the minimal-turn helicoid joining two lines.
pub fn g_distance(g1: &OrientedLine, g2: &OrientedLine) -> Result<f64> {
    let c = connect_lines(g1, g2, 0)?;
    if c.kind == ConnectionKind::Identical {
        return Ok(0.0);
    }
    Ok(-c.l * c.l / c.angle)
}
