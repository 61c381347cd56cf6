//! Euclidean motions acting on oriented lines and the Killing fields of G.

use nalgebra::{DMatrix, DVector, Matrix4, Unit, UnitQuaternion, Vector3};

use crate::error::{Error, Result};
use crate::kahler::{metric_G, metric_derivatives, Metric4};
use crate::linespace::{flip, Chart, EuclideanVector, OrientedLine, TangentT, C64, CHART_MAX, I};
use crate::numerics::{derivative_fd, FDScheme};

/// Rigid motion `p -> R p + T`, with `R` carried as a unit quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanMotion {
    pub rotation: UnitQuaternion<f64>,
    pub translation: EuclideanVector,
}

impl Default for EuclideanMotion {
    fn default() -> Self {
        Self::identity()
    }
}

impl EuclideanMotion {
    pub fn identity() -> Self {
        Self { rotation: UnitQuaternion::identity(), translation: Vector3::zeros() }
    }

    pub fn new(rotation: UnitQuaternion<f64>, translation: EuclideanVector) -> Self {
        Self { rotation, translation }
    }

    pub fn translation(t: EuclideanVector) -> Self {
        Self { rotation: UnitQuaternion::identity(), translation: t }
    }

    /// Rotation by `angle` about `axis` through the origin (right-handed).
    pub fn rotation_about(axis: &EuclideanVector, angle: f64) -> Self {
        Self {
            rotation: UnitQuaternion::from_axis_angle(&Unit::new_normalize(*axis), angle),
            translation: Vector3::zeros(),
        }
    }

    pub fn apply_point(&self, p: &EuclideanVector) -> EuclideanVector {
        self.rotation * p + self.translation
    }

    pub fn apply_vector(&self, v: &EuclideanVector) -> EuclideanVector {
        self.rotation * v
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Self) -> Self {
        Self {
            rotation: self.rotation * first.rotation,
            translation: self.rotation * first.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.rotation.inverse();
        Self { rotation: inv, translation: -(inv * self.translation) }
    }
}

/// `Rx(pi)`, the map relating the two charts.
fn flip_motion() -> EuclideanMotion {
    EuclideanMotion::rotation_about(&Vector3::x(), std::f64::consts::PI)
}

/// Coefficients of a motion acting on standard-chart coordinates:
/// `xi -> (a xi + b)/(c xi + d)`, `eta -> eta/(c xi + d)^2 + shift(xi')`.
#[derive(Debug, Clone, Copy)]
struct CoordMotion {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    tz: C64,
    tt: f64,
}

impl CoordMotion {
    fn from_motion(m: &EuclideanMotion) -> Self {
        let q = m.rotation.quaternion();
        let (w, x, y, z) = (q.w, q.i, q.j, q.k);
        let t = m.translation;
        Self {
            a: C64::new(w, z),
            b: C64::new(y, -x),
            c: C64::new(-y, -x),
            d: C64::new(w, -z),
            tz: C64::new(t.x, t.y),
            tt: t.z,
        }
    }

    /// Fibre shift produced by a translation at direction `xi`: the
    /// component of `T` orthogonal to the line, written in the fibre
    /// coordinate, is `(1+|xi|^2)/sqrt2 * (T . e_-)`.
    fn shift(&self, xi: C64) -> C64 {
        self.tz * 0.5 - self.tz.conj() * xi * xi * 0.5 - xi * self.tt
    }

    fn shift_derivative(&self, xi: C64) -> C64 {
        -self.tz.conj() * xi - self.tt
    }

    fn apply(&self, xi: C64, eta: C64) -> (C64, C64) {
        let den = self.c * xi + self.d;
        let xi2 = (self.a * xi + self.b) / den;
        (xi2, eta / (den * den) + self.shift(xi2))
    }

    /// Holomorphic Jacobian entries `(dxi'/dxi, deta'/dxi, deta'/deta)`.
    fn jacobian(&self, xi: C64, eta: C64) -> (C64, C64, C64) {
        let den = self.c * xi + self.d;
        let inv2 = (den * den).inv();
        let xi2 = (self.a * xi + self.b) / den;
        let dxi = inv2;
        let deta_dxi = -self.c * eta * inv2 * 2.0 / den + self.shift_derivative(xi2) * dxi;
        (dxi, deta_dxi, inv2)
    }
}

/// Motion conjugated so that it acts on the standard coordinates of the
/// charts `from` and `to`.
fn chart_motion(m: &EuclideanMotion, from: Chart, to: Chart) -> EuclideanMotion {
    let f = flip_motion();
    let pre = if from == Chart::Flipped { m.compose(&f) } else { *m };
    if to == Chart::Flipped {
        f.compose(&pre)
    } else {
        pre
    }
}

fn output_chart(m: &EuclideanMotion, line: &OrientedLine) -> Chart {
    if m.apply_vector(&line.direction()).z >= 0.0 {
        Chart::Standard
    } else {
        Chart::Flipped
    }
}

/// Image of `line` under `m`, in the chart matching the hemisphere of the
/// image direction.
pub fn act(m: &EuclideanMotion, line: &OrientedLine) -> Result<OrientedLine> {
    let to = output_chart(m, line);
    let cm = CoordMotion::from_motion(&chart_motion(m, line.chart, to));
    let (xi, eta) = cm.apply(line.xi, line.eta);
    let out = OrientedLine { xi, eta, chart: to };
    if !out.is_finite() || xi.norm() > CHART_MAX {
        return Err(Error::ChartSingularity(format!("image of line has |xi| = {}", xi.norm())));
    }
    Ok(out)
}

/// Differential of [`act`] applied to `v`.
pub fn act_tangent(m: &EuclideanMotion, v: &TangentT) -> Result<TangentT> {
    let base = act(m, &v.base)?;
    let cm = CoordMotion::from_motion(&chart_motion(m, v.base.chart, base.chart));
    let (a, b, d) = cm.jacobian(v.base.xi, v.base.eta);
    Ok(TangentT { base, xidot: a * v.xidot, etadot: b * v.xidot + d * v.etadot })
}

/// Parameters of the Killing field
/// `K^xi = alpha + 2 a i xi + conj(alpha) xi^2`,
/// `K^eta = 2 (a i + conj(alpha) xi) eta + beta + b xi - conj(beta) xi^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KillingParams {
    pub alpha: C64,
    pub a: f64,
    pub beta: C64,
    pub b: f64,
}

impl KillingParams {
    /// Field of the infinitesimal motion `p' = omega x p + vel`.
    ///
    /// `alpha = (omega_2 - i omega_1)/2`, `a = omega_3/2`,
    /// `beta = (vel_1 + i vel_2)/2`, `b = -vel_3`.
    pub fn from_euclidean(omega: &EuclideanVector, vel: &EuclideanVector) -> Self {
        Self {
            alpha: C64::new(omega.y, -omega.x) * 0.5,
            a: omega.z * 0.5,
            beta: C64::new(vel.x, vel.y) * 0.5,
            b: -vel.z,
        }
    }

    /// `(omega, vel)`, inverse of [`KillingParams::from_euclidean`].
    pub fn to_euclidean(&self) -> (EuclideanVector, EuclideanVector) {
        (
            Vector3::new(-2.0 * self.alpha.im, 2.0 * self.alpha.re, 2.0 * self.a),
            Vector3::new(2.0 * self.beta.re, 2.0 * self.beta.im, -self.b),
        )
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.alpha.re, self.alpha.im, self.a, self.beta.re, self.beta.im, self.b]
    }

    pub fn from_array(p: [f64; 6]) -> Self {
        Self { alpha: C64::new(p[0], p[1]), a: p[2], beta: C64::new(p[3], p[4]), b: p[5] }
    }

    /// The six basis generators.
    pub fn basis() -> [Self; 6] {
        let mut out = [Self::default(); 6];
        for (k, o) in out.iter_mut().enumerate() {
            let mut p = [0.0; 6];
            p[k] = 1.0;
            *o = Self::from_array(p);
        }
        out
    }
}

fn killing_standard(p: &KillingParams, xi: C64, eta: C64) -> (C64, C64) {
    let ab = p.alpha.conj();
    let kxi = p.alpha + I * xi * (2.0 * p.a) + ab * xi * xi;
    let keta = (I * p.a + ab * xi) * eta * 2.0 + p.beta + xi * p.b - p.beta.conj() * xi * xi;
    (kxi, keta)
}

/// The Killing field of `p` at `line`, in the line's chart.
pub fn killing_field(p: &KillingParams, line: &OrientedLine) -> TangentT {
    let q = match line.chart {
        Chart::Standard => *p,
        Chart::Flipped => {
            let (w, v) = p.to_euclidean();
            KillingParams::from_euclidean(&flip(&w), &flip(&v))
        }
    };
    let (xidot, etadot) = killing_standard(&q, line.xi, line.eta);
    TangentT { base: *line, xidot, etadot }
}

fn shifted(line: &OrientedLine, k: usize, t: f64) -> OrientedLine {
    let mut x = [line.xi.re, line.xi.im, line.eta.re, line.eta.im];
    x[k] += t;
    OrientedLine { xi: C64::new(x[0], x[1]), eta: C64::new(x[2], x[3]), chart: line.chart }
}

/// Jacobian `dK^i/dx^j` of a vector field by central differences.
fn field_jacobian(field: &dyn Fn(&OrientedLine) -> TangentT, line: &OrientedLine) -> Result<Matrix4<f64>> {
    let fd = FDScheme::central4();
    let mut jac = Matrix4::zeros();
    for j in 0..4 {
        let col = derivative_fd(|t| field(&shifted(line, j, t)).to_real(), 0.0, &fd)?;
        for i in 0..4 {
            jac[(i, j)] = col[i];
        }
    }
    Ok(jac)
}

/// Lie derivative of G along `field`, as a symmetric matrix at `line`.
#[allow(non_snake_case)]
pub fn lie_derivative_G(field: &dyn Fn(&OrientedLine) -> TangentT, line: &OrientedLine) -> Result<Metric4> {
    let g = metric_G(line).0;
    let dg = metric_derivatives(line);
    let k = field(line).to_real();
    let jac = field_jacobian(field, line)?;
    let mut out = g.transpose() * jac + jac.transpose() * g;
    for (i, ki) in k.iter().enumerate() {
        out += dg[i] * *ki;
    }
    Ok(Metric4(out))
}

/// Lie bracket `[P, Q]` of two vector fields at `line`.
pub fn bracket(
    p: &dyn Fn(&OrientedLine) -> TangentT,
    q: &dyn Fn(&OrientedLine) -> TangentT,
    line: &OrientedLine,
) -> Result<TangentT> {
    let (pv, qv) = (nalgebra::Vector4::from(p(line).to_real()), nalgebra::Vector4::from(q(line).to_real()));
    let v = field_jacobian(q, line)? * pv - field_jacobian(p, line)? * qv;
    Ok(TangentT::from_real(*line, [v[0], v[1], v[2], v[3]]))
}

/// Least-squares Killing parameters matching `field` on `samples`, with the
/// RMS residual.
pub fn fit_killing(field: &dyn Fn(&OrientedLine) -> TangentT, samples: &[OrientedLine]) -> Result<(KillingParams, f64)> {
    let n = 4 * samples.len();
    let mut a = DMatrix::zeros(n, 6);
    let mut rhs = DVector::zeros(n);
    for (s, line) in samples.iter().enumerate() {
        for (k, e) in KillingParams::basis().iter().enumerate() {
            let col = killing_field(e, line).to_real();
            for i in 0..4 {
                a[(4 * s + i, k)] = col[i];
            }
        }
        let f = field(line).to_real();
        for i in 0..4 {
            rhs[4 * s + i] = f[i];
        }
    }
    let sol = a.clone().svd(true, true).solve(&rhs, 1e-14).map_err(|e| Error::InvalidArgument(e.into()))?;
    let res = (a * &sol - rhs).norm() / (n as f64).sqrt();
    Ok((KillingParams::from_array([sol[0], sol[1], sol[2], sol[3], sol[4], sol[5]]), res))
}
