//! Oriented lines of R^3 as points `(xi, eta)` of the tangent bundle of S^2.
//!
//! `xi` is the stereographic coordinate (projection from the south pole) of
//! the unit direction, `eta` the fibre coordinate of the perpendicular-foot
//! vector. A second chart, [`Chart::Flipped`], covers the south pole: its
//! coordinates of a line `L` are the standard coordinates of `Rx(pi) L`,
//! where `Rx(pi)` is the half-turn about the x^1-axis. That half-turn acts on
//! standard coordinates by `xi -> 1/xi`, `eta -> -eta/xi^2`, which is the
//! chart transition.

use nalgebra::Vector3;
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type EuclideanVector = Vector3<f64>;
pub type ComplexVector = Vector3<C64>;

/// Largest `|xi|` accepted by standard-chart formulas.
pub const CHART_MAX: f64 = 1e6;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    Standard,
    Flipped,
}

/// A point of the line space: one oriented affine line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedLine {
    pub xi: C64,
    pub eta: C64,
    pub chart: Chart,
}

/// A point of R^3 written as `z = x^1 + i x^2`, `t = x^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanPoint {
    pub z: C64,
    pub t: f64,
}

impl EuclideanPoint {
    pub fn new(z: C64, t: f64) -> Self {
        Self { z, t }
    }

    pub fn from_vec(v: &EuclideanVector) -> Self {
        Self { z: C64::new(v.x, v.y), t: v.z }
    }

    pub fn to_vec(self) -> EuclideanVector {
        Vector3::new(self.z.re, self.z.im, self.t)
    }
}

/// Null frame attached to a direction. `e0` is the real unit direction,
/// `eplus` the complex null vector; `eminus` is its conjugate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullFrame {
    pub e0: EuclideanVector,
    pub eplus: ComplexVector,
}

impl NullFrame {
    pub fn eminus(&self) -> ComplexVector {
        self.eplus.map(|c| c.conj())
    }

    /// Real orthonormal pair with `eplus = (e1 - i e2)/sqrt(2)` and `e1 x e2 = e0`.
    pub fn real_pair(&self) -> (EuclideanVector, EuclideanVector) {
        let e1 = self.eplus.map(|c| c.re) * SQRT_2;
        let e2 = self.eplus.map(|c| -c.im) * SQRT_2;
        (e1, e2)
    }
}

/// Tangent vector `xidot d/dxi + etadot d/deta + c.c.` at `base`, in the
/// chart of `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentT {
    pub base: OrientedLine,
    pub xidot: C64,
    pub etadot: C64,
}

impl TangentT {
    pub fn new(base: OrientedLine, xidot: C64, etadot: C64) -> Self {
        Self { base, xidot, etadot }
    }

    /// Real components in the order `(xi1, xi2, eta1, eta2)`.
    pub fn to_real(&self) -> [f64; 4] {
        [self.xidot.re, self.xidot.im, self.etadot.re, self.etadot.im]
    }

    pub fn from_real(base: OrientedLine, v: [f64; 4]) -> Self {
        Self { base, xidot: C64::new(v[0], v[1]), etadot: C64::new(v[2], v[3]) }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { xidot: self.xidot * a, etadot: self.etadot * a, ..*self }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { xidot: self.xidot + o.xidot, etadot: self.etadot + o.etadot, ..*self }
    }
}

/// Orthogonal Jacobi field `X(r) = x1 + r x2` along a line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiField {
    pub x1: EuclideanVector,
    pub x2: EuclideanVector,
}

impl JacobiField {
    pub fn at(&self, r: f64) -> EuclideanVector {
        self.x1 + self.x2 * r
    }
}

/// Half-turn about the x^1-axis, `(x, y, z) -> (x, -y, -z)`.
#[inline]
pub(crate) fn flip(v: &EuclideanVector) -> EuclideanVector {
    Vector3::new(v.x, -v.y, -v.z)
}

#[inline]
fn to_complex(v: &EuclideanVector) -> ComplexVector {
    v.map(|c| C64::new(c, 0.0))
}

/// Bilinear (not Hermitian) dot product of complex 3-vectors.
#[inline]
pub fn cdot(a: &ComplexVector, b: &ComplexVector) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cartesian components of `a d/dz + b d/dzbar + c d/dt`.
#[inline]
fn from_zt(a: C64, b: C64, c: C64) -> ComplexVector {
    Vector3::new((a + b) * 0.5, I * (b - a) * 0.5, c)
}

/// Null frame of the standard-chart direction `xi`.
pub fn null_frame(xi: C64) -> NullFrame {
    let q = xi.norm_sqr();
    let d = 1.0 + q;
    let e0 = Vector3::new(2.0 * xi.re / d, 2.0 * xi.im / d, (1.0 - q) / d);
    let s = SQRT_2 / d;
    let xib = xi.conj();
    let eplus = from_zt(C64::new(s, 0.0), -xib * xib * s, -xib * s);
    NullFrame { e0, eplus }
}

/// Stereographic coordinate of a unit direction (projection from the south pole).
pub fn stereographic(d: &EuclideanVector) -> C64 {
    C64::new(d.x, d.y) / (1.0 + d.z)
}

fn check_standard(xi: C64) -> Result<()> {
    if !(xi.re.is_finite() && xi.im.is_finite()) || xi.norm() > CHART_MAX {
        return Err(Error::ChartSingularity(format!(
            "|xi| = {} exceeds the standard chart bound",
            xi.norm()
        )));
    }
    Ok(())
}

/// Point at parameter `r` on the line with standard coordinates `(xi, eta)`.
pub fn phi_standard(xi: C64, eta: C64, r: f64) -> EuclideanPoint {
    let q = xi.norm_sqr();
    let d2 = (1.0 + q) * (1.0 + q);
    let z = ((eta - eta.conj() * xi * xi) * 2.0 + xi * (2.0 * (1.0 + q) * r)) / d2;
    let t = (-2.0 * (eta * xi.conj() + eta.conj() * xi).re + (1.0 - q * q) * r) / d2;
    EuclideanPoint { z, t }
}

impl OrientedLine {
    /// Line in the standard chart.
    pub fn new(xi: C64, eta: C64) -> Self {
        Self { xi, eta, chart: Chart::Standard }
    }

    pub fn in_chart(xi: C64, eta: C64, chart: Chart) -> Self {
        Self { xi, eta, chart }
    }

    /// The x^3-axis oriented upwards.
    pub fn x3_axis() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.xi.re.is_finite() && self.xi.im.is_finite() && self.eta.re.is_finite() && self.eta.im.is_finite()
    }

    /// Null frame in world coordinates.
    pub fn frame(&self) -> NullFrame {
        let f = null_frame(self.xi);
        match self.chart {
            Chart::Standard => f,
            Chart::Flipped => NullFrame {
                e0: flip(&f.e0),
                eplus: Vector3::new(f.eplus[0], -f.eplus[1], -f.eplus[2]),
            },
        }
    }

    pub fn direction(&self) -> EuclideanVector {
        self.frame().e0
    }

    /// Point at signed distance `r` from the perpendicular foot.
    pub fn point(&self, r: f64) -> EuclideanVector {
        let p = phi_standard(self.xi, self.eta, r).to_vec();
        match self.chart {
            Chart::Standard => p,
            Chart::Flipped => flip(&p),
        }
    }

    /// Perpendicular foot from the origin.
    pub fn foot(&self) -> EuclideanVector {
        self.point(0.0)
    }

    /// Same line expressed in `chart`.
    pub fn to_chart(&self, chart: Chart) -> Result<Self> {
        if chart == self.chart {
            Ok(*self)
        } else {
            chart_transition(self)
        }
    }

    /// Same line in the chart whose coordinate disc contains its direction
    /// (`|xi| <= 1`).
    pub fn canonical(&self) -> Self {
        if self.xi.norm() > 1.0 {
            chart_transition(self).unwrap_or(*self)
        } else {
            *self
        }
    }

    /// Standard-chart view, failing near the south pole.
    pub fn to_standard(&self) -> Result<Self> {
        let s = self.to_chart(Chart::Standard)?;
        check_standard(s.xi)?;
        Ok(s)
    }

    /// Distance from `p` to the line (as a point set).
    pub fn distance_to(&self, p: &EuclideanVector) -> f64 {
        let d = self.direction();
        let v = p - self.foot();
        (v - d * v.dot(&d)).norm()
    }

    /// Point-set and orientation distance to another line: separation of the
    /// feet plus separation of the unit directions.
    pub fn separation(&self, other: &Self) -> f64 {
        (self.foot() - other.foot()).norm() + (self.direction() - other.direction()).norm()
    }
}

/// `Phi(line, r)` for a line in any chart.
pub fn phi(line: &OrientedLine, r: f64) -> Result<EuclideanPoint> {
    if line.chart == Chart::Standard {
        check_standard(line.xi)?;
    }
    Ok(EuclideanPoint::from_vec(&line.point(r)))
}

/// Oriented line through `p` with unit direction `d`, in the standard chart,
/// together with the parameter `r` of `p` on it.
pub fn line_from_point_direction(p: &EuclideanPoint, d: &EuclideanVector) -> Result<(OrientedLine, f64)> {
    line_from_point_direction_in(p, d, Chart::Standard)
}

/// As [`line_from_point_direction`], choosing the chart from the hemisphere of `d`.
pub fn line_through(p: &EuclideanVector, d: &EuclideanVector) -> Result<(OrientedLine, f64)> {
    let chart = if d.z >= 0.0 { Chart::Standard } else { Chart::Flipped };
    line_from_point_direction_in(&EuclideanPoint::from_vec(p), d, chart)
}

pub fn line_from_point_direction_in(
    p: &EuclideanPoint,
    d: &EuclideanVector,
    chart: Chart,
) -> Result<(OrientedLine, f64)> {
    let n = d.norm();
    if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("direction must be a unit vector, |d| = {n}")));
    }
    let (pv, dv) = match chart {
        Chart::Standard => (p.to_vec(), *d),
        Chart::Flipped => (flip(&p.to_vec()), flip(d)),
    };
    if dv.z <= -1.0 + 1e-300 {
        return Err(Error::ChartSingularity("direction is the excluded pole of this chart".into()));
    }
    let xi = stereographic(&dv);
    check_standard(xi)?;
    let frame = null_frame(xi);
    let r = pv.dot(&frame.e0);
    let foot = pv - frame.e0 * r;
    let eta = cdot(&to_complex(&foot), &frame.eminus()) * ((1.0 + xi.norm_sqr()) / SQRT_2);
    Ok((OrientedLine { xi, eta, chart }, r))
}

/// Standard-chart derivative of `Phi` at `(xi, eta, r)` applied to
/// `(xidot, etadot, rdot)`.
pub fn dphi_standard(xi: C64, eta: C64, r: f64, xidot: C64, etadot: C64, rdot: f64) -> EuclideanVector {
    let q = xi.norm_sqr();
    let d = 1.0 + q;
    let f = null_frame(xi);
    let e0c = to_complex(&f.e0);
    let dxi = f.eplus * ((C64::new(r, 0.0) - xi.conj() * eta * (2.0 / d)) * (SQRT_2 / d))
        - e0c * (eta.conj() * (2.0 / (d * d)));
    let deta = f.eplus * C64::new(SQRT_2 / d, 0.0);
    let v = dxi * xidot + deta * etadot;
    v.map(|c| 2.0 * c.re) + f.e0 * rdot
}

/// Image of the tangent vector `v` (plus an `rdot` along the line) under `DPhi`
/// at parameter `r`, as a real vector in world coordinates.
pub fn dphi(line: &OrientedLine, r: f64, v: &TangentT, rdot: f64) -> Result<EuclideanVector> {
    if line.chart == Chart::Standard {
        check_standard(line.xi)?;
    }
    let out = dphi_standard(line.xi, line.eta, r, v.xidot, v.etadot, rdot);
    Ok(match line.chart {
        Chart::Standard => out,
        Chart::Flipped => flip(&out),
    })
}

/// Orthogonal Jacobi field identified with a tangent vector.
pub fn jacobi_decompose(v: &TangentT) -> JacobiField {
    let b = &v.base;
    let at0 = dphi_standard(b.xi, b.eta, 0.0, v.xidot, v.etadot, 0.0);
    let at1 = dphi_standard(b.xi, b.eta, 1.0, v.xidot, v.etadot, 0.0);
    let e0 = null_frame(b.xi).e0;
    let x1 = at0 - e0 * at0.dot(&e0);
    let x2 = at1 - at0;
    match b.chart {
        Chart::Standard => JacobiField { x1, x2 },
        Chart::Flipped => JacobiField { x1: flip(&x1), x2: flip(&x2) },
    }
}

/// Switch between the standard and flipped charts.
pub fn chart_transition(line: &OrientedLine) -> Result<OrientedLine> {
    if line.xi.norm() == 0.0 {
        return Err(Error::ChartSingularity("xi = 0 has no image in the other chart".into()));
    }
    let inv = line.xi.inv();
    let chart = match line.chart {
        Chart::Standard => Chart::Flipped,
        Chart::Flipped => Chart::Standard,
    };
    Ok(OrientedLine { xi: inv, eta: -line.eta * inv * inv, chart })
}

/// Tangent vector expressed in the other chart (differential of the transition).
pub fn tangent_transition(v: &TangentT) -> Result<TangentT> {
    let base = chart_transition(&v.base)?;
    let inv = v.base.xi.inv();
    let xidot = -v.xidot * inv * inv;
    let etadot = -v.etadot * inv * inv + v.base.eta * v.xidot * inv * inv * inv * 2.0;
    Ok(TangentT { base, xidot, etadot })
}

/// Same point set with the opposite orientation.
pub fn reverse_orientation(line: &OrientedLine) -> Result<OrientedLine> {
    let p = line.foot();
    let d = -line.direction();
    line_through(&p, &d).map(|(l, _)| l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &EuclideanVector, b: &EuclideanVector, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn frame_directions_at_special_points() {
        assert!(close(&null_frame(c(0.0, 0.0)).e0, &Vector3::new(0.0, 0.0, 1.0), 1e-15));
        assert!(close(&null_frame(c(1.0, 0.0)).e0, &Vector3::new(1.0, 0.0, 0.0), 1e-15));
        assert!(close(&null_frame(c(0.0, 1.0)).e0, &Vector3::new(0.0, 1.0, 0.0), 1e-15));
    }

    #[test]
    fn frame_identities_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let r = rng.gen_range(0.0..10.0);
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let f = null_frame(C64::from_polar(r, a));
            let e0 = to_complex(&f.e0);
            assert!((f.e0.dot(&f.e0) - 1.0).abs() < 1e-12);
            assert!((cdot(&f.eplus, &f.eminus()) - 1.0).norm() < 1e-12);
            assert!(cdot(&e0, &f.eplus).norm() < 1e-12);
            assert!(cdot(&f.eplus, &f.eplus).norm() < 1e-12);
            let (e1, e2) = f.real_pair();
            assert!(close(&e1.cross(&e2), &f.e0, 1e-12));
        }
    }

    #[test]
    fn phi_examples() {
        let p = phi_standard(c(0.0, 0.0), c(0.0, 0.0), 5.0);
        assert_eq!((p.z, p.t), (c(0.0, 0.0), 5.0));
        let p = phi_standard(c(0.0, 0.0), c(0.5, 0.0), 0.0);
        assert!((p.z - c(1.0, 0.0)).norm() < 1e-15 && p.t.abs() < 1e-15);
    }

    #[test]
    fn phi_moves_along_direction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let xi = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let eta = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let r = rng.gen_range(-5.0..5.0);
            let l = OrientedLine::new(xi, eta);
            let delta = l.point(r) - l.point(0.0);
            assert!((delta.norm() - r.abs()).abs() < 1e-10);
            assert!(close(&delta, &(l.direction() * r), 1e-10));
            assert!(l.foot().dot(&l.direction()).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_examples() {
        let (l, r) = line_from_point_direction(&EuclideanPoint::new(c(0.0, 0.0), 5.0), &Vector3::z()).unwrap();
        assert_eq!((l.xi, l.eta, r), (c(0.0, 0.0), c(0.0, 0.0), 5.0));
        let (l, r) = line_from_point_direction(&EuclideanPoint::new(c(1.0, 0.0), 0.0), &Vector3::z()).unwrap();
        assert!((l.eta - c(0.5, 0.0)).norm() < 1e-15 && l.xi.norm() == 0.0 && r == 0.0);
    }

    #[test]
    fn inverse_rejects_south_pole_in_standard_chart() {
        let r = line_from_point_direction(&EuclideanPoint::new(c(0.0, 0.0), 0.0), &-Vector3::z());
        assert!(matches!(r, Err(Error::ChartSingularity(_))));
        let (l, _) = line_through(&Vector3::new(1.0, 2.0, 3.0), &-Vector3::z()).unwrap();
        assert_eq!(l.chart, Chart::Flipped);
        assert!(l.xi.norm() < 1e-15);
        assert!(l.distance_to(&Vector3::new(1.0, 2.0, 3.0)) < 1e-12);
    }

    #[test]
    fn inverse_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let p = Vector3::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let d = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).normalize();
            let (l, r) = line_through(&p, &d).unwrap();
            assert!(close(&l.point(r), &p, 1e-10));
            assert!(close(&l.direction(), &d, 1e-12));
        }
    }

    #[test]
    fn dphi_examples_at_origin() {
        let o = OrientedLine::x3_axis();
        let v = TangentT::new(o, c(0.0, 0.0), c(1.0, 0.0));
        for r in [-2.0, 0.0, 3.0] {
            assert!(close(&dphi(&o, r, &v, 0.0).unwrap(), &Vector3::new(2.0, 0.0, 0.0), 1e-14));
        }
        let zero = TangentT::new(o, c(0.0, 0.0), c(0.0, 0.0));
        assert!(close(&dphi(&o, 1.0, &zero, 1.0).unwrap(), &Vector3::z(), 1e-15));
    }

    #[test]
    fn dphi_matches_finite_differences() {
        use crate::numerics::{derivative_fd, FDScheme};
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let fd = FDScheme::central4();
        for _ in 0..200 {
            let xi = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let eta = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r = rng.gen_range(-3.0..3.0);
            let base = OrientedLine::new(xi, eta);
            let dirs = [[1.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 0.0, 1.0]];
            for e in dirs {
                let num = derivative_fd(
                    |s| {
                        let p = phi_standard(xi + c(e[0], e[1]) * s, eta + c(e[2], e[3]) * s, r + e[4] * s).to_vec();
                        [p.x, p.y, p.z]
                    },
                    0.0,
                    &fd,
                )
                .unwrap();
                let v = TangentT::new(base, c(e[0], e[1]), c(e[2], e[3]));
                let ana = dphi(&base, r, &v, e[4]).unwrap();
                let num = Vector3::from(num);
                assert!((ana - num).norm() <= 1e-6 * ana.norm().max(1.0), "{ana} vs {num}");
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        let o = OrientedLine::x3_axis();
        let j = jacobi_decompose(&TangentT::new(o, c(0.0, 0.0), c(1.0, 0.0)));
        assert!(close(&j.x1, &Vector3::new(2.0, 0.0, 0.0), 1e-14) && j.x2.norm() < 1e-14);
        let j = jacobi_decompose(&TangentT::new(o, c(1.0, 0.0), c(0.0, 0.0)));
        assert!(j.x1.norm() < 1e-14 && close(&j.x2, &Vector3::new(2.0, 0.0, 0.0), 1e-14));
    }

    #[test]
    fn jacobi_is_linear_and_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let base = OrientedLine::new(c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
            let mut rv = || TangentT::from_real(base, [0; 4].map(|_| rng.gen_range(-1.0..1.0)));
            let (v, w) = (rv(), rv());
            let (a, b) = (0.7, -1.3);
            let lhs = jacobi_decompose(&v.scale(a).add(&w.scale(b)));
            let (jv, jw) = (jacobi_decompose(&v), jacobi_decompose(&w));
            assert!(close(&lhs.x1, &(jv.x1 * a + jw.x1 * b), 1e-12));
            assert!(close(&lhs.x2, &(jv.x2 * a + jw.x2 * b), 1e-12));
            let e0 = base.direction();
            assert!(jv.x1.dot(&e0).abs() < 1e-10 && jv.x2.dot(&e0).abs() < 1e-10);
        }
    }

    #[test]
    fn chart_transition_examples() {
        let l = chart_transition(&OrientedLine::new(c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        assert_eq!((l.xi, l.eta, l.chart), (c(1.0, 0.0), c(0.0, 0.0), Chart::Flipped));
        let l = chart_transition(&OrientedLine::new(c(2.0, 0.0), c(1.0, 0.0))).unwrap();
        assert!((l.xi - c(0.5, 0.0)).norm() < 1e-15 && (l.eta - c(-0.25, 0.0)).norm() < 1e-15);
        assert!(chart_transition(&OrientedLine::x3_axis()).is_err());
    }

    #[test]
    fn chart_transition_preserves_line() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let l = OrientedLine::new(c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)), c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)));
            let m = chart_transition(&l).unwrap();
            assert!(l.separation(&m) < 1e-10);
            let back = chart_transition(&m).unwrap();
            assert!((back.xi - l.xi).norm() < 1e-12 && (back.eta - l.eta).norm() < 1e-10);
        }
    }

    #[test]
    fn reverse_examples() {
        let r = reverse_orientation(&OrientedLine::x3_axis()).unwrap();
        assert_eq!(r.chart, Chart::Flipped);
        assert!(close(&r.direction(), &-Vector3::z(), 1e-15));
        assert!(r.xi.norm() < 1e-15 && r.eta.norm() < 1e-15);
        let rr = reverse_orientation(&r).unwrap();
        assert_eq!(rr.chart, Chart::Standard);
        assert!(rr.xi.norm() < 1e-15 && rr.eta.norm() < 1e-15);
    }

    #[test]
    fn reverse_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let l = OrientedLine::new(c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)), c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)));
            let r = reverse_orientation(&l).unwrap();
            assert!(close(&r.direction(), &-l.direction(), 1e-12));
            assert!(close(&r.foot(), &l.foot(), 1e-10));
            assert!(reverse_orientation(&r).unwrap().separation(&l) < 1e-10);
        }
    }

    #[test]
    fn tangent_transition_matches_point_motion() {
        let l = OrientedLine::new(c(0.8, -0.4), c(0.3, 1.1));
        let v = TangentT::new(l, c(0.2, 0.5), c(-0.7, 0.1));
        let w = tangent_transition(&v).unwrap();
        let (ja, jb) = (jacobi_decompose(&v), jacobi_decompose(&w));
        assert!(close(&ja.x1, &jb.x1, 1e-12) && close(&ja.x2, &jb.x2, 1e-12));
    }
}
