//! The Kahler triple `(J, Omega, G)` on the line space, the canonical 1-form
//! `Theta`, the Kahler potential, Levi-Civita connection and curvature.
//!
//! Real coordinates are ordered `(xi1, xi2, eta1, eta2)`. Symmetric products
//! are `ab = (a(x)b + b(x)a)/2` and wedges `a^b = (a(x)b - b(x)a)/2`; with
//! these conventions `G(v, w) = Omega(Jv, w)` and `G(v, v)` is the angular
//! momentum `(X1 x X2) . e0` of the Jacobi field of `v`.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::linespace::{jacobi_decompose, OrientedLine, TangentT, C64, I};
use crate::numerics::{derivative_fd, FDScheme};

/// Symmetric 4x4 metric in `(xi1, xi2, eta1, eta2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric4(pub Matrix4<f64>);

impl Metric4 {
    pub fn bilinear(&self, v: &[f64; 4], w: &[f64; 4]) -> f64 {
        (Vector4::from(*v).transpose() * self.0 * Vector4::from(*w))[0]
    }

    pub fn quad(&self, v: &[f64; 4]) -> f64 {
        self.bilinear(v, v)
    }

    /// Counts of (positive, negative, zero) eigenvalues; `tol` is relative to
    /// the largest eigenvalue magnitude.
    pub fn signature(&self, tol: f64) -> (usize, usize, usize) {
        let eig = SymmetricEigen::new(self.0).eigenvalues;
        let scale = eig.amax().max(f64::MIN_POSITIVE);
        eig.iter().fold((0, 0, 0), |(p, n, z), &l| {
            if l > tol * scale {
                (p + 1, n, z)
            } else if l < -tol * scale {
                (p, n + 1, z)
            } else {
                (p, n, z + 1)
            }
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }
}

/// The complex structure: multiplication of both components by `i`.
#[allow(non_snake_case)]
pub fn J_apply(v: &TangentT) -> TangentT {
    TangentT { xidot: v.xidot * I, etadot: v.etadot * I, ..*v }
}

#[inline]
fn conformal(line: &OrientedLine) -> (f64, f64) {
    let q = line.xi.norm_sqr();
    (q, 1.0 + q)
}

/// The symplectic form evaluated on two tangent vectors at the same line.
pub fn omega(v: &TangentT, w: &TangentT) -> f64 {
    let b = &v.base;
    let (_, d) = conformal(b);
    let a = (v.etadot * w.xidot.conj() - w.etadot * v.xidot.conj()).re * 2.0 / (d * d);
    let c = 8.0 * (b.eta * b.xi.conj()).im * (v.xidot * w.xidot.conj()).im / (d * d * d);
    a + c
}

/// Omega through the Jacobi fields: half the antisymmetrised pairing of the
/// position part of one field with the rate of the other.
pub fn omega_jacobi(v: &TangentT, w: &TangentT) -> f64 {
    let (x, y) = (jacobi_decompose(v), jacobi_decompose(w));
    0.5 * (x.x1.dot(&y.x2) - y.x1.dot(&x.x2))
}

/// Coefficient of `dxi ^ dxibar` in Omega: `4 (xi etabar - xibar eta)/(1 + |xi|^2)^3`.
pub fn omega_component_xi_xibar(line: &OrientedLine) -> C64 {
    let (_, d) = conformal(line);
    (line.xi * line.eta.conj() - line.xi.conj() * line.eta) * 4.0 / (d * d * d)
}

fn basis(base: OrientedLine, k: usize) -> TangentT {
    let mut v = [0.0; 4];
    v[k] = 1.0;
    TangentT::from_real(base, v)
}

/// Antisymmetric matrix of Omega in real coordinates.
pub fn omega_matrix(line: &OrientedLine) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| omega(&basis(*line, i), &basis(*line, j)))
}

/// Metric components `(A, B)`: `G = B (dxi1^2 + dxi2^2) - 2A dxi1 deta2 + 2A dxi2 deta1`.
#[inline]
fn metric_ab(xi: C64, eta: C64) -> (f64, f64) {
    let d = 1.0 + xi.norm_sqr();
    (2.0 / (d * d), 8.0 * (xi.conj() * eta).im / (d * d * d))
}

fn metric_from_ab(a: f64, b: f64) -> Matrix4<f64> {
    Matrix4::new(
        b, 0.0, 0.0, -a, //
        0.0, b, a, 0.0, //
        0.0, a, 0.0, 0.0, //
        -a, 0.0, 0.0, 0.0,
    )
}

/// The neutral metric at `line` as a real 4x4 matrix.
#[allow(non_snake_case)]
pub fn metric_G(line: &OrientedLine) -> Metric4 {
    let (a, b) = metric_ab(line.xi, line.eta);
    Metric4(metric_from_ab(a, b))
}

/// `G(v, w)`.
pub fn g_apply(v: &TangentT, w: &TangentT) -> f64 {
    metric_G(&v.base).bilinear(&v.to_real(), &w.to_real())
}

/// Oriented area `(X1 x X2) . e0` of the Jacobi field of `v`.
pub fn angular_momentum(v: &TangentT) -> f64 {
    let j = jacobi_decompose(v);
    j.x1.cross(&j.x2).dot(&v.base.direction())
}

/// Canonical 1-form `Theta = 2 etabar dxi/(1+|xi|^2)^2 + c.c.` evaluated on `v`.
pub fn theta(v: &TangentT) -> f64 {
    let b = &v.base;
    let (_, d) = conformal(b);
    4.0 * (b.eta.conj() * v.xidot).re / (d * d)
}

/// Kahler potential `2i (xi etabar - xibar eta)/(1 + |xi|^2)`.
///
/// The Hermitian components of G satisfy `h_{a bbar} = -d_a dbar_b Upsilon`
/// with `G = h_{a bbar} dz^a dzbar^b` summed once over each ordered pair.
pub fn kahler_potential(line: &OrientedLine) -> f64 {
    let (_, d) = conformal(line);
    ((line.xi * line.eta.conj() - line.xi.conj() * line.eta) * I * 2.0 / d).re
}

/// Analytic partial derivatives `d_k g_ij` of the metric, indexed `[k]`.
pub fn metric_derivatives(line: &OrientedLine) -> [Matrix4<f64>; 4] {
    let (x1, x2) = (line.xi.re, line.xi.im);
    let (y1, y2) = (line.eta.re, line.eta.im);
    let d = 1.0 + x1 * x1 + x2 * x2;
    let (d3, d4) = (d * d * d, d * d * d * d);
    let s = x1 * y2 - x2 * y1;
    let da = [-8.0 * x1 / d3, -8.0 * x2 / d3, 0.0, 0.0];
    let db = [
        8.0 * y2 / d3 - 48.0 * s * x1 / d4,
        -8.0 * y1 / d3 - 48.0 * s * x2 / d4,
        -8.0 * x2 / d3,
        8.0 * x1 / d3,
    ];
    [0, 1, 2, 3].map(|k| metric_from_ab(da[k], db[k]))
}

/// Levi-Civita coefficients `gamma[i][j][k] = Gamma^i_{jk}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel(pub [[[f64; 4]; 4]; 4]);

impl Christoffel {
    pub fn from_metric(g: &Matrix4<f64>, dg: &[Matrix4<f64>; 4]) -> Result<Self> {
        let ginv = g.try_inverse().ok_or(Error::NonFiniteSample { at: "singular metric".into() })?;
        let mut out = [[[0.0; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in j..4 {
                    let mut acc = 0.0;
                    for l in 0..4 {
                        acc += ginv[(i, l)] * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]);
                    }
                    out[i][j][k] = 0.5 * acc;
                    out[i][k][j] = 0.5 * acc;
                }
            }
        }
        Ok(Self(out))
    }

    /// `-Gamma^i_{jk} v^j v^k`.
    pub fn acceleration(&self, v: &[f64; 4]) -> [f64; 4] {
        let mut a = [0.0; 4];
        for (i, ai) in a.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..4 {
                for k in 0..4 {
                    acc += self.0[i][j][k] * v[j] * v[k];
                }
            }
            *ai = -acc;
        }
        a
    }
}

/// Levi-Civita connection of G at `line` from the analytic metric derivatives.
pub fn christoffel(line: &OrientedLine) -> Christoffel {
    let g = metric_G(line).0;
    let dg = metric_derivatives(line);
    // G is non-degenerate everywhere: det = A^4.
    Christoffel::from_metric(&g, &dg).expect("neutral metric is non-degenerate")
}

/// Geodesic acceleration `(xi'', eta'')` for velocity `v`.
pub fn geodesic_acceleration(v: &TangentT) -> (C64, C64) {
    let a = christoffel(&v.base).acceleration(&v.to_real());
    (C64::new(a[0], a[1]), C64::new(a[2], a[3]))
}

/// Conformal factor `u` of a base metric `e^{2u} dxi dxibar`, with complex
/// derivatives `du = d u/d xi` and the real `d dbar u`.
pub trait ConformalFactor {
    fn u(&self, xi: C64) -> f64;
    fn du(&self, xi: C64) -> C64;
    fn ddbar_u(&self, xi: C64) -> f64;

    /// `d (d dbar u)`; finite differences unless overridden.
    fn d_ddbar_u(&self, xi: C64) -> Result<C64> {
        let fd = FDScheme::central4();
        let gx = derivative_fd(|t| [self.ddbar_u(xi + t)], 0.0, &fd)?[0];
        let gy = derivative_fd(|t| [self.ddbar_u(xi + I * t)], 0.0, &fd)?[0];
        Ok(C64::new(0.5 * gx, -0.5 * gy))
    }

    /// Gauss curvature `kappa = -4 e^{-2u} d dbar u` of the base.
    fn gauss(&self, xi: C64) -> f64 {
        -4.0 * (-2.0 * self.u(xi)).exp() * self.ddbar_u(xi)
    }

    /// `d kappa`.
    fn d_gauss(&self, xi: C64) -> Result<C64> {
        let e = (-2.0 * self.u(xi)).exp();
        Ok((self.du(xi) * (-2.0 * self.ddbar_u(xi)) + self.d_ddbar_u(xi)?) * (-4.0 * e))
    }
}

/// Round sphere `e^{2u} = 2 (1 + |xi|^2)^{-2}`, the factor inducing G.
#[derive(Debug, Clone, Copy, Default)]
pub struct RoundSphere;

impl ConformalFactor for RoundSphere {
    fn u(&self, xi: C64) -> f64 {
        0.5 * LN_2 - (1.0 + xi.norm_sqr()).ln()
    }
    fn du(&self, xi: C64) -> C64 {
        -xi.conj() / (1.0 + xi.norm_sqr())
    }
    fn ddbar_u(&self, xi: C64) -> f64 {
        let d = 1.0 + xi.norm_sqr();
        -1.0 / (d * d)
    }
    fn d_ddbar_u(&self, xi: C64) -> Result<C64> {
        let d = 1.0 + xi.norm_sqr();
        Ok(xi.conj() * 2.0 / (d * d * d))
    }
}

/// Flat base, `u = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatFactor;

impl ConformalFactor for FlatFactor {
    fn u(&self, _: C64) -> f64 {
        0.0
    }
    fn du(&self, _: C64) -> C64 {
        C64::new(0.0, 0.0)
    }
    fn ddbar_u(&self, _: C64) -> f64 {
        0.0
    }
    fn d_ddbar_u(&self, _: C64) -> Result<C64> {
        Ok(C64::new(0.0, 0.0))
    }
}

/// `u = |xi|^2`: a base of non-constant curvature.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadraticFactor;

impl ConformalFactor for QuadraticFactor {
    fn u(&self, xi: C64) -> f64 {
        xi.norm_sqr()
    }
    fn du(&self, xi: C64) -> C64 {
        xi.conj()
    }
    fn ddbar_u(&self, _: C64) -> f64 {
        1.0
    }
    fn d_ddbar_u(&self, _: C64) -> Result<C64> {
        Ok(C64::new(0.0, 0.0))
    }
}

/// Conformal factor from a closure; all derivatives by finite differences.
pub struct FnFactor<F: Fn(C64) -> f64>(pub F);

impl<F: Fn(C64) -> f64> FnFactor<F> {
    fn partials(&self, xi: C64) -> (f64, f64) {
        let fd = FDScheme::central4();
        let ux = derivative_fd(|t| [(self.0)(xi + t)], 0.0, &fd).map(|d| d[0]).unwrap_or(f64::NAN);
        let uy = derivative_fd(|t| [(self.0)(xi + I * t)], 0.0, &fd).map(|d| d[0]).unwrap_or(f64::NAN);
        (ux, uy)
    }
}

impl<F: Fn(C64) -> f64> ConformalFactor for FnFactor<F> {
    fn u(&self, xi: C64) -> f64 {
        (self.0)(xi)
    }
    fn du(&self, xi: C64) -> C64 {
        let (ux, uy) = self.partials(xi);
        C64::new(0.5 * ux, -0.5 * uy)
    }
    fn ddbar_u(&self, xi: C64) -> f64 {
        let h = 1e-3 * xi.norm().max(1.0);
        let f = |z: C64| (self.0)(z);
        let lap = (f(xi + h) + f(xi - h) + f(xi + I * h) + f(xi - I * h) - 4.0 * f(xi)) / (h * h);
        0.25 * lap
    }
}

/// Tangent-bundle metric induced by a general base factor, in the sign
/// convention that reproduces [`metric_G`] for [`RoundSphere`].
pub fn metric_for_factor(factor: &dyn ConformalFactor, x: &[f64; 4]) -> Matrix4<f64> {
    let xi = C64::new(x[0], x[1]);
    let eta = C64::new(x[2], x[3]);
    let f = (2.0 * factor.u(xi)).exp();
    let df = factor.du(xi) * (2.0 * f);
    metric_from_ab(f, -2.0 * (eta * df).im)
}

/// Curvature of the tangent-bundle metric of a base factor at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    /// Scalar curvature from the numerical Riemann tensor.
    pub scalar: f64,
    /// `R_{xi xibar} = -4 d dbar u`.
    pub ricci_xixibar: C64,
    /// The same component contracted from the numerical Riemann tensor.
    pub ricci_xixibar_numeric: C64,
    /// `C_{xi xibar xi eta} = e^{2u} (eta d kappa + etabar dbar kappa)/2`.
    pub conformal_component: C64,
    /// Frobenius norm of the numerical Weyl tensor.
    pub weyl_norm: f64,
    /// Base Gauss curvature.
    pub gauss_base: f64,
}

type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

/// Numerical Riemann tensor `R^a_{bcd}`, Ricci and metric at `x`.
pub fn numeric_riemann(
    metric: &dyn Fn(&[f64; 4]) -> Matrix4<f64>,
    x: &[f64; 4],
) -> Result<(Tensor4, Matrix4<f64>, Matrix4<f64>)> {
    let fd = FDScheme::new(2e-3, 4)?;
    let shift = |x: &[f64; 4], k: usize, t: f64| {
        let mut y = *x;
        y[k] += t;
        y
    };
    let dmetric = |y: &[f64; 4]| -> Result<[Matrix4<f64>; 4]> {
        let mut out = [Matrix4::zeros(); 4];
        for (k, o) in out.iter_mut().enumerate() {
            let d = derivative_fd(|t| flat16(&metric(&shift(y, k, t))), 0.0, &fd)?;
            *o = Matrix4::from_row_slice(&d);
        }
        Ok(out)
    };
    let gamma_at = |y: &[f64; 4]| -> Result<[f64; 64]> {
        let c = Christoffel::from_metric(&metric(y), &dmetric(y)?)?;
        let mut flat = [0.0; 64];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    flat[16 * i + 4 * j + k] = c.0[i][j][k];
                }
            }
        }
        Ok(flat)
    };
    let g0 = gamma_at(x)?;
    let gam = |i: usize, j: usize, k: usize| g0[16 * i + 4 * j + k];
    let mut dgam = [[0.0; 64]; 4];
    for (l, dl) in dgam.iter_mut().enumerate() {
        let fails = std::cell::Cell::new(false);
        *dl = derivative_fd(
            |t| {
                gamma_at(&shift(x, l, t)).unwrap_or_else(|_| {
                    fails.set(true);
                    [f64::NAN; 64]
                })
            },
            0.0,
            &fd,
        )?;
        if fails.get() {
            return Err(Error::NonFiniteSample { at: "Christoffel stencil".into() });
        }
    }
    let mut riem = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut v = dgam[c][16 * a + 4 * d + b] - dgam[d][16 * a + 4 * c + b];
                    for e in 0..4 {
                        v += gam(a, c, e) * gam(e, d, b) - gam(a, d, e) * gam(e, c, b);
                    }
                    riem[a][b][c][d] = v;
                }
            }
        }
    }
    let ricci = Matrix4::from_fn(|b, d| (0..4).map(|a| riem[a][b][a][d]).sum());
    Ok((riem, ricci, metric(x)))
}

fn flat16(m: &Matrix4<f64>) -> [f64; 16] {
    let mut out = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            out[4 * i + j] = m[(i, j)];
        }
    }
    out
}

/// Curvature diagnostics of the tangent-bundle metric built from `factor`
/// at the point `line` (its coordinates are used as-is).
pub fn curvature_report(factor: &dyn ConformalFactor, line: &OrientedLine) -> Result<CurvatureReport> {
    let x = [line.xi.re, line.xi.im, line.eta.re, line.eta.im];
    let metric = |y: &[f64; 4]| metric_for_factor(factor, y);
    let (riem, ricci, g) = numeric_riemann(&metric, &x)?;
    let ginv = g.try_inverse().ok_or(Error::NonFiniteSample { at: "singular metric".into() })?;
    let scalar = (ginv.component_mul(&ricci.transpose())).sum();

    // R_{abcd} = g_{ae} R^e_{bcd}, then the Weyl tensor in dimension 4.
    let mut weyl_sq = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let low: f64 = (0..4).map(|e| g[(a, e)] * riem[e][b][c][d]).sum();
                    let w = low
                        - 0.5
                            * (g[(a, c)] * ricci[(b, d)] - g[(a, d)] * ricci[(b, c)] - g[(b, c)] * ricci[(a, d)]
                                + g[(b, d)] * ricci[(a, c)])
                        + scalar / 6.0 * (g[(a, c)] * g[(b, d)] - g[(a, d)] * g[(b, c)]);
                    weyl_sq += w * w;
                }
            }
        }
    }
    let ricci_numeric = C64::new(0.25 * (ricci[(0, 0)] + ricci[(1, 1)]), 0.25 * (ricci[(0, 1)] - ricci[(1, 0)]));

    let xi = line.xi;
    let ddbar = factor.ddbar_u(xi);
    let dk = factor.d_gauss(xi)?;
    let conformal = C64::new(0.5 * (2.0 * factor.u(xi)).exp() * 2.0 * (line.eta * dk).re, 0.0);
    let report = CurvatureReport {
        scalar,
        ricci_xixibar: C64::new(-4.0 * ddbar, 0.0),
        ricci_xixibar_numeric: ricci_numeric,
        conformal_component: conformal,
        weyl_norm: weyl_sq.sqrt(),
        gauss_base: factor.gauss(xi),
    };
    if !(report.scalar.is_finite() && report.weyl_norm.is_finite() && report.conformal_component.re.is_finite()) {
        return Err(Error::NonFiniteSample { at: "curvature".into() });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linespace::Chart;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rand_line(rng: &mut ChaCha8Rng, s: f64) -> OrientedLine {
        OrientedLine::new(c(rng.gen_range(-s..s), rng.gen_range(-s..s)), c(rng.gen_range(-s..s), rng.gen_range(-s..s)))
    }

    fn rand_tangent(rng: &mut ChaCha8Rng, base: OrientedLine) -> TangentT {
        TangentT::from_real(base, [0; 4].map(|_| rng.gen_range(-1.0..1.0)))
    }

    /// The displayed complex metric evaluated with symmetric products.
    fn display_metric(v: &TangentT, w: &TangentT) -> f64 {
        let (xi, eta) = (v.base.xi, v.base.eta);
        let d = 1.0 + xi.norm_sqr();
        let sym = |a1: C64, b1: C64, a2: C64, b2: C64| (a1 * b1 + a2 * b2) * 0.5;
        let deta_dxib = sym(v.etadot, w.xidot.conj(), w.etadot, v.xidot.conj());
        let detab_dxi = sym(v.etadot.conj(), w.xidot, w.etadot.conj(), v.xidot);
        let dxi_dxib = sym(v.xidot, w.xidot.conj(), w.xidot, v.xidot.conj());
        let k = (xi * eta.conj() - xi.conj() * eta) * 2.0 / d;
        let val = I * 2.0 / (d * d) * (deta_dxib - detab_dxi + k * dxi_dxib);
        assert!(val.im.abs() < 1e-12);
        val.re
    }

    #[test]
    fn j_examples() {
        let o = OrientedLine::x3_axis();
        let jv = J_apply(&TangentT::new(o, c(1.0, 0.0), c(0.0, 0.0)));
        assert_eq!((jv.xidot, jv.etadot), (c(0.0, 1.0), c(0.0, 0.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let v = rand_tangent(&mut rng, o);
            let jj = J_apply(&J_apply(&v));
            assert!((jj.xidot + v.xidot).norm() < 1e-15 && (jj.etadot + v.etadot).norm() < 1e-15);
        }
    }

    #[test]
    fn j_rotates_jacobi_fields_by_quarter_turn() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let base = rand_line(&mut rng, 2.0);
            let v = rand_tangent(&mut rng, base);
            let (j, jj) = (jacobi_decompose(&v), jacobi_decompose(&J_apply(&v)));
            let e0 = base.direction();
            assert!((jj.x1 - e0.cross(&j.x1)).norm() < 1e-10);
            assert!((jj.x2 - e0.cross(&j.x2)).norm() < 1e-10);
        }
    }

    #[test]
    fn omega_examples() {
        let o = OrientedLine::x3_axis();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let base = rand_line(&mut rng, 2.0);
            let v = rand_tangent(&mut rng, base);
            assert!(omega(&v, &v).abs() < 1e-14);
        }
        // 2 Re(2 deta ^ dxibar) at the origin with the half wedge:
        // Omega(d_eta1, d_xi1) = 2 Re(2 * (1 * 1 - 0)/2) = 2.
        let e_eta1 = TangentT::new(o, c(0.0, 0.0), c(1.0, 0.0));
        let e_xi1 = TangentT::new(o, c(1.0, 0.0), c(0.0, 0.0));
        assert!((omega(&e_eta1, &e_xi1) - 2.0).abs() < 1e-15);
        let l = OrientedLine::new(c(0.3, -0.7), c(1.2, 0.4));
        let (xi, eta) = (l.xi, l.eta);
        let d = 1.0 + xi.norm_sqr();
        let expect = (xi * eta.conj() - xi.conj() * eta) * 4.0 / (d * d * d);
        assert!((omega_component_xi_xibar(&l) - expect).norm() < 1e-15);
        // Complexified: Omega(d_xi, d_xibar) = coefficient / 2 with the half wedge.
        let m = omega_matrix(&l);
        let dxi = nalgebra::Vector4::new(c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.0), c(0.0, 0.0));
        let dxib = dxi.map(|z| z.conj());
        let val: C64 = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| dxi[i] * m[(i, j)] * dxib[j]).sum();
        assert!((val * 2.0 - expect).norm() < 1e-14);
    }

    #[test]
    fn omega_agrees_with_jacobi_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let base = rand_line(&mut rng, 3.0);
            let (v, w) = (rand_tangent(&mut rng, base), rand_tangent(&mut rng, base));
            assert!((omega(&v, &w) - omega_jacobi(&v, &w)).abs() < 1e-10);
        }
    }

    #[test]
    fn metric_matches_display_and_kahler_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let base = rand_line(&mut rng, 3.0);
            let (v, w) = (rand_tangent(&mut rng, base), rand_tangent(&mut rng, base));
            let g = g_apply(&v, &w);
            assert!((g - display_metric(&v, &w)).abs() < 1e-10, "{g} {}", display_metric(&v, &w));
            assert!((g - omega(&J_apply(&v), &w)).abs() < 1e-10);
            assert!((omega(&J_apply(&v), &J_apply(&w)) - omega(&v, &w)).abs() < 1e-10);
            assert_eq!(metric_G(&base).signature(1e-12), (2, 2, 0));
        }
    }

    #[test]
    fn metric_examples_at_origin() {
        let o = OrientedLine::x3_axis();
        let g = metric_G(&o);
        let v = [0.3, -1.1, 0.7, 0.2];
        assert!((g.quad(&v) - 4.0 * (v[2] * v[1] - v[3] * v[0])).abs() < 1e-14);
        let v = TangentT::new(o, c(0.0, 1.0), c(1.0, 0.0));
        assert!((g_apply(&v, &v) - 4.0).abs() < 1e-14);
        assert!((angular_momentum(&v) - 4.0).abs() < 1e-14);
        let flat = TangentT::new(o, c(0.0, 0.0), c(0.4, -2.0));
        assert!(angular_momentum(&flat).abs() < 1e-14);
    }

    #[test]
    fn angular_momentum_is_metric_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let base = rand_line(&mut rng, 3.0);
            let v = rand_tangent(&mut rng, base);
            assert!((angular_momentum(&v) - g_apply(&v, &v)).abs() < 1e-8);
        }
    }

    #[test]
    fn theta_examples_and_exterior_derivative() {
        let l = OrientedLine::new(c(0.0, 0.0), c(1.0, 0.0));
        assert!((theta(&TangentT::new(l, c(1.0, 0.0), c(0.0, 0.0))) - 4.0).abs() < 1e-15);
        let z = OrientedLine::new(c(0.4, 0.9), c(0.0, 0.0));
        assert_eq!(theta(&TangentT::new(z, c(1.0, 2.0), c(3.0, 4.0))), 0.0);

        let fd = FDScheme::central4();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let base = rand_line(&mut rng, 2.0);
            let x = base_real(&base);
            for i in 0..4 {
                for j in 0..4 {
                    let along = |k: usize, comp: usize| {
                        derivative_fd(
                            |t| {
                                let mut y = x;
                                y[k] += t;
                                let b = OrientedLine::new(c(y[0], y[1]), c(y[2], y[3]));
                                [theta(&basis(b, comp))]
                            },
                            0.0,
                            &fd,
                        )
                        .unwrap()[0]
                    };
                    let d_theta = 0.5 * (along(i, j) - along(j, i));
                    let om = omega(&basis(base, i), &basis(base, j));
                    assert!((d_theta - om).abs() < 1e-6, "{i}{j}: {d_theta} vs {om}");
                }
            }
        }
    }

    fn base_real(l: &OrientedLine) -> [f64; 4] {
        [l.xi.re, l.xi.im, l.eta.re, l.eta.im]
    }

    #[test]
    fn omega_is_closed() {
        let fd = FDScheme::central4();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let base = rand_line(&mut rng, 2.0);
            let x = base_real(&base);
            let dom = |k: usize, i: usize, j: usize| {
                derivative_fd(
                    |t| {
                        let mut y = x;
                        y[k] += t;
                        [omega_matrix(&OrientedLine::new(c(y[0], y[1]), c(y[2], y[3])))[(i, j)]]
                    },
                    0.0,
                    &fd,
                )
                .unwrap()[0]
            };
            for a in 0..4 {
                for b in 0..4 {
                    for cc in 0..4 {
                        let s = dom(a, b, cc) + dom(b, cc, a) + dom(cc, a, b);
                        assert!(s.abs() < 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn potential_examples() {
        assert_eq!(kahler_potential(&OrientedLine::new(c(0.7, 0.2), c(0.0, 0.0))), 0.0);
        assert_eq!(kahler_potential(&OrientedLine::new(c(0.0, 0.0), c(0.7, 0.2))), 0.0);
        assert!((kahler_potential(&OrientedLine::new(c(1.0, 0.0), c(0.0, 1.0))) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn potential_generates_hermitian_components() {
        // h_{a bbar} = d_a dbar_b Upsilon via real second derivatives:
        // d_a dbar_b = 1/4 (d_{a1} - i d_{a2})(d_{b1} + i d_{b2}).
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = 4e-3;
        for _ in 0..50 {
            let base = rand_line(&mut rng, 1.5);
            let x = base_real(&base);
            let f = |y: [f64; 4]| kahler_potential(&OrientedLine::new(c(y[0], y[1]), c(y[2], y[3])));
            let d2 = |i: usize, j: usize| {
                let e = |k: usize, s: f64| {
                    let mut y = x;
                    y[k] += s;
                    y
                };
                let g = |s: f64, t: f64| {
                    let mut y = e(i, s);
                    y[j] += t;
                    f(y)
                };
                // Richardson-extrapolated central mixed difference.
                let m = |h: f64| (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h);
                (4.0 * m(0.5 * h) - m(h)) / 3.0
            };
            let mixed = |a: usize, b: usize| {
                let (a1, a2, b1, b2) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
                C64::new(d2(a1, b1) + d2(a2, b2), d2(a1, b2) - d2(a2, b1)) * 0.25
            };
            let (xi, eta) = (base.xi, base.eta);
            let d = 1.0 + xi.norm_sqr();
            let h_eta_xib = I * 2.0 / (d * d);
            let h_xi_xib = I * 2.0 * (xi * eta.conj() - xi.conj() * eta) * 2.0 / (d * d * d);
            assert!((mixed(1, 0) + h_eta_xib).norm() < 1e-8 * h_eta_xib.norm().max(1.0));
            let err = (mixed(0, 0) + h_xi_xib).norm();
            assert!(err < 1e-8 * h_xi_xib.norm().max(1.0), "{err} {h_xi_xib}");
            assert!(mixed(1, 1).norm() < 1e-8);
        }
    }

    #[test]
    fn metric_derivatives_match_fd() {
        let fd = FDScheme::central4();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let base = rand_line(&mut rng, 2.0);
            let x = base_real(&base);
            let dg = metric_derivatives(&base);
            for k in 0..4 {
                let num = derivative_fd(
                    |t| {
                        let mut y = x;
                        y[k] += t;
                        flat16(&metric_G(&OrientedLine::new(c(y[0], y[1]), c(y[2], y[3]))).0)
                    },
                    0.0,
                    &fd,
                )
                .unwrap();
                for (n, a) in num.iter().zip(flat16(&dg[k]).iter()) {
                    assert!((n - a).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn christoffel_symmetry_and_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let base = rand_line(&mut rng, 2.0);
            let g = metric_G(&base).0;
            let dg = metric_derivatives(&base);
            let gam = christoffel(&base).0;
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        assert_eq!(gam[k][i][j], gam[k][j][i]);
                        // nabla_k g_ij = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il
                        let cov: f64 = dg[k][(i, j)]
                            - (0..4).map(|l| gam[l][k][i] * g[(l, j)] + gam[l][k][j] * g[(i, l)]).sum::<f64>();
                        assert!(cov.abs() < 1e-9);
                    }
                }
            }
        }
        // All-eta coefficients vanish: the metric is affine in eta.
        let gam = christoffel(&OrientedLine::new(c(0.3, 0.5), c(-1.0, 2.0))).0;
        for i in 0..4 {
            for j in 2..4 {
                for k in 2..4 {
                    assert!(gam[i][j][k].abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn flipped_chart_uses_same_formulas() {
        // Both charts see the same metric: Rx(pi) is an isometry.
        let l = OrientedLine::new(c(0.4, 0.3), c(0.2, -0.6));
        let f = OrientedLine { chart: Chart::Flipped, ..l };
        assert_eq!(metric_G(&l), metric_G(&f));
    }

    #[test]
    fn round_sphere_curvature() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let base = rand_line(&mut rng, 1.0);
            let rep = curvature_report(&RoundSphere, &base).unwrap();
            let d = 1.0 + base.xi.norm_sqr();
            assert!(rep.scalar.abs() < 1e-6, "scalar {}", rep.scalar);
            assert!((rep.gauss_base - 2.0).abs() < 1e-12);
            assert!((rep.ricci_xixibar.re - 4.0 / (d * d)).abs() < 1e-12);
            assert!((rep.ricci_xixibar_numeric - rep.ricci_xixibar).norm() < 1e-6 * rep.ricci_xixibar.norm());
            assert!(rep.conformal_component.norm() < 1e-12);
            assert!(rep.weyl_norm < 1e-5, "weyl {}", rep.weyl_norm);
        }
    }

    #[test]
    fn flat_and_quadratic_factors() {
        let l = OrientedLine::new(c(0.3, 0.2), c(0.5, 0.8));
        let rep = curvature_report(&FlatFactor, &l).unwrap();
        assert_eq!(rep.gauss_base, 0.0);
        assert!(rep.ricci_xixibar_numeric.norm() < 1e-8 && rep.scalar.abs() < 1e-8);
        let rep = curvature_report(&QuadraticFactor, &l).unwrap();
        let expect = 8.0 * (l.eta * l.xi.conj()).re;
        assert!((rep.conformal_component.re - expect).abs() < 1e-9);
        assert!(rep.conformal_component.norm() > 0.1 && rep.weyl_norm > 0.1, "{rep:?}");
        assert!(rep.scalar.abs() < 1e-5);
        assert!((rep.ricci_xixibar_numeric - rep.ricci_xixibar).norm() < 1e-5);
    }

    #[test]
    fn closure_factor_matches_analytic() {
        let f = FnFactor(|xi: C64| 0.5 * LN_2 - (1.0 + xi.norm_sqr()).ln());
        let xi = c(0.4, -0.3);
        assert!((f.du(xi) - RoundSphere.du(xi)).norm() < 1e-9);
        assert!((f.ddbar_u(xi) - RoundSphere.ddbar_u(xi)).abs() < 1e-6);
        assert!((f.d_ddbar_u(xi).unwrap() - RoundSphere.d_ddbar_u(xi).unwrap()).norm() < 1e-5);
    }
}
