//! Complex points of Lagrangian congruences and the index of closed curves.
//!
//! On a Lagrangian congruence the induced metric is Lorentzian wherever the
//! shear is nonzero. Its two null lines form an undirected field; the index
//! of a curve is the rotation of one of them, in units of `pi`, divided by
//! [`CALIBRATION`].

use std::f64::consts::PI;

use crate::congruence::{
    grid_points, induced_metric, map_points, optical_scalars, ClosedCurve, Congruence, Jet, OpticalScalars,
};
use crate::error::{Error, Result};
use crate::kahler::omega;
use crate::linespace::C64;
use crate::numerics::winding_number;

/// Raw null-line winding (period `pi`) around one umbilic of multiplicity 1.
pub const CALIBRATION: f64 = 1.0;

/// Default tolerance on `|sigma|` for complex points.
pub const SIGMA_TOL: f64 = 1e-8;

/// Minimum number of samples on a curve.
pub const MIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub nu: [f64; 2],
    pub multiplicity: i32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexResult {
    pub index: f64,
    pub samples: usize,
    /// Multiplicity-weighted count of the supplied complex points inside the curve.
    pub complex_points_enclosed: i32,
}

/// Optical scalars on the reference surface, or one unit further along the
/// lines if that surface is focal.
fn scalars(j: &Jet) -> Result<OpticalScalars> {
    match optical_scalars(j, j.r_ref) {
        Err(Error::Caustic) => optical_scalars(j, j.r_ref + 1.0),
        other => other,
    }
}

/// Shear at `nu`, or `None` outside the congruence's domain of definition.
pub fn shear(c: &Congruence, nu: [f64; 2]) -> Result<C64> {
    Ok(scalars(&c.jet(nu)?)?.sigma)
}

/// Phase winding of the shear around a circle of radius `radius`.
pub fn shear_winding(c: &Congruence, center: [f64; 2], radius: f64, samples: usize) -> Result<f64> {
    let circle = ClosedCurve::Circle { center, radius };
    let phases = (0..=samples)
        .map(|k| shear(c, circle.point(k as f64 / samples as f64)).map(|s| s.arg()))
        .collect::<Result<Vec<_>>>()?;
    winding_number(&phases, 2.0 * PI)
}

fn inside(domain: &[[f64; 2]; 2], p: [f64; 2]) -> bool {
    (domain[0][0]..=domain[0][1]).contains(&p[0]) && (domain[1][0]..=domain[1][1]).contains(&p[1])
}

/// Damped Newton iteration on `(Re sigma, Im sigma)`.
fn refine(c: &Congruence, start: [f64; 2], h: f64, tol: f64) -> Result<Option<[f64; 2]>> {
    let mut p = start;
    let mut s = shear(c, p)?;
    for _ in 0..60 {
        if s.norm() < tol {
            return Ok(Some(p));
        }
        let d1 = (shear(c, [p[0] + h, p[1]])? - shear(c, [p[0] - h, p[1]])?) / (2.0 * h);
        let d2 = (shear(c, [p[0], p[1] + h])? - shear(c, [p[0], p[1] - h])?) / (2.0 * h);
        let det = d1.re * d2.im - d2.re * d1.im;
        if det.abs() < 1e-300 {
            return Ok(None);
        }
        let step = [-(d2.im * s.re - d2.re * s.im) / det, -(-d1.im * s.re + d1.re * s.im) / det];
        let mut t = 1.0;
        loop {
            let q = [p[0] + t * step[0], p[1] + t * step[1]];
            if inside(&c.domain, q) {
                if let Ok(sq) = shear(c, q) {
                    if sq.norm() < s.norm() {
                        p = q;
                        s = sq;
                        break;
                    }
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return Ok(None);
            }
        }
    }
    Ok((s.norm() < tol).then_some(p))
}

/// Zeros of the shear on an `n x n` scan of the domain.
///
/// Candidates are local minima of `|sigma|` on the scan, refined by Newton
/// iteration. Multiplicity is minus the shear's phase winding on a circle of
/// three scan spacings.
pub fn find_complex_points(c: &Congruence, n: usize, tol: f64) -> Result<Vec<ComplexPoint>> {
    if n < 4 {
        return Err(Error::InvalidArgument("complex point scan needs at least 4x4 samples".into()));
    }
    let dom = c.domain;
    let spacing = [(dom[0][1] - dom[0][0]) / n as f64, (dom[1][1] - dom[1][0]) / n as f64];
    let pts = grid_points(&dom, n, n);
    let mags = map_points(&pts, |p| shear(c, p).map(|s| s.norm()))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let flat = mags.iter().filter(|&&m| m < tol).count();
    if flat * 10 > mags.len() {
        return Err(Error::NonIsolated);
    }

    let at = |i: usize, j: usize| mags[i * n + j];
    let mut candidates = Vec::new();
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let m = at(i, j);
            // Ties go to the first cell in scan order.
            let is_min = (i - 1..=i + 1).all(|a| {
                (j - 1..=j + 1).all(|b| match (a, b).cmp(&(i, j)) {
                    std::cmp::Ordering::Less => at(a, b) > m,
                    std::cmp::Ordering::Equal => true,
                    std::cmp::Ordering::Greater => at(a, b) >= m,
                })
            });
            if is_min {
                candidates.push(pts[i * n + j]);
            }
        }
    }

    let h = 1e-4 * spacing[0].min(spacing[1]);
    let refined = map_points(&candidates, |p| refine(c, p, h, tol));
    let mut roots: Vec<[f64; 2]> = Vec::new();
    for r in refined {
        let Some(p) = r? else { continue };
        let near = |q: &[f64; 2]| ((p[0] - q[0]) / spacing[0]).hypot((p[1] - q[1]) / spacing[1]);
        match roots.iter().map(near).fold(f64::INFINITY, f64::min) {
            d if d < 0.5 => {}
            d if d < 6.0 => return Err(Error::ResolutionLimit),
            _ => roots.push(p),
        }
    }

    let radius = 3.0 * spacing[0].min(spacing[1]);
    roots.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    roots
        .into_iter()
        .map(|nu| {
            // The shear turns against the null lines: its phase carries the
            // spin of the frame as well as the rotation of the lines.
            let w = shear_winding(c, nu, radius, 256)?;
            Ok(ComplexPoint { nu, multiplicity: -w.round() as i32 })
        })
        .collect()
}

/// Angles in `[0, pi)` of the two null lines of the metric at `nu`.
fn null_lines(c: &Congruence, nu: [f64; 2], tol: f64) -> Result<[f64; 2]> {
    let j = c.jet(nu)?;
    let w = omega(&j.d[0], &j.d[1]);
    if w.abs() > 1e-6 {
        return Err(Error::NotClosed(w));
    }
    let s = scalars(&j)?;
    if s.sigma.norm() < tol {
        return Err(Error::CurveHitsComplexPoint(s.sigma.norm()));
    }
    induced_metric(&j).null_angles().ok_or(Error::CurveHitsComplexPoint(s.sigma.norm()))
}

/// Index of `curve`: rotation of a continuously tracked null line of the
/// induced metric, in units of `pi`, over [`CALIBRATION`].
///
/// `known` complex points are used only to fill in `complex_points_enclosed`.
pub fn maslov_index(c: &Congruence, curve: &ClosedCurve, samples: usize, known: &[ComplexPoint]) -> Result<IndexResult> {
    if samples < MIN_SAMPLES {
        return Err(Error::UndersampledCurve { gap: 1.0 / samples as f64, period: 1.0 / MIN_SAMPLES as f64 });
    }
    let ts: Vec<f64> = (0..samples).map(|k| k as f64 / samples as f64).collect();
    let pairs = map_points(&ts.iter().map(|&t| curve.point(t)).collect::<Vec<_>>(), |p| null_lines(c, p, SIGMA_TOL));
    let mut track = Vec::with_capacity(samples + 1);
    for (k, pair) in pairs.into_iter().enumerate() {
        let pair = pair.map_err(|e| match e {
            Error::CurveHitsComplexPoint(_) => Error::CurveHitsComplexPoint(ts[k]),
            other => other,
        })?;
        let next = match track.last() {
            None => pair[0],
            Some(&prev) => {
                let gap = |a: f64| {
                    let d: f64 = a - prev;
                    (d - PI * (d / PI).round()).abs()
                };
                if gap(pair[0]) <= gap(pair[1]) {
                    pair[0]
                } else {
                    pair[1]
                }
            }
        };
        track.push(next);
    }
    track.push(track[0]);
    let raw = winding_number(&track, PI)?;

    let mut enclosed = 0;
    for p in known {
        enclosed += p.multiplicity * curve.winding_around(p.nu)?.round() as i32;
    }
    Ok(IndexResult { index: raw / CALIBRATION, samples, complex_points_enclosed: enclosed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::{Polynomial, SurfaceSpec};

    fn ellipsoid() -> Congruence {
        Congruence::from_spec(&SurfaceSpec::Ellipsoid { a: 1.0, b: 1.1, c: 1.3 }).unwrap()
    }

    fn umbilics(a: f64, b: f64, c: f64) -> Vec<[f64; 2]> {
        let s = ((b * b - a * a) / (c * c - a * a)).sqrt();
        let th = s.asin();
        let mut v = vec![[th, 0.0], [th, PI], [PI - th, 0.0], [PI - th, PI]];
        v.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
        v
    }

    #[test]
    fn ellipsoid_umbilics_found() {
        let pts = find_complex_points(&ellipsoid(), 40, SIGMA_TOL).unwrap();
        let want = umbilics(1.0, 1.1, 1.3);
        assert_eq!(pts.len(), 4, "{pts:?}");
        for (p, w) in pts.iter().zip(&want) {
            assert!((p.nu[0] - w[0]).abs() < 1e-6 && (p.nu[1] - w[1]).abs() < 1e-6, "{p:?} {w:?}");
            assert_eq!(p.multiplicity, 1, "{p:?}");
        }
    }

    #[test]
    fn paraboloid_apex() {
        let spec = SurfaceSpec::Graph { h: Polynomial::parse("0.5*x^2 + 0.5*y^2").unwrap(), half_width: 1.0 };
        let c = Congruence::from_spec(&spec).unwrap();
        let pts = find_complex_points(&c, 21, SIGMA_TOL).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].nu[0].abs() < 1e-8 && pts[0].nu[1].abs() < 1e-8);
        assert_eq!(pts[0].multiplicity, 2);
    }

    #[test]
    fn index_matches_multiplicity_on_graphs() {
        // Rotationally symmetric apex (multiplicity 2) and a generic umbilic
        // of the opposite sign.
        for (h, m) in [("0.5*x^2 + 0.5*y^2", 2), ("0.5*x^2 + 0.5*y^2 + 0.1*x^3 - 0.3*x*y^2", -1)] {
            let spec = SurfaceSpec::Graph { h: Polynomial::parse(h).unwrap(), half_width: 1.0 };
            let c = Congruence::from_spec(&spec).unwrap();
            let pts = find_complex_points(&c, 21, SIGMA_TOL).unwrap();
            assert_eq!(pts.len(), 1, "{h}: {pts:?}");
            assert_eq!(pts[0].multiplicity, m, "{h}");
            let r = maslov_index(&c, &ClosedCurve::Circle { center: [0.0, 0.0], radius: 0.3 }, 128, &pts).unwrap();
            assert!((r.index - m as f64).abs() < 1e-9, "{h}: {r:?}");
            assert_eq!(r.complex_points_enclosed, m);
        }
    }

    #[test]
    fn sphere_is_not_isolated() {
        let c = Congruence::from_spec(&SurfaceSpec::Sphere { radius: 1.0 }).unwrap();
        assert!(matches!(find_complex_points(&c, 16, SIGMA_TOL), Err(Error::NonIsolated)));
    }

    #[test]
    fn index_around_one_and_no_umbilic() {
        let c = ellipsoid();
        let u = umbilics(1.0, 1.1, 1.3);
        let known: Vec<_> = u.iter().map(|&nu| ComplexPoint { nu, multiplicity: 1 }).collect();
        for p in &u {
            let r = maslov_index(&c, &ClosedCurve::Circle { center: *p, radius: 0.1 }, 128, &known).unwrap();
            assert!((r.index - 1.0).abs() < 1e-9, "{r:?}");
            assert_eq!(r.complex_points_enclosed, 1);
        }
        let empty = ClosedCurve::Circle { center: [PI / 2.0, PI / 2.0], radius: 0.5 };
        assert!(maslov_index(&c, &empty, 128, &known).unwrap().index.abs() < 1e-9);
    }

    #[test]
    fn index_errors() {
        let c = ellipsoid();
        let u = umbilics(1.0, 1.1, 1.3)[0];
        let through = ClosedCurve::Circle { center: [u[0] + 0.1, u[1]], radius: 0.1 };
        assert!(matches!(maslov_index(&c, &through, 128, &[]), Err(Error::CurveHitsComplexPoint(_))));
        let small = ClosedCurve::Circle { center: u, radius: 0.1 };
        assert!(matches!(maslov_index(&c, &small, 16, &[]), Err(Error::UndersampledCurve { .. })));
        let twisted = Congruence::from_spec(&SurfaceSpec::RotationField { b: 1.0 }).unwrap();
        let loop_ = ClosedCurve::Circle { center: [0.0, 0.0], radius: 0.5 };
        assert!(matches!(maslov_index(&twisted, &loop_, 64, &[]), Err(Error::NotClosed(_))));
    }
}
