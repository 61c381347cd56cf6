//! Seeded invariant suite behind `linekit verify`.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::congruence::{
    is_lagrangian, pullback_G, reference_scalars, signature_report, theta_period, ClosedCurve, Congruence, Polynomial,
    Signature, SurfaceSpec,
};
use crate::error::Result;
use crate::geodesics::{
    complex_equation_residual, closed_form_jet, connect_lines, first_integral, geodesic_closed_form,
    geodesic_rk4_tangent, ruled_surface, GeodesicIVP, GeodesicParams,
};
use crate::isometry::{killing_field, lie_derivative_G, KillingParams};
use crate::kahler::{curvature_report, g_apply, metric_G, omega, J_apply, QuadraticFactor, RoundSphere};
use crate::linespace::{cdot, dphi, line_through, null_frame, phi, OrientedLine, TangentT, C64};
use crate::maslov::{find_complex_points, maslov_index, SIGMA_TOL};
use crate::numerics::{derivative_fd, FDScheme};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Worst observed error (or the measured quantity for threshold checks).
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn below(name: &'static str, value: f64, tol: f64) -> Self {
        Self { name, value, tol, pass: value < tol }
    }

    fn flag(name: &'static str, ok: bool) -> Self {
        Self { name, value: if ok { 0.0 } else { 1.0 }, tol: 0.5, pass: ok }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} value={:.3e} tol={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tol
        )
    }
}

fn rand_c(rng: &mut ChaCha8Rng, s: f64) -> C64 {
    C64::new(rng.gen_range(-s..s), rng.gen_range(-s..s))
}

fn rand_line(rng: &mut ChaCha8Rng) -> OrientedLine {
    OrientedLine::new(rand_c(rng, 1.5), rand_c(rng, 2.0))
}

fn rand_tangent(rng: &mut ChaCha8Rng, base: OrientedLine) -> TangentT {
    TangentT::from_real(base, [0; 4].map(|_| rng.gen_range(-1.0..1.0)))
}

fn rand_vec(rng: &mut ChaCha8Rng, s: f64) -> Vector3<f64> {
    Vector3::new(rng.gen_range(-s..s), rng.gen_range(-s..s), rng.gen_range(-s..s))
}

fn frames(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Check>> {
    let (mut frame, mut map, mut diff) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..n {
        let line = rand_line(rng);
        let f = null_frame(line.xi);
        let e0 = f.e0.map(|x| C64::new(x, 0.0));
        for z in [cdot(&f.eplus, &f.eplus), cdot(&f.eplus, &f.eminus()) - 1.0, cdot(&f.eplus, &e0), cdot(&e0, &e0) - 1.0] {
            frame = frame.max(z.norm());
        }
        let r = rng.gen_range(-3.0..3.0);
        let (p0, pr) = (phi(&line, 0.0)?.to_vec(), phi(&line, r)?.to_vec());
        map = map.max(p0.dot(&f.e0).abs()).max((pr - p0 - f.e0 * r).norm());
        let v = rand_tangent(rng, line);
        let fd = derivative_fd(
            |t| {
                let l = OrientedLine::new(line.xi + v.xidot * t, line.eta + v.etadot * t);
                phi(&l, r).map(|p| p.to_vec().into()).unwrap_or([f64::NAN; 3])
            },
            0.0,
            &FDScheme::central4(),
        )?;
        let an = dphi(&line, r, &v, 0.0)?;
        diff = diff.max((an - Vector3::from(fd)).norm() / (1.0 + an.norm()));
    }
    Ok(vec![
        Check::below("null_frame_relations", frame, 1e-12),
        Check::below("map_identities", map, 1e-10),
        Check::below("dphi_vs_fd", diff, 1e-6),
    ])
}

fn kahler(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Check>> {
    let (mut compat, mut neutral) = (0.0f64, true);
    for _ in 0..n {
        let line = rand_line(rng);
        let (v, w) = (rand_tangent(rng, line), rand_tangent(rng, line));
        compat = compat
            .max((g_apply(&v, &w) - omega(&J_apply(&v), &w)).abs())
            .max((omega(&J_apply(&v), &J_apply(&w)) - omega(&v, &w)).abs());
        neutral &= metric_G(&line).signature(1e-12) == (2, 2, 0);
    }
    let line = OrientedLine::new(C64::new(0.3, -0.2), C64::new(0.5, 0.8));
    let round = curvature_report(&RoundSphere, &line)?;
    let quad = curvature_report(&QuadraticFactor, &line)?;
    let q = 1.0 + line.xi.norm_sqr();
    let ricci_err = ((round.ricci_xixibar_numeric.re - 4.0 / (q * q)) / (4.0 / (q * q))).abs();
    Ok(vec![
        Check::below("kahler_compatibility", compat, 1e-10),
        Check::flag("neutral_signature", neutral),
        Check::below("scalar_curvature", round.scalar.abs(), 1e-6),
        Check::below("ricci_component", ricci_err, 1e-6),
        Check::below("conformal_component_round", round.conformal_component.norm(), 1e-12),
        Check::flag("conformal_component_nonconstant", quad.conformal_component.norm() > 1e-3),
    ])
}

fn killing(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for p in KillingParams::basis() {
        let field = move |l: &OrientedLine| killing_field(&p, l);
        for _ in 0..n {
            worst = worst.max(lie_derivative_G(&field, &rand_line(rng))?.max_abs());
        }
    }
    let control = |l: &OrientedLine| TangentT::new(*l, l.xi * l.xi.norm_sqr(), C64::new(0.0, 0.0));
    let ctl = lie_derivative_G(&control, &OrientedLine::new(C64::new(0.4, 0.1), C64::new(1.0, -0.5)))?.max_abs();
    Ok(vec![Check::below("killing_fields", worst, 1e-8), Check::flag("killing_negative_control", ctl > 0.1)])
}

fn geodesics(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Check>> {
    let (mut resid, mut rk, mut drift) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..n {
        let p = GeodesicParams::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..6.0));
        let s = rng.gen_range(-0.5..0.5) / p.C2.abs().max(1.0);
        let (a, b) = complex_equation_residual(&closed_form_jet(&p, s)?);
        resid = resid.max(a.norm()).max(b.norm());
        if k < 3 {
            let p = GeodesicParams { C2: 0.5, ..p };
            let (xd, ed) = p.velocity();
            let v0 = TangentT::new(OrientedLine::x3_axis(), xd, ed);
            let got = geodesic_rk4_tangent(&GeodesicIVP::new(v0), 1.0, 1e-3)?;
            rk = rk.max(got.base.separation(&geodesic_closed_form(&p, 1.0)?));
            drift = drift.max((first_integral(&got) - first_integral(&v0)).abs());
        }
    }
    let flat = ruled_surface(&GeodesicParams::new(0.0, 0.5, 0.0, 0.0), (0.0, 1.0), (-1.0, 1.0), 9, 5)?;
    let normal = (flat.vertex(0, 4) - flat.vertex(0, 0)).cross(&(flat.vertex(8, 0) - flat.vertex(0, 0))).normalize();
    let planar = flat.vertices.iter().map(|v| (v - flat.vertex(0, 0)).dot(&normal).abs()).fold(0.0, f64::max);
    Ok(vec![
        Check::below("geodesic_equations", resid, 1e-8),
        Check::below("rk4_vs_closed_form", rk, 1e-6),
        Check::below("first_integral_drift", drift, 1e-8),
        Check::below("null_geodesic_planar", planar, 1e-9),
    ])
}

fn connections(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Check>> {
    let (mut reach, mut length) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let g1 = line_through(&rand_vec(rng, 2.0), &rand_vec(rng, 1.0).normalize())?.0;
        let g2 = line_through(&rand_vec(rng, 2.0), &rand_vec(rng, 1.0).normalize())?.0;
        let turns = rng.gen_range(0..3);
        let c = connect_lines(&g1, &g2, turns)?;
        reach = reach.max(c.line_at(0.0)?.separation(&g1)).max(c.line_at(c.s1)?.separation(&g2));
        length = length.max((c.squared_length() + c.l * c.angle).abs());
    }
    Ok(vec![Check::below("connect_endpoints", reach, 1e-9), Check::below("connect_squared_length", length, 1e-9)])
}

fn congruences() -> Result<Vec<Check>> {
    let specs = [
        SurfaceSpec::Sphere { radius: 1.0 },
        SurfaceSpec::Ellipsoid { a: 1.0, b: 1.1, c: 1.3 },
        SurfaceSpec::Torus { core: 2.0, tube: 0.5 },
        SurfaceSpec::Graph { h: Polynomial::parse("0.5*x^2 + 0.5*y^2")?, half_width: 1.0 },
    ];
    let mut worst = 0.0f64;
    for s in &specs {
        worst = worst.max(is_lagrangian(&Congruence::from_spec(s)?, 12, 1e-10)?.1);
    }
    let torn = Congruence::from_spec(&SurfaceSpec::TornTorus { a: 2.0, b: 0.5 })?;
    let period = theta_period(&torn, &ClosedCurve::PeriodicSegment { start: [0.5, 0.0], end: [0.5, PI] }, 64)?;

    let rot = Congruence::from_spec(&SurfaceSpec::RotationField { b: 1.0 })?;
    let mut metric = 0.0f64;
    let mut signs = true;
    for nu in [[0.3, 0.4], [-0.2, 0.5], [1.2, -0.9], [0.6, 0.8], [0.0, 1.0]] {
        let q: f64 = nu[0] * nu[0] + nu[1] * nu[1];
        let want = 4.0 * (1.0 - q) / (1.0 + q).powi(3);
        let g = pullback_G(&rot, nu)?.0;
        metric = metric.max((g[(0, 0)] - want).abs().max((g[(1, 1)] - want).abs()).max(g[(0, 1)].abs()) / want.abs().max(1e-3));
        let expect = if (q - 1.0).abs() < 1e-12 { Signature::TotallyNull } else { Signature::Riemannian };
        signs &= signature_report(&rot, nu, Some(0.0))?.signature == expect;
    }

    let sphere = Congruence::from_spec(&SurfaceSpec::Sphere { radius: 1.0 })?;
    let mut degenerate = 0.0f64;
    for nu in [[0.5, 0.0], [1.2, 2.0], [2.5, 4.0]] {
        let s = reference_scalars(&sphere, nu)?;
        degenerate = degenerate.max(s.sigma.norm()).max(s.twist().abs()).max(pullback_G(&sphere, nu)?.max_abs());
    }
    Ok(vec![
        Check::below("normal_congruences_lagrangian", worst, 1e-10),
        Check::below("torn_torus_period", (period - 2.0 * PI).abs(), 1e-6),
        Check::below("rotation_field_metric", metric, 1e-8),
        Check::flag("rotation_field_signature", signs),
        Check::below("sphere_degenerate", degenerate, 1e-8),
    ])
}

fn maslov() -> Result<Vec<Check>> {
    let c = Congruence::from_spec(&SurfaceSpec::Ellipsoid { a: 1.0, b: 1.1, c: 1.3 })?;
    let pts = find_complex_points(&c, 40, SIGMA_TOL)?;
    let th = ((1.1f64 * 1.1 - 1.0) / (1.3f64 * 1.3 - 1.0)).sqrt().asin();
    let mut oracle = [[th, 0.0], [th, PI], [PI - th, 0.0], [PI - th, PI]];
    oracle.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let located = pts.len() == 4
        && pts.iter().zip(&oracle).all(|(p, o)| (p.nu[0] - o[0]).abs() < 1e-6 && (p.nu[1] - o[1]).abs() < 1e-6);
    let mut unit = true;
    for p in &pts {
        let r = maslov_index(&c, &ClosedCurve::Circle { center: p.nu, radius: 0.1 }, 128, &pts)?;
        unit &= p.multiplicity == 1 && (r.index - 1.0).abs() < 1e-9 && r.complex_points_enclosed == 1;
    }
    let empty = maslov_index(&c, &ClosedCurve::Circle { center: [PI / 2.0, PI / 2.0], radius: 0.5 }, 128, &pts)?;
    let pair = ClosedCurve::rectangle([th - 0.2, -0.3], [th + 0.2, PI + 0.3]);
    let two = maslov_index(&c, &pair, 256, &pts)?;
    Ok(vec![
        Check::flag("ellipsoid_umbilics", located),
        Check::flag("index_single_umbilic", unit),
        Check::below("index_empty_curve", empty.index.abs(), 1e-9),
        Check::below("index_two_umbilics", (two.index - 2.0).abs(), 1e-9),
    ])
}

/// Run every check with the given seed; `samples` scales the random suites.
pub fn run_suite(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = frames(&mut rng, samples)?;
    out.extend(kahler(&mut rng, samples)?);
    out.extend(killing(&mut rng, samples.div_ceil(10))?);
    out.extend(geodesics(&mut rng, samples)?);
    out.extend(connections(&mut rng, samples.div_ceil(5))?);
    out.extend(congruences()?);
    out.extend(maslov()?);
    Ok(out)
}
