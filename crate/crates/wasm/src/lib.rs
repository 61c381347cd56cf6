//! Browser bindings for the demo page. Every export wraps a plain function of
//! the same name in [`native`] so the numerics can be tested without a browser.

use wasm_bindgen::prelude::*;

pub mod native {
    use linekit::congruence::{classify_signature, Congruence, Signature, SurfaceSpec};
    use linekit::geodesics::{connect_lines, ruled_surface, ConnectionKind, GeodesicParams};
    use linekit::linespace::{line_through, phi};
    use linekit::{Error, Result};
    use nalgebra::Vector3;

    fn flatten(points: impl IntoIterator<Item = Vector3<f64>>) -> Vec<f64> {
        points.into_iter().flat_map(|p| [p.x, p.y, p.z]).collect()
    }

    /// Vertices `(x, y, z)` of the ruled surface of a geodesic, row-major in
    /// `(s, r)` over `[-s_half, s_half] x [-r_half, r_half]`.
    #[allow(clippy::too_many_arguments)]
    pub fn ruled_surface_vertices(
        c1: f64,
        c2: f64,
        c5: f64,
        theta: f64,
        s_half: f64,
        r_half: f64,
        n_s: usize,
        n_r: usize,
    ) -> Result<Vec<f64>> {
        let mesh = ruled_surface(&GeodesicParams::new(c1, c2, c5, theta), (-s_half, s_half), (-r_half, r_half), n_s, n_r)?;
        Ok(flatten(mesh.vertices))
    }

    pub fn family(name: &str, p: f64) -> Result<SurfaceSpec> {
        Ok(match name {
            "rotation" => SurfaceSpec::RotationField { b: p },
            "ellipsoid" => SurfaceSpec::Ellipsoid { a: 1.0, b: p, c: 1.3 },
            "torus" => SurfaceSpec::Torus { core: 2.0, tube: p },
            "torn" => SurfaceSpec::TornTorus { a: 2.0, b: p },
            other => return Err(Error::InvalidArgument(format!("unknown family '{other}'"))),
        })
    }

    /// Signature codes on an `n x n` node grid over the family's domain,
    /// row-major in `nu1`: 0 Riemannian, 1 Lorentzian, 2 totally null,
    /// 3 undetermined. Also returns the domain as `[nu1_lo, nu1_hi, nu2_lo, nu2_hi]`.
    pub fn signature_map(name: &str, p: f64, n: usize) -> Result<(Vec<u8>, [f64; 4])> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {n}")));
        }
        let c = Congruence::from_spec(&family(name, p)?)?;
        let d = c.domain;
        let at = |k: usize, i: usize| d[k][0] + (d[k][1] - d[k][0]) * i as f64 / (n - 1) as f64;
        let mut codes = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                codes.push(match classify_signature(&c, [at(0, i), at(1, j)]) {
                    Ok(Signature::Riemannian) => 0,
                    Ok(Signature::Lorentzian) => 1,
                    Ok(Signature::TotallyNull) => 2,
                    Err(_) => 3,
                });
            }
        }
        Ok((codes, [d[0][0], d[0][1], d[1][0], d[1][1]]))
    }

    /// Summary of the geodesic joining two lines given by point and
    /// direction, and vertices of the surface it sweeps (`n_s x n_r`).
    pub struct Link {
        /// `kind` (0 helicoid, 1 plane pencil, 2 identical), `C1`, `C2`,
        /// `C5`, `theta`, `s1`, `l`, `d`.
        pub summary: [f64; 8],
        pub vertices: Vec<f64>,
    }

    #[allow(clippy::too_many_arguments)]
    pub fn connect(p1: [f64; 3], d1: [f64; 3], p2: [f64; 3], d2: [f64; 3], turns: u32, n_s: usize, n_r: usize, r_half: f64) -> Result<Link> {
        let line = |p: [f64; 3], d: [f64; 3]| {
            let d = Vector3::from(d);
            if d.norm() == 0.0 {
                return Err(Error::InvalidArgument("direction must be nonzero".into()));
            }
            line_through(&Vector3::from(p), &d.normalize()).map(|x| x.0)
        };
        let k = connect_lines(&line(p1, d1)?, &line(p2, d2)?, turns)?;
        let kind = match k.kind {
            ConnectionKind::Helicoid => 0.0,
            ConnectionKind::PlanePencil => 1.0,
            ConnectionKind::Identical => 2.0,
        };
        let p = &k.params;
        let mut pts = Vec::with_capacity(n_s * n_r);
        for i in 0..n_s {
            let s = if n_s > 1 { k.s1 * i as f64 / (n_s - 1) as f64 } else { 0.0 };
            let l = k.line_at(s)?;
            for j in 0..n_r {
                let r = if n_r > 1 { -r_half + 2.0 * r_half * j as f64 / (n_r - 1) as f64 } else { 0.0 };
                pts.push(phi(&l, r)?.to_vec());
            }
        }
        Ok(Link { summary: [kind, p.C1, p.C2, p.C5, p.theta, k.s1, k.l, k.angle], vertices: flatten(pts) })
    }
}

fn js(e: linekit::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn ruled_surface_vertices(
    c1: f64,
    c2: f64,
    c5: f64,
    theta: f64,
    s_half: f64,
    r_half: f64,
    n_s: usize,
    n_r: usize,
) -> Result<Vec<f64>, JsError> {
    native::ruled_surface_vertices(c1, c2, c5, theta, s_half, r_half, n_s, n_r).map_err(js)
}

/// Row-major signature codes; [`signature_domain`] gives the grid bounds.
#[wasm_bindgen]
pub fn signature_map(family: &str, p: f64, n: usize) -> Result<Vec<u8>, JsError> {
    native::signature_map(family, p, n).map(|x| x.0).map_err(js)
}

#[wasm_bindgen]
pub fn signature_domain(family: &str, p: f64) -> Result<Vec<f64>, JsError> {
    native::signature_map(family, p, 2).map(|x| x.1.to_vec()).map_err(js)
}

#[wasm_bindgen]
pub struct Link(native::Link);

#[wasm_bindgen]
impl Link {
    #[wasm_bindgen(getter)]
    pub fn summary(&self) -> Vec<f64> {
        self.0.summary.to_vec()
    }

    #[wasm_bindgen(getter)]
    pub fn vertices(&self) -> Vec<f64> {
        self.0.vertices.clone()
    }
}

/// Points and directions are `[x, y, z]` arrays.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn connect(p1: &[f64], d1: &[f64], p2: &[f64], d2: &[f64], turns: u32, n_s: usize, n_r: usize, r_half: f64) -> Result<Link, JsError> {
    let v = |a: &[f64]| <[f64; 3]>::try_from(a).map_err(|_| JsError::new("expected three coordinates"));
    native::connect(v(p1)?, v(d1)?, v(p2)?, v(d2)?, turns, n_s, n_r, r_half).map(Link).map_err(js)
}
