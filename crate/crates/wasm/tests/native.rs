use std::f64::consts::PI;

use linekit_wasm::native::{connect, family, ruled_surface_vertices, signature_map};

#[test]
fn helicoid_vertices() {
    let (c1, c2) = (1.0, 0.5);
    let v = ruled_surface_vertices(c1, c2, 0.0, 0.0, 2.0, 1.0, 9, 3).unwrap();
    assert_eq!(v.len(), 9 * 3 * 3);
    for i in 0..9 {
        let s = -2.0 + 0.5 * i as f64;
        for j in 0..3 {
            let t = -1.0 + j as f64;
            let k = 3 * (i * 3 + j);
            let want = [t * (2.0 * c2 * s).sin(), -c1 * s / (2.0 * c2), t * (2.0 * c2 * s).cos()];
            for a in 0..3 {
                assert!((v[k + a] - want[a]).abs() < 1e-9, "{i} {j}");
            }
        }
    }
    assert!(ruled_surface_vertices(f64::NAN, 0.5, 0.0, 0.0, 1.0, 1.0, 4, 4).is_err());
}

#[test]
fn rotation_field_map() {
    let (codes, dom) = signature_map("rotation", 1.0, 21).unwrap();
    assert_eq!(dom, [-2.0, 2.0, -2.0, 2.0]);
    // Centre node is Riemannian, (1, 0) is on the null circle.
    assert_eq!(codes[10 * 21 + 10], 0);
    assert_eq!(codes[15 * 21 + 10], 2);
    assert!(codes.iter().all(|&c| c != 1));
    assert!(signature_map("rotation", 1.0, 1).is_err());
    assert!(family("klein", 1.0).is_err());
}

#[test]
fn connect_skew_pair() {
    let link = connect([0.0; 3], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0, 5, 3, 1.0).unwrap();
    let [kind, c1, _, _, _, s1, l, d] = link.summary;
    assert_eq!(kind, 0.0);
    assert!((l.abs() - 1.0).abs() < 1e-12 && (d - PI / 2.0).abs() < 1e-12);
    assert!((c1 * s1 * s1 + l * d).abs() < 1e-9);
    assert_eq!(link.vertices.len(), 5 * 3 * 3);
    // First ruling is the x3-axis, last passes through (1, 0, 0) along x2.
    let first = &link.vertices[..9];
    assert!(first.chunks(3).all(|p| p[0].abs() < 1e-9 && p[1].abs() < 1e-9));
    let last = &link.vertices[36..];
    assert!(last.chunks(3).all(|p| (p[0] - 1.0).abs() < 1e-9 && p[2].abs() < 1e-9));
    assert!(connect([0.0; 3], [0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0, 5, 3, 1.0).is_err());
}
