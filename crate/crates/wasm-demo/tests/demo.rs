use snum_wasm_demo::{envelope_curves, plane_entropy_bounds, sphere_outline, spectrum};

#[test]
fn envelope_rows_have_four_columns() {
    let rows = envelope_curves(1.0, 2.0, 16, 10, true).unwrap();
    assert_eq!(rows.len(), 40);
    for (i, row) in rows.chunks(4).enumerate() {
        assert_eq!(row[0], (i + 1) as f64);
        assert!(row[1..].iter().all(|v| v.is_nan() || *v > 0.0));
    }
    assert!(envelope_curves(0.0, 2.0, 4, 4, false).is_err());
    assert!(envelope_curves(1.0, 2.0, 0, 4, false).is_err());
}

#[test]
fn plane_bounds_bracket_the_identity() {
    let rows = plane_entropy_bounds(2.0, 2.0, 4, 500, 3).unwrap();
    assert_eq!(rows.len(), 16);
    assert!((rows[1] - 1.0).abs() < 1e-9, "e_1 lower is the norm, got {}", rows[1]);
    for row in rows.chunks(4) {
        assert!(row[1] <= row[2] + row[3]);
    }
    assert_eq!(rows, plane_entropy_bounds(2.0, 2.0, 4, 500, 3).unwrap());
    assert!(plane_entropy_bounds(2.0, 2.0, 8, 500, 3).is_err());
}

#[test]
fn outline_lies_on_the_sphere() {
    for p in [0.5, 1.0, 2.0, f64::INFINITY] {
        let pts = sphere_outline(p, 64).unwrap();
        assert_eq!(pts.len(), 128);
        for xy in pts.chunks(2) {
            let r = if p.is_infinite() {
                xy[0].abs().max(xy[1].abs())
            } else {
                (xy[0].abs().powf(p) + xy[1].abs().powf(p)).powf(1.0 / p)
            };
            assert!((r - 1.0).abs() < 1e-12, "p={p}: {r}");
        }
    }
}

#[test]
fn spectrum_of_a_triangle() {
    let out = spectrum(2, vec![2.0, 5.0, 0.0, 1.0]).unwrap();
    assert_eq!(out.len(), 5);
    assert!((out[2] - 2.0).abs() < 1e-12 && (out[3] - 1.0).abs() < 1e-12);
    // σ_1 σ_2 = |det| = 2
    assert!((out[0] * out[1] - 2.0).abs() < 1e-10);
    assert_eq!(out[4], 0.0);
    assert!(spectrum(2, vec![1.0; 3]).is_err());
    assert!(spectrum(1, vec![f64::NAN]).is_err());
}
