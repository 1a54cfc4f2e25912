//! Browser bindings for the demo page in `www/`. Every export returns a flat
//! `Vec<f64>` (a `Float64Array` on the JS side) or an error string.

use wasm_bindgen::prelude::*;

use snumbers::entropy::{entropy_bounds, regime_envelope, EntropyOptions};
use snumbers::linalg::CMatrix;
use snumbers::spaces::lp_norm;
use snumbers::spectral::{eigen_sequence, weyl_check};
use snumbers::widths::{approx_id_envelope, kolmogorov_id_envelope, WidthResult};
use snumbers::{Exponent, Field, LinOp};

fn exponent(p: f64) -> Result<Exponent, String> {
    Exponent::new(p).map_err(|e| e.to_string())
}

fn field(complex: bool) -> Field {
    if complex {
        Field::Complex
    } else {
        Field::Real
    }
}

fn upper_or_nan(r: &WidthResult) -> f64 {
    r.envelope().map_or(f64::NAN, |e| e.upper)
}

/// Rows `[k, e_k, a_k, d_k]` of the closed-form envelopes for `id: ℓ_p^n → ℓ_q^n`,
/// `k = 1..=k_max`. NaN marks an envelope that is not available at `(p, q)`.
#[wasm_bindgen]
pub fn envelope_curves(p: f64, q: f64, n: usize, k_max: usize, complex: bool) -> Result<Vec<f64>, String> {
    let (pe, qe) = (exponent(p)?, exponent(q)?);
    if n == 0 || k_max == 0 {
        return Err("n and k_max must be positive".into());
    }
    let mut out = Vec::with_capacity(4 * k_max);
    for k in 1..=k_max {
        let e = regime_envelope(pe, qe, n, k, field(complex)).map_or(f64::NAN, |v| v.value);
        let a = approx_id_envelope(pe, qe, n, k).map_or(f64::NAN, |r| upper_or_nan(&r));
        let d = kolmogorov_id_envelope(pe, qe, n, k, field(complex)).map_or(f64::NAN, |r| upper_or_nan(&r));
        out.extend([k as f64, e, a, d]);
    }
    Ok(out)
}

/// Rows `[k, lower, upper, δ]` of sampled entropy bounds for `id: ℓ_p^2 → ℓ_q^2`.
#[wasm_bindgen]
pub fn plane_entropy_bounds(p: f64, q: f64, k_max: usize, cloud: usize, seed: u64) -> Result<Vec<f64>, String> {
    if !(1..=7).contains(&k_max) {
        return Err("k_max must lie in 1..=7".into());
    }
    let id = LinOp::identity(2, exponent(p)?, exponent(q)?, Field::Real).map_err(|e| e.to_string())?;
    let opts = EntropyOptions {
        cloud: cloud.clamp(64, 20_000),
        budget: cloud.clamp(64, 20_000),
        seed,
    };
    let bounds = entropy_bounds(&id, k_max, opts).map_err(|e| e.to_string())?;
    Ok(bounds
        .iter()
        .flat_map(|b| [b.k as f64, b.lower, b.upper.unwrap_or(f64::NAN), b.delta])
        .collect())
}

/// `m` points `[x_0, y_0, x_1, y_1, …]` on the unit sphere of `ℓ_p^2`.
#[wasm_bindgen]
pub fn sphere_outline(p: f64, m: usize) -> Result<Vec<f64>, String> {
    let pe = exponent(p)?;
    let mut out = Vec::with_capacity(2 * m);
    for i in 0..m {
        let t = std::f64::consts::TAU * i as f64 / m as f64;
        let v = [num_complex::Complex64::new(t.cos(), 0.0), num_complex::Complex64::new(t.sin(), 0.0)];
        let r = lp_norm(&v, pe);
        out.extend([v[0].re / r, v[1].re / r]);
    }
    Ok(out)
}

/// For a real `n×n` matrix in row-major order: `[σ_1..σ_n, |λ_1|..|λ_n|, violations]`,
/// where the last entry counts failed Weyl inequalities.
#[wasm_bindgen]
pub fn spectrum(n: usize, data: Vec<f64>) -> Result<Vec<f64>, String> {
    if n == 0 || data.len() != n * n {
        return Err(format!("expected {} entries for a {n}×{n} matrix, got {}", n * n, data.len()));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err("entries must be finite".into());
    }
    let m = CMatrix::from_fn(n, n, |i, j| num_complex::Complex64::new(data[i * n + j], 0.0));
    let t = LinOp::new(m, Exponent::TWO, Exponent::TWO, Field::Real).map_err(|e| e.to_string())?;
    let mut out = t.singular_values();
    out.extend(eigen_sequence(&t).map_err(|e| e.to_string())?.moduli);
    let report = weyl_check(&t, &[0.5, 1.0, 2.0, 4.0]).map_err(|e| e.to_string())?;
    out.push(report.violations.len() as f64);
    Ok(out)
}
