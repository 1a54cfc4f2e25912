//! Approximation numbers `a_k` and Kolmogorov numbers `d_k`.

mod axioms;
mod envelope;
mod search;

pub use axioms::{
    s_axiom_suite, singular_value_lower, ApproxEstimator, Axiom, AxiomReport, AxiomViolation, EntropyEstimator, HilbertExact,
    KolmogorovEstimator, SeqBounds, SNumberSource, SourceKind,
};
pub use envelope::{approx_id_envelope, kolmogorov_id_envelope, WidthEnvelope, WidthResult};
pub use search::{approx_upper_search, kolmogorov_upper_search, ApproxMethod, ApproxSearch, KolmogorovSearch};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::operators::LinOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SKind {
    Approximation,
    Kolmogorov,
}

/// `s_1, …, s_n` of one operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SNumberSeq {
    pub kind: SKind,
    /// `values[k − 1] = s_k`.
    pub values: Vec<f64>,
    pub exact: bool,
    pub method: String,
}

impl SNumberSeq {
    /// `s_k`, zero past the stored length. `k` starts at 1.
    pub fn get(&self, k: usize) -> f64 {
        assert!(k >= 1, "s-number index starts at 1");
        self.values.get(k - 1).copied().unwrap_or(0.0)
    }
}

/// Singular values of a Hilbert-space operator, zero-padded to the domain
/// dimension. On `ℓ_2` both `a_k` and `d_k` equal `σ_k`.
pub fn hilbert_s_numbers(t: &LinOp, kind: SKind) -> Result<SNumberSeq> {
    if !t.is_hilbert() {
        return domain(format!(
            "exact s-numbers need p = q = 2, got p = {}, q = {}",
            t.p(),
            t.q()
        ));
    }
    let n = t.domain().n;
    let mut values = t.singular_values();
    values.resize(n.max(values.len()), 0.0);
    Ok(SNumberSeq {
        kind,
        values,
        exact: true,
        method: "singular-values".into(),
    })
}

/// `a^ℝ_{2k−1} ≤ a_k ≤ 2 a^ℝ_{2k}` at index `k`, where `a_real` belongs to the
/// realification of the complex operator behind `a_complex`.
pub fn real_complex_bracket(a_real: &SNumberSeq, a_complex: &SNumberSeq, k: usize) -> Result<bool> {
    if k == 0 || k > a_complex.values.len() {
        return domain(format!(
            "index {k} outside 1..={}",
            a_complex.values.len()
        ));
    }
    const TOL: f64 = 1e-9;
    let le = |a: f64, b: f64| a <= b + TOL * b.abs().max(1.0);
    let ak = a_complex.get(k);
    Ok(le(a_real.get(2 * k - 1), ak) && le(ak, 2.0 * a_real.get(2 * k)))
}
