//! Closed-form envelopes for `a_k` and `d_k` of `id : ℓ_p^n → ℓ_q^n`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::spaces::{Exponent, Field};

/// An interval for one width with the statement it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthEnvelope {
    pub lower: f64,
    /// `f64::INFINITY` for one-sided (lower only) statements.
    pub upper: f64,
    pub case_label: String,
    /// `true` when the value is exact rather than an equivalence with unknown constants.
    pub constants_known: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WidthResult {
    Envelope(WidthEnvelope),
    /// The parameters fall in a gap of the known case tables.
    NoClosedForm { reason: String },
}

impl WidthResult {
    pub fn envelope(&self) -> Option<&WidthEnvelope> {
        match self {
            WidthResult::Envelope(e) => Some(e),
            WidthResult::NoClosedForm { .. } => None,
        }
    }

    fn exact(value: f64, label: &str) -> Self {
        WidthResult::Envelope(WidthEnvelope {
            lower: value,
            upper: value,
            case_label: label.into(),
            constants_known: true,
        })
    }

    fn equivalent(value: f64, label: &str) -> Self {
        WidthResult::Envelope(WidthEnvelope {
            lower: value,
            upper: value,
            case_label: label.into(),
            constants_known: false,
        })
    }

    fn bracket(lower: f64, upper: f64, label: &str) -> Self {
        WidthResult::Envelope(WidthEnvelope {
            lower,
            upper,
            case_label: label.into(),
            constants_known: false,
        })
    }

    fn none(reason: impl Into<String>) -> Self {
        WidthResult::NoClosedForm { reason: reason.into() }
    }
}

fn check(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 {
        return domain("n and k must be positive");
    }
    Ok(())
}

/// `(n − k + 1)^{1/q − 1/p}` for `q ≤ p`.
pub fn exact_lower_triangle(p: Exponent, q: Exponent, n: usize, k: usize) -> f64 {
    ((n - k + 1) as f64).powf(q.recip() - p.recip())
}

fn min_one(n: f64, q: Exponent, k: f64) -> f64 {
    (n.powf(q.recip()) / k.sqrt()).min(1.0)
}

/// The three-case function behind the real approximation numbers, `1 ≤ p < q ≤ ∞`.
fn phi_approx(n: usize, k: usize, p: Exponent, q: Exponent) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let (ip, iq) = (p.recip(), q.recip());
    let tail = (1.0 - kf / nf).max(0.0).sqrt();
    if p.value() >= 2.0 {
        min_one(nf, q, kf).powf((ip - iq) / (0.5 - iq))
    } else if q.value() >= 2.0 {
        nf.powf(iq - ip).max(min_one(nf, q, kf) * tail)
    } else {
        nf.powf(iq - ip).max(tail.powf((ip - iq) / (ip - 0.5)))
    }
}

/// The four-case function behind the Kolmogorov numbers, `1 ≤ p, q ≤ ∞`.
fn phi_kolmogorov(n: usize, k: usize, p: Exponent, q: Exponent) -> f64 {
    if q <= p {
        return exact_lower_triangle(p, q, n, k);
    }
    let (nf, kf) = (n as f64, k as f64);
    let (ip, iq) = (p.recip(), q.recip());
    let tail = (1.0 - kf / nf).max(0.0).sqrt();
    if p.value() >= 2.0 {
        min_one(nf, q, kf).powf((ip - iq) / (0.5 - iq))
    } else if q.value() <= 2.0 {
        nf.powf(iq - ip).max(tail.powf((ip - iq) / (ip - 0.5)))
    } else {
        nf.powf(iq - ip).max(min_one(nf, q, kf) * tail)
    }
}

/// Strongest known statement for `a_k(id : ℓ_p^n → ℓ_q^n)`.
///
/// The equivalences for `1 ≤ p < q` are the real-field statements; over ℂ they
/// hold up to the factor 2 of the real/complex bracket.
pub fn approx_id_envelope(p: Exponent, q: Exponent, n: usize, k: usize) -> Result<WidthResult> {
    check(n, k)?;
    if k > n {
        return Ok(WidthResult::exact(0.0, "rank: k > n"));
    }
    if q <= p {
        return Ok(WidthResult::exact(exact_lower_triangle(p, q, n, k), "exact: q ≤ p"));
    }
    let (nf, kf) = (n as f64, k as f64);
    let pc = p.conjugate();
    if p.value() >= 1.0 {
        if p == Exponent::ONE && q.is_infinite() {
            return Ok(WidthResult::none("(p, q) = (1, ∞) is excluded from the real-case theorem"));
        }
        if q < pc {
            return Ok(WidthResult::equivalent(phi_approx(n, k, p, q), "Psi: 1 ≤ p < q < p'"));
        }
        if q > pc {
            return Ok(WidthResult::equivalent(
                phi_approx(n, k, q.conjugate(), pc),
                "Psi: max(p, p') < q",
            ));
        }
        if 4 * k <= n {
            return Ok(WidthResult::equivalent(
                min_one(nf, pc, kf),
                "corollary: 1 ≤ p ≤ 2 ≤ p' ≤ q, k ≤ n/4",
            ));
        }
        return Ok(WidthResult::none("q = p' with k > n/4 is not covered"));
    }
    // 0 < p < 1, p < q
    let finite_q = !q.is_infinite();
    if q.value() <= 2.0 && 4 * k <= n {
        return Ok(WidthResult::equivalent(1.0, "quasi: 0 < p ≤ q ≤ 2, k ≤ n/4"));
    }
    if finite_q && q.value() > 2.0 && 4 * k <= n {
        return Ok(WidthResult::equivalent(
            min_one(nf, q, kf),
            "quasi: 0 < p < 2 < q < p', k ≤ n/4",
        ));
    }
    if finite_q && q.value() >= 2.0 {
        let upper = nf.powf(q.recip()) / kf.sqrt();
        let lower = if kf <= 0.25 * nf.powf(2.0 / q.value()) { 1.0 } else { 0.0 };
        return Ok(WidthResult::bracket(lower, upper, "Caetano: 0 < p ≤ 2 ≤ q < ∞"));
    }
    Ok(WidthResult::none(format!(
        "no statement covers p = {p} < 1, q = {q}, k = {k} > n/4 or q = ∞"
    )))
}

/// Strongest known statement for `d_k(id : ℓ_p^n → ℓ_q^n)`.
pub fn kolmogorov_id_envelope(p: Exponent, q: Exponent, n: usize, k: usize, field: Field) -> Result<WidthResult> {
    check(n, k)?;
    let _ = field;
    if k > n {
        return Ok(WidthResult::exact(0.0, "rank: k > n"));
    }
    let banach = p.value() >= 1.0 && q.value() >= 1.0;
    if banach && q <= p {
        return Ok(WidthResult::exact(exact_lower_triangle(p, q, n, k), "Phi case 1: 1 ≤ q ≤ p"));
    }
    if banach && q.is_infinite() {
        let phi = phi_kolmogorov(n, k, p, q);
        let log = (std::f64::consts::E * n as f64 / k as f64).ln();
        return Ok(WidthResult::bracket(phi, phi * log.powf(1.5), "Phi with q = ∞, log^{3/2} gap"));
    }
    if banach {
        let label = if p.value() >= 2.0 {
            "Phi case 2: 2 ≤ p < q"
        } else if q.value() <= 2.0 {
            "Phi case 3: 1 ≤ p < q ≤ 2"
        } else {
            "Phi case 4: 1 ≤ p < 2 < q"
        };
        return Ok(WidthResult::equivalent(phi_kolmogorov(n, k, p, q), label));
    }
    if q <= p {
        // d ≤ a gives the upper side; the lower shape holds up to the first half of the indices
        let upper = exact_lower_triangle(p, q, n, k);
        let lower = if 2 * k <= n + 2 {
            (n as f64 / 2.0).powf(q.recip() - p.recip())
        } else {
            0.0
        };
        return Ok(WidthResult::bracket(lower.min(upper), upper, "quasi: 0 < q ≤ p, q < 1"));
    }
    Ok(WidthResult::none(format!("no statement covers p = {p}, q = {q} with p < q, min(p, q) < 1")))
}
