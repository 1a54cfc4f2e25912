//! Randomized check of the s-number axioms against any source of bounds.
//!
//! Every check compares a lower bound on the left-hand side with upper bounds
//! on the right-hand side, so a violation always points at a wrong bound.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{entropy_bounds, EntropyOptions};
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::operators::{add, compose, numerical_rank, op_norm_upper, LinOp, RANK_TOL};
use crate::sampling::{gaussian_vector, stream_rng};
use crate::spaces::{quasi_constant, Exponent, Field};

use super::search::{approx_upper_search, kolmogorov_upper_search};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    /// Candidate s-scale: all six axioms apply.
    SScale,
    /// Entropy numbers: only monotonicity, additivity and multiplicativity.
    Entropy,
}

/// `lower[k − 1] ≤ s_k ≤ upper[k − 1]` for `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeqBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

pub trait SNumberSource {
    fn name(&self) -> String;
    fn kind(&self) -> SourceKind;
    /// Exponents of the operators `T : ℓ_p^n → ℓ_q^n` the suite draws.
    fn exponents(&self) -> (Exponent, Exponent);
    fn field(&self) -> Field;
    fn bounds(&self, t: &LinOp, k_max: usize) -> Result<SeqBounds>;
    /// Relative slack for rounding.
    fn tolerance(&self) -> f64 {
        1e-9
    }
    fn max_dim(&self) -> usize {
        6
    }
}

/// Singular values on `ℓ_2`, where `a_k = d_k = σ_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertExact {
    pub field: Field,
}

impl SNumberSource for HilbertExact {
    fn name(&self) -> String {
        format!("hilbert-exact ({})", self.field)
    }
    fn kind(&self) -> SourceKind {
        SourceKind::SScale
    }
    fn exponents(&self) -> (Exponent, Exponent) {
        (Exponent::TWO, Exponent::TWO)
    }
    fn field(&self) -> Field {
        self.field
    }
    fn bounds(&self, t: &LinOp, k_max: usize) -> Result<SeqBounds> {
        let s = super::hilbert_s_numbers(t, super::SKind::Approximation)?;
        let values: Vec<f64> = (1..=k_max).map(|k| s.get(k)).collect();
        Ok(SeqBounds {
            lower: values.clone(),
            upper: values,
        })
    }
}

/// `‖id : ℓ_a^n → ℓ_b^n‖ = n^{max(0, 1/b − 1/a)}`.
fn id_norm(n: usize, a: Exponent, b: Exponent) -> f64 {
    (n as f64).powf((b.recip() - a.recip()).max(0.0))
}

/// `σ_k(T) ≤ ‖id_{q→2}‖ s_k(T : ℓ_p → ℓ_q) ‖id_{2→p}‖` by the ideal property,
/// so rescaled singular values bound every s-number from below.
pub fn singular_value_lower(t: &LinOp, k_max: usize) -> Vec<f64> {
    let s = t.singular_values();
    let factor = id_norm(t.codomain().n, t.q(), Exponent::TWO) * id_norm(t.domain().n, Exponent::TWO, t.p());
    (0..k_max).map(|i| s.get(i).copied().unwrap_or(0.0) / factor).collect()
}

/// Approximation numbers bracketed by rescaled singular values and the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxEstimator {
    pub p: Exponent,
    pub q: Exponent,
    pub field: Field,
    pub budget: usize,
    pub seed: u64,
}

impl SNumberSource for ApproxEstimator {
    fn name(&self) -> String {
        format!("approximation-search (p={}, q={}, {})", self.p, self.q, self.field)
    }
    fn kind(&self) -> SourceKind {
        SourceKind::SScale
    }
    fn exponents(&self) -> (Exponent, Exponent) {
        (self.p, self.q)
    }
    fn field(&self) -> Field {
        self.field
    }
    fn bounds(&self, t: &LinOp, k_max: usize) -> Result<SeqBounds> {
        let upper = (1..=k_max)
            .map(|k| approx_upper_search(t, k, self.budget, self.seed).map(|r| r.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeqBounds {
            lower: singular_value_lower(t, k_max),
            upper,
        })
    }
}

/// Kolmogorov numbers bracketed by rescaled singular values and `min_U ‖(I − P_U)T‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KolmogorovEstimator {
    pub p: Exponent,
    pub q: Exponent,
    pub field: Field,
    pub budget: usize,
    pub seed: u64,
}

impl SNumberSource for KolmogorovEstimator {
    fn name(&self) -> String {
        format!("kolmogorov-search (p={}, q={}, {})", self.p, self.q, self.field)
    }
    fn kind(&self) -> SourceKind {
        SourceKind::SScale
    }
    fn exponents(&self) -> (Exponent, Exponent) {
        (self.p, self.q)
    }
    fn field(&self) -> Field {
        self.field
    }
    fn bounds(&self, t: &LinOp, k_max: usize) -> Result<SeqBounds> {
        let upper = (1..=k_max)
            .map(|k| kolmogorov_upper_search(t, k, self.budget, self.seed).map(|r| r.certified_upper))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeqBounds {
            lower: singular_value_lower(t, k_max),
            upper,
        })
    }
}

/// Certified packing lower bounds against covering upper bounds plus margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimator {
    pub p: Exponent,
    pub q: Exponent,
    pub field: Field,
    pub options: EntropyOptions,
    pub k_max: usize,
}

impl SNumberSource for EntropyEstimator {
    fn name(&self) -> String {
        format!("entropy-bounds (p={}, q={}, {})", self.p, self.q, self.field)
    }
    fn kind(&self) -> SourceKind {
        SourceKind::Entropy
    }
    fn exponents(&self) -> (Exponent, Exponent) {
        (self.p, self.q)
    }
    fn field(&self) -> Field {
        self.field
    }
    fn bounds(&self, t: &LinOp, k_max: usize) -> Result<SeqBounds> {
        let k_max = k_max.min(self.k_max);
        let pairs = entropy_bounds(t, k_max, self.options)?;
        Ok(SeqBounds {
            lower: pairs.iter().map(|b| b.lower).collect(),
            upper: pairs.iter().map(|b| b.upper_with_margin()).collect(),
        })
    }
    fn max_dim(&self) -> usize {
        4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// `s_{k+1}(T) ≤ s_k(T)`, and `lower ≤ upper` at each index.
    Monotone,
    /// `s_{m+l−1}(S + T) ≤ C (s_m(S) + s_l(T))`.
    Additive,
    /// `s_k(RTU) ≤ ‖R‖ s_k(T) ‖U‖`.
    Ideal,
    /// `s_k(T) = 0` for `k > rank T`.
    Rank,
    /// `s_k(id : ℓ_2^n → ℓ_2^n) = 1`.
    Norming,
    /// `s_{m+l−1}(ST) ≤ s_m(S) s_l(T)`.
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub trial: usize,
    /// The s-number indices involved, left-hand side first.
    pub indices: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
    /// Matrix of the main operator of the trial.
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub source: String,
    pub trials: usize,
    pub checks: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn random_op<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    rank: usize,
    p: Exponent,
    q: Exponent,
    field: Field,
) -> Result<LinOp> {
    let a = CMatrix::from_vec(n, rank, gaussian_vector(rng, n * rank, field));
    let b = CMatrix::from_vec(rank, n, gaussian_vector(rng, rank * n, field));
    LinOp::new(a * b, p, q, field)
}

fn format_entry(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn format_matrix(m: &CMatrix) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| {
            let entries: Vec<String> = r.iter().map(format_entry).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

struct Checker<'a> {
    tol: f64,
    trial: usize,
    witness: &'a LinOp,
    checks: usize,
    violations: Vec<AxiomViolation>,
}

impl Checker<'_> {
    fn le(&mut self, axiom: Axiom, indices: &[usize], lhs: f64, rhs: f64) {
        self.checks += 1;
        if lhs > rhs + self.tol * rhs.abs().max(1.0) {
            self.violations.push(AxiomViolation {
                axiom,
                trial: self.trial,
                indices: indices.to_vec(),
                lhs,
                rhs,
                witness: format_matrix(self.witness.matrix()),
            });
        }
    }
}

/// Run the axioms on `trials` random instances drawn from `seed`.
pub fn s_axiom_suite(source: &dyn SNumberSource, trials: usize, seed: u64) -> Result<AxiomReport> {
    let (p, q) = source.exponents();
    let field = source.field();
    let s_scale = source.kind() == SourceKind::SScale;
    let mut report = AxiomReport {
        source: source.name(),
        trials,
        checks: 0,
        violations: Vec::new(),
    };
    for trial in 0..trials {
        let mut rng = stream_rng(seed, 0x5a_0000 + trial as u64);
        let n = rng.random_range(2..=source.max_dim().max(2));
        let rank = if trial % 2 == 0 { n } else { rng.random_range(1..n) };
        let t = random_op(&mut rng, n, rank, p, q, field)?;
        let s = random_op(&mut rng, n, n, p, q, field)?;
        let outer = random_op(&mut rng, n, n, q, q, field)?;
        let inner = random_op(&mut rng, n, n, p, p, field)?;

        let bt = source.bounds(&t, n)?;
        let k_max = bt.lower.len();
        let bs = source.bounds(&s, k_max)?;
        let bsum = source.bounds(&add(&s, &t)?, k_max)?;
        let bouter = source.bounds(&outer, k_max)?;
        let bprod = source.bounds(&compose(&outer, &t)?, k_max)?;

        let mut ck = Checker {
            tol: source.tolerance(),
            trial,
            witness: &t,
            checks: 0,
            violations: Vec::new(),
        };
        for k in 1..=k_max {
            ck.le(Axiom::Monotone, &[k, k], bt.lower[k - 1], bt.upper[k - 1]);
            if k > 1 {
                ck.le(Axiom::Monotone, &[k, k - 1], bt.lower[k - 1], bt.upper[k - 2]);
            }
        }
        let c = quasi_constant(q);
        for m in 1..=k_max {
            for l in 1..=k_max + 1 - m {
                let j = m + l - 1;
                ck.le(
                    Axiom::Additive,
                    &[j, m, l],
                    bsum.lower[j - 1],
                    c * (bs.upper[m - 1] + bt.upper[l - 1]),
                );
                ck.le(
                    Axiom::Multiplicative,
                    &[j, m, l],
                    bprod.lower[j - 1],
                    bouter.upper[m - 1] * bt.upper[l - 1],
                );
            }
        }
        if s_scale {
            let sandwich = compose(&compose(&outer, &t)?, &inner)?;
            let bsand = source.bounds(&sandwich, k_max)?;
            let norms = op_norm_upper(&outer) * op_norm_upper(&inner);
            for k in 1..=k_max {
                ck.le(Axiom::Ideal, &[k], bsand.lower[k - 1], norms * bt.upper[k - 1]);
            }
            for k in numerical_rank(&t, RANK_TOL) + 1..=k_max {
                ck.le(Axiom::Rank, &[k], bt.upper[k - 1], 0.0);
            }
            let id = LinOp::identity(n, Exponent::TWO, Exponent::TWO, field)?;
            let bid = source.bounds(&id, n)?;
            for k in 1..=bid.lower.len() {
                ck.le(Axiom::Norming, &[k], bid.lower[k - 1], 1.0);
                ck.le(Axiom::Norming, &[k], 1.0, bid.upper[k - 1]);
            }
        }
        report.checks += ck.checks;
        report.violations.extend(ck.violations);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_exact_passes() {
        for field in [Field::Real, Field::Complex] {
            let r = s_axiom_suite(&HilbertExact { field }, 30, 7).unwrap();
            assert!(r.passed(), "{:?}", r.violations.first());
            assert!(r.checks > 100);
        }
    }

    /// Doubling every bound breaks norming and rank is untouched.
    struct Inflated;

    impl SNumberSource for Inflated {
        fn name(&self) -> String {
            "inflated".into()
        }
        fn kind(&self) -> SourceKind {
            SourceKind::SScale
        }
        fn exponents(&self) -> (Exponent, Exponent) {
            (Exponent::TWO, Exponent::TWO)
        }
        fn field(&self) -> Field {
            Field::Real
        }
        fn bounds(&self, t: &LinOp, k_max: usize) -> Result<SeqBounds> {
            let b = HilbertExact { field: Field::Real }.bounds(t, k_max)?;
            let twice: Vec<f64> = b.lower.iter().map(|v| 2.0 * v).collect();
            Ok(SeqBounds {
                lower: twice.clone(),
                upper: twice,
            })
        }
    }

    #[test]
    fn violations_carry_witnesses() {
        let r = s_axiom_suite(&Inflated, 3, 1).unwrap();
        assert!(r.violations.iter().any(|v| v.axiom == Axiom::Norming));
        assert!(r.violations.iter().all(|v| v.witness.starts_with("[[")));
        assert!(!r.violations.iter().any(|v| v.axiom == Axiom::Rank));
    }

    #[test]
    fn estimators_pass() {
        let p = Exponent::new(1.5).unwrap();
        let q = Exponent::new(3.0).unwrap();
        let a = ApproxEstimator {
            p,
            q,
            field: Field::Real,
            budget: 60,
            seed: 3,
        };
        let r = s_axiom_suite(&a, 4, 2).unwrap();
        assert!(r.passed(), "{:?}", r.violations.first());
        let d = KolmogorovEstimator {
            p,
            q,
            field: Field::Real,
            budget: 40,
            seed: 3,
        };
        let r = s_axiom_suite(&d, 4, 2).unwrap();
        assert!(r.passed(), "{:?}", r.violations.first());
    }
}
