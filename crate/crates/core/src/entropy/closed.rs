//! Closed-form entropy bounds for identities and low-rank operators.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::CMatrix;
use crate::spaces::{ln_ball_volume, Exponent, Field, SpaceSpec};

/// Volume lower bound for `e_k(id : ℓ_p^n → ℓ_q^n)`:
/// `(vol B_p / (2^{k−1} vol B_q))^{1/D}`, `D` the real dimension.
pub fn entropy_lower_volumetric(p: Exponent, q: Exponent, n: usize, k: usize, field: Field) -> Result<f64> {
    if k == 0 {
        return domain("entropy index starts at 1");
    }
    let sp = SpaceSpec::new(p, n, field)?;
    let sq = SpaceSpec::new(q, n, field)?;
    let d = sp.volumetric_dim() as f64;
    let ln = ln_ball_volume(&sp) - (k as f64 - 1.0) * LN_2 - ln_ball_volume(&sq);
    Ok((ln / d).exp())
}

/// Volume lower bound for a square operator: `T(B_p)` has volume
/// `|det T|^{D/n} vol B_p` when viewed in real coordinates.
pub fn entropy_lower_volumetric_op(
    matrix: &CMatrix,
    p: Exponent,
    q: Exponent,
    k: usize,
    field: Field,
) -> Result<f64> {
    if !matrix.is_square() {
        return domain("the volume bound needs a square operator");
    }
    let n = matrix.nrows();
    let base = entropy_lower_volumetric(p, q, n, k, field)?;
    let det = matrix.clone().determinant().norm();
    if det == 0.0 || !det.is_finite() {
        return Ok(0.0);
    }
    // the real Jacobian is |det| over ℝ and |det|² over ℂ; its D-th root is |det|^{1/n}
    Ok(base * det.powf(1.0 / n as f64))
}

/// Result of the sign-vector packing bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HammingBound {
    pub value: f64,
    /// Block size that attains the bound.
    pub m: Option<usize>,
    pub diagnostic: Option<String>,
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// One block size of the sign-vector packing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HammingBlock {
    /// `log₂(C(n,2m)/C(n,m))`, a lower bound for `log₂` of the packing size.
    pub log2_size: f64,
    /// Pairwise separation `(2m)^{−1/p} m^{1/q}`.
    pub separation: f64,
    /// Entropy bound implied by the separation.
    pub bound: f64,
}

pub fn hamming_block(p: Exponent, q: Exponent, n: usize, m: usize) -> HammingBlock {
    let log2_size = (ln_binomial(n, 2 * m) - ln_binomial(n, m)) / LN_2;
    let separation = (2.0 * m as f64).powf(-p.recip()) * (m as f64).powf(q.recip());
    let bound = if q.value() < 1.0 {
        separation / 2f64.powf(q.recip())
    } else {
        separation / 2.0
    };
    HammingBlock {
        log2_size,
        separation,
        bound,
    }
}

/// Packing by normalized vectors with `2m` entries `±1`.
///
/// A block size `m ≤ n/4` is admissible when `log₂(C(n,2m)/C(n,m)) ≥ k`; the set
/// then has pairwise `ℓ_q` separation `ε = (2m)^{−1/p} m^{1/q}`, which yields
/// `e_k ≥ ε/2` (`ε/2^{1/q}` for `q < 1`). The best admissible `m` is returned.
pub fn hamming_pack_lower(p: Exponent, q: Exponent, n: usize, k: usize) -> Result<HammingBound> {
    if p > q {
        return domain(format!("the packing bound needs p ≤ q, got p = {p}, q = {q}"));
    }
    if k == 0 {
        return domain("entropy index starts at 1");
    }
    if n < 4 {
        return Ok(HammingBound {
            value: 0.0,
            m: None,
            diagnostic: Some(format!("n = {n} < 4 leaves no admissible block size")),
        });
    }
    let mut best = HammingBound {
        value: 0.0,
        m: None,
        diagnostic: Some(format!("no block size m ≤ {} reaches k = {k}", n / 4)),
    };
    for m in 1..=n / 4 {
        let block = hamming_block(p, q, n, m);
        if block.log2_size < k as f64 {
            continue;
        }
        if block.bound > best.value {
            best = HammingBound {
                value: block.bound,
                m: Some(m),
                diagnostic: None,
            };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SmallK,
    MidK,
    LargeK,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::SmallK => "small-k",
            Regime::MidK => "mid-k",
            Regime::LargeK => "large-k",
        }
    }
}

/// Closed-form asymptotic shape of `e_k(id : ℓ_p^n → ℓ_q^n)`, constants unknown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub value: f64,
    pub regime: Regime,
    pub constants_known: bool,
}

/// The three pieces, with `N = 2n` over ℂ and `N = n` over ℝ, `α = 1/p − 1/q`:
///
/// * `k < log₂ N`: `1`
/// * `log₂ N ≤ k ≤ N`: `(k^{−1} log₂(1 + N/k))^α`
/// * `k > N`: `2^{−k/N} N^{−α}`
pub fn regime_envelope(p: Exponent, q: Exponent, n: usize, k: usize, field: Field) -> Result<Envelope> {
    if p > q {
        return domain(format!("the envelope needs p ≤ q, got p = {p}, q = {q}"));
    }
    if n == 0 || k == 0 {
        return domain("n and k must be positive");
    }
    let big_n = (n * field.real_dim()) as f64;
    let kf = k as f64;
    let (regime, value) = if kf < big_n.log2() {
        (Regime::SmallK, 1.0)
    } else if kf <= big_n {
        (Regime::MidK, regime_piece(Regime::MidK, p, q, big_n, kf))
    } else {
        (Regime::LargeK, regime_piece(Regime::LargeK, p, q, big_n, kf))
    };
    Ok(Envelope {
        value,
        regime,
        constants_known: false,
    })
}

/// One piece of the envelope evaluated at an arbitrary `k`, for continuity checks.
/// `big_n` is the real dimension (`2n` over ℂ).
pub fn regime_piece(regime: Regime, p: Exponent, q: Exponent, big_n: f64, k: f64) -> f64 {
    let alpha = p.recip() - q.recip();
    match regime {
        Regime::SmallK => 1.0,
        Regime::MidK => ((1.0 + big_n / k).log2() / k).powf(alpha),
        Regime::LargeK => 2f64.powf(-k / big_n) * big_n.powf(-alpha),
    }
}

/// Unit-constant shapes `(2^{−(k−1)/d}, ‖T‖·2^{−(k−1)/d})` of the entropy decay of a
/// rank-`m` operator, `d = m` over ℝ and `2m` over ℂ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankDecay {
    pub lower_shape: f64,
    pub upper_shape: f64,
}

pub fn rank_decay_bounds(m: usize, k: usize, norm: f64, field: Field) -> Result<RankDecay> {
    if m == 0 || k == 0 {
        return domain("rank and index must be positive");
    }
    let d = (m * field.real_dim()) as f64;
    let shape = 2f64.powf(-(k as f64 - 1.0) / d);
    Ok(RankDecay {
        lower_shape: shape,
        upper_shape: norm * shape,
    })
}

/// `e_λ := e_{⌈λ⌉}` for a real index `λ > 0`.
pub fn dyadic_index(lambda: f64) -> Result<usize> {
    if lambda.is_nan() || lambda <= 0.0 {
        return domain(format!("fractional index must be positive, got {lambda}"));
    }
    Ok(lambda.ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn volumetric_examples() {
        for n in 1..5 {
            for k in 1..6 {
                let v = entropy_lower_volumetric(e(1.5), e(1.5), n, k, Field::Real).unwrap();
                assert_relative_eq!(v, 2f64.powf(-(k as f64 - 1.0) / n as f64), max_relative = 1e-12);
            }
        }
        assert_relative_eq!(
            entropy_lower_volumetric(Exponent::TWO, Exponent::TWO, 1, 1, Field::Real).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        // cross-polytope area 2, square area 4: (2 / (4·4))^{1/2}
        assert_relative_eq!(
            entropy_lower_volumetric(Exponent::ONE, Exponent::INFINITY, 2, 3, Field::Real).unwrap(),
            (2.0f64 / 16.0).sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn volumetric_operator_scales_with_determinant() {
        let m = crate::linalg::real_matrix(2, 2, &[2.0, 0.0, 0.0, 8.0]);
        let v = entropy_lower_volumetric_op(&m, Exponent::TWO, Exponent::TWO, 1, Field::Real).unwrap();
        assert_relative_eq!(v, 4.0, max_relative = 1e-12);
        let c = CMatrix::from_element(1, 1, num_complex::Complex64::new(0.0, 3.0));
        let v = entropy_lower_volumetric_op(&c, Exponent::TWO, Exponent::TWO, 1, Field::Complex).unwrap();
        assert_relative_eq!(v, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn hamming_examples() {
        // n = 8, m = 2: a = C(8,4)/C(8,2) = 70/28 = 2.5 and ε = 4^{-1}·2^0
        let block = hamming_block(Exponent::ONE, Exponent::INFINITY, 8, 2);
        assert_relative_eq!(block.log2_size, 2.5f64.log2(), max_relative = 1e-12);
        assert_relative_eq!(block.separation, 0.25, max_relative = 1e-12);
        assert_relative_eq!(block.bound, 0.125, max_relative = 1e-12);
        // for k = 1 the smaller block m = 1 is admissible too and wins
        let b = hamming_pack_lower(Exponent::ONE, Exponent::INFINITY, 8, 1).unwrap();
        assert_eq!(b.m, Some(1));
        assert_relative_eq!(b.value, 0.25, max_relative = 1e-12);
        // p = q: ε = 2^{-1/p}; with n = 4 the block is too small to reach k = 1
        let small = hamming_block(e(3.0), e(3.0), 4, 1);
        assert_relative_eq!(small.separation, 2f64.powf(-1.0 / 3.0), max_relative = 1e-12);
        assert!(small.log2_size < 1.0);
        assert_eq!(hamming_pack_lower(e(3.0), e(3.0), 4, 1).unwrap().m, None);
        let none = hamming_pack_lower(e(1.0), e(2.0), 3, 1).unwrap();
        assert_eq!(none.value, 0.0);
        assert!(none.diagnostic.is_some());
        assert!(hamming_pack_lower(e(2.0), e(1.0), 8, 1).is_err());
    }

    #[test]
    fn hamming_nonincreasing_in_k() {
        let mut prev = f64::INFINITY;
        for k in 1..40 {
            let v = hamming_pack_lower(e(1.0), e(2.0), 64, k).unwrap().value;
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn regime_examples() {
        for k in 1..=8 {
            let env = regime_envelope(e(1.5), e(1.5), 4, k, Field::Complex).unwrap();
            assert_relative_eq!(env.value, 1.0, epsilon = 1e-14);
        }
        let env = regime_envelope(Exponent::ONE, Exponent::INFINITY, 8, 4, Field::Complex).unwrap();
        assert_eq!(env.regime, Regime::MidK);
        assert_relative_eq!(env.value, 5f64.log2() / 4.0, max_relative = 1e-12);
        assert!((env.value - 0.5805).abs() < 1e-4);
        assert!(!env.constants_known);
        assert!(regime_envelope(e(2.0), e(1.0), 4, 1, Field::Real).is_err());
    }

    #[test]
    fn boundary_ratio_is_two() {
        let (p, q) = (e(1.0), e(4.0));
        let n = 16.0;
        let big_n = 2.0 * n;
        let mid = regime_piece(Regime::MidK, p, q, big_n, big_n);
        let large = regime_piece(Regime::LargeK, p, q, big_n, big_n);
        assert_relative_eq!(mid / large, 2.0, max_relative = 1e-12);
        assert_relative_eq!(mid, big_n.powf(q.recip() - p.recip()), max_relative = 1e-12);
    }

    #[test]
    fn rank_decay_examples() {
        let r = rank_decay_bounds(3, 1, 2.5, Field::Real).unwrap();
        assert_eq!((r.lower_shape, r.upper_shape), (1.0, 2.5));
        let r = rank_decay_bounds(1, 3, 1.0, Field::Real).unwrap();
        assert_relative_eq!(r.lower_shape, 0.25);
        assert_relative_eq!(r.upper_shape, 0.25);
        let r = rank_decay_bounds(2, 5, 1.0, Field::Complex).unwrap();
        assert_relative_eq!(r.upper_shape, 0.5);
    }

    #[test]
    fn fractional_index() {
        assert_eq!(dyadic_index(2.0).unwrap(), 2);
        assert_eq!(dyadic_index(2.3).unwrap(), 3);
        assert_eq!(dyadic_index(0.2).unwrap(), 1);
        assert!(dyadic_index(0.0).is_err());
    }
}
