//! Eigenvalue sequences and the inequalities tying them to s-numbers and entropy numbers.

use serde::{Deserialize, Serialize};

use crate::entropy::BoundPair;
use crate::error::{domain, Error, Result};
use crate::linalg::{eigenvalues, ln_singular_values_of_power, scaled_power};
use crate::operators::LinOp;
use crate::spaces::Field;

/// `|λ_1| ≥ |λ_2| ≥ … ≥ |λ_n|`, repeated by algebraic multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSeq {
    pub moduli: Vec<f64>,
    /// Some trailing entries are zeros standing in for missing eigenvalues.
    pub padded: bool,
}

impl EigenSeq {
    /// `|λ_k|`, zero past the dimension. `k` starts at 1.
    pub fn get(&self, k: usize) -> f64 {
        self.moduli.get(k - 1).copied().unwrap_or(0.0)
    }
}

fn require_square(t: &LinOp) -> Result<()> {
    if !t.is_square() {
        let (r, c) = t.matrix().shape();
        return domain(format!("eigenvalues need a square operator, got {r}×{c}"));
    }
    Ok(())
}

fn require_hilbert(t: &LinOp) -> Result<()> {
    if !t.is_hilbert() {
        return domain(format!("needs p = q = 2, got p = {}, q = {}", t.p(), t.q()));
    }
    Ok(())
}

pub fn eigen_sequence(t: &LinOp) -> Result<EigenSeq> {
    require_square(t)?;
    let values = eigenvalues(t.matrix()).ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let mut moduli: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    let padded = moduli.iter().any(|&m| m == 0.0);
    Ok(EigenSeq { moduli, padded })
}

fn le_rel(lhs: f64, rhs: f64, tol: f64, scale: f64) -> bool {
    lhs <= rhs * (1.0 + tol) + tol * scale
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeylInequality {
    /// `∏_{i≤k} |λ_i| ≤ ∏_{i≤k} σ_i`.
    Product,
    /// `Σ_{i≤k} |λ_i|^p ≤ Σ_{i≤k} σ_i^p`.
    PowerSum { p: f64 },
    /// `∏|λ_i| = ∏σ_i = |det T|` at `k = n`.
    Determinant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylViolation {
    pub inequality: WeylInequality,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub checks: usize,
    pub violations: Vec<WeylViolation>,
    /// Relative spread of `∏|λ_i|`, `∏σ_i` and `|det T|`.
    pub determinant_gap: f64,
}

impl WeylReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn weyl_check(t: &LinOp, p_grid: &[f64]) -> Result<WeylReport> {
    weyl_check_with(t, p_grid, 1e-9, false)
}

/// [`weyl_check`] with an explicit relative tolerance. With `flip` set every
/// inequality is checked in the wrong direction, which must produce
/// violations on any instance that is not normal; it exists to test the
/// reporting path.
pub fn weyl_check_with(t: &LinOp, p_grid: &[f64], tol: f64, flip: bool) -> Result<WeylReport> {
    require_hilbert(t)?;
    require_square(t)?;
    if let Some(&p) = p_grid.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return domain(format!("power-sum exponent must be positive and finite, got {p}"));
    }
    let lambda = eigen_sequence(t)?.moduli;
    let sigma = t.singular_values();
    let n = lambda.len();
    let s1 = sigma.first().copied().unwrap_or(0.0);
    let mut report = WeylReport {
        checks: 0,
        violations: Vec::new(),
        determinant_gap: 0.0,
    };
    let mut check = |inequality: WeylInequality, k: usize, lhs: f64, rhs: f64, scale: f64| {
        let (lhs, rhs) = if flip { (rhs, lhs) } else { (lhs, rhs) };
        report.checks += 1;
        if !le_rel(lhs, rhs, tol, scale) {
            report.violations.push(WeylViolation { inequality, k, lhs, rhs });
        }
    };
    let (mut prod_l, mut prod_s) = (1.0, 1.0);
    for k in 1..=n {
        prod_l *= lambda[k - 1];
        prod_s *= sigma[k - 1];
        // rounding in the eigenvalues is relative to σ_1, not to the product
        check(WeylInequality::Product, k, prod_l, prod_s, f64::EPSILON * s1.powi(k as i32));
    }
    for &p in p_grid {
        let (mut sum_l, mut sum_s) = (0.0, 0.0);
        for k in 1..=n {
            sum_l += lambda[k - 1].powf(p);
            sum_s += sigma[k - 1].powf(p);
            check(WeylInequality::PowerSum { p }, k, sum_l, sum_s, f64::EPSILON * s1.powf(p));
        }
    }
    let det = t.matrix().determinant().norm();
    let top = prod_l.max(prod_s).max(det);
    let gap = if top == 0.0 {
        0.0
    } else {
        (prod_l.max(prod_s).max(det) - prod_l.min(prod_s).min(det)) / top
    };
    report.determinant_gap = gap;
    let floor = f64::EPSILON * s1.powi(n as i32);
    if !flip {
        report.checks += 1;
        if gap * top > tol * top + floor {
            report.violations.push(WeylViolation {
                inequality: WeylInequality::Determinant,
                k: n,
                lhs: prod_l,
                rhs: prod_s,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlRow {
    pub k: usize,
    /// `(∏_{m≤k} |λ_m|)^{1/k}`.
    pub geometric_mean: f64,
    /// `min_n 2^{n/2k} ê_n` over the supplied indices.
    pub carl_bound: f64,
    pub modulus: f64,
    /// `√2 ê_k`, when `ê_k` was supplied.
    pub corollary_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlReport {
    pub rows: Vec<CarlRow>,
    /// Indices `k` where one of the two inequalities fails.
    pub violations: Vec<usize>,
}

impl CarlReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `(∏_{m≤k}|λ_m|)^{1/k} ≤ inf_n 2^{n/2k} ê_n` and `|λ_k| ≤ √2 ê_k` for
/// `k ≤ k_max`, where `entropy_uppers[n − 1] = ê_n ≥ e_n`.
///
/// Complex field only: over ℝ the inequality is false already for `1×1`
/// operators, where `e_n = |λ| 2^{1−n}`.
pub fn carl_check(t: &LinOp, entropy_uppers: &[f64], k_max: usize) -> Result<CarlReport> {
    if t.field() != Field::Complex {
        return domain("the entropy/eigenvalue inequality holds for complex operators only");
    }
    let lambda = eigen_sequence(t)?;
    let mut report = CarlReport {
        rows: Vec::with_capacity(k_max),
        violations: Vec::new(),
    };
    let mut ln_prod = 0.0;
    for k in 1..=k_max {
        let modulus = lambda.get(k);
        ln_prod += modulus.ln();
        let geometric_mean = (ln_prod / k as f64).exp();
        let carl_bound = entropy_uppers
            .iter()
            .enumerate()
            .map(|(i, e)| 2f64.powf((i + 1) as f64 / (2 * k) as f64) * e)
            .fold(f64::INFINITY, f64::min);
        let corollary_bound = entropy_uppers.get(k - 1).map(|e| std::f64::consts::SQRT_2 * e);
        let ok = le_rel(geometric_mean, carl_bound, 1e-9, 0.0)
            && corollary_bound.is_none_or(|b| le_rel(modulus, b, 1e-9, 0.0));
        if !ok {
            report.violations.push(k);
        }
        report.rows.push(CarlRow {
            k,
            geometric_mean,
            carl_bound,
            modulus,
            corollary_bound,
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HilbertBracket {
    pub n: usize,
    /// `max_k 2^{−n/k} (σ_1⋯σ_k)^{1/k}`.
    pub g: f64,
    pub lower: f64,
    /// Upper bound plus its discretization margin.
    pub upper: f64,
    /// `G_n ≤ ê_n + δ`.
    pub upper_ok: bool,
    /// `ě_n ≤ 14 G_n`.
    pub lower_ok: bool,
}

/// `G_n` for a Hilbert operator; zero for the zero operator.
pub fn hilbert_g(t: &LinOp, n: usize) -> Result<f64> {
    require_hilbert(t)?;
    let sigma = t.singular_values();
    let mut ln_prod = 0.0;
    let mut g: f64 = 0.0;
    for (i, &s) in sigma.iter().enumerate() {
        if s <= 0.0 {
            break;
        }
        let k = (i + 1) as f64;
        ln_prod += s.ln();
        g = g.max((-(n as f64) / k * std::f64::consts::LN_2 + ln_prod / k).exp());
    }
    Ok(g)
}

pub fn hilbert_entropy_bracket(t: &LinOp, n: usize, bounds: &BoundPair) -> Result<HilbertBracket> {
    if n == 0 {
        return domain("entropy index starts at 1");
    }
    if !bounds.certified_lower {
        return domain("the lower bound must be certified");
    }
    let g = hilbert_g(t, n)?;
    let upper = bounds.upper_with_margin();
    Ok(HilbertBracket {
        n,
        g,
        lower: bounds.lower,
        upper,
        upper_ok: le_rel(g, upper, 1e-9, 0.0),
        lower_ok: le_rel(bounds.lower, 14.0 * g, 1e-9, 0.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadius {
    /// `‖T^m‖^{1/m}` at `m = max_power`.
    pub value: f64,
    /// `(m, ‖T^m‖^{1/m})` for `m = 1, 2, 4, …` up to `max_power`.
    pub schedule: Vec<(u32, f64)>,
    /// `|λ_1|`.
    pub top_modulus: f64,
}

fn root_of_power_norm(t: &LinOp, m: u32) -> f64 {
    let ln = scaled_power(t.matrix(), m).ln_spectral_norm();
    if ln == f64::NEG_INFINITY {
        0.0
    } else {
        (ln / m as f64).exp()
    }
}

/// `r(T) ≈ ‖T^m‖^{1/m}` with the `ℓ_2` operator norm; powers are kept in
/// scaled form so large `m` neither overflows nor underflows.
pub fn spectral_radius(t: &LinOp, max_power: u32) -> Result<SpectralRadius> {
    require_square(t)?;
    if max_power == 0 {
        return domain("max_power must be at least 1");
    }
    let mut schedule = Vec::new();
    let mut m = 1;
    while m < max_power {
        schedule.push((m, root_of_power_norm(t, m)));
        m *= 2;
    }
    let value = root_of_power_norm(t, max_power);
    schedule.push((max_power, value));
    Ok(SpectralRadius {
        value,
        schedule,
        top_modulus: eigen_sequence(t)?.get(1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KoenigRow {
    pub k: u32,
    /// `σ_n(T^k)^{1/k}`.
    pub value: f64,
    /// Relative distance to `|λ_n|`; absolute when `λ_n = 0`.
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSumFit {
    pub p: f64,
    /// Smallest `K_p` with `Σ|λ_i|^p ≤ K_p Σ σ_i^p` on this instance.
    pub k_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KoenigReport {
    pub index: usize,
    pub modulus: f64,
    pub rows: Vec<KoenigRow>,
    pub fits: Vec<PowerSumFit>,
}

/// `σ_n(T^k)^{1/k} → |λ_n|` along `k_schedule`, and the fitted constants of the
/// power-sum inequality for `p ∈ {1/2, 1, 2, 4}`.
pub fn koenig_limit_check(t: &LinOp, index: usize, k_schedule: &[u32]) -> Result<KoenigReport> {
    require_hilbert(t)?;
    let lambda = eigen_sequence(t)?;
    let dim = lambda.moduli.len();
    if index == 0 || index > dim {
        return domain(format!("index {index} outside 1..={dim}"));
    }
    if k_schedule.contains(&0) {
        return domain("powers must be at least 1");
    }
    let modulus = lambda.get(index);
    let rows = k_schedule
        .iter()
        .map(|&k| {
            let ln = ln_singular_values_of_power(t.matrix(), k)[index - 1];
            let value = if ln == f64::NEG_INFINITY { 0.0 } else { (ln / k as f64).exp() };
            let error = if modulus > 0.0 {
                (value - modulus).abs() / modulus
            } else {
                value
            };
            KoenigRow { k, value, error }
        })
        .collect();
    let sigma = t.singular_values();
    let fits = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&p| {
            let l: f64 = lambda.moduli.iter().map(|m| m.powf(p)).sum();
            let s: f64 = sigma.iter().map(|m| m.powf(p)).sum();
            PowerSumFit {
                p,
                k_p: if s == 0.0 { 0.0 } else { l / s },
            }
        })
        .collect();
    Ok(KoenigReport {
        index,
        modulus,
        rows,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::spaces::{Exponent, Field};
    use num_complex::Complex64;

    fn hilbert(rows: usize, data: &[f64]) -> LinOp {
        LinOp::from_real(rows, data.len() / rows, data, Exponent::TWO, Exponent::TWO).unwrap()
    }

    #[test]
    fn eigen_examples() {
        let d = LinOp::diagonal(
            &[c(1.0), c(-2.0), Complex64::new(0.0, 3.0)],
            Exponent::TWO,
            Exponent::TWO,
            Field::Complex,
        )
        .unwrap();
        assert_eq!(eigen_sequence(&d).unwrap().moduli, vec![3.0, 2.0, 1.0]);
        let nil = eigen_sequence(&hilbert(2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(nil.moduli, vec![0.0, 0.0]);
        assert!(nil.padded);
        let jordan = eigen_sequence(&hilbert(2, &[1.0, 1.0, 0.0, 1.0])).unwrap();
        assert!(jordan.moduli.iter().all(|m| (m - 1.0).abs() < 1e-12));
        assert!(eigen_sequence(&hilbert(1, &[1.0, 2.0])).is_err());
    }

    #[test]
    fn weyl_examples() {
        let r = weyl_check(&hilbert(2, &[2.0, 0.0, 0.0, 1.0]), &[0.5, 1.0, 2.0, 4.0]).unwrap();
        assert!(r.passed());
        assert!(r.determinant_gap < 1e-15);
        let jordan = hilbert(2, &[1.0, 1.0, 0.0, 1.0]);
        let r = weyl_check(&jordan, &[1.0]).unwrap();
        assert!(r.passed());
        assert!(r.determinant_gap < 1e-12);
        let flipped = weyl_check_with(&jordan, &[1.0], 1e-9, true).unwrap();
        let v = flipped.violations[0];
        assert_eq!((v.inequality, v.k), (WeylInequality::Product, 1));
        assert!((v.lhs - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn carl_examples() {
        let complex = |m: LinOp| LinOp::new(m.matrix().clone(), Exponent::TWO, Exponent::TWO, Field::Complex).unwrap();
        let real_id = hilbert(2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(carl_check(&real_id, &[1.0], 1).is_err());
        let id = complex(real_id);
        let r = carl_check(&id, &[1.0, 0.9, 0.8], 3).unwrap();
        assert!(r.passed());
        let zero = complex(hilbert(2, &[0.0; 4]));
        assert!(carl_check(&zero, &[0.0], 2).unwrap().passed());
        // an "upper bound" below the truth is caught
        let r = carl_check(&id, &[0.5], 1).unwrap();
        assert_eq!(r.violations, vec![1]);
    }

    #[test]
    fn g_examples() {
        let g = hilbert_g(&hilbert(2, &[1.0, 0.0, 0.0, 1.0]), 1).unwrap();
        assert!((g - 0.5f64.sqrt()).abs() < 1e-15);
        let g = hilbert_g(&hilbert(2, &[4.0, 0.0, 0.0, 1.0]), 2).unwrap();
        assert!((g - 1.0).abs() < 1e-15);
        assert_eq!(hilbert_g(&hilbert(2, &[0.0; 4]), 3).unwrap(), 0.0);
    }

    #[test]
    fn radius_examples() {
        let d = spectral_radius(&hilbert(3, &[3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0]), 16).unwrap();
        assert!(d.schedule.iter().all(|&(_, v)| (v - 3.0).abs() < 1e-12));
        let nil = spectral_radius(&hilbert(2, &[0.0, 1.0, 0.0, 0.0]), 2).unwrap();
        assert_eq!(nil.value, 0.0);
        // ‖J^m‖ = (m + √(m² + 4))/2 for the 2×2 Jordan block
        let jordan = spectral_radius(&hilbert(2, &[1.0, 1.0, 0.0, 1.0]), 64).unwrap();
        let exact = ((64.0 + (64f64 * 64.0 + 4.0).sqrt()) / 2.0).powf(1.0 / 64.0);
        assert!((jordan.value - exact).abs() < 1e-12);
        assert_eq!(jordan.schedule.len(), 7);
        assert!(jordan.schedule.windows(2).all(|w| w[1].1 <= w[0].1));
        let jordan = spectral_radius(&hilbert(2, &[1.0, 1.0, 0.0, 1.0]), 128).unwrap();
        assert!((jordan.value - 1.0).abs() < 0.05);
    }

    #[test]
    fn koenig_examples() {
        let d = hilbert(3, &[3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0]);
        let r = koenig_limit_check(&d, 2, &[1, 2, 7, 64]).unwrap();
        assert!(r.rows.iter().all(|row| row.error < 1e-12));
        let t = hilbert(2, &[2.0, 1.0, 0.0, 1.0]);
        for (index, target) in [(1, 2.0), (2, 1.0)] {
            let r = koenig_limit_check(&t, index, &[64]).unwrap();
            assert!((r.rows[0].value - target).abs() < 0.02 * target);
        }
        let r = koenig_limit_check(&t, 1, &[1]).unwrap();
        assert!(r.fits.iter().all(|f| f.k_p.is_finite() && f.k_p <= 1.0 + 1e-12));
    }
}
