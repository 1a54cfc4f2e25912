//! The Aoki–Rolewicz `ρ`-norm
//! `‖x‖_0 = inf { (Σ‖f_i‖^ρ)^{1/ρ} : x = f_1 + … + f_m }` with `ρ = ln 2 / ln(2C)`.
//!
//! The infimum ranges over all finite decompositions and cannot be computed
//! exactly; we search a bounded family (trivial, coordinate partitions, random
//! signed splits, refined recursively) and report the best decomposition found.
//! Because the trivial decomposition is always in the pool the estimate never
//! exceeds `‖x‖`, and the theorem's sandwich `‖x‖/C_0² ≤ ‖x‖_0` bounds it below.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{domain, Result};
use crate::sampling::{gaussian_vector, stream_rng, SeededRng};
use crate::spaces::{lp_norm, quasi_constant, Exponent, Field, QuasiNormInfo};

/// Search limits for the decomposition search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AokiSearch {
    /// Recursion depth; at most `2^depth` parts.
    pub depth: usize,
    /// Random signed splits tried per node.
    pub trials: usize,
    pub seed: u64,
}

/// Best decomposition found for one vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AokiEstimate {
    pub value: f64,
    pub rho: f64,
    pub parts: Vec<Vec<Complex64>>,
}

impl AokiEstimate {
    /// `value^ρ = Σ‖f_i‖^ρ` over the stored parts.
    pub fn rho_power(&self) -> f64 {
        self.value.powf(self.rho)
    }
}

/// A quasi-norm together with its quasi-triangle constant.
pub struct RhoNorm<F> {
    norm: F,
    info: QuasiNormInfo,
}

impl<F: Fn(&[Complex64]) -> f64> RhoNorm<F> {
    pub fn new(norm: F, constant: f64) -> Result<Self> {
        if constant.is_nan() || constant < 1.0 {
            return domain(format!("quasi-norm constant must be ≥ 1, got {constant}"));
        }
        Ok(RhoNorm {
            norm,
            info: QuasiNormInfo::from_constant(constant),
        })
    }

    pub fn info(&self) -> QuasiNormInfo {
        self.info
    }

    pub fn estimate(&self, x: &[Complex64], search: AokiSearch) -> Result<AokiEstimate> {
        if search.depth == 0 {
            return domain("depth must be at least 1");
        }
        let mut rng = stream_rng(search.seed, 0xa0c1);
        let parts = self.best_parts(x, search.depth, search.trials, &mut rng);
        Ok(self.assemble(parts))
    }

    /// Estimate for `x + y`; the pool also contains the concatenation of the
    /// stored decompositions of `x` and `y`, so `ρ`-subadditivity holds.
    pub fn estimate_sum(
        &self,
        x: &AokiEstimate,
        y: &AokiEstimate,
        search: AokiSearch,
    ) -> Result<AokiEstimate> {
        let sum = sum_parts(&x.parts, &y.parts);
        let own = self.estimate(&sum, search)?;
        let concat = x.rho_power() + y.rho_power();
        if concat < own.rho_power() {
            let mut parts = x.parts.clone();
            parts.extend(y.parts.iter().cloned());
            return Ok(AokiEstimate {
                value: concat.powf(1.0 / self.info.rho),
                rho: self.info.rho,
                parts,
            });
        }
        Ok(own)
    }

    fn cost(&self, v: &[Complex64]) -> f64 {
        (self.norm)(v).powf(self.info.rho)
    }

    fn assemble(&self, parts: Vec<Vec<Complex64>>) -> AokiEstimate {
        let total: f64 = parts.iter().map(|f| self.cost(f)).sum();
        AokiEstimate {
            value: total.powf(1.0 / self.info.rho),
            rho: self.info.rho,
            parts,
        }
    }

    fn best_parts(
        &self,
        v: &[Complex64],
        depth: usize,
        trials: usize,
        rng: &mut SeededRng,
    ) -> Vec<Vec<Complex64>> {
        if v.iter().all(|z| z.norm() == 0.0) {
            return Vec::new();
        }
        let trivial = self.cost(v);
        let Some((a, b, split_cost)) = self.best_split(v, trials, rng) else {
            return vec![v.to_vec()];
        };
        if split_cost >= trivial {
            return vec![v.to_vec()];
        }
        if depth <= 1 {
            return vec![a, b];
        }
        let mut parts = self.best_parts(&a, depth - 1, trials, rng);
        parts.extend(self.best_parts(&b, depth - 1, trials, rng));
        let refined: f64 = parts.iter().map(|f| self.cost(f)).sum();
        if refined <= split_cost {
            parts
        } else {
            vec![a, b]
        }
    }

    fn best_split(
        &self,
        v: &[Complex64],
        trials: usize,
        rng: &mut SeededRng,
    ) -> Option<(Vec<Complex64>, Vec<Complex64>, f64)> {
        let n = v.len();
        let mut best: Option<(Vec<Complex64>, Vec<Complex64>, f64)> = None;
        let mut consider = |a: Vec<Complex64>, b: Vec<Complex64>| {
            let cost = self.cost(&a) + self.cost(&b);
            if best.as_ref().is_none_or(|(_, _, c)| cost < *c) {
                best = Some((a, b, cost));
            }
        };
        // coordinate partitions: all of them for small n, random ones otherwise
        let zero = Complex64::new(0.0, 0.0);
        let split_by = |mask: &dyn Fn(usize) -> bool| {
            let a: Vec<Complex64> = (0..n).map(|j| if mask(j) { v[j] } else { zero }).collect();
            let b: Vec<Complex64> = (0..n).map(|j| if mask(j) { zero } else { v[j] }).collect();
            (a, b)
        };
        if (2..=10).contains(&n) {
            for bits in 1u32..(1 << (n - 1)) {
                let (a, b) = split_by(&|j| (bits >> j) & 1 == 1);
                consider(a, b);
            }
        } else if n > 10 {
            for _ in 0..trials {
                let mask: Vec<bool> = (0..n).map(|_| rng.random()).collect();
                let (a, b) = split_by(&|j| mask[j]);
                consider(a, b);
            }
        }
        // random signed splits v = (v/2 + r) + (v/2 − r)
        let field = if v.iter().all(|z| z.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        };
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for _ in 0..trials {
            let amp = scale * rng.random_range(0.05..1.0);
            let r = gaussian_vector(rng, n, field);
            let a: Vec<Complex64> = v.iter().zip(&r).map(|(x, g)| x * 0.5 + g * amp).collect();
            let b: Vec<Complex64> = v.iter().zip(&a).map(|(x, y)| x - y).collect();
            consider(a, b);
        }
        best
    }
}

fn sum_parts(x: &[Vec<Complex64>], y: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = x.iter().chain(y).map(|f| f.len()).max().unwrap_or(0);
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    for f in x.iter().chain(y) {
        for (acc, v) in s.iter_mut().zip(f) {
            *acc += v;
        }
    }
    s
}

/// `ρ`-norm estimate for the `ℓ_p` quasi-norm, `0 < p < 1`.
pub fn aoki_norm(x: &[Complex64], p: Exponent, depth: usize, trials: usize, seed: u64) -> Result<AokiEstimate> {
    if p.value() >= 1.0 {
        return domain(format!("the ρ-norm is only needed for p < 1, got p = {p}"));
    }
    if x.is_empty() {
        return domain("vector must be nonempty");
    }
    let rho = RhoNorm::new(move |v: &[Complex64]| lp_norm(v, p), quasi_constant(p))?;
    let est = rho.estimate(x, AokiSearch { depth, trials, seed })?;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(data: &[f64]) -> Vec<Complex64> {
        data.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn search() -> AokiSearch {
        AokiSearch {
            depth: 3,
            trials: 16,
            seed: 5,
        }
    }

    #[test]
    fn banach_case_returns_the_norm() {
        let p = Exponent::new(1.5).unwrap();
        let rho = RhoNorm::new(move |v: &[Complex64]| lp_norm(v, p), 1.0).unwrap();
        assert_eq!(rho.info().rho, 1.0);
        let x = v(&[0.3, -1.2, 2.0]);
        let est = rho.estimate(&x, search()).unwrap();
        assert_relative_eq!(est.value, lp_norm(&x, p), epsilon = 1e-12);
    }

    #[test]
    fn sandwich_example() {
        let x = v(&[1.0, 1.0]);
        let half = Exponent::new(0.5).unwrap();
        let est = aoki_norm(&x, half, 3, 16, 1).unwrap();
        assert!(est.value <= 4.0 + 1e-12);
        assert!(est.value >= 0.25 - 1e-12);
    }

    #[test]
    fn unit_vector_is_not_improved() {
        let half = Exponent::new(0.5).unwrap();
        let est = aoki_norm(&v(&[1.0, 0.0]), half, 4, 64, 2).unwrap();
        assert_relative_eq!(est.value, 1.0, epsilon = 1e-12);
    }

    /// Exhaustive check of two-part axis-aligned splits of e_1 = (a, 0) + (1 − a, 0)
    /// under ρ = 1/2: (|a|^ρ + |1 − a|^ρ)^{1/ρ} ≥ 1 on a fine grid.
    #[test]
    fn axis_aligned_splits_never_beat_trivial() {
        let rho = 0.5;
        for i in -2000..=3000 {
            let a = i as f64 / 1000.0;
            let cost = (a.abs().powf(rho) + (1.0 - a).abs().powf(rho)).powf(1.0 / rho);
            assert!(cost >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn domain_errors() {
        let x = v(&[1.0]);
        assert!(aoki_norm(&x, Exponent::ONE, 2, 2, 0).is_err());
        assert!(aoki_norm(&x, Exponent::new(0.5).unwrap(), 0, 2, 0).is_err());
        assert!(RhoNorm::new(|_: &[Complex64]| 0.0, 0.9).is_err());
    }

    #[test]
    fn sum_estimate_is_subadditive() {
        let half = Exponent::new(0.5).unwrap();
        let rho = RhoNorm::new(move |v: &[Complex64]| lp_norm(v, half), quasi_constant(half)).unwrap();
        let x = rho.estimate(&v(&[1.0, -0.5, 0.2]), search()).unwrap();
        let y = rho.estimate(&v(&[-0.9, 0.4, 0.7]), search()).unwrap();
        let s = rho.estimate_sum(&x, &y, search()).unwrap();
        assert!(s.rho_power() <= x.rho_power() + y.rho_power() + 1e-9);
        let total = sum_parts(&s.parts, &[]);
        for (a, b) in total.iter().zip(v(&[0.1, -0.1, 0.9])) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    /// A quasi-norm that inflates one cone: decompositions must still respect the sandwich.
    #[test]
    fn custom_quasi_norm_sandwich() {
        let norm = |v: &[Complex64]| {
            let base = lp_norm(v, Exponent::TWO);
            if v.len() >= 2 && v[0].re * v[1].re > 0.0 {
                10.0 * base
            } else {
                base
            }
        };
        let rho = RhoNorm::new(norm, 10.0).unwrap();
        let c0 = rho.info().c0;
        for x in [v(&[1.0, 1.0]), v(&[1.0, -1.0]), v(&[0.2, 3.0])] {
            let est = rho.estimate(&x, search()).unwrap();
            assert!(est.value <= norm(&x) + 1e-12);
            assert!(est.value >= norm(&x) / (c0 * c0) - 1e-12);
        }
    }
}
