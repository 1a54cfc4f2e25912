//! Seeded random sampling in `ℓ_p^n` balls.
//!
//! All randomness in the crate flows through [`stream_rng`], so a result is a
//! pure function of `(seed, stream)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::spaces::{lp_norm, Exponent, Field};

pub type SeededRng = ChaCha8Rng;

/// Independent generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random unit-modulus scalar: `±1` over ℝ, `e^{iθ}` over ℂ.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Complex64 {
    match field {
        Field::Real => {
            if rng.random::<bool>() {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        }
        Field::Complex => Complex64::from_polar(1.0, rng.random::<f64>() * TAU),
    }
}

/// Standard Gaussian vector (circular over ℂ).
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            match field {
                Field::Real => Complex64::new(re, 0.0),
                Field::Complex => {
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                }
            }
        })
        .collect()
}

/// Draw with density proportional to `exp(−‖y‖_p^p)` (uniform cube/polydisc at `p = ∞`).
fn generalized_gaussian<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    p: Exponent,
    field: Field,
) -> Vec<Complex64> {
    if p.is_infinite() {
        return (0..n)
            .map(|_| match field {
                Field::Real => Complex64::new(rng.random_range(-1.0..=1.0), 0.0),
                Field::Complex => {
                    Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random::<f64>() * TAU)
                }
            })
            .collect();
    }
    let shape = field.real_dim() as f64 / p.value();
    let gamma = Gamma::new(shape, 1.0).expect("positive gamma shape");
    (0..n)
        .map(|_| {
            let g: f64 = gamma.sample(rng);
            random_phase(rng, field) * g.powf(p.recip())
        })
        .collect()
}

/// Point on the unit sphere `‖x‖_p = 1`.
pub fn sample_sphere<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    p: Exponent,
    field: Field,
) -> Vec<Complex64> {
    if p.is_infinite() {
        let mut x = generalized_gaussian(rng, n, p, field);
        let j = rng.random_range(0..n);
        x[j] = random_phase(rng, field);
        return x;
    }
    loop {
        let y = generalized_gaussian(rng, n, p, field);
        let norm = lp_norm(&y, p);
        if norm > 0.0 {
            return y.into_iter().map(|v| v / norm).collect();
        }
    }
}

/// Uniformly distributed point of the closed unit ball of `ℓ_p^n`.
///
/// Uses the representation `Y / (‖Y‖_p^p + E)^{1/p}` with `Y` generalized
/// Gaussian and `E` standard exponential.
pub fn sample_ball<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    p: Exponent,
    field: Field,
) -> Vec<Complex64> {
    let y = generalized_gaussian(rng, n, p, field);
    if p.is_infinite() {
        return y;
    }
    let e: f64 = Exp1.sample(rng);
    let pv = p.value();
    let s: f64 = y.iter().map(|v| v.norm().powf(pv)).sum::<f64>() + e;
    let scale = s.powf(-1.0 / pv);
    y.into_iter().map(|v| v * scale).collect()
}

/// Rescale `x` onto the unit sphere of `ℓ_p^n`; returns `None` for the zero vector.
pub fn normalize(x: &mut [Complex64], p: Exponent) -> Option<()> {
    let norm = lp_norm(x, p);
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    x.iter_mut().for_each(|v| *v /= norm);
    Some(())
}
