use std::f64::consts::{LN_2, PI};

use super::{Field, SpaceSpec};

/// Natural logarithm of the Lebesgue volume of the closed unit ball of `space`.
///
/// Complex balls are measured in `ℝ^{2n}`:
/// `π^n Γ(1+2/p)^n / Γ(1+2n/p)`. Real balls use `2^n Γ(1+1/p)^n / Γ(1+n/p)`.
/// At `p = ∞` both reduce to the polydisc/cube values `π^n` and `2^n`.
pub fn ln_ball_volume(space: &SpaceSpec) -> f64 {
    let n = space.n as f64;
    let inv_p = space.p.recip();
    match space.field {
        Field::Real => {
            n * LN_2 + n * libm::lgamma(1.0 + inv_p) - libm::lgamma(1.0 + n * inv_p)
        }
        Field::Complex => {
            n * PI.ln() + n * libm::lgamma(1.0 + 2.0 * inv_p) - libm::lgamma(1.0 + 2.0 * n * inv_p)
        }
    }
}

pub fn ball_volume(space: &SpaceSpec) -> f64 {
    ln_ball_volume(space).exp()
}
