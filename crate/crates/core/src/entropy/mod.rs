//! Bounds for the dyadic entropy numbers
//! `e_k(T) = inf{ε : T(B_X) is covered by 2^{k−1} balls of radius ε in Y}`.
//!
//! Lower bounds (packing, volume, sign vectors, Hamming blocks) are certified.
//! Covering upper bounds are relative to a sampled cloud of `T(B_X)` and come
//! with the cloud's discretization margin `δ`; the trivial bound `‖T‖` is
//! certified and used whenever it is smaller.

mod closed;
mod cover;

pub use closed::{
    dyadic_index, entropy_lower_volumetric, entropy_lower_volumetric_op, hamming_block, hamming_pack_lower,
    rank_decay_bounds, regime_envelope, regime_piece, Envelope, HammingBlock, HammingBound, RankDecay, Regime,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::operators::{op_norm_upper, LinOp};
use crate::spaces::Exponent;
use cover::{discretization_margin, greedy_cover_radii, greedy_pack_separations, image_cloud, signed_columns, Metric};

const COVER_STREAM: u64 = 0xe0;
const PACK_STREAM: u64 = 0xe1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    Packing,
    Volumetric,
    SignVectors,
    Hamming,
    GreedyCover,
    NormBound,
}

impl BoundMethod {
    pub fn label(self) -> &'static str {
        match self {
            BoundMethod::Packing => "packing",
            BoundMethod::Volumetric => "volumetric",
            BoundMethod::SignVectors => "sign-vectors",
            BoundMethod::Hamming => "hamming",
            BoundMethod::GreedyCover => "greedy-cover",
            BoundMethod::NormBound => "norm-bound",
        }
    }
}

/// Lower and upper bound for one entropy number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub k: usize,
    pub lower: f64,
    /// `None` when no upper bound was computed.
    pub upper: Option<f64>,
    pub method_lower: Option<BoundMethod>,
    pub method_upper: Option<BoundMethod>,
    pub certified_lower: bool,
    pub certified_upper: bool,
    /// Discretization margin of the cloud behind a sampled upper bound.
    pub delta: f64,
}

impl BoundPair {
    fn lower_only(k: usize, lower: f64, method: Option<BoundMethod>) -> Self {
        BoundPair {
            k,
            lower,
            upper: None,
            method_lower: method,
            method_upper: None,
            certified_lower: true,
            certified_upper: false,
            delta: 0.0,
        }
    }

    /// `upper + δ`, the value certified lower bounds are compared against.
    pub fn upper_with_margin(&self) -> f64 {
        self.upper.map_or(f64::INFINITY, |u| u + self.delta)
    }
}

/// Separation `s` of more than `2^{k−1}` points forces some ball to hold two of them:
/// `ε ≥ s/2`, or `ε ≥ s/2^{1/q}` from the `q`-triangle inequality when `q < 1`.
/// Shaved by a few ulps since sampled points may sit a rounding error outside the ball.
fn separation_bound(s: f64, q: Exponent) -> f64 {
    let shave = 1.0 - 8.0 * f64::EPSILON;
    if q.value() < 1.0 {
        s / 2f64.powf(q.recip()) * shave
    } else {
        s / 2.0 * shave
    }
}

fn centers(k: usize) -> Result<usize> {
    if k == 0 {
        return domain("entropy index starts at 1");
    }
    if k > 40 {
        return domain(format!("k = {k} needs more than 2^39 centers"));
    }
    Ok(1usize << (k - 1))
}

/// Greedy covering radii for `k = 1..=k_max` on one cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSequence {
    /// `radii[k−1]` uses `2^{k−1}` centers.
    pub radii: Vec<f64>,
    /// Minimal pairwise distance of the first `2^{k−1} + 1` farthest-first points.
    pub separations: Vec<f64>,
    pub delta: f64,
}

/// Sample `cloud` points of `T(B_X)` once and cover them greedily with up to
/// `2^{k_max−1}` centers.
pub fn entropy_cover_sequence(t: &LinOp, k_max: usize, cloud: usize, seed: u64) -> Result<CoverSequence> {
    let max_centers = centers(k_max)?;
    if cloud < max_centers {
        return domain(format!("cloud of {cloud} points cannot host {max_centers} centers"));
    }
    let points = image_cloud(t, cloud, seed, COVER_STREAM);
    let metric = Metric::new(t.q());
    let (radii, separations) = greedy_cover_radii(&points, metric, k_max);
    Ok(CoverSequence {
        radii,
        separations,
        delta: discretization_margin(&points, metric),
    })
}

/// `2^{k−1}`-center covering radius of a sampled cloud of `T(B_X)`: greedy
/// seeding followed by minimax refinement.
pub fn entropy_upper_cover(t: &LinOp, k: usize, cloud: usize, seed: u64) -> Result<BoundPair> {
    let seq = entropy_cover_sequence(t, k, cloud, seed)?;
    Ok(BoundPair {
        k,
        lower: 0.0,
        upper: Some(seq.radii[k - 1]),
        method_lower: None,
        method_upper: Some(BoundMethod::GreedyCover),
        certified_lower: true,
        certified_upper: false,
        delta: seq.delta,
    })
}

fn pack_bounds(points: &[Vec<num_complex::Complex64>], q: Exponent, k_max: usize) -> Vec<f64> {
    let metric = Metric::new(q);
    let max_points = (1usize << (k_max - 1)) + 1;
    if points.len() < 2 {
        return vec![0.0; k_max];
    }
    let seps = greedy_pack_separations(points, metric, max_points.min(points.len()));
    (1..=k_max)
        .map(|k| {
            let need = (1usize << (k - 1)) + 1;
            seps.get(need - 2).map_or(0.0, |&s| separation_bound(s, q))
        })
        .collect()
}

/// Farthest-first packing of points of `T(B_X)`; returns the best certified
/// lower bound for `k` together with its source.
fn pack_lower_sequence(t: &LinOp, k_max: usize, budget: usize, seed: u64) -> Vec<(f64, Option<BoundMethod>)> {
    let q = t.q();
    let signs = pack_bounds(&signed_columns(t), q, k_max);
    let cloud = pack_bounds(&image_cloud(t, budget, seed, PACK_STREAM), q, k_max);
    signs
        .into_iter()
        .zip(cloud)
        .map(|(s, c)| {
            if s == 0.0 && c == 0.0 {
                (0.0, None)
            } else if s >= c {
                (s, Some(BoundMethod::SignVectors))
            } else {
                (c, Some(BoundMethod::Packing))
            }
        })
        .collect()
}

/// Certified packing lower bound for `e_k(T)`, `0` when no packing exceeds `2^{k−1}` points.
pub fn entropy_lower_pack(t: &LinOp, k: usize, budget: usize, seed: u64) -> Result<BoundPair> {
    centers(k)?;
    let (value, method) = pack_lower_sequence(t, k, budget, seed)[k - 1];
    Ok(BoundPair::lower_only(k, value, method))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntropyOptions {
    /// Cloud size for the covering upper bounds.
    pub cloud: usize,
    /// Cloud size for the packing lower bounds.
    pub budget: usize,
    pub seed: u64,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        EntropyOptions {
            cloud: 2000,
            budget: 2000,
            seed: 0,
        }
    }
}

/// All available bounds for `e_1, …, e_{k_max}`, merged into monotone sequences:
/// each lower bound is the best certified bound at that index or any later one,
/// each upper bound the best at that index or any earlier one.
pub fn entropy_bounds(t: &LinOp, k_max: usize, opts: EntropyOptions) -> Result<Vec<BoundPair>> {
    let max_centers = centers(k_max)?;
    let cover = entropy_cover_sequence(t, k_max, opts.cloud.max(max_centers), opts.seed)?;
    let packs = pack_lower_sequence(t, k_max, opts.budget, opts.seed);
    let norm_bound = op_norm_upper(t);
    let (p, q, field) = (t.p(), t.q(), t.field());
    let hamming_ok = t.is_identity() && p <= q;

    let mut pairs = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut lower = packs[k - 1];
        // the farthest-first points are themselves a certified packing
        let s = separation_bound(cover.separations[k - 1], q);
        if s > lower.0 {
            lower = (s, Some(BoundMethod::Packing));
        }
        if t.is_square() {
            let v = entropy_lower_volumetric_op(t.matrix(), p, q, k, field)?;
            if v > lower.0 {
                lower = (v, Some(BoundMethod::Volumetric));
            }
        }
        if hamming_ok {
            let h = hamming_pack_lower(p, q, t.domain().n, k)?.value;
            if h > lower.0 {
                lower = (h, Some(BoundMethod::Hamming));
            }
        }
        let sampled = cover.radii[k - 1];
        let (upper, method_upper, certified_upper) = if norm_bound <= sampled {
            (norm_bound, BoundMethod::NormBound, true)
        } else {
            (sampled, BoundMethod::GreedyCover, false)
        };
        pairs.push(BoundPair {
            k,
            lower: lower.0,
            upper: Some(upper),
            method_lower: lower.1,
            method_upper: Some(method_upper),
            certified_lower: true,
            certified_upper,
            delta: if certified_upper { 0.0 } else { cover.delta },
        });
    }
    for k in (0..k_max.saturating_sub(1)).rev() {
        if pairs[k + 1].lower > pairs[k].lower {
            pairs[k].lower = pairs[k + 1].lower;
            pairs[k].method_lower = pairs[k + 1].method_lower;
        }
    }
    for k in 1..k_max {
        if pairs[k - 1].upper < pairs[k].upper {
            let prev = pairs[k - 1];
            pairs[k].upper = prev.upper;
            pairs[k].method_upper = prev.method_upper;
            pairs[k].certified_upper = prev.certified_upper;
            pairs[k].delta = prev.delta;
        }
    }
    Ok(pairs)
}
