//! Point clouds in `T(B_X)` and the greedy covering / packing routines on them.

use num_complex::Complex64;

use crate::operators::LinOp;
use crate::sampling::{sample_ball, sample_sphere, stream_rng};
use crate::spaces::{Exponent, Field};

/// Distance raised to a monotone power: `Σ|a−b|^q` for finite `q`, `max|a−b|` at `∞`.
/// Comparisons happen in this scale; [`Metric::finish`] converts back.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Metric {
    q: Exponent,
}

impl Metric {
    pub fn new(q: Exponent) -> Self {
        Metric { q }
    }

    pub fn raw(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        let q = self.q;
        if q.is_infinite() {
            a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
        } else if q.value() == 2.0 {
            a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
        } else if q.value() == 1.0 {
            a.iter().zip(b).map(|(x, y)| (x - y).norm()).sum()
        } else {
            let qv = q.value();
            a.iter().zip(b).map(|(x, y)| (x - y).norm().powf(qv)).sum()
        }
    }

    pub fn finish(&self, raw: f64) -> f64 {
        if self.q.is_infinite() {
            raw
        } else {
            raw.powf(1.0 / self.q.value())
        }
    }

    #[cfg(test)]
    pub fn dist(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        self.finish(self.raw(a, b))
    }
}

/// `±T e_j`, and `±i T e_j` over ℂ. All lie in `T(B_X)` for every `p`.
pub(crate) fn signed_columns(t: &LinOp) -> Vec<Vec<Complex64>> {
    let phases: &[Complex64] = match t.field() {
        Field::Real => &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        Field::Complex => &[
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ],
    };
    let mut out = Vec::new();
    for j in 0..t.domain().n {
        let col = t.column(j);
        for &ph in phases {
            out.push(col.iter().map(|z| z * ph).collect());
        }
    }
    out
}

/// At least `size` points of `T(B_X)`: the signed columns first, then images of
/// sphere and ball samples in alternation, each together with its negative.
pub(crate) fn image_cloud(t: &LinOp, size: usize, seed: u64, stream: u64) -> Vec<Vec<Complex64>> {
    let mut cloud = signed_columns(t);
    let mut rng = stream_rng(seed, stream);
    let (n, p, field) = (t.domain().n, t.p(), t.field());
    let mut i = 0usize;
    while cloud.len() < size {
        let x = if i % 2 == 0 {
            sample_sphere(&mut rng, n, p, field)
        } else {
            sample_ball(&mut rng, n, p, field)
        };
        let y = t.apply(&x);
        cloud.push(y.iter().map(|z| -z).collect());
        cloud.push(y);
        i += 1;
    }
    cloud
}

/// Point minimizing the largest distance to an evenly strided subsample.
fn central_point(points: &[Vec<Complex64>], metric: Metric) -> usize {
    let stride = (points.len() / 64).max(1);
    let sub: Vec<&Vec<Complex64>> = points.iter().step_by(stride).collect();
    let mut best = (f64::INFINITY, 0);
    for (i, x) in points.iter().enumerate() {
        let worst = sub.iter().map(|y| metric.raw(x, y)).fold(0.0, f64::max);
        if worst < best.0 {
            best = (worst, i);
        }
    }
    best.1
}

/// Farthest-first traversal from `start`. Entry `j` of the radii is the distance
/// of the `(j+2)`-th chosen point to the first `j+1`; it is simultaneously the
/// covering radius of the cloud by the first `j+1` points and the minimal
/// pairwise separation of the first `j+2` points. The second vector lists the
/// chosen points in order, `start` first.
pub(crate) fn farthest_first(
    points: &[Vec<Complex64>],
    metric: Metric,
    start: usize,
    max_centers: usize,
) -> (Vec<f64>, Vec<usize>) {
    let mut nearest: Vec<f64> = points.iter().map(|x| metric.raw(x, &points[start])).collect();
    let mut radii = Vec::with_capacity(max_centers);
    let mut order = vec![start];
    for _ in 0..max_centers {
        // ties go to the lowest index
        let (far, r) = nearest
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        let r = metric.finish(r.max(0.0));
        radii.push(r);
        if r == 0.0 {
            // every further center adds nothing
            radii.resize(max_centers, 0.0);
            break;
        }
        order.push(far);
        let center = points[far].clone();
        for (d, x) in nearest.iter_mut().zip(points) {
            let v = metric.raw(x, &center);
            if v < *d {
                *d = v;
            }
        }
    }
    (radii, order)
}

/// Alternate between assigning points to their nearest center and moving every
/// center to the member of its cluster with the smallest largest distance to
/// the cluster. Neither step increases the covering radius; returns the final
/// radius in raw scale.
fn refine_centers(points: &[Vec<Complex64>], metric: Metric, mut centers: Vec<usize>) -> f64 {
    let assign = |centers: &[usize]| -> (Vec<usize>, f64) {
        let mut radius: f64 = 0.0;
        let owner = points
            .iter()
            .map(|x| {
                let (best, d) = centers
                    .iter()
                    .enumerate()
                    .map(|(c, &i)| (c, metric.raw(x, &points[i])))
                    .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
                radius = radius.max(d);
                best
            })
            .collect();
        (owner, radius)
    };
    let (mut owner, mut radius) = assign(&centers);
    for _ in 0..50 {
        let mut clusters = vec![Vec::new(); centers.len()];
        for (i, &c) in owner.iter().enumerate() {
            clusters[c].push(i);
        }
        for (c, members) in clusters.iter().enumerate() {
            let mut best = (f64::INFINITY, centers[c]);
            for &cand in members {
                let mut worst: f64 = 0.0;
                for &m in members {
                    worst = worst.max(metric.raw(&points[cand], &points[m]));
                    if worst >= best.0 {
                        break;
                    }
                }
                if worst < best.0 {
                    best = (worst, cand);
                }
            }
            centers[c] = best.1;
        }
        let (next_owner, next_radius) = assign(&centers);
        if next_radius >= radius {
            break;
        }
        owner = next_owner;
        radius = next_radius;
    }
    radius
}

/// Covering radii of the cloud with `2^0, 2^1, …, 2^{levels−1}` centers: a
/// farthest-first prefix from the approximate Chebyshev center, improved by
/// [`refine_centers`]. Nonincreasing, since adding centers never hurts.
///
/// The second vector holds the plain farthest-first radii, which are also the
/// separations of the first `2^j + 1` traversal points.
pub(crate) fn greedy_cover_radii(points: &[Vec<Complex64>], metric: Metric, levels: usize) -> (Vec<f64>, Vec<f64>) {
    if levels == 0 {
        return (Vec::new(), Vec::new());
    }
    let start = central_point(points, metric);
    let max_centers = 1usize << (levels - 1);
    let (radii, order) = farthest_first(points, metric, start, max_centers);
    let mut out: Vec<f64> = Vec::with_capacity(levels);
    let mut seps = Vec::with_capacity(levels);
    for level in 0..levels {
        let count = 1usize << level;
        let greedy = radii[count - 1];
        seps.push(greedy);
        let refined = if count < order.len() && greedy > 0.0 {
            metric.finish(refine_centers(points, metric, order[..count].to_vec()))
        } else {
            greedy
        };
        let r = greedy.min(refined);
        out.push(out.last().map_or(r, |&prev: &f64| prev.min(r)));
    }
    (out, seps)
}

/// Separations of a farthest-first packing grown from the point of largest norm:
/// entry `j` is the minimal pairwise distance among the first `j+2` points.
pub(crate) fn greedy_pack_separations(points: &[Vec<Complex64>], metric: Metric, max_points: usize) -> Vec<f64> {
    let zero = vec![Complex64::new(0.0, 0.0); points.first().map_or(0, |p| p.len())];
    let start = points
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, x)| {
            let v = metric.raw(x, &zero);
            if v > acc.1 {
                (i, v)
            } else {
                acc
            }
        })
        .0;
    let (mut seps, _) = farthest_first(points, metric, start, max_points.saturating_sub(1));
    // the separation of the first j+2 points is the running minimum
    for j in 1..seps.len() {
        seps[j] = seps[j].min(seps[j - 1]);
    }
    seps
}

/// Largest nearest-neighbour gap of the cloud.
pub(crate) fn discretization_margin(points: &[Vec<Complex64>], metric: Metric) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let mut nearest = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = metric.raw(&points[i], &points[j]);
            if d < nearest[i] {
                nearest[i] = d;
            }
            if d < nearest[j] {
                nearest[j] = d;
            }
        }
    }
    metric.finish(nearest.into_iter().fold(0.0, f64::max))
}
