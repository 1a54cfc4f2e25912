//! Distance from a vector to a subspace, i.e. the quotient norm `‖[x]_U‖`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::{c, orthonormal_basis, project_out, subsets, CMatrix, CVector};
use crate::sampling::{gaussian_vector, stream_rng};
use crate::spaces::{lp_norm, Exponent, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMethod {
    /// `U = {0}`.
    Trivial,
    /// Orthogonal projection (`q = 2`).
    Projection,
    /// Enumeration of the vertices of the residual arrangement (real field, `q ≤ 1`).
    VertexEnumeration,
    /// Reweighted least squares plus pattern search (`q ≥ 1`, convex).
    Convex,
    /// Multi-start local search (`q < 1`), an upper approximation.
    MultiStart,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceDistance {
    pub value: f64,
    pub method: DistanceMethod,
    /// The value is the exact infimum up to rounding.
    pub exact: bool,
}

/// `inf_{u ∈ span(basis)} ‖x − u‖_q`.
///
/// `budget` bounds the number of objective evaluations spent by the search
/// phases; `seed` drives the random directions and restarts.
pub fn dist_to_subspace(
    x: &[Complex64],
    basis: &[Vec<Complex64>],
    q: Exponent,
    budget: usize,
    seed: u64,
) -> Result<SubspaceDistance> {
    let n = x.len();
    if n == 0 {
        return domain("vector must be nonempty");
    }
    if let Some(bad) = basis.iter().find(|b| b.len() != n) {
        return domain(format!(
            "basis vector of length {} does not match dimension {n}",
            bad.len()
        ));
    }
    let raw: Vec<CVector> = basis.iter().map(|b| CVector::from_column_slice(b)).collect();
    let ortho = orthonormal_basis(&raw, 1e-12);
    let xv = CVector::from_column_slice(x);
    let plain = lp_norm(x, q);
    if ortho.is_empty() {
        return Ok(SubspaceDistance {
            value: plain,
            method: DistanceMethod::Trivial,
            exact: true,
        });
    }
    let residual = project_out(&xv, &ortho);
    if q == Exponent::TWO {
        return Ok(SubspaceDistance {
            value: residual.norm(),
            method: DistanceMethod::Projection,
            exact: true,
        });
    }
    let real = x.iter().all(|v| v.im == 0.0) && basis.iter().flatten().all(|v| v.im == 0.0);
    let field = if real { Field::Real } else { Field::Complex };
    let problem = Problem::new(&residual, &ortho, q, field);
    let mut search = Search::new(&problem, budget.max(1), seed);

    // the zero vector of U is always admissible
    let to_zero: Vec<Complex64> = ortho.iter().map(|b| -b.dotc(&xv)).collect();
    search.offer(&to_zero);

    if q.value() <= 1.0 && real {
        let count = binomial(n, ortho.len());
        if count <= budget.max(64) as f64 {
            search.enumerate_vertices();
            return Ok(search.finish(plain, DistanceMethod::VertexEnumeration, true));
        }
    }
    search.reweighted();
    search.polish();
    if q.value() < 1.0 {
        search.restarts();
        return Ok(search.finish(plain, DistanceMethod::MultiStart, false));
    }
    Ok(search.finish(plain, DistanceMethod::Convex, false))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Minimize `‖r0 − B c‖_q` over coefficients `c`, with `B` orthonormal columns.
struct Problem {
    r0: CVector,
    basis: CMatrix,
    q: Exponent,
    field: Field,
    scale: f64,
}

impl Problem {
    fn new(r0: &CVector, ortho: &[CVector], q: Exponent, field: Field) -> Self {
        let basis = CMatrix::from_columns(ortho);
        let scale = r0.norm().max(f64::MIN_POSITIVE);
        Problem {
            r0: r0.clone(),
            basis,
            q,
            field,
            scale,
        }
    }

    fn dim(&self) -> usize {
        self.basis.ncols()
    }

    fn residual(&self, coeffs: &[Complex64]) -> CVector {
        let cv = CVector::from_column_slice(coeffs);
        &self.r0 - &self.basis * cv
    }

    fn value(&self, coeffs: &[Complex64]) -> f64 {
        lp_norm(self.residual(coeffs).as_slice(), self.q)
    }

    /// Weighted least squares `min Σ w_i |r0_i − (Bc)_i|²`.
    fn weighted_ls(&self, weights: &[f64]) -> Option<Vec<Complex64>> {
        let w = CMatrix::from_diagonal(&CVector::from_iterator(
            weights.len(),
            weights.iter().map(|&v| c(v)),
        ));
        let bh = self.basis.adjoint();
        let normal = &bh * &w * &self.basis;
        let rhs = &bh * &w * &self.r0;
        let sol = normal.lu().solve(&rhs)?;
        if sol.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Some(sol.iter().copied().collect())
        } else {
            None
        }
    }
}

struct Search<'a> {
    problem: &'a Problem,
    best: Vec<Complex64>,
    best_value: f64,
    evaluations: usize,
    budget: usize,
    seed: u64,
}

impl<'a> Search<'a> {
    fn new(problem: &'a Problem, budget: usize, seed: u64) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); problem.dim()];
        let best_value = problem.value(&zero);
        Search {
            problem,
            best: zero,
            best_value,
            evaluations: 1,
            budget,
            seed,
        }
    }

    fn offer(&mut self, coeffs: &[Complex64]) -> f64 {
        self.evaluations += 1;
        let v = self.problem.value(coeffs);
        if v < self.best_value {
            self.best_value = v;
            self.best = coeffs.to_vec();
        }
        v
    }

    fn enumerate_vertices(&mut self) {
        let p = self.problem;
        let r = p.dim();
        for rows in subsets(p.r0.len(), r) {
            let sub = CMatrix::from_fn(r, r, |i, j| p.basis[(rows[i], j)]);
            let rhs = CVector::from_iterator(r, rows.iter().map(|&i| p.r0[i]));
            if let Some(sol) = sub.lu().solve(&rhs) {
                if sol.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                    let coeffs: Vec<Complex64> = sol.iter().copied().collect();
                    // the interpolated rows vanish exactly; rounding there would
                    // be amplified by |·|^q for q < 1
                    let mut res = p.residual(&coeffs);
                    for &i in &rows {
                        res[i] = Complex64::new(0.0, 0.0);
                    }
                    self.evaluations += 1;
                    let v = lp_norm(res.as_slice(), p.q);
                    if v < self.best_value {
                        self.best_value = v;
                        self.best = coeffs;
                    }
                }
            }
        }
    }

    /// Iteratively reweighted least squares; Lawson updates for `q = ∞`.
    fn reweighted(&mut self) {
        let p = self.problem;
        let n = p.r0.len();
        let mut current = self.best.clone();
        let mut current_value = self.best_value;
        let mut eps = 1e-2 * p.scale;
        let mut lawson = vec![1.0 / n as f64; n];
        for _ in 0..100 {
            let res = p.residual(&current);
            let weights: Vec<f64> = if p.q.is_infinite() {
                let total: f64 = lawson
                    .iter()
                    .zip(res.iter())
                    .map(|(w, r)| w * r.norm())
                    .sum();
                if total <= 0.0 {
                    break;
                }
                lawson = lawson
                    .iter()
                    .zip(res.iter())
                    .map(|(w, r)| (w * r.norm() / total).max(1e-300))
                    .collect();
                lawson.clone()
            } else {
                let qv = p.q.value();
                res.iter()
                    .map(|r| r.norm().max(eps).powf(qv - 2.0))
                    .collect()
            };
            let Some(target) = p.weighted_ls(&weights) else {
                break;
            };
            // backtracking along the reweighted step
            let mut t = 1.0;
            let mut improved = false;
            for _ in 0..8 {
                let trial: Vec<Complex64> = current
                    .iter()
                    .zip(&target)
                    .map(|(a, b)| a + (b - a) * t)
                    .collect();
                let v = self.offer(&trial);
                if v < current_value || p.q.is_infinite() {
                    if v < current_value {
                        improved = true;
                    }
                    current = trial;
                    current_value = v;
                    break;
                }
                t *= 0.5;
            }
            eps = (eps * 0.5).max(1e-13 * p.scale);
            if !improved && eps <= 1e-13 * p.scale && !p.q.is_infinite() {
                break;
            }
        }
    }

    /// Pattern search around the incumbent with coordinate and random directions.
    fn polish(&mut self) {
        let limit = self.evaluations + self.budget;
        self.polish_from(self.best.clone(), 0.1 * self.problem.scale, limit, 0);
    }

    fn polish_from(&mut self, start: Vec<Complex64>, step0: f64, limit: usize, stream: u64) -> f64 {
        let p = self.problem;
        let r = p.dim();
        let mut rng = stream_rng(self.seed, 0x5eed_0000 + stream);
        let mut x = start;
        let mut fx = self.offer(&x);
        let mut step = step0;
        let floor = 1e-13 * p.scale;
        let units: Vec<Complex64> = match p.field {
            Field::Real => vec![c(1.0)],
            Field::Complex => vec![c(1.0), Complex64::new(0.0, 1.0)],
        };
        while step > floor && self.evaluations < limit {
            let mut moved = false;
            let mut directions: Vec<Vec<Complex64>> = Vec::new();
            for j in 0..r {
                for u in &units {
                    for sign in [1.0, -1.0] {
                        let mut d = vec![Complex64::new(0.0, 0.0); r];
                        d[j] = u * sign;
                        directions.push(d);
                    }
                }
            }
            for _ in 0..2 * r {
                let g = gaussian_vector(&mut rng, r, p.field);
                let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                directions.push(g.into_iter().map(|z| z / norm).collect());
            }
            for d in directions {
                if self.evaluations >= limit {
                    break;
                }
                let trial: Vec<Complex64> = x.iter().zip(&d).map(|(a, b)| a + b * step).collect();
                let v = self.offer(&trial);
                if v < fx {
                    x = trial;
                    fx = v;
                    moved = true;
                }
            }
            if moved {
                step *= 1.5;
            } else {
                step *= 0.5;
            }
        }
        fx
    }

    /// Random restarts for the non-convex range `q < 1`.
    fn restarts(&mut self) {
        let p = self.problem;
        let r = p.dim();
        let mut rng = stream_rng(self.seed, 0xa11_0000);
        let starts = 6;
        let share = (self.budget / (starts + 1)).max(16);
        for s in 0..starts {
            let spread = p.scale * rng.random_range(0.2..2.0);
            let start: Vec<Complex64> = gaussian_vector(&mut rng, r, p.field)
                .into_iter()
                .map(|z| z * spread)
                .collect();
            let limit = self.evaluations + share;
            self.polish_from(start, 0.1 * p.scale, limit, s as u64 + 1);
        }
        let limit = self.evaluations + share;
        self.polish_from(self.best.clone(), 1e-3 * p.scale, limit, 99);
    }

    fn finish(self, plain: f64, method: DistanceMethod, exact: bool) -> SubspaceDistance {
        SubspaceDistance {
            value: self.best_value.min(plain),
            method,
            exact,
        }
    }
}
