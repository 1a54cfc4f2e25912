//! Dense linear-algebra helpers over `ℂ` (real matrices embed with zero imaginary part).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::sampling::gaussian_vector;
use crate::spaces::Field;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Build a matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    assert_eq!(data.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j]))
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value (0 for an empty matrix).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Left singular vectors ordered by nonincreasing singular value.
pub fn left_singular_vectors(m: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = idx.iter().map(|&i| u.column(i).into_owned()).collect();
    (values, vectors)
}

/// Best rank-`r` approximation by SVD truncation.
pub fn svd_truncation(m: &CMatrix, r: usize) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for &i in idx.iter().take(r) {
        let s = c(svd.singular_values[i]);
        out += u.column(i) * v_t.row(i) * s;
    }
    out
}

/// Eigenvalues of a square matrix via the complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    assert!(m.is_square());
    if m.nrows() == 0 {
        return Some(Vec::new());
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-15, 10_000)?;
    schur.eigenvalues().map(|v| v.iter().copied().collect())
}

/// Orthonormal basis of the span of `vectors` (modified Gram–Schmidt, applied twice).
pub fn orthonormal_basis(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let scale = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut basis: Vec<CVector> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&w);
                w -= b * coeff;
            }
        }
        let norm = w.norm();
        if norm > tol * scale {
            basis.push(w / c(norm));
        }
    }
    basis
}

/// `y − P_U y` for an orthonormal basis of `U`.
pub fn project_out(y: &CVector, basis: &[CVector]) -> CVector {
    let mut r = y.clone();
    for _ in 0..2 {
        for b in basis {
            let coeff = b.dotc(&r);
            r -= b * coeff;
        }
    }
    r
}

/// Matrix of the orthogonal projection onto the complement of `span(basis)`.
pub fn complement_projector(dim: usize, basis: &[CVector]) -> CMatrix {
    let mut p = CMatrix::identity(dim, dim);
    for b in basis {
        p -= b * b.adjoint();
    }
    p
}

/// Random orthonormal frame of `r` vectors in `K^n`.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize, field: Field) -> Vec<CVector> {
    loop {
        let raw: Vec<CVector> = (0..r)
            .map(|_| CVector::from_vec(gaussian_vector(rng, n, field)))
            .collect();
        let basis = orthonormal_basis(&raw, 1e-10);
        if basis.len() == r {
            return basis;
        }
    }
}

/// Realification: the `2m × 2n` real matrix `[[Re, −Im], [Im, Re]]`.
pub fn realify(m: &CMatrix) -> CMatrix {
    let (rows, cols) = m.shape();
    CMatrix::from_fn(2 * rows, 2 * cols, |i, j| {
        let z = m[(i % rows, j % cols)];
        let v = match (i < rows, j < cols) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        };
        c(v)
    })
}

/// All `j`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(j);
    fn rec(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < j - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, j, cur, out);
            cur.pop();
        }
    }
    rec(0, n, j, &mut cur, &mut out);
    out
}

/// `j`-th compound matrix: all `j × j` minors. `σ_1(C_j(A)) = σ_1(A)⋯σ_j(A)`.
pub fn compound_matrix(m: &CMatrix, j: usize) -> CMatrix {
    let rows = subsets(m.nrows(), j);
    let cols = subsets(m.ncols(), j);
    CMatrix::from_fn(rows.len(), cols.len(), |a, b| {
        let minor = CMatrix::from_fn(j, j, |r, s| m[(rows[a][r], cols[b][s])]);
        minor.determinant()
    })
}

/// A matrix power kept as `exp(log_scale) · matrix` to avoid overflow.
#[derive(Debug, Clone)]
pub struct ScaledPower {
    pub matrix: CMatrix,
    pub log_scale: f64,
}

impl ScaledPower {
    fn identity(n: usize) -> Self {
        ScaledPower {
            matrix: CMatrix::identity(n, n),
            log_scale: 0.0,
        }
    }

    fn renormalize(mut self) -> Self {
        let norm = self.matrix.norm();
        if norm > 0.0 && norm.is_finite() {
            self.matrix /= c(norm);
            self.log_scale += norm.ln();
        }
        self
    }

    fn mul(&self, other: &ScaledPower) -> ScaledPower {
        ScaledPower {
            matrix: &self.matrix * &other.matrix,
            log_scale: self.log_scale + other.log_scale,
        }
        .renormalize()
    }

    /// `ln σ_1` of the represented matrix (`-∞` when it vanishes).
    pub fn ln_spectral_norm(&self) -> f64 {
        let s = spectral_norm(&self.matrix);
        if s == 0.0 {
            f64::NEG_INFINITY
        } else {
            s.ln() + self.log_scale
        }
    }
}

/// `M^k` by binary exponentiation with renormalization at every step.
pub fn scaled_power(m: &CMatrix, k: u32) -> ScaledPower {
    assert!(m.is_square());
    let mut result = ScaledPower::identity(m.nrows());
    let mut base = ScaledPower {
        matrix: m.clone(),
        log_scale: 0.0,
    }
    .renormalize();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

/// `ln σ_j(M^k)` for `j = 1..=n`, via compound matrices so that small singular
/// values of large powers keep their relative accuracy.
pub fn ln_singular_values_of_power(m: &CMatrix, k: u32) -> Vec<f64> {
    let n = m.nrows();
    let mut ln_prod = vec![0.0; n + 1];
    for j in 1..=n {
        let cj = compound_matrix(m, j);
        ln_prod[j] = scaled_power(&cj, k).ln_spectral_norm();
    }
    (1..=n)
        .map(|j| {
            if ln_prod[j] == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                ln_prod[j] - ln_prod[j - 1]
            }
        })
        .collect()
}
