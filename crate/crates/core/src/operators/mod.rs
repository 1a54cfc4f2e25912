//! Finite matrices viewed as operators `ℓ_p^n → ℓ_q^m`.

mod csv;
mod norm;

pub use csv::parse_matrix_csv;
pub use norm::{op_norm, op_norm_upper, NormMethod, OpNormResult};
pub(crate) use norm::{sup_on_ball, Ascent};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::linalg::{c, singular_values, CMatrix};
use crate::spaces::{Exponent, Field, SpaceSpec};

/// Default relative tolerance for [`numerical_rank`].
pub const RANK_TOL: f64 = 1e-10;

/// A matrix together with its domain `ℓ_p^n` and codomain `ℓ_q^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinOp {
    matrix: CMatrix,
    domain: SpaceSpec,
    codomain: SpaceSpec,
}

impl LinOp {
    pub fn with_specs(matrix: CMatrix, dom: SpaceSpec, codomain: SpaceSpec) -> Result<Self> {
        if matrix.ncols() != dom.n || matrix.nrows() != codomain.n {
            return domain(format!(
                "matrix is {}×{} but spaces have dimensions {} → {}",
                matrix.nrows(),
                matrix.ncols(),
                dom.n,
                codomain.n
            ));
        }
        if dom.field != codomain.field {
            return domain("domain and codomain must share the scalar field");
        }
        if dom.field == Field::Real && matrix.iter().any(|z| z.im != 0.0) {
            return domain("real operator has complex entries");
        }
        Ok(LinOp {
            matrix,
            domain: dom,
            codomain,
        })
    }

    /// Operator `ℓ_p^{cols} → ℓ_q^{rows}` with the given matrix.
    pub fn new(matrix: CMatrix, p: Exponent, q: Exponent, field: Field) -> Result<Self> {
        let domain = SpaceSpec::new(p, matrix.ncols(), field)?;
        let codomain = SpaceSpec::new(q, matrix.nrows(), field)?;
        LinOp::with_specs(matrix, domain, codomain)
    }

    /// Real operator from row-major data.
    pub fn from_real(rows: usize, cols: usize, data: &[f64], p: Exponent, q: Exponent) -> Result<Self> {
        if data.len() != rows * cols {
            return domain(format!("expected {} entries, got {}", rows * cols, data.len()));
        }
        let m = CMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j]));
        LinOp::new(m, p, q, Field::Real)
    }

    pub fn identity(n: usize, p: Exponent, q: Exponent, field: Field) -> Result<Self> {
        LinOp::new(CMatrix::identity(n, n), p, q, field)
    }

    pub fn zero(rows: usize, cols: usize, p: Exponent, q: Exponent, field: Field) -> Result<Self> {
        LinOp::new(CMatrix::zeros(rows, cols), p, q, field)
    }

    pub fn diagonal(values: &[Complex64], p: Exponent, q: Exponent, field: Field) -> Result<Self> {
        let n = values.len();
        LinOp::new(
            CMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { c(0.0) }),
            p,
            q,
            field,
        )
    }

    pub fn real_diagonal(values: &[f64], p: Exponent, q: Exponent) -> Result<Self> {
        let v: Vec<Complex64> = values.iter().map(|&x| c(x)).collect();
        LinOp::diagonal(&v, p, q, Field::Real)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn domain(&self) -> &SpaceSpec {
        &self.domain
    }

    pub fn codomain(&self) -> &SpaceSpec {
        &self.codomain
    }

    pub fn field(&self) -> Field {
        self.domain.field
    }

    pub fn p(&self) -> Exponent {
        self.domain.p
    }

    pub fn q(&self) -> Exponent {
        self.codomain.p
    }

    pub fn is_square(&self) -> bool {
        self.matrix.is_square()
    }

    pub fn is_hilbert(&self) -> bool {
        self.p() == Exponent::TWO && self.q() == Exponent::TWO
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .matrix
                .iter()
                .enumerate()
                .all(|(idx, z)| {
                    let (i, j) = (idx % self.matrix.nrows(), idx / self.matrix.nrows());
                    *z == if i == j { c(1.0) } else { c(0.0) }
                })
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.matrix.nrows())
            .map(|i| {
                x.iter()
                    .enumerate()
                    .map(|(j, v)| self.matrix[(i, j)] * v)
                    .sum()
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.matrix.column(j).iter().copied().collect()
    }

    pub fn scale(&self, s: Complex64) -> LinOp {
        LinOp {
            matrix: &self.matrix * s,
            ..self.clone()
        }
    }

    /// Same matrix between different exponents.
    pub fn with_exponents(&self, p: Exponent, q: Exponent) -> LinOp {
        let mut out = self.clone();
        out.domain.p = p;
        out.codomain.p = q;
        out
    }

    /// Same matrix with new contents (dimensions must agree).
    pub fn with_matrix(&self, matrix: CMatrix) -> Result<LinOp> {
        LinOp::with_specs(matrix, self.domain, self.codomain)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.matrix)
    }
}

/// Entrywise sum of two operators between the same spaces.
pub fn add(s: &LinOp, t: &LinOp) -> Result<LinOp> {
    if s.domain != t.domain || s.codomain != t.codomain {
        return domain("add: operators act between different spaces");
    }
    Ok(LinOp {
        matrix: &s.matrix + &t.matrix,
        domain: s.domain,
        codomain: s.codomain,
    })
}

/// `S ∘ T`, defined when the codomain of `T` is the domain of `S`.
pub fn compose(s: &LinOp, t: &LinOp) -> Result<LinOp> {
    if t.codomain != s.domain {
        return domain("compose: codomain of the inner operator differs from the outer domain");
    }
    Ok(LinOp {
        matrix: &s.matrix * &t.matrix,
        domain: t.domain,
        codomain: s.codomain,
    })
}

/// Number of singular values above `tol · σ_1`.
pub fn numerical_rank(t: &LinOp, tol: f64) -> usize {
    let s = t.singular_values();
    let Some(&top) = s.first() else {
        return 0;
    };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> Exponent {
        Exponent::TWO
    }

    #[test]
    fn construction_checks() {
        let m = CMatrix::zeros(2, 3);
        let bad = SpaceSpec::new(two(), 2, Field::Real).unwrap();
        let ok = SpaceSpec::new(two(), 3, Field::Real).unwrap();
        assert!(LinOp::with_specs(m.clone(), bad, bad).is_err());
        assert!(LinOp::with_specs(m.clone(), ok, bad).is_ok());
        let cplx = SpaceSpec::new(two(), 2, Field::Complex).unwrap();
        assert!(LinOp::with_specs(m, ok, cplx).is_err());
        let imag = CMatrix::from_element(1, 1, Complex64::new(0.0, 1.0));
        assert!(LinOp::new(imag, two(), two(), Field::Real).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(numerical_rank(&LinOp::zero(3, 3, two(), two(), Field::Real).unwrap(), RANK_TOL), 0);
        assert_eq!(numerical_rank(&LinOp::identity(5, two(), two(), Field::Real).unwrap(), RANK_TOL), 5);
        let u = [1.0, -2.0, 0.5, 3.0];
        let v = [0.3, 1.0, 1.0, -1.0];
        let data: Vec<f64> = u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        let t = LinOp::from_real(4, 4, &data, two(), two()).unwrap();
        assert_eq!(numerical_rank(&t, RANK_TOL), 1);
    }

    #[test]
    fn algebra() {
        let id = LinOp::identity(2, two(), two(), Field::Real).unwrap();
        let z = LinOp::zero(2, 2, two(), two(), Field::Real).unwrap();
        assert_eq!(add(&id, &z).unwrap(), id);
        assert_eq!(add(&id, &id).unwrap(), id.scale(c(2.0)));
        let s = LinOp::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0], two(), two()).unwrap();
        let t = LinOp::from_real(2, 2, &[0.5, -1.0, 2.0, 0.0], two(), two()).unwrap();
        let sum = add(&s, &t).unwrap();
        assert_eq!(sum, LinOp::from_real(2, 2, &[1.5, 1.0, 5.0, 4.0], two(), two()).unwrap());
        assert_eq!(compose(&id, &s).unwrap(), s);
        let a = LinOp::real_diagonal(&[2.0], two(), two()).unwrap();
        let b = LinOp::real_diagonal(&[3.0], two(), two()).unwrap();
        assert_eq!(compose(&a, &b).unwrap(), LinOp::real_diagonal(&[6.0], two(), two()).unwrap());
        let r23 = LinOp::from_real(2, 3, &[1.0, 0.0, 2.0, -1.0, 1.0, 0.0], two(), two()).unwrap();
        let r32 = LinOp::from_real(3, 2, &[1.0, 2.0, 0.0, 1.0, 1.0, 1.0], two(), two()).unwrap();
        let prod = compose(&r23, &r32).unwrap();
        assert_eq!(prod, LinOp::from_real(2, 2, &[3.0, 4.0, -1.0, -1.0], two(), two()).unwrap());
    }

    #[test]
    fn mismatched_algebra() {
        let a = LinOp::identity(2, two(), two(), Field::Real).unwrap();
        let b = LinOp::identity(2, Exponent::ONE, two(), Field::Real).unwrap();
        assert!(add(&a, &b).is_err());
        assert!(compose(&b, &a).is_err());
        let c3 = LinOp::identity(3, two(), two(), Field::Real).unwrap();
        assert!(compose(&c3, &a).is_err());
    }

    #[test]
    fn identity_detection() {
        assert!(LinOp::identity(3, two(), Exponent::ONE, Field::Real).unwrap().is_identity());
        assert!(!LinOp::real_diagonal(&[1.0, 2.0], two(), two()).unwrap().is_identity());
    }
}
