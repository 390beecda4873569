//! Dense complex matrices for the compact model.
//!
//! A morphism `f: X -> Y` is stored as a `|Y| x |X|` matrix, so diagrammatic
//! composition `f;g` is the product `G * F` (see [`ComplexMatrix::then`]).
//! Storage and the singular value decomposition come from `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("matrix is not idempotent (residual {0:e})")]
    NotIdempotent(f64),
    #[error("matrix is singular")]
    Singular,
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(pub DMatrix<C64>);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        ComplexMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Row-major real entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Self::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
    }

    /// Row-major complex entries.
    pub fn from_row_major(rows: usize, cols: usize, data: &[C64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Self::from_fn(rows, cols, |i, j| data[i * cols + j])
    }

    /// Column vector, read as a map out of the unit.
    pub fn column(data: &[C64]) -> Self {
        Self::from_row_major(data.len(), 1, data)
    }

    /// Row vector, read as a map into the unit.
    pub fn row(data: &[C64]) -> Self {
        Self::from_row_major(1, data.len(), data)
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.0[(i, j)] = c(1.0, 0.0);
        }
        m
    }

    /// The swap `X ⊗ Y -> Y ⊗ X` with left-major indexing.
    pub fn swap(dx: usize, dy: usize) -> Self {
        let perm: Vec<usize> = (0..dx * dy).map(|k| (k % dy) * dx + k / dy).collect();
        Self::permutation(&perm)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    /// Diagrammatic composition `self ; g`, i.e. `g * self`.
    pub fn then(&self, g: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.rows(),
            g.cols(),
            "cannot compose {}x{} with {}x{}",
            self.rows(),
            self.cols(),
            g.rows(),
            g.cols()
        );
        ComplexMatrix(&g.0 * &self.0)
    }

    pub fn try_then(&self, g: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
        if self.rows() != g.cols() {
            return Err(MatrixError::ShapeMismatch(self.rows(), self.cols(), g.rows(), g.cols()));
        }
        Ok(self.then(g))
    }

    /// Matrix product in the usual order.
    pub fn mul(&self, g: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &g.0)
    }

    /// Kronecker product, left factor major.
    pub fn kron(&self, g: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0.kronecker(&g.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.transpose())
    }

    pub fn conj(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.map(|z| z.conj()))
    }

    pub fn add(&self, g: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &g.0)
    }

    pub fn sub(&self, g: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &g.0)
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                v.push(self.0[(i, j)]);
            }
        }
        v
    }

    /// Sub-block with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.0[(rows[i], cols[j])])
    }

    pub fn inverse(&self) -> Result<ComplexMatrix, MatrixError> {
        if self.rows() != self.cols() {
            return Err(MatrixError::ShapeMismatch(
                self.rows(),
                self.cols(),
                self.cols(),
                self.rows(),
            ));
        }
        self.0
            .clone()
            .try_inverse()
            .map(ComplexMatrix)
            .ok_or(MatrixError::Singular)
    }

    /// Entries with real and imaginary parts uniform in `[-1, 1]`.
    pub fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
        Self::from_fn(rows, cols, |_, _| {
            c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
        })
    }

    /// A random matrix shifted by `n + 1` on the diagonal, which makes it
    /// strictly diagonally dominant and hence invertible.
    pub fn random_invertible(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        Self::random(n, n, rng).add(&Self::identity(n).scale(c(n as f64 + 1.0, 0.0)))
    }

    /// Random idempotent `S diag(1,..,1,0,..,0) S^-1` of the given rank.
    pub fn random_projector(n: usize, rank: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let s = Self::random_invertible(n, rng);
        let d = Self::from_fn(n, n, |i, j| if i == j && i < rank { c(1.0, 0.0) } else { c(0.0, 0.0) });
        s.mul(&d).mul(&s.inverse().expect("diagonally dominant"))
    }

    /// Full-rank factorization `self = C F` with orthonormal columns in `C`.
    /// The rank is the number of pivots of a column-pivoted QR whose modulus
    /// exceeds `tol` times the largest one.
    pub fn range_factor(&self, tol: f64) -> (ComplexMatrix, ComplexMatrix) {
        let (n, m) = (self.rows(), self.cols());
        if n == 0 || m == 0 {
            return (Self::zeros(n, 0), Self::zeros(0, m));
        }
        let qr = self.0.clone().col_piv_qr();
        let r = qr.r();
        let pivots: Vec<f64> = (0..n.min(m)).map(|i| r[(i, i)].norm()).collect();
        let top = pivots.first().copied().unwrap_or(0.0);
        let k = pivots.iter().take_while(|&&p| top > 0.0 && p > tol * top).count();
        let q = qr.q();
        let cmat = DMatrix::from_fn(n, k, |i, j| q[(i, j)]);
        let mut f = DMatrix::from_fn(k, m, |i, j| r[(i, j)]);
        qr.p().inv_permute_columns(&mut f);
        (ComplexMatrix(cmat), ComplexMatrix(f))
    }

    /// Moore-Penrose pseudo-inverse with relative cutoff `tol`.
    pub fn pseudo_inverse(&self, tol: f64) -> ComplexMatrix {
        let (cmat, f) = self.range_factor(tol);
        if f.rows() == 0 {
            return Self::zeros(self.cols(), self.rows());
        }
        let gram = f.mul(&f.adjoint()).inverse().expect("full row rank");
        f.adjoint().mul(&gram).mul(&cmat.adjoint())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MatrixJson::from(self)).expect("matrices always serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, MatrixError> {
        let j: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| MatrixError::Json(e.to_string()))?;
        j.try_into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().into_iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = MatrixError;
    fn try_from(j: MatrixJson) -> Result<Self, MatrixError> {
        if j.data.len() != j.rows * j.cols {
            return Err(MatrixError::Json(format!(
                "expected {} entries, found {}",
                j.rows * j.cols,
                j.data.len()
            )));
        }
        let data: Vec<C64> = j.data.iter().map(|p| c(p[0], p[1])).collect();
        let m = ComplexMatrix::from_row_major(j.rows, j.cols, &data);
        if !m.is_finite() {
            return Err(MatrixError::Json("entries must be finite".into()));
        }
        Ok(m)
    }
}

/// Max-abs residual and the verdict `residual <= tol * max(1, |a|, |b|)`.
pub fn matrices_equal(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<(bool, f64), MatrixError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(MatrixError::ShapeMismatch(a.rows(), a.cols(), b.rows(), b.cols()));
    }
    let residual = a.sub(b).max_abs();
    let scale = 1f64.max(a.max_abs()).max(b.max_abs());
    Ok((residual <= tol * scale, residual))
}

/// Max-abs residual of `a - b`; panics on shape mismatch.
pub fn residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    matrices_equal(a, b, 0.0).expect("shapes must agree").1
}

/// Splits an idempotent `E` (n x n) as `r: n -> k`, `s: k -> n` with
/// `S * R = E` and `R * S = I_k`.
///
/// The image of `E` is read off an SVD; singular values at or below
/// `tol * sigma_max` count as zero.
pub fn split_idempotent(e: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, ComplexMatrix), MatrixError> {
    let n = e.rows();
    if e.cols() != n {
        return Err(MatrixError::ShapeMismatch(e.rows(), e.cols(), n, n));
    }
    let scale = 1f64.max(e.max_abs());
    let idem = e.mul(e).sub(e).max_abs();
    if idem > tol * scale {
        return Err(MatrixError::NotIdempotent(idem));
    }
    if n == 0 {
        return Ok((ComplexMatrix::zeros(0, 0), ComplexMatrix::zeros(0, 0)));
    }
    // The columns of `C` span the image of `e`, so `C C^† e = e` and `e C = C`.
    let (s, r) = e.range_factor(tol);
    Ok((r, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn then_is_diagrammatic() {
        let f = ComplexMatrix::from_real(2, 1, &[1.0, 2.0]);
        let g = ComplexMatrix::from_real(1, 2, &[3.0, 4.0]);
        let fg = f.then(&g);
        assert_eq!(fg.rows(), 1);
        assert_eq!(fg.get(0, 0), c(11.0, 0.0));
    }

    #[test]
    fn kron_is_left_major() {
        let e0 = ComplexMatrix::from_real(2, 1, &[1.0, 0.0]);
        let e1 = ComplexMatrix::from_real(2, 1, &[0.0, 1.0]);
        // |0> ⊗ |1> = index 0*2+1 = 1
        let v = e0.kron(&e1);
        assert_eq!(v.get(1, 0), c(1.0, 0.0));
        assert_eq!(v.max_abs(), 1.0);
    }

    #[test]
    fn swap_exchanges_factors() {
        let a = ComplexMatrix::from_real(2, 1, &[1.0, 2.0]);
        let b = ComplexMatrix::from_real(3, 1, &[3.0, 4.0, 5.0]);
        let lhs = a.kron(&b).then(&ComplexMatrix::swap(2, 3));
        assert_eq!(residual(&lhs, &b.kron(&a)), 0.0);
    }

    #[test]
    fn equality_uses_relative_tolerance() {
        let i = ComplexMatrix::identity(3);
        assert_eq!(matrices_equal(&i, &i, 1e-9).unwrap(), (true, 0.0));
        let mut j = i.clone();
        j.set(0, 0, c(1.0 + 1e-6, 0.0));
        let (ok, r) = matrices_equal(&i, &j, 1e-9).unwrap();
        assert!(!ok);
        assert!((r - 1e-6).abs() < 1e-12);
        assert_eq!(matrices_equal(&j, &i, 1e-9).unwrap().1, r);
        assert!(matrices_equal(&i, &ComplexMatrix::identity(2), 1e-9).is_err());
    }

    #[test]
    fn split_of_a_diagonal_projector() {
        let e = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let (r, s) = split_idempotent(&e, 1e-9).unwrap();
        assert_eq!((r.rows(), r.cols(), s.rows(), s.cols()), (2, 3, 3, 2));
        assert!(residual(&s.mul(&r), &e) < 1e-12);
        assert!(residual(&r.mul(&s), &ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn split_of_identity_and_zero() {
        let (r, s) = split_idempotent(&ComplexMatrix::identity(4), 1e-9).unwrap();
        assert!(residual(&r.mul(&s), &ComplexMatrix::identity(4)) < 1e-12);
        let (r, s) = split_idempotent(&ComplexMatrix::zeros(3, 3), 1e-9).unwrap();
        assert_eq!((r.rows(), s.cols()), (0, 0));
    }

    #[test]
    fn non_idempotent_is_rejected() {
        let m = ComplexMatrix::from_real(1, 1, &[2.0]);
        assert!(matches!(split_idempotent(&m, 1e-9), Err(MatrixError::NotIdempotent(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::from_row_major(1, 2, &[c(1.0, -2.0), c(0.5, 0.0)]);
        let j = m.to_json();
        assert_eq!(
            j,
            serde_json::json!({"rows": 1, "cols": 2, "data": [[1.0, -2.0], [0.5, 0.0]]})
        );
        assert_eq!(ComplexMatrix::from_json(&j).unwrap(), m);
        assert!(ComplexMatrix::from_json(&serde_json::json!({"rows": 2, "cols": 2, "data": []})).is_err());
    }

    #[test]
    fn pseudo_inverse_of_rank_one() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let p = m.pseudo_inverse(1e-12);
        assert!(residual(&m.mul(&p).mul(&m), &m) < 1e-12);
    }
}
