//! Small dense complex linear algebra.
//!
//! Everything here works on short vectors and matrices of at most a few
//! dozen entries per side (the effective operators are 3x3, 5x5 and 7x7),
//! plus inner products and projections on full-space state vectors.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance used when checking that a basis is orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty vector or matrix")]
    Empty,
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("basis is not orthonormal (max Gram defect {0:e})")]
    NotOrthonormal(f64),
    #[error("matrix is singular")]
    Singular,
}

/// A complex column vector.
#[derive(Clone, PartialEq)]
pub struct CVec(Vec<Complex64>);

impl CVec {
    /// Wraps `entries`, rejecting empty input and NaN/Inf amplitudes.
    pub fn new(entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::Empty);
        }
        if let Some(i) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite(i));
        }
        Ok(CVec(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self, LinalgError> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero-dimensional vector");
        CVec(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The `i`-th standard basis vector of dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &CVec) -> Result<Complex64, LinalgError> {
        check_dim(self.dim(), other.dim())?;
        Ok(inner_slices(&self.0, &other.0))
    }

    pub fn scale(&self, k: Complex64) -> CVec {
        CVec(self.0.iter().map(|&z| z * k).collect())
    }

    /// `self += k * other`
    pub fn axpy(&mut self, k: Complex64, other: &CVec) -> Result<(), LinalgError> {
        check_dim(self.dim(), other.dim())?;
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a += k * b;
        }
        Ok(())
    }

    pub fn sub(&self, other: &CVec) -> Result<CVec, LinalgError> {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other)?;
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for CVec {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVec {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl fmt::Debug for CVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub(crate) fn inner_slices(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_dim(expected: usize, found: usize) -> Result<(), LinalgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        check_dim(rows * cols, data.len())?;
        Ok(CMat { rows, cols, data })
    }

    /// Builds a real matrix from equally sized rows.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            check_dim(ncols, r.len())?;
            data.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(nrows, ncols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        CMat { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn adjoint(&self) -> CMat {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &CMat) -> Result<CMat, LinalgError> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CMat) -> Result<CMat, LinalgError> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(CMat { rows: self.rows, cols: self.cols, data })
    }

    /// `self - z * I`
    pub fn shift(&self, z: Complex64) -> Result<CMat, LinalgError> {
        self.require_square()?;
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] -= z;
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for z in self.row(i) {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn matvec(m: &CMat, v: &CVec) -> Result<CVec, LinalgError> {
    check_dim(m.cols, v.dim())?;
    let out = (0..m.rows).map(|i| m.row(i).iter().zip(v.as_slice()).map(|(a, b)| a * b).sum()).collect();
    Ok(CVec(out))
}

/// Max-norm of `m^dagger m - I`.
pub fn unitarity_defect(m: &CMat) -> Result<f64, LinalgError> {
    m.require_square()?;
    let gram = m.adjoint().mul(m)?;
    Ok(gram.sub(&CMat::identity(m.rows))?.max_abs())
}

/// LU factorization with partial pivoting, stored compactly.
struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl Lu {
    fn factor(m: &CMat) -> Result<Lu, LinalgError> {
        m.require_square()?;
        let n = m.rows;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;
        for k in 0..n {
            let p = (k..n).max_by(|&a, &b| lu[a * n + k].norm().total_cmp(&lu[b * n + k].norm())).unwrap();
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[k * n + k];
            if pivot.norm() == 0.0 {
                singular = true;
                continue;
            }
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= f * u;
                }
            }
        }
        Ok(Lu { n, lu, perm, swaps, singular })
    }

    fn det(&self) -> Complex64 {
        let d: Complex64 = (0..self.n).map(|i| self.lu[i * self.n + i]).product();
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    fn solve(&self, b: &CVec) -> Result<CVec, LinalgError> {
        if self.singular {
            return Err(LinalgError::Singular);
        }
        let n = self.n;
        check_dim(n, b.dim())?;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        Ok(CVec(x))
    }
}

/// Determinant via partial-pivot LU.
pub fn det(m: &CMat) -> Result<Complex64, LinalgError> {
    Ok(Lu::factor(m)?.det())
}

/// Solves `m x = b`.
pub fn solve(m: &CMat, b: &CVec) -> Result<CVec, LinalgError> {
    Lu::factor(m)?.solve(b)
}

/// Max-norm of `G - I` where `G` is the Gram matrix of `basis`.
pub fn orthonormality_defect(basis: &[CVec]) -> Result<f64, LinalgError> {
    let Some(first) = basis.first() else {
        return Err(LinalgError::Empty);
    };
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        check_dim(first.dim(), a.dim())?;
        for (j, b) in basis.iter().enumerate().skip(i) {
            let g = a.inner(b)?;
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    Ok(worst)
}

/// Coordinates `<b_i|v>` of `v` in the (assumed orthonormal) `basis`.
pub fn coordinates(basis: &[CVec], v: &CVec) -> Result<CVec, LinalgError> {
    let coords = basis.iter().map(|b| b.inner(v)).collect::<Result<Vec<_>, _>>()?;
    CVec::new(coords)
}

/// `||v - sum_i <b_i|v> b_i||` for an orthonormal `basis`.
pub fn projection_residual(basis: &[CVec], v: &CVec) -> Result<f64, LinalgError> {
    let defect = orthonormality_defect(basis)?;
    if defect > ORTHONORMAL_TOL {
        return Err(LinalgError::NotOrthonormal(defect));
    }
    check_dim(basis[0].dim(), v.dim())?;
    let mut rest = v.clone();
    for b in basis {
        let c = b.inner(v)?;
        rest.axpy(-c, b)?;
    }
    Ok(rest.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_matvec() {
        let v = CVec::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(matvec(&CMat::identity(3), &v).unwrap(), v);
    }

    #[test]
    fn diagonal_scaling() {
        let m = CMat::diag(&[c(0.0, 1.0), c(0.0, 1.0)]);
        let v = CVec::from_real(&[1.0, 1.0]).unwrap();
        let out = matvec(&m, &v).unwrap();
        assert_eq!(out.as_slice(), &[c(0.0, 1.0), c(0.0, 1.0)]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let v = CVec::from_real(&[1.0, 0.0]).unwrap();
        assert_eq!(matvec(&CMat::identity(3), &v), Err(LinalgError::DimensionMismatch { expected: 3, found: 2 }));
    }

    #[test]
    fn rejects_bad_vectors() {
        assert_eq!(CVec::new(vec![]), Err(LinalgError::Empty));
        assert_eq!(CVec::from_real(&[0.0, f64::NAN]), Err(LinalgError::NonFinite(1)));
        assert!(CMat::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn unitarity_defect_cases() {
        assert_eq!(unitarity_defect(&CMat::identity(5)).unwrap(), 0.0);
        let mut m = CMat::identity(3);
        m[(1, 1)] = c(2.0, 0.0);
        assert!(unitarity_defect(&m).unwrap() >= 3.0);
        assert!(matches!(unitarity_defect(&CMat::zeros(2, 3)), Err(LinalgError::NotSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&CMat::identity(7)).unwrap(), c(1.0, 0.0));
        assert_eq!(det(&CMat::diag(&[c(2.0, 0.0), c(3.0, 0.0)])).unwrap(), c(6.0, 0.0));
        // odd permutation
        let p = CMat::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(det(&p).unwrap(), c(-1.0, 0.0));
        let s = CMat::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(det(&s).unwrap().norm() < 1e-15);
        assert!(det(&CMat::zeros(2, 3)).is_err());
    }

    #[test]
    fn solve_small_system() {
        let m = CMat::from_real_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]]).unwrap();
        let x = CVec::new(vec![c(1.0, -1.0), c(0.5, 2.0), c(-3.0, 0.0)]).unwrap();
        let b = matvec(&m, &x).unwrap();
        let got = solve(&m, &b).unwrap();
        assert!(got.sub(&x).unwrap().max_abs() < 1e-14);
        let s = CMat::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(solve(&s, &CVec::from_real(&[1.0, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn projection_residual_cases() {
        let e1 = CVec::unit(2, 0);
        let e2 = CVec::unit(2, 1);
        assert_eq!(projection_residual(std::slice::from_ref(&e1), &e1).unwrap(), 0.0);
        assert_eq!(projection_residual(std::slice::from_ref(&e1), &e2).unwrap(), 1.0);
        let skew = CVec::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(projection_residual(&[e1.clone(), skew], &e2), Err(LinalgError::NotOrthonormal(_))));
        assert!(matches!(projection_residual(&[e1], &CVec::unit(3, 0)), Err(LinalgError::DimensionMismatch { .. })));
    }
}
