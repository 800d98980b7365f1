//! Dense complex matrices and the tensor-structure operations built on them.
//!
//! Subsystem 0 is the most significant tensor factor: for dims `[d0, d1]` the
//! basis index of `|i⟩⊗|j⟩` is `i * d1 + j`, which is what [`kron`] produces.

mod eigen;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use eigen::{hermitian_eig, hermitian_eig_with, EigenDecomposition, DEFAULT_MAX_SWEEPS};

use crate::error::{Error, Result};
use crate::tol;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major storage.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    /// Real-valued matrix from nested rows. Panics on ragged input.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let n_cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self::from_fn(rows.len(), n_cols, |r, c| Complex64::new(rows[r][c], 0.0))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// The projector `|v⟩⟨v|` (no normalization applied).
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Keeps the diagonal, zeroing every off-diagonal entry.
    pub fn diagonal_part(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] = self[(i, i)];
        }
        out
    }

    /// Largest entrywise modulus of `self - other`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖m − m†‖_max, or infinity for a non-square matrix.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// ‖u u† − I‖_max, or infinity for a non-square matrix.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a[(ar, ac)];
            if x == ZERO {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

pub(crate) fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} (product {total}) vs {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Reduced matrix of subsystem `keep`, tracing out every other subsystem.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: usize) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if keep >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem {keep} out of range for dims {dims:?}"
        )));
    }
    let dk = dims[keep];
    let left: usize = dims[..keep].iter().product();
    let right: usize = dims[keep + 1..].iter().product();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = ZERO;
            for l in 0..left {
                let ra = (l * dk + a) * right;
                let rb = (l * dk + b) * right;
                for r in 0..right {
                    acc += m[(ra + r, rb + r)];
                }
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// `u m u†`, rejecting `u` that is not unitary within 1e-9.
pub fn conjugate(m: &ComplexMatrix, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() || u.cols() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot conjugate {}x{} by {}x{}",
            m.rows(),
            m.cols(),
            u.rows(),
            u.cols()
        )));
    }
    let deviation = u.unitarity_deviation();
    if deviation > tol::VALIDITY {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(conjugate_unchecked(m, u))
}

pub(crate) fn conjugate_unchecked(m: &ComplexMatrix, u: &ComplexMatrix) -> ComplexMatrix {
    &(u * m) * &u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn phi_plus() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(s, 0.0), ZERO, ZERO, c(s, 0.0)])
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));

        let p = kron(
            &ComplexMatrix::from_diag(&[1.0, 0.0]),
            &ComplexMatrix::from_diag(&[0.0, 1.0]),
        );
        assert_eq!(p, ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_places_block_in_upper_left() {
        let m = kron(&ComplexMatrix::from_diag(&[1.0, 0.0]), &pauli_x());
        let expected = ComplexMatrix::from_real(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(m, expected);
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let half = ComplexMatrix::from_diag(&[0.5, 0.5]);
        for keep in 0..2 {
            let r = partial_trace(&phi_plus(), &[2, 2], keep).unwrap();
            assert!(r.max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let a = ComplexMatrix::from_fn(2, 2, |r, col| match (r, col) {
            (0, 0) => c(0.7, 0.0),
            (1, 1) => c(0.3, 0.0),
            (0, 1) => c(0.1, 0.2),
            _ => c(0.1, -0.2),
        });
        let b = ComplexMatrix::from_diag(&[0.2, 0.5, 0.3]);
        let ab = kron(&a, &b);
        assert!(partial_trace(&ab, &[2, 3], 0).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&ab, &[2, 3], 1).unwrap().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn partial_trace_of_paper_example() {
        let mut rho = phi_plus().scale(c(0.5, 0.0));
        rho[(1, 1)] += c(0.25, 0.0);
        rho[(2, 2)] += c(0.25, 0.0);
        let r = partial_trace(&rho, &[2, 2], 0).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&m, &[2, 3], 0),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            partial_trace(&m, &[2, 2], 2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn conjugate_by_hadamard_like_rotation() {
        // U(θ = π/4, φ = 0) = [[c, s], [-s, c]] with c = s = 1/√2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_real(&[&[s, s], &[-s, s]]);
        let out = conjugate(&ComplexMatrix::from_diag(&[1.0, 0.0]), &u).unwrap();
        let expected = ComplexMatrix::from_real(&[&[0.5, -0.5], &[-0.5, 0.5]]);
        assert!(out.max_abs_diff(&expected) < 1e-15);

        // The x-basis projector up to the orientation of the rotation.
        let out = conjugate(&ComplexMatrix::from_diag(&[1.0, 0.0]), &u.adjoint()).unwrap();
        let expected = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn conjugate_by_identity_is_noop() {
        let m = phi_plus();
        assert_eq!(conjugate(&m, &ComplexMatrix::identity(4)).unwrap(), m);
    }

    #[test]
    fn conjugate_rejects_non_unitary() {
        let u = ComplexMatrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(
            conjugate(&ComplexMatrix::identity(2), &u),
            Err(Error::NotUnitary { .. })
        ));
    }
}
