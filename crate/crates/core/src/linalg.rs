//! Dense complex matrices and vectors for the small dimensions used here
//! (a few dozen at most), plus a Hermitian eigensolver.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{re, Cplx, Real};

/// Maximum entrywise deviation from Hermiticity accepted for Hamiltonians.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// Dense row-major complex matrix.
///
/// Most operators in the crate are square; the semi-unitary `d × 2d` blocks
/// are the exception, so the shape is carried explicitly.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> Matrix<T> {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn new(rows: usize, cols: usize, data: Vec<Cplx<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k / cols.max(1), col: k % cols.max(1) });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Cplx<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: format!("{c} columns"),
                found: format!("{} columns", bad.len()),
            });
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Cplx::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Cplx::one() } else { Cplx::zero() })
    }

    pub fn from_diag(diag: &[Cplx<T>]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { Cplx::zero() })
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { re(diag[r]) } else { Cplx::zero() })
    }

    /// Horizontal block concatenation `(left | right)`.
    pub fn hstack(left: &Self, right: &Self) -> Result<Self> {
        if left.rows != right.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", left.rows),
                found: format!("{} rows", right.rows),
            });
        }
        let cols = left.cols + right.cols;
        Ok(Self::from_fn(left.rows, cols, |r, c| {
            if c < left.cols {
                left[(r, c)]
            } else {
                right[(r, c - left.cols)]
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix.
    ///
    /// # Panics
    /// If the matrix is not square.
    pub fn dim(&self) -> usize {
        assert!(self.is_square(), "dim() on a {}x{} matrix", self.rows, self.cols);
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn ensure_dim(&self, n: usize) -> Result<()> {
        if self.rows == n && self.cols == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", self.rows, self.cols),
            })
        }
    }

    pub fn entries(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Cplx<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Cplx<T>) -> Cplx<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Integer power of a square matrix (`n = 0` gives the identity).
    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::identity(self.dim());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    pub fn mul_vec(&self, v: &Ket<T>) -> Ket<T> {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape mismatch");
        Ket::from_vec(
            (0..self.rows)
                .map(|r| self.row(r).iter().zip(v.entries()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `max |A − A†|` over entries.
    pub fn hermiticity_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let n = self.rows;
        let mut worst = T::zero();
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `max |A A† − 1|` over entries.
    pub fn unitarity_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn ensure_unitary(&self, tol: T) -> Result<()> {
        let res = self.unitarity_residual();
        if res <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary { residual: res.as_f64() })
        }
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = Cplx<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Cplx<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Complex column vector.
#[derive(Clone, PartialEq)]
pub struct Ket<T: Real> {
    data: Vec<Cplx<T>>,
}

impl<T: Real> Ket<T> {
    pub fn new(data: Vec<Cplx<T>>) -> Result<Self> {
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(Self { data })
    }

    pub(crate) fn from_vec(data: Vec<Cplx<T>>) -> Self {
        Self { data }
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: vec![Cplx::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `Σ_r |f_r|`.
    pub fn l1_norm(&self) -> T {
        self.data.iter().map(|z| z.norm()).sum()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Cplx<T> {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        Self { data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == T::zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(re(T::one() / n)))
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> Matrix<T> {
        Matrix::from_fn(self.dim(), other.dim(), |r, c| self.data[r] * other.data[c].conj())
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Matrix<T> {
        self.outer(self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    /// Requires unit Euclidean norm within `tol`.
    pub fn ensure_normalized(&self, tol: T) -> Result<()> {
        let n = self.norm();
        if (n - T::one()).abs() <= tol {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: n.as_f64() })
        }
    }
}

impl<T: Real> Index<usize> for Ket<T> {
    type Output = Cplx<T>;
    fn index(&self, k: usize) -> &Cplx<T> {
        &self.data[k]
    }
}

impl<T: Real> fmt::Debug for Ket<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ket[")?;
        for z in &self.data {
            write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, " ]")
    }
}

/// Square matrix certified Hermitian to [`HERMITICITY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T: Real>(Matrix<T>);

impl<T: Real> HermitianMatrix<T> {
    /// Rejects (rather than symmetrises) inputs whose asymmetry exceeds the tolerance.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        m.ensure_square()?;
        let asym = m.hermiticity_residual();
        if asym > T::lit(HERMITICITY_TOL) {
            return Err(Error::NotHermitian { asymmetry: asym.as_f64() });
        }
        Ok(Self(m))
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        Self(Matrix::from_real_diag(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn eigen(&self) -> Result<Eigen<T>> {
        eigh(&self.0)
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending; column `k` of
/// `vectors` belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct Eigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Only the Hermitian part of `a` is meaningful; callers validate Hermiticity.
pub fn eigh<T: Real>(a: &Matrix<T>) -> Result<Eigen<T>> {
    let n = a.ensure_square()?;
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let scale = m.frobenius_norm();
    let two = T::lit(2.0);

    if n > 1 && scale > T::zero() {
        let threshold = T::epsilon() * scale;
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: T = (0..n)
                .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
                .map(|(p, q)| m[(p, q)].norm_sqr())
                .sum::<T>()
                .sqrt();
            if off <= threshold {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = m[(p, q)];
                    let g = apq.norm();
                    if g == T::zero() {
                        continue;
                    }
                    let phase = apq / g;
                    let app = m[(p, p)].re;
                    let aqq = m[(q, q)].re;
                    let theta = (aqq - app) / (two * g);
                    let t = {
                        let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                        if theta < T::zero() {
                            -t
                        } else {
                            t
                        }
                    };
                    let cs = T::one() / (t * t + T::one()).sqrt();
                    let sn = t * cs;
                    // U = D·J with D = diag(1, conj(phase)) on (p, q) and J the real rotation.
                    let u_pp = re(cs);
                    let u_pq = re(sn);
                    let u_qp = -phase.conj() * sn;
                    let u_qq = phase.conj() * cs;
                    for k in 0..n {
                        let mkp = m[(k, p)];
                        let mkq = m[(k, q)];
                        m[(k, p)] = mkp * u_pp + mkq * u_qp;
                        m[(k, q)] = mkp * u_pq + mkq * u_qq;
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * u_pp + vkq * u_qp;
                        v[(k, q)] = vkp * u_pq + vkq * u_qq;
                    }
                    for k in 0..n {
                        let mpk = m[(p, k)];
                        let mqk = m[(q, k)];
                        m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
                        m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
                    }
                    m[(p, q)] = Cplx::zero();
                    m[(q, p)] = Cplx::zero();
                    m[(p, p)] = re(m[(p, p)].re);
                    m[(q, q)] = re(m[(q, q)].re);
                }
            }
        }
        if !converged {
            return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

/// Largest singular value, as the square root of the top eigenvalue of `A†A`.
pub fn max_singular_value<T: Real>(a: &Matrix<T>) -> Result<T> {
    let gram = &a.adjoint() * a;
    let eig = eigh(&gram)?;
    Ok(eig.values.last().copied().unwrap_or_else(T::zero).max(T::zero()).sqrt())
}

pub(crate) fn complex<T: Real>(re: f64, im: f64) -> Cplx<T> {
    Complex::new(T::lit(re), T::lit(im))
}
