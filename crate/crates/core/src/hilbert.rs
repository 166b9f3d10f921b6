//! Finite-dimensional Hilbert-space primitives over `Z_d`: position basis,
//! Fourier, shift and clock matrices, displacement and displaced-parity
//! operators, the entrywise 1-norm and the Hermitian matrix exponential.
//!
//! Conventions: `ω = exp(2πi/d)`; `X` has ones on the superdiagonal and at the
//! bottom-left corner, so `X|ν⟩ = |ν−1⟩`; `Z = diag(1, ω, …, ω^{d−1})`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, Ket, Matrix};
use crate::scalar::{cis, Cplx, Real};

/// Point `z = exp(i·angle)` on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitCirclePoint<T: Real> {
    angle: T,
    value: Cplx<T>,
}

impl<T: Real> UnitCirclePoint<T> {
    pub fn from_angle(angle: T) -> Self {
        Self { angle, value: cis(angle) }
    }

    /// `exp(iπ·num/den)`. Multiples of `π/2` are produced exactly.
    pub fn from_pi_fraction(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let angle = T::PI() * T::lit(num as f64) / T::lit(den as f64);
        let quarter_turns = 2 * num as i128;
        if quarter_turns % den as i128 == 0 {
            let k = (quarter_turns / den as i128).rem_euclid(4);
            let (o, z) = (T::one(), T::zero());
            let value = match k {
                0 => Complex::new(o, z),
                1 => Complex::new(z, o),
                2 => Complex::new(-o, z),
                _ => Complex::new(z, -o),
            };
            return Self { angle, value };
        }
        Self::from_angle(angle)
    }

    /// Accepts a complex number whose modulus is one within `1e-12`.
    pub fn from_complex(value: Cplx<T>) -> Result<Self> {
        let m = value.norm();
        if (m - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
            return Err(Error::NotOnUnitCircle { modulus: m.as_f64() });
        }
        Ok(Self { angle: value.arg(), value })
    }

    pub fn angle(&self) -> T {
        self.angle
    }

    pub fn value(&self) -> Cplx<T> {
        self.value
    }

    pub fn conj(&self) -> Self {
        Self { angle: -self.angle, value: self.value.conj() }
    }

    /// The antipodal point `−z`.
    pub fn neg(&self) -> Self {
        Self { angle: self.angle + T::PI(), value: -self.value }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 1 {
        return Err(Error::InvalidDimension { dim: d, min: 1 });
    }
    Ok(())
}

/// `ω^k` evaluated from the reduced exponent.
pub fn omega_pow<T: Real>(d: usize, k: i64) -> Cplx<T> {
    let k = k.rem_euclid(d as i64);
    cis(T::TAU() * T::lit(k as f64) / T::lit(d as f64))
}

/// Position-basis vector `|X;ν⟩`.
pub fn position_basis<T: Real>(d: usize, nu: usize) -> Result<Ket<T>> {
    if nu >= d {
        return Err(Error::IndexOutOfRange { index: nu, dim: d });
    }
    let mut v = vec![Cplx::zero(); d];
    v[nu] = Cplx::one();
    Ket::new(v)
}

/// `F_{μν} = ω^{μν}/√d`.
pub fn fourier_matrix<T: Real>(d: usize) -> Result<Matrix<T>> {
    check_dim(d)?;
    let s = T::one() / T::lit(d as f64).sqrt();
    Ok(Matrix::from_fn(d, d, |m, n| omega_pow::<T>(d, (m * n) as i64) * s))
}

/// Cyclic shift `X`, `X_{r,r+1} = 1`.
pub fn shift_x<T: Real>(d: usize) -> Result<Matrix<T>> {
    check_dim(d)?;
    Ok(Matrix::from_fn(d, d, |r, c| if c == (r + 1) % d { Cplx::one() } else { Cplx::zero() }))
}

/// Clock `Z = diag(1, ω, …, ω^{d−1})`.
pub fn clock_z<T: Real>(d: usize) -> Result<Matrix<T>> {
    check_dim(d)?;
    let diag: Vec<_> = (0..d).map(|k| omega_pow::<T>(d, k as i64)).collect();
    Ok(Matrix::from_diag(&diag))
}

/// Parity permutation `F²`: `|ν⟩ ↦ |−ν⟩`.
pub fn parity_matrix<T: Real>(d: usize) -> Result<Matrix<T>> {
    check_dim(d)?;
    Ok(Matrix::from_fn(d, d, |r, c| if (r + c) % d == 0 { Cplx::one() } else { Cplx::zero() }))
}

/// Displacement operator `𝔇(a,b,c) = Z^a X^b ω^c`, indices reduced mod `d`.
pub fn displacement<T: Real>(d: usize, a: i64, b: i64, c: i64) -> Result<Matrix<T>> {
    check_dim(d)?;
    let dd = d as i64;
    let (a, b) = (a.rem_euclid(dd), b.rem_euclid(dd));
    let phase = omega_pow::<T>(d, c);
    // (Z^a X^b)_{rs} = ω^{a r} δ_{s, r+b}
    Ok(Matrix::from_fn(d, d, |r, s| {
        if s as i64 == (r as i64 + b) % dd {
            omega_pow::<T>(d, a * r as i64) * phase
        } else {
            Cplx::zero()
        }
    }))
}

/// Displaced parity `𝔓(a,b) = 𝔇(a,b,0)·F²·𝔇(a,b,0)†`.
///
/// The reference construction is deferred to the literature; this convention
/// gives a Hermitian involution for every `(a, b)`.
pub fn displaced_parity<T: Real>(d: usize, a: i64, b: i64) -> Result<Matrix<T>> {
    let disp = displacement::<T>(d, a, b, 0)?;
    let par = parity_matrix::<T>(d)?;
    Ok(&(&disp * &par) * &disp.adjoint())
}

/// Entrywise 1-norm `Σ_{r,s} |θ_{rs}|`.
pub fn matrix_one_norm<T: Real>(theta: &Matrix<T>) -> T {
    theta.entries().iter().map(|z| z.norm()).sum()
}

/// `exp(iHt)` via the eigendecomposition `H = UΛU†`.
pub fn hermitian_expm<T: Real>(h: &HermitianMatrix<T>, t: T) -> Result<Matrix<T>> {
    let eig = h.eigen()?;
    Ok(expm_from_eigen(&eig, t))
}

pub(crate) fn expm_from_eigen<T: Real>(eig: &crate::linalg::Eigen<T>, t: T) -> Matrix<T> {
    let u = &eig.vectors;
    let phases: Vec<_> = eig.values.iter().map(|&l| cis(l * t)).collect();
    let n = phases.len();
    Matrix::from_fn(n, n, |r, c| (0..n).map(|k| u[(r, k)] * phases[k] * u[(c, k)].conj()).sum())
}
