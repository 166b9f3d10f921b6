//! Semi-unitary `d × 2d` matrices, the projectors they induce on the
//! `2d`-dimensional space, and the z-Bargmann transforms of vectors and
//! matrices built from them.
//!
//! The building block is `A(z) = ½(1 + z X†)·P` with `P` the parity
//! permutation (`P_{ij} = δ_{i+j ≡ 0}`), and `M(z) = (A(z) | A(−z))`. For
//! `d = 3` this reads
//!
//! ```text
//!        1 ⎛ 1  z  0  1 −z  0 ⎞
//! M(z) = ─ ⎜ z  0  1 −z  0  1 ⎟
//!        2 ⎝ 0  1  z  0  1 −z ⎠
//! ```
//!
//! Column `r` of `M(z)` is `(z/√2)·X^r|z⟩` and column `d + r` is
//! `(−z/√2)·X^r|−z⟩`, where `|z⟩ = (z*, 1, 0, …, 0)ᵀ/√2` is the fiducial vector.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hilbert::{parity_matrix, shift_x, UnitCirclePoint};
use crate::linalg::{Ket, Matrix};
use crate::scalar::{re, Cplx, Real};

/// Tolerance for the construction identities (`M M† = 1`, …).
pub const CONSTRUCTION_TOL: f64 = 1e-10;
/// Tolerance of the physicality tests `Π v_B = v_B`, `Π T_B Π = T_B`.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// `Π(z₁,z₂)` is refused when `|1 + z₁* z₂|` falls below this.
pub const ANTIPODAL_TOL: f64 = 1e-8;

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension { dim: d, min: 2 });
    }
    Ok(())
}

/// `A(z) = ½(1 + zX†)P`.
pub fn a_block<T: Real>(d: usize, z: Cplx<T>) -> Result<Matrix<T>> {
    check_d(d)?;
    let x_dag = shift_x::<T>(d)?.adjoint();
    let lhs = &Matrix::identity(d) + &x_dag.scale(z);
    Ok((&lhs * &parity_matrix(d)?).scale_real(T::lit(0.5)))
}

/// `{X^r|z⟩} ∪ {X^r|−z⟩}` for `r = 0..d`, with `|z⟩ = (z*, 1, 0, …)ᵀ/√2`.
///
/// With weight ½ the family resolves the identity on `H(d)`.
pub fn coherent_family<T: Real>(d: usize, z: UnitCirclePoint<T>) -> Result<Vec<Ket<T>>> {
    check_d(d)?;
    let x = shift_x::<T>(d)?;
    let s = T::one() / T::lit(2.0).sqrt();
    let mut family = Vec::with_capacity(2 * d);
    for sign in [z, z.neg()] {
        let mut v = vec![Cplx::zero(); d];
        v[0] = sign.value().conj() * s;
        v[1] = re(s);
        let mut ket = Ket::new(v)?;
        for _ in 0..d {
            let next = x.mul_vec(&ket);
            family.push(ket);
            ket = next;
        }
    }
    Ok(family)
}

/// The semi-unitary matrix `M(z)`; `M(z)M(z)† = 1_d`.
#[derive(Clone, Debug)]
pub struct SemiUnitary<T: Real> {
    d: usize,
    z: UnitCirclePoint<T>,
    matrix: Matrix<T>,
}

impl<T: Real> SemiUnitary<T> {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn z(&self) -> UnitCirclePoint<T> {
        self.z
    }

    /// The `d × 2d` entries.
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Matrix<T> {
        self.matrix.adjoint()
    }
}

pub fn build_m<T: Real>(d: usize, z: UnitCirclePoint<T>) -> Result<SemiUnitary<T>> {
    let plus = a_block(d, z.value())?;
    let minus = a_block(d, -z.value())?;
    Ok(SemiUnitary { d, z, matrix: Matrix::hstack(&plus, &minus)? })
}

/// `Π(z) = M(z)†M(z)` and its complement `Π(−z) = 1 − Π(z)`.
#[derive(Clone, Debug)]
pub struct ProjectorPair<T: Real> {
    d: usize,
    z: UnitCirclePoint<T>,
    pi_plus: Matrix<T>,
    pi_minus: Matrix<T>,
}

impl<T: Real> ProjectorPair<T> {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn z(&self) -> UnitCirclePoint<T> {
        self.z
    }

    /// Projector onto the embedded system space `H(d)`.
    pub fn pi_plus(&self) -> &Matrix<T> {
        &self.pi_plus
    }

    /// Projector onto the complement (the external world).
    pub fn pi_minus(&self) -> &Matrix<T> {
        &self.pi_minus
    }

    /// The same pair with the roles of `z` and `−z` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            d: self.d,
            z: self.z.neg(),
            pi_plus: self.pi_minus.clone(),
            pi_minus: self.pi_plus.clone(),
        }
    }
}

pub fn projector<T: Real>(d: usize, z: UnitCirclePoint<T>) -> Result<ProjectorPair<T>> {
    let m_plus = build_m(d, z)?;
    let m_minus = build_m(d, z.neg())?;
    Ok(ProjectorPair {
        d,
        z,
        pi_plus: &m_plus.adjoint() * m_plus.matrix(),
        pi_minus: &m_minus.adjoint() * m_minus.matrix(),
    })
}

fn antipodal_guard<T: Real>(z1: UnitCirclePoint<T>, z2: UnitCirclePoint<T>) -> Result<Cplx<T>> {
    let denom = Cplx::<T>::one() + z1.value().conj() * z2.value();
    if denom.norm() < T::lit(ANTIPODAL_TOL) {
        return Err(Error::AntipodalPoints { gap: denom.norm().as_f64() });
    }
    Ok(denom)
}

/// `Π(z₁,z₂) = 2/(1 + z₁*z₂)·M(z₁)†M(z₂)`, an idempotent that is Hermitian
/// only when `z₁ = z₂`.
pub fn projector_pair_z<T: Real>(
    d: usize,
    z1: UnitCirclePoint<T>,
    z2: UnitCirclePoint<T>,
) -> Result<Matrix<T>> {
    let denom = antipodal_guard(z1, z2)?;
    let m1 = build_m(d, z1)?;
    let m2 = build_m(d, z2)?;
    let factor = Complex::new(T::lit(2.0), T::zero()) / denom;
    Ok((&m1.adjoint() * m2.matrix()).scale(factor))
}

/// `2d`-component z-Bargmann vector.
#[derive(Clone, Debug)]
pub struct BargmannVector<T: Real> {
    d: usize,
    z: UnitCirclePoint<T>,
    entries: Ket<T>,
}

impl<T: Real> BargmannVector<T> {
    /// Wraps raw `2d` components; nothing is assumed about physicality.
    pub fn new(z: UnitCirclePoint<T>, entries: Ket<T>) -> Result<Self> {
        let n = entries.dim();
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: "even length 2d with d >= 2".into(),
                found: n.to_string(),
            });
        }
        Ok(Self { d: n / 2, z, entries })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn z(&self) -> UnitCirclePoint<T> {
        self.z
    }

    pub fn entries(&self) -> &Ket<T> {
        &self.entries
    }

    pub fn is_physical(&self) -> bool {
        is_physical_vec(&self.entries, self.z)
    }
}

/// `v_B(z) = M(z)† v`.
pub fn to_bargmann_vec<T: Real>(v: &Ket<T>, z: UnitCirclePoint<T>) -> Result<BargmannVector<T>> {
    let m = build_m(v.dim(), z)?;
    Ok(BargmannVector { d: v.dim(), z, entries: m.adjoint().mul_vec(v) })
}

/// `v = M(z)·v_B`.
pub fn from_bargmann_vec<T: Real>(v_b: &BargmannVector<T>) -> Result<Ket<T>> {
    let m = build_m(v_b.d, v_b.z)?;
    Ok(m.matrix().mul_vec(&v_b.entries))
}

fn half_dim<T: Real>(t: &Matrix<T>) -> Result<usize> {
    let n = t.ensure_square()?;
    if n < 4 || n % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: "2d x 2d with d >= 2".into(),
            found: format!("{n}x{n}"),
        });
    }
    Ok(n / 2)
}

/// `T_B(z) = M(z)† T M(z)`.
pub fn to_bargmann_mat<T: Real>(t: &Matrix<T>, z: UnitCirclePoint<T>) -> Result<Matrix<T>> {
    let d = t.ensure_square()?;
    let m = build_m(d, z)?;
    Ok(&(&m.adjoint() * t) * m.matrix())
}

/// `T = M(z) T_B M(z)†`.
pub fn from_bargmann_mat<T: Real>(t_b: &Matrix<T>, z: UnitCirclePoint<T>) -> Result<Matrix<T>> {
    let d = half_dim(t_b)?;
    let m = build_m(d, z)?;
    Ok(&(m.matrix() * t_b) * &m.adjoint())
}

/// `Π(z) v_B = v_B` to [`PHYSICALITY_TOL`].
pub fn is_physical_vec<T: Real>(v_b: &Ket<T>, z: UnitCirclePoint<T>) -> bool {
    let n = v_b.dim();
    if n < 4 || !n.is_multiple_of(2) {
        return false;
    }
    match projector(n / 2, z) {
        Ok(pp) => pp.pi_plus.mul_vec(v_b).max_abs_diff(v_b) <= T::lit(PHYSICALITY_TOL),
        Err(_) => false,
    }
}

/// `Π(z) T_B Π(z) = T_B` to [`PHYSICALITY_TOL`].
pub fn is_physical_mat<T: Real>(t_b: &Matrix<T>, z: UnitCirclePoint<T>) -> bool {
    let Ok(d) = half_dim(t_b) else {
        return false;
    };
    match projector(d, z) {
        Ok(pp) => {
            let sandwiched = &(&pp.pi_plus * t_b) * &pp.pi_plus;
            sandwiched.max_abs_diff(t_b) <= T::lit(PHYSICALITY_TOL)
        }
        Err(_) => false,
    }
}

/// Re-expresses a physical `z₂`-Bargmann vector in the `z₁` representation,
/// using `Π(z₁,z₂) v_B(z₂) = 2/(1 + z₁*z₂)·v_B(z₁)`.
pub fn change_representation_vec<T: Real>(
    v_b: &BargmannVector<T>,
    z1: UnitCirclePoint<T>,
) -> Result<BargmannVector<T>> {
    let z2 = v_b.z;
    let denom = antipodal_guard(z1, z2)?;
    let pp = projector(v_b.d, z2)?;
    let residual = pp.pi_plus.mul_vec(&v_b.entries).max_abs_diff(&v_b.entries);
    if residual > T::lit(PHYSICALITY_TOL) {
        return Err(Error::NotPhysical { residual: residual.as_f64() });
    }
    let pz = projector_pair_z(v_b.d, z1, z2)?;
    let entries = pz.mul_vec(&v_b.entries).scale(denom * T::lit(0.5));
    Ok(BargmannVector { d: v_b.d, z: z1, entries })
}

/// Matrix analogue: `Π(z₁,z₂) T_B(z₂) Π(z₂,z₁) = 4/(2 + z₁*z₂ + z₁z₂*)·T_B(z₁)`.
pub fn change_representation_mat<T: Real>(
    t_b: &Matrix<T>,
    z2: UnitCirclePoint<T>,
    z1: UnitCirclePoint<T>,
) -> Result<Matrix<T>> {
    let d = half_dim(t_b)?;
    if !is_physical_mat(t_b, z2) {
        let pp = projector(d, z2)?;
        let residual = (&(&pp.pi_plus * t_b) * &pp.pi_plus).max_abs_diff(t_b);
        return Err(Error::NotPhysical { residual: residual.as_f64() });
    }
    let p12 = projector_pair_z(d, z1, z2)?;
    let p21 = projector_pair_z(d, z2, z1)?;
    let (a, b) = (z1.value(), z2.value());
    let factor = (Cplx::<T>::from(T::lit(2.0)) + a.conj() * b + a * b.conj()) * T::lit(0.25);
    Ok((&(&p12 * t_b) * &p21).scale(factor))
}
