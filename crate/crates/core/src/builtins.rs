//! Reference state and Hamiltonians for the six-dimensional full space of a
//! qutrit embedded in its z-Bargmann representation.

use crate::bargmann::projector;
use crate::error::Result;
use crate::hilbert::UnitCirclePoint;
use crate::linalg::{complex, HermitianMatrix, Ket, Matrix};
use crate::scalar::Real;

/// `(0, 2, −i, 3, 1, 1)ᵀ / 4`.
pub fn v0<T: Real>() -> Ket<T> {
    let q = 0.25;
    Ket::from_vec(vec![
        complex(0.0, 0.0),
        complex(2.0 * q, 0.0),
        complex(0.0, -q),
        complex(3.0 * q, 0.0),
        complex(q, 0.0),
        complex(q, 0.0),
    ])
}

/// Hermitian coupling between the two halves of the full space.
pub fn h1<T: Real>() -> HermitianMatrix<T> {
    let r = |x: f64| complex::<T>(x, 0.0);
    let i = |x: f64| complex::<T>(0.0, x);
    let o = r(0.0);
    let rows = vec![
        vec![r(1.0), o, i(1.0), r(2.0), o, r(1.0)],
        vec![o, r(1.0), o, o, o, o],
        vec![i(-1.0), o, r(3.0), o, o, i(-4.0)],
        vec![r(2.0), o, o, r(4.0), o, o],
        vec![o, o, o, o, r(5.0), o],
        vec![r(1.0), o, i(4.0), o, o, r(4.0)],
    ];
    HermitianMatrix::new(Matrix::from_rows(rows).expect("rectangular literal")).expect("Hermitian literal")
}

/// `diag(1, 2, 3, 4, 5, 6)`.
pub fn h2<T: Real>() -> HermitianMatrix<T> {
    let diag: Vec<T> = (1..=6).map(|k| T::lit(k as f64)).collect();
    HermitianMatrix::from_real_diag(&diag)
}

/// Image `Π(z)/d` of the maximally mixed system state.
pub fn maximally_mixed_bargmann<T: Real>(d: usize, z: UnitCirclePoint<T>) -> Result<Matrix<T>> {
    Ok(projector(d, z)?.pi_plus().scale_real(T::one() / T::lit(d as f64)))
}
