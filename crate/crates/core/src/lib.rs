//! Finite-dimensional open quantum systems embedded in a doubled space.
//!
//! A `d`-dimensional system is mapped into a `2d`-dimensional full space by
//! the semi-unitary `M(z)` for a point `z` on the unit circle. Probability can
//! flow between the system block `Π(z) = M(z)†M(z)` and its complement under a
//! Hamiltonian on the full space. The crate computes that current, its Taylor
//! coefficients, and Grothendieck-type bounds on the associated quantum and
//! classical bilinear forms.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`.

pub mod bargmann;
pub mod builtins;
pub mod dynamics;
pub mod error;
pub mod grothendieck;
pub mod hilbert;
pub mod linalg;
pub mod scalar;

pub use error::{Error, Result};
pub use grothendieck::{AscentOptions, GrothendieckConstantBound};
pub use scalar::{Cplx, Real};

pub type Complex = scalar::Cplx<f64>;
pub type ComplexMatrix = linalg::Matrix<f64>;
pub type Ket = linalg::Ket<f64>;
pub type HermitianMatrix = linalg::HermitianMatrix<f64>;
pub type Eigen = linalg::Eigen<f64>;
pub type UnitCirclePoint = hilbert::UnitCirclePoint<f64>;
pub type SemiUnitary = bargmann::SemiUnitary<f64>;
pub type ProjectorPair = bargmann::ProjectorPair<f64>;
pub type BargmannVector = bargmann::BargmannVector<f64>;
pub type UnitDiscVector = grothendieck::UnitDiscVector<f64>;
pub type RescalingMatrix = grothendieck::RescalingMatrix<f64>;
pub type GrothendieckReport = grothendieck::GrothendieckReport<f64>;
pub type DensityMatrix = dynamics::DensityMatrix<f64>;
pub type Propagator = dynamics::Propagator<f64>;
pub type TaylorCurrent = dynamics::TaylorCurrent<f64>;
pub type CurrentSeries = dynamics::CurrentSeries<f64>;
pub type QSample = dynamics::QSample<f64>;
