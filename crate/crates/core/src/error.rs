use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension {dim} is below the minimum {min}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |H - H^dagger| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not unitary: max |U U^dagger - 1| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("entry {index} has modulus {modulus} outside the unit disc")]
    OutsideUnitDisc { index: usize, modulus: f64 },

    #[error("point is not on the unit circle: |z| = {modulus}")]
    NotOnUnitCircle { modulus: f64 },

    #[error("zero matrix or vector cannot be normalised")]
    ZeroNorm,

    #[error("scale factor {lambda} must lie in (0, 1]")]
    InvalidScale { lambda: f64 },

    #[error("state is not normalised: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("z1 and z2 are (nearly) antipodal: |1 + conj(z1) z2| = {gap:e}")]
    AntipodalPoints { gap: f64 },

    #[error("input is not a physical z-Bargmann representation: residual {residual:e}")]
    NotPhysical { residual: f64 },

    #[error("at least one restart is required")]
    NoRestarts,

    #[error("current has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("normalisation g must be positive, got {value}")]
    NonPositiveG { value: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("time grid must be strictly increasing (index {index})")]
    NonIncreasingGrid { index: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
