//! Unitary evolution in the `2d`-dimensional full space, the probability
//! current into the embedded system, its Taylor expansion, and the
//! Grothendieck `Q(t)` along a trajectory.
//!
//! Time evolution is `ρ(t) = exp(iHt) ρ₀ exp(−iHt)` and the current is
//! `J(t) = d/dt Tr[Π(z)ρ(t)] = i·Tr([Π(z), H] ρ(t))`.

use crate::bargmann::{to_bargmann_mat, ProjectorPair};
use crate::error::{Error, Result};
use crate::grothendieck::{g_lower, quantum_form, rescaling_norm, AscentOptions};
use crate::hilbert::{expm_from_eigen, matrix_one_norm, UnitCirclePoint};
use crate::linalg::{eigh, Eigen, HermitianMatrix, Ket, Matrix};
use crate::scalar::{i_unit, Cplx, Real};

/// Tolerance on Hermiticity, positivity and unit trace of density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Largest imaginary part tolerated in a trace that must be real.
pub const RESIDUE_TOL: f64 = 1e-9;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T: Real>(Matrix<T>);

impl<T: Real> DensityMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        m.ensure_square()?;
        let tol = T::lit(DENSITY_TOL);
        let asym = m.hermiticity_residual();
        if asym > tol {
            return Err(Error::NotDensityMatrix { reason: format!("not Hermitian (residual {:e})", asym.as_f64()) });
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotDensityMatrix { reason: format!("trace {}{:+}i", tr.re, tr.im) });
        }
        let lowest = eigh(&m)?.values.first().copied().unwrap_or_else(T::zero);
        if lowest < -tol {
            return Err(Error::NotDensityMatrix { reason: format!("negative eigenvalue {:e}", lowest.as_f64()) });
        }
        Ok(Self(m))
    }

    /// `|v⟩⟨v|` for a unit vector.
    pub fn from_pure(v: &Ket<T>) -> Result<Self> {
        v.ensure_normalized(T::lit(DENSITY_TOL))?;
        Ok(Self(v.projector()))
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

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        (&self.0 * &self.0).trace().re
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - T::one()).abs() <= T::lit(1e-9)
    }
}

/// Cached eigendecomposition of a Hamiltonian, for repeated evolution.
#[derive(Clone, Debug)]
pub struct Propagator<T: Real> {
    eig: Eigen<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: &HermitianMatrix<T>) -> Result<Self> {
        Ok(Self { eig: h.eigen()? })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    /// `exp(iHt)`.
    pub fn unitary(&self, t: T) -> Matrix<T> {
        expm_from_eigen(&self.eig, t)
    }

    /// `exp(iHt)·ρ·exp(−iHt)`.
    pub fn evolve(&self, rho: &Matrix<T>, t: T) -> Matrix<T> {
        let u = self.unitary(t);
        &(&u * rho) * &u.adjoint()
    }
}

fn same_dim(what: &str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            expected: format!("{what} of dimension {expected}"),
            found: found.to_string(),
        });
    }
    Ok(())
}

pub fn evolve<T: Real>(rho0: &DensityMatrix<T>, h: &HermitianMatrix<T>, t: T) -> Result<DensityMatrix<T>> {
    same_dim("Hamiltonian", rho0.dim(), h.dim())?;
    let prop = Propagator::new(h)?;
    Ok(DensityMatrix(prop.evolve(rho0.as_matrix(), t)))
}

fn real_part<T: Real>(value: Cplx<T>) -> Result<T> {
    real_part_scaled(value, T::one())
}

/// Residue test relative to `scale`, a bound on the size of the trace.
fn real_part_scaled<T: Real>(value: Cplx<T>, scale: T) -> Result<T> {
    if value.im.abs() > T::lit(RESIDUE_TOL) * scale.max(T::one()) {
        return Err(Error::ImaginaryResidue { residue: value.im.as_f64() });
    }
    Ok(value.re)
}

fn check_setup<T: Real>(rho0: &DensityMatrix<T>, h: &HermitianMatrix<T>, projector: &Matrix<T>) -> Result<()> {
    same_dim("Hamiltonian", rho0.dim(), h.dim())?;
    projector.ensure_dim(rho0.dim())
}

/// `i·Tr([P, H] ρ(t))` for an arbitrary time-independent projector `P`.
///
/// With `P = 1` this vanishes identically: the whole space is closed.
pub fn current_for_projector<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &HermitianMatrix<T>,
    projector: &Matrix<T>,
    t: T,
) -> Result<T> {
    check_setup(rho0, h, projector)?;
    let prop = Propagator::new(h)?;
    let comm = projector.commutator(h.as_matrix());
    real_part(i_unit::<T>() * (&comm * &prop.evolve(rho0.as_matrix(), t)).trace())
}

/// Probability current `J(t) = i·Tr([Π(z), H] ρ(t))` into the system.
pub fn current<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &HermitianMatrix<T>,
    pp: &ProjectorPair<T>,
    t: T,
) -> Result<T> {
    current_for_projector(rho0, h, pp.pi_plus(), t)
}

/// Truncated Taylor series of `J` about `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorCurrent<T: Real> {
    /// `c_k = J^{(k)}(0)/k!`.
    pub coefficients: Vec<T>,
    pub z: UnitCirclePoint<T>,
}

impl<T: Real> TaylorCurrent<T> {
    /// `Σ_k c_k t^k`.
    pub fn eval(&self, t: T) -> T {
        self.coefficients.iter().rev().fold(T::zero(), |acc, &c| acc * t + c)
    }

    /// `k`-th derivative of `J` at zero.
    pub fn derivative(&self, k: usize) -> Option<T> {
        let fact: T = (1..=k).map(|j| T::lit(j as f64)).fold(T::one(), |a, b| a * b);
        self.coefficients.get(k).map(|&c| c * fact)
    }
}

/// Taylor coefficients `c_0..=c_order` of `J` at `t = 0`.
///
/// With `C₁ = [Π, H]` and `C_{k+1} = [C_k, H]`, the derivatives are
/// `J^{(k)}(0) = i^{k+1}·Tr(C_{k+1} ρ₀)`; so `c₀ = i·Tr(C₁ρ₀)`,
/// `c₁ = −Tr(C₂ρ₀)`, `c₂ = −(i/2)·Tr(C₃ρ₀)`. `‖C_k‖` grows like `(2‖H‖)^k`,
/// so the imaginary residue is judged relative to `‖C_{k+1}‖_F`.
pub fn current_derivatives_at_zero<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &HermitianMatrix<T>,
    pp: &ProjectorPair<T>,
    order: usize,
) -> Result<TaylorCurrent<T>> {
    check_setup(rho0, h, pp.pi_plus())?;
    let mut nested = pp.pi_plus().commutator(h.as_matrix());
    let mut i_pow = i_unit::<T>();
    let mut factorial = T::one();
    let mut coefficients = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if k > 0 {
            nested = nested.commutator(h.as_matrix());
            i_pow *= i_unit::<T>();
            factorial *= T::lit(k as f64);
        }
        let value = i_pow * (&nested * rho0.as_matrix()).trace();
        coefficients.push(real_part_scaled(value, nested.frobenius_norm())? / factorial);
    }
    Ok(TaylorCurrent { coefficients, z: pp.z() })
}

pub fn taylor_current_eval<T: Real>(tc: &TaylorCurrent<T>, t: T) -> T {
    tc.eval(t)
}

/// `J(t)` and the occupancy `Tr[Π(z) ρ(t)]` sampled on a time grid.
#[derive(Clone, Debug)]
pub struct CurrentSeries<T: Real> {
    pub times: Vec<T>,
    pub j_values: Vec<T>,
    pub occupancy: Vec<T>,
    pub q_values: Option<Vec<T>>,
    pub z: UnitCirclePoint<T>,
}

impl<T: Real> CurrentSeries<T> {
    /// Number of strict sign changes of `J` (exact zeros are skipped).
    pub fn sign_changes(&self) -> usize {
        let signs: Vec<bool> = self.j_values.iter().filter(|&&j| j != T::zero()).map(|&j| j > T::zero()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn j_min(&self) -> T {
        self.j_values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn j_max(&self) -> T {
        self.j_values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Largest spacing of the grid.
    pub fn max_step(&self) -> T {
        self.times.windows(2).map(|w| w[1] - w[0]).fold(T::zero(), T::max)
    }

    /// `max_i |(occ[i+1] − occ[i−1])/(t[i+1] − t[i−1]) − J(t_i)|` over interior points.
    pub fn central_difference_residual(&self) -> T {
        (1..self.times.len().saturating_sub(1))
            .map(|i| {
                let slope = (self.occupancy[i + 1] - self.occupancy[i - 1]) / (self.times[i + 1] - self.times[i - 1]);
                (slope - self.j_values[i]).abs()
            })
            .fold(T::zero(), T::max)
    }

    /// `10·Δt²·‖[[Π,H],H]‖_F`, the allowed central-difference mismatch.
    pub fn consistency_tolerance(&self, h: &HermitianMatrix<T>, pp: &ProjectorPair<T>) -> T {
        let second = pp.pi_plus().commutator(h.as_matrix()).commutator(h.as_matrix());
        let dt = self.max_step();
        T::lit(10.0) * dt * dt * second.frobenius_norm()
    }
}

fn check_grid<T: Real>(times: &[T]) -> Result<()> {
    if let Some(i) = times.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NonIncreasingGrid { index: i + 1 });
    }
    Ok(())
}

/// Exact `J(t)` and occupancy on every grid point.
pub fn current_series<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &HermitianMatrix<T>,
    pp: &ProjectorPair<T>,
    times: &[T],
) -> Result<CurrentSeries<T>> {
    check_setup(rho0, h, pp.pi_plus())?;
    check_grid(times)?;
    let prop = Propagator::new(h)?;
    let pi = pp.pi_plus();
    let comm = pi.commutator(h.as_matrix());
    let mut j_values = Vec::with_capacity(times.len());
    let mut occupancy = Vec::with_capacity(times.len());
    for &t in times {
        let rho = prop.evolve(rho0.as_matrix(), t);
        j_values.push(real_part(i_unit::<T>() * (&comm * &rho).trace())?);
        occupancy.push(real_part((pi * &rho).trace())?);
    }
    Ok(CurrentSeries { times: times.to_vec(), j_values, occupancy, q_values: None, z: pp.z() })
}

/// How `g[ρ(t)]` is obtained for `Q(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GSource {
    /// Pure states only: `g(|v⟩⟨v|) = ‖|v⟩⟨v|‖₁ = (Σ|v_r|)²`.
    PureExact,
    /// Multistart lower bound; the resulting `Q` is an upper bound.
    Lower(AscentOptions),
}

/// One sample of `Q(t) = 2|Tr[Π(z)ρ(t)]| / g[ρ(t)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QSample<T: Real> {
    pub t: T,
    pub q: T,
    /// `Q(t)·g[ρ(t)] = 2|Tr[Π(z)ρ(t)]|`.
    pub q_times_g: T,
    pub g: T,
    /// `false` when `g` is only a lower bound and `q` an upper bound.
    pub g_exact: bool,
}

fn g_of<T: Real>(rho: &Matrix<T>, source: GSource) -> Result<(T, bool)> {
    match source {
        GSource::PureExact => Ok((matrix_one_norm(rho), true)),
        GSource::Lower(opts) => Ok((g_lower(rho, opts)?.g_lower, false)),
    }
}

fn check_source<T: Real>(rho0: &DensityMatrix<T>, source: GSource) -> Result<()> {
    if source == GSource::PureExact && !rho0.is_pure() {
        return Err(Error::NotDensityMatrix {
            reason: format!("exact g requires a pure state (purity {})", rho0.purity()),
        });
    }
    Ok(())
}

fn q_sample<T: Real>(rho: &Matrix<T>, pi: &Matrix<T>, t: T, source: GSource) -> Result<QSample<T>> {
    let (g, g_exact) = g_of(rho, source)?;
    if !(g > T::zero()) {
        return Err(Error::NonPositiveG { value: g.as_f64() });
    }
    let q_times_g = T::lit(2.0) * (pi * rho).trace().norm();
    Ok(QSample { t, q: q_times_g / g, q_times_g, g, g_exact })
}

/// `Q(t)` with `θ = ρ(t)` and `V = W = Π(z)`, using `N[Π(z)] = 1/√2`.
pub fn q_of_t<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &HermitianMatrix<T>,
    pp: &ProjectorPair<T>,
    t: T,
    source: GSource,
) -> Result<QSample<T>> {
    check_setup(rho0, h, pp.pi_plus())?;
    check_source(rho0, source)?;
    let rho = Propagator::new(h)?.evolve(rho0.as_matrix(), t);
    q_sample(&rho, pp.pi_plus(), t, source)
}

pub fn q_series<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &HermitianMatrix<T>,
    pp: &ProjectorPair<T>,
    times: &[T],
    source: GSource,
) -> Result<Vec<QSample<T>>> {
    check_setup(rho0, h, pp.pi_plus())?;
    check_source(rho0, source)?;
    check_grid(times)?;
    let prop = Propagator::new(h)?;
    times
        .iter()
        .map(|&t| q_sample(&prop.evolve(rho0.as_matrix(), t), pp.pi_plus(), t, source))
        .collect()
}

/// `Q` of a density matrix in a closed system with `V = W = exp(−iHt)`; it
/// equals `Tr θ / g` at every `t`.
pub fn isolated_q<T: Real>(theta: &DensityMatrix<T>, h: &HermitianMatrix<T>, t: T, g_value: T) -> Result<T> {
    same_dim("Hamiltonian", theta.dim(), h.dim())?;
    let u = Propagator::new(h)?.unitary(-t);
    quantum_form(theta.as_matrix(), &u, &u, g_value)
}

/// Row-norm data for `Π(z)V` and `Π(−z)V`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectedRescaling<T: Real> {
    pub norm_plus: T,
    pub norm_minus: T,
    /// `max_i |[Π(z)VV†Π(z)]_{ii} − ½|`.
    pub diag_deviation: T,
}

pub fn projected_unitary_diagnostics<T: Real>(v: &Matrix<T>, pp: &ProjectorPair<T>) -> Result<ProjectedRescaling<T>> {
    v.ensure_dim(2 * pp.d())?;
    v.ensure_unitary(T::lit(1e-9))?;
    let plus = pp.pi_plus() * v;
    let minus = pp.pi_minus() * v;
    let gram = &plus * &plus.adjoint();
    let half = T::lit(0.5);
    let diag_deviation = (0..gram.rows()).map(|i| (gram[(i, i)].re - half).abs()).fold(T::zero(), T::max);
    Ok(ProjectedRescaling { norm_plus: rescaling_norm(&plus), norm_minus: rescaling_norm(&minus), diag_deviation })
}

/// A unitary on the full space projects to rescaling matrices on both halves.
pub fn projected_unitary_is_rescaling<T: Real>(v: &Matrix<T>, pp: &ProjectorPair<T>) -> Result<bool> {
    let diag = projected_unitary_diagnostics(v, pp)?;
    let limit = T::one() + T::lit(1e-12);
    Ok(diag.norm_plus <= limit && diag.norm_minus <= limit)
}

/// `Q` for `(θ, V, W)` on the system against `Q₁` for their z-Bargmann images.
#[derive(Clone, Debug)]
pub struct OpenVsIsolated<T: Real> {
    pub q: T,
    pub q1: T,
    pub trace: Cplx<T>,
    pub trace1: Cplx<T>,
    pub g: T,
    pub g1: T,
    pub norm_v: T,
    pub norm_v1: T,
    pub norm_w: T,
    pub norm_w1: T,
}

/// Both `g` values come from [`g_lower`] with the given options.
pub fn open_vs_isolated_report<T: Real>(
    theta: &Matrix<T>,
    v: &Matrix<T>,
    w: &Matrix<T>,
    z: UnitCirclePoint<T>,
    opts: AscentOptions,
) -> Result<OpenVsIsolated<T>> {
    let d = theta.ensure_square()?;
    v.ensure_dim(d)?;
    w.ensure_dim(d)?;
    let theta1 = to_bargmann_mat(theta, z)?;
    let v1 = to_bargmann_mat(v, z)?;
    let w1 = to_bargmann_mat(w, z)?;
    let trace = (&(&w.adjoint() * theta) * v).trace();
    let trace1 = (&(&w1.adjoint() * &theta1) * &v1).trace();
    let g = g_lower(theta, opts)?.g_lower;
    let g1 = g_lower(&theta1, opts)?.g_lower;
    Ok(OpenVsIsolated {
        q: quantum_form(theta, v, w, g)?,
        q1: quantum_form(&theta1, &v1, &w1, g1)?,
        trace,
        trace1,
        g,
        g1,
        norm_v: rescaling_norm(v),
        norm_v1: rescaling_norm(&v1),
        norm_w: rescaling_norm(w),
        norm_w1: rescaling_norm(&w1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bargmann::projector;
    use crate::builtins;
    use crate::linalg::complex;

    fn setup() -> (DensityMatrix<f64>, HermitianMatrix<f64>, ProjectorPair<f64>) {
        let rho = DensityMatrix::from_pure(&builtins::v0()).unwrap();
        let pp = projector(3, UnitCirclePoint::from_pi_fraction(1, 4)).unwrap();
        (rho, builtins::h1(), pp)
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(Matrix::<f64>::identity(2)).is_err());
        assert!(DensityMatrix::new(Matrix::<f64>::from_real_diag(&[1.5, -0.5])).is_err());
        let ok = DensityMatrix::new(Matrix::<f64>::from_real_diag(&[0.25, 0.75])).unwrap();
        assert!(!ok.is_pure());
        let mut m = Matrix::<f64>::from_real_diag(&[0.5, 0.5]);
        m[(0, 1)] = complex(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn evolve_trivial_and_commuting() {
        let (rho, h, _) = setup();
        let same = evolve(&rho, &h, 0.0).unwrap();
        assert!(same.as_matrix().max_abs_diff(rho.as_matrix()) < 1e-14);
        let diag = DensityMatrix::new(Matrix::from_real_diag(&[0.1, 0.2, 0.3, 0.1, 0.2, 0.1])).unwrap();
        let moved = evolve(&diag, &builtins::h2(), 3.7).unwrap();
        assert!(moved.as_matrix().max_abs_diff(diag.as_matrix()) < 1e-13);
    }

    #[test]
    fn current_of_maximally_mixed_vanishes() {
        let (_, h, pp) = setup();
        let mixed = DensityMatrix::new(Matrix::identity(6).scale_real(1.0 / 6.0)).unwrap();
        assert!(current(&mixed, &h, &pp, 0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn taylor_of_commuting_projector_is_zero() {
        let (rho, _, pp) = setup();
        let h = HermitianMatrix::new(pp.pi_plus().scale_real(2.5)).unwrap();
        let tc = current_derivatives_at_zero(&rho, &h, &pp, 2).unwrap();
        assert!(tc.coefficients.iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn taylor_eval_at_zero() {
        let tc = TaylorCurrent::<f64> { coefficients: vec![0.5, -3.0, 2.0], z: UnitCirclePoint::from_angle(0.0) };
        assert_eq!(tc.eval(0.0), 0.5);
        assert!((tc.eval(0.1) - (0.5 - 0.3 + 0.02)).abs() < 1e-15);
        assert_eq!(tc.derivative(2), Some(4.0));
        assert_eq!(tc.derivative(3), None);
    }

    #[test]
    fn grid_must_increase() {
        let (rho, h, pp) = setup();
        let err = current_series(&rho, &h, &pp, &[0.0, 0.1, 0.1]).unwrap_err();
        assert_eq!(err, Error::NonIncreasingGrid { index: 2 });
    }

    #[test]
    fn exact_g_requires_pure_state() {
        let (_, h, pp) = setup();
        let mixed = DensityMatrix::new(pp.pi_plus().scale_real(1.0 / 3.0)).unwrap();
        assert!(matches!(q_of_t(&mixed, &h, &pp, 0.1, GSource::PureExact), Err(Error::NotDensityMatrix { .. })));
        let s = q_of_t(&mixed, &h, &pp, 0.0, GSource::Lower(AscentOptions::new(16, 3))).unwrap();
        assert!(!s.g_exact);
        assert!((s.q_times_g - 2.0).abs() < 1e-12);
    }

    #[test]
    fn projected_unitary_rejects_non_unitary() {
        let (_, _, pp) = setup();
        let two = Matrix::<f64>::identity(6).scale_real(2.0);
        assert!(matches!(projected_unitary_is_rescaling(&two, &pp), Err(Error::NotUnitary { .. })));
        let diag = projected_unitary_diagnostics(&Matrix::identity(6), &pp).unwrap();
        assert!((diag.norm_plus - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(diag.diag_deviation < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let (_, h, pp) = setup();
        let small = DensityMatrix::new(Matrix::from_real_diag(&[0.5, 0.5])).unwrap();
        assert!(matches!(current(&small, &h, &pp, 0.0), Err(Error::DimensionMismatch { .. })));
    }
}
