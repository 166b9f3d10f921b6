//! Classical and quantum Grothendieck quadratic forms.
//!
//! For an `n × n` matrix `θ`:
//!
//! * `C(θ) = |Σ θ_{rs} a_r b_s|` with every `|a_r|, |b_s| ≤ 1`;
//! * `g(θ) = sup C(θ)`, bracketed as `g_lower ≤ g ≤ min(g′, ‖θ‖₁)` where
//!   `g′ = n·s_max` and `‖θ‖₁` is the entrywise 1-norm;
//! * `Q = |Tr(W†θV)| / (N(W)·N(V)·g)` with `N` the largest row norm.
//!
//! Computing `g` exactly is NP-hard in general. [`g_lower`] runs a multistart
//! alternating phase ascent which always returns an attained value of `C`.
//! Closed forms are used where they exist ([`g_pure`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{displaced_parity, displacement, hermitian_expm, matrix_one_norm, position_basis};
use crate::linalg::{max_singular_value, HermitianMatrix, Ket, Matrix};
use crate::scalar::{cis, phase_or_one, Cplx, Real};

/// Upper bound on the complex Grothendieck constant.
pub const K_G_UPPER: f64 = 1.4049;

/// Gap required for the strict window inequality `g < min(g′, ‖θ‖₁)`.
pub const WINDOW_MARGIN: f64 = 1e-6;

/// Slack on the unit-disc and rescaling-norm memberships.
pub const DISC_TOL: f64 = 1e-12;

/// Known bound on the complex Grothendieck constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrothendieckConstantBound {
    pub k_g_upper: f64,
}

impl Default for GrothendieckConstantBound {
    fn default() -> Self {
        Self { k_g_upper: K_G_UPPER }
    }
}

/// Scalars `a_r` in the closed unit disc.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitDiscVector<T: Real>(Vec<Cplx<T>>);

impl<T: Real> UnitDiscVector<T> {
    pub fn new(entries: Vec<Cplx<T>>) -> Result<Self> {
        for (index, z) in entries.iter().enumerate() {
            let m = z.norm();
            if !(m <= T::one() + T::lit(DISC_TOL)) {
                return Err(Error::OutsideUnitDisc { index, modulus: m.as_f64() });
            }
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[T]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Cplx::new(x, T::zero())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Cplx<T>] {
        &self.0
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }
}

/// Matrix with `N(V) ≤ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RescalingMatrix<T: Real>(Matrix<T>);

impl<T: Real> RescalingMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        let n = rescaling_norm(&m);
        if n > T::one() + T::lit(DISC_TOL) {
            return Err(Error::InvalidScale { lambda: n.as_f64() });
        }
        Ok(Self(m))
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }
}

/// `N(V) = max_i sqrt(Σ_j |V_ij|²)`.
pub fn rescaling_norm<T: Real>(v: &Matrix<T>) -> T {
    (0..v.rows())
        .map(|r| v.row(r).iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .fold(T::zero(), T::max)
}

/// `λ·V/N(V)`, a rescaling matrix for any nonzero `V` and `0 < λ ≤ 1`.
pub fn normalize_rescaling<T: Real>(v: &Matrix<T>, lambda: T) -> Result<RescalingMatrix<T>> {
    if !(lambda > T::zero() && lambda <= T::one()) {
        return Err(Error::InvalidScale { lambda: lambda.as_f64() });
    }
    let n = rescaling_norm(v);
    if n == T::zero() {
        return Err(Error::ZeroNorm);
    }
    Ok(RescalingMatrix(v.scale_real(lambda / n)))
}

/// `𝒜_{rs} = a_r/√d`: every row constant.
pub fn dequantisation_matrix<T: Real>(a: &UnitDiscVector<T>) -> RescalingMatrix<T> {
    let d = a.len();
    let s = T::one() / T::lit(d as f64).sqrt();
    RescalingMatrix(Matrix::from_fn(d, d, |r, _| a.0[r] * s))
}

fn check_form_dims<T: Real>(theta: &Matrix<T>, a: usize, b: usize) -> Result<()> {
    if a != theta.rows() || b != theta.cols() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{} matrix with vectors of length {} and {}", theta.rows(), theta.cols(), theta.rows(), theta.cols()),
            found: format!("vectors of length {a} and {b}"),
        });
    }
    Ok(())
}

fn bilinear<T: Real>(theta: &Matrix<T>, a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    (0..theta.rows())
        .map(|r| a[r] * theta.row(r).iter().zip(b).map(|(t, bs)| t * bs).sum::<Cplx<T>>())
        .sum()
}

/// `C(θ) = |Σ_{r,s} θ_{rs} a_r b_s|`.
pub fn classical_form<T: Real>(
    theta: &Matrix<T>,
    a: &UnitDiscVector<T>,
    b: &UnitDiscVector<T>,
) -> Result<T> {
    check_form_dims(theta, a.len(), b.len())?;
    Ok(bilinear(theta, &a.0, &b.0).norm())
}

/// `|Tr(W†θV)| / (N(W)·N(V)·g)`, with `g` supplied by the caller (exact when
/// known, otherwise a lower bound, which makes the result an upper bound).
pub fn quantum_form<T: Real>(theta: &Matrix<T>, v: &Matrix<T>, w: &Matrix<T>, g_value: T) -> Result<T> {
    let n = theta.ensure_square()?;
    v.ensure_dim(n)?;
    w.ensure_dim(n)?;
    if !(g_value > T::zero()) {
        return Err(Error::NonPositiveG { value: g_value.as_f64() });
    }
    let nv = rescaling_norm(v);
    let nw = rescaling_norm(w);
    if nv == T::zero() || nw == T::zero() {
        return Err(Error::ZeroNorm);
    }
    let tr = (&(&w.adjoint() * theta) * v).trace();
    Ok(tr.norm() / (nw * nv * g_value))
}

/// `g′(θ) = n·s_max`.
pub fn g_prime<T: Real>(theta: &Matrix<T>) -> Result<T> {
    let n = theta.ensure_square()?;
    Ok(T::lit(n as f64) * max_singular_value(theta)?)
}

/// Closed form `g(|f⟩⟨f|) = (Σ_r |f_r|)²` for a normalised `f`.
pub fn g_pure<T: Real>(f: &Ket<T>) -> Result<T> {
    f.ensure_normalized(T::lit(1e-10))?;
    Ok(f.l1_norm().powi(2))
}

/// Settings of the multistart phase ascent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AscentOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self { restarts: 64, seed: 0, max_sweeps: 10_000 }
    }
}

impl AscentOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self { restarts, seed, ..Self::default() }
    }
}

/// Result of [`g_lower`] for one matrix.
#[derive(Clone, Debug)]
pub struct GrothendieckReport<T: Real> {
    /// Best value of `C(θ)` found; a lower bound on `g(θ)`.
    pub g_lower: T,
    pub g_prime: T,
    pub one_norm: T,
    /// `g_lower < min(g′, ‖θ‖₁) − margin`.
    pub window_open: bool,
    pub witness_a: UnitDiscVector<T>,
    pub witness_b: UnitDiscVector<T>,
    pub restarts_used: usize,
}

impl<T: Real> GrothendieckReport<T> {
    /// `min(g′, ‖θ‖₁)`, an upper bound on `g(θ)`.
    pub fn g_upper(&self) -> T {
        self.g_prime.min(self.one_norm)
    }
}

const ASCENT_IMPROVEMENT_TOL: f64 = 1e-12;

/// One alternating ascent from the starting phases `b`. Returns `(C, a, b)`.
fn ascend<T: Real>(
    theta: &Matrix<T>,
    theta_t: &Matrix<T>,
    mut b: Vec<Cplx<T>>,
    max_sweeps: usize,
) -> (T, Vec<Cplx<T>>, Vec<Cplx<T>>) {
    let mut a = vec![Cplx::new(T::one(), T::zero()); theta.rows()];
    let mut best = T::neg_infinity();
    for _ in 0..max_sweeps {
        // a_r ← conj(phase((θb)_r)) makes every term a_r(θb)_r = |(θb)_r|.
        for (r, ar) in a.iter_mut().enumerate() {
            let u: Cplx<T> = theta.row(r).iter().zip(&b).map(|(t, bs)| t * bs).sum();
            *ar = phase_or_one(u).conj();
        }
        for (s, bs) in b.iter_mut().enumerate() {
            let u: Cplx<T> = theta_t.row(s).iter().zip(&a).map(|(t, ar)| t * ar).sum();
            *bs = phase_or_one(u).conj();
        }
        let value = bilinear(theta, &a, &b).norm();
        let improved = value - best;
        best = best.max(value);
        if improved < T::lit(ASCENT_IMPROVEMENT_TOL) {
            break;
        }
    }
    (best, a, b)
}

/// Multistart alternating phase ascent for `g(θ)`.
///
/// The maximum of `C` over the closed polydisc is attained on the torus, so
/// only phases are searched. Restart `k` draws its starting phases from stream
/// `k` of a ChaCha8 generator keyed by `seed`, making every run reproducible
/// from `(seed, restarts)`.
pub fn g_lower<T: Real>(theta: &Matrix<T>, opts: AscentOptions) -> Result<GrothendieckReport<T>> {
    theta.ensure_square()?;
    if opts.restarts < 1 {
        return Err(Error::NoRestarts);
    }
    if theta.max_abs() == T::zero() {
        return Err(Error::ZeroNorm);
    }
    let n = theta.cols();
    let theta_t = theta.transpose();
    let mut best: Option<(T, Vec<Cplx<T>>, Vec<Cplx<T>>)> = None;
    for k in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(k as u64);
        let start: Vec<Cplx<T>> = (0..n)
            .map(|_| cis(T::lit(rng.random::<f64>() * std::f64::consts::TAU)))
            .collect();
        let run = ascend(theta, &theta_t, start, opts.max_sweeps);
        if best.as_ref().is_none_or(|b| run.0 > b.0) {
            best = Some(run);
        }
    }
    let (g_low, a, b) = best.expect("at least one restart");
    let gp = g_prime(theta)?;
    let one = matrix_one_norm(theta);
    Ok(GrothendieckReport {
        g_lower: g_low,
        g_prime: gp,
        one_norm: one,
        window_open: g_low < gp.min(one) - T::lit(WINDOW_MARGIN),
        witness_a: UnitDiscVector(a),
        witness_b: UnitDiscVector(b),
        restarts_used: opts.restarts,
    })
}

/// Strict window test `g < min(g′, ‖θ‖₁) − margin`; necessary for `Q > 1`.
pub fn window_check<T: Real>(theta: &Matrix<T>, report: &GrothendieckReport<T>) -> bool {
    let upper = match g_prime(theta) {
        Ok(gp) => gp.min(matrix_one_norm(theta)),
        Err(_) => report.g_upper(),
    };
    report.g_lower < upper - T::lit(WINDOW_MARGIN)
}

/// `|⟨f|𝔇(a,b,c)|f⟩| / g(|f⟩⟨f|)`: normalised Weyl function.
pub fn weyl_q<T: Real>(f: &Ket<T>, a: i64, b: i64, c: i64) -> Result<T> {
    let g = g_pure(f)?;
    let dm = displacement::<T>(f.dim(), a, b, c)?;
    Ok(f.inner(&dm.mul_vec(f)).norm() / g)
}

/// `|⟨f|𝔓(a,b)|f⟩| / g(|f⟩⟨f|)`: normalised Wigner function.
pub fn wigner_q<T: Real>(f: &Ket<T>, a: i64, b: i64) -> Result<T> {
    let g = g_pure(f)?;
    let p = displaced_parity::<T>(f.dim(), a, b)?;
    Ok(f.inner(&p.mul_vec(f)).norm() / g)
}

/// `|⟨f|U|X;ν⟩|² / g(|f⟩⟨f|)`: normalised tomographic probability.
pub fn tomography_q<T: Real>(f: &Ket<T>, u: &Matrix<T>, nu: usize) -> Result<T> {
    let g = g_pure(f)?;
    u.ensure_dim(f.dim())?;
    u.ensure_unitary(T::lit(1e-9))?;
    let e = position_basis::<T>(f.dim(), nu)?;
    let col = u.mul_vec(&e);
    Ok(f.inner(&col).norm_sqr() / g)
}

/// The rank-one matrix `U|X;ν⟩⟨X;ν|U†` used as `V` in the tomography form.
pub fn tomography_rescaling<T: Real>(u: &Matrix<T>, nu: usize) -> Result<Matrix<T>> {
    let n = u.ensure_square()?;
    let col = u.mul_vec(&position_basis::<T>(n, nu)?);
    Ok(col.projector())
}

/// `|⟨X;ν|exp(iHt) f⟩| / Σ_r |f_r|`.
pub fn component_q<T: Real>(f: &Ket<T>, h: &HermitianMatrix<T>, t: T, nu: usize) -> Result<T> {
    f.ensure_normalized(T::lit(1e-10))?;
    if h.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", f.dim()),
            found: format!("{0}x{0}", h.dim()),
        });
    }
    if nu >= f.dim() {
        return Err(Error::IndexOutOfRange { index: nu, dim: f.dim() });
    }
    let ft = hermitian_expm(h, t)?.mul_vec(f);
    Ok(ft[nu].norm() / f.l1_norm())
}
