#![allow(dead_code)]

pub mod suite;

use std::f64::consts::TAU;

use opensys::hilbert::hermitian_expm;
use opensys::{Complex, ComplexMatrix, HermitianMatrix, Ket, UnitCirclePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_z(rng: &mut impl Rng) -> UnitCirclePoint {
    UnitCirclePoint::from_angle(rng.random::<f64>() * TAU)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex {
    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_ket(rng: &mut impl Rng, n: usize) -> Ket {
    let raw: Vec<Complex> = (0..n).map(|_| random_complex(rng)).collect();
    Ket::new(raw).unwrap().normalized().unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let a = random_matrix(rng, n, n);
    HermitianMatrix::new((&a + &a.adjoint()).scale_real(0.5)).unwrap()
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, n);
    hermitian_expm(&h, rng.random_range(0.5..3.0)).unwrap()
}

/// `A A† / Tr(A A†)`.
pub fn random_density(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    let p = &a * &a.adjoint();
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}

/// `‖θ b‖₁` with `b = (1, e^{iφ₁}, …)`: the classical form after the optimal
/// choice of `a` for fixed `b`.
fn row_sum(theta: &ComplexMatrix, phases: &[f64]) -> f64 {
    let n = theta.cols();
    let b: Vec<Complex> = std::iter::once(Complex::new(1.0, 0.0))
        .chain(phases.iter().map(|&p| Complex::from_polar(1.0, p)))
        .collect();
    (0..theta.rows())
        .map(|r| (0..n).map(|s| theta[(r, s)] * b[s]).sum::<Complex>().norm())
        .sum()
}

/// Independent `g` for `n ≤ 3`: a full phase grid of 72 points per free
/// phase, then a compass search from the best grid points.
pub fn grid_oracle_g(theta: &ComplexMatrix) -> f64 {
    let n = theta.cols();
    assert!((1..=3).contains(&n), "oracle handles n ≤ 3");
    let free = n - 1;
    let steps = 72usize;
    let h = TAU / steps as f64;
    let total = steps.pow(free as u32);
    let mut samples: Vec<(f64, Vec<f64>)> = (0..total)
        .map(|mut k| {
            let mut ph = Vec::with_capacity(free);
            for _ in 0..free {
                ph.push((k % steps) as f64 * h);
                k /= steps;
            }
            (row_sum(theta, &ph), ph)
        })
        .collect();
    samples.sort_by(|x, y| y.0.total_cmp(&x.0));
    samples
        .into_iter()
        .take(6)
        .map(|(v, ph)| compass(theta, v, ph, h))
        .fold(0.0, f64::max)
}

fn compass(theta: &ComplexMatrix, mut value: f64, mut ph: Vec<f64>, mut step: f64) -> f64 {
    while step > 1e-11 {
        let mut moved = false;
        for i in 0..ph.len() {
            for dir in [1.0, -1.0] {
                let mut trial = ph.clone();
                trial[i] += dir * step;
                let v = row_sum(theta, &trial);
                if v > value {
                    value = v;
                    ph = trial;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    value
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
