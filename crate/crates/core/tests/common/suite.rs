//! Algebraic identities of the embedding, checked for one `(d, z₁, z₂)`.

use opensys::bargmann::{
    a_block, build_m, change_representation_mat, change_representation_vec, from_bargmann_mat, from_bargmann_vec, is_physical_vec, projector,
    projector_pair_z, to_bargmann_mat, to_bargmann_vec,
};
use opensys::dynamics::projected_unitary_diagnostics;
use opensys::grothendieck::rescaling_norm;
use opensys::hilbert::{matrix_one_norm, parity_matrix, shift_x};
use opensys::linalg::eigh;
use opensys::{Complex, ComplexMatrix, UnitCirclePoint};
use rand::Rng;

use super::{random_hermitian, random_ket, random_matrix, random_unitary};

/// Largest residual seen per identity, for reporting.
#[derive(Default, Debug)]
pub struct Residuals(pub Vec<(&'static str, f64)>);

impl Residuals {
    fn push(&mut self, name: &'static str, r: f64) {
        match self.0.iter_mut().find(|(n, _)| *n == name) {
            Some(entry) => entry.1 = entry.1.max(r),
            None => self.0.push((name, r)),
        }
    }

    pub fn worst(&self) -> (&'static str, f64) {
        self.0.iter().copied().fold(("none", 0.0), |a, b| if b.1 > a.1 { b } else { a })
    }
}

fn ident(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n)
}

fn scaled_identity(n: usize, s: Complex) -> ComplexMatrix {
    ident(n).scale(s)
}

/// Runs every identity once; `rng` supplies the random test objects.
pub fn check(d: usize, z1: UnitCirclePoint, z2: UnitCirclePoint, rng: &mut impl Rng, out: &mut Residuals) {
    let (a1, a2) = (z1.value(), z2.value());
    let one = Complex::new(1.0, 0.0);
    let m1 = build_m(d, z1).unwrap();
    let m2 = build_m(d, z2).unwrap();
    let m1n = build_m(d, z1.neg()).unwrap();
    let (m1, m2, m1n) = (m1.matrix(), m2.matrix(), m1n.matrix());

    out.push("M M† = 1", (m1 * &m1.adjoint()).max_abs_diff(&ident(d)));
    out.push("M(-z) M(z)† = 0", (m1n * &m1.adjoint()).max_abs());

    let a = |z: Complex| a_block(d, z).unwrap();
    let lhs = &(&a(a1) * &a(a2.conj())) + &(&a(-a1) * &a(-a2.conj()));
    out.push("A-block product", lhs.max_abs_diff(&scaled_identity(d, (one + a1 * a2.conj()) * 0.5)));
    let parity = parity_matrix::<f64>(d).unwrap();
    let xp = &shift_x::<f64>(d).unwrap() * &parity;
    out.push("parity squares", (&parity * &parity).max_abs_diff(&ident(d)).max((&xp * &xp).max_abs_diff(&ident(d))));
    out.push("A(z)† = A(z*)", a(a1).adjoint().max_abs_diff(&a(a1.conj())));
    out.push("A(z) + A(-z) = parity", (&a(a1) + &a(-a1)).max_abs_diff(&parity));
    let kappa = |z: Complex| &a(z.conj()) * &a(z);
    let lambda = |z: Complex| &a(z.conj()) * &a(-z);
    out.push("kappa sum", (&kappa(a1) + &kappa(-a1)).max_abs_diff(&ident(d)));
    out.push("lambda sum", (&lambda(a1) + &lambda(-a1)).max_abs());
    let k = kappa(a1);
    out.push("kappa diagonal", (0..d).map(|i| (k[(i, i)] - 0.5).norm()).fold(0.0, f64::max));

    out.push("M(z1) M(z2)†", (m1 * &m2.adjoint()).max_abs_diff(&scaled_identity(d, (one + a1 * a2.conj()) * 0.5)));

    let pp = projector(d, z1).unwrap();
    let (pi, pim) = (pp.pi_plus(), pp.pi_minus());
    out.push("Π(z) + Π(-z) = 1", (pi + pim).max_abs_diff(&ident(2 * d)));
    out.push("Π(z) Π(-z) = 0", (pi * pim).max_abs());
    out.push("Π² = Π", (pi * pi).max_abs_diff(pi));
    out.push("Tr Π = d", (pi.trace() - d as f64).norm());
    out.push("M Π = M", (m1 * pi).max_abs_diff(m1));
    out.push("M(-z) Π = 0", (m1n * pi).max_abs());

    if (one + a1.conj() * a2).norm() > 1e-3 {
        let p12 = projector_pair_z(d, z1, z2).unwrap();
        let p21 = projector_pair_z(d, z2, z1).unwrap();
        out.push("Π(z1,z2)² = Π(z1,z2)", (&p12 * &p12).max_abs_diff(&p12));
        out.push("Π(z1,z2)† = Π(z2,z1)", p12.adjoint().max_abs_diff(&p21));
        out.push("Tr Π(z1,z2) = d", (p12.trace() - d as f64).norm());
        let pi2 = projector(d, z2).unwrap();
        let factor = (2.0 + a1.conj() * a2 + a1 * a2.conj()) * 0.25;
        out.push("Π(z1) Π(z2)", (pi * pi2.pi_plus()).max_abs_diff(&p12.scale(factor)));

        let v = random_ket(rng, d);
        let vb2 = to_bargmann_vec(&v, z2).unwrap();
        let vb1 = change_representation_vec(&vb2, z1).unwrap();
        let back = change_representation_vec(&vb1, z2).unwrap();
        out.push("representation change", vb1.entries().max_abs_diff(to_bargmann_vec(&v, z1).unwrap().entries()));
        out.push("representation round trip", back.entries().max_abs_diff(vb2.entries()));
        let s = random_matrix(rng, d, d);
        let moved = change_representation_mat(&to_bargmann_mat(&s, z2).unwrap(), z2, z1).unwrap();
        out.push("matrix representation change", moved.max_abs_diff(&to_bargmann_mat(&s, z1).unwrap()));
    }

    out.push("Π diagonal", (0..2 * d).map(|i| (pi[(i, i)] - 0.5).norm()).fold(0.0, f64::max));
    out.push("N(Π) = 1/√2", (rescaling_norm(pi) - 0.5f64.sqrt()).abs());
    if d >= 3 {
        let mut worst: f64 = 0.0;
        for r in 0..2 * d {
            let mut quarter = 0;
            for c in (0..2 * d).filter(|&c| c != r) {
                let m = pi[(r, c)].norm();
                if (m - 0.25).abs() < 1e-9 {
                    quarter += 1;
                } else {
                    worst = worst.max(m);
                }
            }
            if quarter != 4 {
                worst = worst.max(1.0);
            }
        }
        out.push("Π row structure", worst);
        out.push("‖Π‖₁ = 3d", (matrix_one_norm(pi) - 3.0 * d as f64).abs());
    }

    let v = random_ket(rng, d);
    let u = random_ket(rng, d);
    let vb = to_bargmann_vec(&v, z1).unwrap();
    let ub = to_bargmann_vec(&u, z1).unwrap();
    out.push("scalar product", (vb.entries().inner(ub.entries()) - v.inner(&u)).norm());
    out.push("vector round trip", from_bargmann_vec(&vb).unwrap().max_abs_diff(&v));
    out.push("physical image", if is_physical_vec(vb.entries(), z1) { 0.0 } else { 1.0 });

    let t = random_hermitian(rng, d);
    let tb = to_bargmann_mat(t.as_matrix(), z1).unwrap();
    out.push("trace transfer", (tb.trace() - t.as_matrix().trace()).norm());
    let mut expect = eigh(t.as_matrix()).unwrap().values;
    expect.extend(std::iter::repeat_n(0.0, d));
    expect.sort_by(f64::total_cmp);
    let got = eigh(&tb).unwrap().values;
    out.push("spectrum transfer", got.iter().zip(&expect).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    let s = random_matrix(rng, d, d);
    let sb = to_bargmann_mat(&s, z1).unwrap();
    let prod_b = to_bargmann_mat(&(&s * t.as_matrix()), z1).unwrap();
    out.push("product transfer", (&sb * &tb).max_abs_diff(&prod_b));
    out.push("matrix round trip", from_bargmann_mat(&sb, z1).unwrap().max_abs_diff(&s));

    let big = random_unitary(rng, 2 * d);
    let diag = projected_unitary_diagnostics(&big, &pp).unwrap();
    out.push("projected unitary rescaling", (diag.norm_plus - 1.0).max(diag.norm_minus - 1.0).max(0.0));
    out.push("projected unitary diagonal", diag.diag_deviation);
}
