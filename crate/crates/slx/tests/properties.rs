//! Randomized invariants.

use std::sync::OnceLock;

use num_complex::Complex64 as C;
use proptest::prelude::*;
use slx::Context;
use slx::linalg::{Mat2, det, eigh, fro, hermitian_part, mat, nullity, real_mat};
use slx::lines::{LineFamily, t_diag, t_roots};
use slx::oracle::compare;
use slx::problem::catalog;
use slx::specrep::point_mass_theta;
use slx::spectra::{BoundaryParameter, CoupledBC, Relation, degenerate_parameter, eigenvalues, multiplicity};
use slx::weyl::{m0, m_inf};

fn free() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(|| Context::new(catalog::free()))
}

fn legendre() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(|| Context::new(catalog::legendre()))
}

fn ctx_for(which: bool) -> &'static Context {
    if which { legendre() } else { free() }
}

fn hermitian() -> impl Strategy<Value = Mat2> {
    (-3.0..3.0f64, -3.0..3.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_map(|(a, d, re, im)| mat(C::new(a, 0.0), C::new(re, im), C::new(re, -im), C::new(d, 0.0)))
}

fn real_symmetric() -> impl Strategy<Value = Mat2> {
    (-3.0..3.0f64, -3.0..3.0f64, -2.0..2.0f64).prop_map(|(a, d, b)| real_mat(a, b, b, d))
}

fn im_part(m: &Mat2) -> Mat2 {
    hermitian_part(&((m - m.adjoint()) / C::new(0.0, 2.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn m0_is_herglotz(which in any::<bool>(), x in -5.0..30.0f64, y in 0.01..3.0f64) {
        let m = m0(ctx_for(which), C::new(x, y)).unwrap().matrix;
        let (ev, _) = eigh(&im_part(&m));
        prop_assert!(ev[0] >= -1e-10 * (1.0 + fro(&m)), "{ev:?}");
        // Real symmetry: M0(conj z) = M0(z)*.
        let mc = m0(ctx_for(which), C::new(x, -y)).unwrap().matrix;
        prop_assert!(fro(&(mc - m.adjoint())) < 1e-9 * (1.0 + fro(&m)));
    }

    #[test]
    fn minf_is_minus_inverse_of_m0(which in any::<bool>(), x in -5.0..30.0f64, y in 0.0..2.0f64) {
        let z = C::new(x, y);
        let ctx = ctx_for(which);
        if let (Ok(a), Ok(b)) = (m0(ctx, z), m_inf(ctx, z)) {
            let defect = fro(&(b.matrix * a.matrix + Mat2::identity()));
            prop_assert!(defect < 1e-9 * (1.0 + fro(&a.matrix) * fro(&b.matrix)), "{defect}");
        }
    }

    #[test]
    fn at_most_two_t_roots(tt in hermitian(), th in hermitian(), lambda in 0.0..20.0f64) {
        prop_assume!(det(&th).norm() > 1e-3);
        let ctx = free();
        let fam = LineFamily::new(tt, th).unwrap();
        if let Ok(sol) = t_roots(ctx, &fam, lambda) {
            prop_assert!(sol.roots.len() <= 2);
            prop_assert!(!sol.all_t);
            let minf = m_inf(ctx, C::new(lambda, 0.0)).unwrap().matrix;
            for &t in &sol.roots {
                let x = fam.at(t) - minf;
                prop_assert!(nullity(&x, 1e-6) >= 1, "t = {t}: {x:?}");
            }
        }
    }

    #[test]
    fn diagonal_closed_form_agrees(z in prop_oneof![-3.0..-0.1f64, 0.1..3.0f64], e in prop_oneof![-3.0..-0.1f64, 0.1..3.0f64], lambda in 0.0..20.0f64) {
        let ctx = free();
        let fam = LineFamily::new(Mat2::zeros(), real_mat(z, 0.0, 0.0, e)).unwrap();
        if let (Ok(a), Ok(b)) = (t_diag(ctx, z, e, lambda), t_roots(ctx, &fam, lambda)) {
            prop_assert_eq!(a.len(), b.roots.len());
            for (x, y) in a.iter().zip(&b.roots) {
                prop_assert!((x - y).abs() < 1e-9 * x.abs().max(1.0), "{a:?} vs {:?}", b.roots);
            }
        }
    }

    #[test]
    fn equations_give_admissible_relations(h in hermitian(), f in hermitian(), s in 0.1..2.0f64) {
        // G (Gamma0 - H Gamma1) = 0 for Hermitian H and invertible G.
        let g = f + Mat2::identity() * C::new(10.0 * s, 0.0);
        let (e0, e1) = (g, -g * h);
        let rel = Relation::from_equations(&e0, &e1).unwrap();
        prop_assert!(rel.admissibility_residual() < 1e-9);
        prop_assert_eq!(rel.mul_dim, 0);
    }

    #[test]
    fn coupled_round_trip(alpha in -3.1..3.1f64, r11 in prop_oneof![-2.0..-0.2f64, 0.2..2.0f64], r12 in prop_oneof![-2.0..-0.2f64, 0.2..2.0f64], r21 in -2.0..2.0f64) {
        let r22 = (1.0 + r12 * r21) / r11;
        let bc = CoupledBC::new(alpha, [[r11, r12], [r21, r22]]).unwrap();
        let theta = bc.to_theta().unwrap();
        prop_assert!(fro(&(theta - theta.adjoint())) < 1e-12);
        // (alpha, R) and (alpha + pi, -R) are the same condition; compare e^{i alpha} R.
        let back = CoupledBC::from_theta(&theta).unwrap();
        prop_assert!(fro(&(back.transfer() - bc.transfer())) < 1e-9 * (1.0 + fro(&bc.transfer())));
        let rel = BoundaryParameter::coupled(&bc).unwrap().as_relation();
        prop_assert!(rel.admissibility_residual() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eigenvalues_are_zeros_with_consistent_multiplicity(theta in hermitian()) {
        let ctx = free();
        let p = BoundaryParameter::matrix(theta).unwrap();
        let ev = eigenvalues(ctx, &p, -10.0, 12.0).unwrap();
        for e in &ev {
            prop_assert!(e.residual < 1e-6, "{e:?}");
            prop_assert!((1..=2).contains(&e.multiplicity));
            if let Ok(m) = multiplicity(ctx, &p, e.lambda) {
                prop_assert_eq!(m, e.multiplicity);
            }
        }
        for w in ev.windows(2) {
            prop_assert!(w[0].lambda < w[1].lambda);
        }
    }

    #[test]
    fn degenerate_parameter_gives_double(lambda in 0.3..20.0f64) {
        let ctx = free();
        prop_assume!((lambda.sqrt() - lambda.sqrt().round()).abs() > 0.02);
        let d = degenerate_parameter(ctx, lambda).unwrap();
        let theta = d.theta.unwrap();
        prop_assert!(theta.iter().all(|z| z.im == 0.0));
        prop_assert!(theta[(0, 1)].norm() > 0.0 && det(&theta).norm() > 0.0);
        prop_assert_eq!(multiplicity(ctx, &BoundaryParameter::matrix(theta).unwrap(), lambda).unwrap(), 2);
        let mut bumped = theta;
        bumped[(1, 1)] += C::new(1e-3, 0.0);
        prop_assert!(multiplicity(ctx, &BoundaryParameter::matrix(bumped).unwrap(), lambda).unwrap() <= 1);
    }

    #[test]
    fn weights_are_psd_with_rank_equal_multiplicity(vt in real_symmetric()) {
        let ctx = free();
        let p = BoundaryParameter::vartheta(vt).unwrap();
        for e in eigenvalues(ctx, &p, -6.0, 8.0).unwrap() {
            let Ok(pm) = point_mass_theta(ctx, &vt, e.lambda) else { continue };
            let (w, _) = eigh(&pm.weight);
            prop_assert!(w[0] >= -1e-6 * pm.trace.abs().max(1.0), "{w:?}");
            prop_assert_eq!(pm.rank, e.multiplicity);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn finite_differences_agree(theta in real_symmetric()) {
        let cmp = compare(free(), &BoundaryParameter::matrix(theta).unwrap(), 0.0, 15.0, 2000, None).unwrap();
        prop_assert!(cmp.passed(), "{cmp:?}");
    }
}
