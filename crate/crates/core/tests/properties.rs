use std::f64::consts::PI;

use asc_core::ascpoly::{u_eval, u_explicit, u_recurrence, FamilyParams};
use asc_core::genfun::{connection_coeffs, verify_connection};
use asc_core::orthocheck::sbp_identity_check;
use asc_core::qkernel::{q_pow_binom2, qpoch_finite, qpoch_infinite, SeriesTruncation};
use asc_core::qlattice::SpiralLattice;
use asc_core::zeros::{find_zeros, jacobi_matrix, match_zero_sets};
use asc_core::{Complex64, Poly};
use proptest::prelude::*;

fn base() -> impl Strategy<Value = Complex64> {
    (0.2f64..0.85, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn param() -> impl Strategy<Value = Complex64> {
    (0.3f64..2.5, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn small_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree + 1).prop_map(|v| {
        Poly::new(
            v.into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn explicit_matches_recurrence(a in param(), q in base(), n in 0usize..10) {
        let params = FamilyParams::new(a, q).unwrap();
        let e = u_explicit(n, &params).unwrap();
        let r = u_recurrence(n, &params);
        prop_assert!(e.max_abs_diff(&r) <= 1e-10 * r.max_abs_coeff().max(1.0));
    }

    #[test]
    fn endpoint_value(a in param(), q in base(), n in 0usize..12) {
        let params = FamilyParams::new(a, q).unwrap();
        let u1 = u_eval(n, &params, Complex64::new(1.0, 0.0));
        let expected = (-a).powu(n as u32) * q_pow_binom2(q, n);
        let cancellation = 1e-13 * (n as f64 + 1.0) * u_recurrence(n, &params).max_abs_coeff();
        prop_assert!((u1 - expected).norm() <= 1e-10 * expected.norm() + cancellation);
    }

    #[test]
    fn finite_pochhammer_splits(z in param(), q in base(), m in 0usize..8, n in 0usize..8) {
        let whole = qpoch_finite(z, q, m + n);
        let split = qpoch_finite(z, q, m) * qpoch_finite(z * q.powu(m as u32), q, n);
        prop_assert!((whole - split).norm() <= 1e-12 * whole.norm().max(1.0));
    }

    #[test]
    fn infinite_pochhammer_shift(z in param(), q in base()) {
        let t = SeriesTruncation::default();
        let lhs = qpoch_infinite(z, q, &t).unwrap();
        let rhs = (Complex64::new(1.0, 0.0) - z) * qpoch_infinite(z * q, q, &t).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn characteristic_polynomial_is_u(a in param(), q in base(), n in 1usize..9) {
        let j = jacobi_matrix(n, a, q).unwrap();
        let r = u_recurrence(n, &FamilyParams::new(a, q).unwrap());
        prop_assert!(j.characteristic_polynomial().max_abs_diff(&r) <= 1e-10 * r.max_abs_coeff().max(1.0));
    }

    #[test]
    fn zeros_trace_and_reconstruction(a in param(), q in base(), n in 1usize..11) {
        let set = find_zeros(n, a, q, 1e-8).unwrap();
        prop_assert!(set.max_residual() < 1e-8);
        let one = Complex64::new(1.0, 0.0);
        let trace = (a + one) * (one - q.powu(n as u32)) / (one - q);
        prop_assert!((set.sum() - trace).norm() < 1e-10 * trace.norm().max(1.0));
        let rebuilt = Poly::from_roots(&set.zeros);
        let r = u_recurrence(n, &FamilyParams::new(a, q).unwrap());
        prop_assert!(rebuilt.max_abs_diff(&r) <= 1e-8 * r.max_abs_coeff().max(1.0));
    }

    #[test]
    fn zeros_match_eigenvalues(a in param(), q in base(), n in 2usize..9) {
        let set = find_zeros(n, a, q, 1e-8).unwrap();
        let eig = jacobi_matrix(n, a, q).unwrap().eigenvalues().unwrap();
        let dev = match_zero_sets(&set.zeros, &eig).unwrap();
        prop_assert!(dev < 1e-6, "{dev}");
    }

    #[test]
    fn classical_zeros_are_real(a in -2.0f64..-0.1, q in 0.2f64..0.8, n in 1usize..13) {
        let set = find_zeros(n, Complex64::new(a, 0.0), Complex64::new(q, 0.0), 1e-8).unwrap();
        for z in &set.zeros {
            prop_assert!(z.im.abs() < 1e-8);
            prop_assert!(z.re >= a - 1e-8 && z.re <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn sbp_corrected_sign_balances(f in small_poly(5), g in small_poly(5), q in base(), m in 1usize..50) {
        let rep = sbp_identity_check(|x| f.eval(x), |x| g.eval(x), q, m).unwrap();
        prop_assert!(rep.residual_corrected() < 1e-12);
    }

    #[test]
    fn connection_identity_family(a in param(), q in base(), n in 0usize..8) {
        let cc = connection_coeffs(n, a, a, q).unwrap();
        for (k, v) in cc.c.iter().enumerate() {
            let expected = if k == n { 1.0 } else { 0.0 };
            prop_assert!((v - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn connection_reconstructs(a in param(), b in param(), q in base(), n in 0usize..8) {
        let chk = verify_connection(n, a, b, q).unwrap();
        prop_assert!(chk.residual_rel < 1e-9, "{}", chk.residual_rel);
    }

    #[test]
    fn lattice_integral_is_linear(a in param(), q in base(), s in -2.0f64..2.0) {
        let lattice = SpiralLattice::with_order(a, q, 30).unwrap();
        let f = |x: Complex64| x * x;
        let g = |x: Complex64| x + 1.0;
        let combined = lattice.integrate(|x| f(x) + g(x) * s);
        let split = lattice.integrate(f) + lattice.integrate(g) * s;
        prop_assert!((combined - split).norm() < 1e-12 * combined.norm().max(1.0));
    }
}
