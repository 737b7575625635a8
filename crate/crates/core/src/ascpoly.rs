//! Al-Salam–Carlitz polynomials `U_n^(a)(x; q)` built three independent ways:
//! the explicit terminating sum, the three-term recurrence, and the
//! Rodrigues-type formula.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qkernel::{
    ensure_finite, nested_q_difference, q_pow_binom2, qpoch_finite, QBase, Regime, SeriesTruncation,
};
use crate::qlattice::{weight_eval, WeightSpec};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Below this the Rodrigues quotient is rejected.
pub const SINGULAR_WEIGHT_TOL: f64 = 1e-14;

/// Parameters `(a, q)` of one polynomial family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub a: Complex64,
    pub q: QBase,
}

impl FamilyParams {
    pub fn new(a: Complex64, q: Complex64) -> Result<Self> {
        ensure_finite(a, "a")?;
        Ok(FamilyParams {
            a,
            q: QBase::new(q)?,
        })
    }

    pub fn q(&self) -> Complex64 {
        self.q.value()
    }

    /// Orthogonality statements exclude `a = 0` and `a = 1`.
    pub fn require_orthogonality_params(&self) -> Result<()> {
        if self.a == ZERO {
            return Err(Error::Parameter("a=0 excluded".into()));
        }
        if self.a == ONE {
            return Err(Error::Parameter("a=1 excluded".into()));
        }
        Ok(())
    }
}

/// Recurrence coefficients `(alpha_k, beta_k)` with
/// `x U_k = U_{k+1} + alpha_k U_k + beta_k U_{k-1}`,
/// `alpha_k = (a+1) q^k`, `beta_k = -a q^(k-1) (1 - q^k)`.
///
/// `beta_0` is zero.
pub fn recurrence_coeffs(k: usize, a: Complex64, q: Complex64) -> (Complex64, Complex64) {
    let qk = q.powu(k as u32);
    let alpha = (a + ONE) * qk;
    let beta = if k == 0 {
        ZERO
    } else {
        -a * q.powu(k as u32 - 1) * (ONE - qk)
    };
    (alpha, beta)
}

/// Explicit terminating sum, expanding `(x^{-1}; q)_k x^k` as `prod_{j<k} (x - q^j)`.
pub fn u_explicit(n: usize, params: &FamilyParams) -> Result<Poly> {
    let a = params.a;
    let q = params.q();
    if a == ZERO {
        return Err(Error::Parameter(
            "a = 0: the explicit sum divides by a^k".into(),
        ));
    }
    if let Regime::RootOfUnity(order) = params.q.regime() {
        if n >= order as usize {
            return Err(Error::Parameter(format!(
                "explicit sum has (q;q)_k = 0 for k >= {order} at a root of unity; use the recurrence"
            )));
        }
    }
    let q_neg_n = q.powi(-(n as i32));
    let mut basis = Poly::one();
    let mut acc = Poly::zero();
    let mut qk = ONE;
    let mut ak = ONE;
    for k in 0..=n {
        let coeff = qpoch_finite(q_neg_n, q, k) * qk / (qpoch_finite(q, q, k) * ak);
        acc = &acc + &basis.scale(coeff);
        basis = basis.mul_linear(qk);
        qk *= q;
        ak *= a;
    }
    let prefactor = (-a).powu(n as u32) * q_pow_binom2(q, n);
    Ok(acc.scale(prefactor))
}

/// Coefficients from the three-term recurrence; valid for every `a`, including 0.
pub fn u_recurrence(n: usize, params: &FamilyParams) -> Poly {
    recurrence_poly(n, params.a, params.q())
}

pub(crate) fn recurrence_poly(n: usize, a: Complex64, q: Complex64) -> Poly {
    let mut prev = Poly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = Poly::linear(a + ONE);
    for k in 1..n {
        let (alpha, beta) = recurrence_coeffs(k, a, q);
        let next = &cur.mul_linear(alpha) - &prev.scale(beta);
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `U_0(x), ..., U_nmax(x)` by the forward recurrence.
pub fn u_values(nmax: usize, a: Complex64, q: Complex64, x: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(ONE);
    if nmax == 0 {
        return out;
    }
    out.push(x - a - ONE);
    for k in 1..nmax {
        let (alpha, beta) = recurrence_coeffs(k, a, q);
        let next = (x - alpha) * out[k] - beta * out[k - 1];
        out.push(next);
    }
    out
}

/// `U_n(x)` in the value domain.
pub fn u_eval(n: usize, params: &FamilyParams, x: Complex64) -> Complex64 {
    u_values(n, params.a, params.q(), x)[n]
}

/// `(U_n(x), U_n'(x), U_{n-1}(x))` by differentiating the recurrence.
///
/// For `n = 0` the last entry is zero.
pub fn u_eval_with_derivative(
    n: usize,
    a: Complex64,
    q: Complex64,
    x: Complex64,
) -> (Complex64, Complex64, Complex64) {
    if n == 0 {
        return (ONE, ZERO, ZERO);
    }
    let (mut p_prev, mut d_prev) = (ONE, ZERO);
    let (mut p, mut d) = (x - a - ONE, ONE);
    for k in 1..n {
        let (alpha, beta) = recurrence_coeffs(k, a, q);
        let p_next = (x - alpha) * p - beta * p_prev;
        let d_next = p + (x - alpha) * d - beta * d_prev;
        p_prev = p;
        d_prev = d;
        p = p_next;
        d = d_next;
    }
    (p, d, p_prev)
}

/// Rodrigues-type formula
/// `U_n(x) = a^n q^(n choose 2) (1-q)^n / (q^n w(x)) * D_{q^-1}^n w(x)`,
/// with the iterated derivative taken from weight samples at `x q^-j`.
pub fn rodrigues_eval(
    n: usize,
    params: &FamilyParams,
    x: Complex64,
    trunc: &SeriesTruncation,
) -> Result<Complex64> {
    params.q.require_inside()?;
    ensure_finite(x, "x")?;
    if x == ZERO {
        return Err(Error::Domain("Rodrigues evaluation at x = 0".into()));
    }
    let a = params.a;
    let q = params.q();
    let spec = WeightSpec::new(a, q, *trunc)?;
    let w0 = weight_eval(x, &spec)?;
    if w0.norm() < SINGULAR_WEIGHT_TOL {
        return Err(Error::SingularWeight {
            magnitude: w0.norm(),
        });
    }
    let p = q.inv();
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(w0);
    let mut point = x;
    for _ in 0..n {
        point *= p;
        samples.push(weight_eval(point, &spec)?);
    }
    let derivative = nested_q_difference(&samples, x, p);
    let n32 = n as u32;
    let prefactor = a.powu(n32) * q_pow_binom2(q, n) * (ONE - q).powu(n32) / (q.powu(n32) * w0);
    Ok(prefactor * derivative)
}

/// The ASC II polynomial `U_n^(a)(x; q^-1)`.
pub fn u_asc2(n: usize, a: Complex64, q: Complex64) -> Result<Poly> {
    ensure_finite(a, "a")?;
    let base = QBase::new(q)?.inverse();
    Ok(recurrence_poly(n, a, base.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn fam(a: Complex64, q: Complex64) -> FamilyParams {
        FamilyParams::new(a, q).unwrap()
    }

    #[test]
    fn explicit_low_degrees() {
        let p = fam(c(1.0, 1.0), c(0.3, 0.4));
        assert_eq!(u_explicit(0, &p).unwrap(), Poly::one());
        let u1 = u_explicit(1, &p).unwrap();
        assert!(u1.max_abs_diff(&Poly::new(vec![c(-2.0, -1.0), r(1.0)])) < 1e-14);
        let u2 = u_explicit(2, &fam(r(1.0), r(0.5))).unwrap();
        assert!(u2.max_abs_diff(&Poly::from_real(&[2.5, -3.0, 1.0])) < 1e-14);
    }

    #[test]
    fn explicit_rejects_zero_a() {
        assert!(matches!(
            u_explicit(2, &fam(r(0.0), r(0.5))),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn recurrence_examples() {
        let p = fam(c(2.0, -1.0), c(0.1, 0.7));
        assert_eq!(u_recurrence(1, &p), Poly::new(vec![c(-3.0, 1.0), r(1.0)]));
        let a0 = u_recurrence(3, &fam(r(0.0), r(0.5)));
        let expected = Poly::from_roots(&[r(1.0), r(0.5), r(0.25)]);
        assert!(a0.max_abs_diff(&expected) < 1e-15);
        let u2 = u_recurrence(2, &fam(r(1.0), r(0.5)));
        assert!(u2.max_abs_diff(&Poly::from_real(&[2.5, -3.0, 1.0])) < 1e-15);
    }

    #[test]
    fn eval_examples() {
        let a = c(1.0, 1.0);
        let p = fam(a, Complex64::from_polar(0.8, PI / 6.0));
        assert!(u_eval(1, &p, a + 1.0).norm() < 1e-15);
        assert!((u_eval(2, &fam(r(1.0), r(0.5)), r(1.0)) - r(0.5)).norm() < 1e-15);
        assert_eq!(u_eval(0, &p, c(5.0, 5.0)), r(1.0));
    }

    #[test]
    fn derivative_matches_coefficients() {
        let (a, q, x) = (c(0.5, -0.3), c(0.6, 0.2), c(0.4, 0.9));
        let poly = recurrence_poly(7, a, q);
        let (v, d, prev) = u_eval_with_derivative(7, a, q, x);
        let (pv, pd) = poly.eval_with_derivative(x);
        assert!((v - pv).norm() < 1e-12);
        assert!((d - pd).norm() < 1e-12);
        assert!((prev - recurrence_poly(6, a, q).eval(x)).norm() < 1e-12);
    }

    #[test]
    fn rodrigues_examples() {
        let t = SeriesTruncation::default();
        let v = rodrigues_eval(1, &fam(r(1.0), r(0.5)), r(0.3), &t).unwrap();
        assert!((v - r(-1.7)).norm() < 1e-8);

        let p = fam(c(1.0, 1.0), r(0.4));
        let x = r(0.5);
        let v = rodrigues_eval(2, &p, x, &t).unwrap();
        let u = u_eval(2, &p, x);
        assert!((v - u).norm() < 1e-8 * u.norm());

        assert!(matches!(
            rodrigues_eval(1, &fam(r(1.0), r(0.5)), r(2.0), &t),
            Err(Error::SingularWeight { .. })
        ));
        assert!(matches!(
            rodrigues_eval(1, &fam(r(1.0), r(2.0)), r(0.3), &t),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn asc2_examples() {
        assert_eq!(u_asc2(0, r(1.0), r(2.0)).unwrap(), Poly::one());
        let u1 = u_asc2(1, c(0.5, 1.0), c(1.5, 0.5)).unwrap();
        assert_eq!(u1, Poly::new(vec![c(-1.5, -1.0), r(1.0)]));
        let u2 = u_asc2(2, r(1.0), r(2.0)).unwrap();
        assert!(u2.max_abs_diff(&Poly::from_real(&[2.5, -3.0, 1.0])) < 1e-15);
    }

    #[test]
    fn explicit_at_root_of_unity_defers_to_recurrence() {
        let p = fam(r(2.0), c(0.0, 1.0));
        assert!(u_explicit(3, &p).is_ok());
        assert!(u_explicit(4, &p).is_err());
        // U_4 = x^4 - c when q = i
        let u4 = u_recurrence(4, &p);
        for k in 1..4 {
            assert!(u4.coeff(k).norm() < 1e-12);
        }
    }
}
