//! q-calculus primitives for a complex base: shifted factorials, q-derivatives
//! and unilateral basic hypergeometric series.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::sum::CompensatedSum;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance on `|q|` used to classify the base.
pub const REGIME_TOL: f64 = 1e-12;

/// Largest order searched when deciding whether `|q| = 1` is a root of unity.
const MAX_ROOT_ORDER: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    InsideDisk,
    OutsideDisk,
    /// `q^N = 1` with `N` the smallest such order.
    RootOfUnity(u32),
    OnCircleGeneric,
}

/// A validated base `q` together with its regime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBase {
    q: Complex64,
    regime: Regime,
}

impl QBase {
    pub fn new(q: Complex64) -> Result<Self> {
        ensure_finite(q, "q")?;
        if q.norm() == 0.0 {
            return Err(Error::Parameter("q = 0 is excluded".into()));
        }
        if (q - ONE).norm() < REGIME_TOL {
            return Err(Error::Parameter("q = 1 is excluded".into()));
        }
        Ok(QBase {
            q,
            regime: classify(q),
        })
    }

    pub fn value(&self) -> Complex64 {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// The base `p = 1/q`.
    pub fn inverse(&self) -> QBase {
        let p = self.q.inv();
        QBase {
            q: p,
            regime: classify(p),
        }
    }

    pub fn require_inside(&self) -> Result<()> {
        match self.regime {
            Regime::InsideDisk => Ok(()),
            _ => Err(Error::Regime(format!(
                "|q| = {} but |q| < 1 is required",
                self.q.norm()
            ))),
        }
    }
}

fn classify(q: Complex64) -> Regime {
    let r = q.norm();
    if r < 1.0 - REGIME_TOL {
        return Regime::InsideDisk;
    }
    if r > 1.0 + REGIME_TOL {
        return Regime::OutsideDisk;
    }
    let unit = q / r;
    let mut power = ONE;
    for n in 1..=MAX_ROOT_ORDER {
        power *= unit;
        if (power - ONE).norm() < 1e-10 {
            return Regime::RootOfUnity(n);
        }
    }
    Regime::OnCircleGeneric
}

/// Controls every infinite product and series in the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTruncation {
    pub max_terms: usize,
    pub tail_tol: f64,
}

impl SeriesTruncation {
    pub fn new(max_terms: usize, tail_tol: f64) -> Result<Self> {
        if max_terms == 0 || tail_tol.is_nan() || tail_tol <= 0.0 || !tail_tol.is_finite() {
            return Err(Error::Parameter(
                "truncation needs max_terms >= 1 and tail_tol > 0".into(),
            ));
        }
        Ok(SeriesTruncation {
            max_terms,
            tail_tol,
        })
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation {
            max_terms: 10_000,
            tail_tol: 1e-16,
        }
    }
}

pub(crate) fn ensure_finite(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

fn require_inside_disk(q: Complex64) -> Result<()> {
    ensure_finite(q, "q")?;
    if q.norm() < 1.0 - REGIME_TOL {
        Ok(())
    } else {
        Err(Error::Regime(format!(
            "|q| = {} but |q| < 1 is required",
            q.norm()
        )))
    }
}

/// `q^(n choose 2)`, computed through integer powers.
pub fn q_pow_binom2(q: Complex64, n: usize) -> Complex64 {
    let e = (n * n.saturating_sub(1) / 2) as u32;
    q.powu(e)
}

/// The q-number `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_number(n: usize, q: Complex64) -> Complex64 {
    let mut acc = ZERO;
    let mut qk = ONE;
    for _ in 0..n {
        acc += qk;
        qk *= q;
    }
    acc
}

/// Finite shifted factorial `(z; q)_n = prod_{k<n} (1 - z q^k)`.
pub fn qpoch_finite(z: Complex64, q: Complex64, n: usize) -> Complex64 {
    let mut prod = ONE;
    let mut zqk = z;
    for _ in 0..n {
        prod *= ONE - zqk;
        zqk *= q;
    }
    prod
}

/// Infinite shifted factorial `(z; q)_inf` for `|q| < 1`.
///
/// Factors are multiplied until `|z q^k|` drops below `tail_tol`.
pub fn qpoch_infinite(z: Complex64, q: Complex64, trunc: &SeriesTruncation) -> Result<Complex64> {
    ensure_finite(z, "z")?;
    require_inside_disk(q)?;
    let mut prod = ONE;
    let mut zqk = z;
    for _ in 0..trunc.max_terms {
        if zqk.norm() < trunc.tail_tol {
            return Ok(prod);
        }
        prod *= ONE - zqk;
        if prod == ZERO {
            return Ok(ZERO);
        }
        zqk *= q;
    }
    if zqk.norm() < trunc.tail_tol {
        Ok(prod)
    } else {
        Err(Error::Truncation {
            terms: trunc.max_terms,
        })
    }
}

/// `(f(qz) - f(z)) / ((q - 1) z)` for a callable; `z = 0` and `q = 1` are rejected.
pub fn qderiv_callable<F>(f: F, z: Complex64, q: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    ensure_finite(z, "z")?;
    ensure_finite(q, "q")?;
    if z == ZERO {
        return Err(Error::Domain(
            "q-derivative of a callable at z = 0 has no difference quotient".into(),
        ));
    }
    if q == ONE {
        return Err(Error::Domain("q-derivative with q = 1".into()));
    }
    Ok((f(q * z) - f(z)) / ((q - ONE) * z))
}

/// Exact coefficient-level q-derivative: `D_q x^k = [k]_q x^(k-1)`.
pub fn qderiv_poly(f: &Poly, q: Complex64) -> Result<Poly> {
    ensure_finite(q, "q")?;
    if q == ONE {
        return Err(Error::Domain("q-derivative with q = 1".into()));
    }
    Ok(Poly::new(
        f.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * q_number(k, q))
            .collect(),
    ))
}

/// n-th iterated q-derivative with base `base`, from samples `values[j] = f(z base^j)`.
///
/// Applies `n = values.len() - 1` nested first-order difference quotients on
/// the geometric point set, so each sample is used without re-evaluation.
pub fn nested_q_difference(values: &[Complex64], z: Complex64, base: Complex64) -> Complex64 {
    let mut level: Vec<Complex64> = values.to_vec();
    let step = base - ONE;
    while level.len() > 1 {
        let mut point = z;
        level = level
            .windows(2)
            .map(|w| {
                let d = (w[1] - w[0]) / (step * point);
                point *= base;
                d
            })
            .collect();
    }
    level.first().copied().unwrap_or(ZERO)
}

/// `(D_{q^{-1}}^n f)(z)` from the defining difference quotient with base `1/q`,
/// using the samples `f(z q^{-j})`, `0 <= j <= n`.
pub fn qderiv_pinv_iterated<F>(f: F, z: Complex64, q: Complex64, n: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    ensure_finite(z, "z")?;
    ensure_finite(q, "q")?;
    if q == ZERO || q == ONE {
        return Err(Error::Parameter("q must differ from 0 and 1".into()));
    }
    if z == ZERO {
        return Err(Error::Domain(
            "iterated q^-1-derivative of a callable at z = 0".into(),
        ));
    }
    let p = q.inv();
    let mut point = z;
    let values: Vec<Complex64> = (0..=n)
        .map(|_| {
            let v = f(point);
            point *= p;
            v
        })
        .collect();
    Ok(nested_q_difference(&values, z, p))
}

/// Unilateral basic hypergeometric series `r phi s (numerators; denominators; q, z)`.
///
/// Terms carry the factor `((-1)^k q^(k choose 2))^(1+s-r)`. Summation stops on
/// a vanishing numerator factor, or once the term falls below `tail_tol`
/// relative to the partial sum while the term ratio is below one.
pub fn rphis(
    numerators: &[Complex64],
    denominators: &[Complex64],
    q: Complex64,
    z: Complex64,
    trunc: &SeriesTruncation,
) -> Result<Complex64> {
    require_inside_disk(q)?;
    ensure_finite(z, "z")?;
    for &a in numerators.iter().chain(denominators) {
        ensure_finite(a, "series parameter")?;
    }
    let excess = 1 + denominators.len() as i64 - numerators.len() as i64;

    let mut sum = CompensatedSum::new();
    let mut term = ONE;
    sum.add(term);
    let mut prev_mag = f64::INFINITY;
    let mut growth_run = 0usize;
    let mut qk = ONE;
    for k in 0..trunc.max_terms {
        let mut ratio = z / (ONE - qk * q);
        for &a in numerators {
            ratio *= ONE - a * qk;
        }
        for &b in denominators {
            let f = ONE - b * qk;
            if f == ZERO {
                return Err(Error::Domain(format!(
                    "denominator parameter {b} annihilates (b;q)_{}",
                    k + 1
                )));
            }
            ratio /= f;
        }
        if excess != 0 {
            let sign_q = -qk;
            ratio *= sign_q.powi(excess as i32);
        }
        term *= ratio;
        if term == ZERO {
            return Ok(sum.value());
        }
        sum.add(term);

        let mag = term.norm();
        if mag > prev_mag {
            growth_run += 1;
        } else {
            growth_run = 0;
        }
        prev_mag = mag;
        if ratio.norm() < 1.0 && mag <= trunc.tail_tol * sum.value().norm() {
            return Ok(sum.value());
        }
        qk *= q;
    }
    if growth_run > 0 {
        Err(Error::Divergence {
            terms: trunc.max_terms,
        })
    } else {
        Err(Error::Truncation {
            terms: trunc.max_terms,
        })
    }
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

    #[test]
    fn regimes() {
        assert_eq!(QBase::new(r(0.5)).unwrap().regime(), Regime::InsideDisk);
        assert_eq!(QBase::new(r(2.0)).unwrap().regime(), Regime::OutsideDisk);
        assert_eq!(
            QBase::new(c(0.0, 1.0)).unwrap().regime(),
            Regime::RootOfUnity(4)
        );
        let q5 = Complex64::from_polar(1.0, 2.0 * PI / 5.0);
        assert_eq!(QBase::new(q5).unwrap().regime(), Regime::RootOfUnity(5));
        assert_eq!(
            QBase::new(Complex64::from_polar(1.0, 1.0))
                .unwrap()
                .regime(),
            Regime::OnCircleGeneric
        );
        assert_eq!(
            QBase::new(r(-1.0)).unwrap().regime(),
            Regime::RootOfUnity(2)
        );
        assert!(QBase::new(r(0.0)).is_err());
        assert!(QBase::new(r(1.0)).is_err());
        assert!(QBase::new(c(f64::NAN, 0.0)).is_err());
        assert_eq!(
            QBase::new(r(2.0)).unwrap().inverse().regime(),
            Regime::InsideDisk
        );
    }

    #[test]
    fn truncation_validation() {
        assert!(SeriesTruncation::new(0, 1e-10).is_err());
        assert!(SeriesTruncation::new(10, 0.0).is_err());
        assert!(SeriesTruncation::new(10, 1e-10).is_ok());
    }

    #[test]
    fn finite_pochhammer_examples() {
        assert_eq!(qpoch_finite(r(5.0), r(0.3), 0), r(1.0));
        assert_eq!(qpoch_finite(r(2.0), r(0.5), 2), r(0.0));
        assert!((qpoch_finite(r(0.5), r(0.5), 3) - r(0.328125)).norm() < 1e-15);
    }

    #[test]
    fn infinite_pochhammer_examples() {
        let t = SeriesTruncation::default();
        assert_eq!(qpoch_infinite(r(0.0), r(0.5), &t).unwrap(), r(1.0));
        assert_eq!(qpoch_infinite(r(1.0), r(0.5), &t).unwrap(), r(0.0));
        // brute-force product to 60 factors
        let mut brute = 1.0;
        for k in 0..=60 {
            brute *= 1.0 - 0.5f64.powi(k + 1);
        }
        let v = qpoch_infinite(r(0.5), r(0.5), &t).unwrap();
        assert!((v - r(brute)).norm() < 1e-12);
    }

    #[test]
    fn infinite_pochhammer_errors() {
        let t = SeriesTruncation::default();
        assert!(matches!(
            qpoch_infinite(r(0.5), r(1.0), &t),
            Err(Error::Regime(_))
        ));
        assert!(matches!(
            qpoch_infinite(r(0.5), r(2.0), &t),
            Err(Error::Regime(_))
        ));
        let short = SeriesTruncation::new(3, 1e-16).unwrap();
        assert!(matches!(
            qpoch_infinite(r(0.5), r(0.9), &short),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn callable_qderiv_examples() {
        assert_eq!(qderiv_callable(|_| r(7.0), r(0.3), r(0.5)).unwrap(), r(0.0));
        let d = qderiv_callable(|x| x, c(2.0, 1.0), c(0.0, 0.4)).unwrap();
        assert!((d - r(1.0)).norm() < 1e-15);
        let d = qderiv_callable(|x| x * x, r(1.0), r(0.5)).unwrap();
        assert!((d - r(1.5)).norm() < 1e-15);
        assert!(qderiv_callable(|x| x, r(0.0), r(0.5)).is_err());
        assert!(qderiv_callable(|x| x, r(1.0), r(1.0)).is_err());
    }

    #[test]
    fn poly_qderiv_examples() {
        assert!(qderiv_poly(&Poly::one(), r(0.5)).unwrap().is_zero());
        assert_eq!(
            qderiv_poly(&Poly::from_real(&[0.0, 1.0]), r(0.5)).unwrap(),
            Poly::one()
        );
        assert_eq!(
            qderiv_poly(&Poly::from_real(&[0.0, 0.0, 1.0]), r(0.5)).unwrap(),
            Poly::from_real(&[0.0, 1.5])
        );
        assert!(qderiv_poly(&Poly::one(), r(1.0)).is_err());
    }

    #[test]
    fn pinv_iterated_examples() {
        let d = qderiv_pinv_iterated(|_| r(3.0), c(0.2, 0.1), r(0.5), 1).unwrap();
        assert_eq!(d, r(0.0));
        let d = qderiv_pinv_iterated(|x| x, r(1.0), r(0.5), 1).unwrap();
        assert!((d - r(1.0)).norm() < 1e-15);
        let d = qderiv_pinv_iterated(|x| x * x, r(1.0), r(0.5), 1).unwrap();
        assert!((d - r(3.0)).norm() < 1e-15);
        assert!(qderiv_pinv_iterated(|x| x, r(0.0), r(0.5), 2).is_err());
    }

    #[test]
    fn pinv_iterated_second_order_on_monomial() {
        // D_p^2 x^3 = [3]_p [2]_p x with p = 1/q
        let q = c(0.3, 0.4);
        let p = q.inv();
        let z = c(0.7, -0.2);
        let d = qderiv_pinv_iterated(|x| x * x * x, z, q, 2).unwrap();
        let expected = q_number(3, p) * q_number(2, p) * z;
        assert!((d - expected).norm() < 1e-12 * expected.norm());
    }

    #[test]
    fn rphis_examples() {
        let t = SeriesTruncation::default();
        let v = rphis(&[r(0.3)], &[r(0.7)], r(0.5), r(0.0), &t).unwrap();
        assert_eq!(v, r(1.0));
        let v = rphis(&[r(1.0)], &[r(0.2)], r(0.5), r(0.9), &t).unwrap();
        assert_eq!(v, r(1.0));

        // 40-term direct summation
        let (a, b, q, z): (f64, f64, f64, f64) = (0.5, 0.2, 0.5, 0.1);
        let mut brute = 0.0;
        for k in 0..40 {
            let mut term: f64 = z.powi(k);
            for j in 0..k {
                term *= (1.0 - a * q.powi(j)) / ((1.0 - b * q.powi(j)) * (1.0 - q.powi(j + 1)));
            }
            term *= (-1.0f64).powi(k) * q.powi(k * (k.max(1) - 1) / 2);
            brute += term;
        }
        let v = rphis(&[r(a)], &[r(b)], r(q), r(z), &t).unwrap();
        assert!((v - r(brute)).norm() < 1e-12);
    }

    #[test]
    fn rphis_errors() {
        let t = SeriesTruncation::default();
        assert!(matches!(
            rphis(&[r(0.3)], &[r(0.7)], r(1.5), r(0.1), &t),
            Err(Error::Regime(_))
        ));
        // 2phi0 with large argument diverges
        let short = SeriesTruncation::new(50, 1e-16).unwrap();
        assert!(matches!(
            rphis(&[r(3.0), r(5.0)], &[], r(0.9), r(50.0), &short),
            Err(Error::Divergence { .. })
        ));
        // (q^{-1} * q; q)_1 = 0 in the denominator
        assert!(matches!(
            rphis(&[r(0.5)], &[r(2.0)], r(0.5), r(0.1), &t),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn q_binomial_theorem_standard_form() {
        let t = SeriesTruncation::default();
        for &(a, z, p) in &[
            (c(0.3, 0.2), c(0.4, -0.1), c(0.5, 0.2)),
            (c(-1.5, 0.5), c(0.2, 0.3), c(0.8, 0.0)),
            (c(2.0, -1.0), c(-0.3, 0.1), c(0.0, 0.6)),
        ] {
            let lhs = qpoch_infinite(a * z, p, &t).unwrap() / qpoch_infinite(z, p, &t).unwrap();
            let rhs = rphis(&[a], &[], p, z, &t).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }
}
