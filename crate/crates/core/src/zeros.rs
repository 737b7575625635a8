//! Complex zeros of `U_N^(a)(x; q)`.
//!
//! The default pipeline runs Aberth–Ehrlich iteration on the monic
//! coefficients and then polishes each estimate with Newton steps that
//! evaluate `U_N` and `U_N'` through the recurrence. The tridiagonal
//! matrix read off the recurrence gives an independent eigenvalue route.

use std::f64::consts::PI;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ascpoly::{recurrence_coeffs, recurrence_poly, u_eval_with_derivative};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qkernel::ensure_finite;
use crate::report::format_real;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Zeros closer than this are flagged as a cluster.
pub const CLUSTER_GAP: f64 = 1e-8;

const ABERTH_MAX_SWEEPS: usize = 500;
const NEWTON_MAX_STEPS: usize = 30;

/// Non-symmetric tridiagonal matrix whose characteristic polynomial is `U_N`.
///
/// `diag[k] = alpha_k`, the sub-diagonal is all ones and
/// `sup[k-1] = beta_k` for `1 <= k <= N-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalJacobi {
    pub diag: Vec<Complex64>,
    pub sub: Vec<Complex64>,
    pub sup: Vec<Complex64>,
}

impl TridiagonalJacobi {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// `det(x I - J)` by the leading-minor recurrence.
    pub fn characteristic_polynomial(&self) -> Poly {
        let mut prev = Poly::one();
        let mut cur = Poly::linear(self.diag[0]);
        for k in 1..self.size() {
            let coupling = self.sub[k - 1] * self.sup[k - 1];
            let next = &cur.mul_linear(self.diag[k]) - &prev.scale(coupling);
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.size();
        let mut m = DMatrix::from_element(n, n, ZERO);
        for k in 0..n {
            m[(k, k)] = self.diag[k];
        }
        for k in 1..n {
            m[(k, k - 1)] = self.sub[k - 1];
            m[(k - 1, k)] = self.sup[k - 1];
        }
        m
    }

    /// Eigenvalues from a complex Schur decomposition.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let schur = self.to_dense().schur();
        schur
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .ok_or_else(|| Error::NonConvergence {
                iterations: 0,
                partial: Box::new(ZeroSet::default()),
            })
    }
}

pub fn jacobi_matrix(n: usize, a: Complex64, q: Complex64) -> Result<TridiagonalJacobi> {
    if n == 0 {
        return Err(Error::Parameter("matrix size N must be >= 1".into()));
    }
    ensure_finite(a, "a")?;
    ensure_finite(q, "q")?;
    let diag = (0..n).map(|k| recurrence_coeffs(k, a, q).0).collect();
    let sup = (1..n).map(|k| recurrence_coeffs(k, a, q).1).collect();
    Ok(TridiagonalJacobi {
        diag,
        sub: vec![ONE; n - 1],
        sup,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZeroSet {
    pub zeros: Vec<Complex64>,
    /// `|U_N(z) / U_N'(z)|`, the Newton step length at each zero.
    pub residuals: Vec<f64>,
    /// Index pairs closer than [`CLUSTER_GAP`].
    pub clusters: Vec<(usize, usize)>,
}

impl ZeroSet {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.zeros.iter().sum()
    }

    /// Zeros sorted by decreasing modulus.
    pub fn by_decreasing_modulus(&self) -> Vec<Complex64> {
        let mut z = self.zeros.clone();
        z.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
        z
    }
}

/// Outcome of a raw Aberth–Ehrlich run.
#[derive(Clone, Debug)]
pub struct AberthOutcome {
    pub roots: Vec<Complex64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Aberth–Ehrlich simultaneous iteration on a polynomial with at least degree 1.
///
/// Updates are applied in place within a sweep. Iteration stops when every
/// correction is below `eps` relative to the root magnitude.
pub fn aberth(poly: &Poly, initial: &[Complex64], max_sweeps: usize, eps: f64) -> AberthOutcome {
    let mut roots = initial.to_vec();
    let n = roots.len();
    for sweep in 1..=max_sweeps {
        let mut max_rel = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let (p, dp) = poly.eval_with_derivative(zi);
            if p == ZERO {
                continue;
            }
            let newton = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (zi - roots[j]).inv())
                .sum();
            let step = newton / (ONE - newton * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            roots[i] = zi - step;
            max_rel = max_rel.max(step.norm() / zi.norm().max(f64::MIN_POSITIVE));
        }
        if max_rel < eps {
            return AberthOutcome {
                roots,
                sweeps: sweep,
                converged: true,
            };
        }
    }
    AberthOutcome {
        roots,
        sweeps: max_sweeps,
        converged: false,
    }
}

/// Starting points on a circle of radius `max(1, |a| + 1)`.
pub fn initial_guesses(n: usize, a: Complex64) -> Vec<Complex64> {
    let radius = (a.norm() + 1.0).max(1.0);
    (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect()
}

fn newton_polish(n: usize, a: Complex64, q: Complex64, z0: Complex64) -> Complex64 {
    let mut z = z0;
    let (mut val, _, _) = u_eval_with_derivative(n, a, q, z);
    for _ in 0..NEWTON_MAX_STEPS {
        let (_, d, _) = u_eval_with_derivative(n, a, q, z);
        if val == ZERO || d == ZERO {
            break;
        }
        let candidate = z - val / d;
        let (cand_val, _, _) = u_eval_with_derivative(n, a, q, candidate);
        if cand_val.norm().is_nan() || cand_val.norm() >= val.norm() {
            break;
        }
        let moved = (candidate - z).norm();
        z = candidate;
        val = cand_val;
        if moved <= 1e-16 * z.norm() {
            break;
        }
    }
    z
}

fn scaled_residual(n: usize, a: Complex64, q: Complex64, z: Complex64) -> f64 {
    let (v, d, _) = u_eval_with_derivative(n, a, q, z);
    if v == ZERO {
        0.0
    } else {
        (v / d).norm()
    }
}

fn find_clusters(zeros: &[Complex64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..zeros.len() {
        for j in i + 1..zeros.len() {
            if (zeros[i] - zeros[j]).norm() < CLUSTER_GAP {
                out.push((i, j));
            }
        }
    }
    out
}

/// All `N` zeros of `U_N^(a)(x; q)`; every scaled residual must fall below `tol`.
pub fn find_zeros(n: usize, a: Complex64, q: Complex64, tol: f64) -> Result<ZeroSet> {
    if n == 0 {
        return Err(Error::Parameter("degree N must be >= 1".into()));
    }
    ensure_finite(a, "a")?;
    ensure_finite(q, "q")?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    let poly = recurrence_poly(n, a, q);
    let outcome = aberth(&poly, &initial_guesses(n, a), ABERTH_MAX_SWEEPS, 1e-14);
    let zeros: Vec<Complex64> = outcome
        .roots
        .iter()
        .map(|&z| newton_polish(n, a, q, z))
        .collect();
    let residuals: Vec<f64> = zeros.iter().map(|&z| scaled_residual(n, a, q, z)).collect();
    let set = ZeroSet {
        clusters: find_clusters(&zeros),
        zeros,
        residuals,
    };
    if set.residuals.iter().all(|r| *r < tol) {
        Ok(set)
    } else {
        Err(Error::NonConvergence {
            iterations: outcome.sweeps,
            partial: Box::new(set),
        })
    }
}

/// Greedy nearest-neighbour matching; returns the largest matched distance,
/// or `None` when the sets differ in size or a point is claimed twice.
pub fn match_zero_sets(left: &[Complex64], right: &[Complex64]) -> Option<f64> {
    if left.len() != right.len() {
        return None;
    }
    let mut used = vec![false; right.len()];
    let mut worst = 0.0f64;
    for &z in left {
        let (idx, dist) = right
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        used[idx] = true;
        worst = worst.max(dist);
    }
    Some(worst)
}

/// CSV with header `index,re,im,residual`.
pub fn write_zeros_csv<W: Write>(out: &mut W, set: &ZeroSet) -> io::Result<()> {
    writeln!(out, "index,re,im,residual")?;
    for (i, (z, r)) in set.zeros.iter().zip(&set.residuals).enumerate() {
        writeln!(
            out,
            "{i},{},{},{}",
            format_real(z.re),
            format_real(z.im),
            format_real(*r)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn jacobi_examples() {
        let j = jacobi_matrix(2, r(1.0), r(0.5)).unwrap();
        assert_eq!(j.diag, vec![r(2.0), r(1.0)]);
        assert_eq!(j.sup, vec![r(-0.5)]);
        assert_eq!(j.sub, vec![r(1.0)]);

        let a = c(0.3, -2.0);
        let j = jacobi_matrix(1, a, r(0.5)).unwrap();
        assert_eq!(j.diag, vec![a + 1.0]);
        assert!(j.sup.is_empty());

        let j = jacobi_matrix(5, r(0.0), c(0.2, 0.6)).unwrap();
        assert!(j.sup.iter().all(|b| *b == ZERO));
        assert!(jacobi_matrix(0, r(1.0), r(0.5)).is_err());
    }

    #[test]
    fn zero_examples() {
        let a = c(0.7, -1.2);
        let z = find_zeros(1, a, c(0.3, 0.3), 1e-8).unwrap();
        assert!((z.zeros[0] - (a + 1.0)).norm() < 1e-15);

        let z = find_zeros(2, r(1.0), r(0.5), 1e-8).unwrap();
        let expected = [c(1.5, 0.5), c(1.5, -0.5)];
        assert!(match_zero_sets(&z.zeros, &expected).unwrap() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_zeros() {
        let (a, q) = (c(1.0, 1.0), Complex64::from_polar(0.8, PI / 6.0));
        let j = jacobi_matrix(8, a, q).unwrap();
        let eig = j.eigenvalues().unwrap();
        let z = find_zeros(8, a, q, 1e-8).unwrap();
        assert!(match_zero_sets(&eig, &z.zeros).unwrap() < 1e-8);
    }

    #[test]
    fn matching_rejects_size_mismatch() {
        assert!(match_zero_sets(&[r(1.0)], &[r(1.0), r(2.0)]).is_none());
    }

    #[test]
    fn clusters_are_flagged() {
        let zeros = [r(1.0), r(1.0 + 1e-10), r(3.0)];
        assert_eq!(find_clusters(&zeros), vec![(0, 1)]);
    }

    #[test]
    fn csv_schema() {
        let z = find_zeros(1, r(2.0), r(0.5), 1e-8).unwrap();
        let mut buf = Vec::new();
        write_zeros_csv(&mut buf, &z).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "index,re,im,residual\n0,3,0,0\n");
    }
}
