//! Numerical verification of the orthogonality relations on the spiral
//! lattice, the closed-form norms, the summation-by-parts identity, the
//! companion sum identity, and the quadrature forms at roots of unity.

use num_complex::Complex64;
use serde::Serialize;

use crate::ascpoly::{recurrence_coeffs, recurrence_poly, u_eval_with_derivative, u_values};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qkernel::{
    ensure_finite, q_pow_binom2, qderiv_callable, qderiv_poly, qpoch_finite, qpoch_infinite, QBase,
    Regime, SeriesTruncation,
};
use crate::qlattice::{weight_eval, SpiralLattice, WeightSpec};
use crate::report::{Cx, Verdict};
use crate::sum::CompensatedSum;
use crate::zeros::find_zeros;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default tolerance for Gram verdicts.
pub const GRAM_TOL: f64 = 1e-8;

/// Diagonal targets smaller than this fraction of the largest one count as zero.
const DEGENERATE_DIAG: f64 = 1e-12;

/// `d_n^2 = (-a)^n (1-q) (q;q)_n (q;q)_inf (a;q)_inf (q/a;q)_inf q^(n choose 2)`.
pub fn norm_d2(
    n: usize,
    a: Complex64,
    q: Complex64,
    trunc: &SeriesTruncation,
) -> Result<Complex64> {
    ensure_finite(a, "a")?;
    if a == ZERO {
        return Err(Error::Parameter("a=0 excluded".into()));
    }
    let q_inf = qpoch_infinite(q, q, trunc)?;
    let a_inf = qpoch_infinite(a, q, trunc)?;
    let qa_inf = qpoch_infinite(q / a, q, trunc)?;
    Ok((-a).powu(n as u32)
        * (ONE - q)
        * qpoch_finite(q, q, n)
        * q_inf
        * a_inf
        * qa_inf
        * q_pow_binom2(q, n))
}

/// The norm of the `|q| > 1` relation written in powers of `q^-1`:
/// `(-a)^n (1-q^-1) (q^-1;q^-1)_n (q^-1;q^-1)_inf (a;q^-1)_inf (q^-1/a;q^-1)_inf q^-(n choose 2)`.
pub fn asc2_norm(
    n: usize,
    a: Complex64,
    q: Complex64,
    trunc: &SeriesTruncation,
) -> Result<Complex64> {
    ensure_finite(a, "a")?;
    if a == ZERO {
        return Err(Error::Parameter("a=0 excluded".into()));
    }
    let p = q.inv();
    let exponent = (n * n.saturating_sub(1) / 2) as i32;
    Ok((-a).powu(n as u32)
        * (ONE - p)
        * qpoch_finite(p, p, n)
        * qpoch_infinite(p, p, trunc)?
        * qpoch_infinite(a, p, trunc)?
        * qpoch_infinite(p / a, p, trunc)?
        * q.powi(-exponent))
}

/// Rejects excluded and near-excluded parameters for lattice orthogonality.
pub fn check_orthogonality_params(a: Complex64, q: Complex64, nmax: usize) -> Result<()> {
    ensure_finite(a, "a")?;
    ensure_finite(q, "q")?;
    if a == ZERO {
        return Err(Error::Parameter("a=0 excluded".into()));
    }
    if a == ONE {
        return Err(Error::Parameter("a=1 excluded".into()));
    }
    if a.norm() < 1e-8 {
        return Err(Error::Conditioning(format!(
            "|a| = {:e} is too close to 0",
            a.norm()
        )));
    }
    if (a - ONE).norm() < 1e-8 {
        return Err(Error::Conditioning(format!(
            "|a - 1| = {:e} is too close to 0",
            (a - ONE).norm()
        )));
    }
    let mut qn = ONE;
    for n in 1..=nmax.max(1) {
        qn *= q;
        if (qn - ONE).norm() < 1e-10 {
            return Err(Error::Conditioning(format!("q^{n} is within 1e-10 of 1")));
        }
    }
    Ok(())
}

/// Matrix of inner products `G[n][m]` together with deviation statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    pub a: Complex64,
    /// Base used for the inner product (for the `|q| > 1` check this is `1/q`).
    pub q: Complex64,
    pub nmax: usize,
    /// Lattice truncation order; zero for quadrature forms.
    pub lattice_order: usize,
    pub entries: Vec<Vec<Complex64>>,
    pub diag_expected: Option<Vec<Complex64>>,
    /// `max_{n != m} |G[n][m]| / max_k |G[k][k]|`.
    pub max_offdiag_rel: f64,
    /// Relative diagonal error; degenerate targets are measured against the largest target.
    pub max_diag_rel_err: Option<f64>,
    /// Indices whose expected diagonal vanishes.
    pub degenerate_diagonals: Vec<usize>,
}

impl GramReport {
    pub fn from_entries(
        a: Complex64,
        q: Complex64,
        lattice_order: usize,
        entries: Vec<Vec<Complex64>>,
        diag_expected: Option<Vec<Complex64>>,
    ) -> Self {
        let size = entries.len();
        let max_diag = (0..size).map(|k| entries[k][k].norm()).fold(0.0, f64::max);
        let mut max_off = 0.0f64;
        for (n, row) in entries.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                if n != m {
                    max_off = max_off.max(v.norm());
                }
            }
        }
        let max_offdiag_rel = if max_diag > 0.0 {
            max_off / max_diag
        } else {
            f64::INFINITY
        };

        let mut degenerate = Vec::new();
        let max_diag_rel_err = diag_expected.as_ref().map(|expected| {
            let scale = expected.iter().map(|e| e.norm()).fold(0.0, f64::max);
            let mut worst = 0.0f64;
            for (k, e) in expected.iter().enumerate() {
                let diff = (entries[k][k] - e).norm();
                let err = if e.norm() > DEGENERATE_DIAG * scale {
                    diff / e.norm()
                } else {
                    degenerate.push(k);
                    diff / scale
                };
                worst = worst.max(err);
            }
            worst
        });

        GramReport {
            a,
            q,
            nmax: size.saturating_sub(1),
            lattice_order,
            entries,
            diag_expected,
            max_offdiag_rel,
            max_diag_rel_err,
            degenerate_diagonals: degenerate,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_offdiag_rel <= tol && self.max_diag_rel_err.is_none_or(|e| e <= tol)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.entries.len())
            .map(|k| self.entries[k][k])
            .collect()
    }

    /// `max_{n != m} |G[n][m] - G[m][n]|`.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..self.entries.len() {
            for m in 0..n {
                worst = worst.max((self.entries[n][m] - self.entries[m][n]).norm());
            }
        }
        worst
    }

    /// Largest relative deviation of `G[n][n] / G[n-1][n-1]` from `-a q^(n-1) (1 - q^n)`,
    /// over indices where both diagonals are non-degenerate.
    pub fn favard_max_rel_err(&self) -> f64 {
        let diag = self.diagonal();
        let mut worst = 0.0f64;
        for n in 1..diag.len() {
            if self.degenerate_diagonals.contains(&n)
                || self.degenerate_diagonals.contains(&(n - 1))
            {
                continue;
            }
            let (_, beta) = recurrence_coeffs(n, self.a, self.q);
            let ratio = diag[n] / diag[n - 1];
            worst = worst.max((ratio - beta).norm() / beta.norm());
        }
        worst
    }

    pub fn to_json(&self, tolerance: f64) -> GramJson {
        let expected = self.diag_expected.as_ref();
        let mut per_entry = Vec::new();
        for (n, row) in self.entries.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                per_entry.push(GramEntryJson {
                    n,
                    m,
                    value: (*v).into(),
                    expected: if n == m {
                        expected.map(|e| e[n].into())
                    } else {
                        Some(Cx { re: 0.0, im: 0.0 })
                    },
                });
            }
        }
        GramJson {
            params: GramParamsJson {
                a: self.a.into(),
                q: self.q.into(),
                nmax: self.nmax,
                m: self.lattice_order,
            },
            max_offdiag_rel: self.max_offdiag_rel,
            max_diag_rel_err: self.max_diag_rel_err,
            per_entry,
            verdict: Verdict::from_bool(self.passes(tolerance)),
            tolerance,
            degenerate_diagonals: self.degenerate_diagonals.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GramParamsJson {
    pub a: Cx,
    pub q: Cx,
    pub nmax: usize,
    #[serde(rename = "M")]
    pub m: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramEntryJson {
    pub n: usize,
    pub m: usize,
    pub value: Cx,
    pub expected: Option<Cx>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramJson {
    pub params: GramParamsJson,
    pub max_offdiag_rel: f64,
    pub max_diag_rel_err: Option<f64>,
    pub per_entry: Vec<GramEntryJson>,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub degenerate_diagonals: Vec<usize>,
}

/// Gram matrix of `U_0..U_nmax` for `∫_a^1 U_n U_m w d_q x` on the spiral
/// lattice (`m = 0` selects the adaptive truncation), compared with `d_n^2`.
pub fn gram(nmax: usize, a: Complex64, q: Complex64, m: usize) -> Result<GramReport> {
    let base = QBase::new(q)?;
    base.require_inside()?;
    check_orthogonality_params(a, q, nmax)?;
    let trunc = SeriesTruncation::default();
    let lattice = SpiralLattice::with_order(a, q, m)?;
    let spec = WeightSpec::new(a, q, trunc)?;

    let mut weighted = Vec::new();
    let mut values = Vec::new();
    for node in lattice.jackson_nodes() {
        let w = weight_eval(node.point, &spec)?;
        weighted.push(node.coefficient * w);
        values.push(u_values(nmax, a, q, node.point));
    }

    let size = nmax + 1;
    let mut entries = vec![vec![ZERO; size]; size];
    for n in 0..size {
        for k in n..size {
            let v = weighted
                .iter()
                .zip(&values)
                .map(|(cw, u)| cw * u[n] * u[k])
                .collect::<CompensatedSum>()
                .value();
            entries[n][k] = v;
            entries[k][n] = v;
        }
    }
    let expected = (0..size)
        .map(|n| norm_d2(n, a, q, &trunc))
        .collect::<Result<Vec<_>>>()?;
    Ok(GramReport::from_entries(
        a,
        q,
        lattice.order(),
        entries,
        Some(expected),
    ))
}

/// Orthogonality for `|q| > 1`: the Gram matrix under base `p = 1/q`, with
/// diagonals compared to the norm written in powers of `q^-1`.
pub fn verify_asc2(nmax: usize, a: Complex64, q: Complex64, m: usize) -> Result<GramReport> {
    let base = QBase::new(q)?;
    if base.regime() != Regime::OutsideDisk {
        return Err(Error::Regime(format!(
            "|q| = {} but |q| > 1 is required",
            q.norm()
        )));
    }
    let p = base.inverse().value();
    check_orthogonality_params(a, p, nmax)?;
    let report = gram(nmax, a, p, m)?;
    let trunc = SeriesTruncation::default();
    let expected = (0..=nmax)
        .map(|n| asc2_norm(n, a, q, &trunc))
        .collect::<Result<Vec<_>>>()?;
    Ok(GramReport::from_entries(
        report.a,
        report.q,
        report.lattice_order,
        report.entries,
        Some(expected),
    ))
}

/// Partial sum over `k < terms` of
/// `[(q^(k+1)/a; q)_inf - a (a q^(k+1); q)_inf] q^k / (q; q)_k`,
/// returned with the closed form `(a; q)_inf (q/a; q)_inf`.
pub fn corollary_sum(
    a: Complex64,
    q: Complex64,
    terms: usize,
    trunc: &SeriesTruncation,
) -> Result<(Complex64, Complex64)> {
    QBase::new(q)?.require_inside()?;
    ensure_finite(a, "a")?;
    if a == ZERO {
        return Err(Error::Parameter("a=0 excluded".into()));
    }
    let mut sum = CompensatedSum::new();
    let mut qk = ONE;
    let mut qq_k = ONE;
    for k in 0..terms {
        let qk1 = qk * q;
        let bracket = qpoch_infinite(qk1 / a, q, trunc)? - a * qpoch_infinite(a * qk1, q, trunc)?;
        sum.add(bracket * qk / qq_k);
        qq_k *= ONE - qk1;
        qk = qk1;
        if k > 0 && qk.norm() < f64::MIN_POSITIVE {
            break;
        }
    }
    let rhs = qpoch_infinite(a, q, trunc)? * qpoch_infinite(q / a, q, trunc)?;
    Ok((sum.value(), rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SbpVariant {
    Corrected,
    AsPrinted,
    Both,
}

/// Both readings of the boundary term in the summation-by-parts identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SbpReport {
    pub lhs: Complex64,
    /// `[fg(q^-1) - fg(q^M)] / (q^-1 - 1) - Σ_2`.
    pub rhs_corrected: Complex64,
    /// `[fg(q^M) - fg(q^-1)] / (q^-1 - 1) - Σ_2`.
    pub rhs_as_printed: Complex64,
    /// Magnitude used to make the residuals relative.
    pub scale: f64,
}

impl SbpReport {
    pub fn residual_corrected(&self) -> f64 {
        (self.lhs - self.rhs_corrected).norm() / self.scale
    }

    pub fn residual_as_printed(&self) -> f64 {
        (self.lhs - self.rhs_as_printed).norm() / self.scale
    }

    pub fn balanced_variant(&self, tol: f64) -> Option<SbpVariant> {
        match (
            self.residual_corrected() <= tol,
            self.residual_as_printed() <= tol,
        ) {
            (true, true) => Some(SbpVariant::Both),
            (true, false) => Some(SbpVariant::Corrected),
            (false, true) => Some(SbpVariant::AsPrinted),
            (false, false) => None,
        }
    }
}

/// Evaluates `Σ_{k=0}^M f(q^k) D_{q^-1} g(q^k) q^k` and both boundary-sign
/// variants of its summation-by-parts rewriting.
pub fn sbp_identity_check<F, G>(f: F, g: G, q: Complex64, m: usize) -> Result<SbpReport>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let base = QBase::new(q)?;
    let p = base.inverse().value();
    let mut lhs = CompensatedSum::new();
    let mut tail = CompensatedSum::new();
    let mut qk = ONE;
    let mut q_m = ONE;
    for _ in 0..=m {
        let dg = qderiv_callable(&g, qk, p)?;
        let df = qderiv_callable(&f, qk, p)?;
        lhs.add(f(qk) * dg * qk);
        tail.add(g(qk * p) * df * qk);
        q_m = qk;
        qk *= q;
    }
    let fg = |x: Complex64| f(x) * g(x);
    let boundary = (fg(p) - fg(q_m)) / (p - ONE);
    let lhs = lhs.value();
    let tail = tail.value();
    Ok(SbpReport {
        lhs,
        rhs_corrected: boundary - tail,
        rhs_as_printed: -boundary - tail,
        scale: lhs.norm().max(tail.norm()).max(boundary.norm()).max(1.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureWeights {
    /// Christoffel numbers `C / (U_{N-1}(x_s) U_N'(x_s))`.
    Gauss,
    /// `C / U_{N-1}(x_s)^2`.
    AsPrinted,
}

/// Discrete functional on the zeros of `U_N` when `q^N = 1`, with
/// `C = prod_{k=1}^{N-1} gamma_k` and `gamma_k = -a q^(k-1) (1 - q^k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootOfUnityForm {
    pub order: usize,
    pub a: Complex64,
    pub q: Complex64,
    pub nodes: Vec<Complex64>,
    pub constant: Complex64,
    gauss_weights: Vec<Complex64>,
    printed_weights: Vec<Complex64>,
    /// Multiplicative order of `q`; `gamma_k` vanishes when it divides `k`.
    q_order: usize,
}

impl RootOfUnityForm {
    pub fn new(order: usize, a: Complex64, q: Complex64) -> Result<Self> {
        if order < 2 {
            return Err(Error::Parameter(
                "root-of-unity order N must be >= 2".into(),
            ));
        }
        ensure_finite(a, "a")?;
        if a == ZERO {
            return Err(Error::Parameter("a=0 excluded".into()));
        }
        let base = QBase::new(q)?;
        let q_order = match base.regime() {
            Regime::RootOfUnity(d) if order.is_multiple_of(d as usize) => d as usize,
            _ => {
                return Err(Error::Parameter(format!(
                    "q^{order} = {} is not 1",
                    q.powu(order as u32)
                )))
            }
        };
        let gamma = |k: usize| {
            if k.is_multiple_of(q_order) {
                ZERO
            } else {
                recurrence_coeffs(k, a, q).1
            }
        };
        let constant: Complex64 = (1..order).map(gamma).product();

        let zeros = find_zeros(order, a, q, 1e-8)?;
        let nodes = zeros.zeros;
        let mut gap = f64::INFINITY;
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                gap = gap.min((nodes[i] - nodes[j]).norm());
            }
        }
        if gap < 1e-10 {
            return Err(Error::NodeDegeneracy { gap });
        }

        let mut gauss_weights = Vec::with_capacity(order);
        let mut printed_weights = Vec::with_capacity(order);
        for &x in &nodes {
            let (_, d, prev) = u_eval_with_derivative(order, a, q, x);
            gauss_weights.push(constant / (prev * d));
            printed_weights.push(constant / (prev * prev));
        }
        Ok(RootOfUnityForm {
            order,
            a,
            q,
            nodes,
            constant,
            gauss_weights,
            printed_weights,
            q_order,
        })
    }

    pub fn weights(&self, kind: QuadratureWeights) -> &[Complex64] {
        match kind {
            QuadratureWeights::Gauss => &self.gauss_weights,
            QuadratureWeights::AsPrinted => &self.printed_weights,
        }
    }

    /// `<v, p> = Σ_s lambda_s p(x_s)`.
    pub fn functional(&self, kind: QuadratureWeights, p: &Poly) -> Complex64 {
        self.weights(kind)
            .iter()
            .zip(&self.nodes)
            .map(|(w, &x)| w * p.eval(x))
            .collect::<CompensatedSum>()
            .value()
    }

    /// `<p, r>_j = Σ_{i<j} <v, (D_q^{iN} p)(D_q^{iN} r)>`.
    pub fn bilinear(
        &self,
        level: usize,
        kind: QuadratureWeights,
        p: &Poly,
        r: &Poly,
    ) -> Result<Complex64> {
        let mut total = ZERO;
        let mut dp = p.clone();
        let mut dr = r.clone();
        for i in 0..level {
            if i > 0 {
                for _ in 0..self.order {
                    dp = qderiv_poly(&dp, self.q)?;
                    dr = qderiv_poly(&dr, self.q)?;
                }
            }
            total += self.functional(kind, &(&dp * &dr));
        }
        Ok(total)
    }

    /// `prod_{k=1}^n gamma_k`, the value of `<v, U_n^2>` under the Gauss weights.
    pub fn expected_norm(&self, n: usize) -> Complex64 {
        (1..=n)
            .map(|k| {
                if k % self.q_order == 0 {
                    ZERO
                } else {
                    recurrence_coeffs(k, self.a, self.q).1
                }
            })
            .product()
    }

    /// Gram matrix of `U_0..U_{jN-1}` under the level-`j` form.
    pub fn gram(&self, level: usize, kind: QuadratureWeights) -> Result<GramReport> {
        if level == 0 {
            return Err(Error::Parameter("level must be >= 1".into()));
        }
        let size = level * self.order;
        let basis: Vec<Poly> = (0..size)
            .map(|n| recurrence_poly(n, self.a, self.q))
            .collect();
        let mut entries = vec![vec![ZERO; size]; size];
        for n in 0..size {
            for m in n..size {
                let v = self.bilinear(level, kind, &basis[n], &basis[m])?;
                entries[n][m] = v;
                entries[m][n] = v;
            }
        }
        let expected = match kind {
            QuadratureWeights::Gauss => Some((0..size).map(|n| self.expected_norm(n)).collect()),
            QuadratureWeights::AsPrinted => None,
        };
        Ok(GramReport::from_entries(
            self.a, self.q, 0, entries, expected,
        ))
    }
}

/// Level-`j` Gram matrix under the Gauss-weighted functional.
pub fn rootofunity_gram(
    order: usize,
    a: Complex64,
    q: Complex64,
    level: usize,
) -> Result<GramReport> {
    RootOfUnityForm::new(order, a, q)?.gram(level, QuadratureWeights::Gauss)
}
