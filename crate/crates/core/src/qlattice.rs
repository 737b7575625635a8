//! The weight `w(x; a; q)`, q-Jackson integrals, and the two-spiral lattice
//! `{q^k} ∪ {a q^k}` that supports them.

use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qkernel::{ensure_finite, qpoch_infinite, SeriesTruncation, REGIME_TOL};
use crate::report::format_real;
use crate::sum::CompensatedSum;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Adaptive truncation stops once `|q|^M max(1, |a|)` is below this.
pub const ADAPTIVE_TAIL: f64 = 1e-18;

fn require_lattice_base(q: Complex64) -> Result<()> {
    ensure_finite(q, "q")?;
    if q.norm() == 0.0 {
        return Err(Error::Parameter("q = 0 is excluded".into()));
    }
    if q.norm() >= 1.0 - REGIME_TOL {
        return Err(Error::Regime(format!(
            "|q| = {} but the q-lattice needs |q| < 1",
            q.norm()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSpec {
    pub a: Complex64,
    pub q: Complex64,
    pub trunc: SeriesTruncation,
}

impl WeightSpec {
    pub fn new(a: Complex64, q: Complex64, trunc: SeriesTruncation) -> Result<Self> {
        require_lattice_base(q)?;
        ensure_finite(a, "a")?;
        if a.norm() == 0.0 {
            return Err(Error::Parameter("a = 0: weight needs q x / a".into()));
        }
        Ok(WeightSpec { a, q, trunc })
    }
}

/// `w(x; a; q) = (q x; q)_inf (q x / a; q)_inf`.
pub fn weight_eval(x: Complex64, spec: &WeightSpec) -> Result<Complex64> {
    ensure_finite(x, "x")?;
    let qx = spec.q * x;
    Ok(
        qpoch_infinite(qx, spec.q, &spec.trunc)?
            * qpoch_infinite(qx / spec.a, spec.q, &spec.trunc)?,
    )
}

/// `c (1 - q) sum_{n=0}^{M} f(c q^n) q^n`.
pub fn jackson_0_to_c<F>(f: F, c: Complex64, q: Complex64, m: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    require_lattice_base(q)?;
    ensure_finite(c, "c")?;
    let mut sum = CompensatedSum::new();
    let mut qn = ONE;
    for _ in 0..=m {
        sum.add(f(c * qn) * qn);
        qn *= q;
    }
    Ok(c * (ONE - q) * sum.value())
}

/// `∫_a^b f d_q x = ∫_0^b f d_q x - ∫_0^a f d_q x`.
pub fn jackson_a_to_b<F>(
    f: F,
    a: Complex64,
    b: Complex64,
    q: Complex64,
    m: usize,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    Ok(jackson_0_to_c(&f, b, q, m)? - jackson_0_to_c(&f, a, q, m)?)
}

/// Upper bound on any adaptive order.
pub const MAX_ADAPTIVE_ORDER: usize = 100_000;

/// Smallest `M` with `|q|^M max(1, |a|) < 1e-18`, capped at [`MAX_ADAPTIVE_ORDER`].
pub fn adaptive_truncation(a: Complex64, q: Complex64) -> usize {
    let r = q.norm();
    let scale = a.norm().max(1.0);
    let mut m = 0usize;
    let mut mag = scale;
    while mag >= ADAPTIVE_TAIL && m < MAX_ADAPTIVE_ORDER {
        mag *= r;
        m += 1;
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// Points `q^k`.
    S1,
    /// Points `a q^k`.
    S2,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::S1 => write!(f, "S1"),
            Branch::S2 => write!(f, "S2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticePoint {
    pub branch: Branch,
    pub k: usize,
    pub point: Complex64,
}

/// A Jackson node with its quadrature coefficient on `[a, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacksonNode {
    pub point: Complex64,
    pub coefficient: Complex64,
}

/// The truncated lattice `{q^k} ∪ {a q^k}`, `0 <= k <= M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpiralLattice {
    a: Complex64,
    q: Complex64,
    m: usize,
}

impl SpiralLattice {
    pub fn new(a: Complex64, q: Complex64, m: usize) -> Result<Self> {
        require_lattice_base(q)?;
        ensure_finite(a, "a")?;
        if a.norm() == 0.0 {
            return Err(Error::Parameter("a = 0 collapses the second spiral".into()));
        }
        Ok(SpiralLattice { a, q, m })
    }

    /// Lattice with the adaptive truncation order.
    pub fn adaptive(a: Complex64, q: Complex64) -> Result<Self> {
        require_lattice_base(q)?;
        let m = adaptive_truncation(a, q);
        Self::new(a, q, m)
    }

    /// `m = 0` selects the adaptive order.
    pub fn with_order(a: Complex64, q: Complex64, m: usize) -> Result<Self> {
        if m == 0 {
            Self::adaptive(a, q)
        } else {
            Self::new(a, q, m)
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// Points of one branch; each is `q` times its predecessor.
    pub fn branch_points(&self, branch: Branch) -> Vec<Complex64> {
        let start = match branch {
            Branch::S1 => ONE,
            Branch::S2 => self.a,
        };
        std::iter::successors(Some(start), |&z| Some(z * self.q))
            .take(self.m + 1)
            .collect()
    }

    /// All `2(M+1)` points, S1 first, each branch by decreasing magnitude.
    pub fn points(&self) -> Vec<LatticePoint> {
        [Branch::S1, Branch::S2]
            .into_iter()
            .flat_map(|branch| {
                self.branch_points(branch)
                    .into_iter()
                    .enumerate()
                    .map(move |(k, point)| LatticePoint { branch, k, point })
            })
            .collect()
    }

    /// Nodes and coefficients realizing `∫_a^1 f d_q x ≈ Σ c_j f(x_j)`.
    pub fn jackson_nodes(&self) -> Vec<JacksonNode> {
        let scale = ONE - self.q;
        let mut nodes = Vec::with_capacity(2 * (self.m + 1));
        let mut qk = ONE;
        for point in self.branch_points(Branch::S1) {
            nodes.push(JacksonNode {
                point,
                coefficient: scale * qk,
            });
            qk *= self.q;
        }
        qk = ONE;
        for point in self.branch_points(Branch::S2) {
            nodes.push(JacksonNode {
                point,
                coefficient: -self.a * scale * qk,
            });
            qk *= self.q;
        }
        nodes
    }

    /// `∫_a^1 f d_q x` on this lattice.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64,
    {
        self.jackson_nodes()
            .iter()
            .map(|n| n.coefficient * f(n.point))
            .collect::<CompensatedSum>()
            .value()
    }
}

/// Continuous spiral through a branch: `S1(t) = |q|^t e^{i t arg q}`,
/// `S2(t) = |a| |q|^t e^{i (t arg q + arg a)}`.
pub fn spiral_point(branch: Branch, t: f64, a: Complex64, q: Complex64) -> Complex64 {
    let base = Complex64::from_polar(q.norm().powf(t), t * q.arg());
    match branch {
        Branch::S1 => base,
        Branch::S2 => base * Complex64::from_polar(a.norm(), a.arg()),
    }
}

/// CSV with header `branch,k,re,im` (plus `r,theta` when `polar`).
///
/// Numbers use the shortest representation that round-trips exactly.
pub fn write_lattice_csv<W: Write>(
    out: &mut W,
    points: &[LatticePoint],
    polar: bool,
) -> io::Result<()> {
    if polar {
        writeln!(out, "branch,k,re,im,r,theta")?;
    } else {
        writeln!(out, "branch,k,re,im")?;
    }
    for p in points {
        write!(
            out,
            "{},{},{},{}",
            p.branch,
            p.k,
            format_real(p.point.re),
            format_real(p.point.im)
        )?;
        if polar {
            write!(
                out,
                ",{},{}",
                format_real(p.point.norm()),
                format_real(p.point.arg())
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
