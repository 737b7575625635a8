//! The `ascq` command line: evaluation, zeros, lattices, Gram matrices and
//! verification reports.
//!
//! Exit codes: 0 when every selected check passes, 1 on a failed numeric
//! check, 2 on invalid input. Errors are written to stdout as a JSON object.

pub mod complex_arg;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::ascpoly::{rodrigues_eval, u_eval, u_explicit, u_recurrence, FamilyParams};
use crate::error::Error;
use crate::genfun::{genfun_report, thm33_check, verify_connection, DEFAULT_TERMS};
use crate::orthocheck::{
    corollary_sum, gram, sbp_identity_check, verify_asc2, QuadratureWeights, RootOfUnityForm,
};
use crate::poly::Poly;
use crate::qkernel::SeriesTruncation;
use crate::qlattice::{spiral_point, write_lattice_csv, Branch, SpiralLattice};
use crate::report::{Cx, Verdict};
use crate::zeros::{find_zeros, write_zeros_csv, ZeroSet};

pub use complex_arg::{format_complex, ComplexArg};
use svg::{Frame, Svg};

const DEFAULT_A: &str = "1+1i";
const DEFAULT_Q: &str = "0.8@0.5235987755982988";

#[derive(Debug, Parser)]
#[command(
    name = "ascq",
    version,
    about = "Al-Salam-Carlitz polynomials for complex a and q"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate U_n at points, or print its coefficients.
    Eval(EvalArgs),
    /// Zeros of U_n as CSV, optionally plotted.
    Zeros(ZerosArgs),
    /// Points of the two-spiral lattice {q^k} ∪ {a q^k}.
    Lattice(LatticeArgs),
    /// Gram matrix on the lattice (base 1/q when |q| > 1).
    Gram(GramArgs),
    /// Run one verification suite, or all of them.
    Verify(VerifyArgs),
    /// Generating-function checks at one point.
    Genfun(GenfunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Explicit,
    Recurrence,
    Rodrigues,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value = DEFAULT_A, allow_hyphen_values = true)]
    a: ComplexArg,
    #[arg(long, default_value = DEFAULT_Q, allow_hyphen_values = true)]
    q: ComplexArg,
    /// Evaluation point; may be repeated.
    #[arg(long, allow_hyphen_values = true)]
    x: Vec<ComplexArg>,
    /// Print ascending coefficients instead of values.
    #[arg(long)]
    coeffs: bool,
    #[arg(long, value_enum, default_value = "recurrence")]
    route: Route,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ZerosArgs {
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value = DEFAULT_A, allow_hyphen_values = true)]
    a: ComplexArg,
    #[arg(long, default_value = DEFAULT_Q, allow_hyphen_values = true)]
    q: ComplexArg,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    #[arg(long, default_value = DEFAULT_A, allow_hyphen_values = true)]
    a: ComplexArg,
    #[arg(long, default_value = DEFAULT_Q, allow_hyphen_values = true)]
    q: ComplexArg,
    /// Truncation order; 0 picks it from the tail bound.
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Add modulus and argument columns.
    #[arg(long)]
    polar: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GramArgs {
    #[arg(long, default_value = DEFAULT_A, allow_hyphen_values = true)]
    a: ComplexArg,
    #[arg(long, default_value = DEFAULT_Q, allow_hyphen_values = true)]
    q: ComplexArg,
    #[arg(long, visible_alias = "n", default_value_t = 10)]
    nmax: usize,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Asc1,
    Asc2,
    Corollary,
    Sbp,
    Rootofunity,
    Connection,
    Genfun,
    Thm33,
    All,
}

const ALL_CHECKS: [Check; 8] = [
    Check::Asc1,
    Check::Asc2,
    Check::Corollary,
    Check::Sbp,
    Check::Rootofunity,
    Check::Connection,
    Check::Genfun,
    Check::Thm33,
];

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[arg(long, default_value = DEFAULT_A, allow_hyphen_values = true)]
    a: ComplexArg,
    #[arg(long, default_value = "-2", allow_hyphen_values = true)]
    b: ComplexArg,
    /// Defaults to 0.8 exp(i pi / 6), its inverse for asc2, and exp(2 pi i / N) for rootofunity.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<ComplexArg>,
    /// Degree, size or order, depending on the check.
    #[arg(long, visible_alias = "nmax")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    x: ComplexArg,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<ComplexArg>,
    /// Seed for the random polynomials of the sbp check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of series terms.
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenfunArgs {
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    x: ComplexArg,
    #[arg(long, default_value = "0.15", allow_hyphen_values = true)]
    t: ComplexArg,
    #[arg(long, default_value = DEFAULT_A, allow_hyphen_values = true)]
    a: ComplexArg,
    #[arg(long, default_value = "-2", allow_hyphen_values = true)]
    b: ComplexArg,
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    q: ComplexArg,
    /// Number of series terms.
    #[arg(long, visible_alias = "terms", default_value_t = DEFAULT_TERMS)]
    n: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Failure of a command: invalid input or a numeric error from the library.
#[derive(Debug)]
enum Failure {
    Input(String),
    Numeric(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e)
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numeric(_) | Failure::Io(_) => 1,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message, extra) = match self {
            Failure::Input(m) => ("invalid_input", m.clone(), Value::Null),
            Failure::Io(e) => ("io", e.to_string(), Value::Null),
            Failure::Numeric(e) => {
                let extra = match e {
                    Error::NonConvergence { partial, .. } => zero_rows(partial),
                    _ => Value::Null,
                };
                ("numeric", e.to_string(), extra)
            }
        };
        let mut obj = json!({ "error": { "kind": kind, "message": message } });
        if !extra.is_null() {
            obj["error"]["partial"] = extra;
        }
        obj
    }
}

fn zero_rows(set: &ZeroSet) -> Value {
    set.zeros
        .iter()
        .zip(&set.residuals)
        .map(|(z, r)| json!({ "re": z.re, "im": z.im, "residual": r }))
        .collect()
}

type Outcome = Result<Verdict, Failure>;

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(v) if v.passed() => 0,
        Ok(_) => 1,
        Err(f) => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&f.to_json()).unwrap_or_default()
            );
            f.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Zeros(a) => cmd_zeros(a, out),
        Command::Lattice(a) => cmd_lattice(a, out),
        Command::Gram(a) => cmd_gram(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Genfun(a) => cmd_genfun(a, out),
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Input(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

fn write_text(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(path: Option<&Path>, value: &Value, out: &mut dyn Write) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.into()))?;
    text.push('\n');
    write_text(path, &text, out)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cmd_eval(args: EvalArgs, out: &mut dyn Write) -> Outcome {
    let params = FamilyParams::new(args.a.0, args.q.0)?;
    let mut text = String::new();
    if args.coeffs {
        let poly = match args.route {
            Route::Explicit => u_explicit(args.n, &params)?,
            Route::Recurrence => u_recurrence(args.n, &params),
            Route::Rodrigues => {
                return Err(Failure::Input(
                    "the rodrigues route evaluates pointwise; use --x".into(),
                ))
            }
        };
        let coeffs: Vec<Complex64> = (0..=args.n).map(|k| poly.coeff(k)).collect();
        if args.csv.is_some() {
            text.push_str("k,re,im\n");
            for (k, c) in coeffs.iter().enumerate() {
                text.push_str(&format!("{k},{},{}\n", c.re, c.im));
            }
        } else {
            let parts: Vec<String> = coeffs.iter().map(|&c| format_complex(c)).collect();
            text.push_str(&parts.join(", "));
            text.push('\n');
        }
    } else {
        if args.x.is_empty() {
            return Err(Failure::Input(
                "nothing to evaluate: pass --x or --coeffs".into(),
            ));
        }
        let explicit = match args.route {
            Route::Explicit => Some(u_explicit(args.n, &params)?),
            _ => None,
        };
        let trunc = SeriesTruncation::default();
        if args.csv.is_some() {
            text.push_str("x_re,x_im,re,im\n");
        }
        for x in &args.x {
            let x = x.0;
            let value = match args.route {
                Route::Explicit => explicit
                    .as_ref()
                    .map_or(Complex64::new(0.0, 0.0), |p: &Poly| p.eval(x)),
                Route::Recurrence => u_eval(args.n, &params, x),
                Route::Rodrigues => rodrigues_eval(args.n, &params, x, &trunc)?,
            };
            if args.csv.is_some() {
                text.push_str(&format!("{},{},{},{}\n", x.re, x.im, value.re, value.im));
            } else {
                text.push_str(&format_complex(value));
                text.push('\n');
            }
        }
    }
    write_text(args.csv.as_deref(), &text, out)?;
    Ok(Verdict::Pass)
}

fn cmd_zeros(args: ZerosArgs, out: &mut dyn Write) -> Outcome {
    check_tol(args.tol)?;
    if args.n == 0 {
        return Err(Failure::Input("n must be >= 1".into()));
    }
    let (a, q) = (args.a.0, args.q.0);
    let set = find_zeros(args.n, a, q, args.tol)?;
    let mut csv = Vec::new();
    write_zeros_csv(&mut csv, &set)?;
    write_text(args.csv.as_deref(), &String::from_utf8_lossy(&csv), out)?;

    if let Some(path) = &args.svg {
        let frame = Frame {
            xmin: -0.8,
            xmax: 1.2,
            ymin: -0.4,
            ymax: 1.2,
        }
        .enclosing(set.zeros.iter().chain([a].iter()));
        let mut plot = Svg::new(frame, 600.0);
        plot.axes();
        for (i, z) in set.zeros.iter().enumerate() {
            plot.point(
                *z,
                3.0,
                "#1f4fb4",
                Some(&format!("{i}: {}", format_complex(*z))),
            );
        }
        plot.marker(a, "#c0392b", "a");
        let meta = json!({
            "command": "zeros",
            "n": args.n,
            "a": format_complex(a),
            "q": format_complex(q),
            "tol": args.tol,
            "max_residual": set.max_residual(),
        });
        let title = format!(
            "Zeros of U_{} for a = {}, q = {}",
            args.n,
            format_complex(a),
            format_complex(q)
        );
        fs::write(path, plot.finish(&title, &meta))?;
    }
    Ok(Verdict::from_bool(set.max_residual() <= args.tol))
}

fn cmd_lattice(args: LatticeArgs, out: &mut dyn Write) -> Outcome {
    let (a, q) = (args.a.0, args.q.0);
    let lattice = SpiralLattice::with_order(a, q, args.m)?;
    let points = lattice.points();
    let mut csv = Vec::new();
    write_lattice_csv(&mut csv, &points, args.polar)?;
    write_text(args.csv.as_deref(), &String::from_utf8_lossy(&csv), out)?;

    if let Some(path) = &args.svg {
        let zs: Vec<Complex64> = points.iter().map(|p| p.point).collect();
        let frame = Frame {
            xmin: -0.2,
            xmax: 0.2,
            ymin: -0.2,
            ymax: 0.2,
        }
        .enclosing(zs.iter());
        let mut plot = Svg::new(frame, 600.0);
        plot.axes();
        let order = lattice.order() as f64;
        let steps = (lattice.order() * 8).max(8);
        for (branch, color) in [(Branch::S1, "#1f4fb4"), (Branch::S2, "#c0392b")] {
            let curve: Vec<Complex64> = (0..=steps)
                .map(|i| spiral_point(branch, order * i as f64 / steps as f64, a, q))
                .collect();
            plot.polyline(&curve, color);
            for p in points.iter().filter(|p| p.branch == branch) {
                plot.point(
                    p.point,
                    2.5,
                    color,
                    Some(&format!("{}, k = {}", p.branch, p.k)),
                );
            }
        }
        plot.marker(a, "#c0392b", "a");
        let meta = json!({
            "command": "lattice",
            "a": format_complex(a),
            "q": format_complex(q),
            "M": lattice.order(),
        });
        let title = format!(
            "Lattice {{q^k}} ∪ {{a q^k}}, a = {}, q = {}",
            format_complex(a),
            format_complex(q)
        );
        fs::write(path, plot.finish(&title, &meta))?;
    }
    Ok(Verdict::Pass)
}

fn gram_value(
    a: Complex64,
    q: Complex64,
    nmax: usize,
    m: usize,
    tol: f64,
) -> Result<(Value, Verdict), Failure> {
    let report = if q.norm() > 1.0 {
        verify_asc2(nmax, a, q, m)?
    } else {
        gram(nmax, a, q, m)?
    };
    let mut v = to_value(&report.to_json(tol));
    v["favard_max_rel_err"] = json!(report.favard_max_rel_err());
    Ok((v, Verdict::from_bool(report.passes(tol))))
}

fn cmd_gram(args: GramArgs, out: &mut dyn Write) -> Outcome {
    check_tol(args.tol)?;
    let (v, verdict) = gram_value(args.a.0, args.q.0, args.nmax, args.m, args.tol)?;
    emit_json(args.json.as_deref(), &v, out)?;
    Ok(verdict)
}

/// Degree-`degree` polynomial with coefficients uniform in the unit square.
fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Poly {
    Poly::new(
        (0..=degree)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn run_check(check: Check, args: &VerifyArgs) -> Result<(Value, Verdict), Failure> {
    let tol = args.tol;
    let a = args.a.0;
    let b = args.b.0;
    let default_q: Complex64 = DEFAULT_Q.parse::<ComplexArg>().expect("valid default").0;
    let inside = args
        .q
        .map_or(default_q, |q| if q.0.norm() > 1.0 { q.0.inv() } else { q.0 });
    let single = args.check != Check::All;
    let given_q = |default: Complex64| {
        if single {
            args.q.map_or(default, |q| q.0)
        } else {
            default
        }
    };

    match check {
        Check::Asc1 => gram_value(a, given_q(inside), args.n.unwrap_or(10), args.m, tol),
        Check::Asc2 => {
            let q = given_q(inside.inv());
            let report = verify_asc2(args.n.unwrap_or(8), a, q, args.m)?;
            let mut v = to_value(&report.to_json(tol));
            v["params"]["q"] = to_value(&Cx::from(q));
            v["params"]["p"] = to_value(&Cx::from(q.inv()));
            Ok((v, Verdict::from_bool(report.passes(tol))))
        }
        Check::Corollary => {
            let q = given_q(inside);
            let terms = args.terms.unwrap_or(200);
            let (lhs, rhs) = corollary_sum(a, q, terms, &SeriesTruncation::default())?;
            let residual = (lhs - rhs).norm();
            let verdict = Verdict::from_bool(residual <= tol);
            Ok((
                json!({
                    "params": { "a": Cx::from(a), "q": Cx::from(q), "terms": terms },
                    "lhs": Cx::from(lhs),
                    "rhs": Cx::from(rhs),
                    "residual": residual,
                    "verdict": verdict,
                    "tolerance": tol,
                }),
                verdict,
            ))
        }
        Check::Sbp => {
            let q = given_q(inside);
            let degree = args.n.unwrap_or(5);
            let m = if args.m == 0 { 50 } else { args.m };
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let f = random_poly(&mut rng, degree);
            let g = random_poly(&mut rng, degree);
            let rep = sbp_identity_check(|x| f.eval(x), |x| g.eval(x), q, m)?;
            let verdict = Verdict::from_bool(rep.residual_corrected() <= tol);
            Ok((
                json!({
                    "params": { "q": Cx::from(q), "M": m, "degree": degree, "seed": args.seed },
                    "lhs": Cx::from(rep.lhs),
                    "rhs_corrected": Cx::from(rep.rhs_corrected),
                    "rhs_as_printed": Cx::from(rep.rhs_as_printed),
                    "residual_corrected": rep.residual_corrected(),
                    "residual_as_printed": rep.residual_as_printed(),
                    "balanced_variant": rep.balanced_variant(tol),
                    "verdict": verdict,
                    "tolerance": tol,
                }),
                verdict,
            ))
        }
        Check::Rootofunity => {
            let order = args.n.unwrap_or(4);
            if order < 2 {
                return Err(Failure::Input("root-of-unity order N must be >= 2".into()));
            }
            let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / order as f64);
            let q = given_q(root);
            let form = RootOfUnityForm::new(order, a, q)?;
            let level1 = form.gram(1, QuadratureWeights::Gauss)?;
            let level2 = form.gram(2, QuadratureWeights::Gauss)?;
            let printed = form.gram(1, QuadratureWeights::AsPrinted)?;
            let verdict = Verdict::from_bool(level1.passes(tol) && level2.passes(tol));
            Ok((
                json!({
                    "params": { "a": Cx::from(a), "q": Cx::from(q), "N": order },
                    "nodes": form.nodes.iter().map(|&z| Cx::from(z)).collect::<Vec<_>>(),
                    "constant": Cx::from(form.constant),
                    "level1": to_value(&level1.to_json(tol)),
                    "level2": to_value(&level2.to_json(tol)),
                    "as_printed_weights": {
                        "max_offdiag_rel": printed.max_offdiag_rel,
                        "verdict": Verdict::from_bool(printed.max_offdiag_rel <= tol),
                    },
                    "verdict": verdict,
                    "tolerance": tol,
                }),
                verdict,
            ))
        }
        Check::Connection => {
            let p = given_q(inside);
            let n = args.n.unwrap_or(8);
            let chk = verify_connection(n, a, b, p)?;
            let coeffs = crate::genfun::connection_coeffs(n, a, b, p)?;
            let verdict = Verdict::from_bool(chk.residual_rel <= tol);
            Ok((
                json!({
                    "params": { "n": n, "a": Cx::from(a), "b": Cx::from(b), "p": Cx::from(p) },
                    "coefficients": coeffs.c.iter().map(|&c| Cx::from(c)).collect::<Vec<_>>(),
                    "residual_rel": chk.residual_rel,
                    "residual_abs": chk.residual_abs,
                    "base_p_residual_rel": chk.base_p_residual_rel,
                    "verdict": verdict,
                    "tolerance": tol,
                }),
                verdict,
            ))
        }
        Check::Genfun => {
            let p = given_q(Complex64::new(0.5, 0.0));
            let t = args.t.map_or(Complex64::new(0.15, 0.0), |t| t.0);
            let rep = genfun_report(
                args.x.0,
                t,
                a,
                b,
                p,
                args.terms.unwrap_or(DEFAULT_TERMS),
                tol,
            )?;
            Ok((to_value(&rep), rep.verdict))
        }
        Check::Thm33 => {
            let p = given_q(Complex64::new(0.5, 0.0));
            let t = args.t.map_or(Complex64::new(0.1, 0.0), |t| t.0);
            let rep = thm33_check(args.n.unwrap_or(1), t, a, b, p, args.m)?;
            let verdict = Verdict::from_bool(rep.passes(tol));
            let mut v = to_value(&rep);
            v["verdict"] = to_value(&verdict);
            v["tolerance"] = json!(tol);
            Ok((v, verdict))
        }
        Check::All => unreachable!("expanded by the caller"),
    }
}

fn check_name(check: Check) -> String {
    check
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Outcome {
    check_tol(args.tol)?;
    if args.check != Check::All {
        let (v, verdict) = run_check(args.check, &args)?;
        emit_json(args.json.as_deref(), &v, out)?;
        return Ok(verdict);
    }
    let mut results = Vec::new();
    let mut all_pass = true;
    let mut input_error = None;
    for check in ALL_CHECKS {
        let entry = match run_check(check, &args) {
            Ok((report, verdict)) => {
                all_pass &= verdict.passed();
                json!({ "check": check_name(check), "report": report })
            }
            Err(f) => {
                all_pass = false;
                let value = f.to_json();
                if let Failure::Input(_) = f {
                    input_error.get_or_insert(f);
                }
                json!({ "check": check_name(check), "report": value })
            }
        };
        results.push(entry);
    }
    let verdict = Verdict::from_bool(all_pass);
    emit_json(
        args.json.as_deref(),
        &json!({ "checks": results, "verdict": verdict, "tolerance": args.tol }),
        out,
    )?;
    match input_error {
        Some(Failure::Input(m)) => Err(Failure::Input(m)),
        _ => Ok(verdict),
    }
}

fn cmd_genfun(args: GenfunArgs, out: &mut dyn Write) -> Outcome {
    check_tol(args.tol)?;
    let rep = genfun_report(
        args.x.0, args.t.0, args.a.0, args.b.0, args.q.0, args.n, args.tol,
    )?;
    emit_json(args.json.as_deref(), &to_value(&rep), out)?;
    Ok(rep.verdict)
}
