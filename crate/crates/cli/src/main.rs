mod sigma;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use concordia::cooper::mod_inverse;
use clap::{Args, Parser, Subcommand, ValueEnum};
use concordia::catalog::{
    derivative_obstruction, doubling_obstruction, farey_samples, sufficiency_verify, Catalog, ObstructionReport,
    Sufficiency, Verdict,
};
use concordia::cooper::{cooper_scan, scan_points, ScanGrid};
use concordia::factorization::{lemma_check, solve_g, Dichotomy, FourierSeries, Identity, SolveOutcome};
use concordia::laurent::{factor_rational, fox_milnor, FoxMilnor, LaurentPoly, DEFAULT_ANNIHILATOR_BOUND};
use concordia::seifert::{parse_matrix, Isotropic, SeifertMatrix};
use concordia::sigfn::SignatureFunction;
use concordia::signature::{ProfileRecord, Side, SignatureConfig, UnitAngle};
use serde_json::{json, Value};

const PASS: u8 = 0;
const USAGE: u8 = 1;
const VIOLATED: u8 = 2;
const INAPPLICABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "concordia", version, about = "Concordance invariants and signature obstructions for knots")]
struct Cli {
    /// Starting bit precision for certified angle comparisons.
    #[arg(long, global = true, value_name = "BITS", default_value_t = 128)]
    precision: u32,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

/// A Seifert matrix given as a file or a catalog name.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct MatrixArgs {
    /// Matrix file: a size line followed by rows.
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Knot from the built-in catalog.
    #[arg(long, value_name = "NAME")]
    knot: Option<String>,
}

impl MatrixArgs {
    fn load(&self) -> Result<SeifertMatrix> {
        match (&self.matrix, &self.knot) {
            (Some(p), _) => sigma::matrix_file(p),
            (_, Some(n)) => sigma::knot_matrix(n),
            _ => unreachable!("clap enforces the group"),
        }
    }
}

/// A signature function given as a matrix, catalog knot, step file, or expression.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct SigmaArgs {
    /// Seifert matrix file.
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Knot from the built-in catalog.
    #[arg(long, value_name = "NAME")]
    knot: Option<String>,
    /// Step function file of `num/den jump` lines.
    #[arg(long, value_name = "FILE")]
    step: Option<PathBuf>,
    /// Expression such as `cable(3_1,1) - cable(3_1,2)`, `2*5_2`, or `@file`.
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    sigma: Option<String>,
}

impl SigmaArgs {
    fn load(&self, config: SignatureConfig) -> Result<SignatureFunction> {
        if let Some(p) = &self.matrix {
            sigma::from_matrix(&sigma::matrix_file(p)?, config)
        } else if let Some(n) = &self.knot {
            sigma::from_matrix(&sigma::knot_matrix(n)?, config)
        } else if let Some(p) = &self.step {
            Ok(sigma::step_file(p)?.to_function())
        } else if let Some(e) = &self.sigma {
            sigma::parse_expr(e, config)
        } else {
            unreachable!("clap enforces the group")
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Averaged,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
            SideArg::Averaged => Side::Averaged,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Alexander polynomial of a Seifert matrix.
    Alexander {
        #[command(flatten)]
        src: MatrixArgs,
        /// Also print the irreducible factorization over Q.
        #[arg(long)]
        factor: bool,
    },
    /// Evaluate, profile, or sample a signature function.
    Signature {
        #[command(flatten)]
        src: SigmaArgs,
        /// Angles in turns, e.g. `1/3`. Repeatable.
        #[arg(long = "at", value_name = "THETA", conflicts_with_all = ["profile", "csv"])]
        at: Vec<UnitAngle>,
        #[arg(long, value_enum, default_value = "averaged")]
        side: SideArg,
        /// Piecewise description as `lo hi value` and `jump lo hi amount` lines
        /// (the default for matrix-backed functions).
        #[arg(long, conflicts_with = "csv")]
        profile: bool,
        /// Sample on the grid j/STEPS, j = 0..=STEPS, as CSV.
        #[arg(long, value_name = "STEPS")]
        csv: Option<u32>,
    },
    /// Test whether a polynomial factors as δ(t)δ(t⁻¹).
    FoxMilnor {
        /// Polynomial as `coeff:exp` pairs.
        #[arg(long, value_name = "POLY", allow_hyphen_values = true, conflicts_with_all = ["matrix", "knot"])]
        poly: Option<String>,
        #[arg(long, value_name = "FILE")]
        matrix: Option<PathBuf>,
        #[arg(long, value_name = "NAME")]
        knot: Option<String>,
    },
    /// Search for a metabolizer of the Seifert form.
    Metabolizer {
        #[command(flatten)]
        src: MatrixArgs,
        /// Entry bound for the search above genus one.
        #[arg(long, default_value_t = 2)]
        height: u32,
    },
    /// Scan the Cooper (m,n) signature condition.
    Cooper {
        #[command(flatten)]
        src: SigmaArgs,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 50)]
        pmax: i64,
        #[arg(long, default_value_t = 50)]
        cmax: i64,
        /// Skip moduli sharing a factor with K.
        #[arg(long, value_name = "K", default_value_t = 1)]
        coprime_to: i64,
    },
    /// Solve σ(kx) = g(b x) − g(a x) on the p-torsion points.
    SolveG {
        #[command(flatten)]
        src: SigmaArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "kmax", conflicts_with = "kmax")]
        k: Option<i64>,
        /// Try k = 1..=KMAX and stop at the first solution.
        #[arg(long, value_name = "KMAX")]
        kmax: Option<i64>,
        #[arg(long)]
        p: i64,
    },
    /// Run the finite Fourier difference analysis.
    FourierLemma {
        /// Series file of `coeff i1 .. in` lines.
        #[arg(long, value_name = "FILE")]
        series: PathBuf,
        /// Integer matrix file for M.
        #[arg(long = "matrix-m", value_name = "FILE")]
        matrix_m: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Largest power tried in the eigenvector dichotomy.
        #[arg(long, default_value_t = DEFAULT_ANNIHILATOR_BOUND)]
        pbound: u32,
    },
    /// Cooper (m, m+1) obstruction for an infection knot.
    DerivativeTest {
        #[command(flatten)]
        src: SigmaArgs,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 50)]
        pmax: i64,
        #[arg(long, default_value_t = 50)]
        cmax: i64,
    },
    /// Vanishing test forced by a non-annihilated Alexander factor.
    DoublingTest {
        /// Alexander polynomial of the pattern as `coeff:exp` pairs.
        #[arg(long, value_name = "POLY", allow_hyphen_values = true, required_unless_present = "delta_knot")]
        delta: Option<String>,
        /// Use the Alexander polynomial of a catalog knot.
        #[arg(long, value_name = "NAME", conflicts_with = "delta")]
        delta_knot: Option<String>,
        #[command(flatten)]
        src: SigmaArgs,
        #[arg(long, default_value_t = DEFAULT_ANNIHILATOR_BOUND)]
        pmax_poly: u32,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Check σ_J(θ) = σ_T(mθ) − σ_T((m+1)θ) on sampled angles.
    Sufficiency {
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        j: String,
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Built-in knot table.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List entries with genus and Alexander polynomial.
    List,
}

/// Result of a subcommand: exit code plus both renderings.
struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

impl Outcome {
    fn new(code: u8, text: String, json: Value) -> Self {
        Self { code, text, json }
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass | Verdict::BoundedPass => PASS,
        Verdict::Violated => VIOLATED,
        Verdict::Inapplicable => INAPPLICABLE,
    }
}

fn report(r: &ObstructionReport) -> Outcome {
    let mut text = format!("verdict: {}\n", r.verdict);
    for (k, v) in &r.parameters {
        text += &format!("param {k} = {v}\n");
    }
    for e in &r.evidence {
        text += &format!("evidence {e}\n");
    }
    let params: serde_json::Map<String, Value> = r.parameters.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let evidence: Vec<String> = r.evidence.iter().map(ToString::to_string).collect();
    let json = json!({ "verdict": r.verdict.as_str(), "parameters": params, "evidence": evidence });
    Outcome::new(verdict_code(r.verdict), text, json)
}

fn alexander(src: &MatrixArgs, factor: bool) -> Result<Outcome> {
    let delta = src.load()?.alexander();
    let mut text = format!("{delta}\n");
    let mut json = json!({ "alexander": delta.to_string(), "pretty": delta.poly().pretty(), "degree": delta.degree() });
    if factor {
        let f = factor_rational(delta.poly())?;
        text += &format!("content {}\n", f.content);
        let mut list = Vec::new();
        for x in &f.factors {
            text += &format!("factor {} ^{}\n", x.poly, x.multiplicity);
            list.push(json!({ "factor": x.poly.to_string(), "multiplicity": x.multiplicity }));
        }
        json["content"] = json!(f.content.to_string());
        json["factors"] = json!(list);
    }
    Ok(Outcome::new(PASS, text, json))
}

fn signature(
    src: &SigmaArgs,
    at: &[UnitAngle],
    side: Side,
    csv: Option<u32>,
    config: SignatureConfig,
) -> Result<Outcome> {
    let f = src.load(config)?;
    if !at.is_empty() {
        let mut text = String::new();
        let mut values = Vec::new();
        for &theta in at {
            let v = f.eval(theta, side)?;
            text += &format!("{theta} {v}\n");
            values.push(json!({ "theta": theta.to_string(), "value": v.to_string() }));
        }
        return Ok(Outcome::new(PASS, text, json!({ "function": f.to_string(), "values": values })));
    }
    if let Some(steps) = csv {
        let text = f.sample_csv(steps)?;
        let rows: Vec<Value> = text
            .lines()
            .skip(1)
            .filter_map(|l| l.split_once(','))
            .map(|(t, v)| json!({ "theta": t, "value": v }))
            .collect();
        return Ok(Outcome::new(PASS, text, json!({ "samples": rows })));
    }
    let Some(p) = f.as_profile() else {
        bail!("{f} is not matrix-backed; use --at or --csv");
    };
    let records: Vec<Value> = p
        .records()
        .into_iter()
        .map(|r| match r {
            ProfileRecord::Interval { lo, hi, value } => {
                json!({ "kind": "interval", "lo": lo.to_string(), "hi": hi.to_string(), "value": value })
            }
            ProfileRecord::Jump { lo, hi, amount } => {
                json!({ "kind": "jump", "lo": lo.to_string(), "hi": hi.to_string(), "amount": amount })
            }
        })
        .collect();
    let json = json!({ "genus": p.genus(), "values": p.values(), "records": records });
    Ok(Outcome::new(PASS, p.export(), json))
}

fn fox_milnor_cmd(poly: &Option<String>, matrix: &Option<PathBuf>, knot: &Option<String>) -> Result<Outcome> {
    let p: LaurentPoly = match (poly, matrix, knot) {
        (Some(s), _, _) => s.parse().context("parsing --poly")?,
        (_, Some(path), _) => sigma::matrix_file(path)?.alexander().into_poly(),
        (_, _, Some(n)) => sigma::knot_matrix(n)?.alexander().into_poly(),
        _ => bail!("give one of --poly, --matrix, --knot"),
    };
    Ok(match fox_milnor(&p)? {
        FoxMilnor::Yes(w) => Outcome::new(
            PASS,
            format!("yes {w}\n"),
            json!({ "verdict": "yes", "witness": w.to_string(), "pretty": w.pretty() }),
        ),
        FoxMilnor::No => Outcome::new(VIOLATED, "no\n".into(), json!({ "verdict": "no" })),
    })
}

fn metabolizer(src: &MatrixArgs, height: u32) -> Result<Outcome> {
    let s = src.load()?;
    if s.genus() == 1 {
        return Ok(match s.metabolizer_genus1()? {
            Some(v) => Outcome::new(
                PASS,
                format!("found {} {}\n", v[0], v[1]),
                json!({ "verdict": "found", "basis": [v] }),
            ),
            None => Outcome::new(VIOLATED, "none\n".into(), json!({ "verdict": "none" })),
        });
    }
    Ok(match s.isotropic_search(height) {
        Isotropic::Found(basis) => {
            let mut text = String::from("found\n");
            for v in &basis {
                text += &format!("{}\n", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            }
            Outcome::new(PASS, text, json!({ "verdict": "found", "basis": basis }))
        }
        Isotropic::NotFoundUpToHeight(h) => Outcome::new(
            INAPPLICABLE,
            format!("not found up to height {h}\n"),
            json!({ "verdict": "not-found", "height": h }),
        ),
    })
}

fn cooper(f: &SignatureFunction, m: i64, n: i64, grid: ScanGrid) -> Result<Outcome> {
    let violations = cooper_scan(f, m, n, &grid)?;
    let points = scan_points(m, n, &grid).len();
    let list: Vec<Value> = violations
        .iter()
        .map(|v| json!({ "p": v.p, "c": v.c, "r": v.r, "sum": v.sum.to_string() }))
        .collect();
    let mut json = json!({ "m": m, "n": n, "pmax": grid.p_max, "cmax": grid.c_max, "points": points, "violations": list });
    if violations.is_empty() {
        json["verdict"] = json!("bounded-pass");
        return Ok(Outcome::new(PASS, format!("no violations among {points} points\n"), json));
    }
    json["verdict"] = json!("violated");
    let text: String = violations.iter().map(|v| format!("{} {} {} {}\n", v.p, v.c, v.r, v.sum)).collect();
    Ok(Outcome::new(VIOLATED, text, json))
}

fn solve_g_cmd(f: &SignatureFunction, a: i64, b: i64, k: i64, p: i64) -> Result<Outcome> {
    Ok(match solve_g(f, a, b, k, p)? {
        SolveOutcome::Solution(g) => {
            let text: String = (0..p).map(|y| format!("{y}/{p} {}\n", g.value(y))).collect();
            let values: Vec<String> = g.values.iter().map(ToString::to_string).collect();
            Outcome::new(PASS, text, json!({ "verdict": "solution", "p": p, "values": values, "free": g.free }))
        }
        SolveOutcome::Violation { orbit, sum } => {
            let o: Vec<String> = orbit.iter().map(ToString::to_string).collect();
            Outcome::new(
                VIOLATED,
                format!("violation orbit {} sum {sum}\n", o.join(" ")),
                json!({ "verdict": "violated", "orbit": orbit, "sum": sum.to_string() }),
            )
        }
    })
}

/// Scans `k = 1..=kmax`, skipping `k` that share a factor with `p`.
fn solve_g_scan(f: &SignatureFunction, a: i64, b: i64, kmax: i64, p: i64) -> Result<Outcome> {
    let mut tried = Vec::new();
    for k in (1..=kmax).filter(|&k| mod_inverse(k, p).is_some()) {
        let out = solve_g_cmd(f, a, b, k, p)?;
        if out.code == PASS {
            let mut json = out.json;
            json["k"] = json!(k);
            return Ok(Outcome::new(PASS, format!("k {k}\n{}", out.text), json));
        }
        tried.push(k);
    }
    Ok(Outcome::new(
        INAPPLICABLE,
        format!("no solution for k <= {kmax} (tried {tried:?})\n"),
        json!({ "verdict": "bounded", "kmax": kmax, "tried": tried }),
    ))
}

fn fourier_lemma(series: &Path, matrix_m: &Path, d: i64, pbound: u32) -> Result<Outcome> {
    let f: FourierSeries = sigma::read(series)?.parse().context("parsing series file")?;
    let m = parse_matrix(&sigma::read(matrix_m)?).context("parsing --matrix-m")?;
    let r = lemma_check(&f, &m, d, pbound)?;
    let dichotomy = match &r.dichotomy {
        Dichotomy::CaseOneUpTo(b) => format!("case-one up to {b}"),
        Dichotomy::CaseTwo { p, lambda } => format!("case-two p={p} lambda={lambda}"),
    };
    let identity = match r.case2_identity {
        Identity::Verified => "verified",
        Identity::Failed => "failed",
        Identity::NotApplicable => "not-applicable",
    };
    let code = match r.case2_identity {
        Identity::Verified => PASS,
        Identity::Failed => VIOLATED,
        Identity::NotApplicable => INAPPLICABLE,
    };
    let block = |name: &str, s: &FourierSeries| format!("[{name}]\n{s}");
    let text = [
        block("difference", &r.difference),
        block("off-axis", &r.off_axis_residual),
        block("axis", &r.s),
        format!("dichotomy {dichotomy}\nidentity {identity}\n"),
    ]
    .concat();
    let json = json!({
        "difference": r.difference.to_string(),
        "off_axis_residual": r.off_axis_residual.to_string(),
        "axis": r.s.to_string(),
        "dichotomy": dichotomy,
        "identity": identity,
    });
    Ok(Outcome::new(code, text, json))
}

fn sufficiency(j: &str, t: &str, m: i64, samples: usize, config: SignatureConfig) -> Result<Outcome> {
    let (fj, ft) = (sigma::parse_expr(j, config)?, sigma::parse_expr(t, config)?);
    Ok(match sufficiency_verify(&fj, &ft, m, &farey_samples(samples))? {
        Sufficiency::Pass => Outcome::new(
            PASS,
            format!("pass on {samples} samples\n"),
            json!({ "verdict": "pass", "samples": samples }),
        ),
        Sufficiency::Fail { theta, lhs, rhs } => Outcome::new(
            VIOLATED,
            format!("fail at {theta}: {lhs} != {rhs}\n"),
            json!({ "verdict": "fail", "theta": theta.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string() }),
        ),
    })
}

fn catalog_list() -> Outcome {
    let mut text = String::new();
    let mut list = Vec::new();
    for e in Catalog::builtin().entries() {
        text += &format!("{:<8} g={} {:<40} {}\n", e.name, e.seifert.genus(), e.alexander.poly().pretty(), e.notes);
        list.push(json!({
            "name": e.name,
            "genus": e.seifert.genus(),
            "alexander": e.alexander.to_string(),
            "notes": e.notes,
        }));
    }
    Outcome::new(PASS, text, json!(list))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let config = SignatureConfig { precision_bits: cli.precision, ..SignatureConfig::default() };
    match &cli.cmd {
        Cmd::Alexander { src, factor } => alexander(src, *factor),
        Cmd::Signature { src, at, side, csv, .. } => signature(src, at, (*side).into(), *csv, config),
        Cmd::FoxMilnor { poly, matrix, knot } => fox_milnor_cmd(poly, matrix, knot),
        Cmd::Metabolizer { src, height } => metabolizer(src, *height),
        Cmd::Cooper { src, m, n, pmax, cmax, coprime_to } => {
            cooper(&src.load(config)?, *m, *n, ScanGrid::new(*pmax, *cmax).coprime_to(*coprime_to))
        }
        Cmd::SolveG { src, a, b, k: Some(k), p, .. } => solve_g_cmd(&src.load(config)?, *a, *b, *k, *p),
        Cmd::SolveG { src, a, b, kmax, p, .. } => solve_g_scan(&src.load(config)?, *a, *b, kmax.unwrap_or(1), *p),
        Cmd::FourierLemma { series, matrix_m, d, pbound } => fourier_lemma(series, matrix_m, *d, *pbound),
        Cmd::DerivativeTest { src, m, pmax, cmax } => {
            Ok(report(&derivative_obstruction(*m, &src.load(config)?, *pmax, *cmax)?))
        }
        Cmd::DoublingTest { delta, delta_knot, src, pmax_poly, samples } => {
            let delta: LaurentPoly = match (delta, delta_knot) {
                (Some(s), _) => s.parse().context("parsing --delta")?,
                (_, Some(n)) => sigma::knot_matrix(n)?.alexander().into_poly(),
                _ => bail!("give --delta or --delta-knot"),
            };
            Ok(report(&doubling_obstruction(&delta, &src.load(config)?, *pmax_poly, *samples)?))
        }
        Cmd::Sufficiency { j, t, m, samples } => sufficiency(j, t, *m, *samples, config),
        Cmd::Catalog { action: CatalogCmd::List } => Ok(catalog_list()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error for a report writer
            let _ = if cli.json {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("serializable"))
            } else {
                write!(stdout, "{}", out.text)
            };
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
