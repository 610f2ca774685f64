//! Command-line driver for the exact sliced-sum pipelines.
//!
//! Reads a JSON job file describing a polytope or cone, a slicing subspace,
//! and an optional weight, runs the requested computation, and emits the
//! result as JSON (stdout, or a file with `--output`, in which case a
//! human-readable rendering goes to stdout instead). All numbers cross the
//! boundary as exact `"p/q"` strings; output is byte-identical across runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::{Integer, One, Signed, Zero};
use serde::Deserialize;
use serde_json::json;

use latsum_core::conedecomp::{barvinok_decompose, brion_vergne_decompose, generic_vector, SimplicialCone};
use latsum_core::ehrhart::{ehrhart_qp, QuasiPolynomial};
use latsum_core::exactlin::{format_rat, parse_rat, vec_add};
use latsum_core::genfun::{intermediate_genfun, polytope_genfun, taylor_along, GenFun, Polytope};
use latsum_core::oracle::brute_intermediate_sum;
use latsum_core::{Error, Int, IntVec, Rat, RatMat, RatVec};

#[derive(Parser)]
#[command(name = "latsum", version, about = "Exact sliced sums over rational polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Meromorphic generating function of a cone or polytope
    Genfun(JobArgs),
    /// Quasi-polynomial counting weighted slices of a dilated polytope
    Ehrhart(JobArgs),
    /// Evaluate a stored quasi-polynomial at sample dilations
    Eval(JobArgs),
    /// Compare a quasi-polynomial against the brute-force oracle
    Check(JobArgs),
    /// Signed cone decomposition, unimodular or along a subspace
    Decompose(JobArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Input job file (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Write the JSON result here and print a rendering to stdout instead
    #[arg(long)]
    output: Option<PathBuf>,
    /// Expand the generating function along a non-singular direction to this order
    #[arg(long)]
    taylor_order: Option<usize>,
    /// Additional sample dilations, comma-separated rationals
    #[arg(long, value_delimiter = ',')]
    samples: Vec<String>,
    /// Reserved worker count; must be at least 1
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

// ---------------------------------------------------------------------------
// Job files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct JobSpec {
    dim: usize,
    #[serde(default)]
    polytope: Option<PolytopeSpec>,
    #[serde(default)]
    cone: Option<ConeSpec>,
    #[serde(default, rename = "L")]
    l: Option<Vec<Vec<String>>>,
    #[serde(default)]
    weight: Option<WeightSpec>,
    #[serde(default)]
    options: Option<JobOptions>,
    #[serde(default)]
    qp: Option<QuasiPolynomial>,
}

#[derive(Deserialize)]
struct PolytopeSpec {
    vertices: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct ConeSpec {
    #[serde(default)]
    vertex: Option<Vec<String>>,
    generators: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct WeightSpec {
    ell: Vec<String>,
    #[serde(rename = "M")]
    m: usize,
}

#[derive(Deserialize, Default)]
struct JobOptions {
    #[serde(default)]
    taylor_order: Option<usize>,
    #[serde(default)]
    samples: Option<Vec<String>>,
    #[serde(default)]
    output: Option<String>,
}

enum CliError {
    Validation(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LATSUM_LOG")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let args = match &cli.command {
        Command::Genfun(a)
        | Command::Ehrhart(a)
        | Command::Eval(a)
        | Command::Check(a)
        | Command::Decompose(a) => a,
    };
    if args.jobs == 0 {
        return Err(CliError::Validation("--jobs must be at least 1".into()));
    }
    if args.jobs > 1 {
        log::info!("--jobs {} requested; orchestration is single-threaded", args.jobs);
    }
    match cli.command {
        Command::Genfun(a) => cmd_genfun(&a),
        Command::Ehrhart(a) => cmd_ehrhart(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Check(a) => cmd_check(&a),
        Command::Decompose(a) => cmd_decompose(&a),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_genfun(args: &JobArgs) -> Result<(), CliError> {
    let spec = load_spec(&args.input)?;
    let l = subspace_matrix(&spec)?;
    let f = match (&spec.polytope, &spec.cone) {
        (Some(p), None) => {
            let p = build_polytope(p, spec.dim)?;
            polytope_genfun(&p, &l)?
        }
        (None, Some(c)) => {
            let (s, cone) = build_cone(c, spec.dim)?;
            intermediate_genfun(&s, &cone, &l)?
        }
        _ => {
            return Err(CliError::Validation(
                "job must carry exactly one of \"polytope\" or \"cone\"".into(),
            ))
        }
    };
    let mut value = serde_json::to_value(&f)?;
    let order = args
        .taylor_order
        .or(spec.options.as_ref().and_then(|o| o.taylor_order));
    if let Some(order) = order {
        let (xi0, coeffs) = taylor_probe(&f, order)?;
        value["taylor"] = json!({
            "direction": rat_strings(&xi0),
            "coefficients": rat_strings(&coeffs),
        });
    }
    emit(&value, &render_genfun(&f), args, &spec)
}

fn cmd_ehrhart(args: &JobArgs) -> Result<(), CliError> {
    let spec = load_spec(&args.input)?;
    let p = match &spec.polytope {
        Some(p) => build_polytope(p, spec.dim)?,
        None => return Err(CliError::Validation("dilation counting needs a \"polytope\"".into())),
    };
    let l = subspace_matrix(&spec)?;
    let (ell, m) = weight_of(&spec)?;
    let qp = ehrhart_qp(&p, &l, &ell, m)?;
    let value = serde_json::to_value(&qp)?;
    let human = format!("{qp}\nperiod {}, degree at most {}", qp.period, qp.degree);
    emit(&value, &human, args, &spec)
}

fn cmd_eval(args: &JobArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)?;
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    // either a bare stored quasi-polynomial or a job wrapping one as "qp"
    let (qp, file_samples): (QuasiPolynomial, Vec<String>) = if raw.get("coeffs").is_some() {
        (serde_json::from_value(raw)?, vec![])
    } else {
        let mut spec: JobSpec = serde_json::from_value(raw)?;
        let qp = spec
            .qp
            .take()
            .ok_or_else(|| CliError::Validation("eval needs a stored \"qp\"".into()))?;
        (qp, option_samples(&spec))
    };
    let samples = parse_samples(&file_samples, &args.samples)?;
    let mut report = Vec::new();
    let mut human = String::new();
    for t in &samples {
        let v = qp.eval(t)?;
        let _ = writeln!(human, "t = {}: {}", format_rat(t), format_rat(&v));
        report.push(json!({"t": format_rat(t), "value": format_rat(&v)}));
    }
    let value = json!({ "values": report });
    emit_raw(&value, human.trim_end(), args)
}

fn cmd_check(args: &JobArgs) -> Result<(), CliError> {
    let spec = load_spec(&args.input)?;
    let p = match &spec.polytope {
        Some(p) => build_polytope(p, spec.dim)?,
        None => return Err(CliError::Validation("check needs a \"polytope\"".into())),
    };
    let l = subspace_matrix(&spec)?;
    let (ell, m) = weight_of(&spec)?;
    // the claim under test: a stored quasi-polynomial if the job carries
    // one, otherwise the freshly computed result
    let claim = match spec.qp.clone() {
        Some(qp) => qp,
        None => ehrhart_qp(&p, &l, &ell, m)?,
    };
    let samples = parse_samples(&option_samples(&spec), &args.samples)?;
    let mut report = Vec::new();
    let mut human = String::new();
    let mut all_equal = true;
    for t in &samples {
        let computed = claim.eval(t)?;
        let oracle = brute_intermediate_sum(&p, &l, &ell, m, t)?;
        let equal = computed == oracle;
        all_equal &= equal;
        let _ = writeln!(
            human,
            "t = {}: computed {}, oracle {}, {}",
            format_rat(t),
            format_rat(&computed),
            format_rat(&oracle),
            if equal { "ok" } else { "MISMATCH" }
        );
        report.push(json!({
            "t": format_rat(t),
            "computed": format_rat(&computed),
            "oracle": format_rat(&oracle),
            "equal": equal,
        }));
    }
    let _ = write!(
        human,
        "{}",
        if all_equal { "all samples agree" } else { "some samples disagree" }
    );
    let value = json!({ "report": report, "all_equal": all_equal });
    emit_raw(&value, &human, args)
}

fn cmd_decompose(args: &JobArgs) -> Result<(), CliError> {
    let spec = load_spec(&args.input)?;
    let c = match &spec.cone {
        Some(c) => c,
        None => return Err(CliError::Validation("decompose needs a \"cone\"".into())),
    };
    let (s, cone) = build_cone(c, spec.dim)?;
    let pieces = match &spec.l {
        None => barvinok_decompose(&cone)?,
        Some(_) => {
            let l = subspace_matrix(&spec)?;
            let a = generic_vector(&cone, &l)?;
            brion_vergne_decompose(&cone, &l, &a)?
        }
    };
    let mut listed = Vec::new();
    let mut human = format!("{} signed piece(s):\n", pieces.len());
    for piece in &pieces {
        let vertex = vec_add(&s, &piece.vertex);
        let gens: Vec<Vec<String>> = piece
            .cone
            .generators()
            .iter()
            .map(|g| g.iter().map(Int::to_string).collect())
            .collect();
        let _ = writeln!(
            human,
            "  {} at ({}): {}",
            if piece.sign > 0 { "+" } else { "-" },
            rat_strings(&vertex).join(", "),
            gens.iter()
                .map(|g| format!("({})", g.join(", ")))
                .collect::<Vec<_>>()
                .join(", ")
        );
        listed.push(json!({
            "sign": piece.sign,
            "vertex": rat_strings(&vertex),
            "generators": gens,
        }));
    }
    let value = json!({ "pieces": listed });
    emit_raw(&value, human.trim_end(), args)
}

// ---------------------------------------------------------------------------
// Input plumbing
// ---------------------------------------------------------------------------

fn load_spec(path: &PathBuf) -> Result<JobSpec, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_vec(entries: &[String], dim: usize) -> Result<RatVec, CliError> {
    if entries.len() != dim {
        return Err(CliError::Validation(format!(
            "vector has {} entries, expected {dim}",
            entries.len()
        )));
    }
    entries
        .iter()
        .map(|s| parse_rat(s).map_err(CliError::from))
        .collect()
}

fn build_polytope(spec: &PolytopeSpec, dim: usize) -> Result<Polytope, CliError> {
    let points = spec
        .vertices
        .iter()
        .map(|v| parse_vec(v, dim))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polytope::new(points)?)
}

/// Clears denominators of a rational direction, keeping its orientation.
fn int_direction(v: &[Rat]) -> IntVec {
    let scale = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x * Rat::from_integer(scale.clone())).to_integer())
        .collect()
}

fn build_cone(spec: &ConeSpec, dim: usize) -> Result<(RatVec, SimplicialCone), CliError> {
    let s = match &spec.vertex {
        Some(v) => parse_vec(v, dim)?,
        None => vec![Rat::zero(); dim],
    };
    let gens = spec
        .generators
        .iter()
        .map(|g| parse_vec(g, dim).map(|v| int_direction(&v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((s, SimplicialCone::new(gens, dim)?))
}

fn subspace_matrix(spec: &JobSpec) -> Result<RatMat, CliError> {
    let d = spec.dim;
    match &spec.l {
        None => Ok(RatMat::zeros(d, 0)),
        Some(cols) if cols.is_empty() => Ok(RatMat::zeros(d, 0)),
        Some(cols) => {
            let parsed = cols
                .iter()
                .map(|v| parse_vec(v, d))
                .collect::<Result<Vec<_>, _>>()?;
            let m = RatMat::from_cols(&parsed);
            if m.rank() != m.cols() {
                return Err(CliError::Validation(
                    "subspace basis vectors are linearly dependent".into(),
                ));
            }
            Ok(m)
        }
    }
}

fn weight_of(spec: &JobSpec) -> Result<(RatVec, usize), CliError> {
    match &spec.weight {
        None => Ok((vec![Rat::zero(); spec.dim], 0)),
        Some(w) => Ok((parse_vec(&w.ell, spec.dim)?, w.m)),
    }
}

fn option_samples(spec: &JobSpec) -> Vec<String> {
    spec.options
        .as_ref()
        .and_then(|o| o.samples.clone())
        .unwrap_or_default()
}

fn parse_samples(from_file: &[String], from_flag: &[String]) -> Result<Vec<Rat>, CliError> {
    from_file
        .iter()
        .chain(from_flag)
        .map(|s| parse_rat(s).map_err(CliError::from))
        .collect()
}

/// Walks the moment curve (1, u, u², …) until the expansion direction is
/// non-singular for every denominator of `f`.
fn taylor_probe(f: &GenFun, order: usize) -> Result<(RatVec, Vec<Rat>), CliError> {
    let d = f.dim;
    let denoms: usize = f.terms.iter().map(|t| t.discrete.len() + t.continuous.len()).sum();
    let budget = d * (denoms + 1) + 2;
    for step in 1..=budget {
        let u = Rat::from_integer(Int::from(step as i64));
        let mut xi0 = Vec::with_capacity(d);
        let mut cur = Rat::one();
        for _ in 0..d {
            xi0.push(cur.clone());
            cur *= &u;
        }
        match taylor_along(f, &xi0, order) {
            Ok(coeffs) => {
                log::debug!("expansion direction ({})", rat_strings(&xi0).join(", "));
                return Ok((xi0, coeffs));
            }
            Err(Error::SingularDirection) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CliError::Internal(
        "no non-singular expansion direction within budget".into(),
    ))
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

/// Renders Σ c_i·x_i with 1-based variable names, "0" when empty.
fn linear_form(v: &[Rat]) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mag = c.abs();
        if !mag.is_one() {
            let _ = write!(out, "{} ", format_rat(&mag));
        }
        let _ = write!(out, "x{}", i + 1);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn render_genfun(f: &GenFun) -> String {
    let mut out = format!("{} term(s) in dimension {}:", f.terms.len(), f.dim);
    for t in &f.terms {
        let mag = t.coeff.abs();
        let mut line = format!("\n  {} ", if t.coeff.is_negative() { "-" } else { "+" });
        if !mag.is_one() {
            let _ = write!(line, "{} ", format_rat(&mag));
        }
        if t.exponent.iter().all(Rat::is_zero) {
            line.push('1');
        } else {
            let _ = write!(line, "e^{{{}}}", linear_form(&t.exponent));
        }
        if !t.discrete.is_empty() || !t.continuous.is_empty() {
            line.push_str(" / ");
            for w in &t.discrete {
                let _ = write!(line, "(1 - e^{{{}}})", linear_form(w));
            }
            for w in &t.continuous {
                let _ = write!(line, "({})", linear_form(w));
            }
        }
        out.push_str(&line);
    }
    out
}

fn emit(value: &serde_json::Value, human: &str, args: &JobArgs, spec: &JobSpec) -> Result<(), CliError> {
    let file_output = spec
        .options
        .as_ref()
        .and_then(|o| o.output.as_ref())
        .map(PathBuf::from);
    let target = args.output.clone().or(file_output);
    write_result(value, human, &target)
}

fn emit_raw(value: &serde_json::Value, human: &str, args: &JobArgs) -> Result<(), CliError> {
    write_result(value, human, &args.output)
}

fn write_result(
    value: &serde_json::Value,
    human: &str,
    target: &Option<PathBuf>,
) -> Result<(), CliError> {
    let text = canonical_json(value)?;
    match target {
        Some(path) => {
            std::fs::write(path, text + "\n")?;
            println!("{human}");
        }
        None => println!("{text}"),
    }
    Ok(())
}

/// Pretty JSON with object keys sorted, so identical inputs produce
/// byte-identical outputs regardless of insertion order.
fn canonical_json(value: &serde_json::Value) -> Result<String, CliError> {
    fn sort(value: &serde_json::Value) -> serde_json::Value {
        match value {
            serde_json::Value::Object(map) => {
                let sorted: BTreeMap<&String, serde_json::Value> =
                    map.iter().map(|(k, v)| (k, sort(v))).collect();
                serde_json::to_value(sorted).expect("sorted map serializes")
            }
            serde_json::Value::Array(items) => {
                serde_json::Value::Array(items.iter().map(sort).collect())
            }
            other => other.clone(),
        }
    }
    Ok(serde_json::to_string_pretty(&sort(value))?)
}
