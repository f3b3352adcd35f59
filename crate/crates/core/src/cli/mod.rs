//! The `ncball` command line.
//!
//! [`run`] parses arguments, executes one command and writes either a
//! human-readable summary or (with `--json`) a single JSON document.
//! Exit codes: 0 success, 1 failed verification, 2 input error,
//! 3 unmet precondition, 4 numerical failure.

pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::fock;
use crate::freepoly::{parse, FreePolynomial};
use crate::linalg::{self, CMat, C64};
use crate::mattuple::MatrixTuple;
use crate::spectral;
use crate::structure::{self, Similarity};
use crate::variety::{self, IdealSpec, VarietyJson};

#[derive(Debug, Parser)]
#[command(name = "ncball", version, about = "Matrix tuples, free polynomials and the noncommutative row ball")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Tolerance for the command's main decision (boundary, rank or relation).
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// Seed for randomized searches.
    #[arg(long, global = true, value_name = "UINT")]
    seed: Option<u64>,
    /// Fock space truncation (maximum word length).
    #[arg(long, global = true, value_name = "UINT")]
    cutoff: Option<usize>,
    /// TOML file with tolerance and cap overrides.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a polynomial at a tuple.
    Eval { poly: String, tuple: PathBuf },
    /// Joint spectral radius.
    Jsr {
        tuple: PathBuf,
        /// Also report the power-iteration estimates for k = 1..=K.
        #[arg(long, value_name = "K")]
        iterations: Option<usize>,
    },
    /// Decide purity (joint spectral radius below 1).
    Pure { tuple: PathBuf },
    /// Find S with S^-1 X S a strict row contraction.
    Similarize {
        tuple: PathBuf,
        /// Recompute the target from S and confirm its row norm.
        #[arg(long)]
        check: bool,
    },
    /// Find S with S^-1 X S a row coisometry (irreducible, radius 1).
    Coisometrize {
        tuple: PathBuf,
        /// Divide the tuple by its joint spectral radius first.
        #[arg(long)]
        normalize: bool,
        /// Recompute the target from S and confirm sum T_j T_j^* = I.
        #[arg(long)]
        check: bool,
    },
    /// Jordan-Hoelder decomposition into irreducible blocks.
    Jh { tuple: PathBuf },
    /// Decide irreducibility of the generated algebra.
    Irred { tuple: PathBuf },
    /// Decide whether two tuples are similar.
    Similar { first: PathBuf, second: PathBuf },
    /// Membership in a variety, optionally in its similarity envelope.
    Member {
        /// qcomm:Q, wcomm:Q, x2, or a variety JSON file.
        #[arg(long)]
        variety: String,
        tuple: PathBuf,
        /// Also require joint spectral radius below 1.
        #[arg(long)]
        envelope: bool,
    },
    /// Truncated multiplier norm ||p(L)|| on the Fock space.
    Norm {
        poly: String,
        /// Number of variables.
        #[arg(short, long, default_value_t = 2)]
        d: usize,
    },
    /// Lower bound for the pseudo-hyperbolic distance between two pure tuples.
    Delta {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 16)]
        trials: usize,
    },
    /// Run the reproduction checks.
    VerifyPaper {
        /// Run only checks whose id contains this string.
        #[arg(long, value_name = "STR")]
        filter: Option<String>,
        /// Spoil the named check (harness self-test).
        #[arg(long, hide = true, value_name = "ID")]
        inject: Vec<String>,
        /// List check ids and exit.
        #[arg(long)]
        list: bool,
    },
}

/// Result of a command: a JSON payload and the exit code it implies.
struct Outcome {
    value: Value,
    code: i32,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, code: 0 }
    }
}

/// Parse `args` (including the program name), run the command and write its output.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json_requested = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            if json_requested {
                let v = json!({"error": {"kind": "usage", "message": e.to_string().trim_end(), "exit_code": 2}});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return 2;
        }
    };
    let json_mode = cli.json;
    let result = Config::load(cli.config.as_deref()).and_then(|cfg| execute(&cli, cfg));
    match result {
        Ok(outcome) => {
            let text = if json_mode {
                serde_json::to_string_pretty(&outcome.value).expect("json")
            } else {
                render_human(&outcome.value)
            };
            let _ = writeln!(out, "{text}");
            outcome.code
        }
        Err(e) => {
            let code = e.class().exit_code();
            if json_mode {
                let v = json!({"error": {"kind": e.kind(), "message": e.to_string(), "exit_code": code}});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                let _ = writeln!(out, "error ({}): {e}", e.kind());
            }
            code
        }
    }
}

fn execute(cli: &Cli, mut cfg: Config) -> Result<Outcome> {
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let tol = cli.tol;
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidInput(format!("--tol must be positive, got {t}")));
        }
    }
    let spectral_tol = |cfg: &mut Config| {
        if let Some(t) = tol {
            cfg.boundary_tol = t;
        }
    };
    match &cli.command {
        Command::Eval { poly, tuple } => {
            let x = read_tuple(tuple)?;
            let p = parse(poly, x.d())?;
            let m = p.evaluate(&x)?;
            Ok(Outcome::ok(json!({"n": x.n(), "matrix": matrix_json(&m)})))
        }
        Command::Jsr { tuple, iterations } => {
            spectral_tol(&mut cfg);
            let x = read_tuple(tuple)?;
            let rho = spectral::jsr(&x);
            let mut v = json!({
                "jsr": rho,
                "class": spectral::classify_radius(rho, cfg.boundary_tol),
            });
            if let Some(k) = iterations {
                v["iterates"] = json!(spectral::jsr_iterative(&x, *k));
            }
            Ok(Outcome::ok(v))
        }
        Command::Pure { tuple } => {
            spectral_tol(&mut cfg);
            let x = read_tuple(tuple)?;
            let rho = spectral::jsr(&x);
            Ok(Outcome::ok(json!({
                "pure": spectral::is_pure(&x, &cfg),
                "jsr": rho,
                "class": spectral::classify_radius(rho, cfg.boundary_tol),
            })))
        }
        Command::Similarize { tuple, check } => {
            spectral_tol(&mut cfg);
            let x = read_tuple(tuple)?;
            let cert = spectral::similarize_to_strict_contraction(&x, &cfg)?;
            let rho = spectral::jsr(&x);
            let target_norm = cert.target.row_norm();
            let mut v = certificate_json(&cert, &x, &cfg);
            v["jsr"] = json!(rho);
            v["target_row_norm"] = json!(target_norm);
            let mut code = 0;
            if *check {
                let recomputed = x.conjugate(&cert.s)?;
                let norm = recomputed.row_norm();
                let pass = norm < 1.0 && (norm - target_norm).abs() <= 1e-8 * (1.0 + target_norm);
                v["check"] = json!({"recomputed_row_norm": norm, "pass": pass});
                if !pass {
                    code = 1;
                }
            }
            Ok(Outcome { value: v, code })
        }
        Command::Coisometrize { tuple, normalize, check } => {
            spectral_tol(&mut cfg);
            let mut x = read_tuple(tuple)?;
            if *normalize {
                let rho = spectral::jsr(&x);
                if rho == 0.0 {
                    return Err(Error::NotUnitRadius { rho });
                }
                x = x.scale(C64::new(1.0 / rho, 0.0));
            }
            let cert = spectral::similarize_to_coisometry(&x, &cfg)?;
            let mut v = certificate_json(&cert, &x, &cfg);
            v["coisometry_defect"] = json!(cert.target.coisometry_defect());
            let mut code = 0;
            if *check {
                let recomputed = x.conjugate(&cert.s)?;
                let defect = recomputed.coisometry_defect();
                let pass = defect <= 1e-8;
                v["check"] = json!({"recomputed_defect": defect, "pass": pass});
                if !pass {
                    code = 1;
                }
            }
            Ok(Outcome { value: v, code })
        }
        Command::Jh { tuple } => {
            if let Some(t) = tol {
                cfg.rank_tol = t;
            }
            let x = read_tuple(tuple)?;
            let jh = structure::jordan_holder(&x, &cfg)?;
            Ok(Outcome::ok(json!({
                "block_sizes": jh.block_sizes,
                "residual": jh.residual,
                "s": matrix_json(&jh.s),
                "blocks": jh.blocks.iter().map(tuple_json).collect::<Vec<_>>(),
            })))
        }
        Command::Irred { tuple } => {
            if let Some(t) = tol {
                cfg.rank_tol = t;
            }
            let x = read_tuple(tuple)?;
            let dim = structure::generated_algebra(&x, cfg.rank_tol).len();
            Ok(Outcome::ok(json!({
                "irreducible": x.n() == 1 || dim == x.n() * x.n(),
                "algebra_dim": dim,
                "full_dim": x.n() * x.n(),
            })))
        }
        Command::Similar { first, second } => {
            if let Some(t) = tol {
                cfg.rank_tol = t;
            }
            let x = read_tuple(first)?;
            let y = read_tuple(second)?;
            let v = match structure::are_similar(&x, &y, &cfg)? {
                Similarity::Similar { s, residual } => json!({
                    "result": "similar",
                    "s": matrix_json(&s),
                    "residual": residual,
                    "cond": linalg::cond(&s),
                }),
                Similarity::NotSimilar => json!({"result": "not-similar"}),
                Similarity::NoWitness => json!({"result": "no-witness"}),
            };
            Ok(Outcome::ok(v))
        }
        Command::Member { variety, tuple, envelope } => {
            if let Some(t) = tol {
                cfg.relation_tol = t;
            }
            let (name, spec) = read_variety(variety)?;
            let x = read_tuple(tuple)?;
            let residual = spec.relation_residual(&x)?;
            let on_variety = residual <= cfg.relation_tol;
            let rho = spectral::jsr(&x);
            let mut v = json!({
                "variety": name,
                "on_variety": on_variety,
                "relation_residual": residual,
                "jsr": rho,
                "member": on_variety,
            });
            if *envelope {
                let inside = variety::in_envelope(&spec, &x, &cfg)?;
                v["in_envelope"] = json!(inside);
                v["member"] = json!(inside);
            }
            Ok(Outcome::ok(v))
        }
        Command::Norm { poly, d } => {
            let p = parse(poly, *d)?;
            let degree = p.degree().unwrap_or(0);
            let cutoff = cli.cutoff.unwrap_or(degree + 4);
            let norm = fock::multiplier_norm(&p, cutoff, &cfg)?;
            Ok(Outcome::ok(json!({
                "norm": norm,
                "cutoff": cutoff,
                "degree": p.degree(),
                "homogeneous": p.is_homogeneous(),
                "coeff_norm": p.coeff_norm(),
            })))
        }
        Command::Delta { first, second, degree, trials } => {
            spectral_tol(&mut cfg);
            let x = read_tuple(first)?;
            let y = read_tuple(second)?;
            let b = fock::delta_lower_bound(&x, &y, *degree, *trials, cfg.seed, &cfg)?;
            Ok(Outcome::ok(json!({
                "lower_bound": b.value,
                "witness": b.witness.to_string(),
                "witness_norm": b.witness_norm,
                "candidates": b.candidates,
                "degree": degree,
                "trials": trials,
                "seed": cfg.seed,
            })))
        }
        Command::VerifyPaper { filter, inject, list } => {
            if *list {
                return Ok(Outcome::ok(json!({"checks": verify::check_ids()})));
            }
            let report = verify::run(&cfg, filter.as_deref(), inject);
            let code = report.exit_code();
            Ok(Outcome { value: serde_json::to_value(&report)?, code })
        }
    }
}

fn certificate_json(cert: &spectral::SimilarityCertificate, x: &MatrixTuple, cfg: &Config) -> Value {
    json!({
        "kind": cert.kind,
        "s": matrix_json(&cert.s),
        "cond": linalg::cond(&cert.s),
        "cond_flagged": linalg::cond(&cert.s) > cfg.cond_cap,
        "residual": cert.residual,
        "target": tuple_json(&cert.target),
        "n": x.n(),
    })
}

fn read_tuple(path: &Path) -> Result<MatrixTuple> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    MatrixTuple::from_json_str(&text)
}

/// `qcomm:Q`, `wcomm:Q`, `x2` or a path to a variety JSON file.
fn read_variety(arg: &str) -> Result<(String, IdealSpec)> {
    if let Some(q) = arg.strip_prefix("qcomm:") {
        return Ok((arg.to_string(), variety::qcomm_spec(parse_scalar(q)?)));
    }
    if let Some(q) = arg.strip_prefix("wcomm:") {
        return Ok((arg.to_string(), variety::wcomm_spec(parse_scalar(q)?)));
    }
    if arg == "x2" || arg == "square-zero" {
        return Ok(("x2".to_string(), variety::square_zero_spec()));
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::InvalidInput(format!("variety {arg:?}: not a known name and not readable ({e})")))?;
    let j: VarietyJson = serde_json::from_str(&text)?;
    Ok((arg.to_string(), IdealSpec::from_json(&j)?))
}

/// A complex constant in polynomial syntax, e.g. `-1`, `0.5`, `(0+1i)` or `0+1i`.
fn parse_scalar(text: &str) -> Result<C64> {
    let p: FreePolynomial = parse(text, 1).or_else(|e| parse(&format!("({text})"), 1).map_err(|_| e))?;
    match p.degree() {
        None => Ok(C64::new(0.0, 0.0)),
        Some(0) => Ok(p.coeff(&crate::Word::empty())),
        Some(_) => Err(Error::InvalidInput(format!("{text:?} is not a constant"))),
    }
}

fn matrix_json(m: &CMat) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    json!(rows)
}

fn tuple_json(t: &MatrixTuple) -> Value {
    serde_json::to_value(t.to_json()).expect("tuple json")
}

fn is_matrix(v: &Value) -> bool {
    let Value::Array(rows) = v else { return false };
    !rows.is_empty()
        && rows.iter().all(|r| {
            matches!(r, Value::Array(entries) if entries.iter().all(|e| {
                matches!(e, Value::Array(p) if p.len() == 2 && p.iter().all(Value::is_number))
            }))
        })
}

fn format_complex(e: &Value) -> String {
    let re = e[0].as_f64().unwrap_or(f64::NAN);
    let im = e[1].as_f64().unwrap_or(f64::NAN);
    if im == 0.0 {
        format!("{re:>16.6}")
    } else {
        format!("{:>16}", format!("{re:.5}{im:+.5}i"))
    }
}

fn render_value(key: &str, v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, inner) in map {
                render_value(k, inner, indent + 2, out);
            }
        }
        _ if is_matrix(v) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for row in v.as_array().expect("matrix rows") {
                let cells: Vec<String> = row.as_array().expect("row").iter().map(format_complex).collect();
                out.push_str(&format!("{pad}  [{}]\n", cells.join(" ")));
            }
        }
        Value::Array(items) if !items.is_empty() && items.iter().all(is_matrix) => {
            for (j, m) in items.iter().enumerate() {
                render_value(&format!("{key}[{j}]"), m, indent, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                render_value(&format!("[{i}]"), item, indent + 2, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        _ => out.push_str(&format!("{pad}{key}: {v}\n")),
    }
}

/// Text rendering; verification reports get one line per check.
fn render_human(v: &Value) -> String {
    if let Some(checks) = v.get("checks").and_then(Value::as_array).filter(|c| c.iter().all(Value::is_object)) {
        let mut s = String::new();
        for c in checks {
            s.push_str(&format!(
                "[{}] {:<28} computed {:<24} expected {} ({}, tol {})\n      {}\n",
                if c["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" },
                c["id"].as_str().unwrap_or(""),
                c["computed"].to_string(),
                c["expected"],
                c["relation"].as_str().unwrap_or(""),
                c["tolerance"],
                c["description"].as_str().unwrap_or(""),
            ));
        }
        s.push_str(&format!("passed {} / {}", v["passed"], checks.len()));
        return s;
    }
    let mut s = String::new();
    if let Value::Object(map) = v {
        for (k, inner) in map {
            render_value(k, inner, 0, &mut s);
        }
    }
    s.trim_end().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("ncball").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn scalar_syntax() {
        assert_eq!(parse_scalar("-1").unwrap(), C64::new(-1.0, 0.0));
        assert_eq!(parse_scalar("0.5+2i").unwrap(), C64::new(0.5, 2.0));
        assert_eq!(parse_scalar("(0-1i)").unwrap(), C64::new(0.0, -1.0));
        assert!(parse_scalar("z1").is_err());
    }

    #[test]
    fn usage_error_is_json_in_machine_mode() {
        let (code, text) = run_capture(&["--json", "frobnicate"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["error"]["kind"], "usage");
    }

    #[test]
    fn missing_file_is_input_error() {
        let (code, text) = run_capture(&["--json", "jsr", "/nonexistent/tuple.json"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["error"]["exit_code"], 2);
    }

    #[test]
    fn norm_of_variable_is_one() {
        let (code, text) = run_capture(&["--json", "norm", "z1", "-d", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!((v["norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}
