//! Command line surface for the exact ASEP lattice-path engine.
//!
//! Subcommands: `enumerate` path families, compute the normalisation `zl`
//! along any route, `map` individual paths through the bijections, solve a
//! chain's `stationary` state against the matrix product ansatz, and run the
//! `verify` suites.  All output is exact and deterministic.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use asep_core::algebra::{self, ChainSpec};
use asep_core::models::{self, ModelId};
use asep_core::pathcore::{format_word, parse_word, LabeledPath};
use asep_core::symbolic::{Polynomial, Rational, Var};
use asep_core::transforms as tf;
use asep_core::verify;

#[derive(Parser)]
#[command(name = "asep", version, about = "exact ASEP lattice-path computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustively list the length-2L elements of a path model.
    Enumerate(EnumerateArgs),
    /// Compute the normalisation polynomial Z_L along one route.
    Zl(ZlArgs),
    /// Map one path through a bijection between two models.
    Map(MapArgs),
    /// Solve a chain exactly and compare with the matrix product ansatz.
    Stationary(StationaryArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Model id: r1, r1_1, r2_2, r2_3, r2_4, r2_5, r3, r3_prime, r3_2, r4.
    #[arg(long)]
    model: String,
    /// System size L (paths have 2L steps).
    #[arg(long)]
    length: usize,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "text"])]
    format: String,
}

#[derive(Args)]
struct ZlArgs {
    /// Route: 1 and 3 use transfer matrices, 2 the finite fixed-point family,
    /// 4 the one-transit enumeration, enum1/enum3 the other enumerations.
    #[arg(long)]
    rep: String,
    /// System size.
    #[arg(long = "L")]
    l: usize,
    /// Print the route's native weight basis instead of the canonical one.
    #[arg(long)]
    raw: bool,
    /// Evaluate at a rational point, e.g. abar=2,bbar=3/2.
    #[arg(long)]
    eval: Option<String>,
}

#[derive(Args)]
struct MapArgs {
    /// Source model id.
    #[arg(long)]
    from: String,
    /// Target model id.
    #[arg(long)]
    to: String,
    /// Path word, e.g. "1: u u d d".
    #[arg(long)]
    path: String,
    /// Marked vertex (for r1_1 and r4 sources).
    #[arg(long)]
    mark: Option<usize>,
    /// Divider vertex (for r2_3 and r2_4 sources).
    #[arg(long)]
    divider: Option<usize>,
    /// Comma-separated c-marked vertices (r2_4 sources).
    #[arg(long)]
    c_marks: Option<String>,
    /// Comma-separated d-marked vertices (r2_4 sources).
    #[arg(long)]
    d_marks: Option<String>,
}

#[derive(Args)]
struct StationaryArgs {
    /// Number of sites.
    #[arg(long = "L")]
    l: usize,
    /// Entry probability, e.g. 1/2.
    #[arg(long)]
    alpha: String,
    /// Exit probability.
    #[arg(long)]
    beta: String,
    /// Also compare against the matrix product ansatz.
    #[arg(long)]
    check_mpa: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: involutions, bijections, transfer, dehp, stationary, all.
    #[arg(long)]
    suite: String,
    /// Cap on the system sizes the checks run at.
    #[arg(long = "L")]
    l: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Zl(a) => cmd_zl(a),
        Command::Map(a) => cmd_map(a),
        Command::Stationary(a) => cmd_stationary(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn max_l_cap() -> usize {
    std::env::var("ASEP_MAX_L")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(8)
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<ExitCode, String> {
    let cap = max_l_cap();
    if a.length > cap {
        return Err(format!(
            "length {} above the enumeration cap {cap} (override with ASEP_MAX_L)",
            a.length
        ));
    }
    let model = ModelId::from_str(&a.model)?;
    let elements = models::enumerate(model, a.length).map_err(|e| e.to_string())?;
    let mut total = Polynomial::zero();
    for w in &elements {
        let weight = models::weight(model, w).map_err(|e| e.to_string())?;
        total = total.add(&weight);
        if a.format == "json" {
            println!("{}", w.to_json());
        } else {
            println!("{}  weight {}", format_word(&w.path), weight);
        }
    }
    let summary = json!({
        "model": model.name(),
        "length": a.length,
        "count": elements.len(),
        "total_weight": total.to_string(),
    });
    if a.format == "json" {
        println!("{summary}");
    } else {
        println!("count {}  total {}", elements.len(), total);
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_assignment(text: &str) -> Result<BTreeMap<Var, Rational>, String> {
    let mut out = BTreeMap::new();
    for part in text.split(',') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bad assignment {part:?}; expected var=value"))?;
        let var = Var::ALL
            .into_iter()
            .find(|v| v.name() == name.trim())
            .ok_or_else(|| format!("unknown variable {name:?}"))?;
        let val: Rational = value.trim().parse().map_err(|e| format!("{e}"))?;
        out.insert(var, val);
    }
    Ok(out)
}

fn cmd_zl(a: ZlArgs) -> Result<ExitCode, String> {
    let poly = match (a.rep.as_str(), a.raw) {
        ("1", false) | ("2", false) | ("3", false) => {
            let rep: u8 = a.rep.parse().unwrap();
            algebra::z_transfer(rep, a.l).map_err(|e| e.to_string())?
        }
        ("1", true) | ("2", true) | ("3", true) => {
            let rep: u8 = a.rep.parse().unwrap();
            algebra::z_transfer_raw(rep, a.l).map_err(|e| e.to_string())?
        }
        ("4", _) => models::total_weight(ModelId::R4, a.l).map_err(|e| e.to_string())?,
        ("enum1", _) => models::total_weight(ModelId::R1, a.l).map_err(|e| e.to_string())?,
        ("enum3", raw) => {
            let native = models::total_weight(ModelId::R3, a.l).map_err(|e| e.to_string())?;
            if raw {
                native
            } else {
                native.canonicalize().map_err(|e| e.to_string())?
            }
        }
        (other, _) => {
            return Err(format!(
                "unknown route {other:?}; choose 1, 2, 3, 4, enum1 or enum3"
            ))
        }
    };
    match a.eval {
        None => println!("{poly}"),
        Some(text) => {
            let assignment = parse_assignment(&text)?;
            let value = poly.eval(&assignment).map_err(|e| e.to_string())?;
            println!("{value}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_vertex_list(text: &Option<String>) -> Result<Vec<usize>, String> {
    match text {
        None => Ok(Vec::new()),
        Some(t) if t.trim().is_empty() => Ok(Vec::new()),
        Some(t) => t
            .split(',')
            .map(|v| v.trim().parse().map_err(|_| format!("bad vertex index {v:?}")))
            .collect(),
    }
}

fn build_source(a: &MapArgs, model: ModelId) -> Result<LabeledPath, String> {
    let path = parse_word(&a.path).map_err(|e| e.to_string())?;
    let need = |flag: &str| format!("model {model} requires --{flag}");
    match model {
        ModelId::R1 => models::r1_element(path).map_err(|e| e.to_string()),
        ModelId::R1_1 => {
            let mark = a.mark.ok_or_else(|| need("mark"))?;
            tf::unit_base_element(path, mark).map_err(|e| e.to_string())
        }
        ModelId::R4 => {
            let mark = a.mark.ok_or_else(|| need("mark"))?;
            models::r4_element(path, mark).map_err(|e| e.to_string())
        }
        ModelId::R2_2 => models::r2_2_element(path).map_err(|e| e.to_string()),
        ModelId::R2_3 => {
            let divider = a.divider.ok_or_else(|| need("divider"))?;
            models::r2_3_element(path, divider).map_err(|e| e.to_string())
        }
        ModelId::R2_4 => {
            let divider = a.divider.ok_or_else(|| need("divider"))?;
            let c_marks = parse_vertex_list(&a.c_marks)?;
            let d_marks = parse_vertex_list(&a.d_marks)?;
            models::r2_4_element(path, divider, &c_marks, &d_marks).map_err(|e| e.to_string())
        }
        other => Err(format!("no mappable source form for model {other}")),
    }
}

fn cmd_map(a: MapArgs) -> Result<ExitCode, String> {
    let from = ModelId::from_str(&a.from)?;
    let to = ModelId::from_str(&a.to)?;
    let source = build_source(&a, from)?;
    let err = |e: tf::TransformError| e.to_string();
    let image = match (from, to) {
        (ModelId::R1, ModelId::R1_1) => tf::gamma(&source).map_err(err)?,
        (ModelId::R1_1, ModelId::R1) => tf::gamma_inverse(&source).map_err(err)?,
        (ModelId::R1_1, ModelId::R4) => tf::gamma_prime(&source).map_err(err)?,
        (ModelId::R4, ModelId::R1_1) => tf::gamma_prime_inverse(&source).map_err(err)?,
        (ModelId::R1, ModelId::R4) => tf::r1_to_r4(&source).map_err(err)?,
        (ModelId::R4, ModelId::R1) => tf::r4_to_r1(&source).map_err(err)?,
        (ModelId::R2_2, ModelId::R2_3) => tf::gamma_23(&source).map_err(err)?,
        (ModelId::R2_3, ModelId::R2_2) => tf::gamma_23_inverse(&source).map_err(err)?,
        (ModelId::R2_3, ModelId::R2_4) => tf::gamma_34(&source).map_err(err)?,
        (ModelId::R2_4, ModelId::R2_3) => tf::gamma_34_inverse(&source).map_err(err)?,
        (ModelId::R2_2, ModelId::R2_4) => {
            tf::gamma_34(&tf::gamma_23(&source).map_err(err)?).map_err(err)?
        }
        (ModelId::R2_4, ModelId::R2_2) => {
            tf::gamma_23_inverse(&tf::gamma_34_inverse(&source).map_err(err)?).map_err(err)?
        }
        (f, t) => return Err(format!("no bijection from {f} to {t}")),
    };
    println!("{}", image.to_json());
    Ok(ExitCode::SUCCESS)
}

fn cmd_stationary(a: StationaryArgs) -> Result<ExitCode, String> {
    let alpha: Rational = a.alpha.parse().map_err(|e| format!("{e}"))?;
    let beta: Rational = a.beta.parse().map_err(|e| format!("{e}"))?;
    let spec = ChainSpec::new(a.l, alpha, beta).map_err(|e| e.to_string())?;
    let exact = algebra::stationary_exact(&spec).map_err(|e| e.to_string())?;
    for s in 0..spec.states() {
        let p = &exact.probs[s];
        println!(
            "{}",
            json!({
                "tau": exact.tau_string(s),
                "probability_num": p.numerator().to_string(),
                "probability_den": p.denominator().to_string(),
            })
        );
    }
    if a.check_mpa {
        let (mpa, total) = algebra::mpa_state_vector(&spec).map_err(|e| e.to_string())?;
        let ok = mpa == exact;
        println!(
            "{}",
            json!({
                "check_mpa": if ok { "pass" } else { "fail" },
                "total_weight": total.to_string(),
            })
        );
        if !ok {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode, String> {
    let checks = verify::run_suite(&a.suite, a.l)?;
    let mut failures = 0usize;
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!("{status} {} — {}", c.name, c.detail);
        if !c.pass {
            failures += 1;
        }
    }
    println!(
        "{} checks, {} failed",
        checks.len(),
        failures
    );
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
