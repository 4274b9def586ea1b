//! Command-line entry point: validation, both index routes and their
//! cross-check, Fock spectra, the Rockland test, the nilmanifold oracle,
//! and frame checks, with machine-readable JSON reports.
//!
//! Exit codes: 0 success, 2 unknown command / bad arguments, 3 file not
//! found, 4 validation failure, 5 internal numeric error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use contact_index::chern::chern_index;
use contact_index::contact::{parse_instance, validate_instance, ContactInstance};
use contact_index::fock::{is_rockland, model_rep_matrix, ModelOperatorSpec};
use contact_index::frame::{
    self, bracket_span_check, chart_grid, parse_field, rotate_presentation, ComplexField,
    LocalPresentation, RotationField, ScalarField, VectorFieldExpr,
};
use contact_index::nilmanifold::{analytic_index, AnalyticIndex, Truncation, DEFAULT_TOL};
use contact_index::winding::fredholm_index;
use contact_index::Complex64;

const EXIT_IO: u8 = 3;
const EXIT_VALIDATION: u8 = 4;
const EXIT_NUMERIC: u8 = 5;

#[derive(Parser)]
#[command(name = "contact-index", version, about = "Index computations for hypoelliptic operators on contact 3-manifolds")]
struct Cli {
    /// Write a JSON run report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Suppress standard output (reports are still written).
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file against the admission rules.
    Validate(InstanceArgs),
    /// Fredholm index via winding numbers.
    Index(InstanceArgs),
    /// Fredholm index via the Chern/Todd pairing.
    Chern(InstanceArgs),
    /// Run both index routes and report agreement.
    Crosscheck(InstanceArgs),
    /// Rockland test for a constant coefficient.
    Rockland(GammaArgs),
    /// Interior diagonal of the truncated model-operator matrix, as CSV.
    FockSpectrum(FockArgs),
    /// Analytic index on the Heisenberg nilmanifold.
    Oracle(OracleArgs),
    /// Frame calculus checks.
    Frames {
        #[command(subcommand)]
        action: FramesAction,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file (JSON).
    #[arg(long, value_name = "FILE")]
    instance: PathBuf,
}

#[derive(Args)]
struct GammaArgs {
    /// Coefficient value as RE,IM.
    #[arg(long, value_parser = parse_gamma)]
    gamma: Complex64,
}

#[derive(Args)]
struct FockArgs {
    /// Coefficient value as RE,IM.
    #[arg(long, value_parser = parse_gamma)]
    gamma: Complex64,
    /// Representation parameter (> 0).
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Basis size.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Use the opposite operator (Z negated).
    #[arg(long)]
    opposite: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Coefficient value as RE,IM (ignored in sweep mode).
    #[arg(long, value_parser = parse_gamma, required_unless_present = "sweep")]
    gamma: Option<Complex64>,
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    #[arg(long, default_value_t = 40)]
    q_max: usize,
    #[arg(long, default_value_t = 20)]
    lattice_max: usize,
    /// File with one RE,IM value per line; emits a CSV verdict table.
    #[arg(long, value_name = "FILE")]
    sweep: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FramesAction {
    /// Span check for a frame, plus rotation-invariance residuals of the
    /// Z-coefficient when --gamma and --theta are given.
    Check(FramesArgs),
}

#[derive(Args)]
struct FramesArgs {
    /// X component fields, comma-separated expressions "fx;fy;fz".
    #[arg(long, value_name = "EXPR")]
    x_field: String,
    #[arg(long, value_name = "EXPR")]
    y_field: String,
    /// Z-coefficient (real part expression).
    #[arg(long, value_name = "EXPR")]
    gamma: Option<String>,
    /// Rotation angle field.
    #[arg(long, value_name = "EXPR")]
    theta: Option<String>,
    /// Finite-difference step.
    #[arg(long, default_value_t = frame::DEFAULT_STEP)]
    h: f64,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_IO,
            message: msg.into(),
        }
    }
    fn validation(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: msg.into(),
        }
    }
    fn numeric(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NUMERIC,
            message: msg.into(),
        }
    }
}

struct Outcome {
    stdout: String,
    results: Value,
    warnings: Vec<String>,
}

fn parse_gamma(text: &str) -> Result<Complex64, String> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| "expected RE,IM".to_string())?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad RE: {}", e))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad IM: {}", e))?;
    if !re.is_finite() || !im.is_finite() {
        return Err("gamma must be finite".into());
    }
    Ok(Complex64::new(re, im))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command_name, input_files) = describe(&cli.command);
    let digest = match digest_files(&input_files) {
        Ok(d) => d,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };

    let outcome = run(&cli.command);
    let (exit_code, results, warnings, stdout) = match outcome {
        Ok(o) => (0u8, o.results, o.warnings, o.stdout),
        Err(f) => {
            eprintln!("error: {}", f.message);
            (f.code, json!({ "error": f.message }), vec![], String::new())
        }
    };

    if !stdout.is_empty() && !cli.quiet {
        print!("{}", stdout);
    }

    if let Some(path) = &cli.report {
        let report = json!({
            "command": command_name,
            "inputs_digest": digest,
            "results": results,
            "warnings": warnings,
            "exit_code": exit_code,
        });
        let text = serde_json::to_string_pretty(&report).expect("report serialization");
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write report {}: {}", path.display(), e);
            return ExitCode::from(EXIT_IO);
        }
    }
    ExitCode::from(exit_code)
}

fn describe(cmd: &Command) -> (&'static str, Vec<PathBuf>) {
    match cmd {
        Command::Validate(a) => ("validate", vec![a.instance.clone()]),
        Command::Index(a) => ("index", vec![a.instance.clone()]),
        Command::Chern(a) => ("chern", vec![a.instance.clone()]),
        Command::Crosscheck(a) => ("crosscheck", vec![a.instance.clone()]),
        Command::Rockland(_) => ("rockland", vec![]),
        Command::FockSpectrum(_) => ("fock-spectrum", vec![]),
        Command::Oracle(a) => (
            "oracle",
            a.sweep.iter().cloned().collect(),
        ),
        Command::Frames { .. } => ("frames", vec![]),
    }
}

fn digest_files(paths: &[PathBuf]) -> Result<String, Failure> {
    let mut hasher = Sha256::new();
    for p in paths {
        let bytes = std::fs::read(p)
            .map_err(|e| Failure::io(format!("cannot read {}: {}", p.display(), e)))?;
        hasher.update(&bytes);
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for b in digest {
        write!(hex, "{:02x}", b).unwrap();
    }
    Ok(hex)
}

fn load_instance(path: &PathBuf) -> Result<ContactInstance<f64>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {}", path.display(), e)))?;
    parse_instance(&text).map_err(|e| Failure::validation(format!("parse error: {}", e)))
}

fn load_validated(path: &PathBuf) -> Result<ContactInstance<f64>, Failure> {
    let inst = load_instance(path)?;
    let report = validate_instance(&inst);
    if !report.ok {
        let mut msg = String::from("instance fails validation:");
        for v in &report.violations {
            write!(msg, " [{} / {}]", v.rule, v.message).unwrap();
        }
        return Err(Failure::validation(msg));
    }
    Ok(inst)
}

fn windings_json(entries: &BTreeMap<i64, i64>) -> Value {
    let map: serde_json::Map<String, Value> = entries
        .iter()
        .map(|(k, w)| (k.to_string(), json!(w)))
        .collect();
    Value::Object(map)
}

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate(a) => {
            let inst = load_instance(&a.instance)?;
            let report = validate_instance(&inst);
            let mut stdout = format!("ok={}\n", report.ok);
            for v in &report.violations {
                writeln!(
                    stdout,
                    "violation loop={} sample={} rule={}: {}",
                    v.loop_name,
                    v.sample_index.map_or("-".into(), |i| i.to_string()),
                    v.rule,
                    v.message
                )
                .unwrap();
            }
            let results = json!({
                "ok": report.ok,
                "max_abs_gamma": report.max_abs_gamma,
                "relevant_odds": report.relevant_odds,
                "violations": report.violations.iter().map(|v| json!({
                    "loop": v.loop_name,
                    "sample": v.sample_index,
                    "rule": v.rule,
                    "message": v.message,
                })).collect::<Vec<_>>(),
            });
            if report.ok {
                Ok(Outcome {
                    stdout,
                    results,
                    warnings: vec![],
                })
            } else {
                Err(Failure::validation(format!(
                    "{} violation(s)",
                    report.violations.len()
                )))
            }
        }
        Command::Index(a) => {
            let inst = load_validated(&a.instance)?;
            let table =
                fredholm_index(&inst).map_err(|e| Failure::numeric(e.to_string()))?;
            Ok(Outcome {
                stdout: format!("index={}\n", table.index),
                results: json!({
                    "index": table.index,
                    "windings": windings_json(&table.entries),
                }),
                warnings: vec![],
            })
        }
        Command::Chern(a) => {
            let inst = load_validated(&a.instance)?;
            let report = chern_index(&inst).map_err(|e| Failure::numeric(e.to_string()))?;
            Ok(Outcome {
                stdout: format!(
                    "index={} agreement={}\n",
                    report.total_rounded, report.agreement
                ),
                results: json!({
                    "index": report.total_rounded,
                    "total_real": report.total_real,
                    "agreement": report.agreement,
                    "per_q": report.per_q_contributions.iter().map(|c| json!({
                        "q": c.q, "value": c.value,
                    })).collect::<Vec<_>>(),
                }),
                warnings: vec![],
            })
        }
        Command::Crosscheck(a) => {
            let inst = load_validated(&a.instance)?;
            let table =
                fredholm_index(&inst).map_err(|e| Failure::numeric(e.to_string()))?;
            let report = chern_index(&inst).map_err(|e| Failure::numeric(e.to_string()))?;
            let agreement = table.index == report.total_rounded;
            let stdout = format!(
                "winding_index={} chern_index={} agreement={}\n",
                table.index, report.total_rounded, agreement
            );
            let results = json!({
                "winding_index": table.index,
                "chern_index": report.total_rounded,
                "agreement": agreement,
                "windings": windings_json(&table.entries),
            });
            if agreement {
                Ok(Outcome {
                    stdout,
                    results,
                    warnings: vec![],
                })
            } else {
                Err(Failure::numeric("index routes disagree"))
            }
        }
        Command::Rockland(a) => {
            let verdict = is_rockland(a.gamma);
            Ok(Outcome {
                stdout: format!("rockland={}\n", verdict),
                results: json!({
                    "gamma": [a.gamma.re, a.gamma.im],
                    "rockland": verdict,
                }),
                warnings: vec![],
            })
        }
        Command::FockSpectrum(a) => {
            let spec = ModelOperatorSpec {
                gamma: a.gamma,
                opposite: a.opposite,
            };
            let trunc = model_rep_matrix(&spec, a.t, a.n)
                .map_err(|e| Failure::numeric(e.to_string()))?;
            let mut stdout = String::from("q,re,im\n");
            let diag = trunc.interior_diagonal();
            for (q, ev) in diag.iter().enumerate() {
                writeln!(stdout, "{},{},{}", q, ev.re, ev.im).unwrap();
            }
            Ok(Outcome {
                stdout,
                results: json!({
                    "gamma": [a.gamma.re, a.gamma.im],
                    "t": a.t,
                    "n": a.n,
                    "opposite": a.opposite,
                    "interior_diagonal": diag.iter()
                        .map(|ev| json!([ev.re, ev.im])).collect::<Vec<_>>(),
                }),
                warnings: vec![],
            })
        }
        Command::Oracle(a) => {
            let truncation = Truncation {
                n_max: a.n_max,
                q_max: a.q_max,
                lattice_max: a.lattice_max,
            };
            if let Some(sweep) = &a.sweep {
                let text = std::fs::read_to_string(sweep)
                    .map_err(|e| Failure::io(format!("cannot read {}: {}", sweep.display(), e)))?;
                let mut stdout = String::from("gamma_re,gamma_im,verdict,dim_ker,dim_coker\n");
                let mut rows = Vec::new();
                for line in text.lines() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let gamma = parse_gamma(line)
                        .map_err(|e| Failure::validation(format!("bad sweep line: {}", e)))?;
                    let dec = contact_index::nilmanifold::decompose(gamma, truncation);
                    let (dk, dc) =
                        contact_index::nilmanifold::kernel_dimensions(&dec, DEFAULT_TOL);
                    let verdict = if is_rockland(gamma) { "fredholm" } else { "not-fredholm" };
                    writeln!(stdout, "{},{},{},{},{}", gamma.re, gamma.im, verdict, dk, dc)
                        .unwrap();
                    rows.push(json!({
                        "gamma": [gamma.re, gamma.im],
                        "verdict": verdict,
                        "dim_ker": dk,
                        "dim_coker": dc,
                    }));
                }
                return Ok(Outcome {
                    stdout,
                    results: json!({ "truncation": truncation_json(&truncation), "rows": rows }),
                    warnings: vec![],
                });
            }
            let gamma = a.gamma.expect("clap enforces gamma without sweep");
            match analytic_index(gamma, truncation, DEFAULT_TOL) {
                AnalyticIndex::Index(idx) => Ok(Outcome {
                    stdout: format!("index={}\n", idx),
                    results: json!({
                        "gamma": [gamma.re, gamma.im],
                        "truncation": truncation_json(&truncation),
                        "verdict": "fredholm",
                        "index": idx,
                    }),
                    warnings: vec![],
                }),
                AnalyticIndex::NotFredholm { zero_modes } => {
                    let mut stdout = String::from("not-fredholm\nn,zero_modes\n");
                    for &(n, count) in &zero_modes {
                        writeln!(stdout, "{},{}", n, count).unwrap();
                    }
                    Ok(Outcome {
                        stdout,
                        results: json!({
                            "gamma": [gamma.re, gamma.im],
                            "truncation": truncation_json(&truncation),
                            "verdict": "not-fredholm",
                            "zero_modes": zero_modes.iter()
                                .map(|&(n, c)| json!({"n": n, "count": c}))
                                .collect::<Vec<_>>(),
                        }),
                        warnings: vec![],
                    })
                }
            }
        }
        Command::Frames { action } => {
            let FramesAction::Check(a) = action;
            let x = parse_vector_field(&a.x_field)?;
            let y = parse_vector_field(&a.y_field)?;
            let grid = chart_grid(3);
            let spans = bracket_span_check(&x, &y, &grid, 1e-6, a.h)
                .map_err(|e| Failure::numeric(e.to_string()))?;
            let mut stdout = format!("span={}\n", spans);
            let mut results = json!({ "span": spans, "h": a.h });
            if let (Some(gamma_text), Some(theta_text)) = (&a.gamma, &a.theta) {
                let gamma_field = parse_field(gamma_text)
                    .map_err(|e| Failure::validation(format!("--gamma: {}", e)))?;
                let theta = parse_field(theta_text)
                    .map_err(|e| Failure::validation(format!("--theta: {}", e)))?;
                let pres = LocalPresentation {
                    x,
                    y,
                    alpha: ComplexField::constant(0.0, 0.0),
                    beta: ComplexField::constant(0.0, 0.0),
                    gamma: ComplexField {
                        re: gamma_field.clone(),
                        im: ScalarField::Const(0.0),
                    },
                    delta: ComplexField::constant(0.0, 0.0),
                };
                let rot = RotationField { theta };
                let mut max_residual = 0.0f64;
                for &p in &grid {
                    let out = rotate_presentation(&pres, &rot, p, a.h)
                        .map_err(|e| Failure::numeric(e.to_string()))?;
                    let expected = Complex64::new(
                        frame::eval(&gamma_field, p)
                            .map_err(|e| Failure::numeric(e.to_string()))?,
                        0.0,
                    );
                    max_residual = max_residual.max((out.gamma - expected).norm());
                }
                writeln!(stdout, "gamma_invariance_residual={:e}", max_residual).unwrap();
                results["gamma_invariance_residual"] = json!(max_residual);
            }
            Ok(Outcome {
                stdout,
                results,
                warnings: vec![],
            })
        }
    }
}

fn truncation_json(t: &Truncation) -> Value {
    json!({ "n_max": t.n_max, "q_max": t.q_max, "lattice_max": t.lattice_max })
}

fn parse_vector_field(text: &str) -> Result<VectorFieldExpr, Failure> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 3 {
        return Err(Failure::validation(format!(
            "expected three ';'-separated component expressions, got {}",
            parts.len()
        )));
    }
    let mut components = Vec::with_capacity(3);
    for part in parts {
        components.push(
            parse_field(part).map_err(|e| Failure::validation(format!("field: {}", e)))?,
        );
    }
    Ok(VectorFieldExpr {
        components: [
            components.remove(0),
            components.remove(0),
            components.remove(0),
        ],
    })
}
