//! `linarr` — analysis front end for line arrangements and their metric
//! certificates.
//!
//! Exit codes are a contract: 0 success / feasible / confirmed, 1 a clean
//! run that produced no certificate, 2 validation or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use linarr::arrangement::{hirzebruch_check, incidence, Arrangement, ArrangementJson};
use linarr::catalog;
use linarr::cyclo::{format_rational, parse_rational, Rational};
use linarr::extend;
use linarr::hopf;
use linarr::metric;

#[derive(Parser)]
#[command(name = "linarr", version, about = "Line arrangements, polyhedral-metric certificates, and CAT(1) predicates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Incidence summary, multiplicity multiset, Hirzebruch verdict
    Analyze(InputArgs),
    /// b-matrix, weight-system feasibility, asphericity certificate
    Metric(InputArgs),
    /// CAT(1) verdict for Hopf-circle configurations
    Hopf(InputArgs),
    /// Verify the doubled-triangle counterexample for given n and epsilon
    Counterexample {
        #[arg(long)]
        n: u32,
        /// Rational ("1/100") or decimal ("0.01")
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Named arrangements
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Enumerate entries with their combinatorial signatures
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print an arrangement in the JSON interchange format
    Export { name: String },
}

#[derive(Args)]
struct InputArgs {
    /// Catalog entry name (see `catalog list`; also `generic<k>` with --seed)
    #[arg(long)]
    catalog: Option<String>,
    /// Single arrangement JSON file
    #[arg(long)]
    file: Option<PathBuf>,
    /// Directory of arrangement JSON files, processed in name order
    #[arg(long)]
    dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tolerance for floating-point predicates
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads for batch mode (default: rayon's choice)
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for `generic<k>` catalog inputs
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// 12 significant digits, the report contract for floating values.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Analyze(args) => run_arrangement_cmd(&args, analyze_report),
        Cmd::Metric(args) => run_arrangement_cmd(&args, metric_report),
        Cmd::Hopf(args) => run_hopf(&args),
        Cmd::Counterexample { n, eps, format } => run_counterexample(n, &eps, format),
        Cmd::Catalog { cmd } => run_catalog(cmd),
    };
    ExitCode::from(code)
}

// ---- input handling ------------------------------------------------------

struct Input {
    label: String,
    warning: Option<String>,
    arrangement: Result<Arrangement, String>,
}

fn validate_args(args: &InputArgs) -> Result<(), String> {
    let sources = [args.catalog.is_some(), args.file.is_some(), args.dir.is_some()]
        .iter()
        .filter(|&&x| x)
        .count();
    if sources != 1 {
        return Err("exactly one of --catalog, --file, --dir is required".into());
    }
    if let Some(t) = args.tol {
        if !(t > 0.0) {
            return Err(format!("tolerance must be positive, got {t}"));
        }
    }
    Ok(())
}

fn catalog_input(name: &str, seed: Option<u64>) -> Input {
    // generic<k> draws pseudo-random double-point-only arrangements
    let arrangement = if let Some(k) = name
        .strip_prefix("generic")
        .and_then(|s| s.parse::<u32>().ok())
    {
        catalog::generic_random(k, seed.unwrap_or(0)).map_err(|e| e.to_string())
    } else {
        catalog::by_name(name).map_err(|e| e.to_string())
    };
    let warning = name
        .strip_prefix("ceva")
        .and_then(|s| s.parse::<u32>().ok())
        .and_then(catalog::ceva_warning);
    Input {
        label: name.to_string(),
        warning,
        arrangement,
    }
}

fn file_input(path: &Path) -> Input {
    Input {
        label: path.display().to_string(),
        warning: None,
        arrangement: load_arrangement(path),
    }
}

fn load_arrangement(path: &Path) -> Result<Arrangement, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let json: ArrangementJson =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Arrangement::from_json(&json).map_err(|e| format!("{}: {e}", path.display()))
}

fn dir_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|r| r.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn gather_inputs(args: &InputArgs) -> Result<Vec<Input>, String> {
    validate_args(args)?;
    if let Some(name) = &args.catalog {
        return Ok(vec![catalog_input(name, args.seed)]);
    }
    if let Some(path) = &args.file {
        return Ok(vec![file_input(path)]);
    }
    let dir = args.dir.as_ref().unwrap();
    Ok(dir_files(dir)?.iter().map(|p| file_input(p)).collect())
}

// ---- report plumbing -----------------------------------------------------

/// (json report, text report, exit code) per input.
type Report = (Value, String, u8);

fn run_arrangement_cmd(args: &InputArgs, f: fn(&Arrangement) -> Report) -> u8 {
    let inputs = match gather_inputs(args) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let run_one = |input: &Input| -> (String, Option<String>, Result<Report, String>) {
        let rep = input.arrangement.as_ref().map(|arr| f(arr)).map_err(Clone::clone);
        (input.label.clone(), input.warning.clone(), rep)
    };
    let results: Vec<_> = if inputs.len() > 1 && args.jobs != Some(1) {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs.unwrap_or(0))
            .build();
        match pool {
            Ok(pool) => pool.install(|| {
                use rayon::prelude::*;
                inputs.par_iter().map(run_one).collect()
            }),
            Err(_) => inputs.iter().map(run_one).collect(),
        }
    } else {
        inputs.iter().map(run_one).collect()
    };
    emit(&results, args.format, inputs.len() > 1 || args.dir.is_some())
}

fn emit(
    results: &[(String, Option<String>, Result<Report, String>)],
    format: Format,
    batch: bool,
) -> u8 {
    let mut code = 0u8;
    let mut items = Vec::new();
    for (label, warning, res) in results {
        match res {
            Ok((value, text, c)) => {
                code = code.max(*c);
                match format {
                    Format::Json => {
                        let mut v = value.clone();
                        if let Value::Object(m) = &mut v {
                            m.insert("input".into(), json!(label));
                            if let Some(w) = warning {
                                m.insert("warning".into(), json!(w));
                            }
                        }
                        items.push(v);
                    }
                    Format::Text => {
                        if batch {
                            println!("== {label} ==");
                        }
                        if let Some(w) = warning {
                            println!("warning: {w}");
                        }
                        println!("{text}");
                    }
                }
            }
            Err(e) => {
                code = 2;
                match format {
                    Format::Json => items.push(json!({"input": label, "error": e})),
                    Format::Text => {
                        if batch {
                            println!("== {label} ==");
                        }
                        eprintln!("error: {e}");
                    }
                }
            }
        }
    }
    if format == Format::Json {
        let out = if batch {
            Value::Array(items)
        } else {
            items.into_iter().next().unwrap_or(Value::Null)
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    }
    code
}

// ---- analyze -------------------------------------------------------------

fn analyze_report(arr: &Arrangement) -> Report {
    let inc = incidence(arr);
    let h = hirzebruch_check(arr, &inc);
    let mults = inc.multiplicity_multiset();
    let value = json!({
        "command": "analyze",
        "name": arr.name(),
        "cyclotomic_order": arr.field_order(),
        "line_count": arr.line_count(),
        "point_count": inc.points.len(),
        "multiplicities": mults,
        "per_line_point_counts": h.per_line_point_counts,
        "hirzebruch": {"holds": h.holds, "n": h.n},
    });
    let mut text = String::new();
    if let Some(name) = arr.name() {
        text.push_str(&format!("arrangement: {name}\n"));
    }
    text.push_str(&format!(
        "{} lines over Q(zeta_{}), {} intersection points\n",
        arr.line_count(),
        arr.field_order(),
        inc.points.len()
    ));
    let m: Vec<String> = mults
        .iter()
        .map(|(m, c)| format!("{c} point(s) of multiplicity {m}"))
        .collect();
    text.push_str(&format!("multiplicities: {}\n", m.join(", ")));
    match h.n {
        Some(n) => text.push_str(&format!(
            "Hirzebruch property holds with n = {n} (each line meets the others at {} points)\n",
            n + 1
        )),
        None => text.push_str("Hirzebruch property does not hold\n"),
    }
    (value, text, 0)
}

// ---- metric --------------------------------------------------------------

fn metric_report(arr: &Arrangement) -> Report {
    let inc = incidence(arr);
    let b = metric::build_b_matrix(&inc);
    let b_rows: Vec<Vec<String>> = b
        .rows()
        .iter()
        .map(|row| row.iter().map(format_rational).collect())
        .collect();
    let solve = metric::solve_weights(arr);
    let verified = metric::verify_certificate(arr, &solve);
    let verdict = metric::aspherical_verdict(arr);
    let (result, certificate, residual) = match &solve {
        metric::SolveResult::Feasible(cert) => {
            let res = metric::quadratic_residual(&inc, &cert.z)
                .map(|r| format_rational(&r))
                .unwrap_or_default();
            (
                "feasible",
                serde_json::to_value(cert.to_json()).unwrap(),
                Some(res),
            )
        }
        metric::SolveResult::Infeasible(cert) => (
            "infeasible",
            serde_json::to_value(cert.to_json()).unwrap(),
            None,
        ),
    };
    let (verdict_str, code) = match &verdict {
        Ok(metric::Verdict::Aspherical(metric::AsphericalReason::Lp(_))) => ("aspherical_lp", 0u8),
        Ok(metric::Verdict::Aspherical(metric::AsphericalReason::TriangleSpecialCase)) => {
            ("aspherical_triangle_special_case", 0)
        }
        Ok(metric::Verdict::NoCertificate(_)) => ("no_certificate", 1),
        Err(_) => ("error", 2),
    };
    let value = json!({
        "command": "metric",
        "name": arr.name(),
        "line_count": arr.line_count(),
        "b_matrix": b_rows,
        "result": result,
        "certificate": certificate,
        "certificate_verified": verified,
        "quadratic_residual": residual,
        "asphericity": verdict_str,
    });
    let mut text = String::new();
    if let Some(name) = arr.name() {
        text.push_str(&format!("arrangement: {name}\n"));
    }
    match &solve {
        metric::SolveResult::Feasible(cert) => {
            let z: Vec<String> = cert.z.z.iter().map(format_rational).collect();
            text.push_str(&format!("weights feasible, slack {}\n", format_rational(&cert.slack)));
            text.push_str(&format!("z = [{}]\n", z.join(", ")));
            let angles: Vec<String> = cert
                .cone_angles
                .iter()
                .map(|a| format!("{} pi", format_rational(a)))
                .collect();
            text.push_str(&format!("cone angles: [{}]\n", angles.join(", ")));
            for e in &cert.alphas.entries {
                text.push_str(&format!(
                    "point {} (multiplicity {}): alpha = {}, fiber length {} pi\n",
                    e.point_index,
                    e.multiplicity,
                    format_rational(&e.alpha),
                    format_rational(&e.fiber_length)
                ));
            }
            if let Some(r) = &residual {
                text.push_str(&format!("quadratic residual: {r}\n"));
            }
        }
        metric::SolveResult::Infeasible(cert) => {
            match &cert.slack_bound {
                Some(bound) => text.push_str(&format!(
                    "weights infeasible: dual multipliers prove optimal slack <= {}\n",
                    format_rational(bound)
                )),
                None => text.push_str(
                    "weights infeasible: Farkas certificate for the closed relaxation\n",
                ),
            }
            for (id, m) in &cert.multipliers {
                text.push_str(&format!("  {id}: {}\n", format_rational(m)));
            }
        }
    }
    text.push_str(&format!(
        "certificate independently re-checked: {verified}\n"
    ));
    text.push_str(&format!("asphericity: {verdict_str}\n"));
    (value, text, code)
}

// ---- hopf ----------------------------------------------------------------

fn run_hopf(args: &InputArgs) -> u8 {
    if let Err(e) = validate_args(args) {
        eprintln!("error: {e}");
        return 2;
    }
    let tol = args.tol.unwrap_or(hopf::DEFAULT_TOL);
    if let Some(name) = &args.catalog {
        let input = catalog_input(name, args.seed);
        let rep = match &input.arrangement {
            Ok(arr) => hopf_arrangement_report(arr),
            Err(e) => Err(e.clone()),
        };
        let results = vec![(input.label.clone(), input.warning.clone(), rep)];
        return emit(&results, args.format, false);
    }
    let files = if let Some(path) = &args.file {
        vec![path.clone()]
    } else {
        match dir_files(args.dir.as_ref().unwrap()) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    };
    let batch = args.dir.is_some();
    let results: Vec<_> = files
        .iter()
        .map(|p| {
            (
                p.display().to_string(),
                None,
                hopf_file_report(p, tol),
            )
        })
        .collect();
    emit(&results, args.format, batch)
}

fn hull_str(h: hopf::HullStatus) -> &'static str {
    match h {
        hopf::HullStatus::Inside => "inside",
        hopf::HullStatus::Boundary => "boundary",
        hopf::HullStatus::Outside => "outside",
    }
}

fn status_str(s: hopf::CatStatus) -> &'static str {
    match s {
        hopf::CatStatus::Cat1 => "cat1",
        hopf::CatStatus::Cat1Boundary => "cat1_boundary",
        hopf::CatStatus::NotCat1 => "not_cat1",
    }
}

fn verdict_value(v: &hopf::CatVerdict) -> Value {
    json!({
        "status": status_str(v.status),
        "covering_radius": sig12(v.covering_radius),
        "hull": hull_str(v.hull),
        "witness": v.witness.map(|w| w.map(sig12)),
    })
}

fn verdict_text(v: &hopf::CatVerdict) -> String {
    let mut s = format!(
        "verdict: {}\ncovering radius (quotient metric): {}\nhull status: {}\n",
        status_str(v.status),
        sig12(v.covering_radius),
        hull_str(v.hull)
    );
    if let Some(w) = v.witness {
        s.push_str(&format!(
            "witness: [{}, {}, {}]\n",
            sig12(w[0]),
            sig12(w[1]),
            sig12(w[2])
        ));
    }
    s
}

/// Per-heavy-point local Hopf configurations of a projective arrangement.
fn hopf_arrangement_report(arr: &Arrangement) -> Result<Report, String> {
    let inc = incidence(arr);
    let locals = hopf::local_configs(arr, &inc).map_err(|e| e.to_string())?;
    let points: Vec<Value> = locals
        .iter()
        .map(|l| {
            let mut v = verdict_value(&l.verdict);
            if let Value::Object(m) = &mut v {
                m.insert("point_index".into(), json!(l.point_index));
                m.insert("multiplicity".into(), json!(l.multiplicity));
            }
            v
        })
        .collect();
    let value = json!({
        "command": "hopf",
        "mode": "arrangement",
        "name": arr.name(),
        "points": points,
    });
    let mut text = String::new();
    if let Some(name) = arr.name() {
        text.push_str(&format!("arrangement: {name}\n"));
    }
    for l in &locals {
        text.push_str(&format!(
            "point {} (multiplicity {}): {} radius {}\n",
            l.point_index,
            l.multiplicity,
            status_str(l.verdict.status),
            sig12(l.verdict.covering_radius)
        ));
    }
    Ok((value, text, 0))
}

/// A file of lines in C^2: {"lines": [[[re, im], [re, im]], ...]}.
fn hopf_file_report(path: &Path, tol: f64) -> Result<Report, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if value.get("cyclotomic_order").is_some() {
        let json: ArrangementJson =
            serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?;
        let arr = Arrangement::from_json(&json).map_err(|e| format!("{}: {e}", path.display()))?;
        return hopf_arrangement_report(&arr);
    }
    let raw = value
        .get("lines")
        .and_then(Value::as_array)
        .ok_or_else(|| format!("{}: expected a \"lines\" array", path.display()))?;
    let mut lines = Vec::new();
    for (i, entry) in raw.iter().enumerate() {
        let comp = |k: usize, part: usize| -> Result<f64, String> {
            entry
                .get(k)
                .and_then(|c| c.get(part))
                .and_then(Value::as_f64)
                .ok_or_else(|| format!("{}: line {i}: expected [[re, im], [re, im]]", path.display()))
        };
        let d0 = hopf::Complex64::new(comp(0, 0)?, comp(0, 1)?);
        let d1 = hopf::Complex64::new(comp(1, 0)?, comp(1, 1)?);
        lines.push(hopf::ComplexLine2::new(d0, d1).map_err(|e| format!("line {i}: {e}"))?);
    }
    let verdict = hopf::cat1_verdict_tol(&lines, tol).map_err(|e| e.to_string())?;
    let mut value = verdict_value(&verdict);
    if let Value::Object(m) = &mut value {
        m.insert("command".into(), json!("hopf"));
        m.insert("mode".into(), json!("lines"));
        m.insert("line_count".into(), json!(lines.len()));
    }
    Ok((value, verdict_text(&verdict), 0))
}

// ---- counterexample ------------------------------------------------------

fn parse_eps(s: &str) -> Result<Rational, String> {
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if s.contains('/') {
            return Err(format!("cannot mix decimal and fraction syntax: {s}"));
        }
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part),
        };
        let digits = format!(
            "{}{}",
            if int_digits.is_empty() { "0" } else { int_digits },
            frac_part
        );
        let num: BigInt = digits
            .parse()
            .map_err(|_| format!("not a number: {s}"))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(Rational::new(BigInt::from(sign) * num, den));
    }
    parse_rational(s).map_err(|e| e.to_string())
}

fn run_counterexample(n: u32, eps: &str, format: Format) -> u8 {
    let eps = match parse_eps(eps) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let rep = match extend::verify_counterexample(n, &eps) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let ext = &rep.extendability;
    let value = json!({
        "command": "counterexample",
        "n": n,
        "epsilon": format_rational(&eps),
        "angles": rep.angles.map(sig12),
        "cone_angles": rep.cone_angles.map(sig12),
        "sides": rep.sides.map(sig12),
        "side_margins": rep.side_margins.map(sig12),
        "sides_exceed_quarter_pi": rep.sides_exceed_quarter_pi,
        "extendability": {
            "max_dist_to_singular": sig12(ext.max_dist_to_singular),
            "threshold": sig12(ext.threshold),
            "extendable": ext.extendable,
            "witness": ext.witness.map(sig12),
            "witness_desc": ext.witness_desc,
        },
        "not_quarter_pi_extendable": rep.not_quarter_pi_extendable,
        "confirmed": rep.confirmed,
    });
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        Format::Text => {
            println!(
                "doubled curvature-4 triangle, angles [{}]",
                rep.angles.map(sig12).join(", ")
            );
            println!("cone angles [{}]", rep.cone_angles.map(sig12).join(", "));
            println!("sides [{}]", rep.sides.map(sig12).join(", "));
            println!(
                "sides at the distinguished vertex exceed pi/4: {} (margins {}, {})",
                rep.sides_exceed_quarter_pi,
                sig12(rep.side_margins[0]),
                sig12(rep.side_margins[1])
            );
            println!(
                "pi/4-extendable from the singular pair: {} (max distance {}, witness {})",
                ext.extendable,
                sig12(ext.max_dist_to_singular),
                ext.witness_desc
            );
            println!("counterexample confirmed: {}", rep.confirmed);
        }
    }
    if rep.confirmed {
        0
    } else {
        1
    }
}

// ---- catalog -------------------------------------------------------------

fn run_catalog(cmd: CatalogCmd) -> u8 {
    match cmd {
        CatalogCmd::List { format } => {
            let entries = catalog::list();
            match format {
                Format::Json => {
                    let items: Vec<Value> = entries
                        .iter()
                        .map(|e| {
                            json!({
                                "name": e.name,
                                "description": e.description,
                                "line_count": e.line_count,
                                "multiplicities": e.multiplicities,
                                "hirzebruch_n": e.hirzebruch_n,
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&items).unwrap());
                }
                Format::Text => {
                    for e in &entries {
                        let mults: Vec<String> = e
                            .multiplicities
                            .iter()
                            .map(|(m, c)| format!("{m}^{c}"))
                            .collect();
                        println!(
                            "{:<16} {:>3} lines  mults {:<24} n={:<4} {}",
                            e.name,
                            e.line_count,
                            mults.join(" "),
                            e.hirzebruch_n.map_or("-".into(), |n| n.to_string()),
                            e.description
                        );
                    }
                }
            }
            0
        }
        CatalogCmd::Export { name } => match catalog::by_name(&name) {
            Ok(arr) => {
                println!("{}", serde_json::to_string_pretty(&arr.to_json()).unwrap());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
    }
}
