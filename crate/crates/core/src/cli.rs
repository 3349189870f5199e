//! The `hermitia` command line.
//!
//! Exit codes: 0 success, 1 domain or analysis failure (failed validation,
//! parameters outside Ω, invalid algebra), 2 input errors (bad flags,
//! unreadable or malformed files).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Map, Value};

use crate::analysis::{chen_nie_membership, constancy_test, scan_parameters, ScanConfig};
use crate::connections::ConnectionParams;
use crate::curvature::{self, symmetrize, verify_identities, CurvatureTensor, Which};
use crate::error::Error;
use crate::lie_hermitian::{self as lh, catalog, file, StructureConstants};
use crate::models::{btp3_constancy_analysis, hopf_flat_params, hopf_hsc_report, Btp3Case, Btp3Outcome, HopfPoint};
use crate::report::{self, complex, envelope, float, fmt_g, to_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable holding the seed for randomized inputs.
pub const SEED_VAR: &str = "HERMITIA_SEED";

#[derive(Parser, Debug)]
#[command(name = "hermitia", version, about = "Curvature of canonical metric connections on Lie-Hermitian manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Connection {
    Chern,
    Bismut,
    Lc,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Rank3,
    Wallach,
    Middle,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Jacobi identities and report structural properties.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = lh::DEFAULT_TOL)]
        tol: f64,
    },
    /// Curvature components and their symmetrization.
    #[command(allow_negative_numbers = true)]
    Curvature {
        file: PathBuf,
        #[arg(long, value_enum)]
        connection: Connection,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = crate::analysis::DEFAULT_TOL)]
        tol: f64,
    },
    /// HSC constancy over a grid in the (r, s)-plane.
    #[command(allow_negative_numbers = true)]
    Scan {
        file: PathBuf,
        #[arg(long, default_value_t = -4.0)]
        r_min: f64,
        #[arg(long, default_value_t = 4.0)]
        r_max: f64,
        #[arg(long, default_value_t = -3.0)]
        s_min: f64,
        #[arg(long, default_value_t = 3.0)]
        s_max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = crate::analysis::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Standard Hopf manifold at a point z.
    #[command(allow_negative_numbers = true)]
    Hopf {
        #[arg(long)]
        n: usize,
        /// Comma-separated coordinates such as `1,0` or `0.5+1i,-2i`.
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, conflicts_with = "report")]
        flat_params: bool,
        #[arg(long)]
        report: bool,
        #[arg(long, default_value_t = crate::analysis::DEFAULT_TOL)]
        tol: f64,
    },
    /// Constant-HSC test on a balanced BTP threefold type.
    #[command(allow_negative_numbers = true)]
    Btp3 {
        #[arg(long = "case", value_enum)]
        case: CaseArg,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = crate::analysis::DEFAULT_TOL)]
        tol: f64,
    },
    /// Dual-route check of the curvature identities at the special connections.
    Identities {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print a catalog algebra as an algebra file (lists names when omitted).
    Catalog {
        name: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Random two-step nilpotent algebra with nilpotent J.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Defaults to the value of HERMITIA_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn with_code(stdout: String, code: i32) -> Self {
        Output { stdout, stderr: String::new(), code }
    }

    fn error(e: &Error) -> Self {
        Output {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: exit_code(e),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OutsideDomain { .. } | Error::InvalidStructure { .. } | Error::InconsistentEquation { .. } | Error::NotUnitary { .. } => {
            EXIT_FAILURE
        }
        Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::UnknownCatalog(_)
        | Error::DimensionMismatch { .. }
        | Error::ZeroVector
        | Error::IndexOutOfRange { .. } => EXIT_INPUT,
    }
}

/// Seed from HERMITIA_SEED, 0 when unset. An unparsable value is an input error.
pub fn env_seed() -> Result<u64, Error> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("{SEED_VAR}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

/// Parses and runs; never exits the process.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { stdout: String::new(), stderr: text, code: EXIT_INPUT }
            } else {
                Output::ok(text)
            };
        }
    };
    match execute(cli.command) {
        Ok(out) => out,
        Err(e) => Output::error(&e),
    }
}

fn load(path: &Path) -> Result<StructureConstants, Error> {
    file::load(path)
}

fn path_value(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

fn params_value(p: ConnectionParams) -> Value {
    json!({"r": float(p.r()), "s": float(p.s()), "t": float(p.t())})
}

fn write_or_print(text: String, output: Option<PathBuf>) -> Result<Output, Error> {
    match output {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            Ok(Output::ok(String::new()))
        }
        None => Ok(Output::ok(text)),
    }
}

fn execute(cmd: Command) -> Result<Output, Error> {
    match cmd {
        Command::Validate { file, tol } => cmd_validate(&file, tol),
        Command::Curvature { file, connection, r, s, format, tol } => cmd_curvature(&file, connection, r, s, format, tol),
        Command::Scan { file, r_min, r_max, s_min, s_max, step, tol, format } => {
            cmd_scan(&file, ScanConfig { r_min, r_max, s_min, s_max, step, tol }, format)
        }
        Command::Hopf { n, z, r, s, flat_params, report: _, tol } => cmd_hopf(n, z.as_deref(), r, s, flat_params, tol),
        Command::Btp3 { case, r, s, lambda, tol } => cmd_btp3(case, r, s, lambda, tol),
        Command::Identities { file, tol } => cmd_identities(&file, tol),
        Command::Catalog { name, n, output } => match name {
            None => Ok(Output::ok(catalog::NAMES.iter().map(|s| format!("{s}\n")).collect())),
            Some(name) => {
                let sc = catalog::catalog(&name, n)?;
                write_or_print(file::to_text(&sc, Some(&name)), output)
            }
        },
        Command::Generate { n, m, seed, output } => {
            let seed = match seed {
                Some(s) => s,
                None => env_seed()?,
            };
            let sc = lh::random_two_step(n, m, seed)?;
            write_or_print(file::to_text(&sc, Some(&format!("two_step_n{n}_m{m}_seed{seed}"))), output)
        }
    }
}

pub fn cmd_validate(path: &Path, tol: f64) -> Result<Output, Error> {
    let sc = load(path)?;
    let rep = lh::validate(&sc, tol);
    let mut results = Map::new();
    results.insert("n".into(), Value::from(sc.n()));
    results.insert("ok".into(), Value::Bool(rep.ok));
    results.insert("antisymmetry_ok".into(), Value::Bool(rep.antisymmetry_ok));
    results.insert(
        "jacobi_residuals".into(),
        json!({"I1": float(rep.jacobi_residuals[0]), "I2": float(rep.jacobi_residuals[1]), "I3": float(rep.jacobi_residuals[2])}),
    );
    results.insert("max_residual".into(), float(rep.max_residual()));
    results.insert(
        "worst".into(),
        match rep.worst_tuple {
            Some((which, idx)) => json!({"identity": format!("I{}", which + 1), "indices": idx.map(|x| x + 1)}),
            None => Value::Null,
        },
    );
    if rep.ok {
        let t = lh::chern_torsion(&sc);
        results.insert("kahler".into(), Value::Bool(lh::check_kahler(&sc, tol)));
        results.insert("balanced".into(), lh::check_balanced(&sc, tol).map(Value::Bool).unwrap_or(Value::Null));
        results.insert("nilpotent_j".into(), Value::Bool(lh::check_nilpotent_j(&sc)));
        results.insert("salamon_triangular".into(), Value::Bool(lh::check_salamon(&sc)));
        results.insert("btp".into(), Value::Bool(curvature::check_btp(&sc, tol)?));
        results.insert("torsion_norm_sqr".into(), float(t.norm_sqr()));
        results.insert("d_squared_defect".into(), float(lh::d_squared_defect(&sc)));
    }
    let out = envelope("validate", json!({"file": path_value(path), "tol": float(tol)}), Value::Object(results), None);
    Ok(Output::with_code(to_json(&out), if rep.ok { EXIT_OK } else { EXIT_FAILURE }))
}

fn connection_params(connection: Connection, r: Option<f64>, s: Option<f64>) -> Result<Option<ConnectionParams>, Error> {
    match connection {
        Connection::General => match (r, s) {
            (Some(r), Some(s)) => ConnectionParams::new(r, s).map(Some),
            _ => Err(Error::InvalidParameter("--connection general needs --r and --s".into())),
        },
        _ if r.is_some() || s.is_some() => Err(Error::InvalidParameter("--r/--s only apply to --connection general".into())),
        _ => Ok(None),
    }
}

pub fn cmd_curvature(path: &Path, connection: Connection, r: Option<f64>, s: Option<f64>, format: Format, tol: f64) -> Result<Output, Error> {
    let params = connection_params(connection, r, s)?;
    let sc = load(path)?;
    let rt: CurvatureTensor = match connection {
        Connection::Chern => curvature::curvature_from_structure(&sc, Which::Chern)?,
        Connection::Bismut => curvature::curvature_from_structure(&sc, Which::Bismut)?,
        Connection::Lc => curvature::levicivita_curvature(&sc)?.tensor,
        Connection::General => curvature::curvature_d(&sc, params.expect("checked above"))?,
    };
    let hat = symmetrize(&rt);
    let rows = report::tensor_rows(&rt, &hat, -1.0);
    let name = format!("{connection:?}").to_lowercase();
    if format == Format::Csv {
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|(idx, a, b)| {
                let mut row: Vec<String> = idx.iter().map(|x| x.to_string()).collect();
                row.extend([fmt_g(a.re), fmt_g(a.im), fmt_g(b.re), fmt_g(b.im)]);
                row
            })
            .collect();
        return Ok(Output::ok(report::csv(&["i", "j", "k", "l", "re", "im", "hat_re", "hat_im"], &body)));
    }
    let comps: Vec<Value> = rows
        .iter()
        .map(|(idx, a, b)| json!({"index": idx, "R": complex(*a), "R_hat": complex(*b)}))
        .collect();
    let verdict = constancy_test(&hat, tol);
    let mut results = Map::new();
    results.insert("connection".into(), Value::String(name.clone()));
    results.insert("n".into(), Value::from(sc.n()));
    results.insert("components".into(), Value::Array(comps));
    results.insert("max_abs".into(), float(rt.max_abs()));
    results.insert("hermitian_defect".into(), float(rt.hermitian_defect()));
    results.insert("hsc".into(), verdict_value(&verdict));
    if let Some(p) = params {
        results.insert("params".into(), params_value(p));
    }
    let mut inputs = Map::new();
    inputs.insert("file".into(), path_value(path));
    inputs.insert("connection".into(), Value::String(name));
    inputs.insert("tol".into(), float(tol));
    if let Some(p) = params {
        inputs.insert("r".into(), float(p.r()));
        inputs.insert("s".into(), float(p.s()));
    }
    Ok(Output::ok(to_json(&envelope("curvature", Value::Object(inputs), Value::Object(results), None))))
}

fn verdict_value(v: &crate::analysis::HscVerdict) -> Value {
    json!({
        "constant": v.constant,
        "c": float(v.c),
        "max_residual": float(v.max_residual),
        "witness": v.witness.map(|w| w.map(|x| x + 1)),
        "tol": float(v.tol),
    })
}

pub fn cmd_scan(path: &Path, cfg: ScanConfig, format: Format) -> Result<Output, Error> {
    let sc = load(path)?;
    let rows = scan_parameters(&sc, &cfg)?;
    if format == Format::Csv {
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    fmt_g(r.r),
                    fmt_g(r.s),
                    fmt_g(r.t),
                    r.on_chen_nie.to_string(),
                    r.hsc.constant.to_string(),
                    fmt_g(r.hsc.c),
                    fmt_g(r.hsc.max_residual),
                    r.flat.to_string(),
                    r.label.unwrap_or("").to_string(),
                ]
            })
            .collect();
        return Ok(Output::ok(report::csv(
            &["r", "s", "t", "on_chen_nie", "constant", "c", "max_residual", "flat", "label"],
            &body,
        )));
    }
    let constant: Vec<Value> = rows.iter().filter(|r| r.hsc.constant).map(|r| json!([float(r.r), float(r.s)])).collect();
    let values: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "r": float(r.r),
                "s": float(r.s),
                "t": float(r.t),
                "on_chen_nie": r.on_chen_nie,
                "hsc": verdict_value(&r.hsc),
                "flat": r.flat,
                "label": r.label,
            })
        })
        .collect();
    let results = json!({
        "n": sc.n(),
        "row_count": rows.len(),
        "constant_count": constant.len(),
        "constant_points": constant,
        "rows": values,
    });
    let inputs = json!({
        "file": path_value(path),
        "r_min": float(cfg.r_min),
        "r_max": float(cfg.r_max),
        "s_min": float(cfg.s_min),
        "s_max": float(cfg.s_max),
        "step": float(cfg.step),
        "tol": float(cfg.tol),
    });
    Ok(Output::ok(to_json(&envelope("scan", inputs, results, None))))
}

/// Parses `a,b,...` where each entry is a real or complex literal (`1`, `-2.5`, `1+2i`, `3i`).
pub fn parse_z(text: &str) -> Result<Vec<Complex64>, Error> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<Complex64>().map_err(|_| Error::Parse(format!("bad coordinate {s:?}")))
        })
        .collect()
}

pub fn cmd_hopf(n: usize, z: Option<&str>, r: Option<f64>, s: Option<f64>, flat_params: bool, tol: f64) -> Result<Output, Error> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("--n must be at least 2, got {n}")));
    }
    if flat_params {
        if z.is_some() || r.is_some() || s.is_some() {
            return Err(Error::InvalidParameter("--flat-params takes only --n".into()));
        }
        let pts: Vec<Value> = hopf_flat_params(n)?
            .into_iter()
            .map(|(r, s)| json!({"r": float(r), "s": float(s), "on_chen_nie": chen_nie_membership(r, s, tol)}))
            .collect();
        let results = json!({"n": n, "flat_params": pts});
        return Ok(Output::ok(to_json(&envelope("hopf", json!({"n": n, "flat_params": true}), results, None))));
    }
    let (r, s) = match (r, s) {
        (Some(r), Some(s)) => (r, s),
        _ => return Err(Error::InvalidParameter("--report needs --r and --s".into())),
    };
    let params = ConnectionParams::new(r, s)?;
    let (coords, seed) = match z {
        Some(text) => (parse_z(text)?, None),
        None => {
            let seed = env_seed()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = (0..n)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            (v, Some(seed))
        }
    };
    if coords.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: coords.len() });
    }
    let pt = HopfPoint::new(coords.clone())?;
    let rep = hopf_hsc_report(&pt, params, tol)?;
    let probes: Vec<Value> = rep
        .probes
        .iter()
        .map(|p| json!({"label": p.label, "verdict": verdict_value(&p.verdict), "rhat_1111": float(p.rhat_1111)}))
        .collect();
    let results = json!({
        "n": n,
        "params": params_value(params),
        "on_chen_nie": rep.on_chen_nie,
        "constant": rep.constant,
        "c": rep.c.map(float),
        "witness": float(rep.witness),
        "probes": probes,
    });
    let inputs = json!({
        "n": n,
        "z": coords.iter().map(|c| complex(*c)).collect::<Vec<_>>(),
        "r": float(r),
        "s": float(s),
        "tol": float(tol),
    });
    Ok(Output::ok(to_json(&envelope("hopf", inputs, results, seed))))
}

pub fn cmd_btp3(case: CaseArg, r: f64, s: f64, lambda: f64, tol: f64) -> Result<Output, Error> {
    let params = ConnectionParams::new(r, s)?;
    let case = match case {
        CaseArg::Rank3 => Btp3Case::Rank3,
        CaseArg::Wallach => Btp3Case::Wallach,
        CaseArg::Middle => Btp3Case::Middle,
    };
    let v = btp3_constancy_analysis(case, params, lambda, tol)?;
    let check = |e: &crate::models::EquationCheck| {
        json!({
            "i": e.i,
            "k": e.k,
            "pattern": float(e.pattern),
            "predicted": float(e.predicted),
            "residual": float(e.residual),
        })
    };
    let outcome = match &v.outcome {
        Btp3Outcome::Consistent { c } => json!({"status": "consistent", "c": float(*c)}),
        Btp3Outcome::Infeasible { violated } => json!({"status": "infeasible", "violated": check(violated)}),
    };
    let fitted: Map<String, Value> = v.fitted.iter().map(|(k, x)| (k.clone(), float(*x))).collect();
    let results = json!({
        "case": serde_json::to_value(v.case).expect("unit enum"),
        "params": params_value(params),
        "lambda": float(v.lambda),
        "c": float(v.c),
        "fitted": fitted,
        "checks": v.checks.iter().map(check).collect::<Vec<_>>(),
        "outcome": outcome,
    });
    let inputs = json!({"case": serde_json::to_value(case).expect("unit enum"), "r": float(r), "s": float(s), "lambda": float(lambda), "tol": float(tol)});
    Ok(Output::ok(to_json(&envelope("btp3", inputs, results, None))))
}

pub fn cmd_identities(path: &Path, tol: f64) -> Result<Output, Error> {
    let sc = load(path)?;
    let named = ConnectionParams::special_points();
    let params: Vec<ConnectionParams> = named.iter().map(|(_, p)| *p).collect();
    let rep = verify_identities(&sc, &params, tol)?;
    let rows: Vec<Value> = rep
        .residuals
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "max_residual": float(r.max_residual),
                "params": r.params_index.map(|i| named[i].0),
                "worst": r.worst.map(|w| w.map(|x| x + 1)),
            })
        })
        .collect();
    let results = json!({"ok": rep.ok, "max_residual": float(rep.max_residual()), "identities": rows});
    let out = envelope("identities", json!({"file": path_value(path), "tol": float(tol)}), results, None);
    Ok(Output::with_code(to_json(&out), if rep.ok { EXIT_OK } else { EXIT_FAILURE }))
}
