//! Command-line front end over the JSON system format and CSV time series.
//!
//! Exit codes: 0 success, 1 `--assert` failed, 2 invalid input or usage,
//! 3 rank deficiency (unobservable), 4 inconsistent data or unreachable target.

pub mod csv_io;
pub mod report;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::analysis::{
    analyze_special_cases, criterion_description, is_controllable, is_observable, Property, ReducedForm,
    StructuralReport,
};
use crate::error::Error;
use crate::matcore::{RealMatrix, DEFAULT_RANK_TOL};
use crate::sysmodel::{dual_system, SecondOrderSystem, StateSnapshot};
use crate::trajectory::{reconstruct_initial_state, simulate_discrete, synthesize_control, DEFAULT_CONSISTENCY_TOL};
use crate::transfer::{
    cancellation_check, poles_zeros, transfer_function, transfer_function_general, RationalTransferMatrix,
    DEFAULT_CANCEL_TOL,
};

pub use report::RunReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RANK_DEFICIENT: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "solti", version, about = "Second-order LTI observability, controllability and transfer functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// System description (JSON).
    pub system: PathBuf,
    /// Relative singular-value threshold for rank decisions.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL, value_parser = positive_f64)]
    pub rank_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Observability/controllability matrices, ranks and verdicts.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Exit 1 unless the system is observable and (when it has inputs) controllable.
        #[arg(long)]
        assert: bool,
    },
    /// Transfer function H(s), with poles, zeros and cancellations for SISO systems.
    Tf {
        #[command(flatten)]
        common: Common,
        /// Relative pole-zero distance counted as a cancellation.
        #[arg(long, default_value_t = DEFAULT_CANCEL_TOL, value_parser = positive_f64)]
        cancel_tol: f64,
    },
    /// Run the discrete recursion from (x0, x1).
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector_flag, allow_hyphen_values = true)]
        x0: Vector,
        #[arg(long, value_parser = parse_vector_flag, allow_hyphen_values = true)]
        x1: Vector,
        #[arg(long)]
        steps: usize,
        /// Input sequence CSV (zero input when omitted).
        #[arg(long)]
        inputs: Option<PathBuf>,
        /// Write the state trajectory CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the output sequence CSV here.
        #[arg(long)]
        outputs_out: Option<PathBuf>,
    },
    /// Recover (x0, x1) from 2n output samples.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        outputs: PathBuf,
        /// Input sequence CSV (zero input when omitted).
        #[arg(long)]
        inputs: Option<PathBuf>,
    },
    /// Inputs u0..u(n-1) that move the position x(n+1) to a target.
    Steer {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector_flag, allow_hyphen_values = true)]
        x0: Vector,
        #[arg(long, value_parser = parse_vector_flag, allow_hyphen_values = true)]
        x1: Vector,
        #[arg(long, value_parser = parse_vector_flag, allow_hyphen_values = true)]
        target: Vector,
    },
    /// Dual system (A0ᵀ, -A1ᵀ, Cᵀ, Bᵀ).
    Dual {
        #[command(flatten)]
        common: Common,
        /// Write the dual system JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("'{s}' must be a positive finite number"))
    }
}

/// Vector-valued flag. A newtype so clap takes the whole list as one value.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(pub Vec<f64>);

impl std::ops::Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn parse_vector_flag(s: &str) -> Result<Vector, String> {
    parse_vector(s).map(Vector)
}

/// Comma-separated decimals, e.g. `1,0,-2.5`.
pub fn parse_vector(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("'{t}' is not a finite number")),
            }
        })
        .collect()
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unobservable { .. } => EXIT_RANK_DEFICIENT,
            Error::InconsistentData { .. } | Error::UncontrollableTarget { .. } => EXIT_INCONSISTENT,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let format = match &cli.command {
        Command::Analyze { common, .. }
        | Command::Tf { common, .. }
        | Command::Simulate { common, .. }
        | Command::Reconstruct { common, .. }
        | Command::Steer { common, .. }
        | Command::Dual { common, .. } => common.format,
    };
    match execute(&cli.command) {
        Ok((report, code)) => {
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            if stdout.write_all(text.as_bytes()).is_err() {
                return EXIT_INVALID;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: &Command) -> Result<(RunReport, i32), CliError> {
    match command {
        Command::Analyze { common, assert } => cmd_analyze(common, *assert),
        Command::Tf { common, cancel_tol } => cmd_tf(common, *cancel_tol).map(|r| (r, EXIT_OK)),
        Command::Simulate {
            common,
            x0,
            x1,
            steps,
            inputs,
            out,
            outputs_out,
        } => cmd_simulate(common, x0, x1, *steps, inputs.as_deref(), out.as_deref(), outputs_out.as_deref())
            .map(|r| (r, EXIT_OK)),
        Command::Reconstruct { common, outputs, inputs } => {
            cmd_reconstruct(common, outputs, inputs.as_deref()).map(|r| (r, EXIT_OK))
        }
        Command::Steer { common, x0, x1, target } => cmd_steer(common, x0, x1, target).map(|r| (r, EXIT_OK)),
        Command::Dual { common, out } => cmd_dual(common, out.as_deref()).map(|r| (r, EXIT_OK)),
    }
}

fn load(path: &Path) -> Result<SecondOrderSystem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    SecondOrderSystem::from_json(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let f = File::open(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    csv_io::read_sequence(BufReader::new(f)).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn base_report(name: &str, common: &Common, sys: &SecondOrderSystem) -> RunReport {
    let mut r = RunReport::new(name);
    r.inputs.insert("system".into(), json!(common.system.display().to_string()));
    r.inputs.insert(
        "dimensions".into(),
        json!({"kind": sys.kind.as_str(), "n": sys.n, "r": sys.r, "p": sys.p}),
    );
    r.tolerances.insert("rank_tol".into(), json!(common.rank_tol));
    r
}

fn matrix_json(m: &RealMatrix) -> Value {
    json!(m.to_rows())
}

fn structural_json(rep: &StructuralReport) -> Value {
    let mut v = json!({
        "matrix": matrix_json(&rep.matrix),
        "rank": rep.computed_rank,
        "required_rank": rep.required_rank,
        "verdict": rep.verdict,
    });
    if let Ok(det) = rep.matrix.determinant() {
        v["determinant"] = json!(det + 0.0);
    }
    v
}

fn complex_list(v: &[Complex64]) -> Value {
    json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

fn form_key(form: ReducedForm) -> &'static str {
    match form {
        ReducedForm::PositionOnly => "position_only",
        ReducedForm::VelocityOnly => "velocity_only",
    }
}

pub fn cmd_analyze(common: &Common, assert: bool) -> Result<(RunReport, i32), CliError> {
    let sys = load(&common.system)?;
    let tol = common.rank_tol;
    let mut report = base_report("analyze", common, &sys);
    report.inputs.insert("assert".into(), json!(assert));

    let obs = is_observable(&sys, tol);
    let mut obs_json = structural_json(&obs);
    obs_json["criterion"] = json!(criterion_description(sys.kind, Property::Observability));
    report.results.insert("observability".into(), obs_json);

    let input_free = sys.is_input_free();
    let ctrl_verdict = if sys.r == 0 {
        report.results.insert(
            "controllability".into(),
            json!({"applicable": false, "reason": "system has no inputs (r = 0)"}),
        );
        None
    } else {
        let ctrl = is_controllable(&sys, tol)?;
        let mut v = structural_json(&ctrl);
        v["applicable"] = json!(true);
        v["input_free"] = json!(input_free);
        v["criterion"] = json!(criterion_description(sys.kind, Property::Controllability));
        report.results.insert("controllability".into(), v);
        Some(ctrl.verdict)
    };

    let mut special = Map::new();
    for case in analyze_special_cases(&sys, tol) {
        let mut v = structural_json(&case.report);
        v["form"] = json!(case.form.as_str());
        special.insert(format!("{}_{}", form_key(case.form), case.property.as_str()), v);
    }
    if special.is_empty() {
        report.results.insert("special_case".into(), json!("none"));
    }
    report.results.insert("special_cases".into(), Value::Object(special));
    report.results.insert(
        "verdicts".into(),
        json!({"observable": obs.verdict, "controllable": ctrl_verdict}),
    );

    let controllable_ok = input_free || ctrl_verdict == Some(true);
    let code = if assert && !(obs.verdict && controllable_ok) {
        EXIT_ASSERT
    } else {
        EXIT_OK
    };
    Ok((report, code))
}

fn render_transfer(h: &RationalTransferMatrix) -> Value {
    if h.is_siso() {
        json!(format!("H(s) = {}", h.render_entry(0, 0)))
    } else {
        let entries: Vec<String> = (0..h.outputs())
            .flat_map(|i| (0..h.inputs()).map(move |j| (i, j)))
            .map(|(i, j)| format!("H[{i},{j}](s) = {}", h.render_entry(i, j)))
            .collect();
        json!(entries)
    }
}

pub fn cmd_tf(common: &Common, cancel_tol: f64) -> Result<RunReport, CliError> {
    let sys = load(&common.system)?;
    if sys.r == 0 {
        return Err(Error::NoInput.into());
    }
    let mut report = base_report("tf", common, &sys);
    report.tolerances.insert("cancel_tol".into(), json!(cancel_tol));
    let (h, path) = if sys.a1.is_zero() {
        (transfer_function(&sys)?, "position-only resolvent C (s^2 E - A0)^-1 B")
    } else {
        (transfer_function_general(&sys)?, "companion lift [C 0] (s E - A~)^-1 B~")
    };
    report.results.insert("path".into(), json!(path));
    report.results.insert("rendered".into(), render_transfer(&h));
    report.results.insert("denominator".into(), json!(h.denominator.coeffs()));
    let numerators: Vec<Vec<Vec<f64>>> = h
        .numerators
        .iter()
        .map(|row| row.iter().map(|p| p.coeffs().to_vec()).collect())
        .collect();
    report.results.insert("numerators".into(), json!(numerators));
    let num_degree = h.numerators.iter().flatten().filter_map(|p| p.degree()).max();
    report.results.insert(
        "degrees".into(),
        json!({"numerator_max": num_degree, "denominator": h.denominator.degree()}),
    );
    if h.is_siso() {
        match poles_zeros(&h) {
            Ok(pz) => {
                let cancel = cancellation_check(&h, cancel_tol)?;
                report.results.insert("poles".into(), complex_list(&pz.poles));
                report.results.insert("zeros".into(), complex_list(&pz.zeros));
                let pairs: Vec<Value> = cancel
                    .cancelled_pairs
                    .iter()
                    .map(|(p, z)| json!({"pole": [p.re, p.im], "zero": [z.re, z.im]}))
                    .collect();
                report.results.insert("cancellations".into(), json!(pairs));
                report.results.insert(
                    "cancellation_verdict".into(),
                    json!(if cancel.is_empty() { "none" } else { "present" }),
                );
            }
            Err(Error::ZeroTransfer) => {
                report.results.insert("cancellation_verdict".into(), json!("zero transfer function"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}

fn inputs_or_zero(path: Option<&Path>, sys: &SecondOrderSystem, count: usize) -> Result<Vec<Vec<f64>>, CliError> {
    match path {
        Some(p) => read_csv(p),
        None => Ok(vec![vec![0.0; sys.r]; count]),
    }
}

fn component_header(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn cmd_simulate(
    common: &Common,
    x0: &[f64],
    x1: &[f64],
    steps: usize,
    inputs: Option<&Path>,
    out: Option<&Path>,
    outputs_out: Option<&Path>,
) -> Result<RunReport, CliError> {
    let sys = load(&common.system)?;
    let snap = StateSnapshot::new(x0.to_vec(), x1.to_vec())?;
    let u = inputs_or_zero(inputs, &sys, steps.saturating_sub(1))?;
    let traj = simulate_discrete(&sys, &snap, &u, steps)?;
    if let Some(path) = out {
        let mut buf = Vec::new();
        csv_io::write_sequence(&mut buf, &component_header("x", sys.n), &traj.states)?;
        write_file(path, &buf)?;
    }
    if let Some(path) = outputs_out {
        let mut buf = Vec::new();
        csv_io::write_sequence(&mut buf, &component_header("y", sys.p), &traj.outputs)?;
        write_file(path, &buf)?;
    }
    let mut report = base_report("simulate", common, &sys);
    report.inputs.insert("x0".into(), json!(x0));
    report.inputs.insert("x1".into(), json!(x1));
    report.inputs.insert("steps".into(), json!(steps));
    report.inputs.insert(
        "inputs".into(),
        json!(inputs.map_or("zero".to_string(), |p| p.display().to_string())),
    );
    report.results.insert("states".into(), json!(traj.states));
    report.results.insert("outputs".into(), json!(traj.outputs));
    if let Some(p) = out {
        report.results.insert("states_csv".into(), json!(p.display().to_string()));
    }
    if let Some(p) = outputs_out {
        report.results.insert("outputs_csv".into(), json!(p.display().to_string()));
    }
    Ok(report)
}

pub fn cmd_reconstruct(common: &Common, outputs: &Path, inputs: Option<&Path>) -> Result<RunReport, CliError> {
    let sys = load(&common.system)?;
    let ys = read_csv(outputs)?;
    let us = inputs_or_zero(inputs, &sys, (2 * sys.n).saturating_sub(2))?;
    let rec = reconstruct_initial_state(&sys, &ys, &us, common.rank_tol)?;
    let mut report = base_report("reconstruct", common, &sys);
    report.tolerances.insert("consistency_tol".into(), json!(DEFAULT_CONSISTENCY_TOL));
    report.inputs.insert("outputs".into(), json!(outputs.display().to_string()));
    report.inputs.insert(
        "inputs".into(),
        json!(inputs.map_or("zero".to_string(), |p| p.display().to_string())),
    );
    report.results.insert("x0".into(), json!(rec.snapshot.x0));
    report.results.insert("x1".into(), json!(rec.snapshot.x1));
    report.results.insert("residual".into(), json!(rec.residual_norm));
    report.results.insert("rank".into(), json!(rec.rank));
    report.results.insert("required_rank".into(), json!(2 * sys.n));
    Ok(report)
}

pub fn cmd_steer(common: &Common, x0: &[f64], x1: &[f64], target: &[f64]) -> Result<RunReport, CliError> {
    let sys = load(&common.system)?;
    let snap = StateSnapshot::new(x0.to_vec(), x1.to_vec())?;
    let u = synthesize_control(&sys, &snap, target, common.rank_tol)?;
    let traj = simulate_discrete(&sys, &snap, &u, sys.n + 1)?;
    let reached = &traj.states[sys.n + 1];
    let miss = reached
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let mut report = base_report("steer", common, &sys);
    report.tolerances.insert("consistency_tol".into(), json!(DEFAULT_CONSISTENCY_TOL));
    report.inputs.insert("x0".into(), json!(x0));
    report.inputs.insert("x1".into(), json!(x1));
    report.inputs.insert("target".into(), json!(target));
    report.results.insert("inputs".into(), json!(u));
    report.results.insert("predicted_final_state".into(), json!(reached));
    report.results.insert("final_time".into(), json!(sys.n + 1));
    report.results.insert("target_error".into(), json!(miss));
    Ok(report)
}

pub fn cmd_dual(common: &Common, out: Option<&Path>) -> Result<RunReport, CliError> {
    let sys = load(&common.system)?;
    if sys.r == 0 {
        return Err(invalid("dual of an input-free system (r = 0) would have no outputs"));
    }
    let dual = dual_system(&sys);
    let text = dual.to_json();
    if let Some(path) = out {
        write_file(path, text.as_bytes())?;
    }
    let mut report = base_report("dual", common, &sys);
    let doc: Value = serde_json::from_str(&text).expect("rendered system is valid JSON");
    report.results.insert("system".into(), doc);
    if let Some(p) = out {
        report.results.insert("written".into(), json!(p.display().to_string()));
    }
    Ok(report)
}
