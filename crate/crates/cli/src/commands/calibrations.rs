use clap::{Args, Subcommand};
use serde::Serialize;

use minvol::diffsys::{
    closed_two_form_family, cohomologous, is_calibration, CalibrationFamily, ClosedFamily,
    InvariantTwoForm, Orientation,
};
use minvol::exterior::{comass, theta, two_form, DEFAULT_RESTARTS, DIM};
use minvol::parse::parse_phi_spec;

use crate::args::{coefficients, count, finite, Coefficients};
use crate::error::{CliError, CliResult};
use crate::report::Report;

#[derive(Subcommand, Debug)]
pub enum CalibrationsCommand {
    /// List the invariant calibration families, and classify `--b` if given.
    Classify(ClassifyArgs),
    /// Comass of `θ∧(b₀α₀ + b₁α₁ + b₂α₂ + b₃dθ)`.
    Comass(ComassArgs),
    /// Whether two invariant 3-forms are cohomologous on a space form.
    Cohomology(CohomologyArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Coefficients `b₀,b₁,b₂,b₃` of a 2-form `ω`.
    #[arg(long, value_parser = coefficients, allow_hyphen_values = true)]
    pub b: Option<Coefficients>,
    /// Sectional curvature, for the closed family.
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub c: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ComassArgs {
    /// Coefficients `b₀,b₁,b₂` or `b₀,b₁,b₂,b₃`.
    #[arg(long, value_parser = coefficients, allow_hyphen_values = true)]
    pub b: Coefficients,
    #[arg(long, default_value_t = DEFAULT_RESTARTS, value_parser = count)]
    pub restarts: usize,
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    /// Sectional curvature.
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub c: f64,
    /// plus, minus, zero, alpha0, alpha1, minus-alpha1, t=<angle> or b=<b0>,<b1>,<b2>.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
    #[arg(long, allow_hyphen_values = true)]
    pub psi: String,
}

#[derive(Debug, Serialize)]
struct Classification {
    b: [f64; 4],
    calibration: Option<Orientation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed: Option<bool>,
}

#[derive(Debug, Serialize)]
struct ClassifyReport {
    command: &'static str,
    families: Vec<CalibrationFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_family: Option<ClosedFamily<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<Classification>,
}

#[derive(Debug, Serialize)]
struct ComassReport {
    command: &'static str,
    seed: u64,
    restarts: usize,
    b: [f64; 4],
    comass: f64,
    norm: f64,
    /// Orthonormal basis of a maximising 3-plane, in the frame `e₀ … e₄`.
    argmax: [[f64; DIM]; 3],
    restart: usize,
}

#[derive(Debug, Serialize)]
struct CohomologyReport {
    command: &'static str,
    c: f64,
    phi: [f64; 3],
    psi: [f64; 3],
    cohomologous: bool,
}

fn two_form_coefficients(b: &[f64]) -> CliResult<[f64; 4]> {
    match *b {
        [b0, b1, b2] => Ok([b0, b1, b2, 0.0]),
        [b0, b1, b2, b3] => Ok([b0, b1, b2, b3]),
        _ => Err(CliError::Usage(format!(
            "--b needs three or four coefficients, got {}",
            b.len()
        ))),
    }
}

pub fn run(cmd: &CalibrationsCommand, seed: u64) -> CliResult<Report> {
    match cmd {
        CalibrationsCommand::Classify(args) => {
            let classification = args
                .b
                .as_ref()
                .map(|b| -> CliResult<Classification> {
                    let b = two_form_coefficients(&b.0)?;
                    let omega = InvariantTwoForm::new(b);
                    Ok(Classification {
                        b,
                        calibration: is_calibration(&omega),
                        closed: args.c.map(|c| omega.is_closed(&c)),
                    })
                })
                .transpose()?;
            let body = ClassifyReport {
                command: "calibrations classify",
                families: vec![
                    CalibrationFamily::of(Orientation::Same),
                    CalibrationFamily::of(Orientation::Opposite),
                ],
                closed_family: args.c.map(closed_two_form_family),
                classification,
            };
            Report::new(&body, true)
        }
        CalibrationsCommand::Comass(args) => {
            let b = two_form_coefficients(&args.b.0)?;
            let phi = theta::<f64>().wedge(&two_form(b))?;
            let res = comass(&phi, args.restarts, seed)?;
            let body = ComassReport {
                command: "calibrations comass",
                seed,
                restarts: args.restarts,
                b,
                comass: res.value,
                norm: phi.norm(),
                argmax: res.argmax.columns(),
                restart: res.restart,
            };
            Report::new(&body, true)
        }
        CalibrationsCommand::Cohomology(args) => {
            let phi = parse_phi_spec(&args.phi)?;
            let psi = parse_phi_spec(&args.psi)?;
            let body = CohomologyReport {
                command: "calibrations cohomology",
                c: args.c,
                phi: phi.b,
                psi: psi.b,
                cohomologous: cohomologous(&phi, &psi, &args.c),
            };
            Report::new(&body, true)
        }
    }
}
