use clap::{Args, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use minvol::fields::{
    boundary_flux, calibrated_test, classification_flags, defect, volume, CalibrationTest,
    ClassificationFlags, FieldSpec, QuadratureDomain, Sign, UnitVectorField, VolumeReport,
    HOPF_ORDERS,
};
use minvol::parse::parse_phi_spec;
use minvol::spaceform::{ChartBox, Geometry, Model, Vector};

use crate::args::{chart_box, count, orders, sample_points, FieldArgs, ModelArgs, ModelInfo};
use crate::error::{CliError, CliResult};
use crate::report::{cell, csv_table, Report};

pub const BOX_ORDERS: [usize; 3] = [8, 8, 16];
/// Relative agreement required between a volume and its closed form.
pub const CLOSED_FORM_TOL: f64 = 1e-4;
/// Relative agreement required between volume and flux of `t∂ₜ`.
pub const STOKES_TOL: f64 = 1e-6;
pub const KILLING_TOL: f64 = 1e-8;
pub const CLOSED_TOL: f64 = 1e-6;
pub const COCLOSED_TOL: f64 = 1e-8;

#[derive(Args, Debug)]
pub struct Target {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub field: FieldArgs,
}

#[derive(Args, Debug)]
pub struct Sampling {
    #[arg(long, default_value_t = 1000, value_parser = count)]
    pub samples: usize,
    /// Chart box `x1min,x1max,x2min,x2max,tmin,tmax` to sample from.
    #[arg(long = "box", value_parser = chart_box, allow_hyphen_values = true)]
    pub bounds: Option<ChartBox>,
}

#[derive(Subcommand, Debug)]
pub enum FieldCommand {
    /// Volume of the field over a box, or over the whole sphere.
    Volume {
        #[command(flatten)]
        target: Target,
        /// Chart box `x1min,x1max,x2min,x2max,tmin,tmax`; the whole sphere if omitted.
        #[arg(long = "box", value_parser = chart_box, allow_hyphen_values = true)]
        bounds: Option<ChartBox>,
        /// Gauss–Legendre orders per axis.
        #[arg(long, value_parser = orders)]
        orders: Option<[usize; 3]>,
    },
    /// Compare `X^*φ` with the volume density at sampled points.
    CalibratedTest {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value = "plus", allow_hyphen_values = true)]
        phi: String,
    },
    /// Sum-of-squares defect of the `±` system at sampled points.
    Defect {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sampling: Sampling,
        /// `+` or `-`.
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
    },
    /// Killing, closed and co-closed defects over sampled points.
    Classify {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Flux `−∮ X⌟vol` through the boundary of a chart box.
    Flux {
        #[command(flatten)]
        target: Target,
        /// Chart box `x1min,x1max,x2min,x2max,tmin,tmax`.
        #[arg(long = "box", value_parser = chart_box, allow_hyphen_values = true)]
        bounds: ChartBox,
        /// Gauss–Legendre order per face axis.
        #[arg(long, default_value_t = 8, value_parser = count)]
        order: usize,
    },
}

#[derive(Debug, Serialize)]
struct Header {
    command: &'static str,
    model: ModelInfo,
    field: FieldSpec,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct VolumeOutput {
    #[serde(flatten)]
    header: Header,
    domain: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    bounds: Option<ChartBox>,
    #[serde(flatten)]
    report: VolumeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_error: Option<f64>,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct CalibratedOutput {
    #[serde(flatten)]
    header: Header,
    phi: [f64; 3],
    samples: usize,
    satisfied: usize,
    all_satisfied: bool,
    inequality_violations: usize,
    max_abs_difference: f64,
    min_gap: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct DefectOutput {
    #[serde(flatten)]
    header: Header,
    sign: Sign,
    samples: usize,
    min: f64,
    max: f64,
    mean: f64,
}

#[derive(Debug, Serialize)]
struct ClassifyOutput {
    #[serde(flatten)]
    header: Header,
    samples: usize,
    #[serde(flatten)]
    flags: ClassificationFlags,
    killing: bool,
    closed: bool,
    coclosed: bool,
}

#[derive(Debug, Serialize)]
struct FluxOutput {
    #[serde(flatten)]
    header: Header,
    bounds: ChartBox,
    order: usize,
    flux: f64,
    volume: f64,
    relative_difference: f64,
    /// Whether volume and flux must agree, which holds for `t∂ₜ`.
    stokes_check: bool,
    passed: bool,
}

fn point_cells(x: &Vector) -> Vec<String> {
    x.iter().map(|&v| cell(v)).collect()
}

fn coordinate_header(model: &Model) -> Vec<String> {
    if model.embedded().is_some() {
        (1..=model.coord_dim()).map(|i| format!("x{i}")).collect()
    } else {
        vec!["x1".into(), "x2".into(), "t".into()]
    }
}

fn table_header<'a>(coords: &'a [String], rest: &[&'a str]) -> Vec<&'a str> {
    coords
        .iter()
        .map(String::as_str)
        .chain(rest.iter().copied())
        .collect()
}

fn evaluate<T: Send>(
    points: &[Vector],
    f: impl Fn(&Vector) -> minvol::Result<T> + Sync + Send,
) -> CliResult<Vec<T>> {
    Ok(points
        .par_iter()
        .map(f)
        .collect::<minvol::Result<Vec<T>>>()?)
}

fn volume_domain(
    model: &Model,
    bounds: Option<ChartBox>,
    orders: Option<[usize; 3]>,
) -> CliResult<QuadratureDomain> {
    match (model.embedded(), bounds) {
        (Some(m), None) if m.is_elliptic() => Ok(QuadratureDomain::FullSphereHopf {
            orders: orders.unwrap_or(HOPF_ORDERS),
        }),
        (Some(_), _) => Err(CliError::Usage(
            "embedded models integrate over the whole sphere; --box needs a chart model".into(),
        )),
        (None, Some(bounds)) => Ok(QuadratureDomain::ChartBox {
            bounds,
            orders: orders.unwrap_or(BOX_ORDERS),
        }),
        (None, None) => Err(CliError::Usage("chart models need --box".into())),
    }
}

pub fn run(cmd: &FieldCommand, seed: u64) -> CliResult<Report> {
    let target = match cmd {
        FieldCommand::Volume { target, .. }
        | FieldCommand::CalibratedTest { target, .. }
        | FieldCommand::Defect { target, .. }
        | FieldCommand::Classify { target, .. }
        | FieldCommand::Flux { target, .. } => target,
    };
    let (model, info) = target.model.build()?;
    let (field, spec) = target.field.build(&model)?;
    let field: &dyn UnitVectorField = field.as_ref();
    let header = |command| Header {
        command,
        model: info.clone(),
        field: spec.clone(),
        seed,
    };
    let coords = coordinate_header(&model);
    match cmd {
        FieldCommand::Volume { bounds, orders, .. } => {
            let domain = volume_domain(&model, *bounds, *orders)?;
            let report = volume(field, &domain)?;
            let relative_error = report.closed_form.map(|c| ((report.volume - c) / c).abs());
            let passed = report.consistent && relative_error.is_none_or(|e| e < CLOSED_FORM_TOL);
            let body = VolumeOutput {
                header: header("field volume"),
                domain: match domain {
                    QuadratureDomain::ChartBox { .. } => "chart-box",
                    QuadratureDomain::FullSphereHopf { .. } => "full-sphere",
                },
                bounds: *bounds,
                report,
                relative_error,
                passed,
            };
            Report::new(&body, passed)
        }
        FieldCommand::CalibratedTest { sampling, phi, .. } => {
            let phi = parse_phi_spec(phi)?;
            let points = sample_points(&model, sampling.bounds.as_ref(), sampling.samples, seed)?;
            let tests: Vec<CalibrationTest> =
                evaluate(&points, |x| calibrated_test(field, &phi, x))?;
            let satisfied = tests.iter().filter(|t| t.satisfied).count();
            let violations = tests.iter().filter(|t| !t.inequality_holds).count();
            let rows: Vec<Vec<String>> = points
                .iter()
                .zip(&tests)
                .map(|(x, t)| {
                    let mut row = point_cells(x);
                    row.extend([cell(t.lhs), cell(t.rhs), t.satisfied.to_string()]);
                    row
                })
                .collect();
            let csv = csv_table(&table_header(&coords, &["lhs", "rhs", "satisfied"]), &rows);
            let body = CalibratedOutput {
                header: header("field calibrated-test"),
                phi: phi.b,
                samples: points.len(),
                satisfied,
                all_satisfied: satisfied == points.len(),
                inequality_violations: violations,
                max_abs_difference: tests
                    .iter()
                    .map(|t| (t.lhs - t.rhs).abs())
                    .fold(0.0, f64::max),
                min_gap: tests
                    .iter()
                    .map(|t| t.rhs - t.lhs)
                    .fold(f64::INFINITY, f64::min),
                passed: violations == 0,
            };
            Ok(Report::new(&body, violations == 0)?.with_csv(csv))
        }
        FieldCommand::Defect { sampling, sign, .. } => {
            let sign = Sign::from_name(sign)?;
            let points = sample_points(&model, sampling.bounds.as_ref(), sampling.samples, seed)?;
            let values = evaluate(&points, |x| defect(field, sign, x))?;
            let rows: Vec<Vec<String>> = points
                .iter()
                .zip(&values)
                .map(|(x, d)| {
                    let mut row = point_cells(x);
                    row.push(cell(*d));
                    row
                })
                .collect();
            let csv = csv_table(&table_header(&coords, &["defect"]), &rows);
            let body = DefectOutput {
                header: header("field defect"),
                sign,
                samples: values.len(),
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(0.0, f64::max),
                mean: values.iter().sum::<f64>() / values.len() as f64,
            };
            Ok(Report::new(&body, true)?.with_csv(csv))
        }
        FieldCommand::Classify { sampling, .. } => {
            let points = sample_points(&model, sampling.bounds.as_ref(), sampling.samples, seed)?;
            let flags = classification_flags(field, &points)?;
            let body = ClassifyOutput {
                header: header("field classify"),
                samples: points.len(),
                killing: flags.killing_defect < KILLING_TOL,
                closed: flags.closed_defect < CLOSED_TOL,
                coclosed: flags.coclosed_defect < COCLOSED_TOL,
                flags,
            };
            Report::new(&body, true)
        }
        FieldCommand::Flux { bounds, order, .. } => {
            let flux = boundary_flux(field, bounds, *order)?;
            let vol = volume(
                field,
                &QuadratureDomain::ChartBox {
                    bounds: *bounds,
                    orders: BOX_ORDERS,
                },
            )?
            .volume;
            let relative_difference = if flux == 0.0 && vol == 0.0 {
                0.0
            } else {
                ((vol - flux) / flux.abs().max(vol.abs())).abs()
            };
            let stokes_check = matches!(spec, FieldSpec::HalfSpaceVertical);
            let passed = !stokes_check || relative_difference < STOKES_TOL;
            let body = FluxOutput {
                header: header("field flux"),
                bounds: *bounds,
                order: *order,
                flux,
                volume: vol,
                relative_difference,
                stokes_check,
                passed,
            };
            Report::new(&body, passed)
        }
    }
}
