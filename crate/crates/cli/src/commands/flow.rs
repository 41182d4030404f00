use clap::Subcommand;
use rayon::prelude::*;
use serde::Serialize;

use minvol::rng::stream;
use minvol::spaceform::{EmbeddedSpaceForm, Model, Vector};
use minvol::unit_tangent::{
    chart_geodesic_flow, flow_isometry_defect, flow_velocity_check, trajectory, trajectory_csv,
    IsometryReport, UnitTangentPoint,
};

use crate::args::{coefficients, count, finite, positive, Coefficients, ModelArgs, ModelInfo};
use crate::error::{CliError, CliResult};
use crate::report::Report;

pub const VELOCITY_TOL: f64 = 1e-7;
/// Defect below which the flow counts as isometric.
pub const ISOMETRY_TOL: f64 = 1e-10;
/// Agreement required between measured and closed-form stretch factors.
pub const FACTOR_TOL: f64 = 1e-10;

#[derive(Subcommand, Debug)]
pub enum FlowCommand {
    /// Compare `d/dt g_t(p)` with the geodesic spray at `g_t(p)`.
    VelocityCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "0.5", value_parser = finite, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value = "1e-4", value_parser = positive)]
        h: f64,
        #[arg(long, default_value_t = 20, value_parser = count)]
        samples: usize,
    },
    /// Measure how far `dg_t` is from a Sasaki isometry.
    IsometryCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "0.7", value_parser = finite, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 20, value_parser = count)]
        samples: usize,
    },
    /// Sample the orbit of a point of T¹M.
    Trajectory {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "1", value_parser = finite, allow_hyphen_values = true)]
        t_end: f64,
        #[arg(long, default_value_t = 100, value_parser = count)]
        steps: usize,
        /// Base point; drawn from the seed when omitted.
        #[arg(long, value_parser = coefficients, allow_hyphen_values = true, requires = "y")]
        x: Option<Coefficients>,
        /// Unit tangent vector at `x`.
        #[arg(long, value_parser = coefficients, allow_hyphen_values = true, requires = "x")]
        y: Option<Coefficients>,
    },
}

#[derive(Debug, Serialize)]
struct VelocityOutput {
    command: &'static str,
    model: ModelInfo,
    seed: u64,
    t: f64,
    h: f64,
    samples: usize,
    max_residual: f64,
    threshold: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Factors {
    horizontal: f64,
    vertical: f64,
    mixed: f64,
}

#[derive(Debug, Serialize)]
struct IsometryOutput {
    command: &'static str,
    model: ModelInfo,
    seed: u64,
    t: f64,
    samples: usize,
    max_defect: f64,
    isometric: bool,
    measured: Factors,
    closed_form: Factors,
    max_factor_deviation: f64,
    predicted_defect: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct TrajectoryPoint {
    t: f64,
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct TrajectoryOutput {
    command: &'static str,
    model: ModelInfo,
    seed: u64,
    points: Vec<TrajectoryPoint>,
}

fn embedded(model: &Model) -> CliResult<&EmbeddedSpaceForm> {
    model.embedded().ok_or_else(|| {
        CliError::Usage("this check needs the sphere or the hyperbolic quadric".into())
    })
}

fn sample_points(model: &Model, n: usize, seed: u64) -> Vec<UnitTangentPoint> {
    (0..n)
        .map(|i| UnitTangentPoint::sample(model, &mut stream(seed, i as u64)))
        .collect()
}

/// Stretch factors of `dg_t` on `S^m(r)` or `H^m(r)`.
fn closed_form_factors(m: &EmbeddedSpaceForm, t: f64) -> Factors {
    let r = m.radius;
    if m.is_elliptic() {
        let (s, c) = t.sin_cos();
        Factors {
            horizontal: c * c + s * s / (r * r),
            vertical: r * r * s * s + c * c,
            mixed: s * c * (r - 1.0 / r),
        }
    } else {
        let (s, c) = (t.sinh(), t.cosh());
        Factors {
            horizontal: c * c + s * s / (r * r),
            vertical: r * r * s * s + c * c,
            mixed: s * c * (r + 1.0 / r),
        }
    }
}

impl Factors {
    /// Largest entry of `Gram − I` on a basis adapted to the factors.
    fn defect(&self) -> f64 {
        (self.horizontal - 1.0)
            .abs()
            .max((self.vertical - 1.0).abs())
            .max(self.mixed.abs())
    }
}

pub fn run(cmd: &FlowCommand, seed: u64) -> CliResult<Report> {
    match cmd {
        FlowCommand::VelocityCheck {
            model,
            t,
            h,
            samples,
        } => {
            let (model, info) = model.build()?;
            let m = embedded(&model)?;
            let points = sample_points(&model, *samples, seed);
            let residuals = points
                .par_iter()
                .map(|p| flow_velocity_check(m, p, *t, *h))
                .collect::<minvol::Result<Vec<f64>>>()?;
            let max_residual = residuals.into_iter().fold(0.0, f64::max);
            let passed = max_residual < VELOCITY_TOL;
            let body = VelocityOutput {
                command: "flow velocity-check",
                model: info,
                seed,
                t: *t,
                h: *h,
                samples: *samples,
                max_residual,
                threshold: VELOCITY_TOL,
                passed,
            };
            Report::new(&body, passed)
        }
        FlowCommand::IsometryCheck { model, t, samples } => {
            let (model, info) = model.build()?;
            let m = embedded(&model)?;
            let reports = sample_points(&model, *samples, seed)
                .par_iter()
                .map(|p| flow_isometry_defect(m, p, *t))
                .collect::<minvol::Result<Vec<IsometryReport>>>()?;
            let expected = closed_form_factors(m, *t);
            let deviation = |r: &IsometryReport| {
                (r.horizontal_factor - expected.horizontal)
                    .abs()
                    .max((r.vertical_factor - expected.vertical).abs())
                    .max((r.mixed_factor - expected.mixed).abs())
            };
            let max_factor_deviation = reports.iter().map(deviation).fold(0.0, f64::max);
            let worst = reports
                .iter()
                .max_by(|a, b| a.defect.total_cmp(&b.defect))
                .expect("at least one sample");
            let predicted_defect = expected.defect();
            let passed = max_factor_deviation < FACTOR_TOL
                && reports
                    .iter()
                    .all(|r| (r.defect - predicted_defect).abs() < FACTOR_TOL);
            let body = IsometryOutput {
                command: "flow isometry-check",
                model: info,
                seed,
                t: *t,
                samples: *samples,
                max_defect: worst.defect,
                isometric: worst.defect < ISOMETRY_TOL,
                measured: Factors {
                    horizontal: worst.horizontal_factor,
                    vertical: worst.vertical_factor,
                    mixed: worst.mixed_factor,
                },
                closed_form: expected,
                max_factor_deviation,
                predicted_defect,
                passed,
            };
            Report::new(&body, passed)
        }
        FlowCommand::Trajectory {
            model,
            t_end,
            steps,
            x,
            y,
        } => {
            let (model, info) = model.build()?;
            let start = match (x, y) {
                (Some(x), Some(y)) => UnitTangentPoint::new(
                    &model,
                    Vector::from_column_slice(&x.0),
                    Vector::from_column_slice(&y.0),
                )?,
                _ => UnitTangentPoint::sample(&model, &mut stream(seed, 0)),
            };
            let points = match model.embedded() {
                Some(m) => trajectory(m, &start, *t_end, *steps)?,
                None => chart_trajectory(&model, &start, *t_end, *steps)?,
            };
            let csv = trajectory_csv(&points);
            let body = TrajectoryOutput {
                command: "flow trajectory",
                model: info,
                seed,
                points: points
                    .into_iter()
                    .map(|(t, p)| TrajectoryPoint {
                        t,
                        x: p.x.iter().copied().collect(),
                        y: p.y.iter().copied().collect(),
                    })
                    .collect(),
            };
            Ok(Report::new(&body, true)?.with_csv(csv))
        }
    }
}

/// Orbit on a chart model, integrating step by step from the previous sample.
fn chart_trajectory(
    model: &Model,
    start: &UnitTangentPoint,
    t_end: f64,
    steps: usize,
) -> CliResult<Vec<(f64, UnitTangentPoint)>> {
    let dt = t_end / steps as f64;
    let mut out = vec![(0.0, start.clone())];
    for k in 1..=steps {
        let next = chart_geodesic_flow(model, &out[k - 1].1, dt)?;
        out.push((dt * k as f64, next));
    }
    Ok(out)
}
