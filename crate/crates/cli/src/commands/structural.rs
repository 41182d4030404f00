use clap::Args;
use serde::Serialize;

use minvol::diffsys::{
    structural_residual_constant_curvature, structural_residual_general, Equation,
};
use minvol::spaceform::Geometry;

use crate::args::{count, positive, ModelArgs, ModelInfo};
use crate::error::{CliError, CliResult};
use crate::report::{csv_table, optional_cell, Report};

pub const CONSTANT_CURVATURE_THRESHOLD: f64 = 5e-6;
pub const GENERAL_THRESHOLD: f64 = 1e-4;

#[derive(Args, Debug)]
pub struct StructuralArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Outer finite-difference step.
    #[arg(long, default_value = "1e-3", value_parser = positive)]
    pub h: f64,
    /// Number of sampled points of T¹M.
    #[arg(long, default_value_t = 50, value_parser = count)]
    pub samples: usize,
    /// Pass threshold; defaults to 5e-6 in constant curvature and 1e-4 otherwise.
    #[arg(long, value_parser = positive)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Serialize)]
struct EquationResult {
    equation: &'static str,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergence_order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'static str>,
}

#[derive(Debug, Serialize)]
struct StructuralReport {
    command: &'static str,
    model: ModelInfo,
    seed: u64,
    h: f64,
    samples: usize,
    regime: &'static str,
    results: Vec<EquationResult>,
    passed: bool,
}

pub fn run(args: &StructuralArgs, seed: u64) -> CliResult<Report> {
    let (model, info) = args.model.build()?;
    if model.dim() != 3 {
        return Err(CliError::Usage(
            "structure equations need a 3-dimensional model".into(),
        ));
    }
    let constant = model.constant_curvature().is_some();
    let threshold = args.threshold.unwrap_or(if constant {
        CONSTANT_CURVATURE_THRESHOLD
    } else {
        GENERAL_THRESHOLD
    });
    let mut results = Vec::new();
    for eq in Equation::CONSTANT_CURVATURE {
        if !constant && !Equation::GENERAL.contains(&eq) {
            if !eq.holds_for_general_metrics() {
                results.push(EquationResult {
                    equation: eq.id(),
                    status: Status::Skipped,
                    max_residual: None,
                    threshold: None,
                    convergence_order: None,
                    reason: Some("γ out of scope"),
                });
            }
            continue;
        }
        let rep = if constant {
            structural_residual_constant_curvature(&model, eq, args.samples, args.h, seed)?
        } else {
            structural_residual_general(&model, eq, args.samples, args.h, seed)?
        };
        results.push(EquationResult {
            equation: eq.id(),
            status: if rep.max_residual < threshold {
                Status::Pass
            } else {
                Status::Fail
            },
            max_residual: Some(rep.max_residual),
            threshold: Some(threshold),
            convergence_order: rep.convergence_order,
            reason: None,
        });
    }
    let passed = results.iter().all(|r| !matches!(r.status, Status::Fail));
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.equation.to_string(),
                r.status.as_str().to_string(),
                optional_cell(r.max_residual),
                optional_cell(r.threshold),
                optional_cell(r.convergence_order),
            ]
        })
        .collect();
    let csv = csv_table(
        &[
            "equation",
            "status",
            "max_residual",
            "threshold",
            "convergence_order",
        ],
        &rows,
    );
    let body = StructuralReport {
        command: "verify-structural",
        model: info,
        seed,
        h: args.h,
        samples: args.samples,
        regime: if constant {
            "constant-curvature"
        } else {
            "general"
        },
        results,
        passed,
    };
    Ok(Report::new(&body, passed)?.with_csv(csv))
}
