use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use minvol::fields::{build_field, FieldSpec, JPreset, UnitVectorField};
use minvol::parse::{parse_box, parse_coefficients, parse_number};
use minvol::rng::stream;
use minvol::spaceform::{ChartBox, ConformalTest, Geometry, Model, ModelParams, Vector};

use crate::error::{CliError, CliResult};

pub fn positive(src: &str) -> Result<f64, String> {
    let v = parse_number(src).map_err(|e| e.to_string())?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

pub fn count(src: &str) -> Result<usize, String> {
    match src.trim().parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(_) => Err(format!("malformed count `{}`", src.trim())),
    }
}

pub fn finite(src: &str) -> Result<f64, String> {
    parse_number(src).map_err(|e| e.to_string())
}

/// A comma-separated list of numbers given as one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients(pub Vec<f64>);

pub fn coefficients(src: &str) -> Result<Coefficients, String> {
    parse_coefficients(src, None)
        .map(Coefficients)
        .map_err(|e| e.to_string())
}

pub fn chart_box(src: &str) -> Result<ChartBox, String> {
    parse_box(src).map_err(|e| e.to_string())
}

pub fn orders(src: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = src.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three orders, found {}", parts.len()));
    }
    let mut out = [0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse()
            .map_err(|_| format!("malformed order `{}`", p.trim()))?;
        if *o == 0 {
            return Err("orders must be positive".into());
        }
    }
    Ok(out)
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// sphere, hyperbolic-quadric (alias hyperbolic), flat, half-space or conformal-test.
    #[arg(long, default_value = "sphere")]
    pub model: String,
    /// Radius of the sphere or hyperbolic quadric.
    #[arg(long, default_value = "1", value_parser = positive)]
    pub radius: f64,
    /// Scale of the half-space metric `g = (dx₁² + dx₂² + dt²)/(a t²)`.
    #[arg(long, default_value = "1", value_parser = positive)]
    pub a: f64,
    /// Amplitude `A` of the conformal-test metric `e^{2A x₁}δ`.
    #[arg(long, default_value_t = ConformalTest::DEFAULT_AMPLITUDE, value_parser = finite, allow_hyphen_values = true)]
    pub amplitude: f64,
}

/// The model and the parameters that apply to it.
#[derive(Debug, Clone, Serialize)]
pub struct ModelInfo {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<f64>,
}

impl ModelArgs {
    pub fn build(&self) -> CliResult<(Model, ModelInfo)> {
        let model = Model::from_name(
            &self.model,
            ModelParams {
                radius: self.radius,
                a: self.a,
                amplitude: self.amplitude,
                ..ModelParams::default()
            },
        )?;
        let info = ModelInfo {
            name: model.name(),
            radius: model.embedded().map(|_| self.radius),
            a: matches!(model, Model::HalfSpace(_)).then_some(self.a),
            amplitude: matches!(model, Model::Conformal(_)).then_some(self.amplitude),
            curvature: model.constant_curvature(),
        };
        Ok((model, info))
    }
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// hopf, half-space-vertical, half-space-horizontal, parallel-flat or custom.
    #[arg(long)]
    pub field: String,
    /// Complex structure of the Hopf field: i, j or k.
    #[arg(long, default_value = "i")]
    pub preset: String,
    /// Horizontal axis (0 or 1) of the half-space-horizontal field.
    #[arg(long, default_value_t = 0)]
    pub axis: usize,
    /// Direction of the parallel-flat field.
    #[arg(long, default_value = "1,0,0", value_parser = coefficients, allow_hyphen_values = true)]
    pub direction: Coefficients,
    /// Field file for the custom field.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl FieldArgs {
    pub fn spec(&self) -> CliResult<FieldSpec> {
        Ok(match self.field.as_str() {
            "hopf" => FieldSpec::Hopf {
                preset: JPreset::from_name(&self.preset)?,
            },
            "half-space-vertical" => FieldSpec::HalfSpaceVertical,
            "half-space-horizontal" => FieldSpec::HalfSpaceHorizontal { axis: self.axis },
            "parallel-flat" => {
                let direction: [f64; 3] = self.direction.0.as_slice().try_into().map_err(|_| {
                    CliError::Usage(format!(
                        "--direction needs three components, got {}",
                        self.direction.0.len()
                    ))
                })?;
                FieldSpec::ParallelFlat { direction }
            }
            "custom" => {
                let path = self
                    .file
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("the custom field needs --file".into()))?;
                let source = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                FieldSpec::Custom { source }
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown field `{other}` (expected one of {})",
                    minvol::fields::FIELD_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn build(&self, model: &Model) -> CliResult<(Box<dyn UnitVectorField>, FieldSpec)> {
        let spec = self.spec()?;
        Ok((build_field(&spec, model)?, spec))
    }
}

/// `n` points drawn from `bounds` on a chart model, or from the model's own
/// sampling region.
pub fn sample_points(
    model: &Model,
    bounds: Option<&ChartBox>,
    n: usize,
    seed: u64,
) -> CliResult<Vec<Vector>> {
    if bounds.is_some() && model.embedded().is_some() {
        return Err(CliError::Usage(format!(
            "--box needs a chart model, not `{}`",
            model.name()
        )));
    }
    let mut rng = stream(seed, 0);
    Ok((0..n)
        .map(|_| match bounds {
            Some(b) => Vector::from_column_slice(b.sample(&mut rng).as_slice()),
            None => model.sample_point(&mut rng),
        })
        .collect())
}
