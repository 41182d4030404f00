//! Named fields.

use serde::{Deserialize, Serialize};

use super::{
    ComplexStructure, ExpressionField, HalfSpaceHorizontal, HalfSpaceVertical, HopfField, JPreset,
    ParallelFlat, UnitVectorField,
};
use crate::expr::parse_field_file;
use crate::spaceform::Model;
use crate::Result;

pub const FIELD_NAMES: [&str; 5] = [
    "hopf",
    "half-space-vertical",
    "half-space-horizontal",
    "parallel-flat",
    "custom",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "kebab-case")]
pub enum FieldSpec {
    Hopf {
        preset: JPreset,
    },
    HalfSpaceVertical,
    HalfSpaceHorizontal {
        axis: usize,
    },
    ParallelFlat {
        direction: [f64; 3],
    },
    /// Contents of a field file.
    Custom {
        source: String,
    },
}

/// Builds a field on `model`, failing when the two do not match.
pub fn build_field(spec: &FieldSpec, model: &Model) -> Result<Box<dyn UnitVectorField>> {
    Ok(match spec {
        FieldSpec::Hopf { preset } => {
            Box::new(HopfField::new(model, ComplexStructure::preset(*preset))?)
        }
        FieldSpec::HalfSpaceVertical => Box::new(HalfSpaceVertical::new(model)?),
        FieldSpec::HalfSpaceHorizontal { axis } => {
            Box::new(HalfSpaceHorizontal::new(model, *axis)?)
        }
        FieldSpec::ParallelFlat { direction } => Box::new(ParallelFlat::new(model, *direction)?),
        FieldSpec::Custom { source } => {
            Box::new(ExpressionField::new(model, parse_field_file(source)?)?)
        }
    })
}
