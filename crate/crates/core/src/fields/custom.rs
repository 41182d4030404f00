//! Fields given by coordinate expressions on chart models.

use super::{normalize_factor, UnitVectorField};
use crate::expr::Expr;
use crate::spaceform::{Geometry, Model, Vector};
use crate::{Error, Result};

/// `Y/‖Y‖_g` for a coordinate field `Y` given by three expressions in
/// `x1, x2, t`. The differential is taken by central differences.
#[derive(Debug, Clone)]
pub struct ExpressionField {
    model: Model,
    components: [Expr; 3],
}

impl ExpressionField {
    pub fn new(model: &Model, components: [Expr; 3]) -> Result<Self> {
        if model.embedded().is_some() {
            return Err(Error::Unsupported(format!(
                "expression fields need a chart model, not `{}`",
                model.name()
            )));
        }
        Ok(ExpressionField {
            model: model.clone(),
            components,
        })
    }

    pub fn components(&self) -> &[Expr; 3] {
        &self.components
    }

    fn raw(&self, x: &Vector) -> Result<Vector> {
        let p = [x[0], x[1], x[2]];
        let y = Vector::from_iterator(3, self.components.iter().map(|e| e.eval(p)));
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "field expression is not finite at {p:?}"
            )));
        }
        Ok(y)
    }
}

impl UnitVectorField for ExpressionField {
    fn model(&self) -> &Model {
        &self.model
    }

    fn name(&self) -> &str {
        "custom"
    }

    fn value(&self, x: &Vector) -> Result<Vector> {
        self.model.check_point(x)?;
        let y = self.raw(x)?;
        let n = normalize_factor(&self.model, x, &y)?;
        Ok(y / n)
    }
}
