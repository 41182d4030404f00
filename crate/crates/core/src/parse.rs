//! Parsers for the short textual specs accepted on the command line.

use crate::diffsys::{phi_minus, phi_plus, phi_t, InvariantThreeForm};
use crate::spaceform::ChartBox;
use crate::{Error, Result};

const MAX_ITEMS: usize = 64;

fn parse_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// A finite real number, written as a decimal or a fraction `p/q`.
pub fn parse_number(src: &str) -> Result<f64> {
    let s = src.trim();
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| parse_error(0, format!("malformed number `{s}`")))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| parse_error(0, format!("malformed number `{s}`")))?;
            if q == 0.0 {
                return Err(parse_error(0, format!("zero denominator in `{s}`")));
            }
            p / q
        }
        None => s
            .parse()
            .map_err(|_| parse_error(0, format!("malformed number `{s}`")))?,
    };
    if !value.is_finite() {
        return Err(parse_error(0, format!("`{s}` is not finite")));
    }
    Ok(value)
}

/// Comma-separated numbers; `expected` fixes the count when given.
pub fn parse_coefficients(src: &str, expected: Option<usize>) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for item in src.split(',') {
        if out.len() == MAX_ITEMS {
            return Err(parse_error(
                offset,
                format!("more than {MAX_ITEMS} entries"),
            ));
        }
        let v = parse_number(item).map_err(|e| match e {
            Error::Parse { message, .. } => parse_error(offset, message),
            other => other,
        })?;
        out.push(v);
        offset += item.len() + 1;
    }
    if let Some(n) = expected {
        if out.len() != n {
            return Err(parse_error(
                src.len(),
                format!("expected {n} entries, found {}", out.len()),
            ));
        }
    }
    Ok(out)
}

/// `x1min,x1max,x2min,x2max,tmin,tmax`.
pub fn parse_box(src: &str) -> Result<ChartBox> {
    let v = parse_coefficients(src, Some(6))?;
    ChartBox::new([v[0], v[2], v[4]], [v[1], v[3], v[5]]).map_err(|e| parse_error(0, e.to_string()))
}

/// An invariant 3-form `θ∧(b₀α₀ + b₁α₁ + b₂α₂)`:
/// `plus`, `minus`, `zero`, `alpha0`, `alpha1`, `minus-alpha1`, `t=<angle>`
/// or `b=<b0>,<b1>,<b2>`.
pub fn parse_phi_spec(src: &str) -> Result<InvariantThreeForm<f64>> {
    let s = src.trim();
    match s {
        "plus" => return Ok(phi_plus()),
        "minus" => return Ok(phi_minus()),
        "zero" => return Ok(InvariantThreeForm::zero()),
        "alpha0" => return Ok(InvariantThreeForm::new([1.0, 0.0, 0.0])),
        "alpha1" => return Ok(InvariantThreeForm::new([0.0, 1.0, 0.0])),
        "minus-alpha1" => return Ok(InvariantThreeForm::new([0.0, -1.0, 0.0])),
        _ => {}
    }
    if let Some(t) = s.strip_prefix("t=") {
        return Ok(phi_t(
            parse_number(t).map_err(|_| parse_error(2, format!("malformed angle `{t}`")))?,
        ));
    }
    if let Some(b) = s.strip_prefix("b=") {
        let v = parse_coefficients(b, Some(3)).map_err(|e| match e {
            Error::Parse { offset, message } => parse_error(offset + 2, message),
            other => other,
        })?;
        return Ok(InvariantThreeForm::new([v[0], v[1], v[2]]));
    }
    Err(parse_error(
        0,
        format!("unknown form `{s}` (expected plus, minus, zero, alpha0, alpha1, minus-alpha1, t=…, b=…)"),
    ))
}
