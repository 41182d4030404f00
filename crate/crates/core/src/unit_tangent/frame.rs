use nalgebra::SMatrix;

use super::{horizontal_lift, sasaki_inner, vertical_lift, DoubleTangentVector, UnitTangentPoint};
use crate::spaceform::{Geometry, Vector};
use crate::{Error, Result};

/// A seed axis whose tangential part, after removing `y`, is shorter than
/// this is treated as collinear with `y`.
pub const DEGENERATE_TOL: f64 = 1e-8;

/// Sasaki-orthonormal frame `e₀ … e₄` at a point of `T¹M` with `e₀` the
/// spray, `e₁, e₂` horizontal and `e₃ = Be₁`, `e₄ = Be₂`.
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    pub base: UnitTangentPoint,
    /// The oriented orthonormal basis `(y, f₁, f₂)` of `T_x M`.
    pub tangent: [Vector; 3],
    pub e: [DoubleTangentVector; 5],
}

/// Removes the components of `v` along the orthonormal vectors `basis`.
fn orthogonalize<G: Geometry + ?Sized>(
    geom: &G,
    x: &Vector,
    v: &Vector,
    basis: &[&Vector],
) -> Vector {
    let mut out = geom.project_tangent(x, v);
    for e in basis {
        out -= *e * geom.inner(x, &out, e);
    }
    out
}

fn axis(n: usize, k: usize) -> Vector {
    Vector::from_fn(n, |i, _| if i == k { 1.0 } else { 0.0 })
}

/// The coordinate axis whose tangential part is least aligned with `basis`.
fn best_axis<G: Geometry + ?Sized>(geom: &G, x: &Vector, basis: &[&Vector]) -> Vector {
    (0..geom.coord_dim())
        .map(|k| orthogonalize(geom, x, &axis(geom.coord_dim(), k), basis))
        .max_by(|a, b| geom.norm(x, a).total_cmp(&geom.norm(x, b)))
        .expect("at least one axis")
}

/// Adapted frame from a seed axis; falls back to the coordinate axis least
/// aligned with `y` when the seed is degenerate.
pub fn adapted_frame<G: Geometry + ?Sized>(
    geom: &G,
    p: &UnitTangentPoint,
    seed_axis: &Vector,
) -> Result<AdaptedFrame> {
    let tangent = oriented_completion(geom, &p.x, &p.y, seed_axis, None)?;
    frame_from_tangent(geom, p, tangent)
}

/// Completes a unit vector `y` at `x` to an oriented orthonormal basis
/// `(y, f₁, f₂)` of `T_x M`, with `f₁` from the seed axis or, if that is
/// collinear with `y`, the fallback axis.
pub fn oriented_completion<G: Geometry + ?Sized>(
    geom: &G,
    x: &Vector,
    y: &Vector,
    seed_axis: &Vector,
    fallback_axis: Option<&Vector>,
) -> Result<[Vector; 3]> {
    if geom.dim() != 3 {
        return Err(Error::Unsupported(format!(
            "adapted frames need a 3-dimensional base, got dimension {}",
            geom.dim()
        )));
    }
    let default_fallback;
    let fallback = match fallback_axis {
        Some(f) => f,
        None => {
            default_fallback = best_axis(geom, x, &[y]);
            &default_fallback
        }
    };
    let f1 = [seed_axis, fallback]
        .into_iter()
        .map(|s| orthogonalize(geom, x, s, &[y]))
        .find(|f| geom.norm(x, f) > DEGENERATE_TOL)
        .ok_or(Error::DegenerateFrame)?;
    let f1 = &f1 / geom.norm(x, &f1);
    let f2 = best_axis(geom, x, &[y, &f1]);
    let mut f2 = &f2 / geom.norm(x, &f2);
    if geom.orientation(x, &[y.clone(), f1.clone(), f2.clone()]) < 0.0 {
        f2 = -f2;
    }
    Ok([y.clone(), f1, f2])
}

pub fn adapted_frame_with_fallback<G: Geometry + ?Sized>(
    geom: &G,
    p: &UnitTangentPoint,
    seed_axis: &Vector,
    fallback_axis: &Vector,
) -> Result<AdaptedFrame> {
    let tangent = oriented_completion(geom, &p.x, &p.y, seed_axis, Some(fallback_axis))?;
    frame_from_tangent(geom, p, tangent)
}

fn frame_from_tangent<G: Geometry + ?Sized>(
    geom: &G,
    p: &UnitTangentPoint,
    tangent: [Vector; 3],
) -> Result<AdaptedFrame> {
    let [y, f1, f2] = &tangent;
    let e0 = horizontal_lift(geom, p, y)?;
    let e1 = horizontal_lift(geom, p, f1)?;
    let e2 = horizontal_lift(geom, p, f2)?;
    let e3 = vertical_lift(p, f1);
    let e4 = vertical_lift(p, f2);
    Ok(AdaptedFrame {
        base: p.clone(),
        tangent,
        e: [e0, e1, e2, e3, e4],
    })
}

impl AdaptedFrame {
    /// Components of `w` in the frame.
    pub fn coordinates<G: Geometry + ?Sized>(
        &self,
        geom: &G,
        w: &DoubleTangentVector,
    ) -> Result<[f64; 5]> {
        let mut out = [0.0; 5];
        for (c, e) in out.iter_mut().zip(&self.e) {
            *c = sasaki_inner(geom, w, e)?;
        }
        Ok(out)
    }

    pub fn gram<G: Geometry + ?Sized>(&self, geom: &G) -> Result<SMatrix<f64, 5, 5>> {
        let mut g = SMatrix::<f64, 5, 5>::zeros();
        for i in 0..5 {
            for j in 0..5 {
                g[(i, j)] = sasaki_inner(geom, &self.e[i], &self.e[j])?;
            }
        }
        Ok(g)
    }

    /// The frame with `e₁ ↔ e₂` and `e₃ ↔ e₄` exchanged. It has the opposite
    /// orientation.
    pub fn swapped(&self) -> AdaptedFrame {
        let [e0, e1, e2, e3, e4] = self.e.clone();
        let [y, f1, f2] = self.tangent.clone();
        AdaptedFrame {
            base: self.base.clone(),
            tangent: [y, f2, f1],
            e: [e0, e2, e1, e4, e3],
        }
    }
}
