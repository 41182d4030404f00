use super::{adapted_frame, AdaptedFrame, DoubleTangentVector, UnitTangentPoint};
use crate::spaceform::{Geometry, Vector};
use crate::{Error, Result};

/// Charts are only evaluated on `‖t‖ ≤ CHART_RADIUS`.
pub const CHART_RADIUS: f64 = 0.1;

/// The chart `t ↦ Π(x + Σ tₐuₐ, y + Σ tₐvₐ)` of `T¹M` around a point, where
/// `(uₐ, vₐ)` is the adapted frame there and `Π` returns to `T¹M`.
#[derive(Debug, Clone)]
pub struct RetractionChart {
    pub frame: AdaptedFrame,
    pub seed_axis: Vector,
}

impl RetractionChart {
    pub fn new<G: Geometry + ?Sized>(
        geom: &G,
        p: &UnitTangentPoint,
        seed_axis: &Vector,
    ) -> Result<Self> {
        Ok(RetractionChart {
            frame: adapted_frame(geom, p, seed_axis)?,
            seed_axis: seed_axis.clone(),
        })
    }

    pub fn base(&self) -> &UnitTangentPoint {
        &self.frame.base
    }

    pub fn eval<G: Geometry + ?Sized>(&self, geom: &G, t: &[f64; 5]) -> Result<UnitTangentPoint> {
        let norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > CHART_RADIUS {
            return Err(Error::ChartRadius {
                norm,
                limit: CHART_RADIUS,
            });
        }
        let base = self.base();
        let mut x = base.x.clone();
        let mut y = base.y.clone();
        for (ta, e) in t.iter().zip(&self.frame.e) {
            x += &e.u * *ta;
            y += &e.v * *ta;
        }
        let x = geom.project_point(&x)?;
        let y = geom.project_tangent(&x, &y);
        let len = geom.norm(&x, &y);
        if !(len > 0.0) {
            return Err(Error::DegenerateFrame);
        }
        Ok(UnitTangentPoint { x, y: y / len })
    }

    /// `dφ_t(∂ₐ)` by central differences with step `k`.
    pub fn differential<G: Geometry + ?Sized>(
        &self,
        geom: &G,
        t: &[f64; 5],
        k: f64,
    ) -> Result<(UnitTangentPoint, [DoubleTangentVector; 5])> {
        let at = self.eval(geom, t)?;
        let mut cols = Vec::with_capacity(5);
        for a in 0..5 {
            let mut tp = *t;
            let mut tm = *t;
            tp[a] += k;
            tm[a] -= k;
            let p = self.eval(geom, &tp)?;
            let m = self.eval(geom, &tm)?;
            cols.push(DoubleTangentVector::new(
                &at,
                (&p.x - &m.x) / (2.0 * k),
                (&p.y - &m.y) / (2.0 * k),
            ));
        }
        let cols: [DoubleTangentVector; 5] = cols.try_into().expect("five columns");
        Ok((at, cols))
    }

    /// The adapted frame at `φ(t)`, built from the same seed axis.
    pub fn frame_at<G: Geometry + ?Sized>(
        &self,
        geom: &G,
        p: &UnitTangentPoint,
    ) -> Result<AdaptedFrame> {
        adapted_frame(geom, p, &self.seed_axis)
    }
}
