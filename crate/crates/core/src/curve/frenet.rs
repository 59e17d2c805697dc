use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::jet::{CurveJet, Vec3};

use super::SpaceCurve;

/// Curvature floor below which frames are refused.
pub const KAPPA_FLOOR: f64 = 1e-9;

/// Frenet apparatus at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetFrame {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub curvature: f64,
    pub torsion: f64,
}

impl FrenetFrame {
    /// Frame from position derivatives. Uses the parametrization-invariant
    /// formulas, which reduce to `κ = |α''|` and `τ = ⟨α'×α'', α'''⟩/κ²` for
    /// unit-speed curves.
    pub fn from_jet(jet: &CurveJet, s: f64, floor: f64) -> Result<Self> {
        let speed = jet.d1.norm();
        if !(speed > 0.0) {
            return Err(GeomError::SingularSpeed { s, speed });
        }
        let cross = jet.d1.cross(&jet.d2);
        let cross_norm = cross.norm();
        let curvature = cross_norm / (speed * speed * speed);
        if !(curvature > floor) {
            return Err(GeomError::VanishingCurvature { s, kappa: curvature, floor });
        }
        let tangent = jet.d1 / speed;
        let binormal = cross / cross_norm;
        let normal = binormal.cross(&tangent);
        let torsion = cross.dot(&jet.d3) / (cross_norm * cross_norm);
        Ok(FrenetFrame { tangent, normal, binormal, curvature, torsion })
    }
}

/// Frenet frame of `curve` at `s`, refusing frames with `κ ≤ floor`.
pub fn frenet_apparatus(curve: &SpaceCurve, s: f64, floor: f64) -> Result<FrenetFrame> {
    FrenetFrame::from_jet(&curve.jet_at(s)?, s, floor)
}

/// `|α(s) × α'(s)|`.
pub fn cross_magnitude(curve: &SpaceCurve, s: f64) -> Result<f64> {
    let p = curve.evaluate(s)?;
    let v = match curve.mode() {
        super::DerivativeMode::Analytic => curve.derivative(s, 1)?,
        super::DerivativeMode::FiniteDifference(_) => curve.velocity(s)?,
    };
    Ok(p.cross(&v).norm())
}
