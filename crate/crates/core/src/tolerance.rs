//! Default numerical thresholds.
//!
//! Analytic-mode values apply to curves with exact (jet) derivatives;
//! finite-difference values to sampled curves and curves differentiated with
//! stencils.

use serde::{Deserialize, Serialize};

use crate::curve::DerivativeMode;

/// Default number of uniform samples for classification and verification.
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative spread `(max - min)/|mean|` accepted as constant; also the
    /// relative bound on the `⟨α,n⟩` and `⟨α,t⟩` residuals.
    pub constancy: f64,
    /// Frames are refused at or below this curvature.
    pub kappa_floor: f64,
    /// Standard deviation of `⟨n,U⟩` accepted for a slant helix.
    pub slant: f64,
    /// Minimum eigenvalue gap for a unique slant axis.
    pub axis_gap: f64,
    /// `max |τ|` below which a curve is planar.
    pub planar: f64,
    /// `max |κ_g|` accepted for a geodesic.
    pub geodesic_curvature: f64,
    /// Relative variation of the Clairaut invariant accepted for a geodesic.
    pub clairaut: f64,
    /// `1 - min |⟨n,N⟩|` accepted for a geodesic.
    pub alignment: f64,
    /// Maximum distance of developed points from their fitted line.
    pub straightness: f64,
    /// Relative distance `|u·y(t) - p|/u` accepted as lying on a cone.
    pub on_cone: f64,
}

impl Tolerances {
    pub const fn analytic() -> Self {
        Tolerances {
            constancy: 1e-6,
            kappa_floor: crate::curve::KAPPA_FLOOR,
            slant: 1e-5,
            axis_gap: 1e-8,
            planar: 1e-6,
            geodesic_curvature: 1e-4,
            clairaut: 1e-5,
            alignment: 1e-5,
            straightness: 1e-6,
            on_cone: 1e-6,
        }
    }

    pub const fn finite_difference() -> Self {
        Tolerances {
            constancy: 1e-4,
            kappa_floor: 1e-6,
            slant: 1e-3,
            axis_gap: 1e-8,
            planar: 1e-3,
            geodesic_curvature: 1e-3,
            clairaut: 1e-4,
            alignment: 1e-3,
            straightness: 1e-5,
            on_cone: 1e-5,
        }
    }

    pub fn for_mode(mode: DerivativeMode) -> Self {
        if mode.is_analytic() {
            Self::analytic()
        } else {
            Self::finite_difference()
        }
    }

    /// Every threshold must be positive and finite.
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("constancy", self.constancy),
            ("kappa_floor", self.kappa_floor),
            ("slant", self.slant),
            ("axis_gap", self.axis_gap),
            ("planar", self.planar),
            ("geodesic_curvature", self.geodesic_curvature),
            ("clairaut", self.clairaut),
            ("alignment", self.alignment),
            ("straightness", self.straightness),
            ("on_cone", self.on_cone),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("tolerance `{name}` must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::analytic()
    }
}

/// Sampling and thresholds used by the analysis routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analysis {
    pub samples: usize,
    pub tol: Tolerances,
}

impl Analysis {
    pub fn for_mode(mode: DerivativeMode) -> Self {
        Analysis { samples: DEFAULT_SAMPLES, tol: Tolerances::for_mode(mode) }
    }
}
