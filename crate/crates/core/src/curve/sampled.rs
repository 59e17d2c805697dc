use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::jet::Vec3;

use super::{CurveEval, CurveKind, DerivativeMode, DerivativeSettings, Domain, SpaceCurve};

/// Piecewise cubic Hermite interpolant through parameter-tagged nodes.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    params: Vec<f64>,
    points: Vec<Vec3>,
    tangents: Vec<Vec3>,
}

/// Minimum node count; the tangent estimator uses five-point stencils.
pub const MIN_NODES: usize = 5;

impl SampledCurve {
    /// Builds the interpolant, estimating node derivatives with five-point
    /// Lagrange differentiation (fourth order on smooth data).
    pub fn from_points(params: Vec<f64>, points: Vec<Vec3>) -> Result<Self> {
        validate_nodes(&params, points.len())?;
        let tangents = estimate_tangents(&params, &points);
        Ok(SampledCurve { params, points, tangents })
    }

    pub fn from_points_and_tangents(params: Vec<f64>, points: Vec<Vec3>, tangents: Vec<Vec3>) -> Result<Self> {
        validate_nodes(&params, points.len())?;
        if tangents.len() != points.len() {
            return Err(GeomError::InvalidSamples(format!("{} tangents for {} nodes", tangents.len(), points.len())));
        }
        Ok(SampledCurve { params, points, tangents })
    }

    /// Samples `curve` at `n` uniform parameters of its domain, taking node
    /// derivatives from the curve itself where they are exact.
    pub fn sample(curve: &SpaceCurve, n: usize) -> Result<Self> {
        let params = curve.domain().samples(n)?;
        let points = params.iter().map(|&s| curve.evaluate(s)).collect::<Result<Vec<_>>>()?;
        if curve.evaluator().velocity(params[0]).is_some() {
            let tangents = params.iter().map(|&s| curve.velocity(s)).collect::<Result<Vec<_>>>()?;
            Self::from_points_and_tangents(params, points, tangents)
        } else {
            Self::from_points(params, points)
        }
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn domain(&self) -> Domain {
        Domain { min: self.params[0], max: *self.params.last().unwrap() }
    }

    /// Wraps the interpolant as a sampled [`SpaceCurve`] differentiated with
    /// the default finite-difference settings.
    pub fn into_curve(self) -> Result<SpaceCurve> {
        let domain = self.domain();
        let settings = DerivativeSettings::default_for(&domain);
        SpaceCurve::new(Arc::new(self), domain, CurveKind::Sampled, DerivativeMode::FiniteDifference(settings))
    }

    fn segment(&self, s: f64) -> usize {
        let i = self.params.partition_point(|&p| p <= s);
        i.saturating_sub(1).min(self.params.len() - 2)
    }

    fn hermite(&self, s: f64) -> (Vec3, Vec3) {
        let i = self.segment(s);
        let (s0, s1) = (self.params[i], self.params[i + 1]);
        let dt = s1 - s0;
        let x = (s - s0) / dt;
        let (x2, x3) = (x * x, x * x * x);
        let (p0, p1) = (self.points[i], self.points[i + 1]);
        let (m0, m1) = (self.tangents[i] * dt, self.tangents[i + 1] * dt);
        let pos =
            p0 * (2.0 * x3 - 3.0 * x2 + 1.0) + m0 * (x3 - 2.0 * x2 + x) + p1 * (-2.0 * x3 + 3.0 * x2) + m1 * (x3 - x2);
        let vel = (p0 * (6.0 * x2 - 6.0 * x)
            + m0 * (3.0 * x2 - 4.0 * x + 1.0)
            + p1 * (-6.0 * x2 + 6.0 * x)
            + m1 * (3.0 * x2 - 2.0 * x))
            / dt;
        (pos, vel)
    }
}

impl CurveEval for SampledCurve {
    fn position(&self, s: f64) -> Vec3 {
        self.hermite(s).0
    }

    fn velocity(&self, s: f64) -> Option<Vec3> {
        Some(self.hermite(s).1)
    }

    fn nodes(&self) -> Option<&[f64]> {
        Some(&self.params)
    }
}

fn validate_nodes(params: &[f64], n_points: usize) -> Result<()> {
    if params.len() != n_points {
        return Err(GeomError::InvalidSamples(format!("{} parameters for {} points", params.len(), n_points)));
    }
    if params.len() < MIN_NODES {
        return Err(GeomError::InvalidSamples(format!("need at least {MIN_NODES} nodes, got {}", params.len())));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(GeomError::InvalidSamples("non-finite parameter".into()));
    }
    if let Some(w) = params.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(GeomError::InvalidSamples(format!(
            "parameters must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

fn estimate_tangents(params: &[f64], points: &[Vec3]) -> Vec<Vec3> {
    let n = params.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(2).min(n - MIN_NODES);
            let window = lo..lo + MIN_NODES;
            lagrange_derivative_weights(&params[window.clone()], params[i])
                .iter()
                .zip(&points[window])
                .fold(Vec3::zeros(), |acc, (w, p)| acc + p * *w)
        })
        .collect()
}

/// Weights `w_j = L_j'(x)` of the Lagrange basis through `nodes`.
pub(crate) fn lagrange_derivative_weights(nodes: &[f64], x: f64) -> Vec<f64> {
    let n = nodes.len();
    (0..n)
        .map(|j| {
            (0..n)
                .filter(|&m| m != j)
                .map(|m| {
                    let mut term = 1.0 / (nodes[j] - nodes[m]);
                    for k in (0..n).filter(|&k| k != j && k != m) {
                        term *= (x - nodes[k]) / (nodes[j] - nodes[k]);
                    }
                    term
                })
                .sum()
        })
        .collect()
}
