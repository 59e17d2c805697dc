//! Space curves, their derivatives, arc-length reparametrization and the
//! Frenet apparatus.
//!
//! A [`SpaceCurve`] couples an evaluator with a parameter domain and a
//! derivative mode. Closed-form curves written in terms of [`Jet`] get exact
//! (analytic) derivatives; everything else is differentiated with central
//! finite-difference stencils that never reach outside the domain.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::jet::{CurveJet, Jet, Vec3};

pub mod families;
mod frenet;
mod reparam;
mod sampled;

pub use frenet::{cross_magnitude, frenet_apparatus, FrenetFrame, KAPPA_FLOOR};
pub use reparam::reparametrize_arclength;
pub(crate) use sampled::lagrange_derivative_weights;
pub use sampled::SampledCurve;

/// Closed parameter interval `[min, max]`. Unbounded ends are allowed for
/// closed-form periodic curves; sampling requires both ends finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub min: f64,
    pub max: f64,
}

impl Domain {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        // NaN fails the comparison as well.
        if !(min < max) {
            return Err(GeomError::DegenerateDomain { min, max });
        }
        Ok(Domain { min, max })
    }

    pub fn unbounded() -> Self {
        Domain { min: f64::NEG_INFINITY, max: f64::INFINITY }
    }

    pub fn length(&self) -> f64 {
        self.max - self.min
    }

    pub fn is_bounded(&self) -> bool {
        self.min.is_finite() && self.max.is_finite()
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.min && s <= self.max
    }

    pub fn check(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(GeomError::ParameterOutOfDomain { s, min: self.min, max: self.max })
        }
    }

    /// Shrinks both ends by `margin`.
    pub fn shrink(&self, margin: f64) -> Result<Domain> {
        Domain::new(self.min + margin, self.max - margin)
    }

    /// `n` uniformly spaced parameters including both endpoints.
    pub fn samples(&self, n: usize) -> Result<Vec<f64>> {
        if !self.is_bounded() {
            return Err(GeomError::DegenerateDomain { min: self.min, max: self.max });
        }
        if n < 2 {
            return Err(GeomError::InsufficientSamples { needed: 2, got: n });
        }
        let step = self.length() / (n - 1) as f64;
        Ok((0..n).map(|i| if i + 1 == n { self.max } else { self.min + step * i as f64 }).collect())
    }
}

/// Accuracy order of the central-difference stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StencilOrder {
    Second,
    Fourth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeSettings {
    pub step: f64,
    pub scheme: StencilOrder,
}

impl DerivativeSettings {
    /// Fourth-order stencils with `h = 1e-4 * length`.
    pub fn default_for(domain: &Domain) -> Self {
        DerivativeSettings { step: 1e-4 * domain.length(), scheme: StencilOrder::Fourth }
    }

    pub fn validate(&self, domain: &Domain) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(GeomError::InvalidDerivativeSettings(format!("step {} must be positive", self.step)));
        }
        if domain.is_bounded() && self.step > domain.length() / 100.0 {
            return Err(GeomError::InvalidDerivativeSettings(format!(
                "step {} exceeds 1% of the domain length {}",
                self.step,
                domain.length()
            )));
        }
        Ok(())
    }

    /// Farthest offset from `s` touched by the stencil of the given order.
    pub fn reach(&self, order: usize) -> f64 {
        let points = match (self.scheme, order) {
            (_, 0) => 0.0,
            (StencilOrder::Second, 1 | 2) => 1.0,
            (StencilOrder::Second, _) => 2.0,
            (StencilOrder::Fourth, 1 | 2) => 2.0,
            (StencilOrder::Fourth, _) => 3.0,
        };
        points * self.step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference(DerivativeSettings),
}

impl DerivativeMode {
    pub fn is_analytic(&self) -> bool {
        matches!(self, DerivativeMode::Analytic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    ClosedForm,
    Sampled,
}

/// Evaluator behind a [`SpaceCurve`].
pub trait CurveEval: Send + Sync + fmt::Debug {
    fn position(&self, s: f64) -> Vec3;

    /// Exact position and derivatives, when the evaluator can provide them.
    fn jet(&self, _s: f64) -> Option<CurveJet> {
        None
    }

    /// Exact first derivative, when available without a full jet.
    fn velocity(&self, s: f64) -> Option<Vec3> {
        self.jet(s).map(|j| j.d1)
    }

    /// Interpolation nodes of sampled evaluators.
    fn nodes(&self) -> Option<&[f64]> {
        None
    }
}

/// Closed-form curve defined by a function of a [`Jet`] parameter.
pub struct JetFn<F>(pub F);

impl<F> fmt::Debug for JetFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("JetFn")
    }
}

impl<F> CurveEval for JetFn<F>
where
    F: Fn(Jet) -> [Jet; 3] + Send + Sync,
{
    fn position(&self, s: f64) -> Vec3 {
        let [x, y, z] = (self.0)(Jet::constant(s));
        Vec3::new(x.value(), y.value(), z.value())
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        let [x, y, z] = (self.0)(Jet::variable(s));
        Some(CurveJet::from_components(x, y, z))
    }
}

/// Position-only closed-form curve; always differentiated numerically.
pub struct PointFn<F>(pub F);

impl<F> fmt::Debug for PointFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PointFn")
    }
}

impl<F> CurveEval for PointFn<F>
where
    F: Fn(f64) -> Vec3 + Send + Sync,
{
    fn position(&self, s: f64) -> Vec3 {
        (self.0)(s)
    }
}

/// An evaluable 3D curve with a parameter domain.
#[derive(Clone)]
pub struct SpaceCurve {
    eval: Arc<dyn CurveEval>,
    domain: Domain,
    kind: CurveKind,
    mode: DerivativeMode,
}

impl fmt::Debug for SpaceCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpaceCurve")
            .field("eval", &self.eval)
            .field("domain", &self.domain)
            .field("kind", &self.kind)
            .field("mode", &self.mode)
            .finish()
    }
}

impl SpaceCurve {
    pub fn new(eval: Arc<dyn CurveEval>, domain: Domain, kind: CurveKind, mode: DerivativeMode) -> Result<Self> {
        Domain::new(domain.min, domain.max)?;
        if let DerivativeMode::FiniteDifference(settings) = mode {
            settings.validate(&domain)?;
        }
        Ok(SpaceCurve { eval, domain, kind, mode })
    }

    /// Closed-form curve with analytic derivatives.
    pub fn from_jet_fn<F>(domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(Jet) -> [Jet; 3] + Send + Sync + 'static,
    {
        Self::new(Arc::new(JetFn(f)), domain, CurveKind::ClosedForm, DerivativeMode::Analytic)
    }

    /// Closed-form curve known only through its positions.
    pub fn from_point_fn<F>(domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec3 + Send + Sync + 'static,
    {
        let mode = DerivativeMode::FiniteDifference(DerivativeSettings::default_for(&domain));
        Self::new(Arc::new(PointFn(f)), domain, CurveKind::ClosedForm, mode)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn evaluator(&self) -> &Arc<dyn CurveEval> {
        &self.eval
    }

    /// Same curve, differentiated with the given mode. Switching to analytic
    /// mode is refused for evaluators that cannot provide jets.
    pub fn with_mode(&self, mode: DerivativeMode) -> Result<Self> {
        if mode.is_analytic() && self.eval.jet(self.sample_point()).is_none() {
            return Err(GeomError::InvalidDerivativeSettings("evaluator has no analytic derivatives".into()));
        }
        Self::new(self.eval.clone(), self.domain, self.kind, mode)
    }

    /// Same evaluator restricted (or extended) to another domain.
    pub fn with_domain(&self, domain: Domain) -> Result<Self> {
        let mode = match self.mode {
            DerivativeMode::Analytic => DerivativeMode::Analytic,
            DerivativeMode::FiniteDifference(s) => {
                DerivativeMode::FiniteDifference(DerivativeSettings { step: s.step.min(domain.length() / 100.0), ..s })
            }
        };
        Self::new(self.eval.clone(), domain, self.kind, mode)
    }

    fn sample_point(&self) -> f64 {
        match (self.domain.min.is_finite(), self.domain.max.is_finite()) {
            (true, true) => 0.5 * (self.domain.min + self.domain.max),
            (true, false) => self.domain.min,
            (false, true) => self.domain.max,
            (false, false) => 0.0,
        }
    }

    /// Largest stencil reach used by third-order derivatives (zero for
    /// analytic curves).
    pub fn margin(&self) -> f64 {
        match self.mode {
            DerivativeMode::Analytic => 0.0,
            DerivativeMode::FiniteDifference(s) => s.reach(3),
        }
    }

    /// Sub-domain on which every derivative up to third order is available.
    pub fn usable_domain(&self) -> Result<Domain> {
        self.domain.shrink(self.margin())
    }

    /// `n` uniform samples of [`usable_domain`](Self::usable_domain).
    pub fn sample_parameters(&self, n: usize) -> Result<Vec<f64>> {
        self.usable_domain()?.samples(n)
    }

    pub fn evaluate(&self, s: f64) -> Result<Vec3> {
        self.domain.check(s)?;
        let p = self.eval.position(s);
        if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
            return Err(GeomError::NonFinite("curve position"));
        }
        Ok(p)
    }

    fn stencil_check(&self, s: f64, reach: f64) -> Result<()> {
        self.domain.check(s)?;
        // Slack for round-off in sample grids that end exactly at the margin.
        let slack = 1e-12 * self.domain.length().max(1.0);
        if s - reach < self.domain.min - slack || s + reach > self.domain.max + slack {
            return Err(GeomError::InsufficientMargin { s, reach });
        }
        Ok(())
    }

    /// Derivative of the given order (0 returns the position).
    pub fn derivative(&self, s: f64, order: usize) -> Result<Vec3> {
        if order > 3 {
            return Err(GeomError::InvalidDerivativeSettings(format!("derivative order {order} not supported")));
        }
        match self.mode {
            DerivativeMode::Analytic => {
                self.domain.check(s)?;
                let jet = self
                    .eval
                    .jet(s)
                    .ok_or(GeomError::InvalidDerivativeSettings("evaluator has no analytic derivatives".into()))?;
                Ok(jet.derivative(order))
            }
            DerivativeMode::FiniteDifference(settings) => {
                self.stencil_check(s, settings.reach(order))?;
                let f = |k: f64| self.eval.position(s + k * settings.step);
                Ok(central_difference(f, settings, order))
            }
        }
    }

    /// Position and derivatives up to third order in one call.
    pub fn jet_at(&self, s: f64) -> Result<CurveJet> {
        match self.mode {
            DerivativeMode::Analytic => {
                self.domain.check(s)?;
                self.eval
                    .jet(s)
                    .ok_or(GeomError::InvalidDerivativeSettings("evaluator has no analytic derivatives".into()))
            }
            DerivativeMode::FiniteDifference(settings) => {
                self.stencil_check(s, settings.reach(3))?;
                let h = settings.step;
                let reach = match settings.scheme {
                    StencilOrder::Second => 2,
                    StencilOrder::Fourth => 3,
                };
                let mut cache = [Vec3::zeros(); 7];
                for (k, slot) in cache.iter_mut().enumerate() {
                    let offset = k as i32 - 3;
                    if offset.abs() <= reach {
                        *slot = self.eval.position(s + offset as f64 * h);
                    }
                }
                let f = |k: f64| cache[(k as i32 + 3) as usize];
                Ok(CurveJet {
                    pos: cache[3],
                    d1: central_difference(f, settings, 1),
                    d2: central_difference(f, settings, 2),
                    d3: central_difference(f, settings, 3),
                })
            }
        }
    }

    /// First derivative, preferring an exact evaluator-supplied value even in
    /// finite-difference mode.
    pub fn velocity(&self, s: f64) -> Result<Vec3> {
        self.domain.check(s)?;
        match self.eval.velocity(s) {
            Some(v) => Ok(v),
            None => self.derivative(s, 1),
        }
    }
}

/// Central differences; `f(k)` returns the position at `s + k*h`.
fn central_difference(f: impl Fn(f64) -> Vec3, settings: DerivativeSettings, order: usize) -> Vec3 {
    let h = settings.step;
    match (settings.scheme, order) {
        (_, 0) => f(0.0),
        (StencilOrder::Second, 1) => (f(1.0) - f(-1.0)) / (2.0 * h),
        (StencilOrder::Second, 2) => (f(1.0) - f(0.0) * 2.0 + f(-1.0)) / (h * h),
        (StencilOrder::Second, _) => (f(2.0) - f(1.0) * 2.0 + f(-1.0) * 2.0 - f(-2.0)) / (2.0 * h * h * h),
        (StencilOrder::Fourth, 1) => (-f(2.0) + f(1.0) * 8.0 - f(-1.0) * 8.0 + f(-2.0)) / (12.0 * h),
        (StencilOrder::Fourth, 2) => {
            (-f(2.0) + f(1.0) * 16.0 - f(0.0) * 30.0 + f(-1.0) * 16.0 - f(-2.0)) / (12.0 * h * h)
        }
        (StencilOrder::Fourth, _) => {
            (-f(3.0) + f(2.0) * 8.0 - f(1.0) * 13.0 + f(-1.0) * 13.0 - f(-2.0) * 8.0 + f(-3.0)) / (8.0 * h * h * h)
        }
    }
}
