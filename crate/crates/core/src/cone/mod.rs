//! Cones `C(t, u) = u·y(t)` with vertex at the origin.
//!
//! Besides points and normals this module provides the chart map back to
//! `(t, u)`, curves written in chart coordinates, the Clairaut invariant
//! `u²·dt/ds` and the isometric development `(u cos t, u sin t)`, which is
//! valid because the first fundamental form is `u² dt² + du²`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::curve::{CurveEval, CurveKind, DerivativeMode, DerivativeSettings, Domain, SpaceCurve};
use crate::error::{GeomError, Result};
use crate::jet::{CurveJet, Jet, Vec3};

mod base;

pub use base::{CurvatureProfile, SphericalBaseCurve};

/// Default outer radius of the chart; the vertex exclusion radius is
/// `VERTEX_FRACTION * u_max`.
pub const DEFAULT_U_MAX: f64 = 1e4;
pub const VERTEX_FRACTION: f64 = 1e-9;
const COARSE_GRID: usize = 1024;
const NEWTON_ITERS: usize = 16;
const NEWTON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeShape {
    Circular { psi0: f64 },
    General,
}

#[derive(Debug, Clone)]
pub struct Cone {
    base: SphericalBaseCurve,
    shape: ConeShape,
    u_max: f64,
}

impl Cone {
    /// Right circular cone about the z-axis with half-angle `psi0`.
    pub fn circular(psi0: f64) -> Result<Self> {
        Ok(Cone { base: SphericalBaseCurve::circle(psi0)?, shape: ConeShape::Circular { psi0 }, u_max: DEFAULT_U_MAX })
    }

    pub fn over(base: SphericalBaseCurve) -> Self {
        Cone { base, shape: ConeShape::General, u_max: DEFAULT_U_MAX }
    }

    pub fn with_u_max(mut self, u_max: f64) -> Result<Self> {
        if !(u_max > 0.0 && u_max.is_finite()) {
            return Err(GeomError::InvalidParameter { name: "u_max", value: u_max, reason: "must be positive" });
        }
        self.u_max = u_max;
        Ok(self)
    }

    pub fn base(&self) -> &SphericalBaseCurve {
        &self.base
    }

    pub fn shape(&self) -> ConeShape {
        self.shape
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Radius of the excluded neighborhood of the vertex.
    pub fn u_min(&self) -> f64 {
        VERTEX_FRACTION * self.u_max
    }

    /// `u·y(t)`.
    pub fn point(&self, t: f64, u: f64) -> Result<Vec3> {
        if !(u > 0.0) {
            return Err(GeomError::NonpositiveRadialCoordinate { u });
        }
        Ok(self.base.point(t)? * u)
    }

    /// Unit normal `(y' × y)/|y' × y|`; depends on `t` only.
    pub fn surface_normal(&self, t: f64, u: f64) -> Result<Vec3> {
        if !(u > 0.0) {
            return Err(GeomError::NonpositiveRadialCoordinate { u });
        }
        self.normal_at(t)
    }

    pub(crate) fn normal_at(&self, t: f64) -> Result<Vec3> {
        let j = self.base.jet(t)?;
        let n = j.d1.cross(&j.pos);
        let norm = n.norm();
        if !(norm > 1e-12) {
            return Err(GeomError::DegenerateBase { t });
        }
        Ok(n / norm)
    }

    /// Chart coordinates `(t, u)` of a point on the cone, with the default
    /// on-cone tolerance.
    pub fn chart_coordinates(&self, p: Vec3) -> Result<(f64, f64)> {
        self.chart_coordinates_with(p, crate::tolerance::Tolerances::analytic().on_cone, None)
    }

    /// Chart coordinates with an explicit relative tolerance and an optional
    /// guess for `t`. With a guess, the search is local (continuation along a
    /// curve) and periodic bases are unwrapped to the branch nearest the guess.
    pub fn chart_coordinates_with(&self, p: Vec3, tol: f64, guess: Option<f64>) -> Result<(f64, f64)> {
        let u = p.norm();
        if !(u >= self.u_min()) {
            return Err(GeomError::VertexPoint { norm: u });
        }
        let q = p / u;
        let t = match self.shape {
            ConeShape::Circular { psi0 } => {
                let sp = psi0.sin();
                let t = q.y.atan2(q.x) * sp;
                match guess {
                    Some(g) => {
                        let period = 2.0 * PI * sp;
                        t + ((g - t) / period).round() * period
                    }
                    None => t,
                }
            }
            ConeShape::General => {
                let start = match guess {
                    Some(g) => g,
                    None => self.coarse_search(q)?,
                };
                let refined = self.newton_refine(q, start)?;
                // Fall back to the global search if continuation failed.
                if guess.is_some() && self.residual(q, refined)? > tol {
                    self.newton_refine(q, self.coarse_search(q)?)?
                } else {
                    refined
                }
            }
        };
        let residual = self.residual(q, t)?;
        if residual > tol {
            return Err(GeomError::NotOnCone { residual, tol });
        }
        Ok((t, u))
    }

    fn residual(&self, q: Vec3, t: f64) -> Result<f64> {
        Ok((self.base.point(t)? - q).norm())
    }

    fn coarse_search(&self, q: Vec3) -> Result<f64> {
        let grid = self.base.domain().samples(COARSE_GRID)?;
        let mut best = (f64::INFINITY, grid[0]);
        for t in grid {
            let d = (self.base.point(t)? - q).norm_squared();
            if d < best.0 {
                best = (d, t);
            }
        }
        Ok(best.1)
    }

    /// Newton iteration on `⟨q - y(t), y'(t)⟩ = 0`.
    fn newton_refine(&self, q: Vec3, mut t: f64) -> Result<f64> {
        let domain = self.base.domain();
        for _ in 0..NEWTON_ITERS {
            let j = self.base.jet(t)?;
            let diff = q - j.pos;
            let g = diff.dot(&j.d1);
            let dg = -j.d1.norm_squared() + diff.dot(&j.d2);
            if dg == 0.0 {
                break;
            }
            let next = (t - g / dg).clamp(domain.min, domain.max);
            let done = (next - t).abs() <= NEWTON_TOL;
            t = next;
            if done {
                break;
            }
        }
        Ok(t)
    }

    /// Chart state of a point with known velocity: `u = |α|`,
    /// `u' = ⟨α, α'⟩/u`, `t' = ⟨α', y'(t)⟩/(u |y'|²)`.
    pub fn chart_state(&self, p: Vec3, v: Vec3, tol: f64, guess: Option<f64>) -> Result<ChartState> {
        let (t, u) = self.chart_coordinates_with(p, tol, guess)?;
        let y1 = self.base.jet(t)?.d1;
        Ok(ChartState { t, u, dt: v.dot(&y1) / (u * y1.norm_squared()), du: p.dot(&v) / u })
    }

    /// Chart of a space curve on the cone, tracked continuously through the
    /// given (increasing) parameters.
    pub fn chart_of(&self, curve: &SpaceCurve, params: &[f64], tol: f64) -> Result<ChartCurve> {
        let mut states = Vec::with_capacity(params.len());
        let mut guess = None;
        for &s in params {
            let p = curve.evaluate(s)?;
            let v = curve.velocity(s)?;
            let state = self.chart_state(p, v, tol, guess)?;
            guess = Some(state.t);
            states.push(state);
        }
        ChartCurve::sampled(params.to_vec(), states, None)
    }

    /// Geodesic curvature `⟨α'', N × α'⟩` at `s`.
    pub fn geodesic_curvature(&self, curve: &SpaceCurve, s: f64) -> Result<f64> {
        let jet = curve.jet_at(s)?;
        let tol = crate::tolerance::Tolerances::for_mode(curve.mode()).on_cone;
        let (t, _) = self.chart_coordinates_with(jet.pos, tol, None)?;
        Ok(geodesic_curvature_from(&jet, self.normal_at(t)?))
    }

    /// The ruling `u ↦ u·y(t0)` over `u_range`; unit speed, zero curvature.
    pub fn ruling(&self, t0: f64, u_range: Domain) -> Result<SpaceCurve> {
        let y0 = self.base.point(t0)?;
        if !(u_range.min > 0.0) {
            return Err(GeomError::NonpositiveRadialCoordinate { u: u_range.min });
        }
        SpaceCurve::from_jet_fn(u_range, move |u| [u.scale(y0.x), u.scale(y0.y), u.scale(y0.z)])
    }

    /// Curve `s ↦ u(s)·y(t(s))` for a chart map written in jets. Analytic
    /// whenever the base is; otherwise differentiated by finite differences.
    pub fn curve_from_chart<F>(&self, domain: Domain, chart: F) -> Result<SpaceCurve>
    where
        F: Fn(Jet) -> (Jet, Jet) + Send + Sync + 'static,
    {
        let eval = ChartMapCurve { base: self.base.clone(), chart: Arc::new(chart) };
        let mode = if self.base.is_analytic() {
            DerivativeMode::Analytic
        } else {
            DerivativeMode::FiniteDifference(DerivativeSettings::default_for(&domain))
        };
        SpaceCurve::new(Arc::new(eval), domain, CurveKind::ClosedForm, mode)
    }

    /// Parallel (latitude) curve at constant `u0`: `s ↦ u0·y(t0 + s/u0)`.
    pub fn latitude_circle(&self, u0: f64, t0: f64, domain: Domain) -> Result<SpaceCurve> {
        if !(u0 > 0.0) {
            return Err(GeomError::NonpositiveRadialCoordinate { u: u0 });
        }
        self.curve_from_chart(domain, move |s| (s.scale(1.0 / u0) + t0, Jet::constant(u0)))
    }

    /// Checks that `t` stays within the base domain.
    pub fn check_base_parameter(&self, t: f64) -> Result<()> {
        let d = self.base.domain();
        if d.contains(t) {
            Ok(())
        } else {
            Err(GeomError::BaseDomainExceeded { t, min: d.min, max: d.max })
        }
    }
}

pub(crate) fn geodesic_curvature_from(jet: &CurveJet, normal: Vec3) -> f64 {
    jet.d2.dot(&normal.cross(&jet.d1))
}

struct ChartMapCurve {
    base: SphericalBaseCurve,
    chart: Arc<dyn Fn(Jet) -> (Jet, Jet) + Send + Sync>,
}

impl fmt::Debug for ChartMapCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartMapCurve").field("base", &self.base).finish()
    }
}

impl CurveEval for ChartMapCurve {
    fn position(&self, s: f64) -> Vec3 {
        let (t, u) = (self.chart)(Jet::constant(s));
        match self.base.point(t.value()) {
            Ok(y) => y * u.value(),
            Err(_) => Vec3::repeat(f64::NAN),
        }
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        if !self.base.is_analytic() {
            return None;
        }
        let (t, u) = (self.chart)(Jet::variable(s));
        let y = self.base.jet(t.value()).ok()?;
        Some(y.compose(t).scaled_by(u))
    }

    fn velocity(&self, s: f64) -> Option<Vec3> {
        let (t, u) = (self.chart)(Jet::variable(s));
        let y = self.base.point(t.value()).ok()?;
        let y1 = self.base.jet(t.value()).ok()?.d1;
        Some(y * u.d(1) + y1 * (u.value() * t.d(1)))
    }
}

/// Chart coordinates and their arc-length derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartState {
    pub t: f64,
    pub u: f64,
    pub dt: f64,
    pub du: f64,
}

impl ChartState {
    /// `u²·dt/ds`.
    pub fn clairaut(&self) -> f64 {
        self.u * self.u * self.dt
    }

    /// `u'² + u²t'²`, which is 1 for unit-speed curves.
    pub fn speed_squared(&self) -> f64 {
        self.du * self.du + self.u * self.u * self.dt * self.dt
    }
}

pub trait ChartEval: Send + Sync + fmt::Debug {
    fn state(&self, s: f64) -> ChartState;
}

/// A curve on a cone in chart coordinates `s ↦ (t(s), u(s))`.
#[derive(Clone)]
pub struct ChartCurve {
    eval: Arc<dyn ChartEval>,
    domain: Domain,
}

impl fmt::Debug for ChartCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartCurve").field("eval", &self.eval).field("domain", &self.domain).finish()
    }
}

impl ChartCurve {
    pub fn new(eval: Arc<dyn ChartEval>, domain: Domain) -> Result<Self> {
        Ok(ChartCurve { eval, domain: Domain::new(domain.min, domain.max)? })
    }

    /// Closed-form chart; `f` returns `(t, u)` as jets of `s`.
    pub fn from_jet_fn<F>(domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(Jet) -> (Jet, Jet) + Send + Sync + 'static,
    {
        Self::new(Arc::new(JetChart(f)), domain)
    }

    /// Sampled chart, interpolated with cubic Hermite. Accelerations
    /// `(t'', u'')` at the nodes make the derivative interpolation cubic too.
    pub fn sampled(params: Vec<f64>, states: Vec<ChartState>, accel: Option<Vec<(f64, f64)>>) -> Result<Self> {
        if params.len() != states.len() || params.len() < 2 {
            return Err(GeomError::InvalidSamples(format!(
                "{} parameters for {} chart states",
                params.len(),
                states.len()
            )));
        }
        if let Some(w) = params.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(GeomError::InvalidSamples(format!("chart parameters not increasing ({} then {})", w[0], w[1])));
        }
        if let Some(a) = &accel {
            if a.len() != params.len() {
                return Err(GeomError::InvalidSamples("acceleration count mismatch".into()));
            }
        }
        let domain = Domain::new(params[0], *params.last().unwrap())?;
        Self::new(Arc::new(SampledChart { params, states, accel }), domain)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn state(&self, s: f64) -> Result<ChartState> {
        self.domain.check(s)?;
        let st = self.eval.state(s);
        if !(st.u > 0.0) {
            return Err(GeomError::NonpositiveRadialCoordinate { u: st.u });
        }
        Ok(st)
    }

    pub fn clairaut_invariant(&self, s: f64) -> Result<f64> {
        Ok(self.state(s)?.clairaut())
    }

    /// Embeds the chart into space through a cone: `u(s)·y(t(s))`.
    pub fn embed(&self, cone: &Cone, s: f64) -> Result<Vec3> {
        let st = self.state(s)?;
        cone.point(st.t, st.u)
    }

    pub fn develop(&self) -> Development {
        Development { chart: self.clone() }
    }
}

/// `u(s)²·t'(s)`; constant along geodesics.
pub fn clairaut_invariant(chart: &ChartCurve, s: f64) -> Result<f64> {
    chart.clairaut_invariant(s)
}

/// Isometric development of a chart curve.
pub fn develop(chart: &ChartCurve) -> Development {
    chart.develop()
}

struct JetChart<F>(F);

impl<F> fmt::Debug for JetChart<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("JetChart")
    }
}

impl<F> ChartEval for JetChart<F>
where
    F: Fn(Jet) -> (Jet, Jet) + Send + Sync,
{
    fn state(&self, s: f64) -> ChartState {
        let (t, u) = (self.0)(Jet::variable(s));
        ChartState { t: t.value(), u: u.value(), dt: t.d(1), du: u.d(1) }
    }
}

#[derive(Debug)]
struct SampledChart {
    params: Vec<f64>,
    states: Vec<ChartState>,
    accel: Option<Vec<(f64, f64)>>,
}

impl ChartEval for SampledChart {
    fn state(&self, s: f64) -> ChartState {
        let i = self.params.partition_point(|&p| p <= s).saturating_sub(1).min(self.params.len() - 2);
        let (s0, s1) = (self.params[i], self.params[i + 1]);
        let h = s1 - s0;
        let x = (s - s0) / h;
        let (a, b) = (self.states[i], self.states[i + 1]);
        let (t, dt_h) = hermite(x, h, a.t, b.t, a.dt, b.dt);
        let (u, du_h) = hermite(x, h, a.u, b.u, a.du, b.du);
        let (dt, du) = match &self.accel {
            Some(acc) => {
                let (aa, ab) = (acc[i], acc[i + 1]);
                (hermite(x, h, a.dt, b.dt, aa.0, ab.0).0, hermite(x, h, a.du, b.du, aa.1, ab.1).0)
            }
            None => (dt_h, du_h),
        };
        ChartState { t, u, dt, du }
    }
}

/// Scalar cubic Hermite on a cell of width `h` at fraction `x`; returns the
/// value and its derivative.
fn hermite(x: f64, h: f64, p0: f64, p1: f64, m0: f64, m1: f64) -> (f64, f64) {
    let (x2, x3) = (x * x, x * x * x);
    let value = p0 * (2.0 * x3 - 3.0 * x2 + 1.0)
        + h * m0 * (x3 - 2.0 * x2 + x)
        + p1 * (-2.0 * x3 + 3.0 * x2)
        + h * m1 * (x3 - x2);
    let slope = (p0 * (6.0 * x2 - 6.0 * x) + p1 * (-6.0 * x2 + 6.0 * x)) / h
        + m0 * (3.0 * x2 - 4.0 * x + 1.0)
        + m1 * (3.0 * x2 - 2.0 * x);
    (value, slope)
}

/// The development `p(s) = (u cos t, u sin t)` of a chart curve.
#[derive(Debug, Clone)]
pub struct Development {
    chart: ChartCurve,
}

impl Development {
    pub fn domain(&self) -> Domain {
        self.chart.domain()
    }

    pub fn point(&self, s: f64) -> Result<Vector2<f64>> {
        let st = self.chart.state(s)?;
        Ok(Vector2::new(st.u * st.t.cos(), st.u * st.t.sin()))
    }

    pub fn velocity(&self, s: f64) -> Result<Vector2<f64>> {
        let st = self.chart.state(s)?;
        let (sn, cs) = st.t.sin_cos();
        Ok(Vector2::new(st.du * cs - st.u * st.dt * sn, st.du * sn + st.u * st.dt * cs))
    }

    /// `(s, p(s))` at `n` uniform parameters.
    pub fn sample(&self, n: usize) -> Result<Vec<(f64, Vector2<f64>)>> {
        self.domain().samples(n)?.into_iter().map(|s| Ok((s, self.point(s)?))).collect()
    }

    /// Straight-line fit through `n` uniform samples.
    pub fn line_fit(&self, n: usize) -> Result<LineFit> {
        let pts: Vec<Vector2<f64>> = self.sample(n)?.into_iter().map(|(_, p)| p).collect();
        fit_line(&pts)
    }
}

/// Total-least-squares line through planar points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub centroid: Vector2<f64>,
    pub direction: Vector2<f64>,
    pub normal: Vector2<f64>,
    /// Distance of the fitted line from the origin.
    pub distance_from_origin: f64,
    /// Largest distance of a point from the fitted line.
    pub max_residual: f64,
}

pub fn fit_line(points: &[Vector2<f64>]) -> Result<LineFit> {
    if points.len() < 2 {
        return Err(GeomError::InsufficientSamples { needed: 2, got: points.len() });
    }
    let n = points.len() as f64;
    let centroid = points.iter().fold(Vector2::zeros(), |a, p| a + p) / n;
    let cov = points.iter().fold(Matrix2::zeros(), |a, p| {
        let d = p - centroid;
        a + d * d.transpose()
    }) / n;
    // Major axis of the 2x2 covariance in closed form.
    let angle = 0.5 * (2.0 * cov[(0, 1)]).atan2(cov[(0, 0)] - cov[(1, 1)]);
    let direction = Vector2::new(angle.cos(), angle.sin());
    let normal = Vector2::new(-direction.y, direction.x);
    let max_residual = points.iter().map(|p| (p - centroid).dot(&normal).abs()).fold(0.0, f64::max);
    Ok(LineFit { centroid, direction, normal, distance_from_origin: centroid.dot(&normal).abs(), max_residual })
}

/// JSON cone descriptor: `{"kind":"circular","psi0":..}` or
/// `{"kind":"general","base_csv":..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConeDescriptor {
    Circular { psi0: f64 },
    General { base_csv: std::path::PathBuf },
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn wavy_cone() -> Cone {
        let profile = CurvatureProfile { mean: 0.5, amplitude: 0.2, frequency: 1.7, phase: 0.4 };
        let d = Domain::new(-2.0, 2.0).unwrap();
        Cone::over(
            SphericalBaseCurve::from_geodesic_curvature(profile, Vec3::new(0.3, 0.1, 1.0), Vec3::new(1.0, 0.0, 0.2), d)
                .unwrap(),
        )
    }

    #[test]
    fn cone_point_matches_direct_substitution() {
        let cone = Cone::circular(FRAC_PI_4).unwrap();
        let p = cone.point(0.0, 1.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p - Vec3::new(h, 0.0, h)).norm() < 1e-15);
        let q = cone.point(0.3, 2.5).unwrap();
        assert!((cone.point(0.3, 5.0).unwrap() - q * 2.0).norm() < 1e-15);
        assert!(matches!(cone.point(0.0, 0.0), Err(GeomError::NonpositiveRadialCoordinate { .. })));
        let w = wavy_cone();
        for (t, u) in [(-1.5, 0.2), (0.0, 3.0), (1.9, 7.0)] {
            assert!((w.point(t, u).unwrap().norm() - u).abs() < 1e-10);
        }
    }

    #[test]
    fn circular_normal_has_constant_vertical_component() {
        // y × y' for the base circle has third component sinψ₀ = 1/2 here.
        let cone = Cone::circular(FRAC_PI_6).unwrap();
        for t in [-2.0, 0.0, 0.4, 3.3] {
            let n = cone.surface_normal(t, 1.0).unwrap();
            assert!((n.z.abs() - 0.5).abs() < 1e-14);
            let j = cone.base().jet(t).unwrap();
            assert!(n.dot(&j.pos).abs() < 1e-14);
            assert!(n.dot(&j.d1).abs() < 1e-14);
            assert_eq!(n, cone.surface_normal(t, 7.0).unwrap());
        }
    }

    #[test]
    fn chart_coordinates_round_trip() {
        let cone = Cone::circular(0.8).unwrap();
        let sp = 0.8f64.sin();
        for (t, u) in [(0.1, 1.0), (-1.2, 0.3), (2.0, 4.0)] {
            let (t2, u2) = cone.chart_coordinates(cone.point(t, u).unwrap()).unwrap();
            assert!((t2 - t).abs() < 1e-8 && (u2 - u).abs() < 1e-8);
            // Azimuth relation for the circular cone.
            let p = cone.point(t, u).unwrap();
            assert!((t2 - p.y.atan2(p.x) * sp).abs() < 1e-12);
        }
        let w = wavy_cone();
        for (t, u) in [(-1.7, 0.5), (0.0, 2.0), (1.23, 9.0)] {
            let (t2, u2) = w.chart_coordinates(w.point(t, u).unwrap()).unwrap();
            assert!((t2 - t).abs() < 1e-8, "{t2} vs {t}");
            assert!((u2 - u).abs() < 1e-8);
        }
    }

    #[test]
    fn off_cone_and_vertex_points_are_rejected() {
        let cone = Cone::circular(0.8).unwrap();
        let p = cone.point(0.5, 2.0).unwrap();
        let off = p + cone.surface_normal(0.5, 2.0).unwrap() * 0.02;
        assert!(matches!(cone.chart_coordinates(off), Err(GeomError::NotOnCone { .. })));
        assert!(matches!(cone.chart_coordinates(Vec3::zeros()), Err(GeomError::VertexPoint { .. })));
        let w = wavy_cone();
        let p = w.point(0.5, 2.0).unwrap();
        let off = p + w.surface_normal(0.5, 2.0).unwrap() * 0.02;
        assert!(matches!(w.chart_coordinates(off), Err(GeomError::NotOnCone { .. })));
    }

    #[test]
    fn latitude_circle_geodesic_curvature_is_inverse_radius() {
        for cone in [Cone::circular(0.6).unwrap(), wavy_cone()] {
            let d = Domain::new(-0.5, 0.5).unwrap();
            let c = cone.latitude_circle(2.0, 0.0, d).unwrap();
            for s in d.samples(5).unwrap() {
                assert!((cone.geodesic_curvature(&c, s).unwrap().abs() - 0.5).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rulings_are_straight_and_on_the_cone() {
        let cone = wavy_cone();
        let r = cone.ruling(0.7, Domain::new(0.5, 3.0).unwrap()).unwrap();
        for u in [0.5, 1.0, 2.9] {
            assert_eq!(r.derivative(u, 2).unwrap().norm(), 0.0);
            assert!(cone.chart_coordinates(r.evaluate(u).unwrap()).is_ok());
            assert_eq!(cone.geodesic_curvature(&r, u).unwrap(), 0.0);
        }
        let chart = cone.chart_of(&r, &Domain::new(0.5, 3.0).unwrap().samples(20).unwrap(), 1e-8).unwrap();
        let fit = chart.develop().line_fit(50).unwrap();
        assert!(fit.max_residual < 1e-12);
        assert!(fit.distance_from_origin < 1e-12);
        for s in [0.5, 1.7, 3.0] {
            assert!(chart.clairaut_invariant(s).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn latitude_development_is_a_circular_arc() {
        let u0 = 1.5;
        let chart =
            ChartCurve::from_jet_fn(Domain::new(0.0, 2.0).unwrap(), move |s| (s.scale(1.0 / u0), Jet::constant(u0)))
                .unwrap();
        let dev = chart.develop();
        for (_, p) in dev.sample(9).unwrap() {
            assert!((p.norm() - u0).abs() < 1e-14);
        }
        for s in [0.0, 0.9, 2.0] {
            assert!((dev.velocity(s).unwrap().norm() - 1.0).abs() < 1e-14);
            assert!((chart.clairaut_invariant(s).unwrap() - u0).abs() < 1e-14);
        }
        assert!(dev.line_fit(64).unwrap().max_residual > 0.1);
    }

    #[test]
    fn descriptor_json_shape() {
        let c: ConeDescriptor = serde_json::from_str(r#"{"kind":"circular","psi0":0.5}"#).unwrap();
        assert_eq!(c, ConeDescriptor::Circular { psi0: 0.5 });
        let g: ConeDescriptor = serde_json::from_str(r#"{"kind":"general","base_csv":"b.csv"}"#).unwrap();
        assert_eq!(g, ConeDescriptor::General { base_csv: "b.csv".into() });
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"kind":"circular","psi0":0.5}"#);
    }
}
