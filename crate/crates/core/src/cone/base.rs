//! Unit-speed base curves on the unit sphere.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::{reparametrize_arclength, CurveEval, CurveKind, DerivativeMode, Domain, SampledCurve, SpaceCurve};
use crate::error::{GeomError, Result};
use crate::jet::{CurveJet, Jet, Vec3};

const SPHERE_TOL: f64 = 1e-10;
const CHECK_SAMPLES: usize = 64;

/// Unit-speed curve `y(t)` on the unit sphere centered at the origin.
#[derive(Debug, Clone)]
pub struct SphericalBaseCurve {
    curve: SpaceCurve,
}

impl SphericalBaseCurve {
    /// Accepts any curve on the unit sphere; curves that are not unit-speed
    /// are reparametrized by arc length.
    pub fn new(curve: SpaceCurve) -> Result<Self> {
        let probe = probe_parameters(&curve.domain());
        for &t in &probe {
            let norm = curve.evaluate(t)?.norm();
            if (norm - 1.0).abs() > SPHERE_TOL {
                return Err(GeomError::NotOnSphere { t, norm });
            }
        }
        let speed_tol = if curve.mode().is_analytic() { 1e-10 } else { 1e-6 };
        let mut unit_speed = true;
        for &t in &probe {
            let v = curve.velocity(t)?;
            if !(v.norm() > 0.0) {
                return Err(GeomError::DegenerateBase { t });
            }
            if (v.norm() - 1.0).abs() > speed_tol {
                unit_speed = false;
            }
        }
        let curve = if unit_speed { curve } else { reparametrize_arclength(&curve)? };
        Ok(SphericalBaseCurve { curve })
    }

    /// Base circle of the circular cone with half-angle `psi0`:
    /// `(sinψ₀ cos(t/sinψ₀), sinψ₀ sin(t/sinψ₀), cosψ₀)`, unbounded in `t`.
    pub fn circle(psi0: f64) -> Result<Self> {
        check_half_angle(psi0)?;
        let (sp, cp) = psi0.sin_cos();
        let curve = SpaceCurve::from_jet_fn(Domain::unbounded(), move |t| {
            let phi = t.scale(1.0 / sp);
            [phi.cos().scale(sp), phi.sin().scale(sp), Jet::constant(cp)]
        })?;
        Ok(SphericalBaseCurve { curve })
    }

    /// Spherical curve with prescribed geodesic curvature, obtained by
    /// integrating the moving frame `y' = T`, `T' = -y + k_g(t)·(y × T)` from
    /// the given initial point and direction at `domain.min`.
    pub fn from_geodesic_curvature(
        profile: CurvatureProfile,
        start: Vec3,
        direction: Vec3,
        domain: Domain,
    ) -> Result<Self> {
        if !domain.is_bounded() {
            return Err(GeomError::DegenerateDomain { min: domain.min, max: domain.max });
        }
        let y0 = start.normalize();
        let t0 = direction - y0 * y0.dot(&direction);
        if !(t0.norm() > 1e-12) {
            return Err(GeomError::DegenerateBase { t: domain.min });
        }
        let eval = FrameIntegratedCurve::integrate(profile, y0, t0.normalize(), domain);
        let curve = SpaceCurve::new(Arc::new(eval), domain, CurveKind::ClosedForm, DerivativeMode::Analytic)?;
        Ok(SphericalBaseCurve { curve })
    }

    /// Base curve from samples `t, y(t)`: points are interpolated with cubic
    /// Hermite, projected onto the sphere, then brought to unit speed.
    pub fn from_samples(params: Vec<f64>, points: Vec<Vec3>) -> Result<Self> {
        for (t, p) in params.iter().zip(&points) {
            if !(p.norm() > 0.5) {
                return Err(GeomError::NotOnSphere { t: *t, norm: p.norm() });
            }
        }
        let sampled = SampledCurve::from_points(params, points)?;
        let domain = sampled.domain();
        let projected = SpaceCurve::new(
            Arc::new(Projected(sampled)),
            domain,
            CurveKind::ClosedForm,
            DerivativeMode::FiniteDifference(crate::curve::DerivativeSettings::default_for(&domain)),
        )?;
        Self::new(projected)
    }

    pub fn curve(&self) -> &SpaceCurve {
        &self.curve
    }

    pub fn domain(&self) -> Domain {
        self.curve.domain()
    }

    pub fn is_analytic(&self) -> bool {
        self.curve.mode().is_analytic()
    }

    pub fn point(&self, t: f64) -> Result<Vec3> {
        self.curve.evaluate(t)
    }

    /// `y` and its first three derivatives at `t`. Near the ends of a
    /// finite-difference base the derivatives are taken at the nearest
    /// parameter the stencils can reach.
    pub fn jet(&self, t: f64) -> Result<CurveJet> {
        self.curve.domain().check(t)?;
        match self.curve.mode() {
            DerivativeMode::Analytic => self.curve.jet_at(t),
            DerivativeMode::FiniteDifference(_) => {
                let usable = self.curve.usable_domain()?;
                let inner = t.clamp(usable.min, usable.max);
                let mut jet = self.curve.jet_at(inner)?;
                jet.pos = self.curve.evaluate(t)?;
                jet.d1 = self.curve.velocity(t)?;
                Ok(jet)
            }
        }
    }
}

pub(crate) fn check_half_angle(psi0: f64) -> Result<()> {
    if !(psi0 > 0.0 && psi0 < std::f64::consts::FRAC_PI_2) {
        return Err(GeomError::InvalidHalfAngle { psi0 });
    }
    Ok(())
}

fn probe_parameters(domain: &Domain) -> Vec<f64> {
    if domain.is_bounded() {
        domain.samples(CHECK_SAMPLES).unwrap_or_default()
    } else {
        (0..CHECK_SAMPLES).map(|k| (k as f64 - 32.0) * 0.37).filter(|t| domain.contains(*t)).collect()
    }
}

/// Geodesic curvature `k_g(t) = mean + amplitude·sin(frequency·t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub mean: f64,
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl CurvatureProfile {
    pub fn constant(k: f64) -> Self {
        CurvatureProfile { mean: k, amplitude: 0.0, frequency: 0.0, phase: 0.0 }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.mean + self.amplitude * (self.frequency * t + self.phase).sin()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.amplitude * self.frequency * (self.frequency * t + self.phase).cos()
    }
}

/// Frame `(y, T)` tabulated at a fixed step; evaluation takes one RK4 step
/// from the nearest node.
struct FrameIntegratedCurve {
    profile: CurvatureProfile,
    start: f64,
    step: f64,
    nodes: Vec<(Vec3, Vec3)>,
}

const FRAME_STEP: f64 = 1e-3;

impl FrameIntegratedCurve {
    fn integrate(profile: CurvatureProfile, y0: Vec3, t0: Vec3, domain: Domain) -> Self {
        let n = (domain.length() / FRAME_STEP).ceil().max(1.0) as usize;
        let step = domain.length() / n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut state = (y0, t0);
        nodes.push(state);
        for i in 0..n {
            state = rk4_frame(&profile, domain.min + i as f64 * step, state, step);
            nodes.push(state);
        }
        FrameIntegratedCurve { profile, start: domain.min, step, nodes }
    }

    fn frame(&self, t: f64) -> (Vec3, Vec3) {
        let x = ((t - self.start) / self.step).round();
        let i = (x.max(0.0) as usize).min(self.nodes.len() - 1);
        let ti = self.start + i as f64 * self.step;
        if t == ti {
            self.nodes[i]
        } else {
            rk4_frame(&self.profile, ti, self.nodes[i], t - ti)
        }
    }
}

fn frame_rhs(profile: &CurvatureProfile, t: f64, (y, tan): (Vec3, Vec3)) -> (Vec3, Vec3) {
    (tan, -y + y.cross(&tan) * profile.value(t))
}

fn rk4_frame(profile: &CurvatureProfile, t: f64, s: (Vec3, Vec3), h: f64) -> (Vec3, Vec3) {
    let add = |a: (Vec3, Vec3), k: (Vec3, Vec3), f: f64| (a.0 + k.0 * f, a.1 + k.1 * f);
    let k1 = frame_rhs(profile, t, s);
    let k2 = frame_rhs(profile, t + 0.5 * h, add(s, k1, 0.5 * h));
    let k3 = frame_rhs(profile, t + 0.5 * h, add(s, k2, 0.5 * h));
    let k4 = frame_rhs(profile, t + h, add(s, k3, h));
    (
        s.0 + (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * (h / 6.0),
        s.1 + (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (h / 6.0),
    )
}

impl fmt::Debug for FrameIntegratedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameIntegratedCurve")
            .field("profile", &self.profile)
            .field("start", &self.start)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl CurveEval for FrameIntegratedCurve {
    fn position(&self, t: f64) -> Vec3 {
        self.frame(t).0
    }

    fn jet(&self, t: f64) -> Option<CurveJet> {
        let (y, tan) = self.frame(t);
        let k = self.profile.value(t);
        let dk = self.profile.derivative(t);
        let side = y.cross(&tan);
        Some(CurveJet { pos: y, d1: tan, d2: -y + side * k, d3: -tan + side * dk - tan * (k * k) })
    }
}

/// Radial projection of a sampled curve onto the unit sphere.
#[derive(Debug)]
struct Projected(SampledCurve);

impl CurveEval for Projected {
    fn position(&self, t: f64) -> Vec3 {
        self.0.position(t).normalize()
    }

    fn velocity(&self, t: f64) -> Option<Vec3> {
        let p = self.0.position(t);
        let v = self.0.velocity(t)?;
        let r = p.norm();
        Some((v - p * (p.dot(&v) / (r * r))) / r)
    }
}
