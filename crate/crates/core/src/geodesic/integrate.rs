//! Fixed-step RK4 for the geodesic equations of `u² dt² + du²`:
//! `u'' = u t'²`, `t'' = -2 u' t'/u`.

use serde::{Deserialize, Serialize};

use crate::cone::{ChartCurve, ChartState, Cone};
use crate::error::{GeomError, Result};

use super::RectifyingParams;

pub const DEFAULT_STEP: f64 = 1e-3;
/// Allowed drift of the Clairaut invariant and of the chart speed, per unit
/// arc length.
pub const DRIFT_LIMIT: f64 = 1e-9;

/// Initial data in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicIvp {
    pub t0: f64,
    pub u0: f64,
    pub dt0: f64,
    pub du0: f64,
    pub length: f64,
}

impl GeodesicIvp {
    /// Data of the rectifying geodesic at `s0`.
    pub fn from_rectifying(params: &RectifyingParams, s0: f64, length: f64) -> Self {
        let RectifyingParams { a, b, c } = *params;
        let q = a * s0 + b;
        let w2 = 1.0 + q * q;
        let w = w2.sqrt();
        GeodesicIvp { t0: c + q.atan(), u0: w / a, dt0: a / w2, du0: q / w, length }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in
            [("t0", self.t0), ("u0", self.u0), ("dt0", self.dt0), ("du0", self.du0), ("length", self.length)]
        {
            if !v.is_finite() {
                return Err(GeomError::InvalidParameter { name, value: v, reason: "must be finite" });
            }
        }
        if !(self.u0 > 0.0) {
            return Err(GeomError::NonpositiveRadialCoordinate { u: self.u0 });
        }
        if !(self.length > 0.0) {
            return Err(GeomError::InvalidParameter { name: "length", value: self.length, reason: "must be positive" });
        }
        if self.speed() == 0.0 {
            return Err(GeomError::InvalidParameter {
                name: "du0",
                value: self.du0,
                reason: "initial velocity is zero",
            });
        }
        Ok(())
    }

    /// `√(u0² dt0² + du0²)`.
    pub fn speed(&self) -> f64 {
        (self.u0 * self.u0 * self.dt0 * self.dt0 + self.du0 * self.du0).sqrt()
    }

    /// Unit-speed copy and the factor the velocity was divided by.
    pub fn normalized(&self) -> (Self, f64) {
        let k = self.speed();
        (GeodesicIvp { dt0: self.dt0 / k, du0: self.du0 / k, ..*self }, k)
    }
}

#[derive(Debug, Clone)]
pub struct IntegratedGeodesic {
    pub chart: ChartCurve,
    pub nodes: Vec<(f64, ChartState)>,
    pub step: f64,
    /// Factor the initial velocity was divided by (1 for unit-speed data).
    pub renormalization: f64,
    /// Largest relative change of `u² t'` divided by the length.
    pub clairaut_drift_per_length: f64,
    /// Largest `|u'² + u² t'² - 1|` divided by the length.
    pub speed_drift_per_length: f64,
}

fn rhs(y: [f64; 4]) -> [f64; 4] {
    let [_, u, dt, du] = y;
    [dt, du, -2.0 * du * dt / u, u * dt * dt]
}

fn rk4(y: [f64; 4], h: f64) -> [f64; 4] {
    let add = |y: [f64; 4], k: [f64; 4], f: f64| [y[0] + f * k[0], y[1] + f * k[1], y[2] + f * k[2], y[3] + f * k[3]];
    let k1 = rhs(y);
    let k2 = rhs(add(y, k1, 0.5 * h));
    let k3 = rhs(add(y, k2, 0.5 * h));
    let k4 = rhs(add(y, k3, h));
    let mut out = y;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates a geodesic on `cone` from `ivp` with nominal step `step`; the
/// step is shrunk slightly so that it divides the length.
pub fn integrate_geodesic(cone: &Cone, ivp: &GeodesicIvp, step: f64) -> Result<IntegratedGeodesic> {
    ivp.validate()?;
    if !(step > 0.0 && step.is_finite() && step <= ivp.length) {
        return Err(GeomError::InvalidParameter { name: "step", value: step, reason: "must lie in (0, length]" });
    }
    let (ivp, renormalization) = ivp.normalized();
    let steps = (ivp.length / step).ceil() as usize;
    let h = ivp.length / steps as f64;
    let (u_min, u_max) = (cone.u_min(), cone.u_max());
    cone.check_base_parameter(ivp.t0)?;

    let mut y = [ivp.t0, ivp.u0, ivp.dt0, ivp.du0];
    let c0 = ivp.u0 * ivp.u0 * ivp.dt0;
    let scale = if c0.abs() > 1e-12 { c0.abs() } else { 1.0 };
    let (mut c_drift, mut v_drift) = (0.0f64, 0.0f64);
    let mut nodes = Vec::with_capacity(steps + 1);
    let mut accel = Vec::with_capacity(steps + 1);
    let mut push = |s: f64, y: [f64; 4]| {
        let f = rhs(y);
        nodes.push((s, ChartState { t: y[0], u: y[1], dt: y[2], du: y[3] }));
        accel.push((f[2], f[3]));
    };
    push(0.0, y);
    for k in 1..=steps {
        y = rk4(y, h);
        let s = k as f64 * h;
        let [t, u, dt, du] = y;
        if !(u >= u_min) {
            return Err(GeomError::VertexApproach { u, u_min });
        }
        if u > u_max {
            return Err(GeomError::RadialRangeExceeded { u, u_max });
        }
        cone.check_base_parameter(t)?;
        c_drift = c_drift.max((u * u * dt - c0).abs() / scale);
        v_drift = v_drift.max((du * du + u * u * dt * dt - 1.0).abs());
        push(s, y);
    }
    let clairaut_drift_per_length = c_drift / ivp.length;
    let speed_drift_per_length = v_drift / ivp.length;
    if clairaut_drift_per_length > DRIFT_LIMIT {
        return Err(GeomError::StepTooLarge {
            quantity: "clairaut",
            drift: clairaut_drift_per_length,
            limit: DRIFT_LIMIT,
        });
    }
    if speed_drift_per_length > DRIFT_LIMIT {
        return Err(GeomError::StepTooLarge { quantity: "speed", drift: speed_drift_per_length, limit: DRIFT_LIMIT });
    }
    let (params, states): (Vec<f64>, Vec<ChartState>) = nodes.iter().copied().unzip();
    let chart = ChartCurve::sampled(params, states, Some(accel))?;
    Ok(IntegratedGeodesic { chart, nodes, step: h, renormalization, clairaut_drift_per_length, speed_drift_per_length })
}
