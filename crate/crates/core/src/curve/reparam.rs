//! Arc-length reparametrization.
//!
//! Arc length is tabulated with adaptive Simpson quadrature of the speed over
//! a partition of the original parameter domain; inverting the table is a
//! safeguarded Newton iteration whose residual is updated by integrating only
//! across each Newton step. Closed-form curves keep analytic derivatives
//! through the inverse-function rule; sampled curves are resampled onto
//! uniform arc-length nodes.

use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::jet::{CurveJet, Jet, Vec3};

use super::sampled::lagrange_derivative_weights;
use super::{CurveEval, CurveKind, DerivativeMode, DerivativeSettings, Domain, SampledCurve, SpaceCurve};

/// Speeds below this are treated as a singular (non-regular) parametrization.
pub const SPEED_FLOOR: f64 = 1e-10;
/// Absolute quadrature tolerance per table cell.
const CELL_TOL: f64 = 1e-13;
const UNIFORM_CELLS: usize = 64;
const MAX_DEPTH: u32 = 40;

/// Reparametrizes `curve` by arc length measured from the start of its
/// domain, so the new domain is `[min, min + length]`. Unit-speed curves are
/// returned unchanged up to quadrature tolerance.
pub fn reparametrize_arclength(curve: &SpaceCurve) -> Result<SpaceCurve> {
    let domain = curve.domain();
    if !domain.is_bounded() {
        return Err(GeomError::DegenerateDomain { min: domain.min, max: domain.max });
    }
    match curve.kind() {
        CurveKind::Sampled => resample_sampled(curve),
        CurveKind::ClosedForm => {
            let table = ArcLengthTable::uniform(curve.clone(), UNIFORM_CELLS)?;
            let new_domain = Domain::new(domain.min, snapped_end(&domain, table.length()))?;
            let analytic = curve.mode().is_analytic();
            let mode = if analytic {
                DerivativeMode::Analytic
            } else {
                DerivativeMode::FiniteDifference(DerivativeSettings::default_for(&new_domain))
            };
            let eval = ArcLengthCurve { table, start: domain.min, analytic };
            SpaceCurve::new(Arc::new(eval), new_domain, CurveKind::ClosedForm, mode)
        }
    }
}

/// End of the arc-length domain. Lengths that agree with the old domain to
/// round-off keep its end exactly, so unit-speed curves are fixed points.
fn snapped_end(domain: &Domain, length: f64) -> f64 {
    if (length - domain.length()).abs() <= 1e-12 * domain.length().max(1.0) {
        domain.max
    } else {
        domain.min + length
    }
}

fn resample_sampled(curve: &SpaceCurve) -> Result<SpaceCurve> {
    let eval = curve.evaluator().clone();
    let domain = curve.domain();
    let nodes = match eval.nodes() {
        Some(nodes) => nodes.to_vec(),
        None => domain.samples(UNIFORM_CELLS + 1)?,
    };
    let n = nodes.len();
    let table = ArcLengthTable::with_cells(curve.clone(), nodes)?;
    let new_domain = Domain::new(domain.min, snapped_end(&domain, table.length()))?;
    let params = new_domain.samples(n)?;
    let mut points = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    for &s in &params {
        let theta = table.invert(s - domain.min)?;
        points.push(eval.position(theta));
        let v = table.velocity(theta)?;
        tangents.push(v / v.norm());
    }
    SampledCurve::from_points_and_tangents(params, points, tangents)?.into_curve()
}

#[derive(Debug)]
struct ArcLengthTable {
    curve: SpaceCurve,
    cells: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ArcLengthTable {
    fn uniform(curve: SpaceCurve, n_cells: usize) -> Result<Self> {
        let cells = curve.domain().samples(n_cells + 1)?;
        Self::with_cells(curve, cells)
    }

    fn with_cells(curve: SpaceCurve, cells: Vec<f64>) -> Result<Self> {
        let mut cumulative = Vec::with_capacity(cells.len());
        cumulative.push(0.0);
        for w in cells.windows(2) {
            let piece = self_integrate(&curve, w[0], w[1])?;
            cumulative.push(cumulative.last().unwrap() + piece);
        }
        Ok(ArcLengthTable { curve, cells, cumulative })
    }

    fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    fn velocity(&self, theta: f64) -> Result<Vec3> {
        velocity(&self.curve, theta)
    }

    fn speed(&self, theta: f64) -> Result<f64> {
        let v = self.velocity(theta)?.norm();
        if !(v >= SPEED_FLOOR) {
            return Err(GeomError::SingularSpeed { s: theta, speed: v });
        }
        Ok(v)
    }

    /// Original parameter at which the arc length from the start equals `len`.
    fn invert(&self, len: f64) -> Result<f64> {
        let total = self.length();
        let len = len.clamp(0.0, total);
        let k = self.cumulative.partition_point(|&c| c <= len).clamp(1, self.cells.len() - 1) - 1;
        let (mut lo, mut hi) = (self.cells[k], self.cells[k + 1]);
        let (c0, c1) = (self.cumulative[k], self.cumulative[k + 1]);
        if c1 - c0 <= 0.0 {
            return Ok(lo);
        }
        let mut theta = lo + (hi - lo) * (len - c0) / (c1 - c0);
        let mut resid = c0 + self_integrate(&self.curve, lo, theta)? - len;
        let tol = 1e-14 * total.max(1.0);
        for _ in 0..60 {
            if resid.abs() <= tol {
                break;
            }
            if resid > 0.0 {
                hi = theta;
            } else {
                lo = theta;
            }
            let mut next = theta - resid / self.speed(theta)?;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            resid += self_integrate(&self.curve, theta, next)?;
            theta = next;
            if hi - lo <= f64::EPSILON * theta.abs().max(1.0) {
                break;
            }
        }
        Ok(theta)
    }
}

/// First derivative in the original parameter, with a one-sided stencil near
/// the ends for curves that only expose positions.
fn velocity(curve: &SpaceCurve, theta: f64) -> Result<Vec3> {
    let eval = curve.evaluator();
    if let Some(v) = eval.velocity(theta) {
        return Ok(v);
    }
    let domain = curve.domain();
    let h = match curve.mode() {
        DerivativeMode::FiniteDifference(s) => s.step,
        DerivativeMode::Analytic => 1e-4 * domain.length(),
    };
    let start = (theta - 2.0 * h).clamp(domain.min, domain.max - 4.0 * h);
    let nodes: Vec<f64> = (0..5).map(|j| start + j as f64 * h).collect();
    Ok(lagrange_derivative_weights(&nodes, theta)
        .iter()
        .zip(&nodes)
        .fold(Vec3::zeros(), |acc, (w, &x)| acc + eval.position(x) * *w))
}

fn self_integrate(curve: &SpaceCurve, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let speed = |x: f64| -> Result<f64> {
        let v = velocity(curve, x)?.norm();
        if !(v >= SPEED_FLOOR) {
            return Err(GeomError::SingularSpeed { s: x, speed: v });
        }
        Ok(v)
    };
    let (fa, fm, fb) = (speed(lo)?, speed(0.5 * (lo + hi))?, speed(hi)?);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    Ok(sign * adaptive_simpson(&speed, lo, hi, fa, fm, fb, whole, CELL_TOL, MAX_DEPTH)?)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

#[derive(Debug)]
struct ArcLengthCurve {
    table: ArcLengthTable,
    start: f64,
    analytic: bool,
}

impl ArcLengthCurve {
    fn theta(&self, s: f64) -> f64 {
        // Quadrature failures surface as NaN positions, which evaluate() rejects.
        self.table.invert(s - self.start).unwrap_or(f64::NAN)
    }
}

impl CurveEval for ArcLengthCurve {
    fn position(&self, s: f64) -> Vec3 {
        self.table.curve.evaluator().position(self.theta(s))
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        if !self.analytic {
            return None;
        }
        let theta = self.theta(s);
        let j = self.table.curve.evaluator().jet(theta)?;
        // Derivatives of theta(s) from d(theta)/ds = 1/|alpha'(theta)|.
        let v = j.d1.norm();
        let a12 = j.d1.dot(&j.d2);
        let v_t = a12 / v;
        let v_tt = (j.d2.norm_squared() + j.d1.dot(&j.d3)) / v - a12 * a12 / (v * v * v);
        let t1 = 1.0 / v;
        let t2 = -v_t / (v * v * v);
        let t3 = -v_tt / v.powi(4) + 3.0 * v_t * v_t / v.powi(5);
        Some(j.compose(Jet([theta, t1, t2, t3])))
    }

    fn velocity(&self, s: f64) -> Option<Vec3> {
        let theta = self.theta(s);
        let v = velocity(&self.table.curve, theta).ok()?;
        Some(v / v.norm())
    }
}
