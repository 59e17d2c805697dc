//! Closed-form reference curves with analytic derivatives.

use crate::error::{GeomError, Result};
use crate::jet::{Jet, Vec3};

use super::{Domain, SpaceCurve};

/// Unit-speed circle of radius `r` about the origin in the xy-plane.
pub fn circle(r: f64, domain: Domain) -> Result<SpaceCurve> {
    circle_in_plane(Vec3::zeros(), Vec3::x(), Vec3::y(), r, domain)
}

/// Unit-speed circle `center + r(cos(s/r) e1 + sin(s/r) e2)`; `e1`, `e2` are
/// orthonormalized first.
pub fn circle_in_plane(center: Vec3, e1: Vec3, e2: Vec3, r: f64, domain: Domain) -> Result<SpaceCurve> {
    if !(r > 0.0) {
        return Err(GeomError::InvalidParameter { name: "r", value: r, reason: "radius must be positive" });
    }
    let (e1, e2) = orthonormal_pair(e1, e2)?;
    SpaceCurve::from_jet_fn(domain, move |s| {
        let phi = s.scale(1.0 / r);
        let (c, sn) = (phi.cos().scale(r), phi.sin().scale(r));
        let comp = |k: usize| c.scale(e1[k]) + sn.scale(e2[k]) + center[k];
        [comp(0), comp(1), comp(2)]
    })
}

/// Unit-speed circular helix `(R cos(s/c), R sin(s/c), P s/c)` with
/// `c = sqrt(R² + P²)`, shifted by `offset`. Curvature `R/c²`, torsion `P/c²`.
pub fn helix_offset(radius: f64, pitch: f64, offset: Vec3, domain: Domain) -> Result<SpaceCurve> {
    if !(radius > 0.0) {
        return Err(GeomError::InvalidParameter {
            name: "radius",
            value: radius,
            reason: "helix radius must be positive",
        });
    }
    let c = radius.hypot(pitch);
    SpaceCurve::from_jet_fn(domain, move |s| {
        let phi = s.scale(1.0 / c);
        [phi.cos().scale(radius) + offset.x, phi.sin().scale(radius) + offset.y, s.scale(pitch / c) + offset.z]
    })
}

pub fn helix(radius: f64, pitch: f64, domain: Domain) -> Result<SpaceCurve> {
    helix_offset(radius, pitch, Vec3::zeros(), domain)
}

/// Helix with prescribed constant curvature and torsion.
pub fn helix_with_curvature(kappa: f64, tau: f64, domain: Domain) -> Result<SpaceCurve> {
    let denom = kappa * kappa + tau * tau;
    helix(kappa / denom, tau / denom, domain)
}

/// Unit-speed straight line `origin + s * direction/|direction|`.
pub fn line(origin: Vec3, direction: Vec3, domain: Domain) -> Result<SpaceCurve> {
    let n = direction.norm();
    if !(n > 0.0) {
        return Err(GeomError::InvalidParameter { name: "direction", value: n, reason: "direction must be nonzero" });
    }
    let d = direction / n;
    SpaceCurve::from_jet_fn(domain, move |s| {
        [s.scale(d.x) + origin.x, s.scale(d.y) + origin.y, s.scale(d.z) + origin.z]
    })
}

/// The twisted cubic `(t, t², t³)`; not unit speed.
pub fn twisted_cubic(domain: Domain) -> Result<SpaceCurve> {
    SpaceCurve::from_jet_fn(domain, |t| [t, t * t, t * t * t])
}

/// Polynomial curve `sum_k coeffs[k] t^k`; not unit speed in general.
pub fn polynomial(coeffs: Vec<Vec3>, domain: Domain) -> Result<SpaceCurve> {
    SpaceCurve::from_jet_fn(domain, move |t| {
        let mut acc = [Jet::constant(0.0); 3];
        for c in coeffs.iter().rev() {
            for k in 0..3 {
                acc[k] = acc[k] * t + c[k];
            }
        }
        acc
    })
}

pub(crate) fn orthonormal_pair(e1: Vec3, e2: Vec3) -> Result<(Vec3, Vec3)> {
    let n1 = e1.norm();
    if !(n1 > 0.0) {
        return Err(GeomError::InvalidParameter { name: "e1", value: n1, reason: "basis vector must be nonzero" });
    }
    let e1 = e1 / n1;
    let w = e2 - e1 * e1.dot(&e2);
    let n2 = w.norm();
    if !(n2 > 1e-12) {
        return Err(GeomError::InvalidParameter { name: "e2", value: n2, reason: "basis vectors must be independent" });
    }
    Ok((e1, w / n2))
}
