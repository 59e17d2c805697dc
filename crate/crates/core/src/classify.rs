//! Curve classes: rectifying, origin-centered spherical, slant helix, planar.
//!
//! Everything here samples a unit-speed curve on a uniform grid of its usable
//! domain and compares sampled invariants against the tolerances in
//! [`Analysis`]. Curves that are not unit-speed are reparametrized first.

use std::borrow::Cow;
use std::fmt;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::curve::{frenet_apparatus, reparametrize_arclength, FrenetFrame, SpaceCurve};
use crate::error::{GeomError, Result};
use crate::jet::Vec3;
use crate::tolerance::Analysis;

pub const MIN_CONSTANCY_SAMPLES: usize = 8;
pub const MIN_AXIS_SAMPLES: usize = 16;

/// Summary statistics of a sampled scalar series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstancyStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `(max - min)/|mean|`, or `max - min` in absolute mode.
    pub relvar: f64,
    pub constant: bool,
}

/// Relative constancy test: `(max - min)/|mean| < tol`.
pub fn constancy(samples: &[f64], tol: f64) -> Result<ConstancyStats> {
    let (mean, min, max) = series_stats(samples)?;
    if mean == 0.0 {
        return Err(GeomError::ZeroMean);
    }
    let relvar = (max - min) / mean.abs();
    Ok(ConstancyStats { mean, min, max, relvar, constant: relvar < tol })
}

/// Absolute constancy test for series that may be close to zero.
pub fn constancy_absolute(samples: &[f64], tol: f64) -> Result<ConstancyStats> {
    let (mean, min, max) = series_stats(samples)?;
    let spread = max - min;
    Ok(ConstancyStats { mean, min, max, relvar: spread, constant: spread < tol })
}

fn series_stats(samples: &[f64]) -> Result<(f64, f64, f64)> {
    if samples.len() < MIN_CONSTANCY_SAMPLES {
        return Err(GeomError::InsufficientSamples { needed: MIN_CONSTANCY_SAMPLES, got: samples.len() });
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(GeomError::NonFinite("constancy samples"));
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((mean, min, max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveClass {
    Rectifying,
    SphericalCentered,
    /// Constant cross magnitude, but the two branches cannot be told apart.
    Ambiguous,
    Neither,
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CurveClass::Rectifying => "Rectifying",
            CurveClass::SphericalCentered => "SphericalCentered",
            CurveClass::Ambiguous => "Ambiguous",
            CurveClass::Neither => "Neither",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub label: CurveClass,
    pub cross_magnitude_mean: f64,
    pub cross_magnitude_relvar: f64,
    /// `max |⟨α, n⟩|`.
    pub normal_component_max: f64,
    /// `max |⟨α, t⟩|`.
    pub tangential_component_max: f64,
    pub fitted_a: Option<f64>,
    pub fitted_b: Option<f64>,
    /// Samples `(s, ⟨α(s), t(s)⟩)`.
    #[serde(skip)]
    pub tangential_profile: Vec<(f64, f64)>,
}

/// Returns the curve itself when it is unit-speed at the sample points, and
/// an arc-length reparametrization otherwise.
pub fn ensure_unit_speed<'a>(curve: &'a SpaceCurve, params: &[f64], tol: f64) -> Result<Cow<'a, SpaceCurve>> {
    for &s in params {
        if (curve.velocity(s)?.norm() - 1.0).abs() > tol {
            return Ok(Cow::Owned(reparametrize_arclength(curve)?));
        }
    }
    Ok(Cow::Borrowed(curve))
}

fn prepared<'a>(curve: &'a SpaceCurve, analysis: &Analysis) -> Result<(Cow<'a, SpaceCurve>, Vec<f64>)> {
    let params = curve.sample_parameters(analysis.samples)?;
    let c = ensure_unit_speed(curve, &params, analysis.tol.constancy)?;
    let params = match c {
        Cow::Borrowed(_) => params,
        Cow::Owned(ref owned) => owned.sample_parameters(analysis.samples)?,
    };
    Ok((c, params))
}

fn frames(curve: &SpaceCurve, params: &[f64], analysis: &Analysis) -> Result<Vec<FrenetFrame>> {
    params.iter().map(|&s| frenet_apparatus(curve, s, analysis.tol.kappa_floor)).collect()
}

/// Decides between the rectifying and the origin-centered spherical branch.
///
/// A constant, nonzero `|α × α'|` is necessary for both. Rectifying curves
/// additionally have `⟨α, n⟩ ≡ 0` with `⟨α, t⟩` not identically zero; centered
/// spherical curves have `⟨α, t⟩ ≡ 0`.
pub fn classify_rectifying_or_spherical(curve: &SpaceCurve, analysis: &Analysis) -> Result<ClassificationReport> {
    let (curve, params) = prepared(curve, analysis)?;
    let tol = analysis.tol.constancy;
    let frames = frames(&curve, &params, analysis)?;

    let mut cross = Vec::with_capacity(params.len());
    let mut signed_cross = Vec::with_capacity(params.len());
    let mut tangential = Vec::with_capacity(params.len());
    let (mut normal_max, mut tangential_max) = (0.0f64, 0.0f64);
    let (mut normal_rel, mut tangential_rel) = (0.0f64, 0.0f64);
    let mut radius_max = 0.0f64;
    for (&s, f) in params.iter().zip(&frames) {
        let p = curve.evaluate(s)?;
        let c = p.cross(&f.tangent);
        let r = p.norm();
        let (an, at) = (p.dot(&f.normal), p.dot(&f.tangent));
        cross.push(c.norm());
        signed_cross.push(c.dot(&f.normal));
        tangential.push((s, at));
        normal_max = normal_max.max(an.abs());
        tangential_max = tangential_max.max(at.abs());
        if r > 0.0 {
            normal_rel = normal_rel.max(an.abs() / r);
            tangential_rel = tangential_rel.max(at.abs() / r);
        }
        radius_max = radius_max.max(r);
    }

    let mean = cross.iter().sum::<f64>() / cross.len() as f64;
    let mut report = ClassificationReport {
        label: CurveClass::Neither,
        cross_magnitude_mean: mean,
        cross_magnitude_relvar: f64::INFINITY,
        normal_component_max: normal_max,
        tangential_component_max: tangential_max,
        fitted_a: None,
        fitted_b: None,
        tangential_profile: tangential,
    };
    // "Nonzero" is judged against the size of the curve.
    if !(mean > tol * radius_max) {
        return Ok(report);
    }
    let stats = constancy(&cross, tol)?;
    report.cross_magnitude_relvar = stats.relvar;
    if !stats.constant {
        return Ok(report);
    }

    let rectifying = normal_rel < tol;
    let spherical = tangential_rel < tol;
    report.label = match (rectifying, spherical) {
        (true, false) => CurveClass::Rectifying,
        (false, true) => CurveClass::SphericalCentered,
        _ => CurveClass::Ambiguous,
    };
    if report.label == CurveClass::Rectifying {
        // α × α' = (1/a) n fixes both the size and the sign of a; then
        // ⟨α, t⟩ = s + b/a.
        let a = 1.0 / (signed_cross.iter().sum::<f64>() / signed_cross.len() as f64);
        let (xs, ys): (Vec<f64>, Vec<f64>) = report.tangential_profile.iter().copied().unzip();
        let fit = affine_fit(&xs, &ys)?;
        report.fitted_a = Some(a);
        report.fitted_b = Some(fit.intercept * a);
    }
    Ok(report)
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn affine_fit(xs: &[f64], ys: &[f64]) -> Result<AffineFit> {
    if xs.len() != ys.len() {
        return Err(GeomError::InvalidSamples(format!("{} abscissae for {} values", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(GeomError::InsufficientSamples { needed: 2, got: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(GeomError::DegenerateFit { gap: 0.0, tol: 0.0 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).abs()).fold(0.0, f64::max);
    Ok(AffineFit { slope, intercept, max_residual })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionRatioProfile {
    pub params: Vec<f64>,
    pub ratios: Vec<f64>,
    pub fit: AffineFit,
}

/// Samples of `τ/κ` with an affine fit; rectifying curves give `as + b`.
pub fn torsion_ratio_profile(curve: &SpaceCurve, analysis: &Analysis) -> Result<TorsionRatioProfile> {
    let (curve, params) = prepared(curve, analysis)?;
    let ratios: Vec<f64> = frames(&curve, &params, analysis)?.iter().map(|f| f.torsion / f.curvature).collect();
    let fit = affine_fit(&params, &ratios)?;
    Ok(TorsionRatioProfile { params, ratios, fit })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlantAxisFit {
    pub axis: Vec3,
    /// Mean of `⟨n, U⟩`.
    pub cos_angle_mean: f64,
    /// Standard deviation of `⟨n, U⟩` over the samples.
    pub residual: f64,
}

impl SlantAxisFit {
    pub fn is_slant_helix(&self, tol: f64) -> bool {
        self.residual < tol
    }
}

/// Direction `U` minimizing the variance of `⟨n(s), U⟩`.
///
/// That variance is `Uᵀ Cov(n) U`, so `U` is the eigenvector of the normal
/// covariance with the smallest eigenvalue and the residual is its square
/// root. A near-repeated smallest eigenvalue means the axis is not determined.
pub fn fit_slant_axis(curve: &SpaceCurve, analysis: &Analysis) -> Result<SlantAxisFit> {
    if analysis.samples < MIN_AXIS_SAMPLES {
        return Err(GeomError::InsufficientSamples { needed: MIN_AXIS_SAMPLES, got: analysis.samples });
    }
    let (curve, params) = prepared(curve, analysis)?;
    let normals: Vec<Vec3> = frames(&curve, &params, analysis)?.iter().map(|f| f.normal).collect();
    axis_from_normals(&normals, analysis.tol.axis_gap)
}

pub(crate) fn axis_from_normals(normals: &[Vec3], gap_tol: f64) -> Result<SlantAxisFit> {
    let n = normals.len() as f64;
    let mean = normals.iter().fold(Vec3::zeros(), |a, v| a + v) / n;
    let cov = normals.iter().fold(Matrix3::zeros(), |a, v| {
        let d = v - mean;
        a + d * d.transpose()
    }) / n;
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let (l1, l2) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
    if l2 - l1 < gap_tol {
        return Err(GeomError::DegenerateFit { gap: l2 - l1, tol: gap_tol });
    }
    let axis = canonical_sign(eig.eigenvectors.column(order[0]).normalize());
    let dots: Vec<f64> = normals.iter().map(|v| v.dot(&axis)).collect();
    let cos_mean = dots.iter().sum::<f64>() / n;
    let var = dots.iter().map(|d| (d - cos_mean).powi(2)).sum::<f64>() / n;
    Ok(SlantAxisFit { axis, cos_angle_mean: cos_mean, residual: var.sqrt() })
}

/// Picks the representative of `±v` with nonnegative third component,
/// breaking ties on the second and then the first component.
pub fn canonical_sign(v: Vec3) -> Vec3 {
    const TIE: f64 = 1e-12;
    for k in [2, 1, 0] {
        if v[k].abs() > TIE {
            return if v[k] < 0.0 { -v } else { v };
        }
    }
    v
}

/// `max |τ|` over the samples.
pub fn max_abs_torsion(curve: &SpaceCurve, analysis: &Analysis) -> Result<f64> {
    let (curve, params) = prepared(curve, analysis)?;
    Ok(frames(&curve, &params, analysis)?.iter().map(|f| f.torsion.abs()).fold(0.0, f64::max))
}

/// True iff `max |τ| < tol`.
pub fn is_planar(curve: &SpaceCurve, tol: f64, analysis: &Analysis) -> Result<bool> {
    Ok(max_abs_torsion(curve, analysis)? < tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub params: Vec<f64>,
    pub values: Vec<f64>,
    pub max_abs: f64,
}

/// Evaluates `((1+(as+b)²)^{3/2}/a)·d⟨y,U⟩/ds + (1/κ)·d⟨n,U⟩/ds` along a
/// rectifying curve, with `y = aα/√(1+(as+b)²)` and `a, b` from `report`.
pub fn classification_identity_residual(
    curve: &SpaceCurve,
    report: &ClassificationReport,
    axis: Vec3,
    analysis: &Analysis,
) -> Result<IdentityResidual> {
    match (report.label, report.fitted_a, report.fitted_b) {
        (CurveClass::Rectifying, Some(a), Some(b)) => identity_residual_with(curve, a, b, axis, analysis),
        _ => Err(GeomError::NotRectifying { label: report.label.to_string() }),
    }
}

/// Same identity with caller-supplied constants.
pub fn identity_residual_with(
    curve: &SpaceCurve,
    a: f64,
    b: f64,
    axis: Vec3,
    analysis: &Analysis,
) -> Result<IdentityResidual> {
    if !(a != 0.0 && a.is_finite()) {
        return Err(GeomError::InvalidParameter { name: "a", value: a, reason: "must be finite and nonzero" });
    }
    let (curve, _) = prepared(curve, analysis)?;
    let floor = analysis.tol.kappa_floor;
    let usable = curve.usable_domain()?;
    let params = usable.samples(analysis.samples)?;
    let mut values = Vec::with_capacity(params.len());
    for &s in &params {
        let frame = frenet_apparatus(&curve, s, floor)?;
        let p = curve.evaluate(s)?;
        let v = curve.velocity(s)?;
        let q = a * s + b;
        let w = (1.0 + q * q).sqrt();
        let dw = a * q / w;
        let dy = (v * a) / w - p * (a * dw / (w * w));
        let dn = normal_rate(&curve, s, &frame, p.norm(), axis, usable, floor)?;
        values.push(w * w * w / a * dy.dot(&axis) + dn / frame.curvature);
    }
    let max_abs = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(IdentityResidual { params, values, max_abs })
}

/// `d⟨n, U⟩/ds` by a five-point Lagrange stencil.
///
/// The normal carries round-off of order `ε|α|/(κ h²)` in finite-difference
/// mode (`ε|α|/κ` with analytic derivatives), while the stencil's truncation
/// error grows like `H⁴ν⁵`, where the variation rate `ν` is the larger of the
/// frame's rotation rate `√(κ² + τ²)` and the inverse distance to the
/// origin (the scale on which `κ` and `τ` themselves change along a
/// rectifying curve). The step `H` balances the two, and the stencil is
/// shifted to one side near the ends of the domain.
fn normal_rate(
    curve: &SpaceCurve,
    s: f64,
    frame: &FrenetFrame,
    radius: f64,
    axis: Vec3,
    domain: crate::curve::Domain,
    floor: f64,
) -> Result<f64> {
    let spacing = match curve.mode() {
        crate::curve::DerivativeMode::Analytic => 1.0,
        crate::curve::DerivativeMode::FiniteDifference(settings) => settings.step * settings.step,
    };
    let noise = 10.0 * f64::EPSILON * radius.max(1.0) / (frame.curvature * spacing);
    let rate = frame.curvature.hypot(frame.torsion).max(1.0 / radius);
    let step = (noise.powf(0.2) / rate).clamp(1e-6 * domain.length(), domain.length() / 8.0);
    let start = (s - 2.0 * step).max(domain.min).min(domain.max - 4.0 * step);
    let nodes: Vec<f64> = (0..5).map(|k| (start + k as f64 * step).clamp(domain.min, domain.max)).collect();
    let weights = crate::curve::lagrange_derivative_weights(&nodes, s);
    let mut derivative = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        derivative += w * frenet_apparatus(curve, *x, floor)?.normal.dot(&axis);
    }
    Ok(derivative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{families, Domain};
    use crate::jet::Jet;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn analytic() -> Analysis {
        Analysis::for_mode(crate::curve::DerivativeMode::Analytic)
    }

    /// Circular-cone rectifying curve written out directly.
    fn rectifying(a: f64, b: f64, c: f64, psi: f64) -> SpaceCurve {
        let d = Domain::new(-5.0 / a - b / a, 5.0 / a - b / a).unwrap();
        let sp = psi.sin();
        SpaceCurve::from_jet_fn(d, move |s| {
            let q = s.scale(a) + b;
            let r = (q * q + 1.0).sqrt().scale(1.0 / a);
            let phi = (q.atan() + c).scale(1.0 / sp);
            [r * phi.cos().scale(sp), r * phi.sin().scale(sp), r.scale(psi.cos())]
        })
        .unwrap()
    }

    #[test]
    fn constancy_examples() {
        let st = constancy(&[0.5; 10], 1e-6).unwrap();
        assert!(st.constant && st.relvar == 0.0 && st.mean == 0.5);
        let spread = [1.0, 1.1, 1.0, 1.1, 1.0, 1.1, 1.0, 1.1];
        assert!(!constancy(&spread, 1e-3).unwrap().constant);
        assert!(matches!(constancy(&[1.0; 3], 1e-3), Err(GeomError::InsufficientSamples { .. })));
        assert!(matches!(constancy(&[1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0], 1e-3), Err(GeomError::ZeroMean)));
        assert!(constancy_absolute(&[0.0; 8], 1e-9).unwrap().constant);
    }

    #[test]
    fn rectifying_curve_is_recognized_with_its_constants() {
        let r = classify_rectifying_or_spherical(&rectifying(1.0, 0.0, 0.0, FRAC_PI_3), &analytic()).unwrap();
        assert_eq!(r.label, CurveClass::Rectifying);
        assert!((r.fitted_a.unwrap() - 1.0).abs() < 1e-9);
        assert!(r.fitted_b.unwrap().abs() < 1e-9);
        let r = classify_rectifying_or_spherical(&rectifying(2.0, -0.7, 0.3, 0.9), &analytic()).unwrap();
        assert_eq!(r.label, CurveClass::Rectifying);
        assert!((r.fitted_a.unwrap() - 2.0).abs() < 1e-8);
        assert!((r.fitted_b.unwrap() + 0.7).abs() < 1e-8);
        assert!((r.cross_magnitude_mean - 0.5).abs() < 1e-12);
    }

    #[test]
    fn great_circle_is_centered_spherical() {
        let c = families::circle(3.0, Domain::new(0.0, 5.0).unwrap()).unwrap();
        let r = classify_rectifying_or_spherical(&c, &analytic()).unwrap();
        assert_eq!(r.label, CurveClass::SphericalCentered);
        assert!((r.cross_magnitude_mean - 3.0).abs() < 1e-12);
        assert_eq!(r.fitted_a, None);
    }

    #[test]
    fn offset_helix_is_neither() {
        let d = Domain::new(-3.0, 3.0).unwrap();
        let h = families::helix_offset(1.0, 0.5, Vec3::new(2.0, 0.0, 0.0), d).unwrap();
        // Oracle: spread of |α × α'| by direct evaluation.
        let vals: Vec<f64> = d
            .samples(64)
            .unwrap()
            .iter()
            .map(|&s| h.evaluate(s).unwrap().cross(&h.derivative(s, 1).unwrap()).norm())
            .collect();
        let spread =
            vals.iter().copied().fold(f64::NEG_INFINITY, f64::max) - vals.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(spread > 1e-2);
        let r = classify_rectifying_or_spherical(&h, &analytic()).unwrap();
        assert_eq!(r.label, CurveClass::Neither);
    }

    #[test]
    fn line_is_refused() {
        let l =
            families::line(Vec3::new(0.0, 1.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Domain::new(0.0, 1.0).unwrap()).unwrap();
        assert!(matches!(classify_rectifying_or_spherical(&l, &analytic()), Err(GeomError::VanishingCurvature { .. })));
    }

    #[test]
    fn non_unit_speed_input_is_reparametrized() {
        // Great circle of radius 2 traversed at speed 2.
        let c = SpaceCurve::from_jet_fn(Domain::new(0.0, 2.0).unwrap(), |t| {
            [t.cos().scale(2.0), t.sin().scale(2.0), Jet::constant(0.0)]
        })
        .unwrap();
        let r = classify_rectifying_or_spherical(&c, &analytic()).unwrap();
        assert_eq!(r.label, CurveClass::SphericalCentered);
        assert!((r.cross_magnitude_mean - 2.0).abs() < 1e-9);
    }

    #[test]
    fn torsion_ratio_examples() {
        let p = torsion_ratio_profile(&rectifying(1.0, 2.0, 0.0, 0.8), &analytic()).unwrap();
        assert!((p.fit.slope - 1.0).abs() < 1e-8);
        assert!((p.fit.intercept - 2.0).abs() < 1e-8);
        assert!(p.fit.max_residual < 1e-5);
        let c = families::circle(1.5, Domain::new(0.0, 4.0).unwrap()).unwrap();
        assert!(torsion_ratio_profile(&c, &analytic()).unwrap().ratios.iter().all(|r| r.abs() < 1e-14));
        let h = families::helix_with_curvature(1.0, 0.7, Domain::new(-2.0, 2.0).unwrap()).unwrap();
        let p = torsion_ratio_profile(&h, &analytic()).unwrap();
        assert!(p.fit.slope.abs() < 1e-10 && (p.fit.intercept - 0.7).abs() < 1e-10);
    }

    #[test]
    fn slant_axis_of_circular_cone_geodesic() {
        let psi = FRAC_PI_4;
        let fit = fit_slant_axis(&rectifying(1.0, 0.0, 0.0, psi), &analytic()).unwrap();
        assert!((fit.axis - Vec3::z()).norm() < 1e-8);
        assert!((fit.cos_angle_mean.abs() - psi.sin()).abs() < 1e-8);
        assert!(fit.residual < 1e-5);
    }

    #[test]
    fn slant_axis_of_planar_circle_is_the_plane_normal() {
        let c = families::circle(1.0, Domain::new(0.0, 5.0).unwrap()).unwrap();
        let fit = fit_slant_axis(&c, &analytic()).unwrap();
        assert!((fit.axis - Vec3::z()).norm() < 1e-12);
        assert!(fit.cos_angle_mean.abs() < 1e-12 && fit.residual < 1e-12);
    }

    #[test]
    fn twisted_cubic_is_not_a_slant_helix() {
        let c = families::twisted_cubic(Domain::new(-1.0, 1.0).unwrap()).unwrap();
        let an = analytic();
        let fit = fit_slant_axis(&c, &an).unwrap();
        assert!(!fit.is_slant_helix(an.tol.slant));
        // Oracle: no direction on a dense grid of the sphere does much better.
        let unit = reparametrize_arclength(&c).unwrap();
        let normals: Vec<Vec3> = unit
            .sample_parameters(128)
            .unwrap()
            .iter()
            .map(|&s| frenet_apparatus(&unit, s, 1e-9).unwrap().normal)
            .collect();
        let mut best = f64::INFINITY;
        for i in 0..=90 {
            let th = std::f64::consts::PI * i as f64 / 180.0;
            for j in 0..360 {
                let ph = std::f64::consts::PI * j as f64 / 180.0;
                let u = Vec3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
                let d: Vec<f64> = normals.iter().map(|n| n.dot(&u)).collect();
                let m = d.iter().sum::<f64>() / d.len() as f64;
                let var = d.iter().map(|x| (x - m).powi(2)).sum::<f64>() / d.len() as f64;
                best = best.min(var.sqrt());
            }
        }
        assert!(best > 1e-3);
        assert!(fit.residual <= best + 1e-9);
        assert!(fit.residual > 0.5 * best);
    }

    #[test]
    fn planarity_examples() {
        let an = analytic();
        let c = families::circle(2.0, Domain::new(0.0, 3.0).unwrap()).unwrap();
        assert!(is_planar(&c, 1e-9, &an).unwrap());
        assert!(!is_planar(&rectifying(1.0, 0.0, 0.0, 0.6), 1e-6, &an).unwrap());
        let h = families::helix_with_curvature(1.0, 0.5, Domain::new(0.0, 3.0).unwrap()).unwrap();
        assert!(!is_planar(&h, 1e-6, &an).unwrap());
    }

    #[test]
    fn identity_residual_vanishes_only_for_the_right_constant() {
        let an = analytic();
        let curve = rectifying(1.3, 0.4, 0.2, 0.7);
        let report = classify_rectifying_or_spherical(&curve, &an).unwrap();
        for axis in [Vec3::z(), Vec3::x(), Vec3::new(0.3, -0.5, 0.8).normalize()] {
            let r = classification_identity_residual(&curve, &report, axis, &an).unwrap();
            assert!(r.max_abs < 1e-6, "{}", r.max_abs);
        }
        let wrong = identity_residual_with(&curve, 2.6, 0.4, Vec3::z(), &an).unwrap();
        assert!(wrong.max_abs > 1e-2);
        let sphere = families::circle(1.0, Domain::new(0.0, 3.0).unwrap()).unwrap();
        let rs = classify_rectifying_or_spherical(&sphere, &an).unwrap();
        assert!(matches!(
            classification_identity_residual(&sphere, &rs, Vec3::z(), &an),
            Err(GeomError::NotRectifying { .. })
        ));
    }

    #[test]
    fn canonical_sign_rules() {
        assert_eq!(canonical_sign(Vec3::new(0.1, 0.2, -0.3)), Vec3::new(-0.1, -0.2, 0.3));
        assert_eq!(canonical_sign(Vec3::new(0.5, -1.0, 0.0)), Vec3::new(-0.5, 1.0, 0.0));
        assert_eq!(canonical_sign(Vec3::new(-1.0, 0.0, 0.0)), Vec3::new(1.0, 0.0, 0.0));
    }
}
