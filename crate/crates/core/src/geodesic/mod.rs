//! Geodesics on cones: closed-form rectifying generators, an independent ODE
//! oracle, and a verifier combining geodesic curvature, the Clairaut
//! invariant, normal alignment and the development.

use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{
    classification_identity_residual, classify_rectifying_or_spherical, ensure_unit_speed, fit_slant_axis,
    ClassificationReport, CurveClass, SlantAxisFit,
};
use crate::cone::{fit_line, geodesic_curvature_from, ChartCurve, Cone, SphericalBaseCurve};
use crate::curve::{Domain, FrenetFrame, SpaceCurve};
use crate::error::{GeomError, Result};
use crate::jet::{Jet, Vec3};
use crate::tolerance::Analysis;

mod integrate;

pub use integrate::{integrate_geodesic, GeodesicIvp, IntegratedGeodesic, DEFAULT_STEP, DRIFT_LIMIT};

/// Constants of the rectifying geodesic
/// `α(s) = (1/a)√(1+(as+b)²)·y(c + atan(as+b))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectifyingParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RectifyingParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(GeomError::InvalidParameter { name: "a", value: a, reason: "must be positive" });
        }
        if !b.is_finite() {
            return Err(GeomError::InvalidParameter { name: "b", value: b, reason: "must be finite" });
        }
        if !c.is_finite() {
            return Err(GeomError::InvalidParameter { name: "c", value: c, reason: "must be finite" });
        }
        Ok(RectifyingParams { a, b, c })
    }

    /// `[-5/a - b/a, 5/a - b/a]`, centered on the point closest to the vertex.
    pub fn default_domain(&self) -> Domain {
        let s0 = -self.b / self.a;
        Domain { min: s0 - 5.0 / self.a, max: s0 + 5.0 / self.a }
    }

    /// Base parameter `c + atan(as + b)`.
    pub fn base_parameter(&self, s: f64) -> f64 {
        self.c + (self.a * s + self.b).atan()
    }

    /// Chart `(t(s), u(s))` as jets.
    pub fn chart_jets(&self, s: Jet) -> (Jet, Jet) {
        let q = s.scale(self.a) + self.b;
        (q.atan() + self.c, (q * q + 1.0).sqrt().scale(1.0 / self.a))
    }

    /// Closed-form chart of the geodesic.
    pub fn chart(&self, domain: Domain) -> Result<ChartCurve> {
        let p = *self;
        ChartCurve::from_jet_fn(domain, move |s| p.chart_jets(s))
    }
}

/// The rectifying geodesic over `base` on `domain`.
pub fn generate_rectifying(params: &RectifyingParams, base: &SphericalBaseCurve, domain: Domain) -> Result<SpaceCurve> {
    let params = RectifyingParams::new(params.a, params.b, params.c)?;
    let bd = base.domain();
    // t(s) is monotone, so checking the endpoints suffices.
    for s in [domain.min, domain.max] {
        let t = params.base_parameter(s);
        if !bd.contains(t) {
            return Err(GeomError::BaseDomainExceeded { t, min: bd.min, max: bd.max });
        }
    }
    Cone::over(base.clone()).curve_from_chart(domain, move |s| params.chart_jets(s))
}

/// The rectifying geodesic of the right circular cone with half-angle `psi0`
/// on the default domain.
pub fn generate_circular_geodesic(params: &RectifyingParams, psi0: f64) -> Result<SpaceCurve> {
    let base = SphericalBaseCurve::circle(psi0)?;
    generate_rectifying(params, &base, params.default_domain())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Geodesic,
    NotGeodesic,
    Ruling,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesyReport {
    pub max_abs_kg: f64,
    pub clairaut_mean: f64,
    pub clairaut_relvar: f64,
    /// `min |⟨n, N⟩|` over samples with a Frenet frame; absent for rulings.
    pub normal_alignment_min: Option<f64>,
    pub development_straightness_residual: f64,
    pub development_distance: f64,
    pub max_curvature: f64,
    /// `max |τ|` over samples with a Frenet frame.
    pub max_abs_torsion: Option<f64>,
    pub verdict: Verdict,
}

/// Relative variation `(max - min)/|mean|`, falling back to the absolute
/// spread when the mean is essentially zero (rulings).
pub fn relative_spread(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let denom = if mean.abs() > 1e-12 { mean.abs() } else { 1.0 };
    (max - min) / denom
}

/// Checks geodesy of a curve lying on `cone` with four independent signals.
pub fn verify_geodesic(cone: &Cone, curve: &SpaceCurve, analysis: &Analysis) -> Result<GeodesyReport> {
    let tol = analysis.tol;
    let params = curve.sample_parameters(analysis.samples)?;
    let curve = ensure_unit_speed(curve, &params, tol.constancy)?;
    let params = curve.sample_parameters(analysis.samples)?;

    let mut guess = None;
    let mut clairaut = Vec::with_capacity(params.len());
    let mut developed = Vec::with_capacity(params.len());
    let (mut max_kg, mut max_kappa) = (0.0f64, 0.0f64);
    let (mut align, mut torsion): (Option<f64>, Option<f64>) = (None, None);
    let mut all_straight = true;
    for &s in &params {
        let jet = curve.jet_at(s)?;
        let state = cone.chart_state(jet.pos, jet.d1, tol.on_cone, guess)?;
        guess = Some(state.t);
        let normal = cone.normal_at(state.t)?;
        max_kg = max_kg.max(geodesic_curvature_from(&jet, normal).abs());
        clairaut.push(state.clairaut());
        developed.push(Vector2::new(state.u * state.t.cos(), state.u * state.t.sin()));
        match FrenetFrame::from_jet(&jet, s, tol.kappa_floor) {
            Ok(f) => {
                all_straight = false;
                max_kappa = max_kappa.max(f.curvature);
                align = Some(align.map_or(f64::INFINITY, |a: f64| a).min(f.normal.dot(&normal).abs()));
                torsion = Some(torsion.unwrap_or(0.0).max(f.torsion.abs()));
            }
            Err(GeomError::VanishingCurvature { kappa, .. }) => max_kappa = max_kappa.max(kappa),
            Err(e) => return Err(e),
        }
    }
    let clairaut_mean = clairaut.iter().sum::<f64>() / clairaut.len() as f64;
    let clairaut_relvar = relative_spread(&clairaut);
    let line = fit_line(&developed)?;

    let oracles_pass =
        max_kg < tol.geodesic_curvature && clairaut_relvar < tol.clairaut && line.max_residual < tol.straightness;
    let verdict = if !oracles_pass {
        Verdict::NotGeodesic
    } else if all_straight {
        Verdict::Ruling
    } else if align.is_some_and(|a| a > 1.0 - tol.alignment) {
        Verdict::Geodesic
    } else {
        Verdict::NotGeodesic
    };
    Ok(GeodesyReport {
        max_abs_kg: max_kg,
        clairaut_mean,
        clairaut_relvar,
        normal_alignment_min: align,
        development_straightness_residual: line.max_residual,
        development_distance: line.distance_from_origin,
        max_curvature: max_kappa,
        max_abs_torsion: torsion,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosestApproach {
    pub s: f64,
    pub distance: f64,
}

/// Point of the curve closest to the origin: the sampled minimum of `|α|`
/// refined by Newton on `⟨α, α'⟩ = 0`.
pub fn closest_approach(curve: &SpaceCurve, analysis: &Analysis) -> Result<ClosestApproach> {
    let params = curve.sample_parameters(analysis.samples)?;
    let mut best = (f64::INFINITY, params[0]);
    for &s in &params {
        let d = curve.evaluate(s)?.norm();
        if d < best.0 {
            best = (d, s);
        }
    }
    let usable = curve.usable_domain()?;
    let mut s = best.1;
    for _ in 0..32 {
        let j = curve.jet_at(s)?;
        let g = j.pos.dot(&j.d1);
        let dg = j.d1.norm_squared() + j.pos.dot(&j.d2);
        if !(dg > 0.0) {
            break;
        }
        let next = (s - g / dg).clamp(usable.min, usable.max);
        let done = (next - s).abs() < 1e-15 * (1.0 + s.abs());
        s = next;
        if done {
            break;
        }
    }
    Ok(ClosestApproach { s, distance: curve.evaluate(s)?.norm() })
}

/// Joint check that the circular-cone geodesic is rectifying, a slant helix
/// about the cone axis, and a geodesic, plus the identity residual for the
/// cone axis and one random axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub psi0: f64,
    #[serde(flatten)]
    pub classification: ClassificationReport,
    #[serde(flatten)]
    pub slant: SlantAxisFit,
    #[serde(flatten)]
    pub geodesy: GeodesyReport,
    /// Angle in radians between the fitted axis and the z-axis.
    pub axis_angle_from_e3: f64,
    pub random_axis: Vec3,
    pub identity_residual_e3: Option<f64>,
    pub identity_residual_random: Option<f64>,
    pub rectifying: bool,
    pub slant_helix: bool,
    pub geodesic: bool,
    pub all_positive: bool,
    /// Names of the checks that failed; empty when everything agrees.
    pub failures: Vec<String>,
}

pub fn cross_check_theorem4(
    params: &RectifyingParams,
    psi0: f64,
    seed: u64,
    analysis: &Analysis,
) -> Result<CrossCheckReport> {
    cross_check_on_cone(params, psi0, psi0, seed, analysis)
}

/// As [`cross_check_theorem4`], but verifies the curve built for `psi_curve`
/// against the cone with half-angle `psi_cone`.
pub fn cross_check_on_cone(
    params: &RectifyingParams,
    psi_curve: f64,
    psi_cone: f64,
    seed: u64,
    analysis: &Analysis,
) -> Result<CrossCheckReport> {
    let curve = generate_circular_geodesic(params, psi_curve)?;
    let cone = Cone::circular(psi_cone)?;
    let geodesy = verify_geodesic(&cone, &curve, analysis)?;
    let classification = classify_rectifying_or_spherical(&curve, analysis)?;
    let slant = fit_slant_axis(&curve, analysis)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_axis = loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            break v / n;
        }
    };
    let rectifying = classification.label == CurveClass::Rectifying;
    let (identity_residual_e3, identity_residual_random) = if rectifying {
        (
            Some(classification_identity_residual(&curve, &classification, Vec3::z(), analysis)?.max_abs),
            Some(classification_identity_residual(&curve, &classification, random_axis, analysis)?.max_abs),
        )
    } else {
        (None, None)
    };
    let axis_angle_from_e3 = slant.axis.cross(&Vec3::z()).norm().atan2(slant.axis.z.abs());
    let slant_helix = slant.is_slant_helix(analysis.tol.slant);
    let geodesic = geodesy.verdict == Verdict::Geodesic;

    let mut failures = Vec::new();
    if !rectifying {
        failures.push(format!("classification: {}", classification.label));
    }
    if !slant_helix {
        failures.push("slant-helix".to_string());
    }
    if !geodesic {
        failures.push("geodesic".to_string());
    }
    let identity_tol = analysis.tol.geodesic_curvature;
    for (name, r) in [("identity-e3", identity_residual_e3), ("identity-random", identity_residual_random)] {
        if r.is_some_and(|r| !(r < identity_tol)) {
            failures.push(name.to_string());
        }
    }
    Ok(CrossCheckReport {
        a: params.a,
        b: params.b,
        c: params.c,
        psi0: psi_cone,
        classification,
        slant,
        geodesy,
        axis_angle_from_e3,
        random_axis,
        identity_residual_e3,
        identity_residual_random,
        rectifying,
        slant_helix,
        geodesic,
        all_positive: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::CurvatureProfile;
    use crate::curve::DerivativeMode;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn analytic() -> Analysis {
        Analysis::for_mode(DerivativeMode::Analytic)
    }

    #[test]
    fn circular_geodesic_at_origin() {
        let p = RectifyingParams::new(1.0, 0.0, 0.0).unwrap();
        let c = generate_circular_geodesic(&p, FRAC_PI_4).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c.evaluate(0.0).unwrap() - Vec3::new(h, 0.0, h)).norm() < 1e-15);
    }

    #[test]
    fn norm_and_speed_of_generated_curves() {
        let p = RectifyingParams::new(2.0, 1.0, 0.1).unwrap();
        let base = SphericalBaseCurve::from_geodesic_curvature(
            CurvatureProfile { mean: 0.5, amplitude: 0.2, frequency: 2.0, phase: 0.0 },
            Vec3::new(0.0, 0.4, 1.0),
            Vec3::new(1.0, 0.0, 0.0),
            Domain::new(-2.0, 2.0).unwrap(),
        )
        .unwrap();
        let c = generate_rectifying(&p, &base, p.default_domain()).unwrap();
        for s in c.domain().samples(33).unwrap() {
            let q = 2.0 * s + 1.0;
            assert!((c.evaluate(s).unwrap().norm() - (1.0 + q * q).sqrt() / 2.0).abs() < 1e-12);
            assert!((c.derivative(s, 1).unwrap().norm() - 1.0).abs() < 1e-8);
        }
        let ca = closest_approach(&c, &analytic()).unwrap();
        assert!((ca.s + 0.5).abs() < 1e-8 && (ca.distance - 0.5).abs() < 1e-12);
    }

    #[test]
    fn base_domain_is_enforced() {
        let p = RectifyingParams::new(1.0, 0.0, 1.0).unwrap();
        let base = SphericalBaseCurve::from_geodesic_curvature(
            CurvatureProfile::constant(0.5),
            Vec3::z(),
            Vec3::x(),
            Domain::new(-1.0, 1.0).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            generate_rectifying(&p, &base, p.default_domain()),
            Err(GeomError::BaseDomainExceeded { .. })
        ));
        assert!(RectifyingParams::new(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn verdicts_for_geodesic_parallel_and_ruling() {
        let an = analytic();
        let cone = Cone::circular(FRAC_PI_3).unwrap();
        let p = RectifyingParams::new(1.0, 0.0, 0.0).unwrap();
        let g = verify_geodesic(&cone, &generate_circular_geodesic(&p, FRAC_PI_3).unwrap(), &an).unwrap();
        assert_eq!(g.verdict, Verdict::Geodesic);
        assert!(g.normal_alignment_min.unwrap() > 1.0 - 1e-6);
        assert!((g.clairaut_mean.abs() - 1.0).abs() < 1e-10);
        assert!((g.development_distance - 1.0).abs() < 1e-10);

        let lat = cone.latitude_circle(2.0, 0.0, Domain::new(-1.0, 1.0).unwrap()).unwrap();
        let r = verify_geodesic(&cone, &lat, &an).unwrap();
        assert_eq!(r.verdict, Verdict::NotGeodesic);
        assert!((r.max_abs_kg - 0.5).abs() < 1e-10);

        let ruling = cone.ruling(0.3, Domain::new(0.5, 2.0).unwrap()).unwrap();
        let r = verify_geodesic(&cone, &ruling, &an).unwrap();
        assert_eq!(r.verdict, Verdict::Ruling);
        assert_eq!(r.normal_alignment_min, None);
    }

    #[test]
    fn crosscheck_reference_case() {
        let p = RectifyingParams::new(1.0, 0.0, 0.0).unwrap();
        let r = cross_check_theorem4(&p, FRAC_PI_4, 7, &analytic()).unwrap();
        assert!(r.all_positive, "{:?}", r.failures);
        assert!(r.axis_angle_from_e3 < 1e-8);
        assert!(r.identity_residual_e3.unwrap() < 1e-4 && r.identity_residual_random.unwrap() < 1e-4);
        let json = serde_json::to_value(&r).unwrap();
        for key in ["label", "fitted_a", "axis", "residual", "max_abs_kg", "verdict", "clairaut_relvar"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn crosscheck_on_the_wrong_cone_fails_loudly() {
        let p = RectifyingParams::new(1.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            cross_check_on_cone(&p, FRAC_PI_3, FRAC_PI_6, 1, &analytic()),
            Err(GeomError::NotOnCone { .. })
        ));
    }
}
