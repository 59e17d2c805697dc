//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use conegeo::classify::{classify_rectifying_or_spherical, max_abs_torsion, torsion_ratio_profile, CurveClass};
use conegeo::curve::{frenet_apparatus, DerivativeMode, Domain};
use conegeo::geodesic::{
    closest_approach, cross_check_theorem4, integrate_geodesic, verify_geodesic, GeodesicIvp, RectifyingParams,
    Verdict, DEFAULT_STEP,
};
use conegeo::tolerance::Analysis;
use rand::Rng;

type Outcome = Result<String, String>;

fn analytic() -> Analysis {
    Analysis::for_mode(DerivativeMode::Analytic)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fmt_err(e: conegeo::GeomError) -> String {
    format!("error {}: {e}", e.name())
}

/// Pointwise `|α × α' - (1/a) n|` over random rectifying curves.
fn cross_product_identity() -> Outcome {
    let an = analytic();
    let mut worst = 0.0f64;
    for sample in common::rectifying_corpus(101, 20) {
        let a = sample.params.a;
        for s in sample.curve.sample_parameters(256).map_err(fmt_err)? {
            let f = frenet_apparatus(&sample.curve, s, an.tol.kappa_floor).map_err(fmt_err)?;
            let p = sample.curve.evaluate(s).map_err(fmt_err)?;
            let v = sample.curve.derivative(s, 1).map_err(fmt_err)?;
            worst = worst.max((p.cross(&v) - f.normal / a).norm());
        }
    }
    check(worst < 1e-6, format!("max |α×α' - n/a| = {worst:.3e} over 20 curves (< 1e-6)"))
}

fn dichotomy() -> Outcome {
    let an = analytic();
    let mut r = common::rng(202);
    let mut wrong = Vec::new();
    let mut tally = |label: CurveClass, expected: CurveClass, what: &str, i: usize| {
        if label != expected {
            wrong.push(format!("{what} #{i} labeled {label}"));
        }
    };
    for i in 0..10 {
        let s = common::rectifying_sample(&mut r, i);
        tally(
            classify_rectifying_or_spherical(&s.curve, &an).map_err(fmt_err)?.label,
            CurveClass::Rectifying,
            "rectifying",
            i,
        );
    }
    for i in 0..10 {
        let c = common::spherical_curve(&mut r, i);
        tally(
            classify_rectifying_or_spherical(&c, &an).map_err(fmt_err)?.label,
            CurveClass::SphericalCentered,
            "spherical",
            i,
        );
    }
    for i in 0..10 {
        let c = common::generic_curve(&mut r, i);
        tally(classify_rectifying_or_spherical(&c, &an).map_err(fmt_err)?.label, CurveClass::Neither, "generic", i);
    }
    check(wrong.is_empty(), format!("30 curves, {} misclassified {:?}", wrong.len(), wrong))
}

fn forward_geodesy() -> Outcome {
    let an = analytic();
    let (mut kg, mut align, mut relvar, mut straight) = (0.0f64, 1.0f64, 0.0f64, 0.0f64);
    let mut not_geodesic = 0;
    for sample in common::rectifying_corpus(303, 20) {
        let rep = verify_geodesic(&sample.cone.cone, &sample.curve, &an).map_err(fmt_err)?;
        kg = kg.max(rep.max_abs_kg);
        align = align.min(rep.normal_alignment_min.unwrap_or(0.0));
        relvar = relvar.max(rep.clairaut_relvar);
        straight = straight.max(rep.development_straightness_residual);
        if rep.verdict != Verdict::Geodesic {
            not_geodesic += 1;
        }
    }
    let ok = not_geodesic == 0 && kg < 1e-4 && align > 1.0 - 1e-5 && relvar < 1e-5 && straight < 1e-6;
    check(
        ok,
        format!(
            "20 curves, {not_geodesic} not geodesic; max|κg| {kg:.2e}, min|⟨n,N⟩| 1-{:.2e}, Clairaut relvar {relvar:.2e}, straightness {straight:.2e}",
            1.0 - align
        ),
    )
}

fn parallels() -> Outcome {
    let an = analytic();
    let mut r = common::rng(404);
    let mut worst = 0.0f64;
    let mut verdicts_ok = true;
    for (i, u0) in [0.5, 1.0, 2.0, 5.0].into_iter().enumerate() {
        for k in 0..2 {
            let cone = common::random_cone(&mut r, i + k).cone;
            let d = Domain::new(-0.8 * u0, 0.8 * u0).unwrap();
            let c = cone.latitude_circle(u0, 0.1, d).map_err(fmt_err)?;
            let rep = verify_geodesic(&cone, &c, &an).map_err(fmt_err)?;
            worst = worst.max((rep.max_abs_kg - 1.0 / u0).abs() * u0);
            verdicts_ok &= rep.verdict == Verdict::NotGeodesic;
        }
    }
    check(
        worst < 1e-5 && verdicts_ok,
        format!("u0 ∈ {{0.5, 1, 2, 5}} on 8 cones: max relative error of max|κg| vs 1/u0 = {worst:.2e}"),
    )
}

fn oracle_agreement() -> Outcome {
    let mut r = common::rng(505);
    let (mut dev, mut drift) = (0.0f64, 0.0f64);
    for i in 0..20 {
        let cone = common::random_cone(&mut r, i).cone;
        let p = common::random_params(&mut r);
        let s0 = -p.b / p.a - 2.5;
        let g = integrate_geodesic(&cone, &GeodesicIvp::from_rectifying(&p, s0, 5.0), DEFAULT_STEP).map_err(fmt_err)?;
        let exact = p.chart(Domain::new(s0, s0 + 5.0).unwrap()).map_err(fmt_err)?;
        for (s, st) in &g.nodes {
            let e = exact.state(s0 + s).map_err(fmt_err)?;
            dev = dev.max((st.t - e.t).abs()).max((st.u - e.u).abs());
        }
        drift = drift.max(g.clairaut_drift_per_length);
    }
    check(
        dev < 1e-6 && drift < 1e-9,
        format!("20 draws over 5 units at h=1e-3: max chart deviation {dev:.2e}, Clairaut drift {drift:.2e}/unit"),
    )
}

fn circular_cone_crosscheck() -> Outcome {
    let an = analytic();
    let mut r = common::rng(606);
    let (mut angle, mut cos_err, mut ident) = (0.0f64, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for i in 0..10 {
        let p = common::random_params(&mut r);
        let psi = r.gen_range(0.3..1.3);
        let rep = cross_check_theorem4(&p, psi, 1000 + i, &an).map_err(fmt_err)?;
        angle = angle.max(rep.axis_angle_from_e3);
        cos_err = cos_err.max((rep.slant.cos_angle_mean.abs() - psi.sin()).abs());
        ident = ident.max(rep.identity_residual_e3.unwrap_or(f64::INFINITY));
        ident = ident.max(rep.identity_residual_random.unwrap_or(f64::INFINITY));
        if !rep.all_positive {
            failures.push(format!("#{i}: {:?}", rep.failures));
        }
    }
    check(
        failures.is_empty() && angle < 1e-4 && cos_err < 1e-5 && ident < 1e-4,
        format!(
            "10 draws: axis angle {angle:.2e} rad, ||⟨n,U⟩|-sinψ0| {cos_err:.2e}, identity residual {ident:.2e}, disagreements {failures:?}"
        ),
    )
}

fn rulings_and_torsion() -> Outcome {
    let an = analytic();
    let mut r = common::rng(707);
    let mut problems = Vec::new();
    let mut max_kappa = 0.0f64;
    for i in 0..10 {
        let cone = common::random_cone(&mut r, i).cone;
        let t0 = r.gen_range(-1.5..1.5);
        let ruling = cone.ruling(t0, Domain::new(0.3, 4.0).unwrap()).map_err(fmt_err)?;
        let rep = verify_geodesic(&cone, &ruling, &an).map_err(fmt_err)?;
        max_kappa = max_kappa.max(rep.max_curvature);
        if rep.verdict != Verdict::Ruling || rep.max_curvature >= 1e-9 {
            problems.push(format!("ruling #{i}: {:?}", rep.verdict));
        }
    }
    let mut min_torsion = f64::INFINITY;
    for (i, sample) in common::rectifying_corpus(708, 10).iter().enumerate() {
        let rep = verify_geodesic(&sample.cone.cone, &sample.curve, &an).map_err(fmt_err)?;
        if rep.verdict == Verdict::Geodesic {
            let tau = max_abs_torsion(&sample.curve, &an).map_err(fmt_err)?;
            min_torsion = min_torsion.min(tau);
            if tau.is_nan() || tau <= an.tol.planar {
                problems.push(format!("geodesic #{i} planar"));
            }
        }
    }
    check(
        problems.is_empty(),
        format!(
            "10 rulings (max κ {max_kappa:.1e}); smallest max|τ| among geodesics {min_torsion:.3}; issues {problems:?}"
        ),
    )
}

fn torsion_ratio() -> Outcome {
    let an = analytic();
    let (mut slope, mut intercept, mut resid) = (0.0f64, 0.0f64, 0.0f64);
    for sample in common::rectifying_corpus(808, 20) {
        let RectifyingParams { a, b, .. } = sample.params;
        let p = torsion_ratio_profile(&sample.curve, &an).map_err(fmt_err)?;
        slope = slope.max((p.fit.slope - a).abs() / a);
        // Intercepts very close to zero are compared absolutely.
        intercept = intercept.max((p.fit.intercept - b).abs() / b.abs().max(1e-3));
        resid = resid.max(p.fit.max_residual);
    }
    check(
        slope < 1e-4 && intercept < 1e-4 && resid < 1e-5,
        format!("20 curves: slope rel. err {slope:.2e}, intercept rel. err {intercept:.2e}, residual {resid:.2e}"),
    )
}

fn development_geometry() -> Outcome {
    let an = analytic();
    let (mut dist, mut min_norm, mut at) = (0.0f64, 0.0f64, 0.0f64);
    for sample in common::rectifying_corpus(909, 20) {
        let RectifyingParams { a, b, .. } = sample.params;
        let rep = verify_geodesic(&sample.cone.cone, &sample.curve, &an).map_err(fmt_err)?;
        dist = dist.max((rep.development_distance - 1.0 / a).abs());
        let ca = closest_approach(&sample.curve, &an).map_err(fmt_err)?;
        min_norm = min_norm.max((ca.distance - 1.0 / a).abs());
        at = at.max((ca.s + b / a).abs());
    }
    check(
        dist < 1e-6 && min_norm < 1e-6 && at < 1e-6,
        format!("20 curves: |line distance - 1/a| {dist:.2e}, |min|α| - 1/a| {min_norm:.2e}, |argmin + b/a| {at:.2e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("cross-product identity α×α' = n/a", cross_product_identity),
        ("rectifying / spherical dichotomy", dichotomy),
        ("rectifying curves are geodesics", forward_geodesy),
        ("parallels have |κg| = 1/u0", parallels),
        ("ODE oracle matches closed form", oracle_agreement),
        ("circular cone: rectifying ∧ slant helix ∧ geodesic", circular_cone_crosscheck),
        ("rulings and non-planar geodesics", rulings_and_torsion),
        ("τ/κ = as + b", torsion_ratio),
        ("development line at distance 1/a", development_geometry),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} — {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} — {detail} [{secs:.1}s]", i + 1)
            }
        }
    }
    println!("{} of 9 criteria passed in {:.1}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
