//! Seeded random corpora shared by the integration and acceptance tests.
#![allow(dead_code)]

use conegeo::cone::{Cone, CurvatureProfile, SphericalBaseCurve};
use conegeo::curve::{families, Domain, SpaceCurve};
use conegeo::geodesic::{generate_rectifying, RectifyingParams};
use conegeo::Vec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// A cone over a random base: either a circle of random half-angle or a
/// base with geodesic curvature `k0 + k1 sin(ωt + φ)`, `0 < k1 < k0`, on
/// `[-2, 2]`.
#[derive(Debug, Clone)]
pub struct RandomCone {
    pub cone: Cone,
    pub circular: Option<f64>,
}

pub fn circular_cone(rng: &mut ChaCha8Rng) -> RandomCone {
    let psi = rng.gen_range(0.3..1.3);
    RandomCone { cone: Cone::circular(psi).unwrap(), circular: Some(psi) }
}

pub fn wavy_cone(rng: &mut ChaCha8Rng) -> RandomCone {
    let mean = rng.gen_range(0.3..0.8);
    let profile = CurvatureProfile {
        mean,
        amplitude: rng.gen_range(0.0..0.8) * mean,
        frequency: rng.gen_range(0.5..2.5),
        phase: rng.gen_range(0.0..std::f64::consts::TAU),
    };
    let start = unit_vector(rng);
    let direction = start.cross(&unit_vector(rng));
    let base = SphericalBaseCurve::from_geodesic_curvature(profile, start, direction, Domain::new(-2.0, 2.0).unwrap())
        .unwrap();
    RandomCone { cone: Cone::over(base), circular: None }
}

/// Alternates circular and wavy cones.
pub fn random_cone(rng: &mut ChaCha8Rng, index: usize) -> RandomCone {
    if index.is_multiple_of(2) {
        circular_cone(rng)
    } else {
        wavy_cone(rng)
    }
}

pub fn random_params(rng: &mut ChaCha8Rng) -> RectifyingParams {
    RectifyingParams::new(rng.gen_range(0.5..4.0), rng.gen_range(-2.0..2.0), rng.gen_range(-0.3..0.3)).unwrap()
}

#[derive(Debug, Clone)]
pub struct RectifyingSample {
    pub params: RectifyingParams,
    pub cone: RandomCone,
    pub curve: SpaceCurve,
}

pub fn rectifying_sample(rng: &mut ChaCha8Rng, index: usize) -> RectifyingSample {
    let cone = random_cone(rng, index);
    let params = random_params(rng);
    let curve = generate_rectifying(&params, cone.cone.base(), params.default_domain()).unwrap();
    RectifyingSample { params, cone, curve }
}

pub fn rectifying_corpus(seed: u64, n: usize) -> Vec<RectifyingSample> {
    let mut r = rng(seed);
    (0..n).map(|i| rectifying_sample(&mut r, i)).collect()
}

/// Unit-speed curve on the sphere of radius `r` about the origin: the
/// parallel `s ↦ r·y(s/r)` of a random cone.
pub fn spherical_curve(rng: &mut ChaCha8Rng, index: usize) -> SpaceCurve {
    let cone = random_cone(rng, index).cone;
    let r = rng.gen_range(0.5..3.0);
    let t0 = rng.gen_range(-0.5..0.5);
    cone.latitude_circle(r, t0, Domain::new(-1.2 * r, 1.2 * r).unwrap()).unwrap()
}

/// Smooth curves that are neither rectifying nor centered-spherical.
pub fn generic_curve(rng: &mut ChaCha8Rng, index: usize) -> SpaceCurve {
    let d = Domain::new(-2.0, 2.0).unwrap();
    match index % 3 {
        0 => {
            let radius = rng.gen_range(0.5..2.0);
            let pitch = rng.gen_range(0.2..1.0);
            let offset = unit_vector(rng) * rng.gen_range(0.5..2.0);
            families::helix_offset(radius, pitch, offset, d).unwrap()
        }
        1 => {
            let mut coeffs = vec![unit_vector(rng), unit_vector(rng) * 1.5];
            coeffs.push(unit_vector(rng) * rng.gen_range(0.5..1.0));
            coeffs.push(unit_vector(rng) * rng.gen_range(0.2..0.5));
            families::polynomial(coeffs, d).unwrap()
        }
        _ => {
            // A circle whose axis misses the origin.
            let e1 = unit_vector(rng);
            let e2 = e1.cross(&unit_vector(rng)).normalize();
            let center = e1 * rng.gen_range(0.5..1.5) + e1.cross(&e2) * rng.gen_range(0.5..1.5);
            families::circle_in_plane(center, e1, e2, rng.gen_range(0.5..2.0), d).unwrap()
        }
    }
}

/// Cone over a base chosen from explicit parameters: a circle when `psi` is
/// given, otherwise a wavy base through a start point and direction derived
/// from `orient`.
pub fn cone_from(psi: Option<f64>, mean: f64, amp: f64, freq: f64, phase: f64, orient: u64) -> Cone {
    match psi {
        Some(p) => Cone::circular(p).unwrap(),
        None => {
            let mut r = rng(orient);
            let start = unit_vector(&mut r);
            let direction = start.cross(&unit_vector(&mut r));
            let profile = CurvatureProfile { mean, amplitude: amp * mean, frequency: freq, phase };
            let base =
                SphericalBaseCurve::from_geodesic_curvature(profile, start, direction, Domain::new(-2.0, 2.0).unwrap())
                    .unwrap();
            Cone::over(base)
        }
    }
}
