//! One function per subcommand. Each resolves its options, computes every
//! artifact in memory, and only then writes the files.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::Path;

use conegeo::classify::{classify_rectifying_or_spherical, fit_slant_axis, ClassificationReport, SlantAxisFit};
use conegeo::cone::{Cone, SphericalBaseCurve};
use conegeo::curve::{DerivativeMode, Domain};
use conegeo::geodesic::{
    cross_check_theorem4, generate_rectifying, integrate_geodesic, verify_geodesic, GeodesicIvp, RectifyingParams,
    DEFAULT_STEP,
};
use conegeo::io::{
    curve_csv, development_csv, read_base_csv, read_cone, read_curve_csv, read_json, sample_curve, to_json,
};
use conegeo::tolerance::{Analysis, Tolerances, DEFAULT_SAMPLES};
use conegeo::GeomError;
use serde::Serialize;

use crate::config::{InvalidConfig, Resolver};
use crate::{ClassifyArgs, CliError, CrosscheckArgs, DevelopArgs, GenerateArgs, IntegrateArgs, VerifyArgs};

const DEFAULT_GENERATE_ROWS: u64 = 2001;

type CliResult = Result<(), CliError>;

/// Writes every artifact to a temporary file beside its destination and
/// moves them into place only once all of them were written.
fn write_all(files: &[(&Path, String)]) -> CliResult {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source: std::io::Error| GeomError::Io { path, source }
    };
    let mut staged = Vec::with_capacity(files.len());
    for (path, contents) in files {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
        tmp.write_all(contents.as_bytes()).map_err(io_err(path))?;
        tmp.as_file().sync_all().map_err(io_err(path))?;
        staged.push((tmp, *path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    }
    Ok(())
}

/// Sampled (CSV) inputs are differentiated with stencils.
fn finite_difference() -> Analysis {
    Analysis { samples: DEFAULT_SAMPLES, tol: Tolerances::finite_difference() }
}

fn params(r: &mut Resolver, a: Option<f64>, b: Option<f64>, c: Option<f64>) -> Result<RectifyingParams, InvalidConfig> {
    let a = r.required_f64("a", a)?;
    if a <= 0.0 {
        return Err(InvalidConfig::new("a", format!("must be positive, got {a}")));
    }
    let b = r.required_f64("b", b)?;
    let c = r.required_f64("c", c)?;
    Ok(RectifyingParams { a, b, c })
}

fn half_angle(r: &mut Resolver, flag: Option<f64>) -> Result<Option<f64>, InvalidConfig> {
    match r.f64("psi0", flag)? {
        Some(p) if !(p > 0.0 && p < FRAC_PI_2) => {
            Err(InvalidConfig::new("psi0", format!("must lie strictly between 0 and π/2, got {p}")))
        }
        other => Ok(other),
    }
}

fn count(
    r: &mut Resolver,
    key: &'static str,
    flag: Option<u64>,
    default: u64,
    min: u64,
) -> Result<usize, InvalidConfig> {
    let n = r.u64(key, flag)?.unwrap_or(default);
    if n < min {
        return Err(InvalidConfig::new(key, format!("need at least {min}, got {n}")));
    }
    Ok(n as usize)
}

pub fn generate(config: Option<&Path>, args: GenerateArgs) -> CliResult {
    let mut r = Resolver::load(config, "generate")?;
    let p = params(&mut r, args.a, args.b, args.c)?;
    let psi0 = half_angle(&mut r, args.psi0)?;
    let base_path = r.path("base", args.base)?;
    let default_domain = p.default_domain();
    let s_min = r.f64("s_min", args.s_min)?.unwrap_or(default_domain.min);
    let s_max = r.f64("s_max", args.s_max)?.unwrap_or(default_domain.max);
    if s_min >= s_max {
        return Err(InvalidConfig::new("s_max", format!("must exceed s_min = {s_min}, got {s_max}")).into());
    }
    let rows = count(&mut r, "samples", args.samples, DEFAULT_GENERATE_ROWS, 16)?;
    let out = r.output_path("out", args.out)?;
    r.finish()?;

    let base = match (psi0, base_path) {
        (Some(psi0), None) => SphericalBaseCurve::circle(psi0)?,
        (None, Some(path)) => read_base_csv(&path)?,
        (Some(_), Some(_)) => return Err(InvalidConfig::new("base", "give either psi0 or base, not both").into()),
        (None, None) => return Err(InvalidConfig::new("psi0", "required unless base is given").into()),
    };
    let curve = generate_rectifying(&p, &base, Domain::new(s_min, s_max)?)?;
    let csv = curve_csv(&sample_curve(&curve, rows)?)?;
    write_all(&[(&out, csv)])
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    #[serde(flatten)]
    classification: &'a ClassificationReport,
    #[serde(flatten)]
    slant: &'a SlantAxisFit,
    slant_helix: bool,
}

pub fn classify(config: Option<&Path>, args: ClassifyArgs) -> CliResult {
    let mut r = Resolver::load(config, "classify")?;
    let input = r.required_path("in", args.input)?;
    let analysis = r.analysis(finite_difference(), args.analysis.samples, &args.analysis.tol)?;
    let report = r.output_path("report", args.report)?;
    r.finish()?;

    let curve = read_curve_csv(&input)?;
    let classification = classify_rectifying_or_spherical(&curve, &analysis)?;
    let slant = fit_slant_axis(&curve, &analysis)?;
    let json = to_json(&ClassifyReport {
        classification: &classification,
        slant: &slant,
        slant_helix: slant.is_slant_helix(analysis.tol.slant),
    })?;
    write_all(&[(&report, json)])
}

#[derive(Serialize)]
struct IntegrateReport {
    step: f64,
    nodes: usize,
    renormalization: f64,
    clairaut_drift_per_length: f64,
    speed_drift_per_length: f64,
}

pub fn integrate(config: Option<&Path>, args: IntegrateArgs) -> CliResult {
    let mut r = Resolver::load(config, "integrate")?;
    let cone_path = r.required_path("cone", args.cone)?;
    let ivp_path = r.required_path("ivp", args.ivp)?;
    let step = r.f64("step", args.step)?.unwrap_or(DEFAULT_STEP);
    if step <= 0.0 {
        return Err(InvalidConfig::new("step", format!("must be positive, got {step}")).into());
    }
    let out = r.output_path("out", args.out)?;
    let report = r.optional_output_path("report", args.report)?;
    r.finish()?;

    let cone = read_cone(&cone_path)?;
    let ivp: GeodesicIvp = read_json(&ivp_path)?;
    let g = integrate_geodesic(&cone, &ivp, step)?;
    let rows = g.nodes.iter().map(|(s, st)| Ok((*s, cone.point(st.t, st.u)?))).collect::<conegeo::Result<Vec<_>>>()?;
    let mut files = vec![(out.as_path(), curve_csv(&rows)?)];
    if let Some(path) = report.as_deref() {
        let summary = IntegrateReport {
            step: g.step,
            nodes: g.nodes.len(),
            renormalization: g.renormalization,
            clairaut_drift_per_length: g.clairaut_drift_per_length,
            speed_drift_per_length: g.speed_drift_per_length,
        };
        files.push((path, to_json(&summary)?));
    }
    write_all(&files)
}

pub fn develop(config: Option<&Path>, args: DevelopArgs) -> CliResult {
    let mut r = Resolver::load(config, "develop")?;
    let cone_path = r.required_path("cone", args.cone)?;
    let input = r.required_path("in", args.input)?;
    let analysis = r.analysis(finite_difference(), args.analysis.samples, &args.analysis.tol)?;
    let out = r.output_path("out", args.out)?;
    r.finish()?;

    let cone: Cone = read_cone(&cone_path)?;
    let curve = read_curve_csv(&input)?;
    let params = curve.sample_parameters(analysis.samples)?;
    let development = cone.chart_of(&curve, &params, analysis.tol.on_cone)?.develop();
    let rows = params.iter().map(|&s| Ok((s, development.point(s)?))).collect::<conegeo::Result<Vec<_>>>()?;
    write_all(&[(&out, development_csv(&rows)?)])
}

pub fn verify(config: Option<&Path>, args: VerifyArgs) -> CliResult {
    let mut r = Resolver::load(config, "verify")?;
    let cone_path = r.required_path("cone", args.cone)?;
    let input = r.required_path("in", args.input)?;
    let analysis = r.analysis(finite_difference(), args.analysis.samples, &args.analysis.tol)?;
    let report = r.output_path("report", args.report)?;
    r.finish()?;

    let cone = read_cone(&cone_path)?;
    let curve = read_curve_csv(&input)?;
    let geodesy = verify_geodesic(&cone, &curve, &analysis)?;
    write_all(&[(&report, to_json(&geodesy)?)])
}

pub fn crosscheck(config: Option<&Path>, args: CrosscheckArgs) -> CliResult {
    let mut r = Resolver::load(config, "crosscheck")?;
    let p = params(&mut r, args.a, args.b, args.c)?;
    let psi0 = half_angle(&mut r, args.psi0)?.ok_or_else(|| InvalidConfig::new("psi0", "required"))?;
    let seed = r.u64("seed", args.seed)?.unwrap_or(0);
    let analysis =
        r.analysis(Analysis::for_mode(DerivativeMode::Analytic), args.analysis.samples, &args.analysis.tol)?;
    let report = r.output_path("report", args.report)?;
    r.finish()?;

    let check = cross_check_theorem4(&p, psi0, seed, &analysis)?;
    write_all(&[(&report, to_json(&check)?)])
}
