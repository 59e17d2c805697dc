//! File formats: curve CSV `s,x,y,z`, base CSV `t,x,y,z`, development CSV
//! `s,px,py`, cone descriptors and JSON reports.
//!
//! Numbers are written in the shortest decimal form that round-trips, and
//! every file is written to a temporary sibling and renamed into place, so a
//! failed run never leaves a partial file behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::Vector2;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::cone::{Cone, ConeDescriptor, SphericalBaseCurve};
use crate::curve::{SampledCurve, SpaceCurve};
use crate::error::{GeomError, Result};
use crate::jet::Vec3;

pub const CURVE_HEADER: [&str; 4] = ["s", "x", "y", "z"];
pub const BASE_HEADER: [&str; 4] = ["t", "x", "y", "z"];
pub const DEVELOPMENT_HEADER: [&str; 3] = ["s", "px", "py"];

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> GeomError + '_ {
    move |source| GeomError::Io { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, message: impl Into<String>) -> GeomError {
    GeomError::Parse { path: path.to_path_buf(), message: message.into() }
}

/// Shortest round-trip decimal form of a finite float.
pub fn format_f64(v: f64) -> Result<String> {
    if !v.is_finite() {
        return Err(GeomError::NonFinite("output value"));
    }
    Ok(ryu::Buffer::new().format_finite(v).to_string())
}

/// Writes `contents` to `path` atomically.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(contents).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| GeomError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

/// Renders rows of numbers as CSV text under `header`.
pub fn render_csv<const N: usize>(header: [&str; N], rows: &[[f64; N]]) -> Result<String> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_f64(*v)?);
        }
        out.push('\n');
    }
    Ok(out)
}

fn read_rows<const N: usize>(path: &Path, header: [&str; N]) -> Result<Vec<[f64; N]>> {
    let mut reader =
        csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => GeomError::Io { path: path.to_path_buf(), source },
            other => parse_err(path, format!("{other:?}")),
        })?;
    let found = reader.headers().map_err(|e| parse_err(path, e.to_string()))?.clone();
    if found.len() != N || found.iter().zip(header).any(|(a, b)| a != b) {
        return Err(parse_err(
            path,
            format!("expected header `{}`, found `{}`", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, e.to_string()))?;
        let mut row = [0.0; N];
        for (slot, field) in row.iter_mut().zip(record.iter()) {
            *slot = field
                .parse::<f64>()
                .map_err(|_| parse_err(path, format!("row {}: `{field}` is not a number", line + 2)))?;
            if !slot.is_finite() {
                return Err(parse_err(path, format!("row {}: non-finite value", line + 2)));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

fn split_points(rows: Vec<[f64; 4]>) -> (Vec<f64>, Vec<Vec3>) {
    rows.into_iter().map(|[s, x, y, z]| (s, Vec3::new(x, y, z))).unzip()
}

/// Reads a curve CSV into an interpolated curve (finite-difference mode).
pub fn read_curve_csv(path: &Path) -> Result<SpaceCurve> {
    let (params, points) = split_points(read_rows(path, CURVE_HEADER)?);
    SampledCurve::from_points(params, points)?.into_curve()
}

/// Reads a base-curve CSV of unit vectors.
pub fn read_base_csv(path: &Path) -> Result<SphericalBaseCurve> {
    let (params, points) = split_points(read_rows(path, BASE_HEADER)?);
    SphericalBaseCurve::from_samples(params, points)
}

pub fn curve_csv(rows: &[(f64, Vec3)]) -> Result<String> {
    let rows: Vec<[f64; 4]> = rows.iter().map(|(s, p)| [*s, p.x, p.y, p.z]).collect();
    render_csv(CURVE_HEADER, &rows)
}

pub fn base_csv(rows: &[(f64, Vec3)]) -> Result<String> {
    let rows: Vec<[f64; 4]> = rows.iter().map(|(s, p)| [*s, p.x, p.y, p.z]).collect();
    render_csv(BASE_HEADER, &rows)
}

pub fn development_csv(rows: &[(f64, Vector2<f64>)]) -> Result<String> {
    let rows: Vec<[f64; 3]> = rows.iter().map(|(s, p)| [*s, p.x, p.y]).collect();
    render_csv(DEVELOPMENT_HEADER, &rows)
}

/// `(s, α(s))` at `n` uniform parameters of the whole domain.
pub fn sample_curve(curve: &SpaceCurve, n: usize) -> Result<Vec<(f64, Vec3)>> {
    curve.domain().samples(n)?.into_iter().map(|s| Ok((s, curve.evaluate(s)?))).collect()
}

pub fn write_curve_csv(path: &Path, rows: &[(f64, Vec3)]) -> Result<()> {
    write_atomic(path, curve_csv(rows)?.as_bytes())
}

pub fn write_development_csv(path: &Path, rows: &[(f64, Vector2<f64>)]) -> Result<()> {
    write_atomic(path, development_csv(rows)?.as_bytes())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| GeomError::InvalidSamples(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, to_json(value)?.as_bytes())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))
}

/// Loads a cone descriptor; a relative `base_csv` is resolved against the
/// descriptor's directory.
pub fn read_cone(path: &Path) -> Result<Cone> {
    let descriptor: ConeDescriptor = read_json(path)?;
    cone_from_descriptor(&descriptor, path.parent())
}

pub fn cone_from_descriptor(descriptor: &ConeDescriptor, relative_to: Option<&Path>) -> Result<Cone> {
    match descriptor {
        ConeDescriptor::Circular { psi0 } => Cone::circular(*psi0),
        ConeDescriptor::General { base_csv } => {
            let path: PathBuf = match relative_to {
                Some(dir) if base_csv.is_relative() => dir.join(base_csv),
                _ => base_csv.clone(),
            };
            Ok(Cone::over(read_base_csv(&path)?))
        }
    }
}
