//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("parameter {s} outside domain [{min}, {max}]")]
    ParameterOutOfDomain { s: f64, min: f64, max: f64 },

    #[error("parameter {s} too close to the domain boundary for a stencil of reach {reach}")]
    InsufficientMargin { s: f64, reach: f64 },

    #[error("degenerate domain [{min}, {max}]")]
    DegenerateDomain { min: f64, max: f64 },

    #[error("invalid derivative settings: {0}")]
    InvalidDerivativeSettings(String),

    #[error("speed {speed:e} at parameter {s} is below the regularity threshold")]
    SingularSpeed { s: f64, speed: f64 },

    #[error("curvature {kappa:e} at s = {s} is at or below the floor {floor:e}")]
    VanishingCurvature { s: f64, kappa: f64, floor: f64 },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("series mean is zero; use absolute constancy instead")]
    ZeroMean,

    #[error("slant-axis fit is degenerate: eigenvalue gap {gap:e} below {tol:e}")]
    DegenerateFit { gap: f64, tol: f64 },

    #[error("curve is not classified as rectifying (label {label})")]
    NotRectifying { label: String },

    #[error("base curve is degenerate at t = {t}")]
    DegenerateBase { t: f64 },

    #[error("base curve leaves the unit sphere at t = {t} (|y| = {norm})")]
    NotOnSphere { t: f64, norm: f64 },

    #[error("point is off the cone: residual {residual:e} exceeds {tol:e}")]
    NotOnCone { residual: f64, tol: f64 },

    #[error("point is at the cone vertex (|p| = {norm:e})")]
    VertexPoint { norm: f64 },

    #[error("radial coordinate u = {u} must be positive")]
    NonpositiveRadialCoordinate { u: f64 },

    #[error("base parameter {t} leaves the base domain [{min}, {max}]")]
    BaseDomainExceeded { t: f64, min: f64, max: f64 },

    #[error("half-angle {psi0} not in (0, pi/2)")]
    InvalidHalfAngle { psi0: f64 },

    #[error("geodesic approaches the vertex: u = {u:e} below u_min = {u_min:e}")]
    VertexApproach { u: f64, u_min: f64 },

    #[error("geodesic leaves the radial range: u = {u} above u_max = {u_max}")]
    RadialRangeExceeded { u: f64, u_max: f64 },

    #[error("step too large: {quantity} drift {drift:e} per unit length exceeds {limit:e}")]
    StepTooLarge { quantity: &'static str, drift: f64, limit: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl GeomError {
    /// Variant name, used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            GeomError::ParameterOutOfDomain { .. } => "ParameterOutOfDomain",
            GeomError::InsufficientMargin { .. } => "InsufficientMargin",
            GeomError::DegenerateDomain { .. } => "DegenerateDomain",
            GeomError::InvalidDerivativeSettings(_) => "InvalidDerivativeSettings",
            GeomError::SingularSpeed { .. } => "SingularSpeed",
            GeomError::VanishingCurvature { .. } => "VanishingCurvature",
            GeomError::InsufficientSamples { .. } => "InsufficientSamples",
            GeomError::ZeroMean => "ZeroMean",
            GeomError::DegenerateFit { .. } => "DegenerateFit",
            GeomError::NotRectifying { .. } => "NotRectifying",
            GeomError::DegenerateBase { .. } => "DegenerateBase",
            GeomError::NotOnSphere { .. } => "NotOnSphere",
            GeomError::NotOnCone { .. } => "NotOnCone",
            GeomError::VertexPoint { .. } => "VertexPoint",
            GeomError::NonpositiveRadialCoordinate { .. } => "NonpositiveRadialCoordinate",
            GeomError::BaseDomainExceeded { .. } => "BaseDomainExceeded",
            GeomError::InvalidHalfAngle { .. } => "InvalidHalfAngle",
            GeomError::VertexApproach { .. } => "VertexApproach",
            GeomError::RadialRangeExceeded { .. } => "RadialRangeExceeded",
            GeomError::StepTooLarge { .. } => "StepTooLarge",
            GeomError::InvalidParameter { .. } => "InvalidParameter",
            GeomError::InvalidSamples(_) => "InvalidSamples",
            GeomError::NonFinite(_) => "NonFinite",
            GeomError::Io { .. } => "Io",
            GeomError::Parse { .. } => "Parse",
        }
    }

    /// Errors caused by unreadable or malformed input files rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, GeomError::Io { .. } | GeomError::Parse { .. } | GeomError::InvalidSamples(_))
    }
}
