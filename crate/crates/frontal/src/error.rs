use thiserror::Error;

use crate::dsl::{EvalError, ParseError};
use crate::jet::JetError;

/// Errors raised while loading surface or curve definitions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("invalid TOML: {0}")]
    Toml(String),
    #[error("field `{field}`: {source}")]
    Parse {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("field `{field}`: abs is only allowed in curve definitions")]
    AbsNotAllowed { field: String },
    #[error("gauss components must be given for all of nu_x, nu_y, nu_z or none")]
    PartialGauss,
    #[error("empty or inverted range for `{field}`")]
    EmptyRange { field: String },
    #[error("unknown gallery entry `{0}`")]
    UnknownGallery(String),
}

/// Errors raised by the geometric computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("chart is not adapted at ({u}, {v}): f_v is not divisible by v")]
    NotAdapted { u: f64, v: f64 },
    #[error("degenerate frame at ({u}, {v}): |f_u x h| = {value:e}")]
    DegenerateFrame { u: f64, v: f64, value: f64 },
    #[error("supplied normal violates the frontal condition at ({u}, {v}): residual {residual:e}")]
    FrontalConditionViolated { u: f64, v: f64, residual: f64 },
    #[error("point ({u}, 0) is not of the first kind")]
    NotFirstKind { u: f64 },
    #[error("EG - F^2 = {value:e} is not positive at ({u}, {v})")]
    PositivityViolation { u: f64, v: f64, value: f64 },
    #[error("point ({u}, 0) is not a k-non-front singular point ({verdict})")]
    NotKNonFront { u: f64, verdict: String },
    #[error("limiting normal curvature does not vanish along the singular curve (max {max_abs:e})")]
    NotBounded { max_abs: f64 },
    #[error("degenerate edge at u = {u}: |f_vv| = {value:e}")]
    DegenerateEdge { u: f64, value: f64 },
    #[error("singular curve is not pure-frontal at u = {u}")]
    NotPureFrontal { u: f64 },
    #[error("point ({u}, {v}) is not on the singular curve")]
    NotSingular { u: f64, v: f64 },
    #[error("umbilic point at ({u}, {v}): Gamma = {gamma:e}")]
    UmbilicPoint { u: f64, v: f64, gamma: f64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("frame generators are dependent at ({u}, {v}): |f_u x w| = {value:e}")]
    DependentFrame { u: f64, v: f64, value: f64 },
    #[error("k = rho'/l is unbounded near t = {t}")]
    KUnbounded { t: f64 },
    #[error("|k| crosses 1 on the profile domain near t = {t}")]
    KBranchMixed { t: f64 },
    #[error("profile meets the rotation axis at t = {t} (y = {y})")]
    AxisCrossing { t: f64, y: f64 },
    #[error("b3 = 1 at ({u}, {v})")]
    B3IsOne { u: f64, v: f64 },
    #[error("at ({u}, {v}): {source}")]
    AtGridPoint {
        u: f64,
        v: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("grid {nu}x{nv} needs at least two points per direction")]
    EmptyGrid { nu: usize, nv: usize },
    #[error("jet order {available} is too low: {needed} required for {what}")]
    InsufficientOrder { what: &'static str, needed: usize, available: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
