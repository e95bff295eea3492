//! Curvature, singularity classification and edge invariants for
//! frontal surfaces given by formulas.

pub mod chart;
pub mod dsl;
pub mod error;
pub mod export;
pub mod frames;
pub mod gallery;
pub mod jet;
pub mod policy;
pub mod classify;
pub mod curvature;
pub mod invariants;
mod quad;
pub mod ribaucour;
pub mod suite;
pub mod surface;

pub use error::{Error, Result, SurfaceError};
pub use jet::{BasePoint, Jet2, JetError, JetVec3};
pub use policy::NumericPolicy;
pub use chart::{Frame, FrontalChart};
