//! Built-in surfaces and Ribaucour profiles, shipped as TOML documents.

use crate::error::SurfaceError;
use crate::surface::SurfaceDef;

macro_rules! entries {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../gallery/", $name, ".toml")))),*]
    };
}

/// Surface entries as `(name, toml)`.
pub const SURFACES: &[(&str, &str)] = entries![
    "cuspidal-edge",
    "cuspidal-cross-cap",
    "cuspidal-s1-minus",
    "five-half",
    "f1",
    "f2",
    "f3",
    "five-half-torsion",
    "pure-umbilic",
    "pure-umbilic-degenerate",
    "bounded-gauss",
    "flat-frontal",
    "plane",
    "sphere",
    "torus",
];

/// Ribaucour profile entries as `(name, toml)`.
pub const PROFILES: &[(&str, &str)] = entries![
    "circle-profile",
    "circle-profile-unit-k",
    "circle-profile-parallel",
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SURFACES.iter().map(|(n, _)| *n)
}

pub fn toml(name: &str) -> Result<&'static str, SurfaceError> {
    SURFACES
        .iter()
        .chain(PROFILES)
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| SurfaceError::UnknownGallery(name.to_string()))
}

/// Load a gallery surface by name.
pub fn surface(name: &str) -> Result<SurfaceDef, SurfaceError> {
    let text = SURFACES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| SurfaceError::UnknownGallery(name.to_string()))?;
    SurfaceDef::from_toml(text)
}

/// Every gallery surface.
pub fn all() -> Vec<SurfaceDef> {
    names().map(|n| surface(n).expect("shipped gallery parses")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads_under_its_name() {
        for def in all() {
            assert!(SURFACES.iter().any(|(n, _)| *n == def.name));
        }
        assert!(matches!(surface("nope"), Err(SurfaceError::UnknownGallery(_))));
    }
}
