//! Text exports: curvature fields and frames as CSV, meshes and frame
//! segments as OBJ.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use crate::chart::FrontalChart;
use crate::curvature::{curvature_sample, CurvatureSample, Extended};
use crate::error::{Error, Result};
use crate::frames::curvature_line_frame;
use crate::surface::{linspace, Domain};

/// Number of samples in `u` and `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(nu: usize, nv: usize) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(Error::EmptyGrid { nu, nv });
        }
        Ok(Self { nu, nv })
    }

    /// Grid points, `u` outer and `v` inner, both ends included.
    pub fn points(&self, domain: &Domain) -> Vec<(f64, f64)> {
        let vs = linspace(domain.v.0, domain.v.1, self.nv);
        linspace(domain.u.0, domain.u.1, self.nu)
            .into_iter()
            .flat_map(|u| vs.iter().map(move |&v| (u, v)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridParseError(String);

impl fmt::Display for GridParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected NUxNV, got `{}`", self.0)
    }
}

impl std::error::Error for GridParseError {}

impl FromStr for Grid {
    type Err = GridParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || GridParseError(s.to_string());
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let nu = a.trim().parse().map_err(|_| bad())?;
        let nv = b.trim().parse().map_err(|_| bad())?;
        Grid::new(nu, nv).map_err(|_| bad())
    }
}

fn at(u: f64, v: f64) -> impl FnOnce(Error) -> Error {
    move |e| Error::AtGridPoint { u, v, source: Box::new(e) }
}

/// Shortest round-trip decimal, with `inf`, `-inf` and `nan` tokens.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

fn ext(x: Extended) -> String {
    format_f64(x.to_f64())
}

/// Curvature samples on the grid, in grid order.
pub fn field_samples(chart: &FrontalChart, grid: Grid) -> Result<Vec<CurvatureSample>> {
    grid.points(&chart.domain())
        .into_par_iter()
        .map(|(u, v)| curvature_sample(chart, u, v).map_err(at(u, v)))
        .collect()
}

pub const FIELD_HEADER: &str = "u,v,lambda,K,H,Gamma,GammaTilde,kappa1,kappa2";

pub fn write_field_csv(samples: &[CurvatureSample], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{FIELD_HEADER}")?;
    for s in samples {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_f64(s.u),
            format_f64(s.v),
            format_f64(s.lambda),
            ext(s.k),
            ext(s.h),
            ext(s.gamma),
            format_f64(s.gamma_tilde),
            ext(s.kappa1),
            ext(s.kappa2)
        )?;
    }
    Ok(())
}

/// One row of the frame field; `None` where no frame exists (umbilics).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameRow {
    pub u: f64,
    pub v: f64,
    pub frame: Option<([f64; 3], [f64; 3])>,
}

/// Curvature-line frames on the grid. Umbilic and dependent points give
/// empty rows; other errors abort.
pub fn frame_rows(chart: &FrontalChart, grid: Grid) -> Result<Vec<FrameRow>> {
    grid.points(&chart.domain())
        .into_par_iter()
        .map(|(u, v)| match curvature_line_frame(chart, u, v) {
            Ok(f) => Ok(FrameRow { u, v, frame: Some((f.e1, f.e2)) }),
            Err(Error::UmbilicPoint { .. } | Error::DependentFrame { .. }) => Ok(FrameRow { u, v, frame: None }),
            Err(e) => Err(at(u, v)(e)),
        })
        .collect()
}

pub fn write_frame_csv(rows: &[FrameRow], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "u,v,e1x,e1y,e1z,e2x,e2y,e2z")?;
    for r in rows {
        let vals = match r.frame {
            Some((a, b)) => [a[0], a[1], a[2], b[0], b[1], b[2]],
            None => [f64::NAN; 6],
        };
        let cols: Vec<String> = [r.u, r.v].iter().chain(vals.iter()).map(|&x| format_f64(x)).collect();
        writeln!(out, "{}", cols.join(","))?;
    }
    Ok(())
}

/// Vertex positions on the grid, in grid order.
pub fn mesh_vertices(chart: &FrontalChart, grid: Grid) -> Result<Vec<Vector3<f64>>> {
    grid.points(&chart.domain())
        .into_par_iter()
        .map(|(u, v)| chart.point(u, v).map_err(at(u, v)))
        .collect()
}

/// Triangles of the grid as zero-based vertex indices. Every triangle is
/// ordered `(u, v) -> (u + du, v) -> (u + du, v + dv)`, so the winding
/// follows `f_u x f_v` throughout.
pub fn mesh_triangles(grid: Grid) -> Vec<[usize; 3]> {
    let id = |i: usize, j: usize| i * grid.nv + j;
    let mut tris = Vec::with_capacity(2 * (grid.nu - 1) * (grid.nv - 1));
    for i in 0..grid.nu - 1 {
        for j in 0..grid.nv - 1 {
            tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    tris
}

pub fn write_obj_mesh(name: &str, vertices: &[Vector3<f64>], grid: Grid, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "o {name}")?;
    for p in vertices {
        writeln!(out, "v {} {} {}", format_f64(p.x), format_f64(p.y), format_f64(p.z))?;
    }
    for t in mesh_triangles(grid) {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

/// Frame rows as OBJ line segments of length `scale` from each point.
pub fn write_frame_obj(chart: &FrontalChart, rows: &[FrameRow], scale: f64, mut out: impl Write) -> Result<()> {
    let io = |e: io::Error| Error::NotApplicable(format!("write failed: {e}"));
    writeln!(out, "o {}-frames", chart.name()).map_err(io)?;
    let mut next = 1;
    for r in rows {
        let Some((a, b)) = r.frame else { continue };
        let p = chart.point(r.u, r.v).map_err(at(r.u, r.v))?;
        for q in [p, p + scale * Vector3::from(a), p + scale * Vector3::from(b)] {
            writeln!(out, "v {} {} {}", format_f64(q.x), format_f64(q.y), format_f64(q.z)).map_err(io)?;
        }
        writeln!(out, "l {} {}\nl {} {}", next, next + 1, next, next + 2).map_err(io)?;
        next += 3;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        assert_eq!(format_f64(f64::INFINITY), "inf");
        assert_eq!(format_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_f64(f64::NAN), "nan");
        assert_eq!(format_f64(0.1), "0.1");
        let x = 1.0 / 3.0;
        assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn grid_parsing() {
        assert_eq!("3x4".parse::<Grid>().unwrap(), Grid { nu: 3, nv: 4 });
        assert!("0x4".parse::<Grid>().is_err());
        assert!("1x1".parse::<Grid>().is_err());
        assert!("3by4".parse::<Grid>().is_err());
    }

    #[test]
    fn triangle_count() {
        let g = Grid::new(3, 4).unwrap();
        assert_eq!(mesh_triangles(g).len(), 12);
        assert!(mesh_triangles(g).iter().flatten().all(|&i| i < 12));
    }
}
