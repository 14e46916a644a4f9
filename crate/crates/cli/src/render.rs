//! Binary PGM (P5) pictures of a cluster: one pixel per site, occupied
//! sites white, a two-pixel black margin around the tight bounding box.

use std::path::Path;
use std::str::FromStr;

use dla_core::{Cluster, LatticePoint};

use crate::error::{CliError, Result};
use crate::grow::write_file_bytes;

const MARGIN: i32 = 2;

/// A planar cut of a 3D cluster: keep sites whose `axis` coordinate
/// equals `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceSpec {
    pub axis: usize,
    pub offset: i32,
}

impl FromStr for SliceSpec {
    type Err = String;

    /// Parses `x=<int>`, `y=<int>` or `z=<int>`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (axis, offset) = s
            .split_once('=')
            .ok_or_else(|| format!("slice must look like z=0, got {s:?}"))?;
        let axis = match axis.trim() {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            other => return Err(format!("unknown slice axis {other:?}")),
        };
        let offset = offset
            .trim()
            .parse()
            .map_err(|_| format!("slice offset {offset:?} is not an integer"))?;
        Ok(SliceSpec { axis, offset })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub pixels: Vec<u8>,
}

impl Pgm {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn pixel(&self, col: usize, row: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

/// The 2D points to draw: the cluster itself, or a slice of a 3D one.
fn planar_points(cluster: &Cluster, slice: Option<SliceSpec>) -> Result<Vec<(i32, i32)>> {
    match (cluster.dim(), slice) {
        (2, None) => Ok(cluster
            .order()
            .iter()
            .map(|p| (p.coord(0), p.coord(1)))
            .collect()),
        (2, Some(_)) => Err(CliError::Config(
            "--slice applies only to 3D snapshots".into(),
        )),
        (_, None) => Err(CliError::Config(
            "rendering a 3D snapshot needs a slice, e.g. --slice z=0".into(),
        )),
        (_, Some(spec)) => {
            let keep: Vec<usize> = (0..3).filter(|&a| a != spec.axis).collect();
            let pts: Vec<(i32, i32)> = cluster
                .order()
                .iter()
                .filter(|p| p.coord(spec.axis) == spec.offset)
                .map(|p: &LatticePoint| (p.coord(keep[0]), p.coord(keep[1])))
                .collect();
            if pts.is_empty() {
                return Err(CliError::Config(format!(
                    "slice {}={} contains no sites",
                    ["x", "y", "z"][spec.axis],
                    spec.offset
                )));
            }
            Ok(pts)
        }
    }
}

pub fn render(cluster: &Cluster, slice: Option<SliceSpec>) -> Result<Pgm> {
    let pts = planar_points(cluster, slice)?;
    let (min_x, max_x) = bounds(pts.iter().map(|p| p.0));
    let (min_y, max_y) = bounds(pts.iter().map(|p| p.1));
    let width = (max_x - min_x + 1 + 2 * MARGIN) as usize;
    let height = (max_y - min_y + 1 + 2 * MARGIN) as usize;
    let mut pixels = vec![0u8; width * height];
    for &(x, y) in &pts {
        let col = (x - min_x + MARGIN) as usize;
        // Larger y is drawn higher up.
        let row = (max_y - y + MARGIN) as usize;
        pixels[row * width + col] = 255;
    }
    Ok(Pgm {
        width,
        height,
        pixels,
    })
}

fn bounds(values: impl Iterator<Item = i32>) -> (i32, i32) {
    values.fold((i32::MAX, i32::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

pub fn cmd_render(cluster: &Cluster, slice: Option<SliceSpec>, out: &Path) -> Result<Pgm> {
    let pgm = render(cluster, slice)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        crate::grow::create_dir(parent)?;
    }
    write_file_bytes(out, &pgm.encode())?;
    Ok(pgm)
}
