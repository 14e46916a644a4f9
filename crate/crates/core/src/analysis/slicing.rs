use crate::error::{Error, Result};

use super::boxcount::{box_count, Ladder};
use super::fit::{fit_dimension, DimensionEstimate};
use super::pointset::PointSet;

/// Keeps the points whose coordinates on `drop_axes` lie in
/// `[offset, offset + thickness)` and removes those coordinates.
///
/// An empty result is not an error; callers decide what to do with it.
pub fn slice(
    points: &PointSet,
    drop_axes: &[usize],
    offsets: &[i32],
    thickness: i32,
) -> Result<PointSet> {
    let dim = points.dim();
    if drop_axes.is_empty() || drop_axes.len() >= dim {
        return Err(Error::InvalidArgument(format!(
            "can drop between 1 and {} axes of a {dim}-dimensional set, got {}",
            dim - 1,
            drop_axes.len()
        )));
    }
    if drop_axes.iter().any(|&a| a >= dim) {
        return Err(Error::InvalidArgument(format!(
            "slice axis out of range for dim {dim}"
        )));
    }
    if (1..drop_axes.len()).any(|i| drop_axes[..i].contains(&drop_axes[i])) {
        return Err(Error::InvalidArgument("slice axes must be distinct".into()));
    }
    if offsets.len() != drop_axes.len() {
        return Err(Error::InvalidArgument(format!(
            "{} offsets given for {} dropped axes",
            offsets.len(),
            drop_axes.len()
        )));
    }
    if thickness < 1 {
        return Err(Error::InvalidArgument(
            "slice thickness must be at least 1".into(),
        ));
    }
    let kept = points
        .points()
        .iter()
        .filter(|p| {
            drop_axes
                .iter()
                .zip(offsets)
                .all(|(&a, &o)| (o..o + thickness).contains(&p.coord(a)))
        })
        .map(|p| p.drop_axes(drop_axes))
        .collect();
    PointSet::new(dim - drop_axes.len(), kept)
}

/// Fit of one nonempty slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceFit {
    pub axes: Vec<usize>,
    pub offsets: Vec<i32>,
    pub points: usize,
    pub estimate: DimensionEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlicedDimension {
    /// Full-space dimension: weighted slice dimension plus the codimension.
    pub estimate: DimensionEstimate,
    pub codim: usize,
    pub slices: Vec<SliceFit>,
    /// Slices that came out empty and were skipped.
    pub empty_slices: usize,
}

/// `n` integer offsets evenly spread over the central half of `[min, max]`.
fn central_offsets((min, max): (i32, i32), n: usize) -> Vec<i32> {
    let span = (max - min) as f64;
    let lo = min as f64 + 0.25 * span;
    let hi = max as f64 - 0.25 * span;
    (0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).round() as i32)
        .collect()
}

/// Axis combinations of size `codim` in a 3-dimensional space.
fn orientations(codim: usize) -> Vec<Vec<usize>> {
    match codim {
        1 => vec![vec![0], vec![1], vec![2]],
        _ => vec![vec![0, 1], vec![0, 2], vec![1, 2]],
    }
}

/// Dimension of a 3D set measured on planar (`codim = 1`) or linear
/// (`codim = 2`) unit-thickness slices.
///
/// For each orientation of the dropped axes, `n_slices` offsets per dropped
/// axis are spread over the central half of the set's extent (codim 2 uses
/// the full grid of offset pairs). Each nonempty slice is box counted and
/// fitted; slice dimensions are averaged with weights equal to slice point
/// counts and the codimension is added back.
pub fn sliced_dimension(
    points: &PointSet,
    codim: usize,
    n_slices: usize,
    ladder: &Ladder,
    window: (f64, f64),
) -> Result<SlicedDimension> {
    if points.dim() != 3 {
        return Err(Error::InvalidArgument(format!(
            "slicing needs a 3-dimensional set, got dim={}",
            points.dim()
        )));
    }
    if codim != 1 && codim != 2 {
        return Err(Error::InvalidArgument(format!(
            "codimension must be 1 or 2, got {codim}"
        )));
    }
    if n_slices < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 slices, got {n_slices}"
        )));
    }
    if points.is_empty() {
        return Err(Error::DegenerateSlicing);
    }

    let mut slices = Vec::new();
    let mut empty_slices = 0;
    for axes in orientations(codim) {
        let per_axis: Vec<Vec<i32>> = axes
            .iter()
            .map(|&a| central_offsets(points.extent(a).unwrap(), n_slices))
            .collect();
        let combos: Vec<Vec<i32>> = match per_axis.as_slice() {
            [a] => a.iter().map(|&o| vec![o]).collect(),
            [a, b] => a
                .iter()
                .flat_map(|&x| b.iter().map(move |&y| vec![x, y]))
                .collect(),
            _ => unreachable!(),
        };
        for offsets in combos {
            let s = slice(points, &axes, &offsets, 1)?;
            if s.is_empty() {
                empty_slices += 1;
                continue;
            }
            let series = box_count(&s, ladder)?;
            let estimate = fit_dimension(&series, window)?;
            slices.push(SliceFit {
                axes: axes.clone(),
                offsets,
                points: s.len(),
                estimate,
            });
        }
    }
    if slices.is_empty() {
        return Err(Error::DegenerateSlicing);
    }

    let total: f64 = slices.iter().map(|s| s.points as f64).sum();
    let weighted = |f: fn(&DimensionEstimate) -> f64| {
        slices
            .iter()
            .map(|s| s.points as f64 * f(&s.estimate))
            .sum::<f64>()
            / total
    };
    let d = weighted(|e| e.d);
    let r2 = weighted(|e| e.r2);
    let stderr = slices
        .iter()
        .map(|s| (s.points as f64 * s.estimate.stderr).powi(2))
        .sum::<f64>()
        .sqrt()
        / total;
    let first = &slices[0].estimate;
    let estimate = DimensionEstimate {
        d: d + codim as f64,
        stderr,
        r2,
        eps_min: first.eps_min,
        eps_max: first.eps_max,
        n_scales: first.n_scales,
    };
    Ok(SlicedDimension {
        estimate,
        codim,
        slices,
        empty_slices,
    })
}
