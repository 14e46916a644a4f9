use std::cell::Cell;

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;

/// Sweeps between recorded residual checkpoints.
pub const CHECKPOINT_INTERVAL: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteKind {
    /// Free site relaxed by the solver.
    Interior,
    /// Cluster site, pinned to `u = 0`.
    ClusterBoundary,
    /// Far electrode, pinned to `u = 1`.
    FarBoundary,
    /// Beyond the far boundary; never read by the solver.
    Exterior,
}

/// Scalar potential on a cube of `(2 * half + 1)^dim` sites centred on the
/// origin, with a per-site boundary mask.
#[derive(Debug, Clone)]
pub struct PotentialGrid {
    dim: usize,
    half: i32,
    side: usize,
    u: Vec<f64>,
    mask: Vec<SiteKind>,
    /// Interior site indices in sweep order (ascending).
    interior: Vec<usize>,
    far_radius: f64,
}

impl PotentialGrid {
    fn blank(dim: usize, half: i32) -> Self {
        let side = (2 * half + 1) as usize;
        let len = side.pow(dim as u32);
        Self {
            dim,
            half,
            side,
            u: vec![1.0; len],
            mask: vec![SiteKind::Exterior; len],
            interior: Vec::new(),
            far_radius: 0.0,
        }
    }

    /// Spherical shell: sites with norm `<= inner` are pinned to 0, sites
    /// with norm `>= outer` to 1, everything between is interior.
    pub fn shell(dim: usize, inner: f64, outer: f64) -> Result<Self> {
        check_dim(dim)?;
        let mut grid = Self::blank(dim, outer.ceil() as i32 + 2);
        grid.classify(outer, |p| p.norm() <= inner);
        Ok(grid)
    }

    /// Like [`PotentialGrid::shell`], but the zero set is the lattice ball
    /// whose exposed sites (those with a free neighbour) have a mean norm
    /// closest to `inner`. A plain `norm <= inner` ball has its surface
    /// about half a lattice unit inside `inner`, which biases comparisons
    /// against continuum solutions.
    pub fn lattice_shell(dim: usize, inner: f64, outer: f64) -> Result<Self> {
        check_dim(dim)?;
        let threshold = surface_matched_threshold(dim, inner);
        let mut grid = Self::blank(dim, outer.ceil() as i32 + 2);
        grid.classify(outer, |p| p.norm_sq() <= threshold);
        Ok(grid)
    }

    /// Grid for a cluster with the far boundary at `far_radius`. Cluster
    /// sites hold 0; interior sites start from 1.
    pub fn for_cluster(cluster: &Cluster, far_radius: f64) -> Result<Self> {
        check_dim(cluster.dim())?;
        if far_radius <= cluster.bounding_radius() + 1.0 {
            return Err(Error::InvalidArgument(format!(
                "far radius {far_radius} does not clear the cluster (R_max = {})",
                cluster.bounding_radius()
            )));
        }
        let mut grid = Self::blank(cluster.dim(), far_radius.ceil() as i32 + 2);
        grid.classify(far_radius, |p| cluster.contains(p));
        Ok(grid)
    }

    /// Enlarged grid with the far boundary moved to `far_radius`; values of
    /// sites interior to both grids carry over, new sites start at 1.
    pub fn remesh(&self, cluster: &Cluster, far_radius: f64) -> Result<Self> {
        let mut grid = Self::for_cluster(cluster, far_radius)?;
        for k in 0..grid.interior.len() {
            let idx = grid.interior[k];
            let p = grid.point(idx);
            if let Some(old) = self.index(&p) {
                if self.mask[old] == SiteKind::Interior {
                    grid.u[idx] = self.u[old];
                }
            }
        }
        Ok(grid)
    }

    fn classify(&mut self, far_radius: f64, is_cluster: impl Fn(&LatticePoint) -> bool) {
        self.far_radius = far_radius;
        let far_sq = far_radius * far_radius;
        for idx in 0..self.u.len() {
            let p = self.point(idx);
            if is_cluster(&p) {
                self.mask[idx] = SiteKind::ClusterBoundary;
                self.u[idx] = 0.0;
            } else if (p.norm_sq() as f64) < far_sq {
                self.mask[idx] = SiteKind::Interior;
                self.u[idx] = 1.0;
            }
        }
        for idx in 0..self.u.len() {
            if self.mask[idx] == SiteKind::Exterior {
                let p = self.point(idx);
                let touches = p.neighbors().any(|q| {
                    self.index(&q)
                        .is_some_and(|j| self.mask[j] == SiteKind::Interior)
                });
                if touches {
                    self.mask[idx] = SiteKind::FarBoundary;
                }
                self.u[idx] = 1.0;
            }
        }
        self.interior = (0..self.u.len())
            .filter(|&i| self.mask[i] == SiteKind::Interior)
            .collect();
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sites per axis.
    pub fn extent(&self) -> usize {
        self.side
    }

    pub fn far_radius(&self) -> f64 {
        self.far_radius
    }

    pub fn index(&self, p: &LatticePoint) -> Option<usize> {
        if p.dim() != self.dim {
            return None;
        }
        let mut idx = 0usize;
        for &c in p.coords().iter().rev() {
            if c < -self.half || c > self.half {
                return None;
            }
            idx = idx * self.side + (c + self.half) as usize;
        }
        Some(idx)
    }

    fn point(&self, mut idx: usize) -> LatticePoint {
        let mut c = [0i32; 3];
        for slot in c.iter_mut().take(self.dim) {
            *slot = (idx % self.side) as i32 - self.half;
            idx /= self.side;
        }
        LatticePoint::from_slice(&c[..self.dim]).unwrap()
    }

    pub fn value(&self, p: &LatticePoint) -> Option<f64> {
        self.index(p).map(|i| self.u[i])
    }

    pub fn kind(&self, p: &LatticePoint) -> Option<SiteKind> {
        self.index(p).map(|i| self.mask[i])
    }

    /// Pins an interior site to the cluster (u = 0).
    pub fn pin_to_cluster(&mut self, p: &LatticePoint) -> Result<()> {
        let idx = self
            .index(p)
            .filter(|&i| self.mask[i] == SiteKind::Interior)
            .ok_or_else(|| {
                Error::PreconditionViolation(format!("{p:?} is not an interior grid site"))
            })?;
        self.mask[idx] = SiteKind::ClusterBoundary;
        self.u[idx] = 0.0;
        if let Ok(k) = self.interior.binary_search(&idx) {
            self.interior.remove(k);
        }
        Ok(())
    }

    /// `(site, kind, u)` for every non-exterior site.
    pub fn sites(&self) -> impl Iterator<Item = (LatticePoint, SiteKind, f64)> + '_ {
        (0..self.u.len())
            .filter(|&i| self.mask[i] != SiteKind::Exterior)
            .map(|i| (self.point(i), self.mask[i], self.u[i]))
    }

    /// Text dump of `u`: one grid row per line, values space separated;
    /// 3D grids print one block per z-plane separated by blank lines.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        let planes = if self.dim == 3 { self.side } else { 1 };
        let plane_len = self.side * self.side;
        for z in 0..planes {
            if z > 0 {
                out.push('\n');
            }
            for row in 0..self.side {
                let start = z * plane_len + row * self.side;
                let line: Vec<String> = self.u[start..start + self.side]
                    .iter()
                    .map(|v| format!("{v:.6}"))
                    .collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out
    }

    fn strides(&self) -> [usize; 3] {
        [1, self.side, self.side * self.side]
    }
}

/// Squared-norm cutoff for [`PotentialGrid::lattice_shell`].
fn surface_matched_threshold(dim: usize, radius: f64) -> i64 {
    let reach = radius.ceil() as i32 + 2;
    let mut norms = Vec::new();
    let box_points = |f: &mut dyn FnMut(LatticePoint)| {
        for x in -reach..=reach {
            for y in -reach..=reach {
                if dim == 2 {
                    f(LatticePoint::new2(x, y));
                } else {
                    for z in -reach..=reach {
                        f(LatticePoint::new3(x, y, z));
                    }
                }
            }
        }
    };
    box_points(&mut |p| norms.push(p.norm_sq()));
    norms.sort_unstable();
    norms.dedup();
    let lo = ((radius - 1.0).max(0.0)).powi(2);
    let hi = (radius + 1.0).powi(2);
    let mut best = (f64::INFINITY, radius.powi(2).floor() as i64);
    for &t in norms
        .iter()
        .filter(|&&t| (t as f64) >= lo && (t as f64) <= hi)
    {
        let (mut sum, mut count) = (0.0, 0usize);
        box_points(&mut |p| {
            if p.norm_sq() <= t && p.neighbors().any(|q| q.norm_sq() > t) {
                sum += p.norm();
                count += 1;
            }
        });
        let gap = (sum / count as f64 - radius).abs();
        if gap < best.0 {
            best = (gap, t);
        }
    }
    best.1
}

/// Groups the ascending interior indices into contiguous `[start, end)`
/// runs. Interior sites never sit on the grid edge, so a run never wraps
/// across rows.
fn row_runs(interior: &[usize]) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &i in interior {
        match runs.last_mut() {
            Some((_, end)) if *end == i => *end += 1,
            _ => runs.push((i, i + 1)),
        }
    }
    runs
}

/// Gauss-Seidel/SOR update of one row run; returns the largest update and
/// the largest |u| seen.
#[inline]
fn sweep_run_2d(u: &[Cell<f64>], start: usize, end: usize, row: usize, omega: f64) -> (f64, f64) {
    let mid = &u[start - 1..end + 1];
    let up = &u[start - row..end - row];
    let down = &u[start + row..end + row];
    let mut max_update = 0.0f64;
    let mut max_abs = 0.0f64;
    for (k, (a, b)) in up.iter().zip(down).enumerate() {
        let centre = mid[k + 1].get();
        let sum = mid[k].get() + mid[k + 2].get() + a.get() + b.get();
        let delta = omega * (0.25 * sum - centre);
        let v = centre + delta;
        mid[k + 1].set(v);
        max_update = max_update.max(delta.abs());
        max_abs = max_abs.max(v.abs());
    }
    (max_update, max_abs)
}

#[inline]
fn sweep_run_3d(
    u: &[Cell<f64>],
    start: usize,
    end: usize,
    row: usize,
    plane: usize,
    omega: f64,
) -> (f64, f64) {
    let mid = &u[start - 1..end + 1];
    let up = &u[start - row..end - row];
    let down = &u[start + row..end + row];
    let front = &u[start - plane..end - plane];
    let back = &u[start + plane..end + plane];
    let mut max_update = 0.0f64;
    let mut max_abs = 0.0f64;
    for (k, (((a, b), c), d)) in up.iter().zip(down).zip(front).zip(back).enumerate() {
        let centre = mid[k + 1].get();
        let sum = mid[k].get() + mid[k + 2].get() + a.get() + b.get() + c.get() + d.get();
        let delta = omega * (sum / 6.0 - centre);
        let v = centre + delta;
        mid[k + 1].set(v);
        max_update = max_update.max(delta.abs());
        max_abs = max_abs.max(v.abs());
    }
    (max_update, max_abs)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "grid dimension must be 2 or 3, got {dim}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub sweeps: usize,
    /// Largest single-site update in the final sweep.
    pub residual: f64,
    /// Residual after every [`CHECKPOINT_INTERVAL`] sweeps.
    pub checkpoints: Vec<f64>,
}

/// Successive over-relaxation of `Δu = 0` with Dirichlet sites held fixed.
///
/// Sweeps stop once the largest update in a sweep is at most
/// `tol * max(1, max|u|)`. The converged interior is clamped to the
/// boundary range `[0, 1]`.
pub fn solve_laplace(
    grid: &mut PotentialGrid,
    omega: f64,
    tol: f64,
    max_sweeps: usize,
) -> Result<SolveReport> {
    if !(omega > 0.0 && omega < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "SOR factor must lie in (0, 2), got {omega}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let has = |k: SiteKind| grid.mask.contains(&k);
    if !has(SiteKind::ClusterBoundary) || !has(SiteKind::FarBoundary) {
        return Err(Error::PreconditionViolation(
            "Laplace solve needs both a zero (cluster) and a unit (far) boundary".into(),
        ));
    }

    let strides = grid.strides();
    let dim = grid.dim;
    let runs = row_runs(&grid.interior);
    let cells = Cell::from_mut(grid.u.as_mut_slice()).as_slice_of_cells();
    let mut checkpoints = Vec::new();
    let mut residual = f64::INFINITY;

    for sweep in 1..=max_sweeps {
        let mut max_update = 0.0f64;
        let mut max_abs = 1.0f64;
        for &(start, end) in &runs {
            let (update, abs) = if dim == 2 {
                sweep_run_2d(cells, start, end, strides[1], omega)
            } else {
                sweep_run_3d(cells, start, end, strides[1], strides[2], omega)
            };
            max_update = max_update.max(update);
            max_abs = max_abs.max(abs);
        }
        residual = max_update;
        if sweep % CHECKPOINT_INTERVAL == 0 {
            checkpoints.push(residual);
        }
        if residual <= tol * max_abs {
            // Over-relaxation can leave round-off sized excursions past the
            // boundary values; the converged field is projected back.
            for &(start, end) in &runs {
                for c in &cells[start..end] {
                    c.set(c.get().clamp(0.0, 1.0));
                }
            }
            return Ok(SolveReport {
                sweeps: sweep,
                residual,
                checkpoints,
            });
        }
    }
    Err(Error::ConvergenceFailure {
        sweeps: max_sweeps,
        residual,
    })
}
