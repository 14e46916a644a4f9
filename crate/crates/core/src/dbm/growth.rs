use std::collections::HashSet;

use rand::Rng;

use crate::cluster::{Cluster, GrowthHistory};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::rng::{RngSeed, SimRng};

use super::grid::{solve_laplace, PotentialGrid, SolveReport};

/// Extra far-boundary headroom added on every re-mesh, in lattice units.
const REMESH_SLACK: f64 = 8.0;

/// Minimum gap between the cluster's bounding radius and the far boundary.
const MIN_CLEARANCE: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DbmParams {
    pub dim: usize,
    pub n_particles: usize,
    /// Far boundary sits at least `grid_margin * R_max` from the origin.
    pub grid_margin: f64,
    pub eta: f64,
    /// Gain on the field gradient; cancels in normalised probabilities.
    pub k: f64,
    pub sor_omega: f64,
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: RngSeed,
}

impl Default for DbmParams {
    fn default() -> Self {
        Self {
            dim: 2,
            n_particles: 1000,
            grid_margin: 1.5,
            eta: 1.0,
            k: 1.0,
            sor_omega: 1.8,
            tol: 1e-6,
            max_sweeps: 100_000,
            seed: RngSeed(0),
        }
    }
}

impl DbmParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.dim != 2 && self.dim != 3 {
            return bad(format!("DBM dimension must be 2 or 3, got {}", self.dim));
        }
        if self.n_particles < 1 {
            return bad("n_particles must be at least 1".into());
        }
        if !(self.grid_margin > 1.2) {
            return bad(format!(
                "grid_margin must exceed 1.2, got {}",
                self.grid_margin
            ));
        }
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return bad(format!("eta must be a finite value >= 0, got {}", self.eta));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return bad(format!("k must be positive, got {}", self.k));
        }
        if !(self.sor_omega > 1.0 && self.sor_omega < 2.0) {
            return bad(format!(
                "sor_omega must lie in (1, 2), got {}",
                self.sor_omega
            ));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_sweeps == 0 {
            return bad("max_sweeps must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub site: LatticePoint,
    pub weight: f64,
}

/// Empty perimeter sites of `cluster` with growth weight `(k * u)^eta`.
///
/// With `u = 0` on the cluster and unit lattice spacing, the potential at
/// an empty neighbour is the one-sided normal derivative of the field.
/// Sites are listed in first-discovery order along the growth history.
pub fn growth_candidates(
    cluster: &Cluster,
    grid: &PotentialGrid,
    k: f64,
    eta: f64,
) -> Result<Vec<Candidate>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in cluster.order() {
        for q in p.neighbors() {
            if cluster.contains(&q) || !seen.insert(q) {
                continue;
            }
            let u = grid.value(&q).ok_or_else(|| {
                Error::PreconditionViolation(format!("perimeter site {q:?} lies outside the grid"))
            })?;
            out.push(Candidate {
                site: q,
                weight: (k * u.max(0.0)).powf(eta),
            });
        }
    }
    if !out.iter().any(|c| c.weight > 0.0) {
        return Err(Error::DegenerateField);
    }
    Ok(out)
}

/// Picks candidate `i` with probability `weight_i / sum(weights)`.
pub fn select_growth_site(candidates: &[Candidate], rng: &mut SimRng) -> Result<LatticePoint> {
    if candidates.is_empty() {
        return Err(Error::PreconditionViolation("no growth candidates".into()));
    }
    let total: f64 = candidates.iter().map(|c| c.weight).sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::PreconditionViolation(format!(
            "growth weights must have a positive finite sum, got {total}"
        )));
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for c in candidates {
        acc += c.weight;
        if acc > target {
            return Ok(c.site);
        }
    }
    // Rounding can leave `target` at the very top of the range.
    Ok(candidates
        .iter()
        .rev()
        .find(|c| c.weight > 0.0)
        .unwrap()
        .site)
}

fn required_far_radius(cluster: &Cluster, margin: f64) -> f64 {
    let r = cluster.bounding_radius();
    (margin * r).max(r + MIN_CLEARANCE)
}

/// Full dielectric-breakdown loop: solve, weight, select, add, repeat.
pub fn run_dbm(params: &DbmParams) -> Result<(Cluster, GrowthHistory)> {
    run_dbm_observed(params, |_, _, _| {})
}

/// [`run_dbm`] with a callback that sees the cluster, the converged grid
/// and the solver report after every solve.
pub fn run_dbm_observed(
    params: &DbmParams,
    mut observe: impl FnMut(&Cluster, &PotentialGrid, &SolveReport),
) -> Result<(Cluster, GrowthHistory)> {
    params.validate()?;
    let mut rng = params.seed.rng();
    let mut cluster = Cluster::new(params.dim)?;
    let mut history = GrowthHistory::default();
    let far = required_far_radius(&cluster, params.grid_margin) + REMESH_SLACK;
    let mut grid = PotentialGrid::for_cluster(&cluster, far)?;
    let report = solve_laplace(&mut grid, params.sor_omega, params.tol, params.max_sweeps)?;
    observe(&cluster, &grid, &report);

    for _ in 0..params.n_particles {
        let candidates = growth_candidates(&cluster, &grid, params.k, params.eta)?;
        let site = select_growth_site(&candidates, &mut rng)?;
        cluster.add_site(site)?;
        history.push(cluster.current_record());

        let needed = required_far_radius(&cluster, params.grid_margin);
        if needed > grid.far_radius() {
            grid = grid.remesh(&cluster, needed + REMESH_SLACK)?;
        } else {
            grid.pin_to_cluster(&site)?;
        }
        let report = solve_laplace(&mut grid, params.sor_omega, params.tol, params.max_sweeps)?;
        observe(&cluster, &grid, &report);
    }
    Ok((cluster, history))
}
