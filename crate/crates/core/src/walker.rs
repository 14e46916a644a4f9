//! Random-walker (Witten–Sander) aggregation.
//!
//! Walkers are released on a circle/sphere well outside the cluster and
//! diffuse until they touch it. First-contact positions sample the harmonic
//! measure of the exterior Laplace problem, so the walk itself plays the
//! role of the random term in the growth law. Far from the cluster the walk
//! is accelerated with long jumps whose length keeps the walker strictly
//! outside the cluster's bounding sphere.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, UnitSphere};

use crate::cluster::{Cluster, GrowthHistory};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::rng::{RngSeed, SimRng};

/// Relaunches allowed for a single particle before growth is declared stalled.
pub const RELAUNCH_BUDGET: u64 = 10_000;

/// Distance beyond the bounding sphere at which long jumps kick in.
const JUMP_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkerParams {
    pub dim: usize,
    pub n_particles: usize,
    /// Launch radius is `launch_factor * max(R_max, 1) + 5`.
    pub launch_factor: f64,
    /// Kill radius is `kill_factor * launch radius`.
    pub kill_factor: f64,
    pub max_steps_per_walker: u64,
    pub seed: RngSeed,
}

impl Default for WalkerParams {
    fn default() -> Self {
        Self {
            dim: 2,
            n_particles: 1000,
            launch_factor: 2.0,
            kill_factor: 10.0,
            max_steps_per_walker: 10_000_000,
            seed: RngSeed(0),
        }
    }
}

impl WalkerParams {
    pub fn validate(&self) -> Result<()> {
        if self.dim != 2 && self.dim != 3 {
            return Err(Error::InvalidArgument(format!(
                "walker dimension must be 2 or 3, got {}",
                self.dim
            )));
        }
        if self.n_particles < 1 {
            return Err(Error::InvalidArgument(
                "n_particles must be at least 1".into(),
            ));
        }
        if !(self.launch_factor > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "launch_factor must exceed 1, got {}",
                self.launch_factor
            )));
        }
        if !(self.kill_factor >= 2.0 * self.launch_factor) {
            return Err(Error::InvalidArgument(format!(
                "kill_factor must be at least 2 x launch_factor, got {} vs {}",
                self.kill_factor, self.launch_factor
            )));
        }
        if self.max_steps_per_walker == 0 {
            return Err(Error::InvalidArgument(
                "max_steps_per_walker must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// How a walker's journey ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkerOutcome {
    Stuck(LatticePoint),
    Killed,
    Exhausted,
}

/// Result of a single move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Moved(LatticePoint),
    Done(WalkerOutcome),
}

pub fn launch_radius(cluster: &Cluster, launch_factor: f64) -> f64 {
    launch_factor * cluster.bounding_radius().max(1.0) + 5.0
}

/// Uniform random unit vector in `dim` dimensions (2 or 3).
fn random_direction(dim: usize, rng: &mut SimRng) -> [f64; 3] {
    if dim == 2 {
        let theta = rng.random::<f64>() * TAU;
        [theta.cos(), theta.sin(), 0.0]
    } else {
        UnitSphere.sample(rng)
    }
}

/// Release point for a new walker: the launch radius in a uniformly random
/// direction, rounded to the lattice.
pub fn launch_position(cluster: &Cluster, launch_factor: f64, rng: &mut SimRng) -> LatticePoint {
    let dim = cluster.dim();
    let radius = launch_radius(cluster, launch_factor);
    let dir = random_direction(dim, rng);
    let pos: Vec<f64> = dir[..dim].iter().map(|d| d * radius).collect();
    LatticePoint::round_from(&pos)
}

/// Dense occupancy window around the origin. Each cell stores whether it
/// is occupied and whether it touches an occupied cell, so the sticking
/// test is one lookup.
#[derive(Debug, Clone)]
struct Occupancy {
    dim: usize,
    half: i32,
    side: usize,
    cells: Vec<u8>,
}

const OCCUPIED: u8 = 1;
const NEAR: u8 = 2;

impl Occupancy {
    fn new(dim: usize, half: i32) -> Self {
        let side = (2 * half + 1) as usize;
        Self {
            dim,
            half,
            side,
            cells: vec![0; side.pow(dim as u32)],
        }
    }

    fn for_cluster(cluster: &Cluster, half: i32) -> Self {
        let mut occ = Self::new(cluster.dim(), half);
        for p in cluster.order() {
            occ.mark(p);
        }
        occ
    }

    #[inline]
    fn index(&self, p: &LatticePoint) -> Option<usize> {
        let mut idx = 0usize;
        for &c in p.coords().iter().rev() {
            if c < -self.half || c > self.half {
                return None;
            }
            idx = idx * self.side + (c + self.half) as usize;
        }
        Some(idx)
    }

    #[inline]
    fn get(&self, p: &LatticePoint) -> u8 {
        self.index(p).map_or(0, |i| self.cells[i])
    }

    fn mark(&mut self, p: &LatticePoint) {
        let i = self.index(p).expect("site outside occupancy window");
        self.cells[i] |= OCCUPIED | NEAR;
        for q in p.neighbors() {
            let j = self.index(&q).expect("neighbour outside occupancy window");
            self.cells[j] |= NEAR;
        }
    }

    fn covers(&self, radius_sq: i64) -> bool {
        // One extra ring for neighbours plus slack for rounding.
        let r = (radius_sq as f64).sqrt().ceil() as i32 + 2;
        r <= self.half
    }

    fn dim(&self) -> usize {
        self.dim
    }
}

/// A cluster together with the acceleration structures walkers need.
#[derive(Debug, Clone)]
pub struct WalkerEngine {
    cluster: Cluster,
    occupancy: Occupancy,
    params: WalkerParams,
}

impl WalkerEngine {
    pub fn new(params: WalkerParams) -> Result<Self> {
        params.validate()?;
        let cluster = Cluster::new(params.dim)?;
        Ok(Self::with_cluster(cluster, params))
    }

    /// Engine around an existing cluster, e.g. for probing first-contact
    /// statistics on a fixed shape.
    pub fn with_cluster(cluster: Cluster, params: WalkerParams) -> Self {
        let half = initial_half(&cluster);
        let occupancy = Occupancy::for_cluster(&cluster, half);
        Self {
            cluster,
            occupancy,
            params,
        }
    }

    pub fn cluster(&self) -> &Cluster {
        &self.cluster
    }

    pub fn into_cluster(self) -> Cluster {
        self.cluster
    }

    pub fn launch_radius(&self) -> f64 {
        launch_radius(&self.cluster, self.params.launch_factor)
    }

    pub fn kill_radius(&self) -> f64 {
        self.params.kill_factor * self.launch_radius()
    }

    pub fn is_occupied(&self, p: &LatticePoint) -> bool {
        self.occupancy.get(p) & OCCUPIED != 0
    }

    /// True when `p` is empty and touches the cluster.
    pub fn is_sticking_site(&self, p: &LatticePoint) -> bool {
        self.occupancy.get(p) == NEAR
    }

    /// One move of a walker at the unoccupied site `pos`.
    ///
    /// More than [`JUMP_THRESHOLD`] outside the bounding sphere the walker
    /// jumps `floor(d - R - 2)` in a random direction; otherwise it takes a
    /// unit step to a uniformly chosen lattice neighbour.
    pub fn walk_step(&self, pos: LatticePoint, rng: &mut SimRng) -> Step {
        let dim = self.occupancy.dim();
        let r_max = self.cluster.bounding_radius();
        let dist = pos.norm();
        let next = if dist - r_max > JUMP_THRESHOLD {
            let len = (dist - r_max - 2.0).floor();
            let dir = random_direction(dim, rng);
            let mut target = [0.0; 3];
            for axis in 0..dim {
                target[axis] = pos.coord(axis) as f64 + len * dir[axis];
            }
            LatticePoint::round_from(&target[..dim])
        } else {
            let k = rng.random_range(0..2 * dim);
            pos.offset(k / 2, if k % 2 == 0 { -1 } else { 1 })
        };
        let kill = self.kill_radius();
        if next.norm_sq() as f64 > kill * kill {
            return Step::Done(WalkerOutcome::Killed);
        }
        if self.is_sticking_site(&next) {
            return Step::Done(WalkerOutcome::Stuck(next));
        }
        Step::Moved(next)
    }

    /// Runs one walker from launch to its outcome. When `trace` is given,
    /// every visited position (launch point included) is appended to it.
    pub fn run_walker(
        &self,
        rng: &mut SimRng,
        mut trace: Option<&mut Vec<LatticePoint>>,
    ) -> WalkerOutcome {
        let mut pos = launch_position(&self.cluster, self.params.launch_factor, rng);
        if let Some(t) = trace.as_deref_mut() {
            t.push(pos);
        }
        for _ in 0..self.params.max_steps_per_walker {
            match self.walk_step(pos, rng) {
                Step::Moved(next) => {
                    pos = next;
                    if let Some(t) = trace.as_deref_mut() {
                        t.push(pos);
                    }
                }
                Step::Done(outcome) => {
                    if let (Some(t), WalkerOutcome::Stuck(at)) = (trace.as_deref_mut(), outcome) {
                        t.push(at);
                    }
                    return outcome;
                }
            }
        }
        WalkerOutcome::Exhausted
    }

    /// Adds a stuck walker's site to the cluster.
    pub fn attach(&mut self, at: LatticePoint) -> Result<()> {
        if !self.is_sticking_site(&at) {
            return Err(Error::PreconditionViolation(format!(
                "{at:?} is not an empty site adjacent to the cluster"
            )));
        }
        self.cluster.push_unchecked(at);
        if self.occupancy.covers(self.cluster.max_norm_sq()) {
            self.occupancy.mark(&at);
        } else {
            let half = (self.occupancy.half * 2).max(initial_half(&self.cluster));
            self.occupancy = Occupancy::for_cluster(&self.cluster, half);
        }
        Ok(())
    }

    /// Releases walkers until one sticks, relaunching killed or exhausted
    /// ones. Returns the new site.
    fn add_particle(
        &mut self,
        particle: usize,
        rng: &mut SimRng,
        mut trace: Option<&mut Vec<Vec<LatticePoint>>>,
    ) -> Result<LatticePoint> {
        let mut relaunches = 0u64;
        loop {
            let mut path = trace.as_ref().map(|_| Vec::new());
            let outcome = self.run_walker(rng, path.as_mut());
            if let (Some(t), Some(path)) = (trace.as_deref_mut(), path) {
                t.push(path);
            }
            match outcome {
                WalkerOutcome::Stuck(at) => {
                    self.attach(at)?;
                    return Ok(at);
                }
                WalkerOutcome::Killed | WalkerOutcome::Exhausted => {
                    relaunches += 1;
                    if relaunches >= RELAUNCH_BUDGET {
                        return Err(Error::GrowthStalled {
                            particle,
                            relaunches,
                        });
                    }
                }
            }
        }
    }
}

fn initial_half(cluster: &Cluster) -> i32 {
    let r = cluster.bounding_radius().ceil() as i32;
    (2 * r + 16).max(32)
}

/// Grows a walker-DLA cluster of `1 + n_particles` sites.
pub fn grow(params: &WalkerParams) -> Result<(Cluster, GrowthHistory)> {
    grow_inner(params, None)
}

/// Like [`grow`], additionally returning every walker trajectory in launch
/// order. Memory grows with total walk length; meant for small runs.
pub fn grow_traced(
    params: &WalkerParams,
) -> Result<(Cluster, GrowthHistory, Vec<Vec<LatticePoint>>)> {
    let mut trace = Vec::new();
    let (cluster, history) = grow_inner(params, Some(&mut trace))?;
    Ok((cluster, history, trace))
}

fn grow_inner(
    params: &WalkerParams,
    mut trace: Option<&mut Vec<Vec<LatticePoint>>>,
) -> Result<(Cluster, GrowthHistory)> {
    let mut engine = WalkerEngine::new(params.clone())?;
    let mut rng = params.seed.rng();
    let mut history = GrowthHistory::default();
    history.records.reserve(params.n_particles);
    for particle in 1..=params.n_particles {
        engine.add_particle(particle, &mut rng, trace.as_deref_mut())?;
        history.push(engine.cluster.current_record());
    }
    Ok((engine.into_cluster(), history))
}
