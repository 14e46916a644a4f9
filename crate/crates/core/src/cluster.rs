//! Dimension-generic lattice aggregate with its growth history.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;

/// An on-lattice aggregate grown from a seed at the origin.
///
/// `order` keeps every site in the order it was added; the seed is always
/// first. Running integer moments make bounding radius and radius of
/// gyration O(1) queries.
#[derive(Debug, Clone)]
pub struct Cluster {
    dim: usize,
    order: Vec<LatticePoint>,
    sites: HashSet<LatticePoint>,
    max_norm_sq: i64,
    moments: Moments,
}

impl PartialEq for Cluster {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.order == other.order
    }
}

impl Eq for Cluster {}

impl Cluster {
    /// Seed-only cluster in 2 or 3 dimensions.
    pub fn new(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!(
                "cluster dimension must be 2 or 3, got {dim}"
            )));
        }
        let seed = LatticePoint::origin(dim);
        let mut moments = Moments::default();
        moments.push(&seed);
        Ok(Self {
            dim,
            order: vec![seed],
            sites: HashSet::from([seed]),
            max_norm_sq: 0,
            moments,
        })
    }

    /// Rebuilds a cluster from a growth-ordered site list, checking every
    /// invariant along the way. The first site must be the origin.
    pub fn from_order(dim: usize, order: &[LatticePoint]) -> Result<Self> {
        let mut cluster = Self::new(dim)?;
        let Some((first, rest)) = order.split_first() else {
            return Err(Error::InvalidArgument("empty site list".into()));
        };
        if first.dim() != dim || *first != cluster.seed() {
            return Err(Error::PreconditionViolation(format!(
                "first site must be the origin, got {first:?}"
            )));
        }
        for p in rest {
            cluster.add_site(*p)?;
        }
        Ok(cluster)
    }

    /// Orders a connected point set containing the origin by breadth-first
    /// search and builds the corresponding cluster. Used to turn fixtures
    /// and hand-made shapes into valid clusters.
    pub fn from_connected_points(dim: usize, points: &[LatticePoint]) -> Result<Self> {
        let set: HashSet<LatticePoint> = points.iter().copied().collect();
        let origin = LatticePoint::origin(dim);
        if !set.contains(&origin) {
            return Err(Error::PreconditionViolation(
                "point set does not contain the origin".into(),
            ));
        }
        let mut cluster = Self::new(dim)?;
        let mut queue = VecDeque::from([origin]);
        while let Some(p) = queue.pop_front() {
            for q in p.neighbors() {
                if set.contains(&q) && !cluster.contains(&q) {
                    cluster.add_site(q)?;
                    queue.push_back(q);
                }
            }
        }
        if cluster.len() != set.len() {
            return Err(Error::PreconditionViolation(format!(
                "point set is not connected: reached {} of {} points",
                cluster.len(),
                set.len()
            )));
        }
        Ok(cluster)
    }

    /// Appends `p`, which must be new and lattice-adjacent to the cluster.
    pub fn add_site(&mut self, p: LatticePoint) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::PreconditionViolation(format!(
                "site {p:?} has {} coordinates in a {}-dimensional cluster",
                p.dim(),
                self.dim
            )));
        }
        if self.sites.contains(&p) {
            return Err(Error::PreconditionViolation(format!(
                "duplicate site {p:?}"
            )));
        }
        if !p.neighbors().any(|q| self.sites.contains(&q)) {
            return Err(Error::PreconditionViolation(format!(
                "site {p:?} is not adjacent to the cluster"
            )));
        }
        self.push_unchecked(p);
        Ok(())
    }

    /// Hot-path append for growth engines that have already established
    /// novelty and adjacency from their own occupancy structures.
    pub(crate) fn push_unchecked(&mut self, p: LatticePoint) {
        debug_assert!(!self.sites.contains(&p));
        debug_assert!(p.neighbors().any(|q| self.sites.contains(&q)));
        self.sites.insert(p);
        self.order.push(p);
        self.max_norm_sq = self.max_norm_sq.max(p.norm_sq());
        self.moments.push(&p);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn seed(&self) -> LatticePoint {
        LatticePoint::origin(self.dim)
    }

    /// Sites in growth order, seed first.
    pub fn order(&self) -> &[LatticePoint] {
        &self.order
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.sites.contains(p)
    }

    /// Largest Euclidean norm over all sites.
    pub fn bounding_radius(&self) -> f64 {
        (self.max_norm_sq as f64).sqrt()
    }

    pub(crate) fn max_norm_sq(&self) -> i64 {
        self.max_norm_sq
    }

    /// Root-mean-square distance of the sites from their centroid.
    pub fn radius_of_gyration(&self) -> f64 {
        self.moments.radius_of_gyration()
    }

    /// Breadth-first search from the seed over lattice adjacency reaches
    /// every site.
    pub fn is_connected(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.len());
        let mut queue = VecDeque::from([self.seed()]);
        seen.insert(self.seed());
        while let Some(p) = queue.pop_front() {
            for q in p.neighbors() {
                if self.sites.contains(&q) && seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        seen.len() == self.sites.len()
    }

    /// Replays the growth order and records R_g and R_max after every
    /// added particle.
    pub fn history(&self) -> GrowthHistory {
        let mut moments = Moments::default();
        let mut max_norm_sq = 0i64;
        let mut history = GrowthHistory::default();
        for (i, p) in self.order.iter().enumerate() {
            moments.push(p);
            max_norm_sq = max_norm_sq.max(p.norm_sq());
            if i > 0 {
                history.records.push(HistoryRecord {
                    n: i,
                    rg: moments.radius_of_gyration(),
                    rmax: (max_norm_sq as f64).sqrt(),
                });
            }
        }
        history
    }

    pub(crate) fn current_record(&self) -> HistoryRecord {
        HistoryRecord {
            n: self.len() - 1,
            rg: self.radius_of_gyration(),
            rmax: self.bounding_radius(),
        }
    }
}

/// Radius of gyration of an arbitrary point list.
pub fn radius_of_gyration(points: &[LatticePoint]) -> f64 {
    let mut m = Moments::default();
    for p in points {
        m.push(p);
    }
    m.radius_of_gyration()
}

/// Exact integer first and second moments.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: i64,
    sum: [i64; 3],
    sum_sq: i64,
}

impl Moments {
    fn push(&mut self, p: &LatticePoint) {
        self.count += 1;
        for (s, &c) in self.sum.iter_mut().zip(p.coords()) {
            *s += c as i64;
        }
        self.sum_sq += p.norm_sq();
    }

    fn radius_of_gyration(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        // n * sum|x|^2 - |sum x|^2 is exact and translation invariant.
        let n = self.count as i128;
        let centred = n * self.sum_sq as i128
            - self
                .sum
                .iter()
                .map(|&s| (s as i128) * (s as i128))
                .sum::<i128>();
        ((centred as f64) / (n as f64 * n as f64)).max(0.0).sqrt()
    }
}

/// One row of a growth history: after `n` particles (seed excluded).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRecord {
    pub n: usize,
    pub rg: f64,
    pub rmax: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GrowthHistory {
    pub records: Vec<HistoryRecord>,
}

impl GrowthHistory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn push(&mut self, record: HistoryRecord) {
        self.records.push(record);
    }

    pub fn last(&self) -> Option<&HistoryRecord> {
        self.records.last()
    }
}
