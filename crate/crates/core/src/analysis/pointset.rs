use crate::cluster::{radius_of_gyration, Cluster};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;

/// Finite set of lattice points in 1, 2 or 3 dimensions, kept sorted and
/// free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<LatticePoint>,
}

impl PointSet {
    pub fn new(dim: usize, mut points: Vec<LatticePoint>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidArgument(format!(
                "point set dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::InvalidArgument(format!(
                "point {p:?} does not have {dim} coordinates"
            )));
        }
        points.sort_unstable();
        points.dedup();
        Ok(Self { dim, points })
    }

    pub fn from_cluster(cluster: &Cluster) -> Self {
        let mut points = cluster.order().to_vec();
        points.sort_unstable();
        Self {
            dim: cluster.dim(),
            points,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn radius_of_gyration(&self) -> f64 {
        radius_of_gyration(&self.points)
    }

    /// Per-axis `(min, max)` coordinate; `None` for an empty set.
    pub fn extent(&self, axis: usize) -> Option<(i32, i32)> {
        let mut it = self.points.iter().map(|p| p.coord(axis));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), c| (lo.min(c), hi.max(c))))
    }

    pub fn translated(&self, by: &[i32]) -> Self {
        let points = self.points.iter().map(|p| p.translate(by)).collect();
        Self::new(self.dim, points).expect("translation preserves arity")
    }
}

/// Occupied sites that have at least one empty lattice neighbour.
pub fn extract_interface(cluster: &Cluster) -> PointSet {
    let points = cluster
        .order()
        .iter()
        .filter(|p| p.neighbors().any(|q| !cluster.contains(&q)))
        .copied()
        .collect();
    PointSet::new(cluster.dim(), points).expect("cluster sites share its dimension")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_is_its_own_interface() {
        let c = Cluster::new(2).unwrap();
        let s = extract_interface(&c);
        assert_eq!(s.points(), &[LatticePoint::new2(0, 0)]);
    }

    #[test]
    fn block_interface_excludes_centre() {
        let pts: Vec<_> = (-1..=1)
            .flat_map(|x| (-1..=1).map(move |y| LatticePoint::new2(x, y)))
            .collect();
        let c = Cluster::from_connected_points(2, &pts).unwrap();
        let s = extract_interface(&c);
        assert_eq!(s.len(), 8);
        assert!(!s.contains(&LatticePoint::new2(0, 0)));
    }

    #[test]
    fn new_dedups_and_checks_arity() {
        let s = PointSet::new(1, vec![LatticePoint::new1(3), LatticePoint::new1(3)]).unwrap();
        assert_eq!(s.len(), 1);
        assert!(PointSet::new(2, vec![LatticePoint::new1(0)]).is_err());
    }
}
