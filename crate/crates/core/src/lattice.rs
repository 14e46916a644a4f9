use std::fmt;

/// Integer lattice point in 1, 2 or 3 dimensions.
///
/// Unused trailing coordinates are always zero, so equality and hashing
/// only ever see the meaningful axes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    dim: u8,
    coords: [i32; 3],
}

impl LatticePoint {
    /// Builds a point from a coordinate slice of length 1, 2 or 3.
    pub fn from_slice(coords: &[i32]) -> Option<Self> {
        if coords.is_empty() || coords.len() > 3 {
            return None;
        }
        let mut c = [0; 3];
        c[..coords.len()].copy_from_slice(coords);
        Some(Self {
            dim: coords.len() as u8,
            coords: c,
        })
    }

    pub const fn new1(x: i32) -> Self {
        Self {
            dim: 1,
            coords: [x, 0, 0],
        }
    }

    pub const fn new2(x: i32, y: i32) -> Self {
        Self {
            dim: 2,
            coords: [x, y, 0],
        }
    }

    pub const fn new3(x: i32, y: i32, z: i32) -> Self {
        Self {
            dim: 3,
            coords: [x, y, z],
        }
    }

    /// All-zeros point of the given dimension.
    pub fn origin(dim: usize) -> Self {
        assert!(
            (1..=3).contains(&dim),
            "lattice dimension must be 1, 2 or 3"
        );
        Self {
            dim: dim as u8,
            coords: [0; 3],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[i32] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn coord(&self, axis: usize) -> i32 {
        debug_assert!(axis < self.dim());
        self.coords[axis]
    }

    #[inline]
    pub fn norm_sq(&self) -> i64 {
        self.coords.iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// Point shifted by `delta` along `axis`.
    #[inline]
    pub fn offset(&self, axis: usize, delta: i32) -> Self {
        let mut p = *self;
        p.coords[axis] += delta;
        p
    }

    pub fn translate(&self, by: &[i32]) -> Self {
        let mut p = *self;
        for (c, d) in p.coords.iter_mut().zip(by) {
            *c += d;
        }
        p
    }

    /// The `2 * dim` unit-step lattice neighbours.
    pub fn neighbors(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (0..self.dim()).flat_map(move |axis| [self.offset(axis, -1), self.offset(axis, 1)])
    }

    /// Manhattan distance; two points are lattice-adjacent when this is 1.
    pub fn l1_distance(&self, other: &LatticePoint) -> i64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(&a, &b)| ((a as i64) - (b as i64)).abs())
            .sum()
    }

    pub fn is_adjacent(&self, other: &LatticePoint) -> bool {
        self.dim == other.dim && self.l1_distance(other) == 1
    }

    /// Rounds a real-valued position to the nearest lattice point.
    pub fn round_from(pos: &[f64]) -> Self {
        let mut c = [0; 3];
        for (dst, &x) in c.iter_mut().zip(pos) {
            *dst = x.round() as i32;
        }
        Self {
            dim: pos.len() as u8,
            coords: c,
        }
    }

    /// Copy of the point with the listed axes removed.
    pub(crate) fn drop_axes(&self, drop: &[usize]) -> Self {
        let mut c = [0; 3];
        let mut k = 0;
        for axis in 0..self.dim() {
            if !drop.contains(&axis) {
                c[k] = self.coords[axis];
                k += 1;
            }
        }
        Self {
            dim: k as u8,
            coords: c,
        }
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LatticePoint {
    /// Whitespace-separated coordinates, the snapshot line format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_are_unit_steps() {
        let p = LatticePoint::new3(1, -2, 5);
        let n: Vec<_> = p.neighbors().collect();
        assert_eq!(n.len(), 6);
        assert!(n.iter().all(|q| q.is_adjacent(&p)));
        assert_eq!(LatticePoint::new2(0, 0).neighbors().count(), 4);
    }

    #[test]
    fn drop_axes_keeps_remaining_order() {
        let p = LatticePoint::new3(4, 5, 6);
        assert_eq!(p.drop_axes(&[1]), LatticePoint::new2(4, 6));
        assert_eq!(p.drop_axes(&[0, 2]), LatticePoint::new1(5));
    }

    #[test]
    fn from_slice_rejects_bad_arity() {
        assert!(LatticePoint::from_slice(&[]).is_none());
        assert!(LatticePoint::from_slice(&[1, 2, 3, 4]).is_none());
        assert_eq!(
            LatticePoint::from_slice(&[1, 2]),
            Some(LatticePoint::new2(1, 2))
        );
    }

    #[test]
    fn display_matches_snapshot_line() {
        assert_eq!(LatticePoint::new3(-1, 0, 7).to_string(), "-1 0 7");
    }
}
