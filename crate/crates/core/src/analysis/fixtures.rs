//! Exact prefractals with known dimension, used as estimator oracles.

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;

use super::boxcount::Ladder;
use super::pointset::PointSet;

/// Largest fixture we are willing to materialise.
const MAX_POINTS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    /// Middle-thirds Cantor set on a line of `3^depth` sites.
    CantorDust1D,
    /// Sierpinski carpet in a `3^depth` square.
    SierpinskiCarpet2D,
    /// Menger sponge in a `3^depth` cube.
    MengerSponge3D,
    /// Solid `2^depth` square.
    FilledSquare,
    /// Straight row of `2^depth` sites.
    LatticeLine,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 5] = [
        FixtureKind::CantorDust1D,
        FixtureKind::SierpinskiCarpet2D,
        FixtureKind::MengerSponge3D,
        FixtureKind::FilledSquare,
        FixtureKind::LatticeLine,
    ];

    pub fn dim(self) -> usize {
        match self {
            FixtureKind::CantorDust1D | FixtureKind::LatticeLine => 1,
            FixtureKind::SierpinskiCarpet2D | FixtureKind::FilledSquare => 2,
            FixtureKind::MengerSponge3D => 3,
        }
    }

    fn base(self) -> u32 {
        match self {
            FixtureKind::FilledSquare | FixtureKind::LatticeLine => 2,
            _ => 3,
        }
    }

    /// Copies kept at each refinement level.
    fn copies(self) -> u64 {
        match self {
            FixtureKind::CantorDust1D => 2,
            FixtureKind::SierpinskiCarpet2D => 8,
            FixtureKind::MengerSponge3D => 20,
            FixtureKind::FilledSquare => 4,
            FixtureKind::LatticeLine => 2,
        }
    }

    /// `log(copies) / log(scale)`.
    pub fn similarity_dimension(self) -> f64 {
        (self.copies() as f64).ln() / (self.base() as f64).ln()
    }

    /// Exact point count at `depth`.
    pub fn point_count(self, depth: u32) -> u64 {
        self.copies().pow(depth)
    }

    /// Ladder aligned with the construction: powers of the base from 1 up
    /// to `base^(depth-1)`, on which box counts are exact.
    pub fn matched_ladder(self, depth: u32) -> Ladder {
        let top = self.base().pow(depth.saturating_sub(1));
        if self.base() == 2 {
            Ladder::dyadic_up_to(top)
        } else {
            Ladder::ternary_up_to(top)
        }
    }

    /// Kept cells of the level-1 generator.
    fn generator(self) -> Vec<[i32; 3]> {
        let b = self.base() as i32;
        let cells: Vec<[i32; 3]> = match self.dim() {
            1 => (0..b).map(|x| [x, 0, 0]).collect(),
            2 => (0..b)
                .flat_map(|x| (0..b).map(move |y| [x, y, 0]))
                .collect(),
            _ => (0..b)
                .flat_map(|x| (0..b).flat_map(move |y| (0..b).map(move |z| [x, y, z])))
                .collect(),
        };
        cells
            .into_iter()
            .filter(|c| {
                let ones = c.iter().filter(|&&v| v == 1).count();
                match self {
                    FixtureKind::CantorDust1D => ones == 0,
                    FixtureKind::SierpinskiCarpet2D => ones < 2,
                    FixtureKind::MengerSponge3D => ones < 2,
                    FixtureKind::FilledSquare | FixtureKind::LatticeLine => true,
                }
            })
            .collect()
    }
}

/// Depth-level prefractal anchored at the origin.
pub fn generate_fixture(kind: FixtureKind, depth: u32) -> Result<PointSet> {
    if depth < 1 {
        return Err(Error::InvalidArgument(
            "fixture depth must be at least 1".into(),
        ));
    }
    let side = (kind.base() as u64).checked_pow(depth);
    if side.is_none_or(|s| s > i32::MAX as u64) {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} overflows the coordinate range for {kind:?}"
        )));
    }
    if kind.point_count(depth) > MAX_POINTS {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} would produce {} points for {kind:?}",
            kind.point_count(depth)
        )));
    }
    let generator = kind.generator();
    let dim = kind.dim();
    let mut cells = vec![[0i32; 3]];
    let mut scale = 1i32;
    for _ in 0..depth {
        cells = generator
            .iter()
            .flat_map(|g| {
                cells.iter().map(move |c| {
                    [
                        c[0] + g[0] * scale,
                        c[1] + g[1] * scale,
                        c[2] + g[2] * scale,
                    ]
                })
            })
            .collect();
        scale *= kind.base() as i32;
    }
    let points = cells
        .iter()
        .map(|c| LatticePoint::from_slice(&c[..dim]).unwrap())
        .collect();
    PointSet::new(dim, points)
}
