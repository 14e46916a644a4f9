use crate::error::{Error, Result};

use super::pointset::PointSet;

/// Increasing ladder of integer box edges, all powers of one base (2 or 3).
///
/// With every rung an integer multiple of the previous one, boxes at the
/// coarser scale are unions of boxes at the finer scale, so counts can
/// only fall as the edge grows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladder {
    base: u32,
    epsilons: Vec<u32>,
}

impl Ladder {
    /// Dyadic ladder from explicit edges; every edge must be a power of two.
    pub fn dyadic(epsilons: Vec<u32>) -> Result<Self> {
        Self::with_base(2, epsilons)
    }

    /// Triadic ladder for the ternary fixtures.
    pub fn ternary(epsilons: Vec<u32>) -> Result<Self> {
        Self::with_base(3, epsilons)
    }

    /// `1, 2, 4, ...` up to and including the largest power of two `<= max_eps`.
    pub fn dyadic_up_to(max_eps: u32) -> Self {
        Self::powers(2, max_eps)
    }

    /// `1, 3, 9, ...` up to and including the largest power of three `<= max_eps`.
    pub fn ternary_up_to(max_eps: u32) -> Self {
        Self::powers(3, max_eps)
    }

    fn powers(base: u32, max_eps: u32) -> Self {
        let mut epsilons = vec![1u32];
        while let Some(next) = epsilons.last().unwrap().checked_mul(base) {
            if next > max_eps.max(1) {
                break;
            }
            epsilons.push(next);
        }
        Self { base, epsilons }
    }

    fn with_base(base: u32, epsilons: Vec<u32>) -> Result<Self> {
        if epsilons.is_empty() {
            return Err(Error::InvalidArgument("empty box-size ladder".into()));
        }
        let is_power = |mut e: u32| {
            if e == 0 {
                return false;
            }
            while e.is_multiple_of(base) {
                e /= base;
            }
            e == 1
        };
        if let Some(e) = epsilons.iter().find(|&&e| !is_power(e)) {
            let kind = if base == 2 { "dyadic" } else { "ternary" };
            return Err(Error::InvalidArgument(format!(
                "box size {e} is not {kind}: every edge must be a power of {base}"
            )));
        }
        if epsilons.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "box sizes must be strictly increasing".into(),
            ));
        }
        Ok(Self { base, epsilons })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn epsilons(&self) -> &[u32] {
        &self.epsilons
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleSample {
    pub epsilon: u32,
    pub count: usize,
}

/// Box counts `N(eps)` for increasing `eps`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScaleSeries {
    pub samples: Vec<ScaleSample>,
}

impl ScaleSeries {
    /// `epsilon,count` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,count\n");
        for s in &self.samples {
            out.push_str(&format!("{},{}\n", s.epsilon, s.count));
        }
        out
    }
}

/// Counts origin-anchored boxes `floor(coord / eps)` that hold at least one
/// point, for every rung of the ladder.
pub fn box_count(points: &PointSet, ladder: &Ladder) -> Result<ScaleSeries> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "box counting needs a nonempty point set".into(),
        ));
    }
    let dim = points.dim();
    let mut keys: Vec<[i32; 3]> = Vec::with_capacity(points.len());
    let samples = ladder
        .epsilons()
        .iter()
        .map(|&eps| {
            let e = eps as i32;
            keys.clear();
            keys.extend(points.points().iter().map(|p| {
                let mut k = [0i32; 3];
                for (axis, slot) in k.iter_mut().enumerate().take(dim) {
                    *slot = p.coord(axis).div_euclid(e);
                }
                k
            }));
            keys.sort_unstable();
            keys.dedup();
            ScaleSample {
                epsilon: eps,
                count: keys.len(),
            }
        })
        .collect();
    Ok(ScaleSeries { samples })
}
