//! Probability measures made of point masses and uniform-density segments.

use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::order::{Cut, OrderedSpace, Point};

/// Tolerance on the total mass accepted at construction.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub at: Point,
    pub mass: f64,
}

/// Uniform mass spread over the real coordinates `[lo, hi]` of fiber `block`.
///
/// The endpoints are coordinates, not necessarily elements: a segment may
/// span the whole of an open fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySegment {
    pub block: i64,
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

impl DensitySegment {
    /// Segment in the single fiber of a real-interval space.
    pub fn real(lo: f64, hi: f64, mass: f64) -> Self {
        Self::in_fiber(0, lo, hi, mass)
    }

    pub fn in_fiber(block: i64, lo: f64, hi: f64, mass: f64) -> Self {
        Self {
            block,
            lo,
            hi,
            mass,
        }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn density(&self) -> f64 {
        self.mass / self.length()
    }

    /// Length of the part of the segment inside the cut range `[lo, hi)`.
    pub(crate) fn overlap(&self, lo: Cut, hi: Cut) -> f64 {
        let a = self.lo.max(coordinate_in_block(lo, self.block));
        let b = self.hi.min(coordinate_in_block(hi, self.block));
        (b - a).max(0.0)
    }
}

/// Position of a cut measured along the real coordinate of block `k`.
fn coordinate_in_block(c: Cut, k: i64) -> f64 {
    match c {
        Cut::Bottom => f64::NEG_INFINITY,
        Cut::Top => f64::INFINITY,
        Cut::Gap(j) => {
            if j <= k {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        }
        Cut::Before(p) | Cut::After(p) => {
            if p.outer() < k {
                f64::NEG_INFINITY
            } else if p.outer() > k {
                f64::INFINITY
            } else {
                p.inner()
            }
        }
    }
}

/// A validated probability measure over a space.
///
/// Atoms and segments are kept sorted along the order, so specs entered in
/// different list orders compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    space: OrderedSpace,
    atoms: Vec<Atom>,
    segments: Vec<DensitySegment>,
}

impl MeasureSpec {
    pub fn new(
        space: OrderedSpace,
        mut atoms: Vec<Atom>,
        mut segments: Vec<DensitySegment>,
    ) -> Result<Self> {
        if atoms.is_empty() && segments.is_empty() {
            return Err(Error::measure("measure", "no atoms and no segments"));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::measure(
                    format!("measure.atoms[{i}].mass"),
                    format!("mass must be positive, got {}", a.mass),
                ));
            }
            if !space.contains(&a.at) {
                return Err(Error::measure(
                    format!("measure.atoms[{i}].at"),
                    "atom outside the universe",
                ));
            }
        }
        for (i, s) in segments.iter().enumerate() {
            let field = format!("measure.segments[{i}]");
            let fiber = space.fiber(s.block).ok_or_else(|| {
                Error::measure(&field, "segments need a real-interval block")
            })?;
            if !(s.lo.is_finite() && s.hi.is_finite() && s.lo < s.hi) {
                return Err(Error::measure(&field, "segment needs finite lo < hi"));
            }
            if s.lo < fiber.lo || s.hi > fiber.hi {
                return Err(Error::measure(&field, "segment extends beyond its fiber"));
            }
            if !(s.mass.is_finite() && s.mass > 0.0) {
                return Err(Error::measure(
                    format!("{field}.mass"),
                    format!("mass must be positive, got {}", s.mass),
                ));
            }
        }

        atoms.sort_by_key(|a| a.at);
        if let Some(w) = atoms.windows(2).find(|w| w[0].at == w[1].at) {
            return Err(Error::measure(
                "measure.atoms",
                format!("duplicate atom at {}", space.format_point(&w[0].at)),
            ));
        }
        segments.sort_by(|x, y| x.block.cmp(&y.block).then(x.lo.total_cmp(&y.lo)));
        if let Some(w) = segments
            .windows(2)
            .find(|w| w[0].block == w[1].block && w[0].hi > w[1].lo)
        {
            return Err(Error::measure(
                "measure.segments",
                format!(
                    "overlapping segments [{},{}] and [{},{}]",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                ),
            ));
        }

        let total: f64 = atoms.iter().map(|a| a.mass).sum::<f64>()
            + segments.iter().map(|s| s.mass).sum::<f64>();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::measure(
                "measure.total_mass",
                format!("masses sum to {total}, expected 1"),
            ));
        }
        Ok(Self {
            space,
            atoms,
            segments,
        })
    }

    pub fn space(&self) -> &OrderedSpace {
        &self.space
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[DensitySegment] {
        &self.segments
    }

    /// Atoms as `(point, mass)` pairs sorted along the order.
    pub fn atom_set(&self) -> Vec<(Point, f64)> {
        self.atoms.iter().map(|a| (a.at, a.mass)).collect()
    }

    /// Mass of the singleton `{x}`.
    pub fn point_mass(&self, x: &Point) -> f64 {
        self.atoms
            .binary_search_by(|a| a.at.cmp(x))
            .map_or(0.0, |i| self.atoms[i].mass)
    }

    /// `μ(u)`: atom masses inside `u` plus each segment's mass in proportion
    /// to the length it shares with `u`.
    pub fn measure_of(&self, u: &IntervalUnion) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| u.contains(&a.at))
            .map(|a| a.mass)
            .sum();
        let density: f64 = self
            .segments
            .iter()
            .map(|s| {
                let covered: f64 = u.pieces().iter().map(|&(lo, hi)| s.overlap(lo, hi)).sum();
                s.mass * (covered / s.length())
            })
            .sum();
        atoms + density
    }

    /// Largest segment density, `0` for purely atomic measures.
    pub fn max_density(&self) -> f64 {
        self.segments
            .iter()
            .map(DensitySegment::density)
            .fold(0.0, f64::max)
    }
}
