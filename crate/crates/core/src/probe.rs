//! Seeded random probes for the checkers and the sampler.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::interval::{Interval, IntervalUnion};
use crate::order::{ExtendedPoint, OrderedSpace, Point};

/// Uniform draw on `[0, 1)` with 53 random bits.
pub(crate) fn unit_draw<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A deterministic source of random points, levels and interval unions.
///
/// Points are drawn half from the supplied anchors (breakpoints, atoms) and
/// half from the whole space, so probes hit the places where `F` jumps.
pub struct Probe {
    rng: Xoshiro256PlusPlus,
}

impl Probe {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn unit(&mut self) -> f64 {
        unit_draw(&mut self.rng)
    }

    /// A level in `[0, 1]`, with the endpoints drawn now and then.
    pub fn level(&mut self) -> f64 {
        match self.index(64) {
            0 => 0.0,
            1 => 1.0,
            _ => self.unit(),
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.next_u64() & 1 == 1
    }

    pub fn point(&mut self, space: &OrderedSpace, anchors: &[Point]) -> Point {
        if !anchors.is_empty() && self.coin() {
            return anchors[self.index(anchors.len())];
        }
        let (u, v) = (self.unit(), self.unit());
        space.point_from_unit(u, v)
    }

    pub fn interval(&mut self, space: &OrderedSpace, anchors: &[Point]) -> Interval {
        let (p, q) = (self.point(space, anchors), self.point(space, anchors));
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        let (lo, lo_closed) = if self.index(10) == 0 {
            (ExtendedPoint::NegInf, false)
        } else {
            (a.into(), self.coin())
        };
        let (hi, hi_closed) = if self.index(10) == 0 {
            (ExtendedPoint::PosInf, false)
        } else {
            (b.into(), self.coin())
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// Union of one to three random intervals.
    pub fn union(&mut self, space: &OrderedSpace, anchors: &[Point]) -> IntervalUnion {
        let k = 1 + self.index(3);
        let ivs: Vec<Interval> = (0..k).map(|_| self.interval(space, anchors)).collect();
        IntervalUnion::from_intervals(space, &ivs).expect("probe endpoints are elements")
    }
}
