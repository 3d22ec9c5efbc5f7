//! The distribution function `F(x) = μ(≤x)` and its left companion
//! `F⁻(x) = μ(<x)`.
//!
//! Both are read off one table of pieces sorted along the order: atoms, and
//! segments cut at any atom they contain. Cumulative masses are summed
//! sequentially, so at an atom `F(x) == F⁻(x) + μ({x})` holds exactly in
//! binary64, and the last cumulative is pinned to `1.0`.

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::measure::MeasureSpec;
use crate::order::{Cut, ExtendedPoint, OrderedSpace, Point};
use crate::probe::Probe;

/// Mass assigned to a point or to the open interior of a fiber segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Piece {
    Atom { at: Point, mass: f64 },
    /// Uniform mass on the coordinates `]lo, hi[` of fiber `block`.
    Spread { block: i64, lo: f64, hi: f64, mass: f64 },
}

impl Piece {
    fn start(&self) -> Point {
        match *self {
            Piece::Atom { at, .. } => at,
            Piece::Spread { block, lo, .. } => Point::raw(block, lo),
        }
    }

    pub(crate) fn mass(&self) -> f64 {
        match *self {
            Piece::Atom { mass, .. } | Piece::Spread { mass, .. } => mass,
        }
    }

    /// The whole piece lies in `(≤x)`, or in `(<x)` when `strict`.
    fn below(&self, x: &Point, strict: bool) -> bool {
        match *self {
            Piece::Atom { at, .. } => {
                if strict {
                    at < *x
                } else {
                    at <= *x
                }
            }
            Piece::Spread { block, hi, .. } => Point::raw(block, hi) <= *x,
        }
    }

    /// Mass of the piece strictly below `x` when `x` falls inside it.
    fn partial(&self, x: &Point) -> f64 {
        match *self {
            Piece::Spread {
                block,
                lo,
                hi,
                mass,
            } if x.outer() == block && lo < x.inner() && x.inner() < hi => {
                spread_level(0.0, lo, hi, mass, x.inner())
            }
            _ => 0.0,
        }
    }
}

/// Cumulative level inside a spread piece; monotone in `t` and equal to
/// `base + mass` (rounded) at `t = hi`.
pub(crate) fn spread_level(base: f64, lo: f64, hi: f64, mass: f64, t: f64) -> f64 {
    base + mass * ((t - lo) / (hi - lo))
}

/// The cdf of a validated measure.
#[derive(Debug, Clone)]
pub struct Cdf {
    spec: MeasureSpec,
    pieces: Vec<Piece>,
    /// `cum[j]` is the mass of pieces `0..j`; `cum[n] == 1.0` once pinned.
    cum: Vec<f64>,
}

impl Cdf {
    pub fn new(spec: MeasureSpec) -> Self {
        let mut pieces: Vec<Piece> = spec
            .atoms()
            .iter()
            .map(|a| Piece::Atom {
                at: a.at,
                mass: a.mass,
            })
            .collect();
        for s in spec.segments() {
            let mut knots = vec![s.lo];
            knots.extend(
                spec.atoms()
                    .iter()
                    .filter(|a| a.at.outer() == s.block && s.lo < a.at.inner() && a.at.inner() < s.hi)
                    .map(|a| a.at.inner()),
            );
            knots.push(s.hi);
            for w in knots.windows(2) {
                pieces.push(Piece::Spread {
                    block: s.block,
                    lo: w[0],
                    hi: w[1],
                    mass: s.mass * ((w[1] - w[0]) / s.length()),
                });
            }
        }
        // an atom sorts before a spread starting at the same coordinate
        pieces.sort_by(|x, y| {
            x.start()
                .cmp(&y.start())
                .then_with(|| matches!(x, Piece::Spread { .. }).cmp(&matches!(y, Piece::Spread { .. })))
        });

        let mut cum = Vec::with_capacity(pieces.len() + 1);
        cum.push(0.0);
        for p in &pieces {
            cum.push(cum.last().unwrap() + p.mass());
        }
        pin_total(&mut pieces, &mut cum);
        Self { spec, pieces, cum }
    }

    pub fn space(&self) -> &OrderedSpace {
        self.spec.space()
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub(crate) fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub(crate) fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    /// `F` at an ambient coordinate, which need not be an element.
    pub(crate) fn level(&self, x: &Point, strict: bool) -> f64 {
        let j = self.pieces.partition_point(|p| p.below(x, strict));
        self.cum[j] + self.pieces.get(j).map_or(0.0, |p| p.partial(x))
    }

    /// Mass below a cut: the measure of the lower side.
    pub(crate) fn cut_level(&self, c: Cut) -> f64 {
        match c {
            Cut::Bottom => 0.0,
            Cut::Top => self.total(),
            Cut::Before(p) => self.level(&p, true),
            Cut::After(p) => self.level(&p, false),
            Cut::Gap(k) => self.level(&Point::raw(k, f64::NEG_INFINITY), true),
        }
    }

    fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn eval_f(&self, x: &Point) -> Result<f64> {
        self.space().check(x)?;
        Ok(self.level(x, false))
    }

    pub fn eval_f_minus(&self, x: &Point) -> Result<f64> {
        self.space().check(x)?;
        Ok(self.level(x, true))
    }

    /// `μ({x})` as stored in the table, so that `F(x) - F⁻(x)` equals it exactly.
    pub fn atom_mass(&self, x: &Point) -> f64 {
        match self.pieces.binary_search_by(|p| {
            p.start()
                .cmp(x)
                .then_with(|| matches!(p, Piece::Spread { .. }).cmp(&false))
        }) {
            Ok(i) => self.pieces[i].mass(),
            Err(_) => 0.0,
        }
    }

    /// Measure of an interval from the four endpoint formulas, with
    /// `F(-inf) = 0` and `F⁻(+inf) = 1`. Empty intervals measure `0`.
    pub fn interval_measure(&self, iv: &Interval) -> Result<f64> {
        let lo = match iv.lo {
            ExtendedPoint::NegInf => 0.0,
            ExtendedPoint::PosInf => return Ok(0.0),
            ExtendedPoint::Finite(a) if iv.lo_closed => self.eval_f_minus(&a)?,
            ExtendedPoint::Finite(a) => self.eval_f(&a)?,
        };
        let hi = match iv.hi {
            ExtendedPoint::NegInf => return Ok(0.0),
            ExtendedPoint::PosInf => self.total(),
            ExtendedPoint::Finite(b) if iv.hi_closed => self.eval_f(&b)?,
            ExtendedPoint::Finite(b) => self.eval_f_minus(&b)?,
        };
        Ok((hi - lo).max(0.0))
    }

    /// `μ(u)` through the cdf, one difference per component.
    pub fn union_measure(&self, u: &IntervalUnion) -> f64 {
        u.pieces()
            .iter()
            .map(|&(lo, hi)| (self.cut_level(hi) - self.cut_level(lo)).max(0.0))
            .sum()
    }

    /// `sup F(<x)`, scanned over the breakpoints below `x` and the elements
    /// approaching it from the left. Errors at the minimum.
    pub fn sup_f_below(&self, x: &Point) -> Result<f64> {
        self.space().check(x)?;
        let approach = self.space().left_approach(x);
        if approach.is_empty() {
            return Err(Error::Domain(format!(
                "{} is the minimum; (<x) is empty",
                self.space().format_point(x)
            )));
        }
        Ok(approach
            .iter()
            .chain(self.breakpoints().iter().filter(|b| *b < x))
            .map(|y| self.level(y, false))
            .fold(0.0, f64::max))
    }

    /// `inf F⁻(>x)`, scanned like [`Self::sup_f_below`]. Errors at the maximum.
    pub fn inf_f_minus_above(&self, x: &Point) -> Result<f64> {
        self.space().check(x)?;
        let approach = self.space().right_approach(x);
        if approach.is_empty() {
            return Err(Error::Domain(format!(
                "{} is the maximum; (>x) is empty",
                self.space().format_point(x)
            )));
        }
        Ok(approach
            .iter()
            .chain(self.breakpoints().iter().filter(|b| *b > x))
            .map(|y| self.level(y, true))
            .fold(1.0, f64::min))
    }

    /// Jump points of `F` with their jump sizes: exactly the atoms.
    pub fn discontinuities(&self) -> Vec<(Point, f64)> {
        self.pieces
            .iter()
            .filter_map(|p| match *p {
                Piece::Atom { at, mass } => Some((at, mass)),
                Piece::Spread { .. } => None,
            })
            .collect()
    }

    /// Atoms and those segment endpoints that are elements, sorted.
    pub fn breakpoints(&self) -> Vec<Point> {
        let sp = self.space();
        let mut out: Vec<Point> = Vec::new();
        for p in &self.pieces {
            match *p {
                Piece::Atom { at, .. } => out.push(at),
                Piece::Spread { block, lo, hi, .. } => {
                    out.extend(
                        [Point::raw(block, lo), Point::raw(block, hi)]
                            .into_iter()
                            .filter(|q| sp.contains(q)),
                    );
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Compares `F` on every atom of either measure, then on the first
    /// `budget` dense points.
    pub fn cdfs_equal_on_dense(&self, other: &Cdf, budget: usize) -> Result<DenseComparison> {
        same_space(self, other)?;
        let mut probes: Vec<Point> = self.discontinuities().iter().map(|d| d.0).collect();
        probes.extend(other.discontinuities().iter().map(|d| d.0));
        probes.sort();
        probes.dedup();
        probes.extend(self.space().dense_points().take(budget));
        for x in &probes {
            let (l, r) = (self.level(x, false), other.level(x, false));
            if (l - r).abs() > 1e-12 {
                return Ok(DenseComparison::Distinguished {
                    at: *x,
                    left: l,
                    right: r,
                });
            }
        }
        Ok(DenseComparison::Indistinguishable {
            probes: probes.len(),
        })
    }

    /// Decides whether two measures coincide. `F` and `F⁻` are compared at
    /// the breakpoints of both; on agreement the measures themselves are
    /// compared on seeded random interval unions.
    pub fn measure_uniqueness_check(&self, other: &Cdf) -> Result<Uniqueness> {
        same_space(self, other)?;
        let sp = self.space();
        let mut points = self.breakpoints();
        points.extend(other.breakpoints());
        points.extend(sp.min());
        points.extend(sp.max());
        points.sort();
        points.dedup();

        for p in &points {
            if (self.level(p, false) - other.level(p, false)).abs() > UNIQUENESS_TOLERANCE
                || (self.level(p, true) - other.level(p, true)).abs() > UNIQUENESS_TOLERANCE
            {
                for iv in [Interval::singleton(*p), Interval::below(*p), Interval::at_most(*p)] {
                    let u = IntervalUnion::from_interval(sp, iv)?;
                    if let Some(w) = self.differs_on(other, &u) {
                        return Ok(w);
                    }
                }
            }
        }

        let mut probe = Probe::new(UNIQUENESS_SEED);
        for _ in 0..UNIQUENESS_UNIONS {
            let u = probe.union(sp, &points);
            if let Some(w) = self.differs_on(other, &u) {
                return Ok(w);
            }
        }
        Ok(Uniqueness::Equal)
    }

    fn differs_on(&self, other: &Cdf, u: &IntervalUnion) -> Option<Uniqueness> {
        let (l, r) = (self.spec.measure_of(u), other.spec.measure_of(u));
        ((l - r).abs() > UNIQUENESS_TOLERANCE).then(|| Uniqueness::Distinct {
            witness: u.clone(),
            left: l,
            right: r,
        })
    }
}

const UNIQUENESS_TOLERANCE: f64 = 1e-9;
const UNIQUENESS_UNIONS: usize = 10_000;
const UNIQUENESS_SEED: u64 = 0x5eed_0001;

fn same_space(a: &Cdf, b: &Cdf) -> Result<()> {
    if a.space() != b.space() {
        return Err(Error::Domain("the two measures live on different spaces".into()));
    }
    Ok(())
}

/// Adjusts the last piece so that the final cumulative is exactly `1.0`.
///
/// Validated totals are within `1e-12` of one, so the adjustment is a few
/// ulps of that piece's mass.
fn pin_total(pieces: &mut [Piece], cum: &mut [f64]) {
    let n = pieces.len();
    if n == 0 || cum[n] == 1.0 {
        return;
    }
    let base = cum[n - 1];
    let mut m = 1.0 - base;
    for _ in 0..64 {
        let s = base + m;
        if s == 1.0 {
            break;
        }
        m = if s < 1.0 { m.next_up() } else { m.next_down() };
    }
    if m > 0.0 && base + m == 1.0 {
        match &mut pieces[n - 1] {
            Piece::Atom { mass, .. } | Piece::Spread { mass, .. } => *mass = m,
        }
        cum[n] = 1.0;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DenseComparison {
    Indistinguishable { probes: usize },
    Distinguished { at: Point, left: f64, right: f64 },
}

impl DenseComparison {
    pub fn is_indistinguishable(&self) -> bool {
        matches!(self, DenseComparison::Indistinguishable { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Uniqueness {
    Equal,
    /// `witness` is a set the two measures weigh differently.
    Distinct {
        witness: IntervalUnion,
        left: f64,
        right: f64,
    },
}

impl Uniqueness {
    pub fn is_equal(&self) -> bool {
        matches!(self, Uniqueness::Equal)
    }
}
