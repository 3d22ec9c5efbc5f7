//! Linearly ordered spaces.
//!
//! Every supported space is laid out as a sequence of *blocks* indexed by
//! consecutive integers. A block is either a single point or a real interval
//! (a *fiber*), and points are ordered first by block index and then by their
//! real coordinate inside the block:
//!
//! * `Finite` labels are singleton blocks `0..n`;
//! * `IntRange` values are singleton blocks indexed by the integer itself;
//! * `RealInterval` is one fiber with index `0`;
//! * `Lex` is a finite outer order whose blocks are real fibers.
//!
//! Real coordinates are compared exactly as binary64 values.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A real interval `|lo, hi|` used as a fiber of the order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRange {
    pub lo: f64,
    pub hi: f64,
    pub include_lo: bool,
    pub include_hi: bool,
}

impl RealRange {
    pub fn new(lo: f64, hi: f64, include_lo: bool, include_hi: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidSpace("NaN interval endpoint".into()));
        }
        if lo >= hi {
            return Err(Error::InvalidSpace(format!(
                "real interval needs lo < hi, got {lo} and {hi}"
            )));
        }
        if (lo.is_infinite() && include_lo) || (hi.is_infinite() && include_hi) {
            return Err(Error::InvalidSpace(
                "infinite endpoints cannot be included".into(),
            ));
        }
        Ok(Self {
            lo,
            hi,
            include_lo,
            include_hi,
        })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn contains(&self, t: f64) -> bool {
        (self.lo < t || (self.include_lo && t == self.lo))
            && (t < self.hi || (self.include_hi && t == self.hi))
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Maps `u` in `]0,1[` monotonically onto the open interval `]lo,hi[`.
    fn at_unit(&self, u: f64) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => self.lo + (self.hi - self.lo) * u,
            (true, false) => self.lo + u / (1.0 - u),
            (false, true) => self.hi - (1.0 - u) / u,
            (false, false) => {
                let t = 2.0 * u - 1.0;
                t / (1.0 - t.abs())
            }
        }
    }
}

/// The element universe and its order.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    Finite { labels: Vec<String> },
    IntRange { lo: i64, hi: i64 },
    RealInterval(RealRange),
    Lex {
        labels: Vec<String>,
        fibers: Vec<RealRange>,
    },
}

/// One block of the layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Block {
    Singleton,
    Fiber(RealRange),
}

/// An element of an [`OrderedSpace`].
///
/// Points carry their block index and the real coordinate inside the block
/// (always `0.0` for singleton blocks). They are only meaningful relative to
/// the space that produced them.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    outer: i64,
    inner: f64,
}

impl Point {
    pub(crate) fn raw(outer: i64, inner: f64) -> Self {
        // -0.0 and 0.0 are the same element
        let inner = if inner == 0.0 { 0.0 } else { inner };
        Self { outer, inner }
    }

    /// Block index: label position, integer value, or `0` for a real interval.
    pub fn outer(&self) -> i64 {
        self.outer
    }

    /// Real coordinate inside the block (`0.0` for discrete blocks).
    pub fn inner(&self) -> f64 {
        self.inner
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Point {}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.outer
            .cmp(&other.outer)
            .then_with(|| self.inner.total_cmp(&other.inner))
    }
}

/// A point or one of the two formal endpoints `-inf < X < +inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtendedPoint {
    NegInf,
    Finite(Point),
    PosInf,
}

impl From<Point> for ExtendedPoint {
    fn from(p: Point) -> Self {
        ExtendedPoint::Finite(p)
    }
}

/// Neighbor witness for an isolated side of a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Neighbor {
    /// The point is the minimum (left side) or maximum (right side) of the space.
    Extreme,
    /// The immediate predecessor or successor; the open gap to it is empty.
    Point(Point),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolationReport {
    pub point: Point,
    pub left_isolated: bool,
    pub right_isolated: bool,
    pub left_witness: Option<Neighbor>,
    pub right_witness: Option<Neighbor>,
}

impl IsolationReport {
    pub fn is_isolated(&self) -> bool {
        self.left_isolated && self.right_isolated
    }
}

/// Boundary of an up-set or down-set relative to the layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Edge {
    /// The set has this extreme element.
    At(Point),
    /// The set is nonempty but has no extreme; it starts (or ends) inside block `k`.
    Open(i64),
    Empty,
}

/// A Dedekind cut of the space, used as an interval endpoint.
///
/// `Before(p)` separates `(<p)` from `(>=p)`, `After(p)` separates `(<=p)`
/// from `(>p)`. `Gap(k)` is a cut with no point on either side, lying just
/// below block `k`. Cuts built from arbitrary coordinates are reduced by
/// [`OrderedSpace::canonical`] to a unique representative.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Cut {
    Bottom,
    Before(Point),
    After(Point),
    Gap(i64),
    Top,
}

impl Cut {
    fn key(&self) -> (u8, i64, f64, i8) {
        match *self {
            Cut::Bottom => (0, 0, 0.0, 0),
            Cut::Gap(k) => (1, k, f64::NEG_INFINITY, -1),
            Cut::Before(p) => (1, p.outer, p.inner, 0),
            Cut::After(p) => (1, p.outer, p.inner, 1),
            Cut::Top => (2, 0, 0.0, 0),
        }
    }
}

impl PartialEq for Cut {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cut {}

impl PartialOrd for Cut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cut {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a0, a1, a2, a3) = self.key();
        let (b0, b1, b2, b3) = other.key();
        a0.cmp(&b0)
            .then(a1.cmp(&b1))
            .then_with(|| a2.total_cmp(&b2))
            .then(a3.cmp(&b3))
    }
}

/// A separable linearly ordered space.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSpace {
    kind: SpaceKind,
}

impl OrderedSpace {
    pub fn new(kind: SpaceKind) -> Result<Self> {
        match &kind {
            SpaceKind::Finite { labels } => check_labels(labels)?,
            SpaceKind::IntRange { lo, hi } => {
                if lo > hi {
                    return Err(Error::InvalidSpace(format!("empty integer range {lo}..={hi}")));
                }
            }
            SpaceKind::RealInterval(r) => {
                RealRange::new(r.lo, r.hi, r.include_lo, r.include_hi)?;
            }
            SpaceKind::Lex { labels, fibers } => {
                check_labels(labels)?;
                if labels.len() != fibers.len() {
                    return Err(Error::InvalidSpace(
                        "lex space needs exactly one fiber per outer label".into(),
                    ));
                }
                for f in fibers {
                    RealRange::new(f.lo, f.hi, f.include_lo, f.include_hi)?;
                }
            }
        }
        Ok(Self { kind })
    }

    pub fn finite<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Self::new(SpaceKind::Finite {
            labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn int_range(lo: i64, hi: i64) -> Result<Self> {
        Self::new(SpaceKind::IntRange { lo, hi })
    }

    pub fn real_interval(lo: f64, hi: f64, include_lo: bool, include_hi: bool) -> Result<Self> {
        Self::new(SpaceKind::RealInterval(RealRange::new(
            lo, hi, include_lo, include_hi,
        )?))
    }

    pub fn lex<S: AsRef<str>>(labels: &[S], fibers: Vec<RealRange>) -> Result<Self> {
        Self::new(SpaceKind::Lex {
            labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
            fibers,
        })
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    // ---- layout -------------------------------------------------------

    pub(crate) fn first_outer(&self) -> i64 {
        match &self.kind {
            SpaceKind::IntRange { lo, .. } => *lo,
            _ => 0,
        }
    }

    pub(crate) fn last_outer(&self) -> i64 {
        match &self.kind {
            SpaceKind::Finite { labels } => labels.len() as i64 - 1,
            SpaceKind::IntRange { hi, .. } => *hi,
            SpaceKind::RealInterval(_) => 0,
            SpaceKind::Lex { labels, .. } => labels.len() as i64 - 1,
        }
    }

    pub(crate) fn block(&self, k: i64) -> Option<Block> {
        if k < self.first_outer() || k > self.last_outer() {
            return None;
        }
        Some(match &self.kind {
            SpaceKind::Finite { .. } | SpaceKind::IntRange { .. } => Block::Singleton,
            SpaceKind::RealInterval(r) => Block::Fiber(*r),
            SpaceKind::Lex { fibers, .. } => Block::Fiber(fibers[k as usize]),
        })
    }

    /// Fiber of block `k`, if that block is a real interval.
    pub(crate) fn fiber(&self, k: i64) -> Option<RealRange> {
        match self.block(k)? {
            Block::Fiber(r) => Some(r),
            Block::Singleton => None,
        }
    }

    /// Number of points for discrete spaces, `None` for spaces with real fibers.
    pub fn cardinality(&self) -> Option<u64> {
        match &self.kind {
            SpaceKind::Finite { labels } => Some(labels.len() as u64),
            SpaceKind::IntRange { lo, hi } => Some((hi - lo) as u64 + 1),
            _ => None,
        }
    }

    pub fn has_fibers(&self) -> bool {
        matches!(
            self.kind,
            SpaceKind::RealInterval(_) | SpaceKind::Lex { .. }
        )
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.inner.is_nan() {
            return false;
        }
        match self.block(p.outer) {
            None => false,
            Some(Block::Singleton) => p.inner == 0.0,
            Some(Block::Fiber(r)) => r.contains(p.inner),
        }
    }

    pub(crate) fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "point ({}, {}) is not an element of the space",
                p.outer, p.inner
            )))
        }
    }

    /// Total-order comparison of two elements.
    pub fn compare(&self, x: &Point, y: &Point) -> Result<Ordering> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.cmp(y))
    }

    // ---- extremes of up-sets and down-sets ----------------------------

    pub(crate) fn block_min(&self, k: i64) -> Edge {
        match self.block(k) {
            None => Edge::Empty,
            Some(Block::Singleton) => Edge::At(Point::raw(k, 0.0)),
            Some(Block::Fiber(r)) if r.include_lo => Edge::At(Point::raw(k, r.lo)),
            Some(Block::Fiber(_)) => Edge::Open(k),
        }
    }

    pub(crate) fn block_max(&self, k: i64) -> Edge {
        match self.block(k) {
            None => Edge::Empty,
            Some(Block::Singleton) => Edge::At(Point::raw(k, 0.0)),
            Some(Block::Fiber(r)) if r.include_hi => Edge::At(Point::raw(k, r.hi)),
            Some(Block::Fiber(_)) => Edge::Open(k),
        }
    }

    /// Minimum of `{y : y >= q}` (or `y > q` when `strict`), for any ambient coordinate `q`.
    pub(crate) fn upset_min(&self, q: Point, strict: bool) -> Edge {
        let (first, last) = (self.first_outer(), self.last_outer());
        if q.outer < first {
            return self.block_min(first);
        }
        if q.outer > last {
            return Edge::Empty;
        }
        let k = q.outer;
        let t = q.inner;
        match self.block(k).expect("block in range") {
            Block::Singleton => {
                if t < 0.0 || (t == 0.0 && !strict) {
                    Edge::At(Point::raw(k, 0.0))
                } else {
                    self.block_min(k + 1)
                }
            }
            Block::Fiber(r) => {
                if t < r.lo {
                    self.block_min(k)
                } else if t == r.lo {
                    if r.include_lo && !strict {
                        Edge::At(Point::raw(k, t))
                    } else {
                        Edge::Open(k)
                    }
                } else if t < r.hi {
                    if strict {
                        Edge::Open(k)
                    } else {
                        Edge::At(Point::raw(k, t))
                    }
                } else if t == r.hi && r.include_hi && !strict {
                    Edge::At(Point::raw(k, t))
                } else {
                    self.block_min(k + 1)
                }
            }
        }
    }

    /// Maximum of `{y : y <= q}` (or `y < q` when `strict`).
    pub(crate) fn downset_max(&self, q: Point, strict: bool) -> Edge {
        let (first, last) = (self.first_outer(), self.last_outer());
        if q.outer > last {
            return self.block_max(last);
        }
        if q.outer < first {
            return Edge::Empty;
        }
        let k = q.outer;
        let t = q.inner;
        match self.block(k).expect("block in range") {
            Block::Singleton => {
                if t > 0.0 || (t == 0.0 && !strict) {
                    Edge::At(Point::raw(k, 0.0))
                } else {
                    self.block_max(k - 1)
                }
            }
            Block::Fiber(r) => {
                if t > r.hi {
                    self.block_max(k)
                } else if t == r.hi {
                    if r.include_hi && !strict {
                        Edge::At(Point::raw(k, t))
                    } else {
                        Edge::Open(k)
                    }
                } else if t > r.lo {
                    if strict {
                        Edge::Open(k)
                    } else {
                        Edge::At(Point::raw(k, t))
                    }
                } else if t == r.lo && r.include_lo && !strict {
                    Edge::At(Point::raw(k, t))
                } else {
                    self.block_max(k - 1)
                }
            }
        }
    }

    /// Reduces a cut to its unique representative: `Before(min U)` when the
    /// upper side has a minimum, else `After(max L)`, else `Top`/`Bottom`/`Gap`.
    pub(crate) fn canonical(&self, c: Cut) -> Cut {
        let (up, down) = match c {
            Cut::Bottom => (self.block_min(self.first_outer()), Edge::Empty),
            Cut::Top => (Edge::Empty, self.block_max(self.last_outer())),
            Cut::Before(q) => (self.upset_min(q, false), self.downset_max(q, true)),
            Cut::After(q) => (self.upset_min(q, true), self.downset_max(q, false)),
            Cut::Gap(k) => (self.block_min(k), self.block_max(k - 1)),
        };
        match (up, down) {
            (Edge::At(u), _) => Cut::Before(u),
            (_, Edge::At(l)) => Cut::After(l),
            (Edge::Empty, _) => Cut::Top,
            (_, Edge::Empty) => Cut::Bottom,
            (Edge::Open(k), Edge::Open(_)) => Cut::Gap(k),
        }
    }

    pub fn min(&self) -> Option<Point> {
        match self.block_min(self.first_outer()) {
            Edge::At(p) => Some(p),
            _ => None,
        }
    }

    pub fn max(&self) -> Option<Point> {
        match self.block_max(self.last_outer()) {
            Edge::At(p) => Some(p),
            _ => None,
        }
    }

    /// Immediate successor: the `z > x` with `]x,z[` empty, if any.
    pub fn successor(&self, x: &Point) -> Option<Point> {
        match self.upset_min(*x, true) {
            Edge::At(p) => Some(p),
            _ => None,
        }
    }

    pub fn predecessor(&self, x: &Point) -> Option<Point> {
        match self.downset_max(*x, true) {
            Edge::At(p) => Some(p),
            _ => None,
        }
    }

    /// Elements below `x` that approach it, ascending. A predecessor alone
    /// when one exists, otherwise a geometric ladder ending one ulp short of
    /// the cut. Empty when `x` is the minimum.
    pub(crate) fn left_approach(&self, x: &Point) -> Vec<Point> {
        match self.downset_max(*x, true) {
            Edge::At(p) => vec![p],
            Edge::Empty => Vec::new(),
            Edge::Open(k) => {
                let r = self.fiber(k).expect("open edges lie in fibers");
                let end = if k == x.outer { x.inner } else { r.hi };
                ladder(r, end, -1.0).into_iter().map(|t| Point::raw(k, t)).collect()
            }
        }
    }

    /// Mirror of [`Self::left_approach`]: elements above `x`, descending.
    pub(crate) fn right_approach(&self, x: &Point) -> Vec<Point> {
        match self.upset_min(*x, true) {
            Edge::At(p) => vec![p],
            Edge::Empty => Vec::new(),
            Edge::Open(k) => {
                let r = self.fiber(k).expect("open edges lie in fibers");
                let end = if k == x.outer { x.inner } else { r.lo };
                ladder(r, end, 1.0).into_iter().map(|t| Point::raw(k, t)).collect()
            }
        }
    }

    /// The maximum, or a ladder climbing the open top of the last block.
    pub(crate) fn top_approach(&self) -> Vec<Point> {
        let k = self.last_outer();
        match self.block_max(k) {
            Edge::At(p) => vec![p],
            _ => {
                let r = self.fiber(k).expect("open edges lie in fibers");
                ladder(r, r.hi, -1.0).into_iter().map(|t| Point::raw(k, t)).collect()
            }
        }
    }

    /// The minimum, or a ladder descending the open bottom of the first block.
    pub(crate) fn bottom_approach(&self) -> Vec<Point> {
        let k = self.first_outer();
        match self.block_min(k) {
            Edge::At(p) => vec![p],
            _ => {
                let r = self.fiber(k).expect("open edges lie in fibers");
                ladder(r, r.lo, 1.0).into_iter().map(|t| Point::raw(k, t)).collect()
            }
        }
    }

    /// Every nonempty subset has an infimum and a supremum: both extremes
    /// exist and no two adjacent blocks meet with open ends.
    pub fn is_complete(&self) -> bool {
        if self.min().is_none() || self.max().is_none() {
            return false;
        }
        let (first, last) = (self.first_outer(), self.last_outer());
        if !self.has_fibers() {
            return true;
        }
        (first..last).all(|k| {
            !(matches!(self.block_max(k), Edge::Open(_))
                && matches!(self.block_min(k + 1), Edge::Open(_)))
        })
    }

    pub fn classify_isolation(&self, x: &Point) -> Result<IsolationReport> {
        self.check(x)?;
        let left_witness = match self.downset_max(*x, true) {
            Edge::Empty => Some(Neighbor::Extreme),
            Edge::At(p) => Some(Neighbor::Point(p)),
            Edge::Open(_) => None,
        };
        let right_witness = match self.upset_min(*x, true) {
            Edge::Empty => Some(Neighbor::Extreme),
            Edge::At(p) => Some(Neighbor::Point(p)),
            Edge::Open(_) => None,
        };
        Ok(IsolationReport {
            point: *x,
            left_isolated: left_witness.is_some(),
            right_isolated: right_witness.is_some(),
            left_witness,
            right_witness,
        })
    }

    /// Infimum of a finite point set; `+inf` for the empty set.
    pub fn infimum_of_points(&self, points: &[Point]) -> Result<ExtendedPoint> {
        for p in points {
            self.check(p)?;
        }
        Ok(points
            .iter()
            .min()
            .map_or(ExtendedPoint::PosInf, |p| ExtendedPoint::Finite(*p)))
    }

    /// Supremum of a finite point set; `-inf` for the empty set.
    pub fn supremum_of_points(&self, points: &[Point]) -> Result<ExtendedPoint> {
        for p in points {
            self.check(p)?;
        }
        Ok(points
            .iter()
            .max()
            .map_or(ExtendedPoint::NegInf, |p| ExtendedPoint::Finite(*p)))
    }

    // ---- element syntax -------------------------------------------------

    pub fn label(&self, name: &str) -> Result<Point> {
        match &self.kind {
            SpaceKind::Finite { labels } => labels
                .iter()
                .position(|l| l == name)
                .map(|i| Point::raw(i as i64, 0.0))
                .ok_or_else(|| Error::Domain(format!("unknown label `{name}`"))),
            _ => Err(Error::Domain("labels only exist in finite spaces".into())),
        }
    }

    pub fn int(&self, v: i64) -> Result<Point> {
        let p = Point::raw(v, 0.0);
        match self.kind {
            SpaceKind::IntRange { .. } => self.check(&p).map(|_| p),
            _ => Err(Error::Domain("integer points only exist in integer ranges".into())),
        }
    }

    pub fn real(&self, t: f64) -> Result<Point> {
        let p = Point::raw(0, t);
        match self.kind {
            SpaceKind::RealInterval(_) => self.check(&p).map(|_| p),
            _ => Err(Error::Domain("real points only exist in real intervals".into())),
        }
    }

    /// The element at coordinate `t` of fiber `block`, if there is one.
    pub fn at(&self, block: i64, t: f64) -> Option<Point> {
        let p = Point::raw(block, t);
        (self.has_fibers() && self.contains(&p)).then_some(p)
    }

    pub fn pair(&self, outer: &str, t: f64) -> Result<Point> {
        match &self.kind {
            SpaceKind::Lex { labels, .. } => {
                let k = labels
                    .iter()
                    .position(|l| l == outer)
                    .ok_or_else(|| Error::Domain(format!("unknown outer label `{outer}`")))?;
                let p = Point::raw(k as i64, t);
                self.check(&p).map(|_| p)
            }
            _ => Err(Error::Domain("pairs only exist in lex spaces".into())),
        }
    }

    /// Parses the textual element syntax: a label, an integer, a real
    /// number, or `(label,real)` for lex spaces.
    pub fn parse_point(&self, text: &str) -> Result<Point> {
        let s = text.trim();
        match &self.kind {
            SpaceKind::Finite { .. } => self.label(s),
            SpaceKind::IntRange { .. } => {
                let v: i64 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("`{s}` is not an integer")))?;
                self.int(v)
            }
            SpaceKind::RealInterval(_) => self.real(parse_real(s)?),
            SpaceKind::Lex { .. } => {
                let body = s
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("`{s}` is not a pair `(label,x)`")))?;
                let (outer, inner) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("`{s}` is not a pair `(label,x)`")))?;
                self.pair(outer.trim(), parse_real(inner.trim())?)
            }
        }
    }

    pub fn format_point(&self, p: &Point) -> String {
        match &self.kind {
            SpaceKind::Finite { labels } => labels
                .get(p.outer as usize)
                .cloned()
                .unwrap_or_else(|| format!("#{}", p.outer)),
            SpaceKind::IntRange { .. } => p.outer.to_string(),
            SpaceKind::RealInterval(_) => format_real(p.inner),
            SpaceKind::Lex { labels, .. } => {
                let l = labels
                    .get(p.outer as usize)
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", p.outer));
                format!("({},{})", l, format_real(p.inner))
            }
        }
    }

    pub fn format_extended(&self, e: &ExtendedPoint) -> String {
        match e {
            ExtendedPoint::NegInf => "-inf".into(),
            ExtendedPoint::PosInf => "inf".into(),
            ExtendedPoint::Finite(p) => self.format_point(p),
        }
    }

    // ---- separability witness ------------------------------------------

    /// Deterministic enumeration of a countable dense subset.
    ///
    /// Discrete blocks are listed one per round. Real fibers contribute their
    /// included endpoints in round 0 and the dyadic points
    /// `(2i-1)/2^d` (mapped monotonically onto the fiber) in round `d`.
    /// Depth is capped at 52, beyond which binary64 has no new dyadics.
    pub fn dense_points(&self) -> DensePoints<'_> {
        DensePoints {
            space: self,
            round: 0,
            block: self.first_outer(),
            index: 0,
            done: false,
        }
    }

    /// Maps two unit coordinates to an element: `u` picks the block and `v`
    /// the position inside a fiber. Used for random probing.
    pub fn point_from_unit(&self, u: f64, v: f64) -> Point {
        let (first, last) = (self.first_outer(), self.last_outer());
        let span = (last - first) as f64 + 1.0;
        let k = (first + (u * span).floor() as i64).clamp(first, last);
        match self.block(k).expect("clamped block") {
            Block::Singleton => Point::raw(k, 0.0),
            Block::Fiber(r) => {
                let v = v.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
                let mut t = r.at_unit(v);
                if !r.contains(t) {
                    t = r.at_unit(0.5);
                }
                Point::raw(k, t)
            }
        }
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidSpace("finite order needs at least one label".into()));
    }
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || l.chars().any(|c| c.is_whitespace() || "()[],".contains(c)) {
            return Err(Error::InvalidSpace(format!("invalid label `{l}`")));
        }
        if labels[..i].contains(l) {
            return Err(Error::InvalidSpace(format!("duplicate label `{l}`")));
        }
    }
    Ok(())
}

/// Coordinates of `r` converging to `end` from the side given by `dir`
/// (`-1` from below, `+1` from above), ordered towards `end`.
fn ladder(r: RealRange, end: f64, dir: f64) -> Vec<f64> {
    let mut ts: Vec<f64> = if end.is_infinite() {
        let mut v: Vec<f64> = (0..=308).map(|i| end.signum() * 10f64.powi(i)).collect();
        v.push(end.signum() * f64::MAX);
        v
    } else {
        let far = if dir < 0.0 { r.lo } else { r.hi };
        let start = if far.is_finite() { far } else { end + dir * 1.0 };
        let mut v: Vec<f64> = (0..=64).map(|i| end - (end - start) * 0.5f64.powi(i)).collect();
        v.push(if dir < 0.0 { end.next_down() } else { end.next_up() });
        v
    };
    ts.retain(|&t| r.contains(t) && (t - end) * dir > 0.0);
    ts.sort_by(|a, b| a.total_cmp(b));
    ts.dedup();
    if dir > 0.0 {
        ts.reverse();
    }
    ts
}

/// Shortest round-trip text, switching to exponent form outside `[1e-5, 1e16)`.
pub fn format_real(t: f64) -> String {
    let a = t.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{t}")
    } else {
        format!("{t:e}")
    }
}

pub(crate) fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = match s {
        "inf" | "+inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        _ => s
            .parse()
            .map_err(|_| Error::Parse(format!("`{s}` is not a real number")))?,
    };
    if v.is_nan() {
        return Err(Error::Parse("NaN is not an element".into()));
    }
    Ok(v)
}

/// Iterator returned by [`OrderedSpace::dense_points`].
pub struct DensePoints<'a> {
    space: &'a OrderedSpace,
    round: u32,
    block: i64,
    index: u64,
    done: bool,
}

const MAX_DYADIC_DEPTH: u32 = 52;

impl Iterator for DensePoints<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let sp = self.space;
        if self.done {
            return None;
        }
        if !sp.has_fibers() {
            let k = sp.first_outer().checked_add(self.round as i64)?;
            if k > sp.last_outer() {
                self.done = true;
                return None;
            }
            self.round += 1;
            return Some(Point::raw(k, 0.0));
        }
        loop {
            if self.round > MAX_DYADIC_DEPTH {
                self.done = true;
                return None;
            }
            if self.block > sp.last_outer() {
                self.block = sp.first_outer();
                self.round += 1;
                self.index = 0;
                continue;
            }
            let r = sp.fiber(self.block).expect("fiber space");
            let i = self.index;
            self.index += 1;
            if self.round == 0 {
                let t = match i {
                    0 if r.include_lo => Some(r.lo),
                    1 if r.include_hi => Some(r.hi),
                    0 | 1 => None,
                    _ => {
                        self.block += 1;
                        self.index = 0;
                        continue;
                    }
                };
                if let Some(t) = t {
                    return Some(Point::raw(self.block, t));
                }
                continue;
            }
            let count = 1u64 << (self.round - 1);
            if i >= count {
                self.block += 1;
                self.index = 0;
                continue;
            }
            let u = (2 * i + 1) as f64 / (1u64 << self.round) as f64;
            let t = r.at_unit(u);
            if r.contains(t) {
                return Some(Point::raw(self.block, t));
            }
        }
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedPoint::NegInf => write!(f, "-inf"),
            ExtendedPoint::PosInf => write!(f, "inf"),
            ExtendedPoint::Finite(p) => write!(f, "<{}:{}>", p.outer, p.inner),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> OrderedSpace {
        OrderedSpace::finite(&["a", "b", "c"]).unwrap()
    }

    fn unit() -> OrderedSpace {
        OrderedSpace::real_interval(0.0, 1.0, true, true).unwrap()
    }

    fn lex01() -> OrderedSpace {
        let f = RealRange::closed(0.0, 1.0).unwrap();
        OrderedSpace::lex(&["0", "1"], vec![f, f]).unwrap()
    }

    #[test]
    fn compare_examples() {
        let s = abc();
        let (a, c) = (s.label("a").unwrap(), s.label("c").unwrap());
        assert_eq!(s.compare(&a, &c).unwrap(), Ordering::Less);

        let l = lex01();
        let x = l.pair("0", 0.9).unwrap();
        let y = l.pair("1", 0.1).unwrap();
        assert_eq!(l.compare(&x, &y).unwrap(), Ordering::Less);

        let u = unit();
        let h = u.real(0.5).unwrap();
        assert_eq!(u.compare(&h, &h).unwrap(), Ordering::Equal);
    }

    #[test]
    fn compare_rejects_foreign_points() {
        let u = unit();
        let outside = Point::raw(0, 1.5);
        let inside = u.real(0.2).unwrap();
        assert!(matches!(u.compare(&outside, &inside), Err(Error::Domain(_))));
        assert!(u.real(-0.1).is_err());
        assert!(abc().label("d").is_err());
    }

    #[test]
    fn isolation_examples() {
        let s = abc();
        let b = s.label("b").unwrap();
        let rep = s.classify_isolation(&b).unwrap();
        assert!(rep.is_isolated());
        assert_eq!(rep.left_witness, Some(Neighbor::Point(s.label("a").unwrap())));

        let u = unit();
        let rep = u.classify_isolation(&u.real(0.3).unwrap()).unwrap();
        assert!(!rep.left_isolated && !rep.right_isolated);
        let rep = u.classify_isolation(&u.real(0.0).unwrap()).unwrap();
        assert_eq!(rep.left_witness, Some(Neighbor::Extreme));
        assert!(!rep.right_isolated);

        // (1,0) follows (0,1) with nothing in between.
        let l = lex01();
        let x = l.pair("1", 0.0).unwrap();
        let rep = l.classify_isolation(&x).unwrap();
        assert!(rep.left_isolated);
        assert!(!rep.right_isolated);
        assert_eq!(rep.left_witness, Some(Neighbor::Point(l.pair("0", 1.0).unwrap())));
    }

    #[test]
    fn open_fiber_boundary_is_not_isolated() {
        let l = OrderedSpace::lex(
            &["0", "1"],
            vec![
                RealRange::new(0.0, 1.0, true, false).unwrap(),
                RealRange::new(0.0, 1.0, true, true).unwrap(),
            ],
        )
        .unwrap();
        let x = l.pair("1", 0.0).unwrap();
        let rep = l.classify_isolation(&x).unwrap();
        assert!(!rep.left_isolated);
        assert!(l.is_complete());
    }

    #[test]
    fn completeness_flags() {
        assert!(abc().is_complete());
        assert!(OrderedSpace::int_range(0, 10).unwrap().is_complete());
        assert!(unit().is_complete());
        assert!(lex01().is_complete());
        assert!(!OrderedSpace::real_interval(0.0, 1.0, false, true).unwrap().is_complete());
        assert!(!OrderedSpace::real_interval(f64::NEG_INFINITY, f64::INFINITY, false, false)
            .unwrap()
            .is_complete());
        let gap = OrderedSpace::lex(
            &["0", "1"],
            vec![
                RealRange::new(0.0, 1.0, true, false).unwrap(),
                RealRange::new(0.0, 1.0, false, true).unwrap(),
            ],
        )
        .unwrap();
        assert!(!gap.is_complete());
    }

    #[test]
    fn canonical_cuts_are_unique() {
        let s = abc();
        let (a, b, c) = (
            s.label("a").unwrap(),
            s.label("b").unwrap(),
            s.label("c").unwrap(),
        );
        assert_eq!(s.canonical(Cut::After(a)), Cut::Before(b));
        assert_eq!(s.canonical(Cut::Bottom), Cut::Before(a));
        assert_eq!(s.canonical(Cut::Top), Cut::After(c));

        let u = OrderedSpace::real_interval(0.0, 1.0, false, false).unwrap();
        assert_eq!(u.canonical(Cut::Bottom), Cut::Bottom);
        let mid = u.real(0.5).unwrap();
        assert_eq!(u.canonical(Cut::After(mid)), Cut::After(mid));
        assert_eq!(u.canonical(Cut::Before(Point::raw(0, 1.0))), Cut::Top);
    }

    #[test]
    fn element_syntax_round_trip() {
        let l = lex01();
        let p = l.parse_point("(1, 0.25)").unwrap();
        assert_eq!(l.format_point(&p), "(1,0.25)");
        let i = OrderedSpace::int_range(-3, 3).unwrap();
        assert_eq!(i.format_point(&i.parse_point("-2").unwrap()), "-2");
        assert!(i.parse_point("4").is_err());
    }

    #[test]
    fn dense_points_cover_dyadics() {
        let u = unit();
        let pts: Vec<f64> = u.dense_points().take(5).map(|p| p.inner()).collect();
        assert_eq!(pts, vec![0.0, 1.0, 0.5, 0.25, 0.75]);
        let s = abc();
        assert_eq!(s.dense_points().count(), 3);
        let line = OrderedSpace::real_interval(f64::NEG_INFINITY, f64::INFINITY, false, false)
            .unwrap();
        assert!(line.dense_points().take(100).all(|p| line.contains(&p)));
    }
}
