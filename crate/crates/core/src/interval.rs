//! The algebra of finite disjoint unions of intervals.
//!
//! An [`IntervalUnion`] is stored as a sorted list of half-open cut ranges
//! `[lo, hi)` with canonical cuts, so equal sets always have identical
//! representations and adjacent pieces (including discrete neighbours such
//! as `[a,b]` and `[succ(b),c]`) are merged.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::order::{parse_real, Cut, ExtendedPoint, OrderedSpace, Point};

/// A convex set `|lo, hi|` with closure flags.
///
/// Infinite endpoints are never closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: ExtendedPoint,
    pub hi: ExtendedPoint,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: ExtendedPoint, hi: ExtendedPoint, lo_closed: bool, hi_closed: bool) -> Self {
        Self {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    /// `[a,b]`
    pub fn closed(a: Point, b: Point) -> Self {
        Self::new(a.into(), b.into(), true, true)
    }

    /// `]a,b[`
    pub fn open(a: impl Into<ExtendedPoint>, b: impl Into<ExtendedPoint>) -> Self {
        Self::new(a.into(), b.into(), false, false)
    }

    /// `]a,b]`
    pub fn left_open(a: impl Into<ExtendedPoint>, b: Point) -> Self {
        Self::new(a.into(), b.into(), false, true)
    }

    /// `[a,b[`
    pub fn right_open(a: Point, b: impl Into<ExtendedPoint>) -> Self {
        Self::new(a.into(), b.into(), true, false)
    }

    pub fn singleton(p: Point) -> Self {
        Self::closed(p, p)
    }

    /// `(<= b)`
    pub fn at_most(b: Point) -> Self {
        Self::new(ExtendedPoint::NegInf, b.into(), false, true)
    }

    /// `(< b)`
    pub fn below(b: Point) -> Self {
        Self::new(ExtendedPoint::NegInf, b.into(), false, false)
    }

    /// `(> a)`
    pub fn above(a: Point) -> Self {
        Self::new(a.into(), ExtendedPoint::PosInf, false, false)
    }

    /// Membership by the closure flags, without reference to a space.
    pub fn contains(&self, x: &Point) -> bool {
        let x = ExtendedPoint::Finite(*x);
        let above_lo = self.lo < x || (self.lo_closed && self.lo == x);
        let below_hi = x < self.hi || (self.hi_closed && self.hi == x);
        above_lo && below_hi
    }

    fn cuts(&self, space: &OrderedSpace) -> Result<(Cut, Cut)> {
        let lo = match self.lo {
            ExtendedPoint::NegInf => Cut::Bottom,
            ExtendedPoint::PosInf => Cut::Top,
            ExtendedPoint::Finite(p) => {
                space.check(&p)?;
                if self.lo_closed {
                    Cut::Before(p)
                } else {
                    Cut::After(p)
                }
            }
        };
        let hi = match self.hi {
            ExtendedPoint::NegInf => Cut::Bottom,
            ExtendedPoint::PosInf => Cut::Top,
            ExtendedPoint::Finite(p) => {
                space.check(&p)?;
                if self.hi_closed {
                    Cut::After(p)
                } else {
                    Cut::Before(p)
                }
            }
        };
        let inf_closed = (self.lo_closed && !matches!(self.lo, ExtendedPoint::Finite(_)))
            || (self.hi_closed && !matches!(self.hi, ExtendedPoint::Finite(_)));
        if inf_closed {
            return Err(Error::Domain("infinite endpoints cannot be closed".into()));
        }
        Ok((space.canonical(lo), space.canonical(hi)))
    }

    pub fn format(&self, space: &OrderedSpace) -> String {
        format!(
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            space.format_extended(&self.lo),
            space.format_extended(&self.hi),
            if self.hi_closed { ']' } else { ')' },
        )
    }
}

/// A finite union of pairwise disjoint, non-adjacent intervals in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalUnion {
    pieces: Vec<(Cut, Cut)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(space: &OrderedSpace) -> Self {
        Self::from_cuts(space, vec![(Cut::Bottom, Cut::Top)])
    }

    pub fn from_interval(space: &OrderedSpace, interval: Interval) -> Result<Self> {
        Self::from_intervals(space, &[interval])
    }

    pub fn from_intervals(space: &OrderedSpace, intervals: &[Interval]) -> Result<Self> {
        let raw = intervals
            .iter()
            .map(|i| i.cuts(space))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_cuts(space, raw))
    }

    pub fn from_points(space: &OrderedSpace, points: &[Point]) -> Result<Self> {
        let intervals: Vec<Interval> = points.iter().map(|p| Interval::singleton(*p)).collect();
        Self::from_intervals(space, &intervals)
    }

    pub(crate) fn from_cuts(space: &OrderedSpace, raw: Vec<(Cut, Cut)>) -> Self {
        let mut pieces: Vec<(Cut, Cut)> = raw
            .into_iter()
            .map(|(a, b)| (space.canonical(a), space.canonical(b)))
            .filter(|(a, b)| a < b)
            .collect();
        pieces.sort_by_key(|x| x.0);
        Self {
            pieces: merge_sorted(pieces),
        }
    }

    pub(crate) fn pieces(&self) -> &[(Cut, Cut)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut pieces: Vec<(Cut, Cut)> = self
            .pieces
            .iter()
            .chain(other.pieces.iter())
            .copied()
            .collect();
        pieces.sort_by_key(|x| x.0);
        Self {
            pieces: merge_sorted(pieces),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a0, a1) = self.pieces[i];
            let (b0, b1) = other.pieces[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { pieces: out }
    }

    /// `X \ u`: the gaps between consecutive pieces plus the two tails.
    pub fn complement(&self, space: &OrderedSpace) -> Self {
        let top = space.canonical(Cut::Top);
        let mut prev = space.canonical(Cut::Bottom);
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        for &(lo, hi) in &self.pieces {
            if prev < lo {
                out.push((prev, lo));
            }
            prev = hi;
        }
        if prev < top {
            out.push((prev, top));
        }
        Self { pieces: out }
    }

    pub fn difference(&self, other: &Self, space: &OrderedSpace) -> Self {
        self.intersect(&other.complement(space))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.intersect(other) == *self
    }

    pub fn contains(&self, x: &Point) -> bool {
        let (before, after) = (Cut::Before(*x), Cut::After(*x));
        // first piece whose upper cut lies above x
        let idx = self.pieces.partition_point(|&(_, hi)| hi < after);
        self.pieces
            .get(idx)
            .is_some_and(|&(lo, hi)| lo <= before && after <= hi)
    }

    /// Maximal convex pieces, each returned as a one-piece union.
    pub fn components(&self) -> Vec<IntervalUnion> {
        self.pieces
            .iter()
            .map(|&p| IntervalUnion { pieces: vec![p] })
            .collect()
    }

    /// The pieces as intervals, preferring closed endpoints.
    pub fn intervals(&self, space: &OrderedSpace) -> Vec<Interval> {
        self.pieces
            .iter()
            .map(|&(lo, hi)| {
                let (lo, lo_closed) = lower_bound(lo);
                let (hi, hi_closed) = upper_bound(space, hi);
                Interval::new(lo, hi, lo_closed, hi_closed)
            })
            .collect()
    }

    pub fn format(&self, space: &OrderedSpace) -> String {
        if self.is_empty() {
            return "{}".into();
        }
        let mut s = String::new();
        for (i, iv) in self.intervals(space).iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", iv.format(space));
        }
        s
    }

    /// Parses `(a,b]`, `[a,b)`, `(a,b)`, `[a,b]` pieces separated by commas,
    /// with `-inf`/`inf` endpoint literals; `{}` or the empty string is `∅`.
    pub fn parse(space: &OrderedSpace, text: &str) -> Result<Self> {
        let intervals = parse_intervals(space, text)?;
        Self::from_intervals(space, &intervals)
    }
}

fn merge_sorted(pieces: Vec<(Cut, Cut)>) -> Vec<(Cut, Cut)> {
    let mut out: Vec<(Cut, Cut)> = Vec::with_capacity(pieces.len());
    for (lo, hi) in pieces {
        match out.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn lower_bound(c: Cut) -> (ExtendedPoint, bool) {
    match c {
        Cut::Before(p) => (p.into(), true),
        Cut::After(p) => (p.into(), false),
        Cut::Bottom => (ExtendedPoint::NegInf, false),
        Cut::Top => (ExtendedPoint::PosInf, false),
        Cut::Gap(_) => unreachable!("interval unions never start at a gap"),
    }
}

fn upper_bound(space: &OrderedSpace, c: Cut) -> (ExtendedPoint, bool) {
    match c {
        Cut::After(p) => (p.into(), true),
        Cut::Before(p) => match space.predecessor(&p) {
            Some(q) => (q.into(), true),
            None => (p.into(), false),
        },
        Cut::Top => (ExtendedPoint::PosInf, false),
        Cut::Bottom => (ExtendedPoint::NegInf, false),
        Cut::Gap(_) => unreachable!("interval unions never end at a gap"),
    }
}

impl OrderedSpace {
    /// Greatest lower bound of a union of intervals.
    ///
    /// `+inf` for the empty set; `None` when no infimum exists in the space
    /// (the set is unbounded below in a space without minimum).
    pub fn infimum(&self, u: &IntervalUnion) -> Option<ExtendedPoint> {
        match u.pieces.first() {
            None => Some(ExtendedPoint::PosInf),
            Some(&(lo, _)) => match lo {
                Cut::Before(p) | Cut::After(p) => Some(p.into()),
                _ => None,
            },
        }
    }

    /// Least upper bound of a union of intervals; `-inf` for the empty set.
    pub fn supremum(&self, u: &IntervalUnion) -> Option<ExtendedPoint> {
        match u.pieces.last() {
            None => Some(ExtendedPoint::NegInf),
            Some(&(_, hi)) => match hi {
                Cut::After(_) | Cut::Before(_) => Some(upper_bound(self, hi).0),
                _ => None,
            },
        }
    }

    /// Maximal convex pieces of a union.
    pub fn convex_components(&self, u: &IntervalUnion) -> Vec<IntervalUnion> {
        u.components()
    }
}

// ---- parsing ----------------------------------------------------------------

fn parse_intervals(space: &OrderedSpace, text: &str) -> Result<Vec<Interval>> {
    let s = text.trim();
    if s.is_empty() || s == "{}" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = s;
    loop {
        let (iv, tail) = parse_one(space, rest.trim_start())?;
        out.push(iv);
        let tail = tail.trim_start();
        if tail.is_empty() {
            break;
        }
        rest = tail
            .strip_prefix(',')
            .ok_or_else(|| Error::Parse(format!("expected `,` before `{tail}`")))?;
    }
    Ok(out)
}

fn parse_one<'a>(space: &OrderedSpace, s: &'a str) -> Result<(Interval, &'a str)> {
    if let Some(body) = s.strip_prefix('{') {
        // `{p}` singleton shorthand
        let end = body
            .find('}')
            .ok_or_else(|| Error::Parse(format!("unterminated `{{` in `{s}`")))?;
        let p = space.parse_point(&body[..end])?;
        return Ok((Interval::singleton(p), &body[end + 1..]));
    }
    let lo_closed = match s.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(Error::Parse(format!("interval must start with `[` or `(`: `{s}`"))),
    };
    let s = &s[1..];
    let (lo_tok, s) = take_endpoint(s, &[','])?;
    let s = s
        .trim_start()
        .strip_prefix(',')
        .ok_or_else(|| Error::Parse("expected `,` between endpoints".into()))?;
    let (hi_tok, s) = take_endpoint(s, &[']', ')'])?;
    let s = s.trim_start();
    let hi_closed = match s.chars().next() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err(Error::Parse("interval must end with `]` or `)`".into())),
    };
    let lo = parse_endpoint(space, lo_tok)?;
    let hi = parse_endpoint(space, hi_tok)?;
    Ok((Interval::new(lo, hi, lo_closed, hi_closed), &s[1..]))
}

/// Reads one endpoint token: a parenthesised pair or text up to a stop char.
fn take_endpoint<'a>(s: &'a str, stops: &[char]) -> Result<(&'a str, &'a str)> {
    let t = s.trim_start();
    if t.starts_with('(') {
        let end = t
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unterminated pair in `{t}`")))?;
        return Ok((&t[..=end], &t[end + 1..]));
    }
    let end = t
        .find(|c| stops.contains(&c))
        .ok_or_else(|| Error::Parse(format!("missing delimiter after `{t}`")))?;
    Ok((t[..end].trim(), &t[end..]))
}

fn parse_endpoint(space: &OrderedSpace, tok: &str) -> Result<ExtendedPoint> {
    match tok.trim() {
        "-inf" => Ok(ExtendedPoint::NegInf),
        "inf" | "+inf" => Ok(ExtendedPoint::PosInf),
        t => {
            // reject non-finite reals that are not the literals above
            if let Ok(v) = parse_real(t) {
                if v.is_infinite() {
                    return Ok(if v > 0.0 {
                        ExtendedPoint::PosInf
                    } else {
                        ExtendedPoint::NegInf
                    });
                }
            }
            space.parse_point(t).map(ExtendedPoint::Finite)
        }
    }
}
