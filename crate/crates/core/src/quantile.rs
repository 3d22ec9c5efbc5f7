//! The pseudo-inverse `G(r) = inf {y : F(y) >= r}`.
//!
//! Inside a spread piece `G` returns the smallest binary64 coordinate whose
//! level (computed exactly as [`Cdf`] computes it) reaches `r`, found by
//! bisection over the ordered bit patterns. `G(r) <= x ⇔ r <= F(x)` therefore
//! holds for every float coordinate, not merely up to rounding.

use std::fmt;

use crate::cdf::{spread_level, Cdf, Piece};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::order::{Cut, Edge, ExtendedPoint, OrderedSpace, Point};
use crate::probe::Probe;

/// Value of `G` at a level.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantile {
    At(Point),
    /// The super-level set has no infimum in the space; the text says why.
    Undefined(String),
}

impl Quantile {
    pub fn point(&self) -> Option<Point> {
        match self {
            Quantile::At(p) => Some(*p),
            Quantile::Undefined(_) => None,
        }
    }
}

/// A subinterval of `[0, 1]`. Empty when `lo > hi`, or `lo == hi` without
/// both ends closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl LevelInterval {
    pub fn empty() -> Self {
        Self {
            lo: 0.0,
            hi: 0.0,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    /// Lebesgue length.
    pub fn length(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        (self.lo < r || (self.lo_closed && self.lo == r))
            && (r < self.hi || (self.hi_closed && self.hi == r))
    }
}

impl fmt::Display for LevelInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// The levels `A ⊆ [0,1]` where `G` is defined: all of `[0,1]` minus
/// finitely many excluded levels.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelDomain {
    pub excluded: Vec<f64>,
}

impl LevelDomain {
    pub fn contains(&self, r: f64) -> bool {
        (0.0..=1.0).contains(&r) && !self.excluded.contains(&r)
    }

    pub fn is_full(&self) -> bool {
        self.excluded.is_empty()
    }
}

/// Both sides of `G(r) <= x ⇔ r <= F(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Galois {
    pub quantile_below: bool,
    pub level_below: bool,
}

impl Galois {
    pub fn holds(&self) -> bool {
        self.quantile_below == self.level_below
    }
}

/// `F⁻(G(r))` and `F(G(r))` around a level `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub level: f64,
    pub at: Point,
    pub lo: f64,
    pub hi: f64,
    pub atom_mass: f64,
}

impl Sandwich {
    /// `lo <= r <= hi`, and an overshoot `hi > r` only at an atom.
    ///
    /// Off the atoms binary64 `F` is not onto, so `F(G(r))` may exceed `r`
    /// by the level step of one coordinate ulp; overshoots up to
    /// `LEVEL_TOLERANCE` are accepted on that side.
    pub fn holds(&self) -> bool {
        self.lo <= self.level + LEVEL_TOLERANCE
            && self.level <= self.hi
            && (self.hi <= self.level + LEVEL_TOLERANCE || self.atom_mass > 0.0)
    }

    /// The inequalities with no tolerance at all.
    pub fn holds_exactly(&self) -> bool {
        self.lo <= self.level && self.level <= self.hi && (self.hi <= self.level || self.atom_mass > 0.0)
    }
}

/// The four equivalent conditions for `G: A → X` to be a bijection,
/// each evaluated by its own route.
#[derive(Debug, Clone, PartialEq)]
pub struct BijectivityReport {
    /// `F∘G = id` on `A`, `F(X) ⊆ A` and `G∘F = id` on `X`, on probes.
    pub inverse_pair: bool,
    /// `F` injective (level-set analysis) and `F(X) = A` on probes.
    pub injective_onto: bool,
    /// `G` injective and surjective by collision and coverage sampling.
    pub quantile_bijective: bool,
    /// `μ(]a,b]) > 0` for all `a < b` and no atoms, from the measure itself.
    pub support_condition: bool,
}

impl BijectivityReport {
    pub fn conditions(&self) -> [bool; 4] {
        [
            self.inverse_pair,
            self.injective_onto,
            self.quantile_bijective,
            self.support_condition,
        ]
    }

    pub fn consistent(&self) -> bool {
        let c = self.conditions();
        c.iter().all(|&v| v == c[0])
    }
}

/// Slack on identities between levels.
pub const LEVEL_TOLERANCE: f64 = 1e-12;
const PROBE_SEED: u64 = 0x5eed_0002;

#[derive(Debug, Clone)]
pub struct PseudoInverse {
    cdf: Cdf,
    domain: LevelDomain,
}

impl PseudoInverse {
    pub fn new(cdf: Cdf) -> Self {
        let mut gi = Self {
            cdf,
            domain: LevelDomain { excluded: Vec::new() },
        };
        gi.domain = gi.compute_domain();
        gi
    }

    pub fn cdf(&self) -> &Cdf {
        &self.cdf
    }

    pub fn space(&self) -> &OrderedSpace {
        self.cdf.space()
    }

    pub fn domain(&self) -> &LevelDomain {
        &self.domain
    }

    fn compute_domain(&self) -> LevelDomain {
        let mut excluded = Vec::new();
        if self.space().min().is_none() {
            excluded.push(0.0);
        }
        let cum = self.cdf.cumulative();
        for (j, p) in self.cdf.pieces().iter().enumerate() {
            if let Piece::Spread { block, hi, .. } = *p {
                if !matches!(self.space().upset_min(Point::raw(block, hi), false), Edge::At(_)) {
                    excluded.push(cum[j + 1]);
                }
            }
        }
        excluded.sort_by(f64::total_cmp);
        excluded.dedup();
        LevelDomain { excluded }
    }

    pub fn eval_g(&self, r: f64) -> Result<Quantile> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain(format!("level {r} is outside [0,1]")));
        }
        let sp = self.space();
        if r == 0.0 {
            return Ok(match sp.min() {
                Some(m) => Quantile::At(m),
                None => Quantile::Undefined(
                    "{y : F(y) >= 0} is the whole space, which has no minimum".into(),
                ),
            });
        }
        let (pieces, cum) = (self.cdf.pieces(), self.cdf.cumulative());
        let j = cum[1..].partition_point(|&c| c < r);
        let Some(&piece) = pieces.get(j) else {
            return Ok(Quantile::Undefined(format!("{{y : F(y) >= {r}}} is empty")));
        };
        let (block, lo, hi, mass) = match piece {
            Piece::Atom { at, .. } => return Ok(Quantile::At(at)),
            Piece::Spread {
                block,
                lo,
                hi,
                mass,
            } => (block, lo, hi, mass),
        };
        let base = cum[j];
        let t = least_coordinate(lo, hi, |t| spread_level(base, lo, hi, mass, t) >= r);
        if t < hi {
            return Ok(Quantile::At(Point::raw(block, t)));
        }
        match sp.upset_min(Point::raw(block, hi), false) {
            Edge::At(u) => Ok(Quantile::At(u)),
            // binary64 can place r strictly between the last interior level and
            // the piece total; the open end is then the only candidate
            _ if r < cum[j + 1] && hi.next_down() > lo => {
                Ok(Quantile::At(Point::raw(block, hi.next_down())))
            }
            Edge::Empty => Ok(Quantile::Undefined(format!(
                "{{y : F(y) >= {r}}} is empty: the mass ends at the open end {hi} of the space"
            ))),
            Edge::Open(k) => Ok(Quantile::Undefined(format!(
                "{{y : F(y) >= {r}}} starts at the gap after coordinate {hi} of block {block}, \
                 below block {k}; it has no infimum"
            ))),
        }
    }

    /// Evaluates both sides of the Galois property; `None` when `G(r)` is undefined.
    pub fn galois_check(&self, r: f64, x: &Point) -> Result<Option<Galois>> {
        let f = self.cdf.eval_f(x)?;
        Ok(self.eval_g(r)?.point().map(|g| Galois {
            quantile_below: g <= *x,
            level_below: r <= f,
        }))
    }

    /// `None` when `G(r)` is undefined.
    pub fn sandwich_check(&self, r: f64) -> Result<Option<Sandwich>> {
        Ok(self.eval_g(r)?.point().map(|g| Sandwich {
            level: r,
            at: g,
            lo: self.cdf.level(&g, true),
            hi: self.cdf.level(&g, false),
            atom_mass: self.cdf.atom_mass(&g),
        }))
    }

    /// `]F⁻(x), F(x)]`: the levels sent to `x`. Empty off the atoms.
    pub fn plateau_of(&self, x: &Point) -> Result<LevelInterval> {
        let (lo, hi) = (self.cdf.eval_f_minus(x)?, self.cdf.eval_f(x)?);
        if lo >= hi {
            return Ok(LevelInterval::empty());
        }
        Ok(LevelInterval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: true,
        })
    }

    /// `G⁻¹(]a,b[) = ]F(a), F⁻(b)| ∩ A`, with extended endpoints allowed.
    ///
    /// The right end `F⁻(b)` is included exactly when `G(F⁻(b))` lies in
    /// `]a,b[`; at `a = -inf` the level `0` is included when `G(0)` does.
    pub fn preimage_open_interval(&self, a: ExtendedPoint, b: ExtendedPoint) -> Result<LevelInterval> {
        for e in [a, b] {
            if let ExtendedPoint::Finite(p) = e {
                self.space().check(&p)?;
            }
        }
        if a >= b {
            return Err(Error::Domain("preimage needs a < b".into()));
        }
        let inside = |q: &Quantile| match q.point() {
            Some(g) => a < ExtendedPoint::Finite(g) && ExtendedPoint::Finite(g) < b,
            None => false,
        };
        let (lo, lo_closed) = match a {
            ExtendedPoint::NegInf => (0.0, inside(&self.eval_g(0.0)?)),
            ExtendedPoint::Finite(p) => (self.cdf.level(&p, false), false),
            ExtendedPoint::PosInf => return Ok(LevelInterval::empty()),
        };
        let hi = match b {
            ExtendedPoint::PosInf => 1.0,
            ExtendedPoint::Finite(p) => self.cdf.level(&p, true),
            ExtendedPoint::NegInf => return Ok(LevelInterval::empty()),
        };
        let hi_closed = inside(&self.eval_g(hi)?);
        let iv = LevelInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        Ok(if iv.is_empty() { LevelInterval::empty() } else { iv })
    }

    /// Lebesgue length of `G⁻¹(u)`, assembled from open-interval preimages
    /// and the plateaus of closed endpoints.
    pub fn preimage_length(&self, u: &IntervalUnion) -> Result<f64> {
        let mut total = 0.0;
        for iv in u.intervals(self.space()) {
            if iv.lo == iv.hi {
                if let ExtendedPoint::Finite(p) = iv.lo {
                    total += self.plateau_of(&p)?.length();
                }
                continue;
            }
            total += self.preimage_open_interval(iv.lo, iv.hi)?.length();
            for (end, closed) in [(iv.lo, iv.lo_closed), (iv.hi, iv.hi_closed)] {
                if let (ExtendedPoint::Finite(p), true) = (end, closed) {
                    total += self.plateau_of(&p)?.length();
                }
            }
        }
        Ok(total)
    }

    /// `G` is injective exactly when there are no atoms; otherwise the
    /// first atom and its plateau witness a collision.
    pub fn is_g_injective(&self) -> (bool, Option<(Point, LevelInterval)>) {
        match self.cdf.discontinuities().first() {
            None => (true, None),
            Some(&(x, _)) => (false, Some((x, self.plateau_of(&x).expect("atoms are elements")))),
        }
    }

    /// `F` is injective exactly when no level set `{y : F(y) = c}` holds two
    /// points. Level sets sit between consecutive pieces of the table; the
    /// witness is a null interval `]a,b]` inside one of them.
    pub fn is_f_injective(&self) -> (bool, Option<Interval>) {
        let sp = self.space();
        let pieces = self.cdf.pieces();
        for j in 0..=pieces.len() {
            let lo = match j.checked_sub(1).map(|i| pieces[i]) {
                None => Cut::Bottom,
                Some(Piece::Atom { at, .. }) => Cut::Before(at),
                Some(Piece::Spread { block, hi, .. }) => Cut::Before(Point::raw(block, hi)),
            };
            let hi = match pieces.get(j) {
                None => Cut::Top,
                Some(&Piece::Atom { at, .. }) => Cut::Before(at),
                Some(&Piece::Spread { block, lo, .. }) => Cut::After(Point::raw(block, lo)),
            };
            let (lo, hi) = (sp.canonical(lo), sp.canonical(hi));
            if lo >= hi {
                continue;
            }
            if let Cut::Before(u) = lo {
                if sp.canonical(Cut::After(u)) == hi {
                    continue;
                }
            }
            return (false, self.null_witness(lo, hi));
        }
        (true, None)
    }

    /// Two far-apart points of the level set `[lo, hi)` as `]a,b]`.
    fn null_witness(&self, lo: Cut, hi: Cut) -> Option<Interval> {
        let sp = self.space();
        let region = IntervalUnion::from_cuts(sp, vec![(lo, hi)]);
        let mut cands: Vec<Point> = Vec::new();
        if let Cut::Before(u) = lo {
            cands.push(u);
            cands.extend(sp.right_approach(&u));
        }
        match hi {
            Cut::After(l) => {
                cands.push(l);
                cands.extend(sp.left_approach(&l));
            }
            Cut::Before(v) => cands.extend(sp.left_approach(&v)),
            _ => {}
        }
        cands.extend(sp.dense_points().take(4096));
        cands.retain(|p| region.contains(p));
        let a = *cands.iter().min()?;
        let b = *cands.iter().max()?;
        (a < b).then(|| Interval::left_open(a, b))
    }

    /// Evaluates the four bijectivity conditions independently.
    pub fn bijectivity_report(&self) -> BijectivityReport {
        let (xs, rs) = self.probes(512);
        let defined: Vec<(f64, Point)> = rs
            .iter()
            .filter_map(|&r| self.eval_g(r).ok()?.point().map(|g| (r, g)))
            .collect();
        let f = |x: &Point| self.cdf.level(x, false);
        let g = |r: f64| self.eval_g(r).ok().and_then(|q| q.point());

        let fg_identity = defined.iter().all(|&(r, p)| (f(&p) - r).abs() <= LEVEL_TOLERANCE);
        let f_into_domain = xs.iter().all(|x| g(f(x)).is_some());
        let gf_identity = xs.iter().all(|x| g(f(x)).is_some_and(|p| close(&p, x)));
        let inverse_pair = fg_identity && f_into_domain && gf_identity;

        let injective_onto = self.is_f_injective().0 && f_into_domain && fg_identity;

        let collision_free = defined
            .windows(2)
            .all(|w| w[1].0 - w[0].0 <= 1e-9 || !close(&w[0].1, &w[1].1));
        let covering = xs.iter().all(|x| self.reaches(x));
        let quantile_bijective = collision_free && covering;

        BijectivityReport {
            inverse_pair,
            injective_onto,
            quantile_bijective,
            support_condition: self.support_condition(),
        }
    }

    /// Whether some level is sent to `x`, found by bisection on `G` alone.
    fn reaches(&self, x: &Point) -> bool {
        let below = |r: f64| {
            self.eval_g(r)
                .ok()
                .and_then(|q| q.point())
                .is_some_and(|g| g < *x)
        };
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..80 {
            let mut mid = 0.5 * (lo + hi);
            // excluded levels are isolated
            if !self.domain.contains(mid) {
                mid = mid.next_up();
            }
            if mid <= lo || mid >= hi {
                break;
            }
            if below(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        [lo, hi].iter().any(|&r| {
            self.eval_g(r)
                .ok()
                .and_then(|q| q.point())
                .is_some_and(|g| close(&g, x))
        })
    }

    /// `μ(]a,b]) > 0` for all `a < b` and no atoms, read from the measure:
    /// every component of the null region (outside atoms and segment
    /// interiors) must be a single point without a predecessor.
    fn support_condition(&self) -> bool {
        let spec = self.cdf.spec();
        if !spec.atoms().is_empty() {
            return false;
        }
        let sp = self.space();
        let interiors: Vec<(Cut, Cut)> = spec
            .segments()
            .iter()
            .map(|s| {
                (
                    Cut::After(Point::raw(s.block, s.lo)),
                    Cut::Before(Point::raw(s.block, s.hi)),
                )
            })
            .collect();
        let null = IntervalUnion::from_cuts(sp, interiors).complement(sp);
        null.pieces().iter().all(|&(lo, hi)| match lo {
            Cut::Before(u) => sp.canonical(Cut::After(u)) == hi && sp.predecessor(&u).is_none(),
            _ => false,
        })
    }

    /// Point probes (breakpoints, approach points, dense and random
    /// points) and level probes (grid, random, attained levels, plateau
    /// midpoints), sorted.
    pub(crate) fn probes(&self, random: usize) -> (Vec<Point>, Vec<f64>) {
        let sp = self.space();
        let breaks = self.cdf.breakpoints();
        let mut xs: Vec<Point> = breaks.clone();
        for b in &breaks {
            xs.extend(sp.left_approach(b).last());
            xs.extend(sp.right_approach(b).last());
        }
        xs.extend(sp.dense_points().take(random));
        let mut probe = Probe::new(PROBE_SEED);
        xs.extend((0..random).map(|_| probe.point(sp, &breaks)));
        xs.sort();
        xs.dedup();

        let mut rs: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
        rs.extend((0..random).map(|_| probe.unit()));
        rs.extend(xs.iter().map(|x| self.cdf.level(x, false)));
        rs.extend(self.cdf.cumulative().iter().copied());
        for (x, _) in self.cdf.discontinuities() {
            let (lo, hi) = (self.cdf.level(&x, true), self.cdf.level(&x, false));
            rs.push(0.5 * (lo + hi));
        }
        rs.retain(|r| (0.0..=1.0).contains(r));
        rs.sort_by(f64::total_cmp);
        rs.dedup();
        (xs, rs)
    }
}

/// Same block and coordinates within a relative `1e-9`.
fn close(p: &Point, q: &Point) -> bool {
    p.outer() == q.outer()
        && (p.inner() - q.inner()).abs() <= 1e-9 * p.inner().abs().max(q.inner().abs()).max(1.0)
}

/// Smallest binary64 `t` in `]lo, hi]` with `pred(t)`, for a predicate
/// monotone in `t` that holds at `hi`.
fn least_coordinate(lo: f64, hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    let (mut a, mut b) = (ordered(lo), ordered(hi));
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        if pred(unordered(mid)) {
            b = mid;
        } else {
            a = mid;
        }
    }
    unordered(b)
}

/// Maps binary64 onto `i64` preserving order (`-0.0` sits just below `0.0`).
fn ordered(t: f64) -> i64 {
    let bits = t.to_bits() as i64;
    bits ^ (((bits >> 63) as u64) >> 1) as i64
}

fn unordered(k: i64) -> f64 {
    f64::from_bits((k ^ (((k >> 63) as u64) >> 1) as i64) as u64)
}
