//! Brute-force ground truth and the proposition suite.
//!
//! Nothing here reads the cumulative table directly: finite cases sum atom
//! masses over subsets, grid inversion scans `F` over a uniform grid, and the
//! suite compares a [`DistributionView`] against the measure it claims to
//! represent.

use std::fmt::Write as _;

use crate::cdf::Cdf;
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::measure::MeasureSpec;
use crate::order::{ExtendedPoint, OrderedSpace, Point};
use crate::probe::Probe;
use crate::quantile::PseudoInverse;
use crate::sampling::pushforward_check;

/// Largest universe enumerated exhaustively.
pub const MAX_FINITE: usize = 8;

/// Default grid step for [`grid_invert`].
pub const GRID_RESOLUTION: f64 = 1e-6;

/// A finite space with an atomic measure and its power-set table.
#[derive(Debug, Clone)]
pub struct FiniteCase {
    spec: MeasureSpec,
    points: Vec<Point>,
    masses: Vec<f64>,
}

impl FiniteCase {
    pub fn new(spec: MeasureSpec) -> Result<Self> {
        let sp = spec.space();
        let n = sp.cardinality().ok_or_else(|| {
            Error::SizeCap("exhaustive enumeration needs a finite space".into())
        })?;
        if n as usize > MAX_FINITE {
            return Err(Error::SizeCap(format!(
                "{n} points exceed the enumeration cap of {MAX_FINITE}"
            )));
        }
        let points: Vec<Point> = sp.dense_points().collect();
        let masses = points.iter().map(|p| spec.point_mass(p)).collect();
        Ok(Self {
            spec,
            points,
            masses,
        })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Bit `i` of a mask selects `points()[i]`.
    pub fn mask_of(&self, u: &IntervalUnion) -> u32 {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| u.contains(p))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn subset_measure(&self, mask: u32) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, m)| m)
            .sum()
    }

    /// All `2^n` subsets with their measures, indexed by mask.
    pub fn enumerate_subset_measures(&self) -> Vec<(u32, f64)> {
        (0..1u32 << self.points.len())
            .map(|m| (m, self.subset_measure(m)))
            .collect()
    }

    /// Every interval with endpoints among the points and `±inf`, under all
    /// four closure patterns (closed flags are dropped at infinite ends).
    pub fn all_intervals(&self) -> Vec<Interval> {
        let mut ends: Vec<ExtendedPoint> = vec![ExtendedPoint::NegInf];
        ends.extend(self.points.iter().map(|&p| ExtendedPoint::Finite(p)));
        ends.push(ExtendedPoint::PosInf);
        let mut out = Vec::new();
        for &lo in &ends {
            for &hi in &ends {
                for (lc, hc) in [(false, true), (true, true), (false, false), (true, false)] {
                    let lc = lc && matches!(lo, ExtendedPoint::Finite(_));
                    let hc = hc && matches!(hi, ExtendedPoint::Finite(_));
                    out.push(Interval::new(lo, hi, lc, hc));
                }
            }
        }
        out.dedup();
        out
    }
}

/// `inf {y in grid : F(y) >= r}` over a uniform grid of step at most
/// `resolution` on every fiber, together with all discrete points and atoms.
pub fn grid_invert(cdf: &Cdf, r: f64, resolution: f64) -> Result<Point> {
    if resolution.is_nan() || resolution < GRID_RESOLUTION {
        return Err(Error::Domain(format!(
            "grid resolution must be at least {GRID_RESOLUTION}"
        )));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("level {r} is outside [0,1]")));
    }
    let grid = Grid::new(cdf.space(), resolution)?;
    let first_grid = grid.first_where(|y| cdf.level(y, false) >= r);
    let first_atom = cdf
        .discontinuities()
        .into_iter()
        .map(|d| d.0)
        .find(|a| cdf.level(a, false) >= r);
    match (first_grid, first_atom) {
        (Some(g), Some(a)) => Ok(g.min(a)),
        (Some(p), None) | (None, Some(p)) => Ok(p),
        (None, None) => Err(Error::Domain(format!(
            "no grid point reaches level {r}"
        ))),
    }
}

/// Uniform grid over each block, indexed without materializing it. Open
/// fiber ends are left out, so every index is an element.
struct Grid {
    /// `(block, lo, hi, steps, first j, first index)`; `steps == 0` marks a singleton.
    blocks: Vec<(i64, f64, f64, u64, u64, u64)>,
    len: u64,
}

impl Grid {
    fn new(space: &OrderedSpace, resolution: f64) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut len = 0u64;
        for k in space.first_outer()..=space.last_outer() {
            match space.fiber(k) {
                None => {
                    blocks.push((k, 0.0, 0.0, 0, 0, len));
                    len += 1;
                }
                Some(r) => {
                    if !r.is_bounded() {
                        return Err(Error::UnsupportedSpace(
                            "grid inversion needs bounded fibers".into(),
                        ));
                    }
                    let steps = (((r.hi - r.lo) / resolution).ceil() as u64).max(2);
                    let first = u64::from(!r.include_lo);
                    let last = if r.include_hi { steps } else { steps - 1 };
                    blocks.push((k, r.lo, r.hi, steps, first, len));
                    len += last - first + 1;
                }
            }
        }
        Ok(Self { blocks, len })
    }

    fn at(&self, i: u64) -> Point {
        let b = self.blocks.partition_point(|blk| blk.5 <= i) - 1;
        let (k, lo, hi, steps, first, start) = self.blocks[b];
        if steps == 0 {
            return Point::raw(k, 0.0);
        }
        let j = first + (i - start);
        let t = if j == steps {
            hi
        } else {
            lo + (hi - lo) * (j as f64 / steps as f64)
        };
        Point::raw(k, t)
    }

    /// First grid element satisfying a predicate monotone along the order.
    fn first_where(&self, pred: impl Fn(&Point) -> bool) -> Option<Point> {
        let (mut lo, mut hi) = (0u64, self.len);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if pred(&self.at(mid)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        (lo < self.len).then(|| self.at(lo))
    }
}

// ---- proposition suite ------------------------------------------------------

/// What the suite needs from a distribution. [`PseudoInverse`] implements it;
/// tests wrap it to inject faults.
pub trait DistributionView {
    /// The measure the functions claim to describe; the suite's ground truth.
    fn spec(&self) -> &MeasureSpec;
    fn f(&self, x: &Point) -> f64;
    fn f_minus(&self, x: &Point) -> f64;
    /// `μ({x})` as the implementation represents it.
    fn atom_mass(&self, x: &Point) -> f64;
    fn quantile(&self, r: f64) -> Option<Point>;
    /// Points where the functions change behaviour.
    fn breakpoints(&self) -> Vec<Point>;

    fn space(&self) -> &OrderedSpace {
        self.spec().space()
    }
}

impl DistributionView for PseudoInverse {
    fn spec(&self) -> &MeasureSpec {
        self.cdf().spec()
    }

    fn f(&self, x: &Point) -> f64 {
        self.cdf().level(x, false)
    }

    fn f_minus(&self, x: &Point) -> f64 {
        self.cdf().level(x, true)
    }

    fn atom_mass(&self, x: &Point) -> f64 {
        self.cdf().atom_mass(x)
    }

    fn quantile(&self, r: f64) -> Option<Point> {
        self.eval_g(r).ok().and_then(|q| q.point())
    }

    fn breakpoints(&self) -> Vec<Point> {
        self.cdf().breakpoints()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// No probe met the proposition's hypothesis.
    Inapplicable,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inapplicable => "inapplicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropositionResult {
    pub proposition: &'static str,
    pub instance: String,
    pub status: Status,
    /// Probes that met the hypothesis.
    pub checked: usize,
    /// First counterexample, in element syntax.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub results: Vec<PropositionResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropositionResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn find(&self, proposition: &str) -> Option<&PropositionResult> {
        self.results.iter().find(|r| r.proposition == proposition)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random points, levels and pairs drawn per proposition.
    pub probes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed_0003,
            probes: 2000,
        }
    }
}

const TOL: f64 = 1e-12;
const LADDER: [f64; 3] = [1e-3, 1e-6, 1e-9];

/// Accumulates one proposition's verdict.
struct Check {
    proposition: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl Check {
    fn new(proposition: &'static str) -> Self {
        Self {
            proposition,
            checked: 0,
            witness: None,
        }
    }

    fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self, instance: &str) -> PropositionResult {
        let status = if self.witness.is_some() {
            Status::Fail
        } else if self.checked == 0 {
            Status::Inapplicable
        } else {
            Status::Pass
        };
        PropositionResult {
            proposition: self.proposition,
            instance: instance.to_string(),
            status,
            checked: self.checked,
            witness: self.witness,
        }
    }
}

struct Probes {
    xs: Vec<Point>,
    rs: Vec<f64>,
    pairs: Vec<(Point, Point)>,
    level_pairs: Vec<(f64, Point)>,
}

fn collect_probes(view: &dyn DistributionView, cfg: SuiteConfig) -> Probes {
    let sp = view.space();
    let breaks = view.breakpoints();
    let mut probe = Probe::new(cfg.seed);
    let mut xs = breaks.clone();
    for b in &breaks {
        xs.extend(sp.left_approach(b).last());
        xs.extend(sp.right_approach(b).last());
    }
    xs.extend(sp.dense_points().take(256));
    xs.extend((0..cfg.probes).map(|_| probe.point(sp, &breaks)));
    xs.sort();
    xs.dedup();

    let mut rs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    rs.extend((0..cfg.probes).map(|_| probe.level()));
    for x in &breaks {
        rs.push(view.f(x));
        rs.push(view.f_minus(x));
    }
    rs.retain(|r| (0.0..=1.0).contains(r));
    rs.sort_by(f64::total_cmp);
    rs.dedup();

    let pairs = (0..cfg.probes)
        .map(|_| {
            let (a, b) = (probe.point(sp, &xs), probe.point(sp, &xs));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    let level_pairs = (0..cfg.probes)
        .map(|_| {
            let r = if probe.coin() {
                rs[probe.index(rs.len())]
            } else {
                probe.level()
            };
            (r, probe.point(sp, &xs))
        })
        .collect();
    Probes {
        xs,
        rs,
        pairs,
        level_pairs,
    }
}

/// Checks every cdf and pseudo-inverse proposition that can be phrased
/// through a [`DistributionView`], against the view's own measure.
pub fn check_proposition_suite(
    view: &dyn DistributionView,
    instance: &str,
    cfg: SuiteConfig,
) -> SuiteReport {
    let sp = view.space();
    let spec = view.spec();
    let pr = collect_probes(view, cfg);
    let fmt = |x: &Point| sp.format_point(x);
    let fmt_opt = |x: &Option<Point>| x.as_ref().map_or("undefined".to_string(), |p| sp.format_point(p));
    let ray = |iv: Interval| IntervalUnion::from_interval(sp, iv).expect("probe points are elements");
    let density = spec.max_density();
    let mut results = Vec::new();
    let mut push = |c: Check| results.push(c.finish(instance));

    let mut c = Check::new("F is non-decreasing");
    for w in pr.xs.windows(2) {
        let (a, b) = (view.f(&w[0]), view.f(&w[1]));
        c.expect(a <= b, || format!("F({})={a} > F({})={b}", fmt(&w[0]), fmt(&w[1])));
    }
    push(c);

    let mut c = Check::new("F- is non-decreasing");
    for w in pr.xs.windows(2) {
        let (a, b) = (view.f_minus(&w[0]), view.f_minus(&w[1]));
        c.expect(a <= b, || format!("F-({})={a} > F-({})={b}", fmt(&w[0]), fmt(&w[1])));
    }
    push(c);

    let mut c = Check::new("F(x) = F-(x) + mu({x})");
    for x in &pr.xs {
        let (f, fm, m) = (view.f(x), view.f_minus(x), view.atom_mass(x));
        c.expect(f == fm + m && fm <= f, || {
            format!("x={}: F={f}, F-={fm}, mu({{x}})={m}", fmt(x))
        });
    }
    push(c);

    let mut c = Check::new("atom masses match the measure");
    for x in &pr.xs {
        let (m, truth) = (view.atom_mass(x), spec.point_mass(x));
        c.expect((m - truth).abs() <= TOL, || format!("x={}: {m} vs {truth}", fmt(x)));
    }
    push(c);

    let mut c = Check::new("F(x) = mu(<= x)");
    for x in &pr.xs {
        let (f, mu) = (view.f(x), spec.measure_of(&ray(Interval::at_most(*x))));
        c.expect((f - mu).abs() <= TOL, || format!("x={}: F={f}, mu={mu}", fmt(x)));
    }
    push(c);

    let mut c = Check::new("F-(x) = mu(< x)");
    for x in &pr.xs {
        let (f, mu) = (view.f_minus(x), spec.measure_of(&ray(Interval::below(*x))));
        c.expect((f - mu).abs() <= TOL, || format!("x={}: F-={f}, mu={mu}", fmt(x)));
    }
    push(c);

    type Formula = fn(&dyn DistributionView, &Point, &Point) -> f64;
    let formulas: [(&'static str, bool, bool, Formula); 4] = [
        ("mu(]a,b]) = F(b) - F(a)", false, true, |v, a, b| v.f(b) - v.f(a)),
        ("mu([a,b]) = F(b) - F-(a)", true, true, |v, a, b| v.f(b) - v.f_minus(a)),
        ("mu(]a,b[) = F-(b) - F(a)", false, false, |v, a, b| v.f_minus(b) - v.f(a)),
        ("mu([a,b[) = F-(b) - F-(a)", true, false, |v, a, b| v.f_minus(b) - v.f_minus(a)),
    ];
    for (name, lc, hc, formula) in formulas {
        let mut c = Check::new(name);
        for (a, b) in &pr.pairs {
            if a >= b {
                continue;
            }
            let iv = Interval::new((*a).into(), (*b).into(), lc, hc);
            let mu = spec.measure_of(&ray(iv));
            let v = formula(view, a, b);
            c.expect((v - mu).abs() <= TOL, || {
                format!("a={}, b={}: formula {v}, mu {mu}", fmt(a), fmt(b))
            });
        }
        push(c);
    }

    let mut c = Check::new("sup F(X) = 1");
    let top = sp.top_approach();
    let sup = top.iter().map(|x| view.f(x)).fold(0.0, f64::max);
    let tol = if sp.max().is_some() { TOL } else { 1e-9 };
    c.expect((sup - 1.0).abs() <= tol, || format!("sup over the top ladder is {sup}"));
    push(c);

    let mut c = Check::new("inf F(X) = 0");
    if sp.min().is_none() {
        let inf = sp
            .bottom_approach()
            .iter()
            .map(|x| view.f(x))
            .fold(1.0, f64::min);
        c.expect(inf <= 1e-9, || format!("inf over the bottom ladder is {inf}"));
    }
    push(c);

    let mut c = Check::new("F is right-continuous");
    for x in &pr.xs {
        for h in LADDER {
            let y = Point::raw(x.outer(), x.inner() + h);
            if !sp.contains(&y) || y <= *x || spec.atoms().iter().any(|a| *x < a.at && a.at <= y) {
                continue;
            }
            let (fx, fy) = (view.f(x), view.f(&y));
            c.expect((fy - fx).abs() <= density * h + TOL, || {
                format!("x={}, h={h}: F(x)={fx}, F(x+h)={fy}", fmt(x))
            });
        }
    }
    push(c);

    let mut c = Check::new("F(x-h) -> F-(x)");
    for x in &pr.xs {
        for h in LADDER {
            let y = Point::raw(x.outer(), x.inner() - h);
            if !sp.contains(&y) || y >= *x || spec.atoms().iter().any(|a| y < a.at && a.at < *x) {
                continue;
            }
            let (fm, fy) = (view.f_minus(x), view.f(&y));
            c.expect((fm - fy).abs() <= density * h + TOL, || {
                format!("x={}, h={h}: F-(x)={fm}, F(x-h)={fy}", fmt(x))
            });
        }
    }
    push(c);

    let mut c = Check::new("sup F(<x) = F-(x)");
    for x in &pr.xs {
        let below = sp.left_approach(x);
        if below.is_empty() {
            continue;
        }
        let sup = below.iter().map(|y| view.f(y)).fold(0.0, f64::max);
        let fm = view.f_minus(x);
        c.expect((sup - fm).abs() <= TOL, || format!("x={}: sup={sup}, F-={fm}", fmt(x)));
    }
    push(c);

    let mut c = Check::new("F(x) = inf F-(>x)");
    for x in &pr.xs {
        let above = sp.right_approach(x);
        if above.is_empty() {
            continue;
        }
        let inf = above.iter().map(|y| view.f_minus(y)).fold(1.0, f64::min);
        let f = view.f(x);
        c.expect((inf - f).abs() <= TOL, || format!("x={}: inf={inf}, F={f}", fmt(x)));
    }
    push(c);

    let mut c = Check::new("F jumps exactly at atoms");
    for x in &pr.xs {
        let jumps = view.f(x) > view.f_minus(x);
        let atom = spec.point_mass(x) > 0.0;
        c.expect(jumps == atom, || format!("x={}: jump {jumps}, atom {atom}", fmt(x)));
    }
    push(c);

    // ---- pseudo-inverse ----

    let gs: Vec<(f64, Option<Point>)> = pr.rs.iter().map(|&r| (r, view.quantile(r))).collect();

    let mut c = Check::new("G is non-decreasing");
    let defined: Vec<(f64, Point)> = gs.iter().filter_map(|&(r, g)| g.map(|g| (r, g))).collect();
    for w in defined.windows(2) {
        c.expect(w[0].1 <= w[1].1, || {
            format!("G({})={} > G({})={}", w[0].0, fmt(&w[0].1), w[1].0, fmt(&w[1].1))
        });
    }
    push(c);

    let mut c = Check::new("G(F(x)) <= x");
    for x in &pr.xs {
        if let Some(g) = view.quantile(view.f(x)) {
            c.expect(g <= *x, || format!("x={}: G(F(x))={}", fmt(x), fmt(&g)));
        }
    }
    push(c);

    let mut c = Check::new("F(G(r)) >= r");
    for &(r, g) in &defined {
        let f = view.f(&g);
        c.expect(f >= r, || format!("r={r}: G(r)={}, F(G(r))={f}", fmt(&g)));
    }
    push(c);

    let mut c = Check::new("G(r) <= x iff r <= F(x)");
    for &(r, x) in &pr.level_pairs {
        if let Some(g) = view.quantile(r) {
            c.expect((g <= x) == (r <= view.f(&x)), || {
                format!("r={r}, x={}: G(r)={}, F(x)={}", fmt(&x), fmt(&g), view.f(&x))
            });
        }
    }
    push(c);

    let mut c = Check::new("F(x) < r iff G(r) > x");
    for &(r, x) in &pr.level_pairs {
        if let Some(g) = view.quantile(r) {
            c.expect((view.f(&x) < r) == (g > x), || {
                format!("r={r}, x={}: G(r)={}, F(x)={}", fmt(&x), fmt(&g), view.f(&x))
            });
        }
    }
    push(c);

    let mut c = Check::new("F-(x) < r <= F(x) implies G(r) = x");
    for x in &pr.xs {
        let (lo, hi) = (view.f_minus(x), view.f(x));
        if lo >= hi {
            continue;
        }
        for r in [hi, 0.5 * (lo + hi), lo + (hi - lo) * 1e-9] {
            if lo < r && r <= hi {
                let g = view.quantile(r);
                c.expect(g == Some(*x), || format!("x={}, r={r}: G(r)={}", fmt(x), fmt_opt(&g)));
            }
        }
    }
    for &(r, x) in &pr.level_pairs {
        if view.f_minus(&x) < r && r <= view.f(&x) {
            let g = view.quantile(r);
            c.expect(g == Some(x), || format!("x={}, r={r}: G(r)={}", fmt(&x), fmt_opt(&g)));
        }
    }
    push(c);

    let mut c = Check::new("r < F-(x) implies G(r) < x");
    for &(r, x) in &pr.level_pairs {
        if r < view.f_minus(&x) {
            if let Some(g) = view.quantile(r) {
                c.expect(g < x, || format!("x={}, r={r}: G(r)={}", fmt(&x), fmt(&g)));
            }
        }
    }
    push(c);

    let mut c = Check::new("r = F-(x) implies G(r) <= x");
    for x in &pr.xs {
        if let Some(g) = view.quantile(view.f_minus(x)) {
            c.expect(g <= *x, || format!("x={}: G(F-(x))={}", fmt(x), fmt(&g)));
        }
    }
    push(c);

    let mut c = Check::new("G(r) = x implies F-(x) <= r <= F(x)");
    for &(r, g) in &defined {
        let (lo, hi) = (view.f_minus(&g), view.f(&g));
        c.expect(lo <= r + TOL && r <= hi, || format!("r={r}: G(r)={}, F-={lo}, F={hi}", fmt(&g)));
    }
    push(c);

    let mut c = Check::new("F(G(r)) > r implies mu({G(r)}) > 0");
    for &(r, g) in &defined {
        if view.f(&g) > r + TOL {
            c.expect(spec.point_mass(&g) > 0.0, || format!("r={r}: G(r)={}", fmt(&g)));
        }
    }
    push(c);

    let mut c = Check::new("G is left-continuous");
    for &(r, g) in &defined {
        for h in LADDER {
            let rn = r - h;
            if rn < 0.0 {
                continue;
            }
            let Some(gn) = view.quantile(rn) else {
                continue;
            };
            if spec.point_mass(&g) > 0.0 && rn > view.f_minus(&g) {
                c.expect(gn == g, || format!("r={r}, h={h}: G(r)={}, G(r-h)={}", fmt(&g), fmt(&gn)));
                continue;
            }
            let Some(seg) = spec.segments().iter().find(|s| {
                s.block == g.outer()
                    && gn.outer() == g.outer()
                    && s.lo <= gn.inner()
                    && g.inner() <= s.hi
            }) else {
                continue;
            };
            if spec
                .atoms()
                .iter()
                .any(|a| gn < a.at && a.at < g)
            {
                continue;
            }
            let bound = h / seg.density() + TOL * g.inner().abs().max(1.0);
            c.expect(g.inner() - gn.inner() <= bound, || {
                format!("r={r}, h={h}: G(r)={}, G(r-h)={}", fmt(&g), fmt(&gn))
            });
        }
    }
    push(c);

    let mut c = Check::new("G injective iff no atoms");
    let collision = defined.windows(2).find(|w| w[0].1 == w[1].1 && w[1].0 > w[0].0);
    let atoms = !spec.atoms().is_empty();
    c.expect(collision.is_some() == atoms, || match collision {
        Some(w) => format!("G({})=G({})={} without atoms", w[0].0, w[1].0, fmt(&w[0].1)),
        None => "atoms present but no collision among probes".into(),
    });
    push(c);

    SuiteReport { results }
}

/// Propositions that need the concrete operations of [`PseudoInverse`]:
/// the independent sup/inf scans, preimages, pushforward, injectivity,
/// bijectivity, grid inversion and uniqueness.
pub fn check_structural_suite(gi: &PseudoInverse, instance: &str, cfg: SuiteConfig) -> SuiteReport {
    let sp = gi.space();
    let cdf = gi.cdf();
    let spec = cdf.spec();
    let pr = collect_probes(gi, cfg);
    let fmt = |x: &Point| sp.format_point(x);
    let mut results = Vec::new();
    let mut push = |c: Check| results.push(c.finish(instance));

    let mut c = Check::new("sup_F_below equals F-");
    for x in &pr.xs {
        if let Ok(s) = cdf.sup_f_below(x) {
            let fm = cdf.level(x, true);
            c.expect((s - fm).abs() <= TOL, || format!("x={}: scan {s}, F- {fm}", fmt(x)));
        }
    }
    push(c);

    let mut c = Check::new("inf_Fminus_above equals F");
    for x in &pr.xs {
        if let Ok(s) = cdf.inf_f_minus_above(x) {
            let f = cdf.level(x, false);
            c.expect((s - f).abs() <= TOL, || format!("x={}: scan {s}, F {f}", fmt(x)));
        }
    }
    push(c);

    let mut c = Check::new("interval_measure matches mu");
    let mut probe = Probe::new(cfg.seed ^ 0x1);
    for _ in 0..cfg.probes {
        let iv = probe.interval(sp, &pr.xs);
        let truth = spec.measure_of(&IntervalUnion::from_interval(sp, iv).expect("elements"));
        let v = cdf.interval_measure(&iv).expect("elements");
        c.expect((v - truth).abs() <= TOL, || format!("{}: {v} vs {truth}", iv.format(sp)));
    }
    push(c);

    let mut c = Check::new("G^-1(]a,b[) = ]F(a), F-(b)| has length mu(]a,b[)");
    for (a, b) in &pr.pairs {
        if a >= b {
            continue;
        }
        let pre = gi
            .preimage_open_interval((*a).into(), (*b).into())
            .expect("a < b");
        let iv = Interval::open(*a, *b);
        let mu = spec.measure_of(&IntervalUnion::from_interval(sp, iv).expect("elements"));
        let end_ok = pre.is_empty()
            || gi
                .eval_g(pre.hi)
                .ok()
                .and_then(|q| q.point())
                .map(|g| *a < g && g < *b)
                .unwrap_or(false)
                == pre.hi_closed;
        c.expect((pre.length() - mu).abs() <= TOL && end_ok, || {
            format!("]{},{}[: preimage {pre}, mu {mu}", fmt(a), fmt(b))
        });
    }
    push(c);

    let mut c = Check::new("mu(A) = l(G^-1(A))");
    if gi.domain().is_full() {
        for _ in 0..cfg.probes.min(1000) {
            let u = probe.union(sp, &pr.xs);
            let (mu, len) = pushforward_check(gi, &u).expect("complete space");
            c.expect((mu - len).abs() <= 1e-9, || format!("{}: mu {mu}, length {len}", u.format(sp)));
        }
    }
    push(c);

    let mut c = Check::new("F injective iff mu(]a,b]) > 0 for all a < b");
    let (inj, witness) = gi.is_f_injective();
    match witness {
        Some(w) => {
            let null = spec.measure_of(&IntervalUnion::from_interval(sp, w).expect("elements"));
            c.expect(!inj && null == 0.0, || format!("{} has mass {null}", w.format(sp)));
        }
        None => {
            c.expect(inj, || "non-injective without a witness".into());
            // neighbours closer than this carry mass below the float range
            for w in pr.xs.windows(2).filter(|w| w[0].outer() != w[1].outer() || w[1].inner() - w[0].inner() > 1e-9) {
                let u = IntervalUnion::from_interval(sp, Interval::left_open(w[0], w[1])).expect("elements");
                let (fa, fb) = (cdf.level(&w[0], false), cdf.level(&w[1], false));
                c.expect(spec.measure_of(&u) > 0.0 && fa < fb, || {
                    format!("]{},{}] is null yet F was judged injective", fmt(&w[0]), fmt(&w[1]))
                });
            }
        }
    }
    push(c);

    let mut c = Check::new("the four bijectivity conditions agree");
    let report = gi.bijectivity_report();
    c.expect(report.consistent(), || format!("conditions {:?}", report.conditions()));
    push(c);

    let mut c = Check::new("grid inversion agrees with G");
    for &r in pr.rs.iter().step_by((pr.rs.len() / 200).max(1)) {
        let Ok(grid) = grid_invert(cdf, r, GRID_RESOLUTION) else {
            continue;
        };
        let Some(g) = gi.eval_g(r).ok().and_then(|q| q.point()) else {
            continue;
        };
        let step = sp
            .fiber(g.outer())
            .map_or(0.0, |f| (f.hi - f.lo) / ((f.hi - f.lo) / GRID_RESOLUTION).ceil().max(2.0));
        let ok = grid == g
            || (grid.outer() == g.outer() && (grid.inner() - g.inner()).abs() <= step * (1.0 + 1e-9));
        c.expect(ok, || format!("r={r}: grid {}, G {}", fmt(&grid), fmt(&g)));
    }
    push(c);

    let mut c = Check::new("the measure is determined by F");
    let same = Cdf::new(spec.clone());
    let verdict = cdf.measure_uniqueness_check(&same).expect("same space");
    c.expect(verdict.is_equal(), || format!("{verdict:?}"));
    let dense = cdf.cdfs_equal_on_dense(&same, 1024).expect("same space");
    c.expect(dense.is_indistinguishable(), || format!("{dense:?}"));
    push(c);

    SuiteReport { results }
}

/// Both suites on one instance.
pub fn check_instance(gi: &PseudoInverse, instance: &str, cfg: SuiteConfig) -> SuiteReport {
    let mut report = check_proposition_suite(gi, instance, cfg);
    report
        .results
        .extend(check_structural_suite(gi, instance, cfg).results);
    report
}

impl PropositionResult {
    /// One JSON object, without external dependencies.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{{\"proposition\":{},\"instance\":{},\"status\":\"{}\",\"checked\":{}",
            json_string(self.proposition),
            json_string(&self.instance),
            self.status.as_str(),
            self.checked
        );
        if let Some(w) = &self.witness {
            let _ = write!(s, ",\"witness\":{}", json_string(w));
        }
        s.push('}');
        s
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::measure::Atom;

    fn two_point() -> FiniteCase {
        let sp = OrderedSpace::finite(&["a", "b"]).unwrap();
        let atoms = vec![
            Atom { at: sp.label("a").unwrap(), mass: 0.4 },
            Atom { at: sp.label("b").unwrap(), mass: 0.6 },
        ];
        FiniteCase::new(MeasureSpec::new(sp, atoms, vec![]).unwrap()).unwrap()
    }

    #[test]
    fn subset_table() {
        let case = two_point();
        let table = case.enumerate_subset_measures();
        assert_eq!(table.len(), 4);
        assert_eq!(table[0], (0, 0.0));
        assert_eq!(table[3].1, 1.0);

        let three = FiniteCase::new(instances::spec("three-atom").unwrap()).unwrap();
        assert!((three.subset_measure(0b101) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn size_cap() {
        let labels: Vec<String> = (0..9).map(|i| format!("p{i}")).collect();
        let sp = OrderedSpace::finite(&labels).unwrap();
        let atoms = vec![Atom { at: sp.label("p0").unwrap(), mass: 1.0 }];
        let spec = MeasureSpec::new(sp, atoms, vec![]).unwrap();
        assert!(matches!(FiniteCase::new(spec), Err(Error::SizeCap(_))));
        assert!(FiniteCase::new(instances::spec("uniform").unwrap()).is_err());
    }

    #[test]
    fn grid_inversion_examples() {
        let u = instances::pseudo_inverse("uniform").unwrap();
        let p = grid_invert(u.cdf(), 0.5, GRID_RESOLUTION).unwrap();
        assert!((p.inner() - 0.5).abs() <= 1e-6);
        assert_eq!(grid_invert(u.cdf(), 1.0, GRID_RESOLUTION).unwrap().inner(), 1.0);

        let m = instances::pseudo_inverse("mixed").unwrap();
        assert_eq!(grid_invert(m.cdf(), 0.6, GRID_RESOLUTION).unwrap().inner(), 0.5);
        assert!(grid_invert(m.cdf(), 0.6, 1e-7).is_err());

        let lg = instances::pseudo_inverse("lex-gap").unwrap();
        let p = grid_invert(lg.cdf(), 0.75, GRID_RESOLUTION).unwrap();
        assert_eq!(p.outer(), 1);
        assert!((p.inner() - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn json_escaping() {
        let r = PropositionResult {
            proposition: "F(x) = F-(x) + mu({x})",
            instance: "a\"b".into(),
            status: Status::Fail,
            checked: 3,
            witness: Some("x=\\".into()),
        };
        assert_eq!(
            r.to_json(),
            r#"{"proposition":"F(x) = F-(x) + mu({x})","instance":"a\"b","status":"fail","checked":3,"witness":"x=\\"}"#
        );
    }
}
