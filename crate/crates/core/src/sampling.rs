//! Inverse-transform sampling and quadrature through the pseudo-inverse.

use rand_core::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::cdf::{Cdf, Piece};
use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::order::{Cut, Point};
use crate::probe::unit_draw;
use crate::quantile::PseudoInverse;

/// Identifier of the generator and draw scheme, recorded in sample output.
pub const RNG_ID: &str = "xoshiro256++/splitmix64-seeded/53-bit-uniform";

/// Smallest draw; a raw draw of exactly zero is replaced by it.
const MIN_DRAW: f64 = 1.0 / (1u64 << 53) as f64;

fn require_complete(gi: &PseudoInverse, what: &str) -> Result<()> {
    if gi.domain().is_full() {
        return Ok(());
    }
    let levels: Vec<String> = gi.domain().excluded.iter().map(|r| r.to_string()).collect();
    Err(Error::UnsupportedSpace(format!(
        "{what} needs a complete space; G is undefined at levels {{{}}}",
        levels.join(", ")
    )))
}

/// Seeded inverse-transform sampler. Equal seeds over equal measures give
/// bit-identical streams.
#[derive(Debug, Clone)]
pub struct SamplerState<'a> {
    gi: &'a PseudoInverse,
    seed: u64,
    rng: Xoshiro256PlusPlus,
    draws: u64,
}

impl<'a> SamplerState<'a> {
    /// Fails with [`Error::UnsupportedSpace`] when `G` is not total.
    pub fn new(gi: &'a PseudoInverse, seed: u64) -> Result<Self> {
        require_complete(gi, "sampling")?;
        Ok(Self {
            gi,
            seed,
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            draws: 0,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Next uniform level in `(0, 1)`.
    pub fn next_level(&mut self) -> f64 {
        self.draws += 1;
        let u = unit_draw(&mut self.rng);
        if u == 0.0 {
            MIN_DRAW
        } else {
            u
        }
    }

    pub fn next_point(&mut self) -> Point {
        let u = self.next_level();
        self.gi
            .eval_g(u)
            .ok()
            .and_then(|q| q.point())
            .expect("G is total on complete spaces")
    }

    pub fn sample(&mut self, n: usize) -> Vec<Point> {
        (0..n).map(|_| self.next_point()).collect()
    }
}

/// `(μ(u), length of G⁻¹(u))`, which agree by the pushforward identity.
pub fn pushforward_check(gi: &PseudoInverse, u: &IntervalUnion) -> Result<(f64, f64)> {
    require_complete(gi, "the pushforward identity")?;
    Ok((gi.cdf().spec().measure_of(u), gi.preimage_length(u)?))
}

/// A real function on the space. Breakpoints are points where it may jump;
/// quadrature cells never straddle them.
pub trait Integrand {
    fn eval(&self, x: &Point) -> std::result::Result<f64, String>;

    fn breakpoints(&self) -> Vec<Point> {
        Vec::new()
    }
}

impl<F: Fn(&Point) -> f64> Integrand for F {
    fn eval(&self, x: &Point) -> std::result::Result<f64, String> {
        let v = self(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value {v}"))
        }
    }
}

/// Indicator function of an interval union.
#[derive(Debug, Clone)]
pub struct Indicator(pub IntervalUnion);

impl Integrand for Indicator {
    fn eval(&self, x: &Point) -> std::result::Result<f64, String> {
        Ok(if self.0.contains(x) { 1.0 } else { 0.0 })
    }

    fn breakpoints(&self) -> Vec<Point> {
        self.0
            .pieces()
            .iter()
            .flat_map(|&(lo, hi)| [lo, hi])
            .filter_map(|c| match c {
                Cut::Before(p) | Cut::After(p) => Some(p),
                _ => None,
            })
            .collect()
    }
}

/// Composite midpoint rule with `subdivisions` cells per affine piece of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(subdivisions: usize) -> Result<Self> {
        if subdivisions == 0 {
            return Err(Error::Domain("quadrature needs at least one subdivision".into()));
        }
        Ok(Self { subdivisions })
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }
}

/// `∫ g dμ = ∫₀¹ g(G(t)) dt`: atoms contribute `mass · g(atom)` exactly; each
/// spread piece of `G`, further split at the integrand's breakpoints, gets
/// the midpoint rule in `t`.
pub fn integrate(gi: &PseudoInverse, g: &dyn Integrand, quad: QuadratureSpec) -> Result<f64> {
    require_complete(gi, "integration")?;
    let cdf = gi.cdf();
    let at = |x: &Point| {
        g.eval(x).map_err(|reason| Error::Integrand {
            point: gi.space().format_point(x),
            reason,
        })
    };
    let breaks = g.breakpoints();
    let cum = cdf.cumulative();
    let mut total = 0.0;
    for (j, piece) in cdf.pieces().iter().enumerate() {
        match *piece {
            Piece::Atom { at: x, mass } => total += mass * at(&x)?,
            Piece::Spread { block, lo, hi, .. } => {
                let mut knots = vec![cum[j]];
                knots.extend(spread_knots(cdf, &breaks, block, lo, hi));
                knots.push(cum[j + 1]);
                for w in knots.windows(2) {
                    total += midpoint(gi, &at, w[0], w[1], quad.subdivisions)?;
                }
            }
        }
    }
    Ok(total)
}

/// Levels of the breakpoints strictly inside a spread piece, ascending.
fn spread_knots(cdf: &Cdf, breaks: &[Point], block: i64, lo: f64, hi: f64) -> Vec<f64> {
    let mut ts: Vec<f64> = breaks
        .iter()
        .filter(|p| p.outer() == block && lo < p.inner() && p.inner() < hi)
        .map(|p| cdf.level(p, false))
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

fn midpoint(
    gi: &PseudoInverse,
    at: &dyn Fn(&Point) -> Result<f64>,
    a: f64,
    b: f64,
    n: usize,
) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let h = (b - a) / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let t = a + (i as f64 + 0.5) * h;
        let x = gi
            .eval_g(t)?
            .point()
            .ok_or_else(|| Error::Domain(format!("G undefined at level {t}")))?;
        sum += at(&x)?;
    }
    Ok(sum * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Atom, DensitySegment, MeasureSpec};
    use crate::order::OrderedSpace;

    fn unit() -> OrderedSpace {
        OrderedSpace::real_interval(0.0, 1.0, true, true).unwrap()
    }

    fn build(sp: OrderedSpace, atoms: Vec<Atom>, segs: Vec<DensitySegment>) -> PseudoInverse {
        PseudoInverse::new(Cdf::new(MeasureSpec::new(sp, atoms, segs).unwrap()))
    }

    fn mixed() -> PseudoInverse {
        let s = unit();
        let atom = Atom { at: s.real(0.5).unwrap(), mass: 0.5 };
        build(s, vec![atom], vec![DensitySegment::real(0.0, 1.0, 0.5)])
    }

    fn three_atom() -> PseudoInverse {
        let s = OrderedSpace::finite(&["a", "b", "c"]).unwrap();
        let at = |l: &str| s.label(l).unwrap();
        let atoms = vec![
            Atom { at: at("a"), mass: 0.2 },
            Atom { at: at("b"), mass: 0.3 },
            Atom { at: at("c"), mass: 0.5 },
        ];
        build(s.clone(), atoms, vec![])
    }

    #[test]
    fn streams_are_reproducible() {
        let gi = mixed();
        let a = SamplerState::new(&gi, 7).unwrap().sample(100);
        let b = SamplerState::new(&gi, 7).unwrap().sample(100);
        let c = SamplerState::new(&gi, 8).unwrap().sample(100);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(SamplerState::new(&gi, 1).unwrap().sample(0).is_empty());
    }

    #[test]
    fn incomplete_space_is_refused() {
        let sp = OrderedSpace::real_interval(0.0, 1.0, false, false).unwrap();
        let gi = build(sp, vec![], vec![DensitySegment::real(0.0, 1.0, 1.0)]);
        assert!(matches!(SamplerState::new(&gi, 1), Err(Error::UnsupportedSpace(_))));
    }

    #[test]
    fn pushforward_examples() {
        let m = mixed();
        let u = IntervalUnion::parse(m.space(), "[0.5,0.5]").unwrap();
        assert_eq!(pushforward_check(&m, &u).unwrap(), (0.5, 0.5));

        let f = three_atom();
        let sp = f.space().clone();
        let u = IntervalUnion::from_points(&sp, &[sp.label("a").unwrap(), sp.label("c").unwrap()]).unwrap();
        let (mu, len) = pushforward_check(&f, &u).unwrap();
        assert!((mu - 0.7).abs() < 1e-12 && (len - 0.7).abs() < 1e-12);
    }

    #[test]
    fn integration_examples() {
        let quad = QuadratureSpec::new(10_000).unwrap();
        let coord = |x: &Point| x.inner();
        let m = mixed();
        assert!((integrate(&m, &coord, quad).unwrap() - 0.5).abs() < 1e-8);

        let f = three_atom();
        let sp = f.space().clone();
        let ge_b = Indicator(IntervalUnion::parse(&sp, "[b,c]").unwrap());
        assert_eq!(integrate(&f, &ge_b, quad).unwrap(), 0.8);

        let failing = |_: &Point| f64::NAN;
        assert!(matches!(integrate(&m, &failing, quad), Err(Error::Integrand { .. })));
        assert!(QuadratureSpec::new(0).is_err());
    }

    #[test]
    fn indicator_cells_do_not_straddle_jumps() {
        let m = mixed();
        let u = IntervalUnion::parse(m.space(), "(0.1,0.3],[0.5,0.7)").unwrap();
        let quad = QuadratureSpec::new(3).unwrap();
        let v = integrate(&m, &Indicator(u.clone()), quad).unwrap();
        assert!((v - m.cdf().spec().measure_of(&u)).abs() < 1e-12);
    }
}
