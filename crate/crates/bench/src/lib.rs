//! Shared fixtures for the benchmarks.

use ordcdf::probe::Probe;
use ordcdf::{instances, Atom, Cdf, DensitySegment, IntervalUnion, MeasureSpec, OrderedSpace, Point, PseudoInverse};

/// A shipped instance by name.
pub fn instance(name: &str) -> PseudoInverse {
    instances::pseudo_inverse(name).expect("shipped instance")
}

/// `[0,1]` cut into `pieces` equal segments with an atom at every inner cut,
/// half the mass on the atoms.
pub fn many_pieces(pieces: usize) -> PseudoInverse {
    let sp = OrderedSpace::real_interval(0.0, 1.0, true, true).expect("unit interval");
    let step = 1.0 / pieces as f64;
    let segs = (0..pieces)
        .map(|i| DensitySegment::real(i as f64 * step, (i + 1) as f64 * step, 0.5 / pieces as f64))
        .collect();
    let atoms = (1..pieces)
        .map(|i| Atom {
            at: sp.real(i as f64 * step).expect("inner cut"),
            mass: 0.5 / (pieces - 1) as f64,
        })
        .collect();
    let spec = MeasureSpec::new(sp, atoms, segs).expect("valid measure");
    PseudoInverse::new(Cdf::new(spec))
}

/// Seeded points, biased towards the breakpoints.
pub fn points(gi: &PseudoInverse, n: usize, seed: u64) -> Vec<Point> {
    let anchors = gi.cdf().breakpoints();
    let mut probe = Probe::new(seed);
    (0..n).map(|_| probe.point(gi.space(), &anchors)).collect()
}

pub fn levels(n: usize, seed: u64) -> Vec<f64> {
    let mut probe = Probe::new(seed);
    (0..n).map(|_| probe.unit()).collect()
}

pub fn unions(gi: &PseudoInverse, n: usize, seed: u64) -> Vec<IntervalUnion> {
    let anchors = gi.cdf().breakpoints();
    let mut probe = Probe::new(seed);
    (0..n).map(|_| probe.union(gi.space(), &anchors)).collect()
}
