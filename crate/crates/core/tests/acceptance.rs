//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Expected values come from independent computations in this file (power-set
//! sums, closed-form moments, direct counts), never from the routine under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use ordcdf::oracle::FiniteCase;
use ordcdf::probe::Probe;
use ordcdf::{
    instances, integrate, pushforward_check, Atom, Cdf, DensitySegment, ExtendedPoint, Indicator,
    IntervalUnion, MeasureSpec, OrderedSpace, Point, PseudoInverse, QuadratureSpec, SamplerState,
    Uniqueness,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 exhaustive finite oracle", finite_oracle),
        ("2 Galois adjunction", galois),
        ("3 sandwich and jump identities", sandwich_and_jumps),
        ("4 pushforward", pushforward),
        ("5 sampling consistency", sampling),
        ("6 integration identity", integration),
        ("7 injectivity and bijectivity", injectivity),
        ("8 continuity ladders", continuity),
        ("9 uniqueness", uniqueness),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_text(&e))));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!(
        "acceptance: {} of 9 passed in {:.2}s",
        9 - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn gi(name: &str) -> PseudoInverse {
    instances::pseudo_inverse(name).expect("shipped instance")
}

fn g_point(gi: &PseudoInverse, r: f64) -> Option<Point> {
    gi.eval_g(r).ok().and_then(|q| q.point())
}

fn complete_instances() -> Vec<&'static str> {
    instances::ALL
        .into_iter()
        .filter(|n| gi(n).space().is_complete())
        .collect()
}

fn real_segment_instances() -> Vec<&'static str> {
    instances::ALL
        .into_iter()
        .filter(|n| !instances::spec(n).unwrap().segments().is_empty())
        .collect()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn finite_oracle() -> Outcome {
    let mut probe = Probe::new(0xacce_0001);
    let (mut intervals, mut worst) = (0usize, 0.0f64);
    let mut patterns = [0usize; 4];
    for n in 2..=8usize {
        let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let sp = OrderedSpace::finite(&labels).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let mut weights: Vec<f64> = (0..n)
                .map(|_| if probe.index(3) == 0 { 0.0 } else { 0.05 + probe.unit() })
                .collect();
            if weights.iter().all(|&w| w == 0.0) {
                weights[probe.index(n)] = 1.0;
            }
            let total: f64 = weights.iter().sum();
            let atoms = labels
                .iter()
                .zip(&weights)
                .filter(|(_, &w)| w > 0.0)
                .map(|(l, &w)| Atom { at: sp.label(l).unwrap(), mass: w / total })
                .collect();
            let spec = MeasureSpec::new(sp.clone(), atoms, vec![]).map_err(|e| e.to_string())?;
            let case = FiniteCase::new(spec.clone()).map_err(|e| e.to_string())?;
            let table = case.enumerate_subset_measures();
            if table.len() != 1 << n {
                return Err(format!("power-set table has {} rows for n={n}", table.len()));
            }
            let cdf = Cdf::new(spec);
            for iv in case.all_intervals() {
                let mask = case
                    .points()
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| iv.contains(p))
                    .fold(0u32, |m, (i, _)| m | 1 << i);
                let expected = table[mask as usize].1;
                let got = cdf.interval_measure(&iv).map_err(|e| e.to_string())?;
                let err = (got - expected).abs();
                worst = worst.max(err);
                if err > 1e-12 {
                    return Err(format!(
                        "n={n} interval {}: got {got}, power set {expected}",
                        iv.format(&sp)
                    ));
                }
                intervals += 1;
                patterns[iv.lo_closed as usize * 2 + iv.hi_closed as usize] += 1;
            }
        }
    }
    ensure(
        patterns.iter().all(|&c| c > 0),
        format!(
            "{intervals} intervals over 350 measures, worst error {worst:e}; \
             ]a,b] {} / ]a,b[ {} / [a,b[ {} / [a,b] {}",
            patterns[1], patterns[0], patterns[2], patterns[3]
        ),
    )
}

fn galois() -> Outcome {
    let mut parts = Vec::new();
    for name in instances::CORE {
        let gi = gi(name);
        let anchors = gi.cdf().breakpoints();
        let mut probe = Probe::new(0xacce_0002);
        let mut violations = 0;
        let mut first = None;
        for _ in 0..10_000 {
            let r = probe.level();
            let x = probe.point(gi.space(), &anchors);
            let g = g_point(&gi, r).ok_or(format!("{name}: G undefined at {r}"))?;
            let f = gi.cdf().eval_f(&x).map_err(|e| e.to_string())?;
            if (g <= x) != (r <= f) {
                violations += 1;
                first.get_or_insert(format!("r={r} x={}", gi.space().format_point(&x)));
            }
        }
        if violations > 0 {
            return Err(format!("{name}: {violations} violations, first {}", first.unwrap()));
        }
        parts.push(format!("{name} 0/10000"));
    }
    Ok(parts.join(", "))
}

fn sandwich_and_jumps() -> Outcome {
    let mut parts = Vec::new();
    let mut failures = Vec::new();
    for name in instances::CORE {
        let gi = gi(name);
        let cdf = gi.cdf();
        let mut probe = Probe::new(0xacce_0003);
        let (mut below, mut above, mut overshoot) = (0, 0, 0.0f64);
        for _ in 0..10_000 {
            let r = probe.level();
            let g = g_point(&gi, r).ok_or(format!("{name}: G undefined at {r}"))?;
            let fm = cdf.eval_f_minus(&g).map_err(|e| e.to_string())?;
            let f = cdf.eval_f(&g).map_err(|e| e.to_string())?;
            if fm > r {
                below += 1;
                overshoot = overshoot.max(fm - r);
            }
            if r > f {
                above += 1;
            }
        }
        let mut jumps = 0;
        for x in cdf.breakpoints() {
            let (f, fm) = (cdf.eval_f(&x).unwrap(), cdf.eval_f_minus(&x).unwrap());
            let mass = gi.cdf().spec().point_mass(&x);
            if f != fm + mass {
                failures.push(format!(
                    "{name}: F={f} but F-={fm} plus mass {mass} at {}",
                    gi.space().format_point(&x)
                ));
            }
            jumps += 1;
        }
        if below + above > 0 {
            failures.push(format!(
                "{name}: F-(G(r)) > r on {below}/10000 (largest excess {overshoot:e}), \
                 r > F(G(r)) on {above}/10000"
            ));
        }
        parts.push(format!("{name} sandwich {}/10000 jumps {jumps}", 10_000 - below.max(above)));
    }
    if failures.is_empty() {
        Ok(parts.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

fn pushforward() -> Outcome {
    let mut parts = Vec::new();
    for name in complete_instances() {
        let gi = gi(name);
        let anchors = gi.cdf().breakpoints();
        let mut probe = Probe::new(0xacce_0004);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let u = probe.union(gi.space(), &anchors);
            let (mu, len) = pushforward_check(&gi, &u).map_err(|e| e.to_string())?;
            worst = worst.max((mu - len).abs());
            if (mu - len).abs() > 1e-9 {
                return Err(format!("{name}: mu={mu} length={len} on {}", u.format(gi.space())));
            }
        }
        parts.push(format!("{name} worst {worst:.1e}"));
    }
    Ok(format!("1000 unions each: {}", parts.join(", ")))
}

fn sampling() -> Outcome {
    const N: usize = 100_000;
    let eps = ((2.0f64 / 0.01).ln() / (2.0 * N as f64)).sqrt();
    let mut parts = Vec::new();
    for name in complete_instances() {
        let gi = gi(name);
        let cdf = gi.cdf();
        let t = Instant::now();
        let mut draws = SamplerState::new(&gi, 42).map_err(|e| e.to_string())?.sample(N);
        let secs = t.elapsed().as_secs_f64();
        if secs >= 5.0 {
            return Err(format!("{name}: {N} draws took {secs:.2}s"));
        }
        draws.sort();
        let ecdf = |x: &Point| draws.partition_point(|d| d <= x) as f64 / N as f64;

        let mut atom_err = 0.0f64;
        for a in cdf.spec().atoms() {
            let hits = draws.iter().filter(|d| **d == a.at).count() as f64 / N as f64;
            atom_err = atom_err.max((hits - a.mass).abs());
            if (hits - a.mass).abs() > 0.01 {
                return Err(format!(
                    "{name}: atom {} frequency {hits} vs mass {}",
                    gi.space().format_point(&a.at),
                    a.mass
                ));
            }
        }

        let mut checkpoints = cdf.breakpoints();
        for k in 1..=20 {
            checkpoints.extend(g_point(&gi, k as f64 / 21.0));
        }
        checkpoints.sort();
        checkpoints.dedup();
        checkpoints.truncate(20);
        let mut dkw = 0.0f64;
        for x in &checkpoints {
            let d = (ecdf(x) - cdf.eval_f(x).unwrap()).abs();
            dkw = dkw.max(d);
            if d > eps {
                return Err(format!(
                    "{name}: |Fn - F| = {d} > {eps} at {}",
                    gi.space().format_point(x)
                ));
            }
        }
        parts.push(format!(
            "{name} atoms {atom_err:.4} dkw {dkw:.4} over {} points in {secs:.2}s",
            checkpoints.len()
        ));
    }
    Ok(format!("n={N} seed=42 eps={eps:.5}: {}", parts.join(", ")))
}

fn coordinate(sp: &OrderedSpace, x: &Point) -> f64 {
    if sp.has_fibers() {
        x.inner()
    } else {
        x.outer() as f64
    }
}

/// `∫ x dμ` in closed form: atoms at their coordinate, segments at their midpoint.
fn closed_form_mean(spec: &MeasureSpec) -> f64 {
    let sp = spec.space();
    let atoms: f64 = spec.atoms().iter().map(|a| a.mass * coordinate(sp, &a.at)).sum();
    let segs: f64 = spec.segments().iter().map(|s| s.mass * 0.5 * (s.lo + s.hi)).sum();
    atoms + segs
}

fn integration() -> Outcome {
    let quad = QuadratureSpec::new(10_000).unwrap();
    // indicators are piecewise constant in t, so cell count does not matter
    let coarse = QuadratureSpec::new(16).unwrap();
    let mut parts = Vec::new();
    for name in ["uniform", "mixed", "three-atom"] {
        let gi = gi(name);
        let sp = gi.space().clone();
        let spec = gi.cdf().spec().clone();
        let atomic = spec.segments().is_empty();
        let g = |x: &Point| coordinate(&sp, x);
        let mean = integrate(&gi, &g, quad).map_err(|e| e.to_string())?;
        let expected = closed_form_mean(&spec);
        let tol = if atomic { 0.0 } else { 1e-8 };
        if (mean - expected).abs() > tol {
            return Err(format!("{name}: integral of x = {mean}, closed form {expected}"));
        }

        let case = atomic.then(|| FiniteCase::new(spec.clone()).unwrap());
        let anchors = gi.cdf().breakpoints();
        let mut probe = Probe::new(0xacce_0006);
        let mut worst = 0.0f64;
        for _ in 0..500 {
            let u = probe.union(&sp, &anchors);
            let got = integrate(&gi, &Indicator(u.clone()), coarse).map_err(|e| e.to_string())?;
            let expected = match &case {
                Some(c) => c.subset_measure(c.mask_of(&u)),
                None => lebesgue_measure(&spec, &u),
            };
            worst = worst.max((got - expected).abs());
            if (got - expected).abs() > tol {
                return Err(format!("{name}: indicator of {} gave {got}, expected {expected}", u.format(&sp)));
            }
        }
        parts.push(format!("{name} mean {mean} indicators worst {worst:.1e}"));
    }

    let u = gi("uniform");
    let mut probe = Probe::new(0xacce_0016);
    for _ in 0..10_000 {
        let r = probe.level();
        let g = g_point(&u, r).unwrap();
        if g.inner() != r {
            return Err(format!("uniform: G({r}) = {} is not the identity", g.inner()));
        }
    }
    let mean = integrate(&u, &|x: &Point| x.inner(), quad).unwrap();
    ensure(
        (mean - 0.5).abs() <= 1e-8,
        format!("{}; uniform G = identity on 10000 levels, mean {mean}", parts.join(", ")),
    )
}

/// `μ(u)` for a measure on a real interval by summing atoms and clipped
/// segment lengths interval by interval.
fn lebesgue_measure(spec: &MeasureSpec, u: &IntervalUnion) -> f64 {
    let sp = spec.space();
    let atoms: f64 = spec.atoms().iter().filter(|a| u.contains(&a.at)).map(|a| a.mass).sum();
    let mut spread = 0.0;
    for iv in u.intervals(sp) {
        let lo = match iv.lo {
            ExtendedPoint::Finite(p) => p.inner(),
            _ => f64::NEG_INFINITY,
        };
        let hi = match iv.hi {
            ExtendedPoint::Finite(p) => p.inner(),
            _ => f64::INFINITY,
        };
        for s in spec.segments() {
            let len = hi.min(s.hi) - lo.max(s.lo);
            if len > 0.0 {
                spread += s.mass * len / (s.hi - s.lo);
            }
        }
    }
    atoms + spread
}

fn injectivity() -> Outcome {
    let mut parts = Vec::new();
    for name in instances::ALL {
        let gi = gi(name);
        let has_atoms = !gi.cdf().spec().atoms().is_empty();
        let (g_inj, g_witness) = gi.is_g_injective();
        if g_inj == has_atoms {
            return Err(format!("{name}: G injective {g_inj} with atoms {has_atoms} ({g_witness:?})"));
        }
        let (f_inj, f_witness) = gi.is_f_injective();
        if f_inj == (name == "gapped") {
            return Err(format!("{name}: F injective {f_inj} ({f_witness:?})"));
        }
        let report = gi.bijectivity_report();
        if !report.consistent() {
            return Err(format!("{name}: conditions {:?} disagree", report.conditions()));
        }
        let b = report.conditions()[0];
        parts.push(format!("{name} G{} F{} bij{}", flag(g_inj), flag(f_inj), flag(b)));
    }
    Ok(parts.join(", "))
}

fn flag(b: bool) -> &'static str {
    if b {
        "+"
    } else {
        "-"
    }
}

const LADDER: [f64; 3] = [1e-3, 1e-6, 1e-9];

/// Largest density of a segment meeting the real window `[a, b]` of `block`.
fn window_density(spec: &MeasureSpec, block: i64, a: f64, b: f64) -> f64 {
    spec.segments()
        .iter()
        .filter(|s| s.block == block && s.lo <= b && a <= s.hi)
        .map(|s| s.density())
        .fold(0.0, f64::max)
}

/// An atom in `]a, b[`, or `]a, b]` when `closed_hi`.
fn atom_between(spec: &MeasureSpec, block: i64, a: f64, b: f64, closed_hi: bool) -> bool {
    spec.atoms().iter().any(|at| {
        let t = at.at.inner();
        at.at.outer() == block && a < t && (t < b || (closed_hi && t == b))
    })
}

/// Levels where `G` may jump: `F` and `F-` at every atom and segment end.
fn boundary_levels(spec: &MeasureSpec) -> Vec<f64> {
    let key = |p: &Point| (p.outer(), p.inner());
    let below = |block: i64, t: f64, inclusive: bool| -> f64 {
        let atoms: f64 = spec
            .atoms()
            .iter()
            .filter(|a| {
                let k = key(&a.at);
                k < (block, t) || (inclusive && k == (block, t))
            })
            .map(|a| a.mass)
            .sum();
        let segs: f64 = spec
            .segments()
            .iter()
            .map(|s| {
                if (s.block, s.hi) <= (block, t) {
                    s.mass
                } else if s.block == block && s.lo < t {
                    s.mass * (t - s.lo) / (s.hi - s.lo)
                } else {
                    0.0
                }
            })
            .sum();
        atoms + segs
    };
    let mut out = Vec::new();
    for a in spec.atoms() {
        out.push(below(a.at.outer(), a.at.inner(), false));
        out.push(below(a.at.outer(), a.at.inner(), true));
    }
    for s in spec.segments() {
        out.push(below(s.block, s.lo, false));
        out.push(below(s.block, s.hi, true));
    }
    out
}

fn continuity() -> Outcome {
    let mut parts = Vec::new();
    for name in real_segment_instances() {
        let gi = gi(name);
        let cdf = gi.cdf();
        let spec = cdf.spec();
        let sp = gi.space();
        let (mut f_checks, mut g_checks) = (0, 0);

        let mut xs = cdf.breakpoints();
        let mut probe = Probe::new(0xacce_0008);
        xs.extend((0..200).map(|_| probe.point(sp, &[])));
        for x in &xs {
            let (k, t) = (x.outer(), x.inner());
            let f = cdf.eval_f(x).unwrap();
            let fm = cdf.eval_f_minus(x).unwrap();
            for h in LADDER {
                let right = sp.at(k, t + h);
                if let Some(y) = right.filter(|_| !atom_between(spec, k, t, t + h, true)) {
                    let bound = window_density(spec, k, t, t + h) * h + 1e-12;
                    let d = (cdf.eval_f(&y).unwrap() - f).abs();
                    if d > bound {
                        return Err(format!("{name}: |F(x+h)-F(x)| = {d} > {bound} at x={} h={h}", sp.format_point(x)));
                    }
                    f_checks += 1;
                }
                let left = sp.at(k, t - h);
                if let Some(y) = left.filter(|_| !atom_between(spec, k, t - h, t, false)) {
                    let bound = window_density(spec, k, t - h, t) * h + 1e-12;
                    let d = (cdf.eval_f(&y).unwrap() - fm).abs();
                    if d > bound {
                        return Err(format!("{name}: |F(x-h)-F-(x)| = {d} > {bound} at x={} h={h}", sp.format_point(x)));
                    }
                    f_checks += 1;
                }
            }
        }

        let jumps = boundary_levels(spec);
        let min_density = spec.segments().iter().map(|s| s.density()).fold(f64::INFINITY, f64::min);
        let mut rs = jumps.clone();
        rs.extend((0..500).map(|_| probe.unit()));
        for &r in &rs {
            let Some(g) = g_point(&gi, r) else { continue };
            for h in LADDER {
                let rn = r - h;
                if rn < 0.0 || jumps.iter().any(|&b| rn <= b && b < r) {
                    continue;
                }
                let Some(gn) = g_point(&gi, rn) else { continue };
                let bound = h / min_density + 1e-12;
                if gn.outer() != g.outer() || (g.inner() - gn.inner()).abs() > bound {
                    return Err(format!(
                        "{name}: G({rn}) = {} far from G({r}) = {}",
                        sp.format_point(&gn),
                        sp.format_point(&g)
                    ));
                }
                g_checks += 1;
            }
        }
        parts.push(format!("{name} F {f_checks} G {g_checks}"));
    }
    Ok(format!("h in {{1e-3,1e-6,1e-9}}: {}", parts.join(", ")))
}

fn uniqueness() -> Outcome {
    let unit = OrderedSpace::real_interval(0.0, 1.0, true, true).unwrap();
    let whole = instances::spec("mixed").unwrap();
    let split = MeasureSpec::new(
        unit.clone(),
        vec![Atom { at: unit.real(0.5).unwrap(), mass: 0.5 }],
        vec![
            DensitySegment::real(0.0, 0.25, 0.125),
            DensitySegment::real(0.25, 0.5, 0.125),
            DensitySegment::real(0.5, 1.0, 0.25),
        ],
    )
    .map_err(|e| e.to_string())?;
    let uniform_split = MeasureSpec::new(
        unit.clone(),
        vec![],
        vec![DensitySegment::real(0.0, 0.5, 0.5), DensitySegment::real(0.5, 1.0, 0.5)],
    )
    .map_err(|e| e.to_string())?;
    for (a, b) in [(whole, split), (instances::spec("uniform").unwrap(), uniform_split)] {
        let verdict = Cdf::new(a).measure_uniqueness_check(&Cdf::new(b)).map_err(|e| e.to_string())?;
        if !verdict.is_equal() {
            return Err(format!("split representation reported distinct: {verdict:?}"));
        }
    }

    let mut distinct = 0;
    let mut skipped = 0;
    for (i, a) in instances::ALL.iter().enumerate() {
        for b in &instances::ALL[i + 1..] {
            let (sa, sb) = (instances::spec(a).unwrap(), instances::spec(b).unwrap());
            if sa.space() != sb.space() {
                skipped += 1;
                continue;
            }
            let verdict = Cdf::new(sa.clone()).measure_uniqueness_check(&Cdf::new(sb.clone()));
            match verdict.map_err(|e| e.to_string())? {
                Uniqueness::Equal => return Err(format!("{a} and {b} reported equal")),
                Uniqueness::Distinct { witness, .. } => {
                    let (ma, mb) = (lebesgue_or_atomic(&sa, &witness), lebesgue_or_atomic(&sb, &witness));
                    if (ma - mb).abs() <= 1e-12 {
                        return Err(format!(
                            "{a} vs {b}: witness {} has equal measure {ma}",
                            witness.format(sa.space())
                        ));
                    }
                    distinct += 1;
                }
            }
        }
    }
    Ok(format!(
        "2 split representations equal; {distinct} same-space shipped pairs distinguished \
         by a verified witness ({skipped} pairs live on different spaces)"
    ))
}

fn lebesgue_or_atomic(spec: &MeasureSpec, u: &IntervalUnion) -> f64 {
    if spec.segments().is_empty() {
        spec.atoms().iter().filter(|a| u.contains(&a.at)).map(|a| a.mass).sum()
    } else {
        lebesgue_measure(spec, u)
    }
}
