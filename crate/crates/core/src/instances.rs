//! Built-in measures used by `verify`, the benches and the acceptance run.

use crate::cdf::Cdf;
use crate::measure::{Atom, DensitySegment, MeasureSpec};
use crate::order::{OrderedSpace, RealRange};
use crate::quantile::PseudoInverse;

/// Names of the instances every acceptance criterion runs on.
pub const CORE: [&str; 5] = ["three-atom", "uniform", "mixed", "gapped", "lex"];

/// All shipped instance names, complete spaces first.
pub const ALL: [&str; 8] = [
    "three-atom",
    "uniform",
    "mixed",
    "gapped",
    "lex",
    "binomial",
    "open-uniform",
    "lex-gap",
];

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "three-atom" => "finite {a<b<c} with masses 0.2, 0.3, 0.5",
        "uniform" => "uniform on [0,1]",
        "mixed" => "atom 0.5 at 0.5 plus uniform mass 0.5 on [0,1]",
        "gapped" => "uniform mass 0.5 on [0,0.4] and 0.5 on [0.6,1], over [0,1]",
        "lex" => "{0,1}x[0,1]: 0.5 uniform on fiber 0, atom 0.2 at (1,0), 0.3 uniform on fiber 1",
        "binomial" => "binomial(10, 0.3) on the integers 0..10",
        "open-uniform" => "uniform on the open interval (0,1); incomplete",
        "lex-gap" => "{0,1}x[0,1) then (0,1]: 0.5 uniform on each fiber; incomplete",
        _ => return None,
    })
}

pub fn spec(name: &str) -> Option<MeasureSpec> {
    let unit = || OrderedSpace::real_interval(0.0, 1.0, true, true).expect("unit interval");
    let spec = match name {
        "three-atom" => {
            let sp = OrderedSpace::finite(&["a", "b", "c"]).expect("labels");
            let atoms = [("a", 0.2), ("b", 0.3), ("c", 0.5)]
                .iter()
                .map(|&(l, mass)| Atom {
                    at: sp.label(l).expect("label"),
                    mass,
                })
                .collect();
            MeasureSpec::new(sp, atoms, vec![])
        }
        "uniform" => MeasureSpec::new(unit(), vec![], vec![DensitySegment::real(0.0, 1.0, 1.0)]),
        "mixed" => {
            let sp = unit();
            let atom = Atom {
                at: sp.real(0.5).expect("element"),
                mass: 0.5,
            };
            MeasureSpec::new(sp, vec![atom], vec![DensitySegment::real(0.0, 1.0, 0.5)])
        }
        "gapped" => MeasureSpec::new(
            unit(),
            vec![],
            vec![
                DensitySegment::real(0.0, 0.4, 0.5),
                DensitySegment::real(0.6, 1.0, 0.5),
            ],
        ),
        "lex" => {
            let fiber = RealRange::closed(0.0, 1.0).expect("fiber");
            let sp = OrderedSpace::lex(&["0", "1"], vec![fiber, fiber]).expect("lex");
            let atom = Atom {
                at: sp.pair("1", 0.0).expect("element"),
                mass: 0.2,
            };
            MeasureSpec::new(
                sp,
                vec![atom],
                vec![
                    DensitySegment::in_fiber(0, 0.0, 1.0, 0.5),
                    DensitySegment::in_fiber(1, 0.0, 1.0, 0.3),
                ],
            )
        }
        "binomial" => {
            let sp = OrderedSpace::int_range(0, 10).expect("range");
            let (n, p) = (10u32, 0.3f64);
            let mut atoms: Vec<Atom> = (0..=n)
                .map(|k| Atom {
                    at: sp.int(k as i64).expect("element"),
                    mass: binomial(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32),
                })
                .collect();
            let total: f64 = atoms.iter().map(|a| a.mass).sum();
            for a in &mut atoms {
                a.mass /= total;
            }
            MeasureSpec::new(sp, atoms, vec![])
        }
        "open-uniform" => MeasureSpec::new(
            OrderedSpace::real_interval(0.0, 1.0, false, false).expect("open interval"),
            vec![],
            vec![DensitySegment::real(0.0, 1.0, 1.0)],
        ),
        "lex-gap" => {
            let sp = OrderedSpace::lex(
                &["0", "1"],
                vec![
                    RealRange::new(0.0, 1.0, true, false).expect("fiber"),
                    RealRange::new(0.0, 1.0, false, true).expect("fiber"),
                ],
            )
            .expect("lex");
            MeasureSpec::new(
                sp,
                vec![],
                vec![
                    DensitySegment::in_fiber(0, 0.0, 1.0, 0.5),
                    DensitySegment::in_fiber(1, 0.0, 1.0, 0.5),
                ],
            )
        }
        _ => return None,
    };
    Some(spec.expect("shipped instances are valid"))
}

pub fn pseudo_inverse(name: &str) -> Option<PseudoInverse> {
    spec(name).map(|s| PseudoInverse::new(Cdf::new(s)))
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
