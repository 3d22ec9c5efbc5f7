pub mod cdf;
pub mod error;
pub mod instances;
pub mod interval;
pub mod measure;
pub mod oracle;
pub mod order;
pub mod probe;
pub mod quantile;
pub mod sampling;

pub use cdf::{Cdf, DenseComparison, Uniqueness};
pub use error::{Error, Result};
pub use interval::{Interval, IntervalUnion};
pub use measure::{Atom, DensitySegment, MeasureSpec};
pub use order::{ExtendedPoint, IsolationReport, Neighbor, OrderedSpace, Point, RealRange, SpaceKind};
pub use probe::Probe;
pub use quantile::{BijectivityReport, Galois, LevelDomain, LevelInterval, PseudoInverse, Quantile, Sandwich};
pub use sampling::{integrate, pushforward_check, Indicator, Integrand, QuadratureSpec, SamplerState, RNG_ID};
