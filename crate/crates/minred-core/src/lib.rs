//! Minimal reductions of topologically nilpotent regular semisimple elements
//! of classical loop Lie algebras, computed from the characteristic
//! polynomial and certified by explicit constructions and brute force.

pub mod admissibility;
pub mod battery;
pub mod cpoly;
pub mod error;
pub mod gen;
pub mod isotropy;
pub mod job;
pub mod linalg;
pub mod lmat;
pub mod matrixlab;
pub mod oracle;
pub mod partitions;
pub mod polyring;
pub mod report;
pub mod rtmin;
pub mod series;

pub use cpoly::CPoly;
pub use error::{Error, Result};
pub use linalg::Mat;
pub use partitions::Partition;
pub use polyring::{Family, GroupType, Polygon, Segment, SeriesPoly, ValidationReport};
pub use rtmin::ReductionReport;
pub use series::{Rat, Scalar, TruncSeries, Val};
