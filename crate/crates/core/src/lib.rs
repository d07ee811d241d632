//! Exact construction, verification and classification of rank-three affine
//! line arrangements over the rationals.
//!
//! Points and lines of the projective plane are canonical integer triples,
//! curves are canonical integer coefficient vectors, and all predicates are
//! decided in exact rational arithmetic.

pub mod arrangement;
pub mod classify;
pub mod curves;
pub mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod proj;
pub mod svg;

pub use arrangement::{Arrangement, Chart, ChartKind, Window};
pub use classify::{classify, Classification, Verdict};
pub use curves::{Conic, Cubic};
pub use error::{Error, Result};
pub use linalg::Rational;
pub use proj::{HLine, HPoint, Projectivity};
