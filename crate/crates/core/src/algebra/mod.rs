//! Exact scalars and truncated series.

pub mod bivariate;
pub mod coeff;
pub mod cyclo;
pub mod linalg;
pub mod numeric;
pub mod quad;
pub mod rational;
pub mod series;
pub mod zseries;

pub use coeff::Coeff;
pub use cyclo::CycloNum;
pub use rug::Rational;
pub use series::{HalfExp, QSeries, Series};
