//! The q-commuting skew-Laurent monomial algebra: canonical normal forms,
//! products, commutators, grading, and the site-weight truncation filtration.

mod context;
mod element;
mod monomial;
mod series;

pub use context::{AlgebraContext, TailSites, VarInfo};
pub use element::{Degrees, Element};
pub use monomial::Monomial;
pub use series::TruncatedSeries;
