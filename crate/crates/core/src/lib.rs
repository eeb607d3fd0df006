//! Exact symbolic engine for q-commuting skew-Laurent algebras.
//!
//! Coefficients are exact rational functions of s = q^(1/4) (and optionally a
//! spectral parameter beta), or elements of a cyclotomic quotient ring for
//! root-of-unity computations. On top of those, the crate provides the skew
//! monomial algebra with its site-weight truncation filtration, q-binomial
//! expansions of powers of sums, screening operators with quantum Serre
//! checks, the two- and three-point intertwiner coefficient tables, lattice
//! Virasoro generator candidates with invariance reports, and the commutative
//! q->1 side (Poisson rules and derivation fields).

pub mod classical;
pub mod coeffs;
pub mod error;
pub mod halfint;
pub mod qcomb;
pub mod screening;
pub mod skew;
pub mod virasoro;
pub mod volkov;

pub use coeffs::{cyclo_reduce, cyclotomic, Coefficient, CyclotomicElem, LaurentPoly, RatFunc};
pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use skew::{AlgebraContext, Element, Monomial, TruncatedSeries};
