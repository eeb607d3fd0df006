//! Exact coefficient domains: rationals, Laurent polynomials, their fraction
//! field, and cyclotomic quotient rings for root-of-unity mode.

mod cyclo;
mod dense;
mod laurent;
mod ratfunc;

pub use cyclo::{cyclo_reduce, cyclotomic, CyclotomicElem};
pub use laurent::{LaurentPoly, Vars};
pub use ratfunc::RatFunc;

use crate::error::Result;

/// Ring operations the skew algebra needs from a coefficient domain.
///
/// All values are immutable; operations return fresh values. The engine's
/// reorder factors arrive as powers of s = q^(1/4), passed as the integer
/// s-exponent.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug + std::fmt::Display {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiply by q^(s_exp/4).
    fn mul_s_pow(&self, s_exp: i64) -> Result<Self>;
    /// The multiplicative unit of this value's ring (carries the modulus in
    /// quotient rings).
    fn one_like(&self) -> Self;
}

impl Coefficient for RatFunc {
    fn add(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFunc::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn mul_s_pow(&self, s_exp: i64) -> Result<Self> {
        Ok(self.scale_q(s_exp))
    }
    fn one_like(&self) -> Self {
        RatFunc::one()
    }
}

impl Coefficient for CyclotomicElem {
    fn add(&self, other: &Self) -> Self {
        CyclotomicElem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        CyclotomicElem::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CyclotomicElem::mul(self, other)
    }
    fn neg(&self) -> Self {
        CyclotomicElem::neg(self)
    }
    fn is_zero(&self) -> bool {
        CyclotomicElem::is_zero(self)
    }
    fn mul_s_pow(&self, s_exp: i64) -> Result<Self> {
        let k = cyclo::s_exp_to_q2_pow(s_exp)?;
        Ok(self.mul_q_pow(k))
    }
    fn one_like(&self) -> Self {
        CyclotomicElem::one(self.modulus())
    }
}
