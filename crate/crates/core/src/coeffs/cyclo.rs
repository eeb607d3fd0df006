//! Cyclotomic polynomials and the quotient ring Q[q]/Phi_N(q).
//!
//! In the quotient the class of q is a primitive N-th root of unity, so
//! q^N = 1 and negative powers clear as q^(-1) = q^(N-1).

use std::fmt;

use num::BigRational;

use super::dense::{dense_from, dense_to_vars, poly_rem};
use super::laurent::{LaurentPoly, Vars};
use crate::error::{Error, Result};

/// The N-th cyclotomic polynomial Phi_N(q), computed by the recursive
/// division Phi_N = (q^N - 1) / prod_{d | N, d < N} Phi_d.
pub fn cyclotomic(n: u32) -> Result<LaurentPoly> {
    if n < 1 {
        return Err(Error::BadModulus(n as i64));
    }
    let mut num = LaurentPoly::qvar_pow(n as i64).sub(&LaurentPoly::one(Vars::Q));
    let mut acc = dense_from(&num, 0);
    for d in 1..n {
        if n % d == 0 {
            let phi = dense_from(&cyclotomic(d)?, 0);
            acc = super::dense::poly_div_exact(&acc, &phi);
        }
    }
    num = dense_to_vars(Vars::Q, &acc, 0);
    Ok(num)
}

/// Canonical representative of a Laurent polynomial in q modulo Phi_N.
/// Negative powers are cleared with q^(-1) = q^(N-1) before reduction.
pub fn cyclo_reduce(p: &LaurentPoly, n: u32) -> Result<CyclotomicElem> {
    if n < 1 {
        return Err(Error::BadModulus(n as i64));
    }
    let phi = cyclotomic(n)?;
    let folded = p.map_exponents(|e| [e[0].rem_euclid(n as i64), 0]);
    let rep = if folded.is_zero() {
        folded
    } else {
        let r = poly_rem(&dense_from(&folded, 0), &dense_from(&phi, 0));
        dense_to_vars(Vars::Q, &r, 0)
    };
    Ok(CyclotomicElem { rep, modulus: n })
}

/// Element of Q[q]/Phi_N(q), stored as the canonical representative of
/// degree below deg Phi_N.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclotomicElem {
    rep: LaurentPoly,
    modulus: u32,
}

impl CyclotomicElem {
    pub fn zero(modulus: u32) -> Self {
        CyclotomicElem { rep: LaurentPoly::zero(Vars::Q), modulus }
    }

    pub fn one(modulus: u32) -> Self {
        // modulus 1 collapses the whole ring: Phi_1 = q - 1 has degree 1,
        // so constants survive; reduce anyway for canonicity
        cyclo_reduce(&LaurentPoly::one(Vars::Q), modulus).expect("modulus >= 1")
    }

    pub fn from_poly(p: &LaurentPoly, modulus: u32) -> Result<Self> {
        cyclo_reduce(p, modulus)
    }

    pub fn rep(&self) -> &LaurentPoly {
        &self.rep
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        // degrees stay below deg Phi_N, no reduction needed
        CyclotomicElem { rep: self.rep.add(&other.rep), modulus: self.modulus }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicElem { rep: self.rep.neg(), modulus: self.modulus }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        cyclo_reduce(&self.rep.mul(&other.rep), self.modulus).expect("valid modulus")
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CyclotomicElem { rep: self.rep.scale(c), modulus: self.modulus }
    }

    /// Multiply by q^k (k may be negative).
    pub fn mul_q_pow(&self, k: i64) -> Self {
        let shifted = self.rep.map_exponents(|e| [e[0] + k.rem_euclid(self.modulus as i64), 0]);
        cyclo_reduce(&shifted, self.modulus).expect("valid modulus")
    }
}

impl fmt::Display for CyclotomicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod Phi_{})", self.rep, self.modulus)
    }
}

/// Quarter-power check used by the skew algebra: the engine hands the
/// coefficient ring powers of s = q^(1/4); in a cyclotomic computation only
/// integral powers of the root-of-unity variable q^2 can arise.
pub fn s_exp_to_q2_pow(s_exp: i64) -> Result<i64> {
    if s_exp % 8 != 0 {
        return Err(Error::FractionalCyclotomicPower(s_exp));
    }
    Ok(s_exp / 8)
}
