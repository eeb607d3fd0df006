//! Screening operators over finite windows: quantum Serre residuals and
//! root-of-unity nilpotency.

use crate::coeffs::{Coefficient, CyclotomicElem, RatFunc};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::qcomb::balanced_binom;
use crate::skew::{AlgebraContext, Element};

/// Plain screenings sum the window variables; the inverse variant sums their
/// reciprocals (the Laurent case).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreeningSpec {
    pub vtype: usize,
    /// Inclusive site range to draw from.
    pub window: (i64, i64),
    pub variant: Variant,
}

/// Sum of x_i^(+-1) over the window's sites of the given type.
pub fn build_screening(ctx: &AlgebraContext, spec: &ScreeningSpec) -> Result<Element<RatFunc>> {
    let exp = match spec.variant {
        Variant::Plain => HalfInt::ONE,
        Variant::Inverse => -HalfInt::ONE,
    };
    let mut sum = Element::zero();
    for site in ctx.sites_of_type(spec.vtype) {
        if site >= spec.window.0 && site <= spec.window.1 {
            sum = sum.add(&Element::from_monomial(
                crate::skew::Monomial::var(site, exp),
                RatFunc::one(),
            ));
        }
    }
    if sum.is_zero() {
        return Err(Error::EmptySites);
    }
    Ok(sum)
}

/// The alternating Serre sum
/// sum_{v=0}^{1-a_ij} (-1)^v [1-a_ij choose v]_{q^c} Ea^(1-a_ij-v) Eb Ea^v,
/// computed exactly.
pub fn serre_residual(
    ctx: &AlgebraContext,
    ea: &Element<RatFunc>,
    eb: &Element<RatFunc>,
    a_ij: i64,
    c: i64,
) -> Result<Element<RatFunc>> {
    if a_ij > 0 {
        return Err(Error::Invalid("Cartan entry a_ij must be nonpositive".into()));
    }
    if ea.total_degree(ctx)?.is_none() || eb.total_degree(ctx)?.is_none() {
        return Err(Error::NotHomogeneous);
    }
    let n = 1 - a_ij;
    let mut out = Element::zero();
    for v in 0..=n {
        let coeff = balanced_binom(n, v, c)?;
        let sign = if v % 2 == 0 { 1 } else { -1 };
        let term = ea
            .pow(ctx, (n - v) as u32)?
            .mul(ctx, eb)?
            .mul(ctx, &ea.pow(ctx, v as u32)?)?
            .scale(&coeff.mul(&RatFunc::from_int(sign)));
        out = out.add(&term);
    }
    Ok(out)
}

/// Drop monomials containing an exponent >= max (the x_i^N = 0 quotient).
fn quotient_filter<C: Coefficient>(e: &Element<C>, max: HalfInt) -> Element<C> {
    let mut out = Element::zero();
    'term: for (m, c) in e.terms() {
        for (_, d) in m.pairs() {
            if HalfInt::half(*d) >= max {
                continue 'term;
            }
        }
        out.insert_add(m.clone(), c.clone());
    }
    out
}

/// True iff (x_1 + ... + x_{n_sites})^N = 0 with coefficients mod Phi_N(Q),
/// commutation x_i x_j = Q x_j x_i (Q = q^2), and the monomial quotient
/// x_i^N = 0.
pub fn nilpotency_check(n_sites: u32, modulus: u32) -> Result<bool> {
    if modulus < 1 {
        return Err(Error::BadModulus(modulus as i64));
    }
    let ctx = AlgebraContext::single_type(1..=n_sites as i64, 2);
    let one = CyclotomicElem::one(modulus);
    let mut sigma: Element<CyclotomicElem> = Element::zero();
    for i in 1..=n_sites as i64 {
        sigma = sigma.add(&Element::var(i, one.clone()));
    }
    let n_exp = HalfInt::new(modulus as i64);
    let mut acc = quotient_filter(&sigma, n_exp);
    for _ in 1..modulus {
        acc = quotient_filter(&acc.mul(&ctx, &sigma)?, n_exp);
    }
    Ok(acc.is_zero())
}
