//! Two- and three-point intertwiner coefficient tables: recursions,
//! q-Pochhammer closed forms, the reduced difference equation, and the lift
//! of the coefficient table back to the skew algebra.

use std::collections::BTreeMap;

use crate::coeffs::{LaurentPoly, RatFunc, Vars};
use crate::error::Result;
use crate::halfint::HalfInt;
use crate::qcomb::qpochhammer;
use crate::skew::{AlgebraContext, Element, Monomial};

/// C_0 .. C_imax for the two-point equation.
#[derive(Debug, Clone)]
pub struct CoeffTable2 {
    values: Vec<RatFunc>,
}

impl CoeffTable2 {
    pub fn get(&self, i: usize) -> &RatFunc {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// 1 - q^e * beta as a polynomial.
fn one_minus_q_beta(e: i64) -> LaurentPoly {
    LaurentPoly::one(Vars::SBeta).sub(&LaurentPoly::monomial(
        Vars::SBeta,
        [4 * e, 1],
        num::BigRational::from_integer(1.into()),
    ))
}

/// C_0 = 1, C_i = (1 - q^(-i+1) beta) / (q^(-i) - beta) * C_{i-1}.
pub fn two_point_recursion(imax: usize) -> CoeffTable2 {
    let mut values = vec![RatFunc::one()];
    for i in 1..=imax as i64 {
        let num = one_minus_q_beta(-i + 1);
        let den = LaurentPoly::q_pow(-i).sub(&LaurentPoly::beta_pow(1));
        let step = RatFunc::new(num, den).expect("q^(-i) - beta is nonzero");
        values.push(values.last().unwrap().mul(&step));
    }
    CoeffTable2 { values }
}

/// (-q beta)^i (1/beta)_i / (q beta)_i.
pub fn two_point_closed(i: usize) -> RatFunc {
    let i = i as i64;
    let inv_beta = RatFunc::beta().inv().expect("beta is nonzero");
    let qbeta = RatFunc::beta().scale_q(4);
    let num = qpochhammer(&inv_beta, i).expect("nonnegative index");
    let den = qpochhammer(&qbeta, i).expect("nonnegative index");
    let sign = if i % 2 == 0 { 1 } else { -1 };
    let prefactor = RatFunc::beta()
        .scale_q(4)
        .pow_int(i)
        .mul(&RatFunc::from_int(sign));
    prefactor.mul(&num).div(&den).expect("(q beta)_i is nonzero")
}

/// Residuals of the reduced two-point difference equation, order by order:
/// order 0 carries (1 - beta) C_0 (the equation pins beta = 1 there) and
/// every higher order vanishes by construction of the recursion.
pub fn verify_reduced_two_point(order: usize) -> Vec<RatFunc> {
    let table = two_point_recursion(order);
    let mut residuals = Vec::with_capacity(order + 1);
    for k in 0..=order as i64 {
        let ck = table.get(k as usize);
        let r = if k == 0 {
            RatFunc::one().sub(&RatFunc::beta()).mul(ck)
        } else {
            let ckm1 = table.get(k as usize - 1);
            let a = RatFunc::beta()
                .scale_q(4 * (-k + 1))
                .sub(&RatFunc::one())
                .mul(ckm1);
            let b = RatFunc::q_pow(-k).sub(&RatFunc::beta()).mul(ck);
            a.add(&b)
        };
        residuals.push(r);
    }
    residuals
}

/// (n, m) -> C_{n,m} for the three-point equation.
#[derive(Debug, Clone)]
pub struct CoeffTable3 {
    values: BTreeMap<(usize, usize), RatFunc>,
    pub nmax: usize,
    pub mmax: usize,
}

impl CoeffTable3 {
    pub fn get(&self, n: usize, m: usize) -> &RatFunc {
        &self.values[&(n, m)]
    }
}

/// Fill the table from
/// C_{n,m} = (q^(-m+1) - q^(-n-m+2) beta)/(q^(-m) - beta) C_{n-1,m-1}
///         + (1 - q^(-n-m+1))/(q^(-m) - beta) C_{n,m-1},
/// with C_{0,m} = 0 for m >= 1 (the boundary line's numerator vanishes
/// already at m = 1) and the m = 0 row seeded from the two-point recursion.
pub fn three_point_recursion(nmax: usize, mmax: usize) -> CoeffTable3 {
    let two = two_point_recursion(nmax);
    let mut values = BTreeMap::new();
    for n in 0..=nmax {
        values.insert((n, 0), two.get(n).clone());
    }
    for m in 1..=mmax {
        values.insert((0, m), RatFunc::zero());
    }
    for m in 1..=mmax as i64 {
        for n in 1..=nmax as i64 {
            let den = LaurentPoly::q_pow(-m).sub(&LaurentPoly::beta_pow(1));
            let a_num = LaurentPoly::q_pow(-m + 1).sub(&LaurentPoly::monomial(
                Vars::SBeta,
                [4 * (-n - m + 2), 1],
                num::BigRational::from_integer(1.into()),
            ));
            let b_num = LaurentPoly::one(Vars::SBeta).sub(&LaurentPoly::q_pow(-n - m + 1));
            let a = RatFunc::new(a_num, den.clone()).expect("nonzero denominator");
            let b = RatFunc::new(b_num, den).expect("nonzero denominator");
            let diag = &values[&((n - 1) as usize, (m - 1) as usize)];
            let left = &values[&(n as usize, (m - 1) as usize)];
            values.insert((n as usize, m as usize), a.mul(diag).add(&b.mul(left)));
        }
    }
    CoeffTable3 { values, nmax, mmax }
}

/// (-q beta)^n q^(m(m-1)/2) (1/beta)_n / ((beta)_m (q beta)_{n-m}),
/// with 1/(z)_k = 0 for k < 0, so the value is 0 when m > n.
pub fn three_point_closed(n: usize, m: usize) -> RatFunc {
    let (n, m) = (n as i64, m as i64);
    let inv_beta = RatFunc::beta().inv().expect("beta nonzero");
    let qbeta = RatFunc::beta().scale_q(4);
    let num = qpochhammer(&inv_beta, n).expect("n >= 0");
    let den1 = qpochhammer(&RatFunc::beta(), m).expect("m >= 0");
    let den2 = match qpochhammer(&qbeta, n - m) {
        Some(p) => p,
        None => return RatFunc::zero(),
    };
    let sign = if n % 2 == 0 { 1 } else { -1 };
    RatFunc::beta()
        .scale_q(4)
        .pow_int(n)
        .mul(&RatFunc::from_int(sign))
        .scale_q(2 * m * (m - 1))
        .mul(&num)
        .div(&den1.mul(&den2))
        .expect("pochhammer denominators nonzero")
}

/// Outcome of lifting the coefficient table back to the skew algebra over
/// sites {0, 1, 2} and testing the weighted intertwining there.
#[derive(Debug, Clone)]
pub struct LiftReport {
    /// Residual restricted to the reliable strata.
    pub residual: Element<RatFunc>,
    /// Residual terms grouped by the alpha-order e0 - e2.
    pub strata: BTreeMap<i64, Element<RatFunc>>,
    /// chi with alpha_0 alpha_1 = q^chi alpha_1 alpha_0, derived by the
    /// engine from the site relations.
    pub alpha_exchange: HalfInt,
    /// Largest alpha-order kept.
    pub max_order: i64,
}

/// Build R = sum C_{n,m} alpha_0^n alpha_1^m over n+m <= order with
/// alpha_0 = x0 x1^(-1), alpha_1 = x1 x2^(-1), compute
/// (beta x0 + x1 + x2) R - R (x0 + x1 + beta x2), and keep the strata the
/// truncated table fully determines (alpha-order <= order - 1).
pub fn lift_r_and_verify(order: usize) -> Result<LiftReport> {
    let ctx = AlgebraContext::single_type(0..=2, 1);
    let table = three_point_recursion(order, order);
    // alpha_i = x_i * x_{i+1}^(-1) as ordered products (the canonical word
    // x_{i+1}^(-1) x_i differs from this by a q-factor)
    let inv_var = |site: i64| {
        Element::from_monomial(Monomial::var(site, -HalfInt::ONE), RatFunc::one())
    };
    let alpha0 = Element::var(0, RatFunc::one()).mul(&ctx, &inv_var(1))?;
    let alpha1 = Element::var(1, RatFunc::one()).mul(&ctx, &inv_var(2))?;
    // engine-derived exchange convention
    let ab = alpha0.mul(&ctx, &alpha1)?;
    let ba = alpha1.mul(&ctx, &alpha0)?;
    let (m_ab, c_ab) = ab.terms().next().expect("monomial product");
    let c_ba = ba.coeff(m_ab).expect("same support");
    let ratio = c_ab.div(c_ba)?;
    let chi = ratio
        .num()
        .as_monomial()
        .map(|(e, _)| e[0])
        .expect("exchange factor is a q-power");
    let mut r = Element::zero();
    for n in 0..=order {
        for m in 0..=order - n {
            let c = table.get(n, m);
            if c.is_zero() {
                continue;
            }
            let term = alpha0
                .pow(&ctx, n as u32)?
                .mul(&ctx, &alpha1.pow(&ctx, m as u32)?)?
                .scale(c);
            r = r.add(&term);
        }
    }
    let weighted = |b0: bool, b2: bool| -> Element<RatFunc> {
        let beta = RatFunc::beta();
        Element::var(0, if b0 { beta.clone() } else { RatFunc::one() })
            .add(&Element::var(1, RatFunc::one()))
            .add(&Element::var(2, if b2 { beta } else { RatFunc::one() }))
    };
    let lhs = weighted(true, false).mul(&ctx, &r)?;
    let rhs = r.mul(&ctx, &weighted(false, true))?;
    let full = lhs.sub(&rhs);
    let max_order = order as i64 - 1;
    let mut residual = Element::zero();
    let mut strata: BTreeMap<i64, Element<RatFunc>> = BTreeMap::new();
    for (m, c) in full.terms() {
        let e0 = m.exponent(0).as_integer().expect("integer exponents");
        let e2 = m.exponent(2).as_integer().expect("integer exponents");
        let ord = e0 - e2;
        if ord <= max_order {
            residual.insert_add(m.clone(), c.clone());
            strata
                .entry(ord)
                .or_insert_with(Element::zero)
                .insert_add(m.clone(), c.clone());
        }
    }
    Ok(LiftReport { residual, strata, alpha_exchange: HalfInt::half(chi / 2), max_order })
}
