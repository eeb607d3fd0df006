//! q-integers, Gaussian and balanced q-binomials, q-Pochhammer symbols, and
//! the binomial expansion of powers of sums of q-commuting site variables.

use crate::coeffs::RatFunc;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::skew::{AlgebraContext, Element, Monomial, TruncatedSeries};

/// Which site of the sum carries the binomial index. `FromLowest` (the
/// default everywhere) peels the minimum site and produces the downward
/// weight filtration; `FromHighest` peels the maximum site, which only
/// yields a finite expansion for nonnegative integer exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    FromLowest,
    FromHighest,
}

/// Gaussian binomial with arbitrary half-integer upper index:
/// prod_{j=1}^{k} (1 - Q^(gamma-j+1)) / (1 - Q^j), with Q = q^c.
pub fn gauss_binom(gamma: HalfInt, k: u32, c: i64) -> RatFunc {
    let mut r = RatFunc::one();
    for j in 1..=k as i64 {
        // Q^(gamma - j + 1) = s^(2c * doubled(gamma - j + 1))
        let e_num = 2 * c * (gamma.doubled() - 2 * j + 2);
        let num = RatFunc::one().sub(&RatFunc::s_pow(e_num));
        let den = RatFunc::one().sub(&RatFunc::s_pow(4 * c * j));
        r = r.mul(&num.div(&den).expect("1 - Q^j is nonzero for j >= 1"));
    }
    r
}

/// Balanced binomial prod_{j=1}^{k} [n-j+1] / [j] with
/// [m] = (Q^m - Q^-m)/(Q - Q^-1), Q = q^c.
pub fn balanced_binom(n: i64, k: i64, c: i64) -> Result<RatFunc> {
    if k < 0 || k > n {
        return Err(Error::BinomialRange(k, n));
    }
    let qint = |m: i64| -> RatFunc {
        RatFunc::s_pow(4 * c * m)
            .sub(&RatFunc::s_pow(-4 * c * m))
            .div(&RatFunc::s_pow(4 * c).sub(&RatFunc::s_pow(-4 * c)))
            .expect("q - q^{-1} is nonzero")
    };
    let mut r = RatFunc::one();
    for j in 1..=k {
        r = r.mul(&qint(n - j + 1).div(&qint(j)).expect("[j] nonzero"));
    }
    Ok(r)
}

/// (z)_n = prod_{j=0}^{n-1} (1 - q^j z). The symbol with n < 0 only ever
/// appears in denominators and 1/(z)_n is taken to be 0 there, which this
/// function signals by returning None.
pub fn qpochhammer(z: &RatFunc, n: i64) -> Option<RatFunc> {
    if n < 0 {
        return None;
    }
    let mut r = RatFunc::one();
    for j in 0..n {
        r = r.mul(&RatFunc::one().sub(&z.scale_q(4 * j)));
    }
    Some(r)
}

/// Expand (sum of the site variables)^gamma as a truncated series.
///
/// All sites must share one type t; the expansion peels one site per level
/// using the uniform exchange "x_{i0} past any degree-1 tail monomial costs
/// q^c" with c = B(t,t). For nonnegative integer gamma the result is finite
/// and exact and `cut2` is ignored.
pub fn expand_power(
    ctx: &AlgebraContext,
    sites: &[i64],
    gamma: HalfInt,
    cut2: Option<i64>,
) -> Result<TruncatedSeries> {
    expand_power_dir(ctx, sites, gamma, cut2, Direction::FromLowest)
}

pub fn expand_power_dir(
    ctx: &AlgebraContext,
    sites: &[i64],
    gamma: HalfInt,
    cut2: Option<i64>,
    dir: Direction,
) -> Result<TruncatedSeries> {
    if sites.is_empty() {
        return Err(Error::EmptySites);
    }
    let mut sites: Vec<i64> = sites.to_vec();
    sites.sort_unstable();
    sites.dedup();
    let t = ctx.site_type(sites[0])?;
    for s in &sites[1..] {
        if ctx.site_type(*s)? != t {
            return Err(Error::MixedTypes);
        }
    }
    let c = ctx.pairing(t, t);
    let exact = gamma.as_integer().map(|n| n >= 0).unwrap_or(false);
    match dir {
        Direction::FromLowest => {
            if !exact && cut2.is_none() {
                return Err(Error::CutRequired(gamma));
            }
            let cut = if exact { None } else { cut2 };
            let body = expand_low(ctx, &sites, gamma, cut, c)?;
            Ok(TruncatedSeries::new(body, cut))
        }
        Direction::FromHighest => {
            if !exact {
                return Err(Error::BadDirection(gamma));
            }
            let body = expand_high(ctx, &sites, gamma, c)?;
            Ok(TruncatedSeries::exact(body))
        }
    }
}

/// sum^gamma = sum_k binom(gamma, k)_{q^c} T^(gamma-k) x_{i0}^k,
/// i0 the lowest site, T the sum over the rest.
fn expand_low(
    ctx: &AlgebraContext,
    sites: &[i64],
    gamma: HalfInt,
    cut2: Option<i64>,
    c: i64,
) -> Result<Element<RatFunc>> {
    if sites.len() == 1 {
        return Ok(Element::from_monomial(
            Monomial::var(sites[0], gamma),
            RatFunc::one(),
        ));
    }
    let i0 = sites[0];
    let rest = &sites[1..];
    let top = *sites.last().unwrap();
    let exact = gamma.as_integer().map(|n| n >= 0).unwrap_or(false);
    let mut out = Element::zero();
    let mut coeff = RatFunc::one();
    let mut k: i64 = 0;
    loop {
        if exact && k > gamma.as_integer().unwrap() {
            break;
        }
        // heaviest possible term of T^(gamma-k) x_{i0}^k
        if let Some(cut) = cut2 {
            let lead2 = (gamma.doubled() - 2 * k) * top + 2 * k * i0;
            if lead2 < cut {
                break;
            }
        }
        let sub_gamma = gamma - HalfInt::new(k);
        let sub_exact = sub_gamma.as_integer().map(|n| n >= 0).unwrap_or(false);
        let sub_cut = if sub_exact { None } else { cut2.map(|cc| cc - 2 * k * i0) };
        let sub = expand_low(ctx, rest, sub_gamma, sub_cut, c)?;
        let tail = Element::from_monomial(Monomial::var(i0, HalfInt::new(k)), coeff.clone());
        out = out.add(&sub.mul(ctx, &tail)?);
        k += 1;
        // incremental binomial: multiply by (1 - Q^(gamma-k+1))/(1 - Q^k)
        let e_num = 2 * c * (gamma.doubled() - 2 * k + 2);
        coeff = coeff
            .mul(&RatFunc::one().sub(&RatFunc::s_pow(e_num)))
            .div(&RatFunc::one().sub(&RatFunc::s_pow(4 * c * k)))
            .expect("denominator factor nonzero");
    }
    Ok(match cut2 {
        Some(cc) => out.truncated(cc),
        None => out,
    })
}

/// Finite mirror expansion carrying the index on the highest site:
/// sum^n = sum_k binom(n, k)_{q^c} x_top^k T^(n-k).
fn expand_high(
    ctx: &AlgebraContext,
    sites: &[i64],
    gamma: HalfInt,
    c: i64,
) -> Result<Element<RatFunc>> {
    if sites.len() == 1 {
        return Ok(Element::from_monomial(
            Monomial::var(sites[0], gamma),
            RatFunc::one(),
        ));
    }
    let top = *sites.last().unwrap();
    let rest = &sites[..sites.len() - 1];
    let n = gamma.as_integer().expect("checked nonnegative integer");
    let mut out = Element::zero();
    for k in 0..=n {
        let coeff = gauss_binom(gamma, k as u32, c);
        let head = Element::from_monomial(Monomial::var(top, HalfInt::new(k)), coeff);
        let sub = expand_high(ctx, rest, HalfInt::new(n - k), c)?;
        out = out.add(&head.mul(ctx, &sub)?);
    }
    Ok(out)
}
