//! Rational functions with factored denominators.
//!
//! A value is num / prod_i f_i^(m_i) where each factor f_i is a canonical
//! polynomial (zero minimum exponents, integer coprime coefficients, positive
//! lowest term). Binomial factors 1 - s^k split into cyclotomic polynomials
//! of s, so every cancellation against them is found by cheap trial division;
//! anything else rides along as an opaque factor. Fractions are therefore not
//! guaranteed reduced, and equality is decided by cross-multiplication.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Signed, Zero};

use super::laurent::{LaurentPoly, Vars};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RatFunc {
    num: LaurentPoly,
    den: BTreeMap<LaurentPoly, u32>,
}

thread_local! {
    static CYCLO_S: RefCell<BTreeMap<u32, LaurentPoly>> = const { RefCell::new(BTreeMap::new()) };
}

/// Phi_d as a polynomial in s (alphabet SBeta).
fn cyclotomic_s(d: u32) -> LaurentPoly {
    CYCLO_S.with(|cache| {
        if let Some(p) = cache.borrow().get(&d) {
            return p.clone();
        }
        let q = super::cyclo::cyclotomic(d).expect("d >= 1");
        let mut p = LaurentPoly::zero(Vars::SBeta);
        for (e, c) in q.terms() {
            p = p.add(&LaurentPoly::monomial(Vars::SBeta, [e[0], 0], c.clone()));
        }
        cache.borrow_mut().insert(d, p.clone());
        p
    })
}

/// Canonicalize a nonzero polynomial into (factor, compensation) with
/// factor = comp^(-1) * p: zero min exponents, integer coprime coefficients,
/// positive lowest coefficient. comp is a scalar monomial.
fn factor_normalize(p: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    let ms = p.min_exp(0).unwrap();
    let mb = p.min_exp(1).unwrap();
    let mut f = p.shift([-ms, -mb]);
    let mut scalar = f.content();
    if f.terms().next().map(|(_, c)| c.is_negative()).unwrap_or(false) {
        scalar = -scalar;
    }
    f = f.scale(&(BigRational::one() / &scalar));
    let comp = LaurentPoly::monomial(Vars::SBeta, [ms, mb], scalar);
    (f, comp)
}

/// Split a canonical factor into irreducible-ish pieces where the shape is
/// recognized: 1 - s^k and 1 + s^k become products of s-cyclotomics.
fn factor_split(f: LaurentPoly) -> (Vec<LaurentPoly>, BigRational) {
    let terms: Vec<_> = f.terms().map(|(e, c)| (*e, c.clone())).collect();
    if terms.len() == 2 && terms[0].0 == [0, 0] && terms[1].0[1] == 0 {
        let k = terms[1].0[0] as u32;
        let c0 = &terms[0].1;
        let c1 = &terms[1].1;
        if c0.is_one() && (-c1).is_one() {
            // 1 - s^k = -(s^k - 1) = -prod_{d | k} Phi_d(s)
            let mut parts = Vec::new();
            for d in 1..=k {
                if k % d == 0 {
                    parts.push(cyclotomic_s(d));
                }
            }
            return (parts, -BigRational::one());
        }
        if c0.is_one() && c1.is_one() {
            // 1 + s^k = (s^{2k} - 1)/(s^k - 1) = prod_{d | 2k, d not | k} Phi_d(s)
            let mut parts = Vec::new();
            for d in 1..=2 * k {
                if (2 * k) % d == 0 && k % d != 0 {
                    parts.push(cyclotomic_s(d));
                }
            }
            return (parts, BigRational::one());
        }
    }
    (vec![f], BigRational::one())
}

/// Exact division of p by a canonical factor f, when supported:
/// beta-free factors divide per beta-stratum (dense univariate), and factors
/// whose top beta-coefficient is a monomial divide by descending beta-degree.
fn try_div_exact(p: &LaurentPoly, f: &LaurentPoly) -> Option<LaurentPoly> {
    if p.is_zero() {
        return Some(p.clone());
    }
    if f.is_beta_free() {
        return div_by_beta_free(p, f);
    }
    div_by_beta_monic(p, f)
}

/// Dense divide-with-remainder; returns the quotient only on exactness.
fn dense_try_div(v: &[BigRational], f: &[BigRational]) -> Option<Vec<BigRational>> {
    use super::dense::trim;
    let mut r = v.to_vec();
    trim(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    let df = f.len() - 1;
    if r.len() - 1 < df {
        return None;
    }
    let lf = &f[df];
    let mut q = vec![BigRational::zero(); r.len() - df];
    while r.len() > df {
        let dr = r.len() - 1;
        let c = &r[dr] / lf;
        q[dr - df] = c.clone();
        for i in 0..=df {
            let t = &f[i] * &c;
            r[dr - df + i] -= t;
        }
        trim(&mut r);
    }
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

fn div_by_beta_free(p: &LaurentPoly, f: &LaurentPoly) -> Option<LaurentPoly> {
    // canonical factors start at exponent 0
    let fd: Vec<BigRational> = {
        let mut v = vec![BigRational::zero(); (f.max_exp(0).unwrap() + 1) as usize];
        for (e, c) in f.terms() {
            v[e[0] as usize] = c.clone();
        }
        v
    };
    // strata by beta exponent
    let mut strata: BTreeMap<i64, BTreeMap<i64, BigRational>> = BTreeMap::new();
    for (e, c) in p.terms() {
        strata.entry(e[1]).or_default().insert(e[0], c.clone());
    }
    let mut out = LaurentPoly::zero(Vars::SBeta);
    for (b, coeffs) in strata {
        let smin = *coeffs.keys().next().unwrap();
        let smax = *coeffs.keys().next_back().unwrap();
        let mut v = vec![BigRational::zero(); (smax - smin + 1) as usize];
        for (e, c) in coeffs {
            v[(e - smin) as usize] = c;
        }
        let q = dense_try_div(&v, &fd)?;
        for (i, c) in q.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&LaurentPoly::monomial(
                    Vars::SBeta,
                    [smin + i as i64, b],
                    c.clone(),
                ));
            }
        }
    }
    Some(out)
}

fn div_by_beta_monic(p: &LaurentPoly, f: &LaurentPoly) -> Option<LaurentPoly> {
    // divisor's top beta-stratum must be a single term: then division by
    // descending beta-degree always makes progress
    let btop = f.max_exp(1).unwrap();
    let tops: Vec<_> = f.terms().filter(|(e, _)| e[1] == btop).collect();
    if tops.len() != 1 {
        return None;
    }
    let (lead_e, lead_c) = (*tops[0].0, tops[0].1.clone());
    // an exact quotient has beta-span at most span(p) - span(f)
    let mut budget = p.max_exp(1).unwrap() - p.min_exp(1).unwrap() + 2;
    let mut r = p.clone();
    let mut quot = LaurentPoly::zero(Vars::SBeta);
    while !r.is_zero() {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let rb = r.max_exp(1).unwrap();
        let mut qpart = LaurentPoly::zero(Vars::SBeta);
        for (e, c) in r.terms().filter(|(e, _)| e[1] == rb) {
            qpart = qpart.add(&LaurentPoly::monomial(
                Vars::SBeta,
                [e[0] - lead_e[0], e[1] - lead_e[1]],
                c / &lead_c,
            ));
        }
        r = r.sub(&qpart.mul(f));
        quot = quot.add(&qpart);
    }
    Some(quot)
}

impl RatFunc {
    pub fn from_poly(num: LaurentPoly) -> Self {
        RatFunc { num, den: BTreeMap::new() }
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = Self::from_poly(num);
        r.push_den(&den);
        r.cancel();
        Ok(r)
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero(Vars::SBeta))
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one(Vars::SBeta))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(Vars::SBeta, n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(Vars::SBeta, c))
    }

    /// s^e = q^(e/4).
    pub fn s_pow(e: i64) -> Self {
        Self::from_poly(LaurentPoly::s_pow(e))
    }

    pub fn q_pow(e: i64) -> Self {
        Self::s_pow(4 * e)
    }

    pub fn beta() -> Self {
        Self::from_poly(LaurentPoly::beta_pow(1))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    /// Denominator multiplied out.
    pub fn den_expanded(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one(Vars::SBeta);
        for (f, m) in &self.den {
            for _ in 0..*m {
                d = d.mul(f);
            }
        }
        d
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&LaurentPoly, u32)> {
        self.den.iter().map(|(f, m)| (f, *m))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.eq(&Self::one())
    }

    fn push_den(&mut self, p: &LaurentPoly) {
        debug_assert!(!p.is_zero());
        let (f, comp) = factor_normalize(p);
        // divide the numerator by the compensation monomial
        let (ce, cc) = comp.as_monomial().expect("compensation is a monomial");
        self.num = self
            .num
            .shift([-ce[0], -ce[1]])
            .scale(&(BigRational::one() / cc));
        if f.is_one() {
            return;
        }
        let (parts, sign) = factor_split(f);
        if !sign.is_one() {
            self.num = self.num.scale(&(BigRational::one() / sign));
        }
        for part in parts {
            *self.den.entry(part).or_insert(0) += 1;
        }
    }

    /// Trial-divide the numerator by every denominator factor.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<LaurentPoly> = self.den.keys().cloned().collect();
        for f in factors {
            while self.den.get(&f).copied().unwrap_or(0) > 0 {
                match try_div_exact(&self.num, &f) {
                    Some(q) => {
                        self.num = q;
                        let m = self.den.get_mut(&f).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            self.den.remove(&f);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let mut r = RatFunc { num: self.num.add(&other.num), den: self.den.clone() };
            r.cancel();
            return r;
        }
        // lcm denominator: factor-wise max multiplicity
        let mut den: BTreeMap<LaurentPoly, u32> = self.den.clone();
        for (f, m) in &other.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |side: &RatFunc| -> LaurentPoly {
            let mut n = side.num.clone();
            for (f, m) in &den {
                let have = side.den.get(f).copied().unwrap_or(0);
                for _ in have..*m {
                    n = n.mul(f);
                }
            }
            n
        };
        let num = lift(self).add(&lift(other));
        let mut r = RatFunc { num, den };
        r.cancel();
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // multiplying by a fraction-free monomial cannot enable cancellation
        // (den factors have nonzero constant terms)
        if other.den.is_empty() && other.num.num_terms() <= 1 {
            return RatFunc { num: self.num.mul(&other.num), den: self.den.clone() };
        }
        if self.den.is_empty() && self.num.num_terms() <= 1 {
            return RatFunc { num: self.num.mul(&other.num), den: other.den.clone() };
        }
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += *m;
        }
        let mut r = RatFunc { num: self.num.mul(&other.num), den };
        r.cancel();
        r
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // self * den(other) / num(other)
        let mut r = self.clone();
        r.num = r.num.mul(&other.den_expanded());
        r.push_den(&other.num);
        r.cancel();
        Ok(r)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// Integer power, n >= 0.
    pub fn pow_int(&self, n: i64) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by s^e.
    pub fn scale_q(&self, s_exp: i64) -> Self {
        RatFunc { num: self.num.shift([s_exp, 0]), den: self.den.clone() }
    }

    /// Equality by cross-multiplication.
    pub fn eq(&self, other: &Self) -> bool {
        // shared factors cancel; only the leftovers need expanding
        let mut left = self.num.clone();
        let mut right = other.num.clone();
        for (f, m) in &other.den {
            let have = self.den.get(f).copied().unwrap_or(0);
            for _ in 0..m.saturating_sub(have) {
                left = left.mul(f);
            }
        }
        for (f, m) in &self.den {
            let have = other.den.get(f).copied().unwrap_or(0);
            for _ in 0..m.saturating_sub(have) {
                right = right.mul(f);
            }
        }
        left == right
    }

    /// Bar involution q -> q^(-1).
    pub fn bar(&self) -> Self {
        let mut r = Self::from_poly(self.num.bar());
        for (f, m) in &self.den {
            let fb = f.bar();
            for _ in 0..*m {
                r.push_den(&fb);
            }
        }
        r.cancel();
        r
    }

    pub fn subst_beta_one(&self) -> Result<Self> {
        self.substitute(|p| p.subst_beta_one())
    }

    pub fn subst_beta_qpow(&self, j: i64) -> Result<Self> {
        self.substitute(|p| p.subst_beta_qpow(j))
    }

    fn substitute(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Result<Self> {
        let mut r = Self::from_poly(f(&self.num));
        for (fac, m) in &self.den {
            let fs = f(fac);
            if fs.is_zero() {
                return Err(Error::Pole);
            }
            for _ in 0..*m {
                r.push_den(&fs);
            }
        }
        r.cancel();
        Ok(r)
    }

    /// q -> 1 specialization with (s - 1)-order bookkeeping; the result is a
    /// rational function of beta alone.
    pub fn eval_s_one(&self) -> Result<Self> {
        // order of vanishing at s = 1 for a polynomial
        fn ord_and_value(p: &LaurentPoly) -> (u32, LaurentPoly) {
            let shift = -p.min_exp(0).unwrap_or(0).min(0);
            let mut cur = p.shift([shift, 0]);
            let mut ord = 0;
            loop {
                let v = cur.subst_s_one();
                if !v.is_zero() {
                    return (ord, v);
                }
                match cur.div_s_minus_one() {
                    Some(next) => {
                        cur = next;
                        ord += 1;
                    }
                    None => unreachable!("value 0 at s=1 implies divisibility"),
                }
            }
        }
        if self.num.is_zero() {
            return Ok(Self::zero());
        }
        let (num_ord, num_val) = ord_and_value(&self.num);
        let mut den_ord = 0u32;
        let mut den_val = LaurentPoly::one(Vars::SBeta);
        for (f, m) in &self.den {
            let (o, v) = ord_and_value(f);
            den_ord += o * m;
            for _ in 0..*m {
                den_val = den_val.mul(&v);
            }
        }
        if num_ord < den_ord {
            return Err(Error::Pole);
        }
        if num_ord > den_ord {
            return Ok(Self::zero());
        }
        Self::new(num_val, den_val)
    }

    /// Constant value, if the fraction reduces to a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.is_zero() {
            return Some(BigRational::zero());
        }
        if !self.den.is_empty() {
            // try the expanded form
            let d = self.den_expanded().as_constant()?;
            let n = self.num.as_constant()?;
            return Some(n / d);
        }
        self.num.as_constant()
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        RatFunc::eq(self, other)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            format!("{}", self.num)
        };
        if self.den.is_empty() {
            return write!(f, "{num}");
        }
        let dens: Vec<String> = self
            .den
            .iter()
            .map(|(fac, m)| {
                if *m == 1 {
                    format!("({fac})")
                } else {
                    format!("({fac})^{m}")
                }
            })
            .collect();
        write!(f, "{num} / {}", dens.join(""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RatFunc {
        RatFunc::q_pow(1)
    }

    fn one() -> RatFunc {
        RatFunc::one()
    }

    #[test]
    fn factored_equality() {
        // (1 - q^2)/(1 - q) == (1 + q)/1
        let a = one().sub(&RatFunc::q_pow(2)).div(&one().sub(&q())).unwrap();
        let b = one().add(&q());
        assert!(a.eq(&b));
        // cancellation actually happened
        assert_eq!(a.den_factors().count(), 0);
    }

    #[test]
    fn beta_inverse() {
        let b = RatFunc::beta();
        assert!(b.mul(&b.inv().unwrap()).is_one());
        let lhs = one().div(&b).unwrap();
        let rhs = b.div(&b.mul(&b)).unwrap();
        assert!(lhs.eq(&rhs));
    }

    #[test]
    fn shifted_representation() {
        // (1 - beta)/(q^{-1} - beta) == q(1 - beta)/(1 - q beta)
        let b = RatFunc::beta();
        let lhs = one().sub(&b).div(&RatFunc::q_pow(-1).sub(&b)).unwrap();
        let rhs = q().mul(&one().sub(&b)).div(&one().sub(&q().mul(&b))).unwrap();
        assert!(lhs.eq(&rhs));
    }

    #[test]
    fn distinct_functions_differ() {
        let b = RatFunc::beta();
        let lhs = one().sub(&q().mul(&b)).div(&one().sub(&b)).unwrap();
        let rhs = one().sub(&b).div(&one().sub(&q().mul(&b))).unwrap();
        assert!(!lhs.eq(&rhs));
    }

    #[test]
    fn division_by_zero_rejected() {
        assert_eq!(one().div(&RatFunc::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_identities() {
        let a = one().sub(&q().mul(&RatFunc::beta())); // 1 - q beta
        let c = a.div(&one().add(&q())).unwrap();
        assert!(c.mul(&c.inv().unwrap()).is_one());
        assert!(c.sub(&c).is_zero());
    }

    #[test]
    fn beta_factor_cancellation() {
        // (1 - q beta)(1 + q) / (1 - q beta) reduces fully
        let f = one().sub(&q().mul(&RatFunc::beta()));
        let r = f.mul(&one().add(&q())).div(&f).unwrap();
        assert_eq!(r.den_factors().count(), 0);
        assert!(r.eq(&one().add(&q())));
    }

    #[test]
    fn s_one_specialization() {
        // (1 - q^2)/(1 - q) -> 2 at q = 1
        let a = one().sub(&RatFunc::q_pow(2)).div(&one().sub(&q())).unwrap();
        let v = a.eval_s_one().unwrap();
        assert!(v.eq(&RatFunc::from_int(2)));
        // 1/(1-q) has a pole
        let p = one().div(&one().sub(&q())).unwrap();
        assert_eq!(p.eval_s_one(), Err(Error::Pole));
        // (1-q)^2/(1-q) -> 0
        let z = one().sub(&q()).mul(&one().sub(&q())).div(&one().sub(&q())).unwrap();
        assert!(z.eval_s_one().unwrap().is_zero());
    }

    #[test]
    fn bar_involution() {
        let a = one().sub(&RatFunc::q_pow(2)).div(&one().sub(&q())).unwrap();
        let twice = a.bar().bar();
        assert!(twice.eq(&a));
        assert!(a.bar().eq(&one().add(&RatFunc::q_pow(-1))));
    }

    #[test]
    fn display_shapes() {
        let a = one().div(&one().sub(&q())).unwrap();
        // 1 - q = -(s-1)(s+1)(s^2+1): three cyclotomic factors, sign in num
        assert_eq!(a.den_factors().count(), 3);
        assert!(!format!("{a}").is_empty());
    }
}
