//! Sparse Laurent polynomials over exact rationals in a small fixed alphabet.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Indeterminate alphabet. `SBeta` is the coefficient field alphabet
/// (slot 0 is s = q^(1/4), slot 1 is the spectral parameter beta);
/// `Q` is a single variable q, used by the cyclotomic layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vars {
    SBeta,
    Q,
}

impl Vars {
    fn arity(self) -> usize {
        match self {
            Vars::SBeta => 2,
            Vars::Q => 1,
        }
    }
}

type Exp = [i64; 2];

/// Laurent polynomial: exponent vector -> nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LaurentPoly {
    vars: Vars,
    terms: BTreeMap<Exp, BigRational>,
}

impl LaurentPoly {
    pub fn zero(vars: Vars) -> Self {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: Vars, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0], c);
        }
        LaurentPoly { vars, terms }
    }

    pub fn from_int(vars: Vars, n: i64) -> Self {
        Self::constant(vars, BigRational::from_integer(BigInt::from(n)))
    }

    /// Single term c * x0^e0 * x1^e1.
    pub fn monomial(vars: Vars, exps: Exp, c: BigRational) -> Self {
        assert!(vars.arity() == 2 || exps[1] == 0, "slot 1 unused for this alphabet");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { vars, terms }
    }

    /// s^e (alphabet SBeta).
    pub fn s_pow(e: i64) -> Self {
        Self::monomial(Vars::SBeta, [e, 0], BigRational::one())
    }

    /// q^e = s^(4e) (alphabet SBeta).
    pub fn q_pow(e: i64) -> Self {
        Self::s_pow(4 * e)
    }

    /// beta^e (alphabet SBeta).
    pub fn beta_pow(e: i64) -> Self {
        Self::monomial(Vars::SBeta, [0, e], BigRational::one())
    }

    /// q^e in the single-variable alphabet.
    pub fn qvar_pow(e: i64) -> Self {
        Self::monomial(Vars::Q, [e, 0], BigRational::one())
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&[0, 0]).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigRational)> {
        self.terms.iter()
    }

    /// Constant term, if the polynomial is a constant (or zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&[0, 0]) {
                return Some(c.clone());
            }
        }
        None
    }

    /// The unique term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(Exp, BigRational)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((*e, c.clone()))
        } else {
            None
        }
    }

    fn insert_add(terms: &mut BTreeMap<Exp, BigRational>, e: Exp, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, *e, c.clone());
        }
        LaurentPoly { vars: self.vars, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                Self::insert_add(&mut terms, [e1[0] + e2[0], e1[1] + e2[1]], c1 * c2);
            }
        }
        LaurentPoly { vars: self.vars, terms }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by the monomial x0^e0 x1^e1.
    pub fn shift(&self, e: Exp) -> Self {
        LaurentPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| ([k[0] + e[0], k[1] + e[1]], c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.vars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn min_exp(&self, slot: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[slot]).min()
    }

    pub fn max_exp(&self, slot: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[slot]).max()
    }

    /// True if slot 1 (beta) never appears.
    pub fn is_beta_free(&self) -> bool {
        self.terms.keys().all(|e| e[1] == 0)
    }

    /// gcd of coefficient numerators over lcm of denominators; positive.
    pub fn content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(num, den)
        }
    }

    /// Remap exponents, merging collisions. `f` must keep unused slots at 0.
    pub fn map_exponents(&self, f: impl Fn(Exp) -> Exp) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            Self::insert_add(&mut terms, f(*e), c.clone());
        }
        LaurentPoly { vars: self.vars, terms }
    }

    /// Substitute s -> s^(-1) (bar involution on the q-direction).
    pub fn bar(&self) -> Self {
        self.map_exponents(|e| [-e[0], e[1]])
    }

    /// Substitute beta -> q^(-j) = s^(-4j).
    pub fn subst_beta_qpow(&self, j: i64) -> Self {
        self.map_exponents(|e| [e[0] - 4 * j * e[1], 0])
    }

    /// Substitute beta -> 1.
    pub fn subst_beta_one(&self) -> Self {
        self.map_exponents(|e| [e[0], 0])
    }

    /// Substitute s -> 1 (the q -> 1 specialization), collapsing slot 0.
    pub fn subst_s_one(&self) -> Self {
        self.map_exponents(|e| [0, e[1]])
    }

    /// Exact division by (s - 1) in slot 0. `None` if not divisible.
    /// Requires all slot-0 exponents nonnegative.
    pub fn div_s_minus_one(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.min_exp(0).unwrap() < 0 {
            return None;
        }
        // Per beta-stratum synthetic division at s = 1.
        let mut strata: BTreeMap<i64, BTreeMap<i64, BigRational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            strata.entry(e[1]).or_default().insert(e[0], c.clone());
        }
        let mut terms = BTreeMap::new();
        for (b, coeffs) in strata {
            let deg = *coeffs.keys().max().unwrap();
            // quotient coefficients from the top down: r_{k} = c_{k+1} + r_{k+1}
            let mut carry = BigRational::zero();
            for a in (0..deg).rev() {
                let c_above = coeffs.get(&(a + 1)).cloned().unwrap_or_else(BigRational::zero);
                carry += c_above;
                Self::insert_add(&mut terms, [a, b], carry.clone());
            }
            // remainder = value at s=1 must vanish
            let rem: BigRational = coeffs.values().sum();
            if !rem.is_zero() {
                return None;
            }
        }
        Some(LaurentPoly { vars: self.vars, terms })
    }

    fn fmt_var(slot: usize, vars: Vars, e: i64, out: &mut String) {
        use std::fmt::Write;
        match (vars, slot) {
            (Vars::SBeta, 0) => {
                // print s-exponents as q-powers with quarter denominators
                let g = e.gcd(&4);
                let (n, d) = (e / g, 4 / g);
                if d == 1 {
                    if n == 1 {
                        out.push('q');
                    } else {
                        write!(out, "q^{n}").unwrap();
                    }
                } else {
                    write!(out, "q^({n}/{d})").unwrap();
                }
            }
            (Vars::SBeta, _) => {
                if e == 1 {
                    out.push_str("beta");
                } else {
                    write!(out, "beta^{e}").unwrap();
                }
            }
            (Vars::Q, _) => {
                if e == 1 {
                    out.push('q');
                } else {
                    write!(out, "q^{e}").unwrap();
                }
            }
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest exponents first reads like the worked formulas
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = String::new();
            if e[0] != 0 {
                Self::fmt_var(0, self.vars, e[0], &mut factors);
            }
            if e[1] != 0 {
                if !factors.is_empty() {
                    factors.push('*');
                }
                Self::fmt_var(1, self.vars, e[1], &mut factors);
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{factors}")?;
            } else {
                write!(f, "{mag}*{factors}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentPoly {
        LaurentPoly::q_pow(1)
    }

    #[test]
    fn ring_basics() {
        let p = LaurentPoly::one(Vars::SBeta).sub(&q()); // 1 - q
        let r = p.mul(&p.neg());
        assert_eq!(r, q().mul(&LaurentPoly::from_int(Vars::SBeta, 2))
            .sub(&LaurentPoly::one(Vars::SBeta))
            .sub(&q().mul(&q())));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.to_string(), "-q + 1");
    }

    #[test]
    fn substitutions() {
        // (1 - q*beta) at beta = q^{-1} is 0
        let p = LaurentPoly::one(Vars::SBeta).sub(&q().mul(&LaurentPoly::beta_pow(1)));
        assert!(p.subst_beta_qpow(1).is_zero());
        assert_eq!(p.subst_beta_one().to_string(), "-q + 1");
        // bar: q -> q^{-1}
        assert_eq!(q().bar(), LaurentPoly::q_pow(-1));
    }

    #[test]
    fn divide_by_s_minus_one() {
        // s^2 - 1 = (s - 1)(s + 1)
        let p = LaurentPoly::s_pow(2).sub(&LaurentPoly::one(Vars::SBeta));
        let d = p.div_s_minus_one().unwrap();
        assert_eq!(d, LaurentPoly::s_pow(1).add(&LaurentPoly::one(Vars::SBeta)));
        // s + 1 is not divisible
        assert!(LaurentPoly::s_pow(1)
            .add(&LaurentPoly::one(Vars::SBeta))
            .div_s_minus_one()
            .is_none());
    }

    #[test]
    fn display_quarters() {
        assert_eq!(LaurentPoly::s_pow(2).to_string(), "q^(1/2)");
        assert_eq!(LaurentPoly::s_pow(-1).to_string(), "q^(-1/4)");
        assert_eq!(LaurentPoly::s_pow(8).to_string(), "q^2");
    }
}
