//! Elements of the skew algebra: coefficient-weighted sums of canonical
//! monomials, with normal-form multiplication realizing the exchange rules.

use std::collections::BTreeMap;

use crate::coeffs::Coefficient;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::skew::context::AlgebraContext;
use crate::skew::monomial::Monomial;

#[derive(Debug, Clone, PartialEq)]
pub struct Element<C: Coefficient> {
    terms: BTreeMap<Monomial, C>,
}

/// Per-type degree of an element: the common vector if homogeneous,
/// otherwise one vector per term.
#[derive(Debug, Clone, PartialEq)]
pub enum Degrees {
    Homogeneous(Vec<HalfInt>),
    PerTerm(Vec<(Monomial, Vec<HalfInt>)>),
}

impl<C: Coefficient> Default for Element<C> {
    fn default() -> Self {
        Element { terms: BTreeMap::new() }
    }
}

impl<C: Coefficient> Element<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Element { terms }
    }

    pub fn constant(c: C) -> Self {
        Self::from_monomial(Monomial::one(), c)
    }

    pub fn var(site: i64, c: C) -> Self {
        Self::from_monomial(Monomial::var(site, HalfInt::ONE), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn insert_add(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Element { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.insert_add(m.clone(), v.mul(c));
        }
        out
    }

    /// s-exponent picked up when the canonical words of m1 and m2 are
    /// concatenated and re-sorted into descending site order: every cross
    /// pair (i in m1, j in m2) with i < j contributes B(t_i,t_j) a_i b_j.
    fn cross_s_exp(ctx: &AlgebraContext, m1: &Monomial, m2: &Monomial) -> Result<i64> {
        let mut e = 0i64;
        for (i, a) in m1.pairs() {
            let ti = ctx.site_type(*i)?;
            for (j, b) in m2.pairs() {
                if i < j {
                    let tj = ctx.site_type(*j)?;
                    e += ctx.pairing(ti, tj) * a * b;
                }
            }
        }
        Ok(e)
    }

    pub fn mul(&self, ctx: &AlgebraContext, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = Self::cross_s_exp(ctx, m1, m2)?;
                let c = c1.mul(c2).mul_s_pow(e)?;
                out.insert_add(m1.merged(m2), c);
            }
        }
        Ok(out)
    }

    /// x^n for n >= 0; x^0 is 1 (the unit of a zero element's ring is not
    /// recoverable, so 0^0 = 0 here).
    pub fn pow(&self, ctx: &AlgebraContext, n: u32) -> Result<Self> {
        if n == 0 {
            return Ok(match self.terms.values().next() {
                Some(c) => Self::constant(c.one_like()),
                None => Self::zero(),
            });
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(ctx, self)?;
        }
        Ok(acc)
    }

    /// [a, b] = ab - ba.
    pub fn commutator(ctx: &AlgebraContext, a: &Self, b: &Self) -> Result<Self> {
        Ok(a.mul(ctx, b)?.sub(&b.mul(ctx, a)?))
    }

    /// [a, b]_q = ab - q^(<deg a, deg b>) ba, the pairing extended bilinearly
    /// over the terms of a; b must be homogeneous.
    pub fn graded_commutator(ctx: &AlgebraContext, a: &Self, b: &Self) -> Result<Self> {
        let db = match b.degree(ctx)? {
            Degrees::Homogeneous(d) => d,
            Degrees::PerTerm(_) => return Err(Error::NotHomogeneous),
        };
        let mut out = a.mul(ctx, b)?;
        for (m, c) in &a.terms {
            let da = Self::monomial_degree(ctx, m)?;
            // s-exponent of q^{<da, db>}
            let mut e = 0i64;
            for (t1, x) in da.iter().enumerate() {
                for (t2, y) in db.iter().enumerate() {
                    e += ctx.pairing(t1, t2) * x.doubled() * y.doubled();
                }
            }
            let single = Self::from_monomial(m.clone(), c.clone());
            let back = b.mul(ctx, &single)?;
            for (bm, bc) in back.terms {
                out.insert_add(bm, bc.mul_s_pow(e)?.neg());
            }
        }
        Ok(out)
    }

    fn monomial_degree(ctx: &AlgebraContext, m: &Monomial) -> Result<Vec<HalfInt>> {
        let mut d = vec![HalfInt::ZERO; ctx.num_types()];
        for (s, e) in m.pairs() {
            d[ctx.site_type(*s)?] += HalfInt::half(*e);
        }
        Ok(d)
    }

    /// Per-type degree vectors.
    pub fn degree(&self, ctx: &AlgebraContext) -> Result<Degrees> {
        let mut common: Option<Vec<HalfInt>> = None;
        let mut per = Vec::new();
        let mut homogeneous = true;
        for m in self.terms.keys() {
            let d = Self::monomial_degree(ctx, m)?;
            if let Some(c) = &common {
                if *c != d {
                    homogeneous = false;
                }
            } else {
                common = Some(d.clone());
            }
            per.push((m.clone(), d));
        }
        if homogeneous {
            Ok(Degrees::Homogeneous(common.unwrap_or_default()))
        } else {
            Ok(Degrees::PerTerm(per))
        }
    }

    /// Total degree if homogeneous.
    pub fn total_degree(&self, ctx: &AlgebraContext) -> Result<Option<HalfInt>> {
        match self.degree(ctx)? {
            Degrees::Homogeneous(d) => {
                Ok(Some(d.into_iter().fold(HalfInt::ZERO, |a, b| a + b)))
            }
            Degrees::PerTerm(_) => Ok(None),
        }
    }

    pub fn max_weight2(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.weight2()).max()
    }

    /// Keep terms with doubled weight >= cut2.
    pub fn truncated(&self, cut2: i64) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight2() >= cut2)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Shift all sites by k (the registry must cover the shifted sites).
    pub fn shifted(&self, k: i64) -> Self {
        Element {
            terms: self.terms.iter().map(|(m, c)| (m.shifted(k), c.clone())).collect(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Element<D> {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<D: Coefficient>(
        &self,
        f: impl Fn(&C) -> Result<D>,
    ) -> Result<Element<D>> {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn display(&self, ctx: &AlgebraContext) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(m, _)| (-m.weight2(), (*m).clone()));
        items
            .iter()
            .map(|(m, c)| format!("({}) {}", c, m.display(ctx)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Element<crate::coeffs::RatFunc> {
    /// The bar involution: reverse every factor order and send q to q^(-1).
    /// This is the anti-automorphism of the exchange algebra (reversal alone
    /// flips the exchange constant, so it must be paired with the bar).
    pub fn bar_reversed(&self, ctx: &AlgebraContext) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            // the ascending word equals q^(sigma/4) times the canonical one,
            // with sigma summed over site pairs of the monomial
            let mut e = 0i64;
            let ps = m.pairs();
            for (k, (i, a)) in ps.iter().enumerate() {
                let ti = ctx.site_type(*i)?;
                for (j, b) in &ps[k + 1..] {
                    e += ctx.pairing(ti, ctx.site_type(*j)?) * a * b;
                }
            }
            out.insert_add(m.clone(), c.bar().scale_q(e));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::RatFunc;

    type El = Element<RatFunc>;

    fn x(site: i64) -> El {
        El::var(site, RatFunc::one())
    }

    #[test]
    fn product_reorders() {
        let ctx = AlgebraContext::sl2_lattice(1..=3);
        // x1 * x2 = q * (x2 x1)
        let p = x(1).mul(&ctx, &x(2)).unwrap();
        let m = Monomial::from_pairs([(1, HalfInt::ONE), (2, HalfInt::ONE)]);
        assert_eq!(p.num_terms(), 1);
        assert!(p.coeff(&m).unwrap().eq(&RatFunc::q_pow(1)));
    }

    #[test]
    fn inverse_cancels() {
        let ctx = AlgebraContext::sl2_lattice(1..=3);
        let xi = El::from_monomial(Monomial::var(1, HalfInt::new(-1)), RatFunc::one());
        let p = x(1).mul(&ctx, &xi).unwrap();
        assert!(p.coeff(&Monomial::one()).unwrap().eq(&RatFunc::one()));
    }

    #[test]
    fn square_of_sum() {
        let ctx = AlgebraContext::sl2_lattice(1..=3);
        let s = x(1).add(&x(2));
        let p = s.mul(&ctx, &s).unwrap();
        // x2^2 + (1+q) x2 x1 + x1^2
        assert_eq!(p.num_terms(), 3);
        let cross = Monomial::from_pairs([(1, HalfInt::ONE), (2, HalfInt::ONE)]);
        let expect = RatFunc::one().add(&RatFunc::q_pow(1));
        assert!(p.coeff(&cross).unwrap().eq(&expect));
    }

    #[test]
    fn commutators() {
        let ctx = AlgebraContext::sl2_lattice(1..=3);
        assert!(El::commutator(&ctx, &x(1), &x(1)).unwrap().is_zero());
        let c = El::commutator(&ctx, &x(1), &x(2)).unwrap();
        let m = Monomial::from_pairs([(1, HalfInt::ONE), (2, HalfInt::ONE)]);
        let expect = RatFunc::q_pow(1).sub(&RatFunc::one());
        assert!(c.coeff(&m).unwrap().eq(&expect));
    }

    #[test]
    fn zero_degree_transparency() {
        // degree-0 element on sites {2,3}: commutes with x1 and with x4
        let ctx = AlgebraContext::sl2_lattice(1..=4);
        let m = Monomial::from_pairs([(2, HalfInt::ONE), (3, HalfInt::new(-1))]);
        let g = El::from_monomial(m, RatFunc::one());
        assert!(El::commutator(&ctx, &x(1), &g).unwrap().is_zero());
        assert!(El::commutator(&ctx, &x(4), &g).unwrap().is_zero());
    }

    #[test]
    fn degrees() {
        let ctx = AlgebraContext::sl3(2);
        let e = x(1).mul(&ctx, &x(2)).unwrap();
        match e.degree(&ctx).unwrap() {
            Degrees::Homogeneous(d) => assert_eq!(d, vec![HalfInt::ONE, HalfInt::ONE]),
            _ => panic!("expected homogeneous"),
        }
        let mixed = x(1).add(&x(1).mul(&ctx, &x(1)).unwrap());
        assert!(matches!(mixed.degree(&ctx).unwrap(), Degrees::PerTerm(_)));
        assert_eq!(mixed.total_degree(&ctx).unwrap(), None);
    }

    #[test]
    fn graded_commutator_weights() {
        let ctx = AlgebraContext::sl2_lattice(1..=3);
        // [x1, x2]_q = x1 x2 - q^{B} x2 x1 = q x2x1 - q x2x1 = 0
        let g = El::graded_commutator(&ctx, &x(1), &x(2)).unwrap();
        assert!(g.is_zero());
        // non-homogeneous right operand rejected
        let bad = x(2).add(&x(2).mul(&ctx, &x(2)).unwrap());
        assert_eq!(
            El::graded_commutator(&ctx, &x(1), &bad),
            Err(Error::NotHomogeneous)
        );
    }

    #[test]
    fn bar_reversal_is_antimultiplicative() {
        let ctx = AlgebraContext::sl2_lattice(1..=4);
        let a = x(1).add(&x(2).mul(&ctx, &x(3)).unwrap());
        let b = x(2).add(&x(4));
        let lhs = a.mul(&ctx, &b).unwrap().bar_reversed(&ctx).unwrap();
        let rhs = b
            .bar_reversed(&ctx)
            .unwrap()
            .mul(&ctx, &a.bar_reversed(&ctx).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        // involutive
        let back = lhs.bar_reversed(&ctx).unwrap();
        assert_eq!(back, a.mul(&ctx, &b).unwrap());
    }
}
