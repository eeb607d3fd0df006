//! Canonical monomials: site -> half-integer exponent, printed in strictly
//! descending site order.

use crate::halfint::HalfInt;
use crate::skew::context::AlgebraContext;

/// Sorted (site, doubled exponent) pairs, ascending by site, no zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    exps: Vec<(i64, i64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(site: i64, exp: HalfInt) -> Self {
        if exp.is_zero() {
            return Self::one();
        }
        Monomial { exps: vec![(site, exp.doubled())] }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, HalfInt)>) -> Self {
        let mut exps: Vec<(i64, i64)> = Vec::new();
        for (s, e) in pairs {
            if let Some(p) = exps.iter_mut().find(|(t, _)| *t == s) {
                p.1 += e.doubled();
            } else {
                exps.push((s, e.doubled()));
            }
        }
        exps.retain(|(_, d)| *d != 0);
        exps.sort_unstable();
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Ascending (site, doubled exponent) pairs.
    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.exps
    }

    pub fn exponent(&self, site: i64) -> HalfInt {
        self.exps
            .iter()
            .find(|(s, _)| *s == site)
            .map(|(_, d)| HalfInt::half(*d))
            .unwrap_or(HalfInt::ZERO)
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        self.exps.iter().map(|(s, _)| *s)
    }

    /// Doubled site-weight: sum of site * doubled exponent, i.e. 2 w(m).
    pub fn weight2(&self) -> i64 {
        self.exps.iter().map(|(s, d)| s * d).sum()
    }

    pub fn weight(&self) -> HalfInt {
        HalfInt::half(self.weight2())
    }

    /// Total exponent sum (the single-type degree).
    pub fn total_degree(&self) -> HalfInt {
        HalfInt::half(self.exps.iter().map(|(_, d)| d).sum())
    }

    /// Merge exponents of a product; the q-factor is computed separately.
    pub fn merged(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (s, d) in &other.exps {
            if let Some(p) = exps.iter_mut().find(|(t, _)| t == s) {
                p.1 += d;
            } else {
                exps.push((*s, *d));
            }
        }
        exps.retain(|(_, d)| *d != 0);
        exps.sort_unstable();
        Monomial { exps }
    }

    pub fn inverse(&self) -> Monomial {
        Monomial { exps: self.exps.iter().map(|(s, d)| (*s, -d)).collect() }
    }

    /// Shift every site by k.
    pub fn shifted(&self, k: i64) -> Monomial {
        let mut exps: Vec<_> = self.exps.iter().map(|(s, d)| (s + k, *d)).collect();
        exps.sort_unstable();
        Monomial { exps }
    }

    pub fn display(&self, ctx: &AlgebraContext) -> String {
        if self.exps.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (s, d) in self.exps.iter().rev() {
            let name = ctx.var(*s).map(|v| v.name.clone()).unwrap_or_else(|_| format!("x{s}"));
            let e = HalfInt::half(*d);
            if e == HalfInt::ONE {
                parts.push(name);
            } else {
                let (n, den) = e.frac();
                if den == 1 {
                    parts.push(format!("{name}^({n})"));
                } else {
                    parts.push(format!("{name}^({n}/{den})"));
                }
            }
        }
        parts.join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_and_weight() {
        let m = Monomial::from_pairs([
            (3, HalfInt::half(1)),
            (1, HalfInt::new(-1)),
            (3, HalfInt::half(1)),
        ]);
        // the two half exponents at site 3 merge to 1
        assert_eq!(m.exponent(3), HalfInt::ONE);
        assert_eq!(m.weight2(), 2 * 3 - 2 * 1);
        assert_eq!(m.total_degree(), HalfInt::ZERO);
        assert!(m.merged(&m.inverse()).is_one());
    }

    #[test]
    fn display_descending() {
        let ctx = AlgebraContext::sl2_lattice(1..=4);
        let m = Monomial::from_pairs([(2, HalfInt::half(-1)), (4, HalfInt::new(2))]);
        assert_eq!(m.display(&ctx), "x4^(2)*x2^(-1/2)");
    }
}
