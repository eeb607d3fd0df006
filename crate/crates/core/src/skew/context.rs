//! Variable registry, pairing matrix, and tail configuration.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub site: i64,
    pub vtype: usize,
}

/// Sentinel sites standing for the unbounded tails of the screening sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailSites {
    pub minus: i64,
    pub plus: i64,
}

/// Registry of site variables with a symmetric integer pairing matrix on
/// types. Sites are unique; canonical products order factors by strictly
/// descending site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraContext {
    vars: BTreeMap<i64, VarInfo>,
    pairing: Vec<Vec<i64>>,
    tails: Option<TailSites>,
}

impl AlgebraContext {
    pub fn new(vars: Vec<VarInfo>, pairing: Vec<Vec<i64>>) -> Result<Self> {
        for (i, row) in pairing.iter().enumerate() {
            if row.len() != pairing.len() {
                return Err(Error::Invalid("pairing matrix must be square".into()));
            }
            for (j, v) in row.iter().enumerate() {
                if pairing[j][i] != *v {
                    return Err(Error::Invalid("pairing matrix must be symmetric".into()));
                }
            }
        }
        let mut map = BTreeMap::new();
        for v in vars {
            if v.vtype >= pairing.len() {
                return Err(Error::Invalid(format!("variable {} has unregistered type", v.name)));
            }
            if map.insert(v.site, v).is_some() {
                return Err(Error::Invalid("duplicate site in variable registry".into()));
            }
        }
        Ok(AlgebraContext { vars: map, pairing, tails: None })
    }

    /// One variable type, x_i x_j = q^b x_j x_i for i < j.
    pub fn single_type(sites: impl IntoIterator<Item = i64>, b: i64) -> Self {
        let vars = sites
            .into_iter()
            .map(|s| VarInfo { name: format!("x{s}"), site: s, vtype: 0 })
            .collect();
        Self::new(vars, vec![vec![b]]).expect("single-type registry is well formed")
    }

    /// The lattice preset: single type, x_i x_j = q x_j x_i.
    pub fn sl2_lattice(sites: impl IntoIterator<Item = i64>) -> Self {
        Self::single_type(sites, 1)
    }

    /// Two interleaved types on sites 1..=2k: odd sites type 0, even type 1,
    /// with the rank-2 pairing matrix supplied.
    fn interleaved(pairs: usize, pairing: Vec<Vec<i64>>) -> Self {
        let vars = (1..=2 * pairs as i64)
            .map(|s| VarInfo {
                name: format!("x{s}"),
                site: s,
                vtype: if s % 2 == 1 { 0 } else { 1 },
            })
            .collect();
        Self::new(vars, pairing).expect("interleaved registry is well formed")
    }

    pub fn sl3(pairs: usize) -> Self {
        Self::interleaved(pairs, vec![vec![2, -1], vec![-1, 2]])
    }

    pub fn affine_sl2(pairs: usize) -> Self {
        Self::interleaved(pairs, vec![vec![2, -2], vec![-2, 2]])
    }

    /// Register tail variables at sentinel sites min-1 and max+1.
    pub fn with_tails(mut self) -> Self {
        let lo = self.min_site().unwrap_or(0) - 1;
        let hi = self.max_site().unwrap_or(0) + 1;
        let t = self.vars.values().next().map(|v| v.vtype).unwrap_or(0);
        self.vars.insert(lo, VarInfo { name: "Uminus".into(), site: lo, vtype: t });
        self.vars.insert(hi, VarInfo { name: "Uplus".into(), site: hi, vtype: t });
        self.tails = Some(TailSites { minus: lo, plus: hi });
        self
    }

    pub fn tails(&self) -> Option<TailSites> {
        self.tails
    }

    pub fn has_site(&self, site: i64) -> bool {
        self.vars.contains_key(&site)
    }

    pub fn var(&self, site: i64) -> Result<&VarInfo> {
        self.vars.get(&site).ok_or(Error::UnknownSite(site))
    }

    pub fn site_of_name(&self, name: &str) -> Option<i64> {
        self.vars.values().find(|v| v.name == name).map(|v| v.site)
    }

    pub fn site_type(&self, site: i64) -> Result<usize> {
        Ok(self.var(site)?.vtype)
    }

    pub fn num_types(&self) -> usize {
        self.pairing.len()
    }

    pub fn pairing(&self, t1: usize, t2: usize) -> i64 {
        self.pairing[t1][t2]
    }

    /// Window sites excluding tails, ascending.
    pub fn window_sites(&self) -> Vec<i64> {
        self.vars
            .keys()
            .copied()
            .filter(|s| match self.tails {
                Some(t) => *s != t.minus && *s != t.plus,
                None => true,
            })
            .collect()
    }

    /// All registered sites of a given type, ascending.
    pub fn sites_of_type(&self, t: usize) -> Vec<i64> {
        self.vars.values().filter(|v| v.vtype == t).map(|v| v.site).collect()
    }

    pub fn min_site(&self) -> Option<i64> {
        self.vars.keys().next().copied()
    }

    pub fn max_site(&self) -> Option<i64> {
        self.vars.keys().next_back().copied()
    }

    /// s-exponent of the factor picked up by x_i^a x_j^b = q^(e/4) x_j^b x_i^a,
    /// with a, b given as doubled exponents: e = sgn(j - i) * B(t_i, t_j) * a * b.
    pub fn reorder_s_exp(&self, i: i64, da: i64, j: i64, db: i64) -> Result<i64> {
        if i == j {
            return Err(Error::SameSite(i));
        }
        let b = self.pairing(self.site_type(i)?, self.site_type(j)?);
        let sgn = if i < j { 1 } else { -1 };
        Ok(sgn * b * da * db)
    }

    /// The reorder factor as a coefficient: x_i^a x_j^b = gamma x_j^b x_i^a.
    pub fn reorder_pair(
        &self,
        i: i64,
        a: HalfInt,
        j: i64,
        b: HalfInt,
    ) -> Result<crate::coeffs::RatFunc> {
        let e = self.reorder_s_exp(i, a.doubled(), j, b.doubled())?;
        Ok(crate::coeffs::RatFunc::s_pow(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::RatFunc;

    #[test]
    fn lattice_reorder_factors() {
        let ctx = AlgebraContext::sl2_lattice(1..=4);
        // x1 x2 = q x2 x1
        let g = ctx.reorder_pair(1, HalfInt::new(1), 2, HalfInt::new(1)).unwrap();
        assert!(g.eq(&RatFunc::q_pow(1)));
        // half exponents: q^(1/4)
        let g = ctx.reorder_pair(1, HalfInt::half(1), 2, HalfInt::half(1)).unwrap();
        assert!(g.eq(&RatFunc::s_pow(1)));
        // reading the pair the other way inverts the factor
        let g = ctx.reorder_pair(2, HalfInt::new(1), 1, HalfInt::new(1)).unwrap();
        assert!(g.eq(&RatFunc::q_pow(-1)));
    }

    #[test]
    fn affine_cross_type() {
        let ctx = AlgebraContext::affine_sl2(2);
        // x1 x2^{-1} with B(0,1) = -2: q^{(-2)(1)(-1)} = q^2
        let g = ctx.reorder_pair(1, HalfInt::new(1), 2, HalfInt::new(-1)).unwrap();
        assert!(g.eq(&RatFunc::q_pow(2)));
    }

    #[test]
    fn same_site_rejected() {
        let ctx = AlgebraContext::sl2_lattice(1..=2);
        assert_eq!(
            ctx.reorder_s_exp(1, 2, 1, 2),
            Err(Error::SameSite(1))
        );
    }

    #[test]
    fn inverse_factors_cancel() {
        let ctx = AlgebraContext::sl3(2);
        for (i, j) in [(1i64, 2i64), (1, 3), (2, 3), (3, 4)] {
            let a = HalfInt::half(3);
            let b = HalfInt::new(-2);
            let e1 = ctx.reorder_s_exp(i, a.doubled(), j, b.doubled()).unwrap();
            let e2 = ctx.reorder_s_exp(j, b.doubled(), i, a.doubled()).unwrap();
            assert_eq!(e1 + e2, 0);
        }
    }

    #[test]
    fn tails_sit_outside() {
        let ctx = AlgebraContext::sl2_lattice(1..=3).with_tails();
        let t = ctx.tails().unwrap();
        assert_eq!((t.minus, t.plus), (0, 4));
        assert_eq!(ctx.window_sites(), vec![1, 2, 3]);
        assert_eq!(ctx.var(4).unwrap().name, "Uplus");
    }
}
