//! Truncated series under the site-weight filtration.
//!
//! A series stores only terms of weight >= its cut; everything below the cut
//! is unknown. `None` as a cut means the element is exact (cut at -infinity).
//! Multiplication picks the tightest cut under which every retained term is
//! exactly correct: cut(ab) = max(cut(a) + lead(b), cut(b) + lead(a)).

use crate::coeffs::RatFunc;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::skew::context::AlgebraContext;
use crate::skew::element::Element;
use crate::skew::monomial::Monomial;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    body: Element<RatFunc>,
    /// Doubled weight below which terms are unknown; None = exact.
    cut2: Option<i64>,
}

/// max over {-inf} ∪ i64: None acts as -infinity.
fn omax(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(x), Some(y)) => Some(x.max(y)),
    }
}

/// a + b where None = -infinity absorbs.
fn oadd(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl TruncatedSeries {
    pub fn new(body: Element<RatFunc>, cut2: Option<i64>) -> Self {
        let body = match cut2 {
            Some(c) => body.truncated(c),
            None => body,
        };
        TruncatedSeries { body, cut2 }
    }

    pub fn exact(body: Element<RatFunc>) -> Self {
        TruncatedSeries { body, cut2: None }
    }

    pub fn one() -> Self {
        Self::exact(Element::constant(RatFunc::one()))
    }

    pub fn zero_at(cut2: Option<i64>) -> Self {
        TruncatedSeries { body: Element::zero(), cut2 }
    }

    pub fn body(&self) -> &Element<RatFunc> {
        &self.body
    }

    pub fn cut2(&self) -> Option<i64> {
        self.cut2
    }

    pub fn cut(&self) -> Option<HalfInt> {
        self.cut2.map(HalfInt::half)
    }

    /// Weight of the heaviest stored term.
    pub fn lead2(&self) -> Option<i64> {
        self.body.max_weight2()
    }

    pub fn lead_weight(&self) -> Option<HalfInt> {
        self.lead2().map(HalfInt::half)
    }

    /// Upper bound on the weight of any (stored or unknown) nonzero term.
    fn lead_bound(&self) -> Option<i64> {
        omax(self.lead2(), self.cut2)
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.cut2.is_none()
    }

    /// Re-truncate to a coarser (higher) cut, or keep as is if already coarser.
    pub fn with_cut2(&self, cut2: i64) -> Self {
        let c = omax(self.cut2, Some(cut2));
        Self::new(self.body.clone(), c)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.body.add(&other.body), omax(self.cut2, other.cut2))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.body.sub(&other.body), omax(self.cut2, other.cut2))
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { body: self.body.neg(), cut2: self.cut2 }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        TruncatedSeries { body: self.body.scale(c), cut2: self.cut2 }
    }

    pub fn mul(&self, ctx: &AlgebraContext, other: &Self) -> Result<Self> {
        let cut = omax(
            oadd(self.cut2, other.lead_bound()),
            oadd(other.cut2, self.lead_bound()),
        );
        Ok(Self::new(self.body.mul(ctx, &other.body)?, cut))
    }

    /// Series inverse. The input must have a unique heaviest term; a strict
    /// (non-monomial) exact input is rejected since its inverse is an
    /// infinite series.
    pub fn invert(&self, ctx: &AlgebraContext) -> Result<Self> {
        let lead2 = self.lead2().ok_or(Error::NoLeadingMonomial)?;
        let mut leads = self.body.terms().filter(|(m, _)| m.weight2() == lead2);
        let (m_lead, c_lead) = leads.next().ok_or(Error::NoLeadingMonomial)?;
        if leads.next().is_some() {
            return Err(Error::NoLeadingMonomial);
        }
        let m_lead = m_lead.clone();
        let c_lead = c_lead.clone();
        let rest = {
            let mut r = self.body.clone();
            // subtract the leading term
            r.insert_add(m_lead.clone(), c_lead.neg());
            r
        };
        if !rest.is_zero() && self.cut2.is_none() {
            return Err(Error::InfiniteInverse);
        }
        // z = (c m)^{-1}: m-bar with the engine-computed cross factor
        let m_inv = m_lead.inverse();
        let gamma = Element::from_monomial(m_lead.clone(), RatFunc::one())
            .mul(ctx, &Element::from_monomial(m_inv.clone(), RatFunc::one()))?;
        let gamma_c = gamma
            .coeff(&Monomial::one())
            .cloned()
            .ok_or(Error::NoLeadingMonomial)?;
        let z_coeff = c_lead.mul(&gamma_c).inv()?;
        let z = TruncatedSeries::exact(Element::from_monomial(m_inv, z_coeff));
        if rest.is_zero() {
            // pure monomial: exact inverse, but unknown lower terms of a
            // truncated input still limit what we know
            let cut = self.cut2.map(|c| c - 2 * lead2);
            return Ok(Self::new(z.body.clone(), cut));
        }
        let eps = z.mul(ctx, &Self::new(rest, self.cut2))?;
        // the geometric sum is known exactly above eps's own cut; clamp the
        // powers there so the iteration terminates once their leads sink past it
        let target = eps.cut2.expect("eps inherits a finite cut");
        let mut acc = TruncatedSeries::one();
        let mut pow = TruncatedSeries::one();
        loop {
            pow = pow.mul(ctx, &eps)?.neg().with_cut2(target);
            if pow.is_zero() {
                acc = TruncatedSeries::new(acc.body.clone(), omax(acc.cut2, Some(target)));
                break;
            }
            acc = acc.add(&pow);
        }
        acc.mul(ctx, &z)
    }

    pub fn display(&self, ctx: &AlgebraContext) -> String {
        let cut = match self.cut2 {
            Some(c) => format!("  + O(weight < {})", HalfInt::half(c)),
            None => String::new(),
        };
        format!("{}{}", self.body.display(ctx), cut)
    }
}
