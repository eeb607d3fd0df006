//! The q -> 1 side: commutative fractional-exponent Laurent expressions,
//! Poisson-bracket rules, and the displayed derivation fields.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Zero};

use crate::halfint::HalfInt;
use crate::virasoro::GeneratorSpec;

/// Slot of a commutative variable: a lattice site or the distinguished tail
/// combination (U+ for the two-point fields, U+ minus trailing sites for the
/// larger ones; which combination is fixed by the field kind).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Site(i64),
    Tail,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Site(i) => write!(f, "x{i}"),
            Slot::Tail => write!(f, "T"),
        }
    }
}

/// Commutative monomial: slot -> doubled half-integer exponent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct CMonomial {
    exps: Vec<(Slot, i64)>,
}

impl CMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(slot: Slot, e: HalfInt) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        CMonomial { exps: vec![(slot, e.doubled())] }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Slot, HalfInt)>) -> Self {
        let mut exps: Vec<(Slot, i64)> = Vec::new();
        for (s, e) in pairs {
            if let Some(p) = exps.iter_mut().find(|(t, _)| *t == s) {
                p.1 += e.doubled();
            } else {
                exps.push((s, e.doubled()));
            }
        }
        exps.retain(|(_, d)| *d != 0);
        exps.sort_unstable();
        CMonomial { exps }
    }

    pub fn pairs(&self) -> &[(Slot, i64)] {
        &self.exps
    }

    pub fn exponent(&self, slot: Slot) -> HalfInt {
        self.exps
            .iter()
            .find(|(s, _)| *s == slot)
            .map(|(_, d)| HalfInt::half(*d))
            .unwrap_or(HalfInt::ZERO)
    }

    pub fn total_degree(&self) -> HalfInt {
        HalfInt::half(self.exps.iter().map(|(_, d)| d).sum())
    }

    fn merged(&self, other: &CMonomial) -> CMonomial {
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
        CMonomial { exps }
    }
}

/// Finite sum of commutative monomials with rational coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CommElement {
    terms: BTreeMap<CMonomial, BigRational>,
}

impl CommElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_monomial(CMonomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn from_monomial(m: CMonomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CommElement { terms }
    }

    pub fn var(slot: Slot, e: HalfInt) -> Self {
        Self::from_monomial(CMonomial::var(slot, e), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn insert_add(&mut self, m: CMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
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
        CommElement { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CommElement { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_add(m1.merged(m2), c1 * c2);
            }
        }
        out
    }

    /// Formal partial derivative: d(v^a)/dv = a v^(a-1).
    pub fn differentiate(&self, slot: Slot) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let a = m.exponent(slot);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<(Slot, HalfInt)> = m
                .pairs()
                .iter()
                .map(|(s, d)| {
                    if *s == slot {
                        (*s, HalfInt::half(d - 2))
                    } else {
                        (*s, HalfInt::half(*d))
                    }
                })
                .collect();
            let factor = BigRational::new(a.doubled().into(), 2.into());
            out.insert_add(CMonomial::from_pairs(rest), c * factor);
        }
        out
    }

    /// Keep terms of doubled weight >= cut2, weights counting Tail at the
    /// given sentinel site.
    pub fn truncated(&self, cut2: i64, tail_site: i64) -> Self {
        CommElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| {
                    m.pairs()
                        .iter()
                        .map(|(s, d)| match s {
                            Slot::Site(i) => i * d,
                            Slot::Tail => tail_site * d,
                        })
                        .sum::<i64>()
                        >= cut2
                })
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for CommElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = if m.pairs().is_empty() {
                    "1".to_string()
                } else {
                    m.pairs()
                        .iter()
                        .map(|(s, d)| {
                            let e = HalfInt::half(*d);
                            if e == HalfInt::ONE {
                                format!("{s}")
                            } else {
                                let (n, den) = e.frac();
                                if den == 1 {
                                    format!("{s}^({n})")
                                } else {
                                    format!("{s}^({n}/{den})")
                                }
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("*")
                };
                format!("({c}) {mono}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// First-order derivation: sum of coefficient * d/d(slot).
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub components: Vec<(CommElement, Slot)>,
}

impl Derivation {
    pub fn new(components: Vec<(CommElement, Slot)>) -> Self {
        Derivation { components }
    }

    pub fn apply(&self, f: &CommElement) -> CommElement {
        let mut out = CommElement::zero();
        for (c, slot) in &self.components {
            out = out.add(&c.mul(&f.differentiate(*slot)));
        }
        out
    }

    /// [self, other] applied to f.
    pub fn bracket_apply(&self, other: &Derivation, f: &CommElement) -> CommElement {
        self.apply(&other.apply(f)).sub(&other.apply(&self.apply(f)))
    }
}

pub fn apply_derivation(d: &Derivation, f: &CommElement) -> CommElement {
    d.apply(f)
}

/// { x_i, f }: the slot rules are +x_i x_j d_j for sites j > i (Tail counts
/// as above every site), -x_i x_j d_j for j < i, and x_i^2 d_i on the
/// diagonal.
pub fn poisson_bracket(i: i64, f: &CommElement) -> CommElement {
    let mut slots: Vec<Slot> = Vec::new();
    for (m, _) in f.terms() {
        for (s, _) in m.pairs() {
            if !slots.contains(s) {
                slots.push(*s);
            }
        }
    }
    let xi = CommElement::var(Slot::Site(i), HalfInt::ONE);
    let mut out = CommElement::zero();
    for s in slots {
        let sign_var = match s {
            Slot::Site(j) if j == i => {
                // x_i^2 d_i
                out = out.add(&xi.mul(&xi).mul(&f.differentiate(s)));
                continue;
            }
            Slot::Site(j) => {
                let v = CommElement::var(s, HalfInt::ONE);
                if j > i {
                    v
                } else {
                    v.neg()
                }
            }
            Slot::Tail => CommElement::var(s, HalfInt::ONE),
        };
        out = out.add(&xi.mul(&sign_var).mul(&f.differentiate(s)));
    }
    out
}

/// Which displayed field triple to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    TwoPoint,
    ThreePoint,
    FourPoint,
}

impl RepKind {
    /// Number of explicit site slots in the displayed fields.
    fn explicit_sites(self) -> i64 {
        match self {
            RepKind::TwoPoint => 2,
            // the four-point display repeats the three-point fields with a
            // wider tail combination
            RepKind::ThreePoint | RepKind::FourPoint => 3,
        }
    }

    /// What the Tail slot abbreviates, for reporting.
    pub fn tail_meaning(self) -> &'static str {
        match self {
            RepKind::TwoPoint => "U+",
            RepKind::ThreePoint => "U+ - x3",
            RepKind::FourPoint => "U+ - x3 - x4",
        }
    }
}

/// The displayed (E, H, F) triple: F = d/dT, H the degree field over the
/// explicit slots and T, and E the triangular field
/// sum_i x_i (x_i + ... + x_r + T) d_i + T^2 d_T.
pub fn rep_fields(kind: RepKind) -> (Derivation, Derivation, Derivation) {
    let r = kind.explicit_sites();
    let one = HalfInt::ONE;
    let f = Derivation::new(vec![(CommElement::one(), Slot::Tail)]);
    let mut h = vec![(CommElement::var(Slot::Tail, one), Slot::Tail)];
    for i in 1..=r {
        h.push((CommElement::var(Slot::Site(i), one), Slot::Site(i)));
    }
    let h = Derivation::new(h);
    let mut e = vec![(
        CommElement::var(Slot::Tail, one).mul(&CommElement::var(Slot::Tail, one)),
        Slot::Tail,
    )];
    for i in 1..=r {
        let xi = CommElement::var(Slot::Site(i), one);
        let mut sum = CommElement::var(Slot::Tail, one);
        for j in i..=r {
            sum = sum.add(&CommElement::var(Slot::Site(j), one));
        }
        e.push((xi.mul(&sum), Slot::Site(i)));
    }
    let e = Derivation::new(e);
    (e, h, f)
}

/// The degree field sum v d/dv over every slot appearing in f.
pub fn degree_field(f: &CommElement) -> Derivation {
    let mut slots: Vec<Slot> = Vec::new();
    for (m, _) in f.terms() {
        for (s, _) in m.pairs() {
            if !slots.contains(s) {
                slots.push(*s);
            }
        }
    }
    Derivation::new(
        slots
            .into_iter()
            .map(|s| (CommElement::var(s, HalfInt::ONE), s))
            .collect(),
    )
}

/// Applications of all three fields to f, reported without assertions.
#[derive(Debug, Clone)]
pub struct HwReport {
    pub h_image: CommElement,
    pub e_image: CommElement,
    pub f_image: CommElement,
}

pub fn hw_report(kind: RepKind, f: &CommElement) -> HwReport {
    let (e, h, lower) = rep_fields(kind);
    HwReport {
        h_image: h.apply(f),
        e_image: e.apply(f),
        f_image: lower.apply(f),
    }
}

/// Commutative image of a generator spec, truncated at cut2 (doubled weight).
/// Powers of sums expand with ordinary binomial coefficients.
pub fn comm_expand(spec: &GeneratorSpec, cut2: i64) -> CommElement {
    let mut out = CommElement::one();
    let leads: Vec<i64> = spec
        .factors
        .iter()
        .map(|(s, e)| s.iter().max().unwrap() * e.doubled())
        .collect();
    let total: i64 = leads.iter().sum();
    for (idx, (sites, exp)) in spec.factors.iter().enumerate() {
        let fcut = cut2 - (total - leads[idx]);
        let f = comm_power(sites, *exp, fcut);
        out = out.mul(&f);
    }
    out.truncated(cut2, i64::MAX / 4)
}

fn comm_power(sites: &[i64], gamma: HalfInt, cut2: i64) -> CommElement {
    let mut sites = sites.to_vec();
    sites.sort_unstable();
    if sites.len() == 1 {
        return CommElement::var(Slot::Site(sites[0]), gamma);
    }
    let i0 = sites[0];
    let rest = &sites[1..];
    let top = *sites.last().unwrap();
    let exact = gamma.as_integer().map(|n| n >= 0).unwrap_or(false);
    let mut out = CommElement::zero();
    let mut coeff = BigRational::one();
    let mut k: i64 = 0;
    loop {
        if exact && k > gamma.as_integer().unwrap() {
            break;
        }
        let lead2 = (gamma.doubled() - 2 * k) * top + 2 * k * i0;
        if !exact && lead2 < cut2 {
            break;
        }
        let sub = comm_power(rest, gamma - HalfInt::new(k), cut2 - 2 * k * i0);
        let xk = CommElement::var(Slot::Site(i0), HalfInt::new(k));
        out = out.add(&sub.mul(&xk).scale(&coeff));
        k += 1;
        // ordinary binomial: multiply by (gamma - k + 1)/k
        let num = BigRational::new((gamma.doubled() - 2 * k + 2).into(), 2.into());
        coeff = coeff * num / BigRational::from_integer(k.into());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn x(i: i64) -> CommElement {
        CommElement::var(Slot::Site(i), HalfInt::ONE)
    }

    #[test]
    fn derivative_of_fractional_power() {
        let f = CommElement::var(Slot::Site(1), HalfInt::half(1));
        let d = f.differentiate(Slot::Site(1));
        let expect = CommElement::var(Slot::Site(1), HalfInt::half(-1)).scale(&rat(1, 2));
        assert_eq!(d, expect);
    }

    #[test]
    fn leibniz_rule() {
        let (e, h, f) = rep_fields(RepKind::TwoPoint);
        let a = x(1).mul(&x(2)).add(&CommElement::var(Slot::Tail, HalfInt::half(3)));
        let b = x(2).add(&CommElement::var(Slot::Site(1), HalfInt::half(-1)));
        for d in [&e, &h, &f] {
            let lhs = d.apply(&a.mul(&b));
            let rhs = d.apply(&a).mul(&b).add(&a.mul(&d.apply(&b)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn h_is_the_degree_field() {
        let (_, h, _) = rep_fields(RepKind::TwoPoint);
        // degree d monomial maps to d * itself
        let m = CMonomial::from_pairs([
            (Slot::Site(1), HalfInt::half(3)),
            (Slot::Site(2), HalfInt::new(-1)),
            (Slot::Tail, HalfInt::half(1)),
        ]);
        let f = CommElement::from_monomial(m, BigRational::one());
        let expect = f.scale(&rat(1, 1));
        assert_eq!(h.apply(&f), expect); // total degree 3/2 - 1 + 1/2 = 1
        // degree-0 elements are annihilated by the degree field on their slots
        let g = comm_expand(&crate::virasoro::preset("root-quad").unwrap(), -8);
        assert!(!g.is_zero());
        assert!(degree_field(&g).apply(&g).is_zero());
    }

    #[test]
    fn poisson_values() {
        // {x1, x2} = x1 x2
        assert_eq!(poisson_bracket(1, &x(2)), x(1).mul(&x(2)));
        // {x2, x1^n} = -n x2 x1^n
        let f = CommElement::var(Slot::Site(1), HalfInt::new(3));
        let expect = x(2).mul(&f).scale(&rat(-3, 1));
        assert_eq!(poisson_bracket(2, &f), expect);
        // {x1, x1^n} = n x1^(n+1)
        let f = CommElement::var(Slot::Site(1), HalfInt::new(3));
        let expect = CommElement::var(Slot::Site(1), HalfInt::new(4)).scale(&rat(3, 1));
        assert_eq!(poisson_bracket(1, &f), expect);
        // antisymmetry on generators
        let b12 = poisson_bracket(1, &x(2));
        let b21 = poisson_bracket(2, &x(1));
        assert_eq!(b12, b21.neg());
    }

    #[test]
    fn two_point_field_shapes() {
        let (e, h, f) = rep_fields(RepKind::TwoPoint);
        // F applied to T^2 is 2T
        let t2 = CommElement::var(Slot::Tail, HalfInt::new(2));
        assert_eq!(
            f.apply(&t2),
            CommElement::var(Slot::Tail, HalfInt::ONE).scale(&rat(2, 1))
        );
        // H = T dT + x1 d1 + x2 d2
        assert_eq!(h.components.len(), 3);
        // E x2 = x2^2 + x2 T
        let ex2 = e.apply(&x(2));
        let expect = x(2)
            .mul(&x(2))
            .add(&x(2).mul(&CommElement::var(Slot::Tail, HalfInt::ONE)));
        assert_eq!(ex2, expect);
    }

    #[test]
    fn hw_report_two_point() {
        // f = commutative image of x1^(1/2) x2^(-1/2) (x1+x2)^(-1/2)
        let spec = GeneratorSpec::new(vec![
            (vec![1], HalfInt::half(1)),
            (vec![2], HalfInt::half(-1)),
            (vec![1, 2], HalfInt::half(-1)),
        ]);
        let f = comm_expand(&spec, spec.lead2() - 12);
        let rep = hw_report(RepKind::TwoPoint, &f);
        // H f = -f/2 (degree -1/2)
        assert_eq!(rep.h_image, f.scale(&rat(-1, 2)));
        // F f = 0: no tail dependence
        assert!(rep.f_image.is_zero());
        // E f is computed and reported; the displayed field does not
        // annihilate it (its terms carry nonzero coefficients)
        assert!(!rep.e_image.is_zero());
    }

    #[test]
    fn displayed_triple_composition() {
        // The displayed fields do not close into an exact triple; the true
        // composition relations on the monomial basis are frozen here:
        // [H,E] = E, [H,F] = -F, [F,E] = 2T dT + x1 d1 + x2 d2.
        let (e, h, f) = rep_fields(RepKind::TwoPoint);
        let fe = Derivation::new(vec![
            (
                CommElement::var(Slot::Tail, HalfInt::ONE).scale(&rat(2, 1)),
                Slot::Tail,
            ),
            (x(1), Slot::Site(1)),
            (x(2), Slot::Site(2)),
        ]);
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                for t in -2..=2i64 {
                    let m = CommElement::from_monomial(
                        CMonomial::from_pairs([
                            (Slot::Site(1), HalfInt::new(a)),
                            (Slot::Site(2), HalfInt::new(b)),
                            (Slot::Tail, HalfInt::new(t)),
                        ]),
                        BigRational::one(),
                    );
                    assert_eq!(h.bracket_apply(&e, &m), e.apply(&m), "[H,E] = E");
                    assert_eq!(h.bracket_apply(&f, &m), f.apply(&m).neg(), "[H,F] = -F");
                    assert_eq!(f.bracket_apply(&e, &m), fe.apply(&m), "[F,E]");
                }
            }
        }
    }

    #[test]
    fn four_point_fields_match_displayed_shape() {
        let (e, h, f) = rep_fields(RepKind::FourPoint);
        // same triangular three-site shape with a wider tail combination
        assert_eq!(h.components.len(), 4);
        assert_eq!(e.components.len(), 4);
        assert_eq!(f.components.len(), 1);
        assert_eq!(RepKind::FourPoint.tail_meaning(), "U+ - x3 - x4");
    }
}
