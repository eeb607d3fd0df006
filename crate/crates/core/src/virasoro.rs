//! Lattice generator candidates: ordered products of powers of site-variable
//! sums, the shift operator, invariance reports against the screening sum,
//! and the F / rho ladder built from graded commutators.

use crate::coeffs::RatFunc;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::qcomb::expand_power;
use crate::skew::{AlgebraContext, Element, TruncatedSeries};

/// Ordered product of factors (site set)^exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub factors: Vec<(Vec<i64>, HalfInt)>,
}

impl GeneratorSpec {
    pub fn new(factors: Vec<(Vec<i64>, HalfInt)>) -> Self {
        GeneratorSpec { factors }
    }

    pub fn total_degree(&self) -> HalfInt {
        self.factors
            .iter()
            .fold(HalfInt::ZERO, |acc, (_, e)| acc + *e)
    }

    /// All sites mentioned, ascending.
    pub fn sites(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.factors.iter().flat_map(|(s, _)| s.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Weight of the leading monomial (doubled): each factor's heaviest part
    /// is its top site to the full exponent.
    pub fn lead2(&self) -> i64 {
        self.factors
            .iter()
            .map(|(s, e)| s.iter().max().unwrap() * e.doubled())
            .sum()
    }

    /// Shift every site index by k.
    pub fn shifted(&self, k: i64) -> GeneratorSpec {
        GeneratorSpec {
            factors: self
                .factors
                .iter()
                .map(|(s, e)| (s.iter().map(|i| i + k).collect(), *e))
                .collect(),
        }
    }
}

/// The shift operator on specs.
pub fn shift(spec: &GeneratorSpec, k: i64) -> GeneratorSpec {
    spec.shifted(k)
}

/// Ordered product of the factor expansions, truncated at cut2.
pub fn build_generator(
    ctx: &AlgebraContext,
    spec: &GeneratorSpec,
    cut2: Option<i64>,
) -> Result<TruncatedSeries> {
    if spec.factors.is_empty() {
        return Ok(TruncatedSeries::one());
    }
    let leads: Vec<i64> = spec
        .factors
        .iter()
        .map(|(s, e)| s.iter().max().unwrap() * e.doubled())
        .collect();
    let total: i64 = leads.iter().sum();
    let mut out: Option<TruncatedSeries> = None;
    for (idx, (sites, exp)) in spec.factors.iter().enumerate() {
        // the factor must reach cut2 minus what the other factors contribute
        let fcut = cut2.map(|c| c - (total - leads[idx]));
        let f = expand_power(ctx, sites, *exp, fcut)?;
        out = Some(match out {
            None => f,
            Some(acc) => acc.mul(ctx, &f)?,
        });
    }
    let series = out.unwrap();
    Ok(match cut2 {
        Some(c) => series.with_cut2(c),
        None => series,
    })
}

/// Outcome of an invariance check: the residual of the plain commutator with
/// the full screening sum (tails included), plus diagnostics.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub residual: TruncatedSeries,
    /// Doubled cut weight of the residual.
    pub cut2: Option<i64>,
    pub pass: bool,
    /// (site, number of residual terms from [x_site, G]).
    pub per_site: Vec<(i64, usize)>,
    /// Both tail brackets vanished identically (an engine theorem for
    /// degree-0 generators).
    pub tails_vanish: bool,
    /// lambda with Sigma_window G = lambda G Sigma_window above the cut,
    /// when such a scalar exists. lambda = 1 is plain invariance.
    pub quasi_factor: Option<RatFunc>,
}

/// Commute the full screening sum (U- + window + U+) past the generator and
/// report the residual. The spec must have total degree zero.
pub fn check_invariance(
    ctx: &AlgebraContext,
    spec: &GeneratorSpec,
    depth: u32,
) -> Result<InvarianceReport> {
    let deg = spec.total_degree();
    if !deg.is_zero() {
        return Err(Error::NonzeroDegree(deg));
    }
    for s in spec.sites() {
        if !ctx.has_site(s) {
            return Err(Error::UnknownSite(s));
        }
    }
    let cut2 = Some(spec.lead2() - 2 * depth as i64);
    let g = build_generator(ctx, spec, cut2)?;
    check_invariance_series(ctx, &g)
}

/// The same check on an already-built series.
pub fn check_invariance_series(
    ctx: &AlgebraContext,
    g: &TruncatedSeries,
) -> Result<InvarianceReport> {
    match g.body().total_degree(ctx)? {
        Some(d) if d.is_zero() => {}
        Some(d) => return Err(Error::NonzeroDegree(d)),
        None => return Err(Error::NotHomogeneous),
    }
    let g = g.clone();
    let var = |site: i64| TruncatedSeries::exact(Element::var(site, RatFunc::one()));
    let mut tails_vanish = true;
    if let Some(t) = ctx.tails() {
        for site in [t.minus, t.plus] {
            let b = commutator_series(ctx, &var(site), &g)?;
            if !b.is_zero() {
                tails_vanish = false;
            }
        }
    }
    let mut per_site = Vec::new();
    let mut residual: Option<TruncatedSeries> = None;
    let mut sigma = TruncatedSeries::exact(Element::zero());
    for site in ctx.window_sites() {
        let b = commutator_series(ctx, &var(site), &g)?;
        per_site.push((site, b.body().num_terms()));
        sigma = sigma.add(&var(site));
        residual = Some(match residual {
            None => b,
            Some(acc) => acc.add(&b),
        });
    }
    let residual = residual.unwrap_or_else(|| TruncatedSeries::exact(Element::zero()));
    let pass = residual.is_zero() && tails_vanish;
    // quasi-commutation factor over the window sum
    let p = sigma.mul(ctx, &g)?;
    let qq = g.mul(ctx, &sigma)?;
    let quasi_factor = proportional_compare(&p, &qq);
    Ok(InvarianceReport { cut2: residual.cut2(), residual, pass, per_site, tails_vanish, quasi_factor })
}

/// Same check with every coefficient specialized at q = 1 before the verdict.
pub fn check_invariance_q1(
    ctx: &AlgebraContext,
    spec: &GeneratorSpec,
    depth: u32,
) -> Result<InvarianceReport> {
    let mut rep = check_invariance(ctx, spec, depth)?;
    let body = rep
        .residual
        .body()
        .try_map_coeffs(|c| c.eval_s_one())?;
    rep.residual = TruncatedSeries::new(body, rep.residual.cut2());
    rep.pass = rep.residual.is_zero() && rep.tails_vanish;
    Ok(rep)
}

fn commutator_series(
    ctx: &AlgebraContext,
    a: &TruncatedSeries,
    b: &TruncatedSeries,
) -> Result<TruncatedSeries> {
    Ok(a.mul(ctx, b)?.sub(&b.mul(ctx, a)?))
}

/// Scalar lambda with a = lambda * b above the smaller cut, if one exists.
pub fn proportional_compare(a: &TruncatedSeries, b: &TruncatedSeries) -> Option<RatFunc> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let mut lambda: Option<RatFunc> = None;
    if a.body().num_terms() != b.body().num_terms() {
        return None;
    }
    for ((ma, ca), (mb, cb)) in a.body().terms().zip(b.body().terms()) {
        if ma != mb {
            return None;
        }
        match &lambda {
            None => lambda = Some(ca.div(cb).ok()?),
            Some(l) => {
                if !ca.eq(&l.mul(cb)) {
                    return None;
                }
            }
        }
    }
    lambda
}

/// x_i x_{i+1}^(-1) x_{i+2} (x_i + x_{i+1} + x_{i+2})^(-1), or the
/// inverse-ordered variant (x_i+x_{i+1}+x_{i+2}) x_i^(-1) x_{i+1} x_{i+2}^(-1).
pub fn classical_trivia(i: i64, inverse_order: bool) -> GeneratorSpec {
    let h = HalfInt::ONE;
    if inverse_order {
        GeneratorSpec::new(vec![
            (vec![i, i + 1, i + 2], h),
            (vec![i], -h),
            (vec![i + 1], h),
            (vec![i + 2], -h),
        ])
    } else {
        GeneratorSpec::new(vec![
            (vec![i], h),
            (vec![i + 1], -h),
            (vec![i + 2], h),
            (vec![i, i + 1, i + 2], -h),
        ])
    }
}

/// (x_4 + ... + x_n)^(-1) x_4 x_2 (x_3 + ... + x_{n-1})^(-1), n >= 5.
pub fn abcd_generator(n: i64) -> Result<GeneratorSpec> {
    if n < 5 {
        return Err(Error::Invalid(format!("abcd generator needs n >= 5, got {n}")));
    }
    let h = HalfInt::ONE;
    Ok(GeneratorSpec::new(vec![
        ((4..=n).collect(), -h),
        (vec![4], h),
        (vec![2], h),
        ((3..=n - 1).collect(), -h),
    ]))
}

/// Half-exponent analogue of the abcd family.
pub fn root_abcd_generator(n: i64) -> Result<GeneratorSpec> {
    if n < 5 {
        return Err(Error::Invalid(format!("root abcd generator needs n >= 5, got {n}")));
    }
    let h = HalfInt::half(1);
    Ok(GeneratorSpec::new(vec![
        ((4..=n).collect(), -h),
        (vec![4], h),
        (vec![2], h),
        ((3..=n - 1).collect(), -h),
    ]))
}

/// The ladder's F presets: F^(-1/2) on two, three, or four sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FPreset {
    TwoPoint,
    ThreePoint,
    FourPoint,
}

impl FPreset {
    /// Factors of F^(-1/2), based at site 1.
    pub fn spec(self) -> GeneratorSpec {
        let h = HalfInt::half(1);
        match self {
            FPreset::TwoPoint => GeneratorSpec::new(vec![
                (vec![1], h),
                (vec![2], -h),
                (vec![1, 2], -h),
            ]),
            FPreset::ThreePoint => GeneratorSpec::new(vec![
                (vec![1], h),
                (vec![2], -h),
                (vec![2, 3], -h),
            ]),
            FPreset::FourPoint => GeneratorSpec::new(vec![
                (vec![1], h),
                (vec![2], -h),
                (vec![2, 3, 4], -h),
            ]),
        }
    }

    pub fn span(self) -> i64 {
        match self {
            FPreset::TwoPoint => 2,
            FPreset::ThreePoint => 3,
            FPreset::FourPoint => 4,
        }
    }
}

/// F^(-1/2) (shifted by `base`) or F^(+1/2) = [Sigma, F^(-1/2)]_q, computed
/// with the graded commutator against the full screening sum of the context.
pub fn build_f(
    ctx: &AlgebraContext,
    preset: FPreset,
    base: i64,
    plus: bool,
    cut2: i64,
) -> Result<TruncatedSeries> {
    let spec = preset.spec().shifted(base);
    let f = build_generator(ctx, &spec, Some(cut2))?;
    if !plus {
        return Ok(f);
    }
    graded_screening_bracket(ctx, &f)
}

/// [Sigma, series]_q with Sigma the sum of every registered variable
/// (tails included).
pub fn graded_screening_bracket(
    ctx: &AlgebraContext,
    f: &TruncatedSeries,
) -> Result<TruncatedSeries> {
    let mut sigma = Element::zero();
    let mut max_site = i64::MIN;
    for v in ctx.window_sites() {
        sigma = sigma.add(&Element::var(v, RatFunc::one()));
        max_site = max_site.max(v);
    }
    if let Some(t) = ctx.tails() {
        sigma = sigma
            .add(&Element::var(t.minus, RatFunc::one()))
            .add(&Element::var(t.plus, RatFunc::one()));
        max_site = max_site.max(t.plus);
    }
    let body = Element::graded_commutator(ctx, &sigma, f.body())?;
    let cut2 = f.cut2().map(|c| c + 2 * max_site);
    Ok(TruncatedSeries::new(body, cut2))
}

/// Fa_minus Fb_plus - q^weight Fa_plus Fb_minus.
pub fn compose_rho(
    ctx: &AlgebraContext,
    fa_minus: &TruncatedSeries,
    fb_plus: &TruncatedSeries,
    fa_plus: &TruncatedSeries,
    fb_minus: &TruncatedSeries,
    weight: HalfInt,
) -> Result<TruncatedSeries> {
    let left = fa_minus.mul(ctx, fb_plus)?;
    let right = fa_plus.mul(ctx, fb_minus)?;
    if left.cut2() != right.cut2() {
        return Err(Error::CutMismatch(
            HalfInt::half(left.cut2().unwrap_or(0)),
            HalfInt::half(right.cut2().unwrap_or(0)),
        ));
    }
    let w = RatFunc::s_pow(2 * weight.doubled());
    Ok(left.sub(&right.scale(&w)))
}

/// Everything the ladder run reports.
#[derive(Debug, Clone)]
pub struct LadderReport {
    /// Scalar lambda with F^(+1/2) = lambda * tail * F^(-1/2) for the
    /// unshifted field, when the bracket collapses to that shape.
    pub plus_scalar: Option<RatFunc>,
    /// Weight (exponent of q) for which rho is free of tail variables.
    pub weight_found: Option<HalfInt>,
    /// rho at that weight (at the paper-facing weight -1/2 otherwise).
    pub rho: TruncatedSeries,
    pub rho_tail_free: bool,
    /// lambda against the product-with-middle closed form, if proportional.
    pub closed_form_match: Option<RatFunc>,
}

/// Run the two-point-style ladder: Fa at base 1, Fb = Fa shifted by
/// `pair_shift`, rho from the graded brackets, weights -1/2 and +1/2 tried.
pub fn ladder(preset: FPreset, pair_shift: i64, depth: u32) -> Result<LadderReport> {
    let span = preset.span();
    let hi = span + pair_shift;
    let ctx = AlgebraContext::sl2_lattice(1..=hi).with_tails();
    let fa_spec = preset.spec();
    let fb_spec = fa_spec.shifted(pair_shift);
    // one cut for both minus-fields, deep enough for the rho products
    let lead_a = fa_spec.lead2();
    let lead_b = fb_spec.lead2();
    let cut = lead_a.min(lead_b) - 2 * depth as i64;
    let fa_minus = build_generator(&ctx, &fa_spec, Some(cut))?;
    let fb_minus = build_generator(&ctx, &fb_spec, Some(cut))?;
    let fa_plus = graded_screening_bracket(&ctx, &fa_minus)?;
    let fb_plus = graded_screening_bracket(&ctx, &fb_minus)?;

    // does the unshifted plus-field collapse onto (tail above Fa) * Fa?
    let plus_scalar = {
        let mut tail = Element::zero();
        if let Some(t) = ctx.tails() {
            tail = tail.add(&Element::var(t.plus, RatFunc::one()));
        }
        for v in ctx.window_sites() {
            if v > span {
                tail = tail.add(&Element::var(v, RatFunc::one()));
            }
        }
        let expected = TruncatedSeries::exact(tail).mul(&ctx, &fa_minus)?;
        proportional_compare(&fa_plus, &expected)
    };

    let tail_sites: Vec<i64> = ctx
        .tails()
        .map(|t| vec![t.minus, t.plus])
        .unwrap_or_default();
    let has_tail = |s: &TruncatedSeries| {
        s.body()
            .terms()
            .any(|(m, _)| m.sites().any(|x| tail_sites.contains(&x)))
    };
    let mut weight_found = None;
    let mut rho_best: Option<TruncatedSeries> = None;
    for w in [HalfInt::half(-1), HalfInt::half(1)] {
        let rho = compose_rho(&ctx, &fa_minus, &fb_plus, &fa_plus, &fb_minus, w)?;
        if !rho.is_zero() && !has_tail(&rho) && weight_found.is_none() {
            weight_found = Some(w);
            rho_best = Some(rho);
        }
    }
    let rho = match rho_best {
        Some(r) => r,
        None => compose_rho(&ctx, &fa_minus, &fb_plus, &fa_plus, &fb_minus, HalfInt::half(-1))?,
    };
    let rho_tail_free = !has_tail(&rho);

    // closed-form target: Fa-factors, middle sum, Fb-factors
    let closed_form_match = {
        let middle: Vec<i64> = (span + 1..=pair_shift.max(1) + span)
            .filter(|s| *s <= hi)
            .collect();
        if middle.is_empty() {
            None
        } else {
            let mut factors = fa_spec.factors.clone();
            factors.push((middle, HalfInt::ONE));
            factors.extend(fb_spec.factors.clone());
            let target_spec = GeneratorSpec::new(factors);
            let target = build_generator(&ctx, &target_spec, rho.cut2())?;
            let target = TruncatedSeries::new(target.body().clone(), rho.cut2());
            proportional_compare(&rho, &target)
        }
    };
    Ok(LadderReport { plus_scalar, weight_found, rho, rho_tail_free, closed_form_match })
}

/// Named generator presets exposed to the command line and the acceptance
/// suite. Names describe the shape, not provenance.
pub fn preset(name: &str) -> Option<GeneratorSpec> {
    let h = HalfInt::half(1);
    let one = HalfInt::ONE;
    let spec = match name {
        // (x3+x4)^(-1/2) x4^(1/2) x3^(1/2) (x2+x3)^(-1/2)
        "root-quad" => GeneratorSpec::new(vec![
            (vec![3, 4], -h),
            (vec![4], h),
            (vec![3], h),
            (vec![2, 3], -h),
        ]),
        // (x3+x4)^(-1) x4 x3 (x2+x3)^(-1)
        "quad" => GeneratorSpec::new(vec![
            (vec![3, 4], -one),
            (vec![4], one),
            (vec![3], one),
            (vec![2, 3], -one),
        ]),
        "chain-3" => chain_generator(3),
        "chain-4" => chain_generator(4),
        "chain-5" => chain_generator(5),
        "abcd-5" => abcd_generator(5).ok()?,
        "abcd-6" => abcd_generator(6).ok()?,
        "root-abcd-5" => root_abcd_generator(5).ok()?,
        "root-abcd-6" => root_abcd_generator(6).ok()?,
        // Delta-style seven-factor products F (middle) F'
        "delta-3" => GeneratorSpec::new(vec![
            (vec![1], h),
            (vec![2], -h),
            (vec![1, 2], -h),
            (vec![3], one),
            (vec![2], h),
            (vec![3], -h),
            (vec![2, 3], -h),
        ]),
        "delta-4" => GeneratorSpec::new(vec![
            (vec![1], h),
            (vec![2], -h),
            (vec![1, 2], -h),
            (vec![3, 4], one),
            (vec![3], h),
            (vec![4], -h),
            (vec![3, 4], -h),
        ]),
        "triple-ratio" => classical_trivia(1, false),
        "triple-ratio-inv" => classical_trivia(1, true),
        // (x4+x5)^(-1/2) x4^(3/2) x2^(1/2) x3^(-1) (x3+x4)^(±1/2)
        "mixed-5-minus" => GeneratorSpec::new(vec![
            (vec![4, 5], -h),
            (vec![4], HalfInt::half(3)),
            (vec![2], h),
            (vec![3], -one),
            (vec![3, 4], -h),
        ]),
        "mixed-5-plus" => GeneratorSpec::new(vec![
            (vec![4, 5], -h),
            (vec![4], HalfInt::half(3)),
            (vec![2], h),
            (vec![3], -one),
            (vec![3, 4], h),
        ]),
        _ => return None,
    };
    Some(spec)
}

/// (x_2+...+x_k)^(-1) (x_3+...+x_k) x_2 (x_1+x_2)^(-1).
pub fn chain_generator(k: i64) -> GeneratorSpec {
    let one = HalfInt::ONE;
    GeneratorSpec::new(vec![
        ((2..=k).collect(), -one),
        ((3..=k).collect(), one),
        (vec![2], one),
        (vec![1, 2], -one),
    ])
}

/// Context covering a spec's sites (and nothing else) with tails attached.
pub fn context_for(spec: &GeneratorSpec) -> AlgebraContext {
    let sites = spec.sites();
    let lo = *sites.first().unwrap();
    let hi = *sites.last().unwrap();
    AlgebraContext::sl2_lattice(lo..=hi).with_tails()
}
