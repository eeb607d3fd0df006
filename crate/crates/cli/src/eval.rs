//! Evaluate parsed expressions against an algebra context, translating the
//! user-facing depth knob into weight cuts.

use num::{BigRational, One};

use qlattice::coeffs::RatFunc;
use qlattice::halfint::HalfInt;
use qlattice::qcomb::expand_power;
use qlattice::skew::{AlgebraContext, Element, TruncatedSeries};
use qlattice::virasoro::GeneratorSpec;

use crate::expr::{Ast, Ratio};
use crate::CliError;

fn ratio_to_halfint(r: Ratio) -> Option<HalfInt> {
    match r.den {
        1 => Some(HalfInt::new(r.num)),
        2 => Some(HalfInt::half(r.num)),
        _ => None,
    }
}

fn site_of(ctx: &AlgebraContext, name: &str) -> Result<i64, CliError> {
    ctx.site_of_name(name)
        .ok_or_else(|| CliError::Eval(format!("unknown variable {name}")))
}

/// Sites mentioned by the expression (resolving tail names through ctx).
pub fn expr_sites(ast: &Ast, ctx: &AlgebraContext) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    collect_sites(ast, ctx, &mut out)?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn collect_sites(ast: &Ast, ctx: &AlgebraContext, out: &mut Vec<i64>) -> Result<(), CliError> {
    match ast {
        Ast::Var(v) => {
            out.push(site_of(ctx, v)?);
        }
        Ast::Sum(xs) | Ast::Product(xs) => {
            for x in xs {
                collect_sites(x, ctx, out)?;
            }
        }
        Ast::Power(b, _) => collect_sites(b, ctx, out)?,
        _ => {}
    }
    Ok(())
}

/// Raw site numbers in the source text, independent of any context.
pub fn raw_sites(ast: &Ast) -> Vec<i64> {
    fn walk(ast: &Ast, out: &mut Vec<i64>) {
        match ast {
            Ast::Var(v) => {
                if let Some(rest) = v.strip_prefix('x') {
                    if let Ok(n) = rest.parse::<i64>() {
                        out.push(n);
                    }
                }
            }
            Ast::Sum(xs) | Ast::Product(xs) => xs.iter().for_each(|x| walk(x, out)),
            Ast::Power(b, _) => walk(b, out),
            _ => {}
        }
    }
    let mut v = Vec::new();
    walk(ast, &mut v);
    v.sort_unstable();
    v.dedup();
    v
}

pub fn uses_tails(ast: &Ast) -> bool {
    match ast {
        Ast::Var(v) => v == "Uplus" || v == "Uminus",
        Ast::Sum(xs) | Ast::Product(xs) => xs.iter().any(uses_tails),
        Ast::Power(b, _) => uses_tails(b),
        _ => false,
    }
}

/// Doubled weight of the heaviest monomial the expression can produce.
pub fn dry_lead2(ast: &Ast, ctx: &AlgebraContext) -> Result<i64, CliError> {
    Ok(match ast {
        Ast::Var(v) => 2 * site_of(ctx, v)?,
        Ast::Scalar(_) | Ast::QPower(_) | Ast::Beta => 0,
        Ast::Sum(ts) => {
            let mut m = i64::MIN;
            for t in ts {
                m = m.max(dry_lead2(t, ctx)?);
            }
            m
        }
        Ast::Product(fs) => {
            let mut s = 0;
            for f in fs {
                s += dry_lead2(f, ctx)?;
            }
            s
        }
        Ast::Power(b, r) => {
            let l = dry_lead2(b, ctx)?;
            if (l * r.num) % r.den != 0 {
                return Err(CliError::Eval(
                    "fractional power of a base with incompatible weight".into(),
                ));
            }
            l * r.num / r.den
        }
    })
}

/// Evaluate at `depth` expansion levels below the leading weight.
pub fn eval(ast: &Ast, ctx: &AlgebraContext, depth: u32) -> Result<TruncatedSeries, CliError> {
    let lead = dry_lead2(ast, ctx)?;
    eval_at(ast, ctx, Some(lead - 2 * depth as i64))
}

pub fn eval_at(
    ast: &Ast,
    ctx: &AlgebraContext,
    cut2: Option<i64>,
) -> Result<TruncatedSeries, CliError> {
    match ast {
        Ast::Var(v) => {
            let site = site_of(ctx, v)?;
            Ok(TruncatedSeries::exact(Element::var(site, RatFunc::one())))
        }
        Ast::Scalar(c) => Ok(TruncatedSeries::exact(Element::constant(
            RatFunc::from_rational(c.clone()),
        ))),
        Ast::QPower(r) => {
            let s_exp = 4 * r.num / r.den;
            Ok(TruncatedSeries::exact(Element::constant(RatFunc::s_pow(s_exp))))
        }
        Ast::Beta => Ok(TruncatedSeries::exact(Element::constant(RatFunc::beta()))),
        Ast::Sum(ts) => {
            let mut acc = TruncatedSeries::exact(Element::zero());
            for t in ts {
                acc = acc.add(&eval_at(t, ctx, cut2)?);
            }
            Ok(acc.with_cut_opt(cut2))
        }
        Ast::Product(fs) => {
            let leads: Vec<i64> = fs
                .iter()
                .map(|f| dry_lead2(f, ctx))
                .collect::<Result<_, _>>()?;
            let total: i64 = leads.iter().sum();
            let mut acc: Option<TruncatedSeries> = None;
            for (f, l) in fs.iter().zip(&leads) {
                let fcut = cut2.map(|c| c - (total - l));
                let s = eval_at(f, ctx, fcut)?;
                acc = Some(match acc {
                    None => s,
                    Some(a) => a.mul(ctx, &s).map_err(CliError::Algebra)?,
                });
            }
            Ok(acc
                .unwrap_or_else(TruncatedSeries::one)
                .with_cut_opt(cut2))
        }
        Ast::Power(b, r) => {
            let exp = ratio_to_halfint(*r)
                .ok_or_else(|| CliError::Eval(format!("unsupported exponent {r}")))?;
            // single variable: an exact monomial for any exponent
            if let Ast::Var(v) = b.as_ref() {
                let site = site_of(ctx, v)?;
                return Ok(TruncatedSeries::exact(Element::from_monomial(
                    qlattice::skew::Monomial::var(site, exp),
                    RatFunc::one(),
                )));
            }
            if r.is_nonneg_integer() {
                // evaluate the base and take the power
                let l = dry_lead2(b, ctx)?;
                let n = r.num;
                let bcut = cut2.map(|c| c - (n - 1).max(0) * l);
                let base = eval_at(b, ctx, bcut)?;
                let mut acc = TruncatedSeries::one();
                for _ in 0..n {
                    acc = acc.mul(ctx, &base).map_err(CliError::Algebra)?;
                }
                return Ok(acc.with_cut_opt(cut2));
            }
            // negative or fractional powers need a same-type sum of plain
            // variables, routed through the binomial expansion
            let sites = sum_of_vars(b, ctx).ok_or_else(|| {
                CliError::Eval(
                    "negative or fractional powers require a sum of plain site variables".into(),
                )
            })?;
            expand_power(ctx, &sites, exp, cut2).map_err(CliError::Algebra)
        }
    }
}

fn sum_of_vars(ast: &Ast, ctx: &AlgebraContext) -> Option<Vec<i64>> {
    match ast {
        Ast::Var(v) => Some(vec![ctx.site_of_name(v)?]),
        Ast::Sum(ts) => {
            let mut sites = Vec::new();
            for t in ts {
                match t {
                    Ast::Var(v) => sites.push(ctx.site_of_name(v)?),
                    _ => return None,
                }
            }
            Some(sites)
        }
        _ => None,
    }
}

/// Convert a product-of-powers expression into a generator spec, when it has
/// exactly that shape.
pub fn ast_to_spec(ast: &Ast) -> Option<GeneratorSpec> {
    let factors: Vec<&Ast> = match ast {
        Ast::Product(fs) => fs.iter().collect(),
        other => vec![other],
    };
    let mut out = Vec::new();
    for f in factors {
        match f {
            Ast::Var(v) => out.push((vec![site_num(v)?], HalfInt::ONE)),
            Ast::Power(b, r) => {
                let exp = ratio_to_halfint(*r)?;
                let sites = match b.as_ref() {
                    Ast::Var(v) => vec![site_num(v)?],
                    Ast::Sum(ts) => {
                        let mut sites = Vec::new();
                        for t in ts {
                            match t {
                                Ast::Var(v) => sites.push(site_num(v)?),
                                _ => return None,
                            }
                        }
                        sites
                    }
                    _ => return None,
                };
                out.push((sites, exp));
            }
            Ast::Sum(ts) => {
                let mut sites = Vec::new();
                for t in ts {
                    match t {
                        Ast::Var(v) => sites.push(site_num(v)?),
                        _ => return None,
                    }
                }
                out.push((sites, HalfInt::ONE));
            }
            _ => return None,
        }
    }
    Some(GeneratorSpec::new(out))
}

fn site_num(name: &str) -> Option<i64> {
    name.strip_prefix('x').and_then(|r| r.parse().ok())
}

/// Commutative evaluation for the classical module: site variables become
/// commuting slots, Uplus becomes the distinguished tail slot.
pub fn eval_comm(
    ast: &Ast,
    cut2: i64,
) -> Result<qlattice::classical::CommElement, CliError> {
    use qlattice::classical::{CommElement, Slot};
    Ok(match ast {
        Ast::Var(v) => {
            if v == "Uplus" {
                CommElement::var(Slot::Tail, HalfInt::ONE)
            } else if let Some(s) = site_num(v) {
                CommElement::var(Slot::Site(s), HalfInt::ONE)
            } else {
                return Err(CliError::Eval(format!(
                    "variable {v} has no classical counterpart"
                )));
            }
        }
        Ast::Scalar(c) => CommElement::constant(c.clone()),
        Ast::QPower(_) => CommElement::constant(BigRational::one()),
        Ast::Beta => {
            return Err(CliError::Eval("beta has no classical counterpart".into()))
        }
        Ast::Sum(ts) => {
            let mut acc = CommElement::zero();
            for t in ts {
                acc = acc.add(&eval_comm(t, cut2)?);
            }
            acc
        }
        Ast::Product(fs) => {
            let mut acc = CommElement::one();
            for f in fs {
                acc = acc.mul(&eval_comm(f, cut2)?);
            }
            acc.truncated(cut2, i64::MAX / 4)
        }
        Ast::Power(b, r) => {
            let exp = ratio_to_halfint(*r)
                .ok_or_else(|| CliError::Eval(format!("unsupported exponent {r}")))?;
            match ast_to_spec(&Ast::Product(vec![Ast::Power(b.clone(), *r)])) {
                Some(spec) => qlattice::classical::comm_expand(&spec, cut2),
                None => {
                    if exp == HalfInt::ONE {
                        eval_comm(b, cut2)?
                    } else {
                        return Err(CliError::Eval(
                            "classical powers need sums of site variables".into(),
                        ));
                    }
                }
            }
        }
    })
}

trait WithCutOpt {
    fn with_cut_opt(self, cut2: Option<i64>) -> Self;
}

impl WithCutOpt for TruncatedSeries {
    fn with_cut_opt(self, cut2: Option<i64>) -> Self {
        match cut2 {
            Some(c) => self.with_cut2(c),
            None => self,
        }
    }
}
