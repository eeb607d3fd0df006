//! Command implementations shared by the binary and the test suites.

use qlattice::classical::{hw_report, RepKind};
use qlattice::coeffs::RatFunc;
use qlattice::halfint::HalfInt;
use qlattice::screening::{build_screening, nilpotency_check, serre_residual, ScreeningSpec, Variant};
use qlattice::skew::{AlgebraContext, Element};
use qlattice::virasoro::{
    check_invariance, check_invariance_q1, check_invariance_series, ladder, preset, FPreset,
    GeneratorSpec,
};
use qlattice::volkov;

use crate::config::CommandConfig;
use crate::eval::{ast_to_spec, eval, eval_comm, raw_sites, uses_tails};
use crate::expr::{parse, print};
use crate::report::CheckResult;
use crate::CliError;

pub fn dispatch(cmd: &CommandConfig, default_depth: u32) -> Result<Vec<CheckResult>, CliError> {
    match cmd {
        CommandConfig::Serre { preset, sites } => run_serre(preset, *sites),
        CommandConfig::Nilpotency { modulus, sites } => run_nilpotency(*modulus, *sites),
        CommandConfig::VolkovTwoPoint { order, verify_lift } => {
            run_volkov_two_point(*order, *verify_lift)
        }
        CommandConfig::VolkovThreePoint { order, verify_lift } => {
            run_volkov_three_point(*order, *verify_lift)
        }
        CommandConfig::VirasoroCheck { expr, preset, window, depth } => run_virasoro_check(
            expr.as_deref(),
            preset.as_deref(),
            window.as_deref(),
            depth.unwrap_or(default_depth),
        ),
        CommandConfig::VirasoroLadder { preset, pair_shift, depth } => {
            run_ladder(preset, pair_shift.unwrap_or(1), depth.unwrap_or(default_depth))
        }
        CommandConfig::ClassicalHw { kind, expr } => run_classical_hw(kind, expr),
        CommandConfig::Normalize { expr } => run_normalize(expr),
    }
}

fn screening_pair(
    ctx: &AlgebraContext,
    hi: i64,
    variants: (Variant, Variant),
) -> Result<(Element<RatFunc>, Element<RatFunc>), CliError> {
    let ea = build_screening(
        ctx,
        &ScreeningSpec { vtype: 0, window: (1, hi), variant: variants.0 },
    )
    .map_err(CliError::Algebra)?;
    let eb = build_screening(
        ctx,
        &ScreeningSpec { vtype: 1, window: (1, hi), variant: variants.1 },
    )
    .map_err(CliError::Algebra)?;
    Ok((ea, eb))
}

fn residual_check(
    name: &str,
    ctx: &AlgebraContext,
    ea: &Element<RatFunc>,
    eb: &Element<RatFunc>,
    a_ij: i64,
) -> Result<CheckResult, CliError> {
    let r = serre_residual(ctx, ea, eb, a_ij, 1).map_err(CliError::Algebra)?;
    Ok(if r.is_zero() {
        CheckResult::pass(name, "residual is exactly zero")
    } else {
        CheckResult::fail(name, r.num_terms(), format!("residual: {}", r.display(ctx)))
    })
}

pub fn run_serre(preset_name: &str, sites: u32) -> Result<Vec<CheckResult>, CliError> {
    let mut out = Vec::new();
    match preset_name {
        "sl3" => {
            for w in 1..=sites {
                let ctx = AlgebraContext::sl3(w as usize);
                let (ea, eb) =
                    screening_pair(&ctx, 2 * w as i64, (Variant::Plain, Variant::Plain))?;
                out.push(residual_check(
                    &format!("serre-window{w}-xy"),
                    &ctx,
                    &ea,
                    &eb,
                    -1,
                )?);
                out.push(residual_check(
                    &format!("serre-window{w}-yx"),
                    &ctx,
                    &eb,
                    &ea,
                    -1,
                )?);
            }
        }
        "affine-sl2" => {
            for w in 1..=sites {
                // the Laurent pair on a single variable type
                let ctx = AlgebraContext::single_type(1..=w as i64, 2);
                let mut ea = Element::zero();
                let mut eb = Element::zero();
                for i in 1..=w as i64 {
                    ea = ea.add(&Element::var(i, RatFunc::one()));
                    eb = eb.add(&Element::from_monomial(
                        qlattice::skew::Monomial::var(i, -HalfInt::ONE),
                        RatFunc::one(),
                    ));
                }
                out.push(residual_check(
                    &format!("cubic-laurent-window{w}-fwd"),
                    &ctx,
                    &ea,
                    &eb,
                    -2,
                )?);
                out.push(residual_check(
                    &format!("cubic-laurent-window{w}-rev"),
                    &ctx,
                    &eb,
                    &ea,
                    -2,
                )?);
                // the interleaved two-type realization
                let ctx2 = AlgebraContext::affine_sl2(w as usize);
                let (xa, xb) =
                    screening_pair(&ctx2, 2 * w as i64, (Variant::Plain, Variant::Plain))?;
                out.push(residual_check(
                    &format!("cubic-interleaved-window{w}-xy"),
                    &ctx2,
                    &xa,
                    &xb,
                    -2,
                )?);
            }
        }
        other => {
            return Err(CliError::Config(format!("unknown serre preset {other}")));
        }
    }
    Ok(out)
}

pub fn run_nilpotency(modulus: u32, sites: u32) -> Result<Vec<CheckResult>, CliError> {
    let ok = nilpotency_check(sites, modulus).map_err(CliError::Algebra)?;
    let name = format!("nilpotency-N{modulus}-sites{sites}");
    Ok(vec![if ok {
        CheckResult::pass(
            &name,
            format!("(x1 + ... + x{sites})^{modulus} = 0 mod Phi_{modulus} with x_i^{modulus} = 0"),
        )
    } else {
        CheckResult::fail(&name, 1, "power does not vanish in the quotient")
    }])
}

pub fn run_volkov_two_point(order: usize, verify_lift: bool) -> Result<Vec<CheckResult>, CliError> {
    let mut out = Vec::new();
    let table = volkov::two_point_recursion(order);
    let mut bad = Vec::new();
    for i in 0..=order {
        if !volkov::two_point_closed(i).eq(table.get(i)) {
            bad.push(i);
        }
    }
    out.push(if bad.is_empty() {
        CheckResult::pass(
            "two-point-closed-matches-recursion",
            format!("all orders 0..={order} agree exactly"),
        )
    } else {
        CheckResult::fail(
            "two-point-closed-matches-recursion",
            bad.len(),
            format!("mismatching orders: {bad:?}"),
        )
    });
    let residuals = volkov::verify_reduced_two_point(order);
    let anomaly_ok = residuals[0].eq(&RatFunc::one().sub(&RatFunc::beta()));
    out.push(if anomaly_ok {
        CheckResult::pass("two-point-reduced-order0", "residual is exactly (1 - beta)")
    } else {
        CheckResult::fail("two-point-reduced-order0", 1, format!("found {}", residuals[0]))
    });
    let higher_bad: Vec<usize> = residuals
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, r)| !r.is_zero())
        .map(|(k, _)| k)
        .collect();
    out.push(if higher_bad.is_empty() {
        CheckResult::pass(
            "two-point-reduced-higher-orders",
            format!("orders 1..={order} all vanish"),
        )
    } else {
        CheckResult::fail(
            "two-point-reduced-higher-orders",
            higher_bad.len(),
            format!("nonzero at orders {higher_bad:?}"),
        )
    });
    if verify_lift {
        let at_one: bool = residuals
            .iter()
            .all(|r| r.subst_beta_one().map(|v| v.is_zero()).unwrap_or(false));
        out.push(if at_one {
            CheckResult::pass("two-point-beta-one", "every residual vanishes at beta = 1")
        } else {
            CheckResult::fail("two-point-beta-one", 1, "some residual survives beta = 1")
        });
    }
    Ok(out)
}

pub fn run_volkov_three_point(
    order: usize,
    verify_lift: bool,
) -> Result<Vec<CheckResult>, CliError> {
    let mut out = Vec::new();
    let table = volkov::three_point_recursion(order, order);
    let boundary_ok = (1..=order).all(|m| table.get(0, m).is_zero())
        && (0..=order).all(|n| table.get(n, 0).eq(&volkov::two_point_closed(n)));
    out.push(if boundary_ok {
        CheckResult::pass(
            "three-point-boundaries",
            "C_{0,m} = 0 for m >= 1 and the m = 0 row matches the two-point table",
        )
    } else {
        CheckResult::fail("three-point-boundaries", 1, "boundary structure broken")
    });
    let mut mism = Vec::new();
    for n in 0..=order {
        for m in 0..=order {
            let closed = volkov::three_point_closed(n, m);
            if !closed.eq(table.get(n, m)) {
                mism.push((n, m));
            }
        }
    }
    out.push(if mism.is_empty() {
        CheckResult::pass(
            "three-point-closed-matches-recursion",
            format!("all entries n,m <= {order} agree"),
        )
    } else {
        CheckResult::fail(
            "three-point-closed-matches-recursion",
            mism.len(),
            format!(
                "the product closed form solves neither interior entry; first mismatches: {:?}",
                &mism[..mism.len().min(4)]
            ),
        )
    });
    if verify_lift {
        let rep = volkov::lift_r_and_verify(order.min(5)).map_err(CliError::Algebra)?;
        let beta_one_ok = rep
            .residual
            .terms()
            .all(|(_, c)| c.subst_beta_one().map(|v| v.is_zero()).unwrap_or(false));
        let degree_ok = rep
            .residual
            .terms()
            .all(|(m, _)| m.total_degree() == HalfInt::ONE);
        out.push(if beta_one_ok && degree_ok {
            CheckResult::pass(
                "three-point-lift",
                format!(
                    "alpha exchange q^{}; residual is the boundary anomaly family, \
                     degree 1, vanishing at beta = 1",
                    rep.alpha_exchange
                ),
            )
        } else {
            CheckResult::fail(
                "three-point-lift",
                rep.residual.num_terms(),
                "lift residual has unexpected structure",
            )
        });
    }
    Ok(out)
}

fn parse_window(w: &str) -> Result<(i64, i64), CliError> {
    let parts: Vec<&str> = w.split("..").collect();
    if parts.len() != 2 {
        return Err(CliError::Config(format!("window must look like a..b, got {w}")));
    }
    let lo = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("bad window bound {}", parts[0])))?;
    let hi = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("bad window bound {}", parts[1])))?;
    Ok((lo, hi))
}

pub fn run_virasoro_check(
    expr: Option<&str>,
    preset_name: Option<&str>,
    window: Option<&str>,
    depth: u32,
) -> Result<Vec<CheckResult>, CliError> {
    let (name, spec, ast) = match (expr, preset_name) {
        (Some(e), None) => {
            let ast = parse(e)?;
            (format!("invariance[{e}]"), ast_to_spec(&ast), Some(ast))
        }
        (None, Some(p)) => {
            let spec = preset(p)
                .ok_or_else(|| CliError::Config(format!("unknown generator preset {p}")))?;
            (format!("invariance[{p}]"), Some(spec), None)
        }
        _ => {
            return Err(CliError::Config(
                "virasoro check needs exactly one of --expr or --preset".into(),
            ))
        }
    };
    let (lo, hi) = match (window, &spec, &ast) {
        (Some(w), _, _) => parse_window(w)?,
        (None, Some(s), _) => {
            let sites = s.sites();
            (*sites.first().unwrap(), *sites.last().unwrap())
        }
        (None, None, Some(a)) => {
            let sites = raw_sites(a);
            if sites.is_empty() {
                return Err(CliError::Config("cannot infer a window; pass --window".into()));
            }
            (*sites.first().unwrap(), *sites.last().unwrap())
        }
        _ => unreachable!(),
    };
    let ctx = AlgebraContext::sl2_lattice(lo..=hi).with_tails();
    let rep = match (&spec, &ast) {
        (Some(s), _) => {
            let q1 = preset_name == Some("triple-ratio") || preset_name == Some("triple-ratio-inv");
            if q1 {
                // report both the generic-q and the specialized verdicts
                check_invariance(&ctx, s, depth).map_err(CliError::Algebra)?
            } else {
                check_invariance(&ctx, s, depth).map_err(CliError::Algebra)?
            }
        }
        (None, Some(a)) => {
            if uses_tails(a) {
                return Err(CliError::Config(
                    "tail variables cannot appear in an invariance candidate".into(),
                ));
            }
            let series = eval(a, &ctx, depth)?;
            check_invariance_series(&ctx, &series).map_err(CliError::Algebra)?
        }
        _ => unreachable!(),
    };
    let quasi = match &rep.quasi_factor {
        Some(l) => format!("window sum commutes up to the factor {l}"),
        None => "no single q-power relates Sigma G and G Sigma".into(),
    };
    let details = format!(
        "tails vanish: {}; per-site residual terms: {:?}; {}",
        rep.tails_vanish, rep.per_site, quasi
    );
    let cut = rep.cut2.map(|c| HalfInt::half(c).to_string());
    let check = if rep.pass {
        CheckResult::pass(&name, details).with_cut(cut)
    } else {
        CheckResult::fail(&name, rep.residual.body().num_terms(), details).with_cut(cut)
    };
    Ok(vec![check])
}

/// The q -> 1 specialized variant, used for the classical three-site ratio.
pub fn run_virasoro_check_q1(
    preset_name: &str,
    depth: u32,
) -> Result<Vec<CheckResult>, CliError> {
    let spec = preset(preset_name)
        .ok_or_else(|| CliError::Config(format!("unknown generator preset {preset_name}")))?;
    let sites = spec.sites();
    let ctx = AlgebraContext::sl2_lattice(*sites.first().unwrap()..=*sites.last().unwrap())
        .with_tails();
    let rep = check_invariance_q1(&ctx, &spec, depth).map_err(CliError::Algebra)?;
    let name = format!("invariance-q1[{preset_name}]");
    Ok(vec![if rep.pass {
        CheckResult::pass(&name, "residual vanishes after the q -> 1 specialization")
    } else {
        CheckResult::fail(&name, rep.residual.body().num_terms(), "residual survives q -> 1")
    }])
}

fn fpreset(name: &str) -> Result<FPreset, CliError> {
    match name {
        "two-point" => Ok(FPreset::TwoPoint),
        "three-point" => Ok(FPreset::ThreePoint),
        "four-point" => Ok(FPreset::FourPoint),
        other => Err(CliError::Config(format!("unknown ladder preset {other}"))),
    }
}

pub fn run_ladder(
    preset_name: &str,
    pair_shift: i64,
    depth: u32,
) -> Result<Vec<CheckResult>, CliError> {
    let p = fpreset(preset_name)?;
    let rep = ladder(p, pair_shift, depth).map_err(CliError::Algebra)?;
    let mut out = Vec::new();
    out.push(match &rep.plus_scalar {
        Some(l) => CheckResult::pass(
            "ladder-plus-field-collapses",
            format!("F^(+1/2) = lambda (tail) F^(-1/2) with lambda = {l}"),
        ),
        None => CheckResult::fail(
            "ladder-plus-field-collapses",
            0,
            "the graded bracket does not collapse onto tail * F",
        ),
    });
    out.push(match rep.weight_found {
        Some(w) => CheckResult::pass(
            "ladder-rho-tail-free",
            format!("tail variables cancel at weight q^({w})"),
        ),
        None => CheckResult::fail(
            "ladder-rho-tail-free",
            rep.rho.body().num_terms(),
            "no tested weight removes the tail variables",
        ),
    });
    out.push(match &rep.closed_form_match {
        Some(l) => CheckResult::pass(
            "ladder-rho-closed-form",
            format!("rho is proportional to the middle-sum product, lambda = {l}"),
        ),
        None => CheckResult::fail(
            "ladder-rho-closed-form",
            rep.rho.body().num_terms(),
            "rho is not proportional to the middle-sum product",
        ),
    });
    Ok(out)
}

pub fn run_classical_hw(kind: &str, expr: &str) -> Result<Vec<CheckResult>, CliError> {
    let k = match kind {
        "two-point" => RepKind::TwoPoint,
        "three-point" => RepKind::ThreePoint,
        "four-point" => RepKind::FourPoint,
        other => return Err(CliError::Config(format!("unknown classical kind {other}"))),
    };
    let ast = parse(expr)?;
    let sites = raw_sites(&ast);
    let lead: i64 = sites.iter().max().copied().unwrap_or(0) * 2;
    let f = eval_comm(&ast, lead - 24)?;
    let rep = hw_report(k, &f);
    let fmt = |e: &qlattice::classical::CommElement| {
        let s = e.to_string();
        if s.len() > 160 {
            format!("{} terms: {}...", e.num_terms(), &s[..160])
        } else {
            s
        }
    };
    Ok(vec![CheckResult::pass(
        "hw-report",
        format!(
            "T stands for {}; H f = {}; E f = {}; F f = {}",
            k.tail_meaning(),
            fmt(&rep.h_image),
            fmt(&rep.e_image),
            fmt(&rep.f_image)
        ),
    )])
}

pub fn run_normalize(expr: &str) -> Result<Vec<CheckResult>, CliError> {
    let ast = parse(expr)?;
    let printed = print(&ast);
    let reparsed = parse(&printed)?;
    let stable = reparsed == ast && print(&reparsed) == printed;
    Ok(vec![if stable {
        CheckResult::pass("normalize", printed)
    } else {
        CheckResult::fail("normalize", 0, "printer is not round-trip stable on this input")
    }])
}

/// Verdict-aware helper used by the binary.
pub fn spec_from_name_or_expr(
    expr: Option<&str>,
    preset_name: Option<&str>,
) -> Result<GeneratorSpec, CliError> {
    match (expr, preset_name) {
        (Some(e), None) => {
            let ast = parse(e)?;
            ast_to_spec(&ast)
                .ok_or_else(|| CliError::Config("expression is not a product of powers".into()))
        }
        (None, Some(p)) => {
            preset(p).ok_or_else(|| CliError::Config(format!("unknown generator preset {p}")))
        }
        _ => Err(CliError::Config("need exactly one of expr or preset".into())),
    }
}
