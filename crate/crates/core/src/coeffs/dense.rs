//! Dense univariate polynomial helpers (slot-0 direction of a LaurentPoly).

use num::{BigRational, Zero};

use super::laurent::{LaurentPoly, Vars};

pub(crate) fn dense_from(p: &LaurentPoly, min: i64) -> Vec<BigRational> {
    let max = p.max_exp(0).unwrap();
    let mut v = vec![BigRational::zero(); (max - min + 1) as usize];
    for (e, c) in p.terms() {
        v[(e[0] - min) as usize] = c.clone();
    }
    v
}

pub(crate) fn dense_to_vars(vars: Vars, v: &[BigRational], min: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero(vars);
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() {
            p = p.add(&LaurentPoly::monomial(vars, [min + i as i64, 0], c.clone()));
        }
    }
    p
}

pub(crate) fn trim(v: &mut Vec<BigRational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Remainder of a by b (b nonzero).
pub(crate) fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let f = &r[dr] / lb;
        for i in 0..=db {
            let t = &b[i] * &f;
            r[dr - db + i] -= t;
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Exact quotient a / b; panics in debug builds if the division leaves a remainder.
pub(crate) fn poly_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let f = &r[dr] / lb;
        q[dr - db] = f.clone();
        for i in 0..=db {
            let t = &b[i] * &f;
            r[dr - db + i] -= t;
        }
        trim(&mut r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}
