//! Expression language: tokenizer, recursive-descent parser, and the
//! canonical printer. The grammar is
//!
//!   expr   := term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := atom ('^' '(' rational ')')?
//!   atom   := ident | '(' expr ')' | number
//!
//! with idents like x3, Uplus, Uminus, q, beta. Rational exponents must be
//! parenthesized after '^'; number literals may carry a sign and a slash.

use std::fmt;

use num::BigRational;

/// Exponent written in the source: numerator over a small denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        let g = gcd(num.abs().max(1), den);
        Ratio { num: num / g, den: den / g }
    }

    pub fn whole(n: i64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn is_nonneg_integer(&self) -> bool {
        self.den == 1 && self.num >= 0
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Sum(Vec<Ast>),
    Product(Vec<Ast>),
    /// Base to a rational exponent with denominator 1 or 2.
    Power(Box<Ast>, Ratio),
    Var(String),
    Scalar(BigRational),
    /// q to a rational exponent with denominator 1, 2, or 4.
    QPower(Ratio),
    Beta,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at line {line}, column {col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Slash,
    Number(i64),
    Ident(String),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Number(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "identifier {s}"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, co) = (line, col);
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            ' ' | '\t' | '\r' => {}
            '+' => out.push((Tok::Plus, l, co)),
            '-' => out.push((Tok::Minus, l, co)),
            '*' => out.push((Tok::Star, l, co)),
            '^' => out.push((Tok::Caret, l, co)),
            '(' => out.push((Tok::LParen, l, co)),
            ')' => out.push((Tok::RParen, l, co)),
            '/' => out.push((Tok::Slash, l, co)),
            '0'..='9' => {
                let mut n = 0i64;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    n = n * 10 + (chars[i] as i64 - '0' as i64);
                    i += 1;
                    col += 1;
                }
                out.push((Tok::Number(n), l, co));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    i += 1;
                    col += 1;
                }
                out.push((Tok::Ident(s), l, co));
                continue;
            }
            other => {
                return Err(ParseError {
                    line: l,
                    col: co,
                    expected: vec!["a token".into()],
                    found: format!("'{other}'"),
                })
            }
        }
        i += 1;
        col += 1;
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&[&format!("{t}")]))
        }
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: format!("{}", self.peek()),
        }
    }
}

pub fn parse(text: &str) -> Result<Ast, ParseError> {
    let mut lx = Lexer { toks: tokenize(text)?, pos: 0 };
    let ast = parse_expr(&mut lx)?;
    if *lx.peek() != Tok::End {
        return Err(lx.err(&["'+'", "'-'", "'*'", "'^'", "end of input"]));
    }
    Ok(ast)
}

fn parse_expr(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let mut terms = vec![parse_term(lx)?];
    loop {
        match lx.peek() {
            Tok::Plus => {
                lx.bump();
                terms.push(parse_term(lx)?);
            }
            Tok::Minus => {
                lx.bump();
                terms.push(negate(parse_term(lx)?));
            }
            _ => break,
        }
    }
    Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Ast::Sum(terms) })
}

fn negate(a: Ast) -> Ast {
    match a {
        Ast::Scalar(c) => Ast::Scalar(-c),
        Ast::Product(mut fs) => {
            fs.insert(0, Ast::Scalar(BigRational::from_integer((-1).into())));
            Ast::Product(fs)
        }
        other => Ast::Product(vec![Ast::Scalar(BigRational::from_integer((-1).into())), other]),
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let mut factors = vec![parse_factor(lx)?];
    while *lx.peek() == Tok::Star {
        lx.bump();
        factors.push(parse_factor(lx)?);
    }
    Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Ast::Product(factors) })
}

fn parse_factor(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let atom = parse_atom(lx)?;
    if *lx.peek() != Tok::Caret {
        return Ok(atom);
    }
    lx.bump();
    lx.expect(Tok::LParen)?;
    let r = parse_signed_ratio(lx)?;
    lx.expect(Tok::RParen)?;
    match atom {
        Ast::QPower(base) if base == Ratio::whole(1) => {
            if 4 % r.den != 0 {
                return Err(lx.err(&["a q-exponent with denominator 1, 2 or 4"]));
            }
            Ok(Ast::QPower(r))
        }
        other => {
            if 2 % r.den != 0 {
                return Err(lx.err(&["an exponent with denominator 1 or 2"]));
            }
            Ok(Ast::Power(Box::new(other), r))
        }
    }
}

fn parse_signed_ratio(lx: &mut Lexer) -> Result<Ratio, ParseError> {
    let sign = if *lx.peek() == Tok::Minus {
        lx.bump();
        -1
    } else {
        1
    };
    let n = match lx.bump() {
        Tok::Number(n) => n,
        _ => {
            return Err(ParseError {
                line: lx.here().0,
                col: lx.here().1,
                expected: vec!["a number".into()],
                found: format!("{}", lx.peek()),
            })
        }
    };
    if *lx.peek() == Tok::Slash {
        lx.bump();
        match lx.bump() {
            Tok::Number(d) if d > 0 => Ok(Ratio::new(sign * n, d)),
            _ => Err(ParseError {
                line: lx.here().0,
                col: lx.here().1,
                expected: vec!["a positive denominator".into()],
                found: format!("{}", lx.peek()),
            }),
        }
    } else {
        Ok(Ratio::whole(sign * n))
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<Ast, ParseError> {
    match lx.peek().clone() {
        Tok::Ident(name) => {
            lx.bump();
            match name.as_str() {
                "q" => Ok(Ast::QPower(Ratio::whole(1))),
                "beta" => Ok(Ast::Beta),
                _ => Ok(Ast::Var(name)),
            }
        }
        Tok::LParen => {
            lx.bump();
            let e = parse_expr(lx)?;
            lx.expect(Tok::RParen)?;
            Ok(e)
        }
        Tok::Number(n) => {
            lx.bump();
            if *lx.peek() == Tok::Slash {
                if let Tok::Number(_) = lx.peek2() {
                    lx.bump();
                    if let Tok::Number(d) = lx.bump() {
                        return Ok(Ast::Scalar(BigRational::new(n.into(), d.into())));
                    }
                }
            }
            Ok(Ast::Scalar(BigRational::from_integer(n.into())))
        }
        Tok::Minus => {
            // signed literal at atom position
            if let Tok::Number(_) = lx.peek2() {
                lx.bump();
                if let Tok::Number(n) = lx.bump() {
                    if *lx.peek() == Tok::Slash {
                        lx.bump();
                        if let Tok::Number(d) = lx.bump() {
                            return Ok(Ast::Scalar(BigRational::new((-n).into(), d.into())));
                        }
                        return Err(lx.err(&["a denominator"]));
                    }
                    return Ok(Ast::Scalar(BigRational::from_integer((-n).into())));
                }
            }
            Err(lx.err(&["an identifier", "'('", "a number"]))
        }
        _ => Err(lx.err(&["an identifier", "'('", "a number"])),
    }
}

/// Canonical printer; parse(print(a)) is structurally equal to a for every
/// ast this module produces.
pub fn print(ast: &Ast) -> String {
    match ast {
        Ast::Sum(ts) => ts.iter().map(print_in_sum).collect::<Vec<_>>().join(" + "),
        Ast::Product(fs) => fs.iter().map(print_in_product).collect::<Vec<_>>().join("*"),
        Ast::Power(b, r) => format!("{}^({r})", print_base(b)),
        Ast::Var(v) => v.clone(),
        Ast::Scalar(c) => print_scalar(c),
        Ast::QPower(r) => {
            if *r == Ratio::whole(1) {
                "q".into()
            } else {
                format!("q^({r})")
            }
        }
        Ast::Beta => "beta".into(),
    }
}

fn print_in_sum(a: &Ast) -> String {
    print(a)
}

fn print_in_product(a: &Ast) -> String {
    match a {
        Ast::Sum(_) => format!("({})", print(a)),
        _ => print(a),
    }
}

fn print_base(a: &Ast) -> String {
    match a {
        Ast::Var(_) | Ast::Beta => print(a),
        Ast::QPower(r) if *r == Ratio::whole(1) => print(a),
        _ => format!("({})", print(a)),
    }
}

fn print_scalar(c: &BigRational) -> String {
    use num::{One, Signed};
    if c.denom().is_one() && !c.is_negative() {
        format!("{}", c.numer())
    } else if c.denom().is_one() {
        format!("({})", c.numer())
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str) {
        let a = parse(src).unwrap();
        let printed = print(&a);
        let b = parse(&printed).unwrap();
        assert_eq!(a, b, "round trip changed structure for {src}");
        assert_eq!(printed, print(&b), "printer is not a fixed point for {src}");
    }

    #[test]
    fn parses_the_four_factor_product() {
        let a = parse("(x3 + x4)^(-1/2) * x4^(1/2) * x3^(1/2) * (x2 + x3)^(-1/2)").unwrap();
        match &a {
            Ast::Product(fs) => assert_eq!(fs.len(), 4),
            other => panic!("expected product, got {other:?}"),
        }
        roundtrip("(x3 + x4)^(-1/2) * x4^(1/2) * x3^(1/2) * (x2 + x3)^(-1/2)");
    }

    #[test]
    fn single_variable() {
        assert_eq!(parse("x1").unwrap(), Ast::Var("x1".into()));
    }

    #[test]
    fn double_caret_is_positioned() {
        let e = parse("x1 ^^ 2").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(e.col, 5); // the second caret
    }

    #[test]
    fn scalar_printing() {
        let a = Ast::Scalar(BigRational::new((-1).into(), 2.into()));
        assert_eq!(print(&a), "(-1/2)");
        roundtrip("(-1/2)");
        roundtrip("3");
    }

    #[test]
    fn nested_sum_parenthesized() {
        let src = "x1*(x2 + x3)";
        let a = parse(src).unwrap();
        assert_eq!(print(&a), "x1*(x2 + x3)");
        roundtrip(src);
    }

    #[test]
    fn minus_becomes_scaled_term() {
        roundtrip("x1 - x2");
        roundtrip("x1 - 2");
        let a = parse("x1 - x2").unwrap();
        match a {
            Ast::Sum(ts) => match &ts[1] {
                Ast::Product(fs) => assert!(matches!(fs[0], Ast::Scalar(_))),
                other => panic!("expected scaled term, got {other:?}"),
            },
            other => panic!("expected sum, got {other:?}"),
        }
    }

    #[test]
    fn q_and_beta_forms() {
        roundtrip("q^(1/4) * beta^(2) * q");
        assert!(parse("q^(1/3)").is_err());
        assert!(parse("x1^(1/4)").is_err());
        roundtrip("Uplus*x3 + Uminus");
    }

    #[test]
    fn corpus_roundtrip() {
        let corpus = [
            "(x3 + x4)^(-1/2) * x4^(1/2) * x3^(1/2) * (x2 + x3)^(-1/2)",
            "(x3 + x4)^(-1) * x4 * x3 * (x2 + x3)^(-1)",
            "(x2 + x3 + x4)^(-1) * (x3 + x4) * x2 * (x1 + x2)^(-1)",
            "(x4 + x5)^(-1) * x4 * x2 * (x3 + x4)^(-1)",
            "(x4 + x5 + x6)^(-1) * x4 * x2 * (x3 + x4 + x5)^(-1)",
            "(x4 + x5)^(-1/2) * x4^(1/2) * x2^(1/2) * (x3 + x4)^(-1/2)",
            "x1^(1/2) * x2^(-1/2) * (x1 + x2)^(-1/2)",
            "x1^(1/2) * x2^(-1/2) * (x2 + x3)^(-1/2)",
            "x1^(1/2) * x2^(-1/2) * (x2 + x3 + x4)^(-1/2)",
            "x1 * x2^(-1) * x3 * (x1 + x2 + x3)^(-1)",
            "(x1 + x2 + x3) * x1^(-1) * x2 * x3^(-1)",
            "(x4 + x5)^(-1/2) * x4^(3/2) * x2^(1/2) * x3^(-1) * (x3 + x4)^(-1/2)",
            "x1^(1/2) * x2^(-1/2) * (x1 + x2)^(-1/2) * x3 * x2^(1/2) * x3^(-1/2) * (x2 + x3)^(-1/2)",
            "(x1 + x2)^(3)",
            "x1 + x2 + x3",
            "q^(1/2) * x1 + beta * x2",
            "Uplus * x1^(1/2)",
            "x1 - x2 + 2",
            "(x1 + x2)^(2) * (x1 + x2)^(-2)",
            "x2^(-1) * (1 + x1 * x2^(-1))^(-1)",
        ];
        for src in corpus {
            roundtrip(src);
        }
    }
}
