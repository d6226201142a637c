//! A small expression language for spaces.
//!
//! ```text
//! expr    := term { ("+" | "-") term } ;
//! term    := factor { "*" factor } ;
//! factor  := space | "(" expr ")" ;
//! space   := "P" "(" INT ")" | "WP" "(" INT { "," INT } ")" | "Gr" "(" INT "," INT ")"
//!          | "F1" "(" gr ")" | "F2" "(" gr ")" | "Fx" "(" gr ")" | "MbarP1" "(" INT ")"
//!          | ("M" | "S" | "H") "(" gr "," INT ")"
//!          | "blowup" "(" expr "," expr "," INT ")"
//!          | "blowdown" "(" expr "," expr "," expr ")" ;
//! gr      := "Gr" "(" INT "," INT ")" ;
//! ```
//!
//! `*` is a product (fibration with trivial monodromy), `+` a disjoint union
//! and `-` removes a closed piece. Only the arguments of `Gr` may be
//! negative, which denotes the empty space.

use std::fmt;

use thiserror::Error;

use crate::catalog::{
    f1_gr, f2_gr, fx_gr, grassmannian, mbar_p1, projective, weighted_projective, PoincarePoly,
};
use crate::error::{Error, Result};
use crate::pipelines::{evaluate, Compactification, Mode, ModuliKey};
use crate::surgery::{blowdown_apply, blowup_apply, union_disjoint};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceExpr {
    Proj(u32),
    WProj(Vec<u32>),
    Gr(i64, i64),
    F1(i64, i64),
    F2(i64, i64),
    Fx(i64, i64),
    MbarP1(i64),
    Moduli {
        compactification: Compactification,
        k: i64,
        n: i64,
        d: i64,
    },
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
    Sum(Box<SpaceExpr>, Box<SpaceExpr>),
    Difference(Box<SpaceExpr>, Box<SpaceExpr>),
    Blowup {
        space: Box<SpaceExpr>,
        center: Box<SpaceExpr>,
        codim: usize,
    },
    Blowdown {
        space: Box<SpaceExpr>,
        center: Box<SpaceExpr>,
        fiber: Box<SpaceExpr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                let value = text.parse().map_err(|_| ParseError {
                    offset: start,
                    expected: "an integer that fits in 64 bits".into(),
                    found: format!("`{text}`"),
                })?;
                out.push((start, Tok::Int(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_owned())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    expected: "a space, operator or parenthesis".into(),
                    found: format!("`{ch}`"),
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.into(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(tok.to_string()))
        }
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Tok::Int(v) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => Err(self.error("a nonnegative integer")),
        }
    }

    fn small<T: TryFrom<u64>>(&mut self) -> Result<T, ParseError> {
        let offset = self.offset();
        let v = self.int()?;
        T::try_from(v).map_err(|_| ParseError {
            offset,
            expected: "a smaller integer".into(),
            found: format!("`{v}`"),
        })
    }

    fn signed(&mut self) -> Result<i64, ParseError> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let v: i64 = self.small()?;
        Ok(if negative { -v } else { v })
    }

    fn expr(&mut self) -> Result<SpaceExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = SpaceExpr::Sum(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = SpaceExpr::Difference(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<SpaceExpr, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = SpaceExpr::Product(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<SpaceExpr, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                self.space(&name)
            }
            _ => Err(self.error("a space or `(`")),
        }
    }

    /// `Gr(k,n)` as the argument of a Fano scheme or moduli space.
    fn gr(&mut self) -> Result<(i64, i64), ParseError> {
        match self.peek() {
            Tok::Ident(name) if name == "Gr" => {
                self.bump();
                self.gr_args()
            }
            _ => Err(self.error("`Gr`")),
        }
    }

    fn gr_args(&mut self) -> Result<(i64, i64), ParseError> {
        self.expect(Tok::LParen)?;
        let k = self.signed()?;
        self.expect(Tok::Comma)?;
        let n = self.signed()?;
        self.expect(Tok::RParen)?;
        Ok((k, n))
    }

    fn space(&mut self, name: &str) -> Result<SpaceExpr, ParseError> {
        use SpaceExpr::*;
        let e = match name {
            "P" => {
                self.expect(Tok::LParen)?;
                let m = self.small()?;
                self.expect(Tok::RParen)?;
                Proj(m)
            }
            "WP" => {
                self.expect(Tok::LParen)?;
                let mut weights = vec![self.small()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    weights.push(self.small()?);
                }
                self.expect(Tok::RParen)?;
                WProj(weights)
            }
            "Gr" => {
                let (k, n) = self.gr_args()?;
                Gr(k, n)
            }
            "F1" | "F2" | "Fx" => {
                self.expect(Tok::LParen)?;
                let (k, n) = self.gr()?;
                self.expect(Tok::RParen)?;
                match name {
                    "F1" => F1(k, n),
                    "F2" => F2(k, n),
                    _ => Fx(k, n),
                }
            }
            "MbarP1" => {
                self.expect(Tok::LParen)?;
                let d = self.small()?;
                self.expect(Tok::RParen)?;
                MbarP1(d)
            }
            "M" | "S" | "H" => {
                self.expect(Tok::LParen)?;
                let (k, n) = self.gr()?;
                self.expect(Tok::Comma)?;
                let d = self.small()?;
                self.expect(Tok::RParen)?;
                let compactification = name.parse().expect("one of M, S, H");
                Moduli {
                    compactification,
                    k,
                    n,
                    d,
                }
            }
            "blowup" => {
                self.expect(Tok::LParen)?;
                let space = self.expr()?;
                self.expect(Tok::Comma)?;
                let center = self.expr()?;
                self.expect(Tok::Comma)?;
                let codim = self.small()?;
                self.expect(Tok::RParen)?;
                Blowup {
                    space: Box::new(space),
                    center: Box::new(center),
                    codim,
                }
            }
            "blowdown" => {
                self.expect(Tok::LParen)?;
                let space = self.expr()?;
                self.expect(Tok::Comma)?;
                let center = self.expr()?;
                self.expect(Tok::Comma)?;
                let fiber = self.expr()?;
                self.expect(Tok::RParen)?;
                Blowdown {
                    space: Box::new(space),
                    center: Box::new(center),
                    fiber: Box::new(fiber),
                }
            }
            _ => {
                self.pos -= 1;
                return Err(
                    self.error("one of P, WP, Gr, F1, F2, Fx, MbarP1, M, S, H, blowup, blowdown")
                );
            }
        };
        Ok(e)
    }
}

pub fn parse(text: &str) -> Result<SpaceExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("an operator or end of input"));
    }
    Ok(e)
}

impl SpaceExpr {
    fn precedence(&self) -> u8 {
        match self {
            SpaceExpr::Sum(..) | SpaceExpr::Difference(..) => 0,
            SpaceExpr::Product(..) => 1,
            _ => 2,
        }
    }

    pub fn eval(&self) -> Result<PoincarePoly> {
        eval(self)
    }
}

struct Operand<'a>(&'a SpaceExpr, u8);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            self.0.fmt(f)
        }
    }
}

/// Canonical form: parses back to the same tree.
impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SpaceExpr::*;
        match self {
            Proj(m) => write!(f, "P({m})"),
            WProj(ws) => {
                f.write_str("WP(")?;
                for (i, w) in ws.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{w}")?;
                }
                f.write_str(")")
            }
            Gr(k, n) => write!(f, "Gr({k},{n})"),
            F1(k, n) => write!(f, "F1(Gr({k},{n}))"),
            F2(k, n) => write!(f, "F2(Gr({k},{n}))"),
            Fx(k, n) => write!(f, "Fx(Gr({k},{n}))"),
            MbarP1(d) => write!(f, "MbarP1({d})"),
            Moduli {
                compactification,
                k,
                n,
                d,
            } => {
                write!(f, "{compactification}(Gr({k},{n}),{d})")
            }
            Product(a, b) => write!(f, "{} * {}", Operand(a, 1), Operand(b, 2)),
            Sum(a, b) => write!(f, "{} + {}", Operand(a, 0), Operand(b, 1)),
            Difference(a, b) => write!(f, "{} - {}", Operand(a, 0), Operand(b, 1)),
            Blowup {
                space,
                center,
                codim,
            } => write!(f, "blowup({space}, {center}, {codim})"),
            Blowdown {
                space,
                center,
                fiber,
            } => write!(f, "blowdown({space}, {center}, {fiber})"),
        }
    }
}

/// Evaluates an expression. Errors carry the path from the root to the
/// failing node.
pub fn eval(expr: &SpaceExpr) -> Result<PoincarePoly> {
    eval_at(expr, "expr")
}

fn eval_at(expr: &SpaceExpr, path: &str) -> Result<PoincarePoly> {
    use SpaceExpr::*;
    let child = |e: &SpaceExpr, role: &str| eval_at(e, &format!("{path}.{role}"));
    let local = |r: Result<PoincarePoly>| {
        r.map_err(|source| Error::Eval {
            path: format!("{path} = `{expr}`"),
            source: Box::new(source),
        })
    };
    match expr {
        Proj(m) => Ok(projective(*m)),
        WProj(ws) => local(weighted_projective(ws)),
        Gr(k, n) => Ok(grassmannian(*k, *n)),
        F1(k, n) => local(f1_gr(*k, *n)),
        F2(k, n) => local(f2_gr(*k, *n)),
        Fx(k, n) => local(fx_gr(*k, *n)),
        MbarP1(d) => local(mbar_p1(*d)),
        Moduli {
            compactification,
            k,
            n,
            d,
        } => local(
            ModuliKey::new(*k, *n, *d, *compactification)
                .and_then(|key| evaluate(&key, Mode::Closed)),
        ),
        Product(a, b) => Ok(child(a, "left")?.times(&child(b, "right")?)),
        Sum(a, b) => Ok(union_disjoint(&child(a, "left")?, &child(b, "right")?)),
        Difference(a, b) => {
            let (a, b) = (child(a, "left")?, child(b, "right")?);
            local(PoincarePoly::new(a.poly() - b.poly(), "difference"))
        }
        Blowup {
            space,
            center,
            codim,
        } => {
            let (s, c) = (child(space, "space")?, child(center, "center")?);
            local(blowup_apply(&s, &c, *codim))
        }
        Blowdown {
            space,
            center,
            fiber,
        } => {
            let (s, c, fib) = (
                child(space, "space")?,
                child(center, "center")?,
                child(fiber, "fiber")?,
            );
            local(blowdown_apply(&s, &c, &fib))
        }
    }
}

/// Parses and evaluates in one go.
pub fn eval_str(text: &str) -> Result<PoincarePoly> {
    eval(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::IntPoly;
    use proptest::prelude::*;
    use SpaceExpr::*;

    fn b(e: SpaceExpr) -> Box<SpaceExpr> {
        Box::new(e)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("Gr(2,4)").unwrap(), Gr(2, 4));
        assert_eq!(
            parse("blowup(P(2), P(0), 2)").unwrap(),
            Blowup {
                space: b(Proj(2)),
                center: b(Proj(0)),
                codim: 2
            }
        );
        let err = parse("Gr(2 4)").unwrap_err();
        assert_eq!(err.offset, 5);
        assert_eq!(err.expected, "`,`");
        assert_eq!(err.found, "`4`");
    }

    #[test]
    fn precedence_and_whitespace() {
        assert_eq!(
            parse(" P(1)+P(2) *P(3) ").unwrap(),
            Sum(b(Proj(1)), b(Product(b(Proj(2)), b(Proj(3)))))
        );
        assert_eq!(
            parse("(P(1) + P(2)) * P(3)").unwrap(),
            Product(b(Sum(b(Proj(1)), b(Proj(2)))), b(Proj(3)))
        );
        assert_eq!(
            parse("P(3) - P(1) - P(0)").unwrap(),
            Difference(b(Difference(b(Proj(3)), b(Proj(1)))), b(Proj(0)))
        );
    }

    #[test]
    fn parse_all_leaves() {
        assert_eq!(parse("WP(1,2,2)").unwrap(), WProj(vec![1, 2, 2]));
        assert_eq!(parse("Gr(-1,2)").unwrap(), Gr(-1, 2));
        assert_eq!(parse("F1(Gr(1,4))").unwrap(), F1(1, 4));
        assert_eq!(parse("F2(Gr(2,4))").unwrap(), F2(2, 4));
        assert_eq!(parse("Fx(Gr(2,4))").unwrap(), Fx(2, 4));
        assert_eq!(parse("MbarP1(3)").unwrap(), MbarP1(3));
        assert_eq!(
            parse("H(Gr(1,4),3)").unwrap(),
            Moduli {
                compactification: Compactification::H,
                k: 1,
                n: 4,
                d: 3
            }
        );
    }

    #[test]
    fn parse_errors() {
        assert!(parse("").is_err());
        assert!(parse("P(-1)").is_err());
        assert!(parse("Q(1)").is_err());
        assert_eq!(parse("Q(1)").unwrap_err().offset, 0);
        assert!(parse("P(1) P(2)").is_err());
        assert!(parse("F1(P(3))").is_err());
        assert!(parse("S(P(2),3)").is_err());
        assert!(parse("P(1) $").is_err());
        assert!(parse("P(99999999999999999999999)").is_err());
        assert!(parse("(P(1)").is_err());
    }

    fn q(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_str("P(2) * P(1)").unwrap().poly(), &q(&[1, 2, 2, 1]));
        assert_eq!(
            eval_str("S(Gr(1,3),3)").unwrap().poly(),
            &q(&[1, 2, 3, 3, 3, 3, 3, 2, 1])
        );
        assert_eq!(
            eval_str("blowup(P(2), P(0), 2)").unwrap().poly(),
            &q(&[1, 2, 1])
        );
        assert_eq!(eval_str("Gr(-1,2)").unwrap(), PoincarePoly::empty());
        assert_eq!(eval_str("WP(1,2,2,3,3)").unwrap(), projective(4));
        assert_eq!(eval_str("P(3) - P(1)").unwrap().poly(), &q(&[0, 0, 1, 1]));
    }

    #[test]
    fn eval_errors_carry_path() {
        let err = eval_str("P(1) * blowup(P(2), F1(Gr(0,3)), 2)").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("expr.right.center"), "{msg}");
        assert!(matches!(err.root(), Error::InvalidParameters(_)));

        let err = eval_str("blowdown(P(1), P(0), P(2))").unwrap_err();
        assert!(matches!(err.root(), Error::NegativeBetti { .. }));
        assert!(err.is_arithmetic());

        let err = eval_str("H(Gr(1,3),3)").unwrap_err();
        assert!(err.to_string().contains("planar"));
        assert!(eval_str("P(1) - P(2)").unwrap_err().is_arithmetic());
    }

    fn leaf() -> impl Strategy<Value = SpaceExpr> {
        prop_oneof![
            (0u32..5).prop_map(Proj),
            prop::collection::vec(1u32..4, 1..4).prop_map(WProj),
            (-1i64..5, 0i64..6).prop_map(|(k, n)| Gr(k, n)),
            (1i64..3, 3i64..5).prop_map(|(k, n)| F1(k, n)),
            (1i64..3, 3i64..5).prop_map(|(k, n)| Fx(k, n)),
            (2i64..4).prop_map(MbarP1),
        ]
    }

    fn expr() -> impl Strategy<Value = SpaceExpr> {
        leaf().prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Product(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Sum(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Difference(b(a), b(c))),
                (inner.clone(), inner.clone(), 1usize..4).prop_map(|(s, c, codim)| Blowup {
                    space: b(s),
                    center: b(c),
                    codim
                }),
                (inner.clone(), inner.clone(), inner).prop_map(|(s, c, f)| Blowdown {
                    space: b(s),
                    center: b(c),
                    fiber: b(f)
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in expr()) {
            let printed = e.to_string();
            let back = parse(&printed).unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(eval(&back), eval(&e));
        }

        #[test]
        fn product_commutes(x in expr(), y in expr()) {
            let (Ok(a), Ok(c)) = (eval(&x), eval(&y)) else { return Ok(()) };
            let p1 = eval(&Product(b(x.clone()), b(y.clone()))).unwrap();
            let p2 = eval(&Product(b(y), b(x))).unwrap();
            prop_assert_eq!(&p1, &p2);
            prop_assert_eq!(p1, a.times(&c));
        }

        #[test]
        fn sum_is_commutative_and_associative(x in leaf(), y in leaf(), z in leaf()) {
            let s = |l: SpaceExpr, r: SpaceExpr| Sum(b(l), b(r));
            let lhs = eval(&s(s(x.clone(), y.clone()), z.clone()));
            let rhs = eval(&s(x.clone(), s(y.clone(), z.clone())));
            prop_assert_eq!(lhs.clone(), rhs);
            prop_assert_eq!(lhs, eval(&s(z, s(y, x))));
        }
    }
}
