//! Expression parsing for curve input and cache round-trips.
//!
//! Grammar over {+, -, *, /, ^, integer literals, identifiers} with the
//! usual precedence: ^ binds tightest, then unary minus, then * and /
//! (left-associative), then + and - (left-associative). Exponents must
//! lower to integers; general rationals arise through division.

use crate::algebra::{RatFunc, Rational, Symbol};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};

/// Parsed expression tree; every node remembers its byte offset for
/// diagnostics.
#[derive(Clone, Debug)]
pub struct Expr {
    pub at: usize,
    pub kind: ExprKind,
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Num(BigInt),
    Var(Symbol),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        self.skip_ws();
        let at = self.pos;
        if self.pos >= self.src.len() {
            return Ok((at, Tok::End));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Ok((at, Tok::Num(text.parse().unwrap())));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Ok((at, Tok::Ident(text.to_owned())));
            }
            other => {
                return Err(Error::Parse {
                    offset: at,
                    message: format!("unexpected character '{}'", other as char),
                })
            }
        };
        self.pos += 1;
        Ok((at, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    look: (usize, Tok),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>> {
        let mut lexer = Lexer::new(src);
        let look = lexer.next()?;
        Ok(Parser { lexer, look })
    }

    fn bump(&mut self) -> Result<(usize, Tok)> {
        let cur = std::mem::replace(&mut self.look, (0, Tok::End));
        self.look = self.lexer.next()?;
        Ok(cur)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.look.1 {
                Tok::Plus => {
                    let (at, _) = self.bump()?;
                    let rhs = self.term()?;
                    lhs = Expr {
                        at,
                        kind: ExprKind::Add(Box::new(lhs), Box::new(rhs)),
                    };
                }
                Tok::Minus => {
                    let (at, _) = self.bump()?;
                    let rhs = self.term()?;
                    lhs = Expr {
                        at,
                        kind: ExprKind::Sub(Box::new(lhs), Box::new(rhs)),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.look.1 {
                Tok::Star => {
                    let (at, _) = self.bump()?;
                    let rhs = self.unary()?;
                    lhs = Expr {
                        at,
                        kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)),
                    };
                }
                Tok::Slash => {
                    let (at, _) = self.bump()?;
                    let rhs = self.unary()?;
                    lhs = Expr {
                        at,
                        kind: ExprKind::Div(Box::new(lhs), Box::new(rhs)),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.look.1 == Tok::Minus {
            let (at, _) = self.bump()?;
            let inner = self.unary()?;
            return Ok(Expr {
                at,
                kind: ExprKind::Neg(Box::new(inner)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.look.1 == Tok::Caret {
            let (at, _) = self.bump()?;
            // allow a sign and nesting in the exponent; it must still lower
            // to an integer
            let exp = self.unary()?;
            return Ok(Expr {
                at,
                kind: ExprKind::Pow(Box::new(base), Box::new(exp)),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let (at, tok) = self.bump()?;
        match tok {
            Tok::Num(n) => Ok(Expr {
                at,
                kind: ExprKind::Num(n),
            }),
            Tok::Ident(name) => Ok(Expr {
                at,
                kind: ExprKind::Var(Symbol::new(&name)),
            }),
            Tok::LParen => {
                let inner = self.expr()?;
                let (at2, tok2) = self.bump()?;
                if tok2 != Tok::RParen {
                    return Err(Error::Parse {
                        offset: at2,
                        message: "expected ')'".to_owned(),
                    });
                }
                Ok(inner)
            }
            other => Err(Error::Parse {
                offset: at,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parse a source string into an expression tree.
pub fn parse_expression(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    let (at, tok) = p.bump()?;
    if tok != Tok::End {
        return Err(Error::Parse {
            offset: at,
            message: format!("trailing input {tok:?}"),
        });
    }
    Ok(e)
}

/// Lower an expression tree to a canonical rational function.
pub fn lower(e: &Expr) -> Result<RatFunc> {
    match &e.kind {
        ExprKind::Num(n) => Ok(RatFunc::constant(Rational::from_integer(n.clone()))),
        ExprKind::Var(v) => Ok(RatFunc::var(*v)),
        ExprKind::Neg(a) => Ok(lower(a)?.neg()),
        ExprKind::Add(a, b) => Ok(lower(a)?.add(&lower(b)?)),
        ExprKind::Sub(a, b) => Ok(lower(a)?.sub(&lower(b)?)),
        ExprKind::Mul(a, b) => Ok(lower(a)?.mul(&lower(b)?)),
        ExprKind::Div(a, b) => {
            let den = lower(b)?;
            if den.is_zero() {
                return Err(Error::Parse {
                    offset: e.at,
                    message: "division by the zero polynomial".to_owned(),
                });
            }
            Ok(lower(a)?.div(&den))
        }
        ExprKind::Pow(base, exp) => {
            let ev = lower(exp)?;
            let k = ev
                .as_constant()
                .filter(|c| c.denom().is_one())
                .and_then(|c| {
                    let n = c.numer().clone();
                    if n.abs() <= BigInt::from(u16::MAX) || n.is_zero() {
                        n.to_i64()
                    } else {
                        None
                    }
                })
                .ok_or_else(|| Error::Parse {
                    offset: exp.at,
                    message: "non-integer exponent".to_owned(),
                })?;
            let b = lower(base)?;
            if b.is_zero() && k < 0 {
                return Err(Error::Parse {
                    offset: e.at,
                    message: "negative power of zero".to_owned(),
                });
            }
            Ok(b.pow(k))
        }
    }
}

/// Parse and lower in one step.
pub fn parse_ratfunc(src: &str) -> Result<RatFunc> {
    lower(&parse_expression(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    #[test]
    fn airy_x() {
        let f = parse_ratfunc("z^2").unwrap();
        assert_eq!(f, RatFunc::var(Symbol::new("z")).pow(2));
    }

    #[test]
    fn gaussian_x() {
        let z = RatFunc::var(Symbol::new("z"));
        assert_eq!(parse_ratfunc("z + 1/z").unwrap(), z.add(&z.recip()));
    }

    #[test]
    fn two_sided_y() {
        let z = RatFunc::var(Symbol::new("z"));
        assert_eq!(
            parse_ratfunc("z^3/3 - z").unwrap(),
            z.pow(3).scale(&rat(1, 3)).sub(&z)
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse_ratfunc("1 - 2 - 3").unwrap(), RatFunc::constant(int(-4)));
        assert_eq!(parse_ratfunc("8 / 2 / 2").unwrap(), RatFunc::constant(int(2)));
        assert_eq!(
            parse_ratfunc("-2^2").unwrap(),
            RatFunc::constant(int(-4)),
            "the power binds tighter than unary minus: -(2^2)"
        );
        assert_eq!(parse_ratfunc("1/2*4").unwrap(), RatFunc::constant(int(2)));
    }

    #[test]
    fn fractional_exponent_is_rejected() {
        let err = parse_ratfunc("z^(1/2)").unwrap_err();
        match err {
            Error::Parse { message, .. } => assert!(message.contains("non-integer")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn negative_exponent() {
        let z = RatFunc::var(Symbol::new("z"));
        assert_eq!(parse_ratfunc("z^-2").unwrap(), z.pow(2).recip());
    }

    #[test]
    fn syntax_error_carries_byte_offset() {
        let err = parse_expression("z + @").unwrap_err();
        match err {
            Error::Parse { offset, .. } => assert_eq!(offset, 4),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn canonical_rendering_reparses() {
        for src in ["z^2", "z + 1/z", "z^3/3 - z", "(z^2 - 1)/(4*z + 2)"] {
            let f = parse_ratfunc(src).unwrap();
            let again = parse_ratfunc(&f.to_string()).unwrap();
            assert_eq!(f, again, "round trip through canonical text for {src}");
        }
    }
}
