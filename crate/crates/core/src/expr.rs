//! Text grammar for polynomials and module values.
//!
//! ```text
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ("^" nat)?
//! atom   := nat | nat "/" nat | ident | "(" expr ")"
//! ident  := "T"nat | "l"nat | "m"nat | parameter-name | generator-name
//! ```
//!
//! Printing ([`std::fmt::Display`] on [`Poly`] and [`ModValue`]) produces
//! text this parser reads back to the same canonical value.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freemod::{GenId, ModValue, Signature};
use crate::ring::{Poly, Var};
use crate::scalar::Coeff;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Nat(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Nat(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(Error::Parse {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(String, Option<String>),
    Ident(String),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Mul(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, u32, usize),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.col(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ast::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            let col = self.col();
            self.pos += 1;
            lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?), col);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            let col = self.col();
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Nat(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| Error::Parse {
                        column: col,
                        message: format!("exponent `{n}` too large"),
                    })?;
                    return Ok(Ast::Pow(Box::new(base), e, col));
                }
                _ => return self.err("expected a natural-number exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek().cloned() {
            Some(Tok::Nat(n)) => {
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Nat(d)) => {
                            self.pos += 1;
                            Ok(Ast::Num(n, Some(d)))
                        }
                        _ => self.err("expected a denominator"),
                    }
                } else {
                    Ok(Ast::Num(n, None))
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Ast::Ident(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of expression"),
        }
    }
}

fn parse_ast(src: &str) -> Result<Ast> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: src.chars().count() + 1,
    };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(ast)
}

/// What an identifier denotes.
pub enum Resolved {
    Var(Var),
    Gen(GenId),
}

/// `T<k>`, `l<k>`, `m<k>` with `k >= 1`.
pub fn formal_variable(name: &str) -> Option<Var> {
    let (head, rest) = name.split_at(1);
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let k: u32 = rest.parse().ok()?;
    match head {
        "T" => Some(Var::T(k)),
        "l" => Some(Var::Lam(k)),
        "m" => Some(Var::Mu(k)),
        _ => None,
    }
}

enum Value<C> {
    Scalar(Poly<C>),
    Module(ModValue<C>),
}

struct Eval<'a, C> {
    resolve: &'a dyn Fn(&str) -> Result<Resolved>,
    sig: Option<&'a Arc<Signature>>,
    _c: std::marker::PhantomData<C>,
}

impl<C: Coeff> Eval<'_, C> {
    fn module(&self, v: Value<C>, column: usize) -> Result<ModValue<C>> {
        match v {
            Value::Module(m) => Ok(m),
            Value::Scalar(p) if p.is_zero() => Ok(ModValue::zero(self.sig.expect("module context"))),
            Value::Scalar(_) => Err(Error::Parse {
                column,
                message: "cannot add a scalar to a module element".into(),
            }),
        }
    }

    fn eval(&self, ast: &Ast) -> Result<Value<C>> {
        Ok(match ast {
            Ast::Num(n, d) => {
                let num = C::from_decimal(n).ok_or_else(|| Error::Parse {
                    column: 0,
                    message: format!("bad number `{n}`"),
                })?;
                let val = match d {
                    None => num,
                    Some(d) => {
                        let den = C::from_decimal(d).unwrap_or_else(C::zero);
                        if den.is_zero() {
                            return Err(Error::Parse {
                                column: 0,
                                message: "zero denominator".into(),
                            });
                        }
                        num / den
                    }
                };
                Value::Scalar(Poly::constant(val))
            }
            Ast::Ident(name) => match (self.resolve)(name)? {
                Resolved::Var(v) => Value::Scalar(Poly::var(v)),
                Resolved::Gen(g) => Value::Module(ModValue::gen(self.sig.expect("module context"), g)),
            },
            Ast::Neg(x) => match self.eval(x)? {
                Value::Scalar(p) => Value::Scalar(-p),
                Value::Module(m) => Value::Module(-&m),
            },
            Ast::Add(x, y) | Ast::Sub(x, y) => {
                let sub = matches!(ast, Ast::Sub(..));
                match (self.eval(x)?, self.eval(y)?) {
                    (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(if sub { p - q } else { p + q }),
                    (a, b) => {
                        let (a, b) = (self.module(a, 0)?, self.module(b, 0)?);
                        Value::Module(if sub { &a - &b } else { &a + &b })
                    }
                }
            }
            Ast::Mul(x, y, col) => match (self.eval(x)?, self.eval(y)?) {
                (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(p * q),
                (Value::Scalar(p), Value::Module(m)) | (Value::Module(m), Value::Scalar(p)) => {
                    Value::Module(m.scale(&p))
                }
                (Value::Module(_), Value::Module(_)) => {
                    return Err(Error::Parse {
                        column: *col,
                        message: "product of two generators is not a module element".into(),
                    })
                }
            },
            Ast::Pow(x, e, col) => match self.eval(x)? {
                Value::Scalar(p) => Value::Scalar(p.pow(*e)),
                Value::Module(m) if *e == 1 => Value::Module(m),
                Value::Module(_) => {
                    return Err(Error::Parse {
                        column: *col,
                        message: "generators can only be raised to the first power".into(),
                    })
                }
            },
        })
    }
}

fn fix_column(err: Error, ast_col: usize) -> Error {
    match err {
        Error::Parse { column: 0, message } => Error::Parse {
            column: ast_col,
            message,
        },
        e => e,
    }
}

/// Parses a polynomial; any identifier that is not `T<k>`/`l<k>`/`m<k>` is a
/// parameter.
pub fn parse_poly<C: Coeff>(src: &str) -> Result<Poly<C>> {
    let resolve = |name: &str| -> Result<Resolved> {
        Ok(Resolved::Var(formal_variable(name).unwrap_or_else(|| Var::param(name))))
    };
    parse_poly_with(src, &resolve)
}

/// Parses a polynomial whose parameters must be declared in `params`.
pub fn parse_poly_in<C: Coeff>(src: &str, params: &[String]) -> Result<Poly<C>> {
    let resolve = |name: &str| -> Result<Resolved> {
        if let Some(v) = formal_variable(name) {
            return Ok(Resolved::Var(v));
        }
        if params.iter().any(|p| p == name) {
            Ok(Resolved::Var(Var::param(name)))
        } else {
            Err(Error::UndeclaredParameter(name.to_string()))
        }
    };
    parse_poly_with(src, &resolve)
}

fn parse_poly_with<C: Coeff>(src: &str, resolve: &dyn Fn(&str) -> Result<Resolved>) -> Result<Poly<C>> {
    let ast = parse_ast(src)?;
    let ev = Eval::<C> {
        resolve,
        sig: None,
        _c: std::marker::PhantomData,
    };
    match ev.eval(&ast).map_err(|e| fix_column(e, 1))? {
        Value::Scalar(p) => Ok(p),
        Value::Module(_) => unreachable!("no generators without a signature"),
    }
}

/// Parses a module value `Σ p_g · g` over `sig`. Identifiers resolve to
/// formal variables, generators, or declared parameters, in that order.
pub fn parse_mod_value<C: Coeff>(src: &str, sig: &Arc<Signature>) -> Result<ModValue<C>> {
    let resolve = |name: &str| -> Result<Resolved> {
        if let Some(v) = formal_variable(name) {
            return Ok(Resolved::Var(v));
        }
        if let Some(g) = sig.find(name) {
            return Ok(Resolved::Gen(g));
        }
        if sig.has_parameter(name) {
            Ok(Resolved::Var(Var::param(name)))
        } else {
            Err(Error::UndeclaredParameter(name.to_string()))
        }
    };
    let ast = parse_ast(src)?;
    let ev = Eval::<C> {
        resolve: &resolve,
        sig: Some(sig),
        _c: std::marker::PhantomData,
    };
    let v = ev.eval(&ast).map_err(|e| fix_column(e, 1))?;
    ev.module(v, 1).map_err(|_| Error::Parse {
        column: 1,
        message: "expected a combination of generators".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemod::Generator;
    use crate::Rational;

    type P = Poly<Rational>;

    #[test]
    fn parses_and_prints_canonically() {
        let p: P = parse_poly("(T1+2*l1)*(l1 - T1) + 3/2*a^2").unwrap();
        let again: P = parse_poly(&p.to_string()).unwrap();
        assert_eq!(p, again);
        assert_eq!(parse_poly::<Rational>("-T1 - 2*l1").unwrap(), -(P::t(1) + P::int(2) * P::lam(1)));
    }

    #[test]
    fn module_values() {
        let sig = Signature::new(1, vec![Generator::even("L"), Generator::even("M")], vec!["a".into()]).unwrap();
        let v: crate::freemod::ModValue<Rational> = parse_mod_value("(T1+2*l1)*L - a*M", &sig).unwrap();
        assert_eq!(v.to_string(), "(T1 + 2*l1)*L - a*M");
        assert_eq!(parse_mod_value::<Rational>(&v.to_string(), &sig).unwrap(), v);
        assert!(parse_mod_value::<Rational>("0", &sig).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let sig = Signature::new(1, vec![Generator::even("L")], vec![]).unwrap();
        match parse_mod_value::<Rational>("q*L", &sig) {
            Err(Error::UndeclaredParameter(n)) => assert_eq!(n, "q"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_mod_value::<Rational>("L*L", &sig), Err(Error::Parse { column: 2, .. })));
        assert!(matches!(parse_mod_value::<Rational>("T1 + 1", &sig), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly::<Rational>("(T1 + 1"), Err(Error::Parse { column: 8, .. })));
        assert!(matches!(parse_poly::<Rational>("T1 $"), Err(Error::Parse { column: 4, .. })));
        assert!(parse_poly::<Rational>("1/0").is_err());
    }
}
