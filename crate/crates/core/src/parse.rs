//! Polynomial expression syntax: integers, `p/q` rationals, variables,
//! `+ - * ^`, parentheses, division by nonzero constants and the literal `i`.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{parse_rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let err = |message: String| Error::Parse { input: input.to_string(), message };
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            out.push(Token::Num(chars[start..k].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_' || chars[k] == '\'') {
                k += 1;
            }
            out.push(Token::Ident(chars[start..k].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            k += 1;
        } else {
            return Err(err(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, S> {
    input: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [String],
    _s: std::marker::PhantomData<S>,
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { input: self.input.to_string(), message: message.into() }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<S>> {
        let n = self.vars.len();
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<S>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .ok_or_else(|| self.err("division is only allowed by constants"))?;
                if c.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&c.inv());
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly<S>> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly<S>> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(digits)) => {
                    self.pos += 1;
                    let e: u32 = digits.parse().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly<S>> {
        let n = self.vars.len();
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(digits)) => {
                self.pos += 1;
                let r = parse_rational(&digits).ok_or_else(|| self.err("bad number"))?;
                Ok(Poly::constant(n, S::from_rational(r)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if let Some(k) = self.vars.iter().position(|v| *v == name) {
                    Ok(Poly::var(n, k))
                } else if name == "i" {
                    let i = S::imaginary_unit()
                        .ok_or_else(|| self.err("`i` is not available over a real scalar field"))?;
                    Ok(Poly::constant(n, i))
                } else {
                    Err(Error::UnknownVariable(name))
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a polynomial over the named variables.
pub fn parse_poly<S: Scalar>(input: &str, vars: &[String]) -> Result<Poly<S>> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse { input: input.to_string(), message: "empty expression".into() });
    }
    let mut p = Parser { input, tokens, pos: 0, vars, _s: std::marker::PhantomData };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Gaussian, Rational};

    fn vars() -> Vec<String> {
        ["x1", "x2", "r"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_relation() {
        let p: Poly<Rational> = parse_poly("x1^2+x2^2-r^2", &vars()).unwrap();
        assert_eq!(p.format(&vars()), "x1^2 + x2^2 - r^2");
    }

    #[test]
    fn rationals_and_division() {
        let p: Poly<Rational> = parse_poly("(x1 + r)/2 - 3/4", &vars()).unwrap();
        assert_eq!(p.format(&vars()), "1/2*x1 + 1/2*r - 3/4");
        assert!(parse_poly::<Rational>("x1/x2", &vars()).is_err());
        assert!(parse_poly::<Rational>("x1/0", &vars()).is_err());
    }

    #[test]
    fn imaginary_unit_needs_complex_field() {
        assert!(parse_poly::<Rational>("-2*i", &vars()).is_err());
        let p: Poly<Gaussian> = parse_poly("-2*i", &vars()).unwrap();
        assert_eq!(p.as_constant(), Some(Gaussian::from_ints(0, -2)));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_poly::<Rational>("y", &vars()), Err(Error::UnknownVariable("y".into())));
        assert!(parse_poly::<Rational>("x1 +", &vars()).is_err());
        assert!(parse_poly::<Rational>("(x1", &vars()).is_err());
        assert!(parse_poly::<Rational>("", &vars()).is_err());
        assert!(parse_poly::<Rational>("x1^x2", &vars()).is_err());
    }
}
