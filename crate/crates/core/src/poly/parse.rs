//! Text grammar for forms on P^3.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ('^' integer)?
//! primary := integer ('/' integer)? | X | Y | Z | T | '(' expr ')'
//! ```
//!
//! Variables are case-insensitive. The expanded result must be homogeneous.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::affine::AffinePolynomial;
use crate::poly::form::{monomial_text, HomogeneousForm};
use crate::scalar::Rational;

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize, String)>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[start..k].iter().map(|(_, c)| *c).collect();
            let n: BigInt = text.parse().expect("digits");
            out.push((Tok::Int(n), pos, text));
            continue;
        }
        let tok = match c {
            'x' | 'X' => Tok::Var(0),
            'y' | 'Y' => Tok::Var(1),
            'z' | 'Z' => Tok::Var(2),
            't' | 'T' => Tok::Var(3),
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Parse {
                    message: "unexpected character".into(),
                    token: other.to_string(),
                    position: pos,
                })
            }
        };
        out.push((tok, pos, c.to_string()));
        k += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, String)>,
    at: usize,
    end: usize,
}

type Poly = AffinePolynomial<Rational>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn error(&self, message: &str) -> Error {
        match self.toks.get(self.at) {
            Some((_, pos, text)) => Error::Parse {
                message: message.into(),
                token: text.clone(),
                position: *pos,
            },
            None => Error::Parse {
                message: message.into(),
                token: "<end of input>".into(),
                position: self.end,
            },
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => self.at += 1,
            Some(Tok::Minus) => {
                negate = true;
                self.at += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(&Rational::from_integer((-1).into()));
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.at += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.at += 1;
            let k = match self.peek() {
                Some(Tok::Int(n)) => {
                    let k: Option<u32> = n.try_into().ok();
                    match k {
                        Some(k) if k <= MAX_EXPONENT => k,
                        _ => return Err(self.error("exponent too large")),
                    }
                }
                _ => return Err(self.error("expected integer exponent")),
            };
            self.at += 1;
            let mut acc = Poly::constant(4, Rational::from_integer(1.into()));
            for _ in 0..k {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let mut q = Rational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.at += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.at += 1;
                            q /= Rational::from_integer(d);
                        }
                        Some(Tok::Int(_)) => return Err(self.error("zero denominator")),
                        _ => return Err(self.error("expected integer denominator")),
                    }
                }
                Ok(Poly::constant(4, q))
            }
            Some(Tok::Var(i)) => {
                self.at += 1;
                Ok(Poly::variable(4, i))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.at += 1;
                        Ok(inner)
                    }
                    _ => Err(self.error("expected ')'")),
                }
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

/// Parses a form on P^3 from text.
pub fn parse_form(s: &str) -> Result<HomogeneousForm<Rational>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            message: "empty polynomial".into(),
            token: "<end of input>".into(),
            position: 0,
        });
    }
    let mut p = Parser { toks, at: 0, end: s.len() };
    let poly = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.error("unexpected token"));
    }
    let degree = poly.total_degree().max(0) as u32;
    // report the offending monomial in the order it prints
    let mut terms: Vec<(Vec<u32>, Rational)> =
        poly.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    terms.reverse();
    for (e, _) in &terms {
        let d: u32 = e.iter().sum();
        if d != degree {
            return Err(Error::NonHomogeneous { monomial: monomial_text(e), expected: degree, found: d });
        }
    }
    HomogeneousForm::from_terms(4, degree, terms)
}

impl FromStr for HomogeneousForm<Rational> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_form(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn parses_example_quartic() {
        let f = parse_form("X^4+Y^4+Z^4+T^4-2*X*Y*Z*T").unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.len(), 5);
        assert_eq!(f.coeff(&[1, 1, 1, 1]), rat(-2, 1));
    }

    #[test]
    fn variables_are_case_insensitive() {
        assert_eq!(parse_form("x*t - y*z").unwrap(), parse_form("X*T-Y*Z").unwrap());
    }

    #[test]
    fn rational_coefficients_and_parentheses() {
        let f = parse_form("3/4*(X+Y)^2 - T^2").unwrap();
        assert_eq!(f.coeff(&[1, 1, 0, 0]), rat(3, 2));
        assert_eq!(f.coeff(&[0, 0, 0, 2]), rat(-1, 1));
    }

    #[test]
    fn non_homogeneous_names_the_monomial() {
        let err = parse_form("X^2 + Y*Z + T").unwrap_err();
        match err {
            Error::NonHomogeneous { monomial, expected, found } => {
                assert_eq!(monomial, "T");
                assert_eq!((expected, found), (2, 1));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_token_and_position() {
        match parse_form("X^2 + W*T").unwrap_err() {
            Error::Parse { token, position, .. } => {
                assert_eq!(token, "W");
                assert_eq!(position, 6);
            }
            e => panic!("unexpected {e:?}"),
        }
        match parse_form("X*(Y+Z").unwrap_err() {
            Error::Parse { token, .. } => assert_eq!(token, "<end of input>"),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(parse_form("2/0*X").unwrap_err(), Error::Parse { .. }));
        assert!(matches!(parse_form("X Y").unwrap_err(), Error::Parse { .. }));
    }

    #[test]
    fn cancellation_is_not_an_error() {
        // lower-degree terms that cancel are fine
        let f = parse_form("X^2 + T - T").unwrap();
        assert_eq!(f.degree(), 2);
    }
}
