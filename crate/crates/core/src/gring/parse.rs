//! Recursive-descent parser for ring expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' natural)*
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! The optional leading minus lets `parse` read back everything `render` prints.

use thiserror::Error;

use super::context::Context;
use super::element::RingElement;
use super::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier {name:?} at position {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("malformed integer {0:?}")]
    BadInteger(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Int(&'a str),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token<'_> {
    fn describe(&self) -> String {
        match self {
            Token::Int(s) | Token::Ident(s) => format!("{s:?}"),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token<'_>, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Token::Int(&text[start..i]), start));
                continue;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(&text[start..i]), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

struct Parser<'a, 'c> {
    tokens: Vec<(Token<'a>, usize)>,
    pos: usize,
    ctx: &'c Context,
}

impl<'a> Parser<'a, '_> {
    fn peek(&self) -> &Token<'a> {
        &self.tokens[self.pos].0
    }

    fn position(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token<'a>, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.position(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expr<C: Coefficient>(&mut self) -> Result<RingElement<C>, ParseError> {
        let negate = if *self.peek() == Token::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term::<C>()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    let rhs = self.term::<C>()?;
                    acc = acc.add(&rhs).expect("single context");
                }
                Token::Minus => {
                    self.bump();
                    let rhs = self.term::<C>()?;
                    acc = acc.sub(&rhs).expect("single context");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<C: Coefficient>(&mut self) -> Result<RingElement<C>, ParseError> {
        let mut acc = self.factor::<C>()?;
        while *self.peek() == Token::Star {
            self.bump();
            let rhs = self.factor::<C>()?;
            acc = acc.mul(&rhs).expect("single context");
        }
        Ok(acc)
    }

    fn factor<C: Coefficient>(&mut self) -> Result<RingElement<C>, ParseError> {
        let mut base = self.atom::<C>()?;
        while *self.peek() == Token::Caret {
            self.bump();
            let exponent = match self.peek() {
                Token::Int(s) => s.parse::<u32>().map_err(|_| ParseError::Syntax {
                    position: self.position(),
                    message: format!("exponent {s} is too large"),
                })?,
                _ => return self.error("a natural-number exponent"),
            };
            self.bump();
            base = base.pow(exponent);
        }
        Ok(base)
    }

    fn atom<C: Coefficient>(&mut self) -> Result<RingElement<C>, ParseError> {
        match self.peek().clone() {
            Token::Int(s) => {
                self.bump();
                let c: C = s.parse().map_err(|_| ParseError::BadInteger(s.to_string()))?;
                Ok(RingElement::constant(self.ctx, c))
            }
            Token::Ident(name) => {
                let position = self.position();
                self.bump();
                if self.ctx.generator(name).is_some() {
                    return Ok(RingElement::generator(self.ctx, name).expect("registered"));
                }
                if let Some(terms) = self.ctx.alias(name) {
                    let terms = terms.iter().map(|(m, c)| {
                        (m.clone(), C::from_i64(*c).expect("alias coefficients fit"))
                    });
                    return Ok(RingElement::from_terms(self.ctx, terms).expect("alias validated"));
                }
                Err(ParseError::UnknownIdentifier {
                    name: name.to_string(),
                    position,
                })
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr::<C>()?;
                if *self.peek() != Token::RParen {
                    return self.error("')'");
                }
                self.bump();
                Ok(inner)
            }
            _ => self.error("an integer, identifier or '('"),
        }
    }
}

/// Parses `text` into an element of `ctx`. Relations are not applied.
pub fn parse<C: Coefficient>(text: &str, ctx: &Context) -> Result<RingElement<C>, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        ctx,
    };
    let e = parser.expr::<C>()?;
    if *parser.peek() != Token::End {
        return parser.error("an operator or end of input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::{Mode, Monomial};
    use num_bigint::BigInt;

    fn ctx() -> Context {
        Context::standard(11, Mode::General).unwrap()
    }

    #[test]
    fn grammar_examples() {
        let c = ctx();
        let e: RingElement<BigInt> = parse("E1*(E1-E2)", &c).unwrap();
        assert_eq!(e.coeff(&Monomial::new(["E1", "E1"])), BigInt::from(1));
        assert_eq!(e.coeff(&Monomial::new(["E1", "E2"])), BigInt::from(-1));
        assert_eq!(e.num_terms(), 2);

        let e: RingElement<BigInt> = parse("L^4 - 2", &c).unwrap();
        assert_eq!(e.coeff(&Monomial::new(["L"; 4])), BigInt::from(1));
        assert_eq!(e.coeff(&Monomial::unit()), BigInt::from(-2));

        assert_eq!(
            parse::<BigInt>("E1*", &c).unwrap_err(),
            ParseError::Syntax {
                position: 3,
                message: "expected an integer, identifier or '(', found end of input".into()
            }
        );
    }

    #[test]
    fn errors_carry_positions() {
        let c = ctx();
        assert_eq!(
            parse::<BigInt>("E1 + Q7", &c).unwrap_err(),
            ParseError::UnknownIdentifier {
                name: "Q7".into(),
                position: 5
            }
        );
        assert!(matches!(
            parse::<BigInt>("(E1", &c),
            Err(ParseError::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            parse::<BigInt>("E1 E2", &c),
            Err(ParseError::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            parse::<BigInt>("E1^x", &c),
            Err(ParseError::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            parse::<BigInt>("E1 % 2", &c),
            Err(ParseError::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            parse::<BigInt>("--E1", &c),
            Err(ParseError::Syntax { position: 1, .. })
        ));
    }

    #[test]
    fn big_and_small_coefficients() {
        let c = ctx();
        let big: RingElement<BigInt> = parse("123456789012345678901234567890*E1", &c).unwrap();
        assert_eq!(big.to_string(), "123456789012345678901234567890*E1");
        assert!(matches!(
            parse::<i64>("123456789012345678901234567890*E1", &c),
            Err(ParseError::BadInteger(_))
        ));
        let small: RingElement<i64> = parse("-(2*E1 - 3)^2", &c).unwrap();
        assert_eq!(small.to_string(), "-9 + 12*E1 - 4*E1^2");
    }

    #[test]
    fn aliases_expand() {
        let c = Context::standard(11, Mode::Complete).unwrap();
        let l: RingElement<BigInt> = parse("L^2", &c).unwrap();
        assert_eq!(l.to_string(), "P1^2 - 2*P1*pt + pt^2");
    }
}
