//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*')? unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' integer)?
//! primary := atom | number | '(' number ',' number ')' | '(' expr ')'
//!          | '[' expr ',' expr ']' | '{' expr ',' expr '}'
//! atom    := 'a' | 'ad' | 'N' | 'K' | 'I' | 'P' digits
//! ```

use num_complex::Complex64;
use thiserror::Error;

use super::expr::OperatorExpr;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("negative power at {pos}")]
    NegativePower { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
}

struct Lexer;

impl Lexer {
    fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let ch = bytes[i] as char;
            if ch.is_ascii_whitespace() {
                i += 1;
            } else if ch.is_ascii_alphabetic() {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            } else if ch.is_ascii_digit() || ch == '.' {
                let start = i;
                while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent part, only if followed by digits
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        while j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                out.push((start, Tok::Number(text[start..i].to_string())));
            } else if "+-*^()[]{},".contains(ch) {
                out.push((i, Tok::Sym(ch)));
                i += 1;
            } else {
                return Err(ParseError::SyntaxError {
                    pos: i,
                    msg: format!("unexpected character {ch:?}"),
                });
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.idx + offset).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::SyntaxError { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs.add(self.term()?);
            } else if self.eat('-') {
                lhs = lhs.sub(self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_)) | Some(Tok::Number(_)) | Some(Tok::Sym('(' | '[' | '{'))
        )
    }

    fn term(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            // juxtaposition multiplies like an explicit `*`
            if self.eat('*') || self.starts_primary() {
                lhs = lhs.mul(self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<OperatorExpr, ParseError> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                OperatorExpr::Scalar(c) if c.im == 0.0 => OperatorExpr::real(-c.re),
                other => other.neg(),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<OperatorExpr, ParseError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        if self.eat('-') {
            return Err(ParseError::NegativePower { pos });
        }
        match self.peek().cloned() {
            Some(Tok::Number(text)) => match text.parse::<u32>() {
                Ok(k) => {
                    self.idx += 1;
                    Ok(base.pow(k))
                }
                Err(_) => self.error(format!("exponent {text:?} is not a non-negative integer")),
            },
            _ => self.error("expected integer exponent"),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Number(text)) => {
                let value: f64 = text.parse().or_else(|_| self.error(format!("bad number {text:?}")))?;
                self.idx += 1;
                Ok(if negative { -value } else { value })
            }
            _ => self.error("expected number"),
        }
    }

    fn is_complex_literal(&self) -> bool {
        let mut k = 1;
        if self.peek_at(k) == Some(&Tok::Sym('-')) {
            k += 1;
        }
        matches!(self.peek_at(k), Some(Tok::Number(_))) && self.peek_at(k + 1) == Some(&Tok::Sym(','))
    }

    fn primary(&mut self) -> Result<OperatorExpr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.idx += 1;
                atom(&name).ok_or(ParseError::SyntaxError {
                    pos,
                    msg: format!("unknown symbol {name:?}"),
                })
            }
            Some(Tok::Number(_)) => Ok(OperatorExpr::real(self.number()?)),
            Some(Tok::Sym('(')) if self.is_complex_literal() => {
                self.idx += 1;
                let re = self.number()?;
                self.expect(',')?;
                let im = self.number()?;
                self.expect(')')?;
                Ok(OperatorExpr::complex(Complex64::new(re, im)))
            }
            Some(Tok::Sym('(')) => {
                self.idx += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Sym(open @ ('[' | '{'))) => {
                self.idx += 1;
                let x = self.expr()?;
                self.expect(',')?;
                let y = self.expr()?;
                if open == '[' {
                    self.expect(']')?;
                    Ok(OperatorExpr::commutator(x, y))
                } else {
                    self.expect('}')?;
                    Ok(OperatorExpr::anticommutator(x, y))
                }
            }
            Some(tok) => self.error(format!("unexpected token {tok:?}")),
            None => self.error("unexpected end of input"),
        }
    }
}

fn atom(name: &str) -> Option<OperatorExpr> {
    Some(match name {
        "a" => OperatorExpr::A,
        "ad" => OperatorExpr::Ad,
        "N" => OperatorExpr::N,
        "K" => OperatorExpr::K,
        "I" => OperatorExpr::I,
        _ => {
            let digits = name.strip_prefix('P')?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            OperatorExpr::P(digits.parse().ok()?)
        }
    })
}

/// Parses an operator expression such as `"[a, ad^3]"` or `"0.5*(a ad + ad a)"`.
pub fn parse(text: &str) -> Result<OperatorExpr, ParseError> {
    let toks = Lexer::tokenize(text)?;
    let mut parser = Parser { toks, idx: 0, end: text.len() };
    let expr = parser.expr()?;
    if parser.idx != parser.toks.len() {
        return parser.error("trailing input");
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use OperatorExpr as E;

    #[test]
    fn commutator_with_power() {
        assert_eq!(parse("[a, ad^3]").unwrap(), E::commutator(E::A, E::Ad.pow(3)));
    }

    #[test]
    fn hamiltonian_expression() {
        let h = parse("0.5*(a*ad + ad*a)").unwrap();
        let want = E::real(0.5).mul(E::A.mul(E::Ad).add(E::Ad.mul(E::A)));
        assert_eq!(h, want);
        // juxtaposition is a product
        assert_eq!(parse("0.5 (a ad + ad a)").unwrap(), want);
    }

    #[test]
    fn negative_power_is_rejected() {
        assert_eq!(parse("ad^-1"), Err(ParseError::NegativePower { pos: 3 }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert!(matches!(parse("a + "), Err(ParseError::SyntaxError { pos: 4, .. })));
        assert!(matches!(parse("[a ad]"), Err(ParseError::SyntaxError { pos: 5, .. })));
        assert!(matches!(parse("b"), Err(ParseError::SyntaxError { pos: 0, .. })));
        assert!(matches!(parse("a^1.5"), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(parse("a $ ad"), Err(ParseError::SyntaxError { pos: 2, .. })));
    }

    #[test]
    fn literals() {
        assert_eq!(parse("(0.5,-1)").unwrap(), E::complex(Complex64::new(0.5, -1.0)));
        assert_eq!(parse("-2 K").unwrap(), E::real(-2.0).mul(E::K));
        assert_eq!(parse("P0 + P12").unwrap(), E::P(0).add(E::P(12)));
        assert_eq!(parse("1e-3").unwrap(), E::real(1e-3));
        assert_eq!(parse("{K, ad}").unwrap(), E::anticommutator(E::K, E::Ad));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("a + ad * K").unwrap(), E::A.add(E::Ad.mul(E::K)));
        assert_eq!(parse("a - ad - K").unwrap(), E::A.sub(E::Ad).sub(E::K));
        assert_eq!(parse("-a^2").unwrap(), E::A.pow(2).neg());
    }

    #[test]
    fn print_parse_roundtrip_samples() {
        for text in [
            "[a, ad^3]",
            "0.5*(a*ad + ad*a)",
            "-(a - ad) * -K",
            "(-0.5)^2 + (1,-2) * (a^2)^3",
            "a - (ad - K) - -1",
            "{[a, ad], P1} - -(0.25,1e-3)",
        ] {
            let once = parse(text).unwrap();
            let twice = parse(&once.to_string()).unwrap();
            assert_eq!(once, twice, "{text} -> {once}");
        }
    }
}
