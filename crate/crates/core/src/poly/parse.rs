//! Recursive-descent parser for the polynomial expression grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)*
//! atom   := rational | var | '(' expr ')'
//! ```
//!
//! Rationals are `p` or `p/q`; variables are `x, y, z` or `x0, x1, ...`.
//! There is no implicit multiplication and no division operator.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::Poly;
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected {0}")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("exponent must be a nonnegative integer")]
    BadExponent,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot mix x,y,z with indexed variables")]
    MixedVariableStyles,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(VarRef),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq)]
enum VarRef {
    Letter(usize),
    Indexed(usize),
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(r) => format!("number {r}"),
        Tok::Var(_) => "variable".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

fn err(position: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { position, kind }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |start: usize| {
        let mut j = start;
        while j < chars.len() && chars[j].1.is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let end = digits(i);
                let num: String = chars[i..end].iter().map(|c| c.1).collect();
                let num: BigInt = num.parse().expect("ascii digits");
                i = end;
                let value = if i < chars.len() && chars[i].1 == '/' {
                    let den_start = i + 1;
                    let den_end = digits(den_start);
                    if den_end == den_start {
                        return Err(match chars.get(den_start) {
                            Some(&(p, ch)) => err(p, ParseErrorKind::UnexpectedChar(ch)),
                            None => err(text.len(), ParseErrorKind::UnexpectedEnd),
                        });
                    }
                    let den: String = chars[den_start..den_end].iter().map(|c| c.1).collect();
                    let den: BigInt = den.parse().expect("ascii digits");
                    if den.is_zero() {
                        return Err(err(chars[den_start].0, ParseErrorKind::ZeroDenominator));
                    }
                    i = den_end;
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                out.push((pos, Tok::Num(value)));
            }
            'x' | 'y' | 'z' => {
                let end = digits(i + 1);
                if c == 'x' && end > i + 1 {
                    let idx: String = chars[i + 1..end].iter().map(|c| c.1).collect();
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| err(pos, ParseErrorKind::UnknownVariable(idx.clone())))?;
                    out.push((pos, Tok::Var(VarRef::Indexed(idx))));
                    i = end;
                } else if end > i + 1 {
                    let name: String = chars[i..end].iter().map(|c| c.1).collect();
                    return Err(err(pos, ParseErrorKind::UnknownVariable(name)));
                } else {
                    let letter = match c {
                        'x' => 0,
                        'y' => 1,
                        _ => 2,
                    };
                    out.push((pos, Tok::Var(VarRef::Letter(letter))));
                    i += 1;
                }
                if i < chars.len() && chars[i].1.is_ascii_alphabetic() {
                    let start = pos;
                    let mut j = i;
                    while j < chars.len() && chars[j].1.is_ascii_alphanumeric() {
                        j += 1;
                    }
                    let name: String = text[start..chars.get(j).map_or(text.len(), |c| c.0)].into();
                    return Err(err(start, ParseErrorKind::UnknownVariable(name)));
                }
            }
            c if c.is_alphabetic() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_alphanumeric() {
                    j += 1;
                }
                let name: String = chars[i..j].iter().map(|c| c.1).collect();
                return Err(err(pos, ParseErrorKind::UnknownVariable(name)));
            }
            other => return Err(err(pos, ParseErrorKind::UnexpectedChar(other))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
    arity: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.at) {
            Some((p, t)) => err(*p, ParseErrorKind::UnexpectedToken(describe(t))),
            None => err(self.end, ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expr(&mut self) -> Result<Poly<Rational>, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.at += 1;
            }
            Some(Tok::Plus) => self.at += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<Rational>, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.at += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly<Rational>, ParseError> {
        let mut base = self.atom()?;
        while let Some(Tok::Caret) = self.peek() {
            self.at += 1;
            let pos = self.pos();
            match self.peek() {
                Some(Tok::Num(r)) if r.is_integer() => {
                    let e: u32 = r
                        .to_integer()
                        .try_into()
                        .map_err(|_| err(pos, ParseErrorKind::BadExponent))?;
                    self.at += 1;
                    base = base.pow(e);
                }
                Some(_) => return Err(err(pos, ParseErrorKind::BadExponent)),
                None => return Err(err(self.end, ParseErrorKind::UnexpectedEnd)),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<Rational>, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.at += 1;
                Ok(Poly::constant(self.arity, r))
            }
            Some(Tok::Var(v)) => {
                self.at += 1;
                let index = match v {
                    VarRef::Letter(i) | VarRef::Indexed(i) => i,
                };
                if index >= self.arity {
                    let name = match v {
                        VarRef::Letter(i) => ["x", "y", "z"][i].to_string(),
                        VarRef::Indexed(i) => format!("x{i}"),
                    };
                    return Err(err(pos, ParseErrorKind::UnknownVariable(name)));
                }
                Ok(Poly::var(self.arity, index))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.at += 1;
                        Ok(inner)
                    }
                    _ => Err(self.unexpected()),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn check_styles(toks: &[(usize, Tok)]) -> Result<(), ParseError> {
    let mut letter = None;
    let mut indexed = None;
    for (p, t) in toks {
        match t {
            Tok::Var(VarRef::Letter(_)) => letter = letter.or(Some(*p)),
            Tok::Var(VarRef::Indexed(_)) => indexed = indexed.or(Some(*p)),
            _ => {}
        }
    }
    match (letter, indexed) {
        (Some(a), Some(b)) => Err(err(a.max(b), ParseErrorKind::MixedVariableStyles)),
        _ => Ok(()),
    }
}

/// Parses `text` as a polynomial in `arity` variables and expands it.
pub fn parse_form(text: &str, arity: usize) -> Result<Poly<Rational>, ParseError> {
    let toks = lex(text)?;
    check_styles(&toks)?;
    let mut parser = Parser {
        toks: &toks,
        at: 0,
        end: text.len(),
        arity,
    };
    let p = parser.expr()?;
    if parser.at != toks.len() {
        return Err(parser.unexpected());
    }
    Ok(p)
}

/// Parses `text`, inferring the arity from the variables that occur: the
/// highest of `x, y, z` used (so `x^2 - y^2` is binary), or one more than the
/// largest index for `x0, x1, ...`. A constant expression has arity 1.
pub fn parse_form_infer(text: &str) -> Result<Poly<Rational>, ParseError> {
    let toks = lex(text)?;
    check_styles(&toks)?;
    let arity = toks
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::Var(VarRef::Letter(i)) | Tok::Var(VarRef::Indexed(i)) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    parse_form(text, arity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn parses_nested_products() {
        let q = parse_form("x*y*z*(x+y+z)", 3).unwrap();
        assert_eq!(q.num_terms(), 3);
        assert!(q.terms().all(|(_, c)| *c == int(1)));
        assert!(parse_form("0", 3).unwrap().is_zero());
        let m = parse_form("x^6+y^6+z^6-10*(x^3*y^3+y^3*z^3+z^3*x^3)", 3).unwrap();
        assert_eq!(m.num_terms(), 6);
        let mut coeffs: Vec<Rational> = m.terms().map(|(_, c)| c.clone()).collect();
        coeffs.sort();
        assert_eq!(coeffs, vec![int(-10), int(-10), int(-10), int(1), int(1), int(1)]);
    }

    #[test]
    fn rational_literals_and_signs() {
        let f = parse_form("-3/6*x + y^2", 2).unwrap();
        assert_eq!(f.to_string(), "y^2 - 1/2*x");
        assert_eq!(parse_form("-(x)", 1).unwrap().to_string(), "-x");
    }

    #[test]
    fn reports_errors_with_positions() {
        let e = parse_form("x + * y", 2).unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_form("x + w", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("w".into()));
        let e = parse_form("z", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("z".into()));
        let e = parse_form("x^-1", 1).unwrap_err();
        assert_eq!((e.position, e.kind), (2, ParseErrorKind::BadExponent));
        let e = parse_form("x^1/2", 1).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadExponent);
        let e = parse_form("(x+y", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        let e = parse_form("2x", 1).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedToken(_)));
        let e = parse_form("1/0", 1).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ZeroDenominator);
        assert!(parse_form("x + x1", 2).is_err());
    }

    #[test]
    fn infers_arity() {
        assert_eq!(parse_form_infer("x^2-y^2").unwrap().arity(), 2);
        assert_eq!(parse_form_infer("x3*x0").unwrap().arity(), 4);
        assert_eq!(parse_form_infer("5").unwrap().arity(), 1);
    }
}
