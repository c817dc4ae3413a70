//! Text grammar for polynomials and polynomial maps.
//!
//! The grammar is the toolkit's wire format for every CLI input. It is
//! whitespace-insensitive, requires an explicit `*` between factors (so `x1`
//! is always an identifier, never `x*1`), and writes rational coefficients as
//! `a/b`. Formally:
//!
//! ```text
//! expr     = term , { ("+" | "-") , term } ;
//! term     = factor , { "*" , factor } ;
//! factor   = "-" , factor | power ;
//! power    = atom , [ "^" , natural ] ;
//! atom     = identifier | rational | "(" , expr , ")" ;
//! rational = natural , [ "/" , natural ] ;
//! natural  = digit , { digit } ;
//! identifier = (letter | "_") , { letter | digit | "_" } ;
//! ```
//!
//! Formatting is deterministic: terms are emitted in descending `lexdeg`
//! order with the context's variable order as priority, and
//! `parse(format(p)) == p` holds exactly for every canonical polynomial.
//!
//! A map is a `;`- or newline-separated list of assignments `var -> expr`,
//! one per source variable.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::context::VariableContext;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::{PolyError, PolyMap, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnknownIdentifier(String),
    ZeroDenominator,
    ExponentTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {}", self.describe())]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn describe(&self) -> String {
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => format!("unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                format!("unexpected `{found}`, expected {expected}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                format!("unexpected end of input, expected {expected}")
            }
            ParseErrorKind::UnknownIdentifier(name) => {
                format!("unknown identifier `{name}`")
            }
            ParseErrorKind::ZeroDenominator => "zero denominator".to_string(),
            ParseErrorKind::ExponentTooLarge => "exponent does not fit".to_string(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapParseError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("assignment at offset {offset} is not of the form `var -> expr`")]
    MalformedAssignment { offset: usize },
    #[error("`{0}` is not a variable of the source context")]
    UnknownSourceVariable(String),
    #[error("variable `{0}` is assigned more than once")]
    DuplicateAssignment(String),
    #[error("no image assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Natural(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => s.clone(),
            Token::Natural(n) => n.to_string(),
            Token::Plus => "+".into(),
            Token::Minus => "-".into(),
            Token::Star => "*".into(),
            Token::Caret => "^".into(),
            Token::Slash => "/".into(),
            Token::LParen => "(".into(),
            Token::RParen => ")".into(),
        }
    }
}

fn tokenize(text: &str, base_offset: usize) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let offset = base_offset + i;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                tokens.push((Token::Plus, offset));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, offset));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, offset));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, offset));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, offset));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, offset));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, offset));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                tokens.push((Token::Natural(digits.parse().expect("digits parse")), offset));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_alphanumeric() || c == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(text[start..i].to_string()), offset));
            }
            other => {
                return Err(ParseError {
                    offset,
                    kind: ParseErrorKind::UnexpectedChar(other),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_offset: usize,
    context: &'a VariableContext,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn fail_here(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some((tok, offset)) => ParseError {
                offset: *offset,
                kind: ParseErrorKind::UnexpectedToken { found: tok.describe(), expected },
            },
            None => ParseError {
                offset: self.end_offset,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            },
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some((Token::Plus, _)) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some((Token::Minus, _)) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Some((Token::Star, _)) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if let Some((Token::Minus, _)) = self.peek() {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(-&inner);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if let Some((Token::Caret, _)) = self.peek() {
            self.pos += 1;
            match self.bump() {
                Some((Token::Natural(n), offset)) => {
                    let exp: u32 = n.try_into().map_err(|_| ParseError {
                        offset,
                        kind: ParseErrorKind::ExponentTooLarge,
                    })?;
                    return Ok(base.pow(exp));
                }
                Some((tok, offset)) => {
                    return Err(ParseError {
                        offset,
                        kind: ParseErrorKind::UnexpectedToken {
                            found: tok.describe(),
                            expected: "a non-negative integer exponent",
                        },
                    })
                }
                None => {
                    return Err(ParseError {
                        offset: self.end_offset,
                        kind: ParseErrorKind::UnexpectedEnd {
                            expected: "a non-negative integer exponent",
                        },
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().cloned() {
            Some((Token::Ident(name), offset)) => {
                self.pos += 1;
                Polynomial::variable(self.context, &name).map_err(|_| ParseError {
                    offset,
                    kind: ParseErrorKind::UnknownIdentifier(name),
                })
            }
            Some((Token::Natural(n), _)) => {
                self.pos += 1;
                // a slash directly after an integer literal forms a rational
                let mut value = BigRational::from_integer(n);
                if let Some((Token::Slash, _)) = self.peek() {
                    self.pos += 1;
                    match self.bump() {
                        Some((Token::Natural(d), offset)) => {
                            if d.is_zero() {
                                return Err(ParseError {
                                    offset,
                                    kind: ParseErrorKind::ZeroDenominator,
                                });
                            }
                            value /= BigRational::from_integer(d);
                        }
                        Some((tok, offset)) => {
                            return Err(ParseError {
                                offset,
                                kind: ParseErrorKind::UnexpectedToken {
                                    found: tok.describe(),
                                    expected: "a denominator",
                                },
                            })
                        }
                        None => {
                            return Err(ParseError {
                                offset: self.end_offset,
                                kind: ParseErrorKind::UnexpectedEnd { expected: "a denominator" },
                            })
                        }
                    }
                }
                Ok(Polynomial::constant(self.context.clone(), value))
            }
            Some((Token::LParen, _)) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.bump() {
                    Some((Token::RParen, _)) => Ok(inner),
                    Some((tok, offset)) => Err(ParseError {
                        offset,
                        kind: ParseErrorKind::UnexpectedToken {
                            found: tok.describe(),
                            expected: "`)`",
                        },
                    }),
                    None => Err(ParseError {
                        offset: self.end_offset,
                        kind: ParseErrorKind::UnexpectedEnd { expected: "`)`" },
                    }),
                }
            }
            _ => Err(self.fail_here("a variable, a number or `(`")),
        }
    }
}

fn parse_with_offset(
    text: &str,
    context: &VariableContext,
    base_offset: usize,
) -> Result<Polynomial, ParseError> {
    let tokens = tokenize(text, base_offset)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_offset: base_offset + text.len(),
        context,
    };
    let poly = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.fail_here("`+`, `-`, `*`, `^` or end of input"));
    }
    Ok(poly)
}

/// Parses an expression over the given context into a canonical polynomial.
pub fn parse_polynomial(text: &str, context: &VariableContext) -> Result<Polynomial, ParseError> {
    parse_with_offset(text, context, 0)
}

fn format_coefficient(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Renders a monomial as `x*y^2`-style factors in context order; the unit
/// monomial renders as `1`.
pub fn format_monomial(context: &VariableContext, mono: &Monomial) -> String {
    if mono.is_unit() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for idx in 0..context.len() {
        match mono.exponent(idx) {
            0 => {}
            1 => parts.push(context.name(idx).to_string()),
            e => parts.push(format!("{}^{}", context.name(idx), e)),
        }
    }
    parts.join("*")
}

/// Deterministic rendering: terms in descending lexdeg order (context
/// priority); `parse_polynomial(format_polynomial(p)) == p`.
pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let order = MonomialOrder::lexdeg(p.context());
    let mut terms: Vec<(&Monomial, &BigRational)> = p.terms().collect();
    terms.sort_by(|(a, _), (b, _)| order.cmp(b, a));

    let mut out = String::new();
    for (i, (mono, coeff)) in terms.iter().enumerate() {
        let negative = coeff.is_negative();
        let abs = coeff.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if mono.is_unit() {
            out.push_str(&format_coefficient(&abs));
        } else if abs.is_one() {
            out.push_str(&format_monomial(p.context(), mono));
        } else {
            out.push_str(&format_coefficient(&abs));
            out.push('*');
            out.push_str(&format_monomial(p.context(), mono));
        }
    }
    out
}

/// Parses a map given as assignments `var -> expr`, separated by `;` or
/// newlines. Every source variable must be assigned exactly once; images are
/// parsed over the target context.
pub fn parse_map(
    text: &str,
    source: &VariableContext,
    target: &VariableContext,
) -> Result<PolyMap, MapParseError> {
    let mut images: Vec<Option<Polynomial>> = vec![None; source.len()];
    let mut cursor = 0usize;
    for raw in text.split_inclusive(|c| c == ';' || c == '\n') {
        let segment_start = cursor;
        cursor += raw.len();
        let segment = raw.strip_suffix(|c| c == ';' || c == '\n').unwrap_or(raw);
        if segment.trim().is_empty() {
            continue;
        }
        let arrow = segment.find("->").ok_or(MapParseError::MalformedAssignment {
            offset: segment_start,
        })?;
        let name = segment[..arrow].trim();
        let idx = source
            .index_of(name)
            .ok_or_else(|| MapParseError::UnknownSourceVariable(name.to_string()))?;
        if images[idx].is_some() {
            return Err(MapParseError::DuplicateAssignment(name.to_string()));
        }
        let expr_start = segment_start + arrow + 2;
        let image = parse_with_offset(&segment[arrow + 2..], target, expr_start)?;
        images[idx] = Some(image);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, img)| img.ok_or_else(|| MapParseError::MissingAssignment(source.name(i).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMap::new(source.clone(), target.clone(), images)?)
}

/// Renders a map as one `var -> expr` assignment per source variable,
/// separated by `; `.
pub fn format_map(map: &PolyMap) -> String {
    map.source()
        .names()
        .iter()
        .enumerate()
        .map(|(i, name)| format!("{name} -> {}", format_polynomial(map.image(i))))
        .collect::<Vec<_>>()
        .join(" ; ")
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_map(self))
    }
}
