//! Recursive-descent parser for the formula surface syntax.

use std::fmt;

use thiserror::Error;

use super::{is_nominal_ident, Formula, Nominal, PropVar};

/// A syntax error, with the 1-based character position where it occurred.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Unexpected {
        found: String,
        expected: &'static str,
    },
    /// An identifier from the propositional namespace was used where a
    /// nominal is required (after `@` or inside `R(...)`).
    NamespaceClash {
        ident: String,
    },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::NamespaceClash { ident } => write!(
                f,
                "namespace clash: {ident:?} names a propositional variable but \
                 is used as a nominal (nominals start with i..n)"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    RelName, // uppercase R introducing R(i,j)
    LParen,
    RParen,
    Comma,
    Amp,
    Pipe,
    Arrow,
    Tilde,
    At,
    BoxOp,
    DiaOp,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::RelName => write!(f, "\"R\""),
            Tok::LParen => write!(f, "\"(\""),
            Tok::RParen => write!(f, "\")\""),
            Tok::Comma => write!(f, "\",\""),
            Tok::Amp => write!(f, "\"&\""),
            Tok::Pipe => write!(f, "\"|\""),
            Tok::Arrow => write!(f, "\"->\""),
            Tok::Tilde => write!(f, "\"~\""),
            Tok::At => write!(f, "\"@\""),
            Tok::BoxOp => write!(f, "\"[]\""),
            Tok::DiaOp => write!(f, "\"<>\""),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let pos = i + 1;
        let c = chars[i];
        let err = |kind| Err(ParseError { pos, kind });
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                toks.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((pos, Tok::RParen));
                i += 1;
            }
            ',' => {
                toks.push((pos, Tok::Comma));
                i += 1;
            }
            '&' => {
                toks.push((pos, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((pos, Tok::Pipe));
                i += 1;
            }
            '~' => {
                toks.push((pos, Tok::Tilde));
                i += 1;
            }
            '@' => {
                toks.push((pos, Tok::At));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((pos, Tok::Arrow));
                    i += 2;
                } else {
                    return err(ParseErrorKind::UnexpectedChar('-'));
                }
            }
            '[' => {
                if chars.get(i + 1) == Some(&']') {
                    toks.push((pos, Tok::BoxOp));
                    i += 2;
                } else {
                    return err(ParseErrorKind::UnexpectedChar('['));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((pos, Tok::DiaOp));
                    i += 2;
                } else {
                    return err(ParseErrorKind::UnexpectedChar('<'));
                }
            }
            'R' => {
                toks.push((pos, Tok::RelName));
                i += 1;
            }
            c if c.is_ascii_lowercase() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect();
                toks.push((pos, Tok::Ident(ident)));
            }
            c => return err(ParseErrorKind::UnexpectedChar(c)),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize, // position just past the input, for end-of-input errors
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn next(&mut self, expected: &'static str) -> Result<(usize, Tok), ParseError> {
        match self.toks.get(self.at) {
            Some((pos, tok)) => {
                self.at += 1;
                Ok((*pos, tok.clone()))
            }
            None => Err(ParseError {
                pos: self.end,
                kind: ParseErrorKind::UnexpectedEnd,
            })
            .map_err(|mut e| {
                // keep the expectation in the message for end-of-input too
                e.kind = match e.kind {
                    ParseErrorKind::UnexpectedEnd => ParseErrorKind::Unexpected {
                        found: "end of input".to_string(),
                        expected,
                    },
                    k => k,
                };
                e
            }),
        }
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<usize, ParseError> {
        let (pos, tok) = self.next(expected)?;
        if tok == want {
            Ok(pos)
        } else {
            Err(ParseError {
                pos,
                kind: ParseErrorKind::Unexpected {
                    found: tok.to_string(),
                    expected,
                },
            })
        }
    }

    fn nominal(&mut self) -> Result<Nominal, ParseError> {
        let (pos, tok) = self.next("a nominal")?;
        match tok {
            Tok::Ident(s) if is_nominal_ident(&s) => Ok(Nominal::new(&s)),
            Tok::Ident(s) => Err(ParseError {
                pos,
                kind: ParseErrorKind::NamespaceClash { ident: s },
            }),
            other => Err(ParseError {
                pos,
                kind: ParseErrorKind::Unexpected {
                    found: other.to_string(),
                    expected: "a nominal",
                },
            }),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.at += 1;
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.at += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.at += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Some(Tok::At) => {
                self.at += 1;
                let n = self.nominal()?;
                Ok(Formula::at(&n, self.unary()?))
            }
            Some(Tok::BoxOp) => {
                self.at += 1;
                Ok(Formula::bx(self.unary()?))
            }
            Some(Tok::DiaOp) => {
                self.at += 1;
                Ok(Formula::dia(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let (pos, tok) = self.next("a formula")?;
        match tok {
            Tok::LParen => {
                let f = self.imp()?;
                self.expect(Tok::RParen, "\")\"")?;
                Ok(f)
            }
            Tok::RelName => {
                self.expect(Tok::LParen, "\"(\" after R")?;
                let i = self.nominal()?;
                self.expect(Tok::Comma, "\",\"")?;
                let j = self.nominal()?;
                self.expect(Tok::RParen, "\")\"")?;
                Ok(Formula::Rel(i, j))
            }
            Tok::Ident(s) if is_nominal_ident(&s) => Ok(Formula::Nom(Nominal::new(&s))),
            Tok::Ident(s) => Ok(Formula::Prop(PropVar::new(&s))),
            other => Err(ParseError {
                pos,
                kind: ParseErrorKind::Unexpected {
                    found: other.to_string(),
                    expected: "a formula",
                },
            }),
        }
    }
}

/// Parses a formula in the surface grammar described in the
/// [module docs](super).
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.chars().count() + 1,
    };
    let f = p.imp()?;
    if let Some((pos, tok)) = p.toks.get(p.at) {
        return Err(ParseError {
            pos: *pos,
            kind: ParseErrorKind::Unexpected {
                found: tok.to_string(),
                expected: "end of input",
            },
        });
    }
    Ok(f)
}
