//! Recursive-descent parser for the LTL surface syntax.
//!
//! Precedence, tightest first:
//! - unary `!`, `F`, `G`, `X`
//! - `U`, `R` (right-associative)
//! - `&` (left-associative)
//! - `|` (left-associative)
//!
//! The single letters `F G X U R` and the words `true`/`false` are reserved
//! and cannot be used as atom names.

use super::{Formula, LtlError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Until,
    Release,
    Finally,
    Globally,
    Next,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, LtlError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].1.is_ascii_alphanumeric() || bytes[i].1 == '_') {
                i += 1;
            }
            let word: String = bytes[start..i].iter().map(|&(_, c)| c).collect();
            let tok = match word.as_str() {
                "true" => Tok::True,
                "false" => Tok::False,
                "U" => Tok::Until,
                "R" => Tok::Release,
                "F" => Tok::Finally,
                "G" => Tok::Globally,
                "X" => Tok::Next,
                _ => Tok::Ident(word),
            };
            out.push((pos, tok));
            continue;
        }
        let mut end = i + 1;
        while end < bytes.len()
            && !bytes[end].1.is_whitespace()
            && !bytes[end].1.is_ascii_alphanumeric()
            && !"!&|()_".contains(bytes[end].1)
        {
            end += 1;
        }
        let token: String = bytes[i..end].iter().map(|&(_, c)| c).collect();
        return Err(LtlError::UnknownToken { pos, token });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn err(&self, msg: &str) -> LtlError {
        LtlError::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn or(&mut self) -> Result<Formula, LtlError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LtlError> {
        let mut lhs = self.binary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.binary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn binary(&mut self) -> Result<Formula, LtlError> {
        let lhs = self.unary()?;
        match self.peek() {
            Some(Tok::Until) => {
                self.bump();
                Ok(Formula::until(lhs, self.binary()?))
            }
            Some(Tok::Release) => {
                self.bump();
                Ok(Formula::release(lhs, self.binary()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, LtlError> {
        match self.bump() {
            Some(Tok::Not) => Ok(Formula::not(self.unary()?)),
            Some(Tok::Finally) => Ok(Formula::finally(self.unary()?)),
            Some(Tok::Globally) => Ok(Formula::globally(self.unary()?)),
            Some(Tok::Next) => Ok(Formula::Next(Box::new(self.unary()?))),
            Some(Tok::True) => Ok(Formula::True),
            Some(Tok::False) => Ok(Formula::False),
            Some(Tok::Ident(p)) => Ok(Formula::Atom(p)),
            Some(Tok::LParen) => {
                let inner = self.or()?;
                if self.bump() != Some(Tok::RParen) {
                    self.at -= 1;
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(_) => {
                self.at -= 1;
                Err(self.err("expected a formula"))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_ltl(text: &str) -> Result<Formula, LtlError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let f = p.or()?;
    if p.at < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}
