//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula  ::= iff
//! iff      ::= imp ( "<->" iff )?
//! imp      ::= or ( "->" imp )?
//! or       ::= and ( "|" and )*
//! and      ::= temp ( "&" temp )*
//! temp     ::= unary ( ( "U" | "R" ) temp )?
//! unary    ::= ( "!" | "X" | "F" | "G" | "<<" id ">>" | "[[" id "]]"
//!              | "(" id "," id ")" ) unary
//!            | ( "exists" | "forall" ) id "." formula
//!            | "true" | "false" | id | "(" formula ")"
//! ```
//!
//! Strategy quantifiers and bindings are unary prefixes and bind as tightly as
//! negation; proposition quantifiers extend as far to the right as possible.
//! `U` and `R` associate to the right and bind tighter than `&`.

use super::ast::{Formula, Quantifier};
use crate::error::{Error, Result};

/// Accepted sublanguage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// Strategy Logic: strategy quantifiers and bindings.
    Sl,
    /// Linear temporal logic only.
    Ltl,
    /// Quantified propositional temporal logic.
    Qptl,
}

impl std::str::FromStr for Dialect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dialect> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Dialect::Sl),
            "ltl" => Ok(Dialect::Ltl),
            "qptl" => Ok(Dialect::Qptl),
            other => Err(Error::Dialect(format!("unknown dialect `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '@' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let two = chars.get(i + 1).copied();
        let mut adv = 1;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '!' | '~' => Tok::Not,
            '&' => {
                if two == Some('&') {
                    adv = 2;
                }
                Tok::And
            }
            '|' => {
                if two == Some('|') {
                    adv = 2;
                }
                Tok::Or
            }
            '-' if two == Some('>') => {
                adv = 2;
                Tok::Implies
            }
            '<' if two == Some('-') && chars.get(i + 2) == Some(&'>') => {
                adv = 3;
                Tok::Iff
            }
            '<' if two == Some('<') => {
                adv = 2;
                Tok::LAngle
            }
            '>' if two == Some('>') => {
                adv = 2;
                Tok::RAngle
            }
            '[' if two == Some('[') => {
                adv = 2;
                Tok::LBracket
            }
            ']' if two == Some(']') => {
                adv = 2;
                Tok::RBracket
            }
            c if is_ident_char(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                adv = j - i;
                Tok::Ident(chars[i..j].iter().collect())
            }
            other => {
                return Err(Error::parse(
                    start.0,
                    start.1,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Token {
            tok,
            line: start.0,
            col: start.1,
        });
        i += adv;
        col += adv;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    dialect: Dialect,
    end: (usize, usize),
}

const KEYWORDS: [&str; 9] = ["X", "F", "G", "U", "R", "true", "false", "exists", "forall"];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(Error::parse(l, c, msg))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == k)
    }

    fn dialect_check(&self, construct: &str, allowed: bool) -> Result<()> {
        if allowed {
            Ok(())
        } else {
            let (l, c) = self.here();
            Err(Error::Dialect(format!(
                "{construct} not allowed in the {:?} dialect (line {l}, column {c})",
                self.dialect
            )))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.implication()?;
        if self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.temporal()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if self.is_keyword("U") {
            self.pos += 1;
            return Ok(Formula::until(lhs, self.temporal()?));
        }
        if self.is_keyword("R") {
            self.pos += 1;
            return Ok(Formula::release(lhs, self.temporal()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LAngle) | Some(Tok::LBracket) => {
                self.dialect_check("strategy quantifier", self.dialect == Dialect::Sl)?;
                let exists = self.peek() == Some(&Tok::LAngle);
                self.pos += 1;
                let x = self.ident("a variable")?;
                if exists {
                    self.expect(Tok::RAngle, "`>>`")?;
                } else {
                    self.expect(Tok::RBracket, "`]]`")?;
                }
                let body = self.unary()?;
                let q = if exists {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                Ok(Formula::Quant(q, x, Box::new(body)))
            }
            Some(Tok::LParen) => {
                let is_binding = matches!(self.peek_at(1), Some(Tok::Ident(_)))
                    && self.peek_at(2) == Some(&Tok::Comma);
                self.pos += 1;
                if is_binding {
                    self.dialect_check("binding", self.dialect == Dialect::Sl)?;
                    let a = self.ident("an agent")?;
                    self.expect(Tok::Comma, "`,`")?;
                    let x = self.ident("a variable")?;
                    self.expect(Tok::RParen, "`)`")?;
                    let body = self.unary()?;
                    Ok(Formula::Bind(a, x, Box::new(body)))
                } else {
                    let inner = self.formula()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(inner)
                }
            }
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                match s.as_str() {
                    "true" => {
                        self.pos += 1;
                        Ok(Formula::True)
                    }
                    "false" => {
                        self.pos += 1;
                        Ok(Formula::False)
                    }
                    "X" => {
                        self.pos += 1;
                        Ok(Formula::next(self.unary()?))
                    }
                    "F" => {
                        self.pos += 1;
                        Ok(Formula::eventually(self.unary()?))
                    }
                    "G" => {
                        self.pos += 1;
                        Ok(Formula::globally(self.unary()?))
                    }
                    "exists" | "forall" => {
                        self.dialect_check(
                            "proposition quantifier",
                            self.dialect == Dialect::Qptl,
                        )?;
                        self.pos += 1;
                        let q = self.ident("a proposition")?;
                        self.expect(Tok::Dot, "`.`")?;
                        let body = self.formula()?;
                        let quant = if s == "exists" {
                            Quantifier::Exists
                        } else {
                            Quantifier::Forall
                        };
                        Ok(Formula::PropQuant(quant, q, Box::new(body)))
                    }
                    "U" | "R" => self.fail(format!("`{s}` needs a left operand")),
                    _ => {
                        self.pos += 1;
                        Ok(Formula::Atom(s))
                    }
                }
            }
            Some(_) => self.fail("expected a formula"),
            None => self.fail("unexpected end of input"),
        }
    }
}

/// Parses `text` in the given dialect.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula> {
    let toks = lex(text)?;
    let end = {
        let lines: Vec<&str> = text.split('\n').collect();
        (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1)
    };
    let mut p = Parser {
        toks,
        pos: 0,
        dialect,
        end,
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(f)
}

/// Parses a Strategy Logic formula.
pub fn parse_sl(text: &str) -> Result<Formula> {
    parse_formula(text, Dialect::Sl)
}
