//! Concrete syntax.
//!
//! ```text
//! formula   := iff
//! iff       := implies ("<->" implies)*
//! implies   := or ("->" implies)?
//! or        := and ("|" and)*
//! and       := unary ("&" unary)*
//! unary     := "!" unary | "(" formula ")" | "true" | sum cmp sum
//! cmp       := ">=" | ">" | "<=" | "<" | "=" | "!="
//! sum       := ("+" | "-")? term (("+" | "-") term)*
//! term      := number ("*" component)? | component
//! number    := digits ("/" digits)?
//! component := "[" prop (";" "{" symbols "}")? "]" | name
//! ```
//!
//! Propositional formulas use the same connectives with `!` binding
//! tightest, then `&`, `|`, `->` (right-associative) and `<->`. A bare
//! symbol or `let`-bound name as a term is the normal component of that
//! formula, as is a bracketed formula without a support.
//!
//! Comparisons are reduced to `≥` atoms: `t <= c` becomes `-t >= -c`,
//! `t > c` becomes `!(-t >= -c)`, `t < c` becomes `!(t >= c)`, `=` is the
//! conjunction of both inequalities and `!=` its negation. Constants may
//! appear on either side; rational coefficients are cleared by the least
//! common multiple of their denominators.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Component, LinAtom, LogicError, QtlFormula};
use crate::prop::{PropFormula, Symbol, SymbolSet};
use crate::Rational;

/// `let`-bound propositional formulas.
pub type Bindings = HashMap<String, PropFormula>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(BigInt),
    Slash,
    Star,
    Plus,
    Minus,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::End => "end of input".into(),
            other => {
                let s = match other {
                    Tok::Slash => "/",
                    Tok::Star => "*",
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::Comma => ",",
                    Tok::Semi => ";",
                    Tok::Bang => "!",
                    Tok::Amp => "&",
                    Tok::Pipe => "|",
                    Tok::Arrow => "->",
                    Tok::DoubleArrow => "<->",
                    Tok::Ge => ">=",
                    Tok::Gt => ">",
                    Tok::Le => "<=",
                    Tok::Lt => "<",
                    Tok::Eq => "=",
                    Tok::Ne => "!=",
                    _ => unreachable!(),
                };
                format!("`{s}`")
            }
        }
    }
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> LogicError {
    let (line, column) = position(text, offset);
    LogicError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if c.is_ascii_alphabetic() || c == b'_' {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            (Tok::Ident(rest[..len].to_string()), len)
        } else if c.is_ascii_digit() {
            let len = rest.bytes().take_while(u8::is_ascii_digit).count();
            let n: BigInt = rest[..len].parse().expect("digits");
            (Tok::Number(n), len)
        } else if rest.starts_with("<->") {
            (Tok::DoubleArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with(">=") {
            (Tok::Ge, 2)
        } else if rest.starts_with("<=") {
            (Tok::Le, 2)
        } else if rest.starts_with("!=") {
            (Tok::Ne, 2)
        } else {
            let tok = match c {
                b'/' => Tok::Slash,
                b'*' => Tok::Star,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'[' => Tok::LBracket,
                b']' => Tok::RBracket,
                b'{' => Tok::LBrace,
                b'}' => Tok::RBrace,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b';' => Tok::Semi,
                b'!' => Tok::Bang,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                b'>' => Tok::Gt,
                b'<' => Tok::Lt,
                b'=' => Tok::Eq,
                _ => {
                    let ch = rest.chars().next().expect("nonempty");
                    return Err(syntax(text, start, format!("unexpected character `{ch}`")));
                }
            };
            (tok, 1)
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn is_symbol_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('p') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

enum Cmp {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
}

/// `Σ coeff·component + constant`.
#[derive(Default)]
struct Sum {
    terms: Vec<(Rational, Component)>,
    constant: Rational,
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    bindings: &'a Bindings,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, bindings: &'a Bindings) -> Result<Self, LogicError> {
        Ok(Parser {
            text,
            toks: lex(text)?,
            pos: 0,
            bindings,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> LogicError {
        syntax(self.text, self.offset(), message)
    }

    fn unexpected(&self, wanted: &str) -> LogicError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LogicError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn finish(&self) -> Result<(), LogicError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    // propositional level

    fn prop(&mut self) -> Result<PropFormula, LogicError> {
        let mut lhs = self.prop_implies()?;
        while self.eat(&Tok::DoubleArrow) {
            lhs = lhs.iff(self.prop_implies()?);
        }
        Ok(lhs)
    }

    fn prop_implies(&mut self) -> Result<PropFormula, LogicError> {
        let lhs = self.prop_or()?;
        if self.eat(&Tok::Arrow) {
            Ok(lhs.implies(self.prop_implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn prop_or(&mut self) -> Result<PropFormula, LogicError> {
        let mut lhs = self.prop_and()?;
        while self.eat(&Tok::Pipe) {
            lhs = lhs.or(self.prop_and()?);
        }
        Ok(lhs)
    }

    fn prop_and(&mut self) -> Result<PropFormula, LogicError> {
        let mut lhs = self.prop_unary()?;
        while self.eat(&Tok::Amp) {
            lhs = lhs.and(self.prop_unary()?);
        }
        Ok(lhs)
    }

    fn prop_unary(&mut self) -> Result<PropFormula, LogicError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(self.prop_unary()?.not())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.prop()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let f = self.name(&name)?;
                self.bump();
                Ok(f)
            }
            _ => Err(self.unexpected("a propositional formula")),
        }
    }

    fn name(&self, name: &str) -> Result<PropFormula, LogicError> {
        if is_symbol_name(name) {
            let s: Symbol = name.parse().map_err(|e: String| self.error(e))?;
            return Ok(PropFormula::Var(s));
        }
        self.bindings
            .get(name)
            .cloned()
            .ok_or_else(|| self.error(format!("unknown name `{name}`")))
    }

    fn symbol_set(&mut self) -> Result<SymbolSet, LogicError> {
        self.expect(Tok::LBrace)?;
        let mut set = SymbolSet::new();
        if self.eat(&Tok::RBrace) {
            return Ok(set);
        }
        loop {
            match self.peek().clone() {
                Tok::Ident(name) if is_symbol_name(&name) => {
                    let s: Symbol = name.parse().map_err(|e: String| self.error(e))?;
                    set.insert(s);
                    self.bump();
                }
                _ => return Err(self.unexpected("a proposition symbol")),
            }
            if self.eat(&Tok::RBrace) {
                return Ok(set);
            }
            self.expect(Tok::Comma)?;
        }
    }

    // team-logic level

    fn formula(&mut self) -> Result<QtlFormula, LogicError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::DoubleArrow) {
            lhs = lhs.iff(self.implies()?);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<QtlFormula, LogicError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            Ok(lhs.implies(self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<QtlFormula, LogicError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Pipe) {
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<QtlFormula, LogicError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<QtlFormula, LogicError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "true" => {
                self.bump();
                Ok(QtlFormula::Verum)
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> Result<QtlFormula, LogicError> {
        let start = self.offset();
        let lhs = self.sum()?;
        let cmp = match self.bump() {
            Tok::Ge => Cmp::Ge,
            Tok::Gt => Cmp::Gt,
            Tok::Le => Cmp::Le,
            Tok::Lt => Cmp::Lt,
            Tok::Eq => Cmp::Eq,
            Tok::Ne => Cmp::Ne,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a comparison operator"));
            }
        };
        let rhs = self.sum()?;
        let atom = self.atom(lhs, rhs, start)?;
        Ok(match cmp {
            Cmp::Ge => atom.into(),
            Cmp::Le => atom.flipped()?.into(),
            Cmp::Gt => QtlFormula::Atom(atom.flipped()?).not(),
            Cmp::Lt => QtlFormula::Atom(atom).not(),
            Cmp::Eq => {
                let le = atom.flipped()?;
                QtlFormula::Atom(atom).and(QtlFormula::Atom(le))
            }
            Cmp::Ne => {
                let le = atom.flipped()?;
                QtlFormula::Atom(atom).and(QtlFormula::Atom(le)).not()
            }
        })
    }

    /// `lhs ≥ rhs` moved into `Σ a·c ≥ b` with integer coefficients.
    fn atom(&self, lhs: Sum, rhs: Sum, start: usize) -> Result<LinAtom, LogicError> {
        let mut terms = lhs.terms;
        terms.extend(rhs.terms.into_iter().map(|(a, c)| (-a, c)));
        if terms.is_empty() {
            return Err(syntax(self.text, start, "a comparison needs at least one component"));
        }
        let bound = rhs.constant - lhs.constant;
        let scale = terms
            .iter()
            .map(|(a, _)| a.denom())
            .chain([bound.denom()])
            .fold(BigInt::one(), |acc, d| acc.lcm(d));
        let scale = Rational::from_integer(scale);
        let overflow = || LogicError::Overflow(self.text[start..].trim().to_string());
        let to_i64 = |r: Rational| (r * &scale).to_integer().to_i64().ok_or_else(overflow);
        let terms = terms
            .into_iter()
            .map(|(a, c)| Ok((to_i64(a)?, c)))
            .collect::<Result<Vec<_>, LogicError>>()?;
        LinAtom::new(terms, to_i64(bound)?)
    }

    fn sum(&mut self) -> Result<Sum, LogicError> {
        let mut sum = Sum::default();
        let mut negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            self.term(&mut sum, negative)?;
            negative = match self.peek() {
                Tok::Minus => true,
                Tok::Plus => false,
                _ => return Ok(sum),
            };
            self.bump();
        }
    }

    fn term(&mut self, sum: &mut Sum, negative: bool) -> Result<(), LogicError> {
        let sign = if negative { -Rational::one() } else { Rational::one() };
        if let Tok::Number(_) = self.peek() {
            let value = sign * self.number()?;
            if self.eat(&Tok::Star) {
                let c = self.component()?;
                sum.terms.push((value, c));
            } else {
                sum.constant += value;
            }
            return Ok(());
        }
        let c = self.component()?;
        sum.terms.push((sign, c));
        Ok(())
    }

    fn number(&mut self) -> Result<Rational, LogicError> {
        let numer = match self.bump() {
            Tok::Number(n) => n,
            _ => unreachable!("checked by caller"),
        };
        if self.eat(&Tok::Slash) {
            match self.bump() {
                Tok::Number(d) if !d.is_zero() => Ok(Rational::new(numer, d)),
                Tok::Number(_) => {
                    self.pos -= 1;
                    Err(self.error("zero denominator"))
                }
                _ => {
                    self.pos -= 1;
                    Err(self.unexpected("a denominator"))
                }
            }
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    fn component(&mut self) -> Result<Component, LogicError> {
        match self.peek().clone() {
            Tok::LBracket => {
                self.bump();
                let f = self.prop()?;
                let c = if self.eat(&Tok::Semi) {
                    let set_at = self.offset();
                    let support = self.symbol_set()?;
                    Component::new(f, support).map_err(|e| match e {
                        LogicError::SupportViolation { .. } => {
                            syntax(self.text, set_at, e.to_string())
                        }
                        other => other,
                    })?
                } else {
                    Component::normal(f)
                };
                self.expect(Tok::RBracket)?;
                Ok(c)
            }
            Tok::Ident(name) if name != "true" => {
                let f = self.name(&name)?;
                self.bump();
                Ok(Component::normal(f))
            }
            _ => Err(self.unexpected("a component")),
        }
    }
}

/// A propositional formula.
pub fn parse_prop(text: &str) -> Result<PropFormula, LogicError> {
    parse_prop_with(text, &Bindings::new())
}

fn parse_prop_with(text: &str, bindings: &Bindings) -> Result<PropFormula, LogicError> {
    let mut p = Parser::new(text, bindings)?;
    let f = p.prop()?;
    p.finish()?;
    Ok(f)
}

impl std::str::FromStr for PropFormula {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_prop(s)
    }
}

pub fn parse_formula(text: &str) -> Result<QtlFormula, LogicError> {
    parse_formula_with(text, &Bindings::new())
}

pub fn parse_formula_with(text: &str, bindings: &Bindings) -> Result<QtlFormula, LogicError> {
    let mut p = Parser::new(text, bindings)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Splits a file into `let` bindings and the remaining text, with binding
/// and comment lines blanked so positions stay true to the file.
fn read_bindings(text: &str) -> Result<(Bindings, String), LogicError> {
    let mut bindings = Bindings::new();
    let mut rest = String::with_capacity(text.len());
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        let body_len = line.trim_end_matches(['\n', '\r']).len();
        if trimmed.starts_with('#') {
            rest.push_str(&" ".repeat(body_len));
            rest.push_str(&line[body_len..]);
        } else if let Some(def) = trimmed.strip_prefix("let ") {
            let at = offset + line.find("let").expect("prefix present");
            let (name, body) = def
                .split_once('=')
                .ok_or_else(|| syntax(text, at, "expected `let <name> = <formula>`"))?;
            let name = name.trim();
            let valid = !name.is_empty()
                && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
                && name.as_bytes()[0].is_ascii_alphabetic();
            if !valid || is_symbol_name(name) || name == "true" {
                return Err(syntax(text, at, format!("`{name}` cannot be bound")));
            }
            let f = parse_prop_with(body, &bindings).map_err(|e| match e {
                LogicError::Syntax { column, message, .. } => {
                    let body_at = at + line[line.find("let").unwrap()..].find('=').unwrap() + 1;
                    let (l, c) = position(text, body_at);
                    LogicError::Syntax {
                        line: l,
                        column: c + column - 1,
                        message,
                    }
                }
                other => other,
            })?;
            bindings.insert(name.to_string(), f);
            rest.push_str(&" ".repeat(body_len));
            rest.push_str(&line[body_len..]);
        } else {
            rest.push_str(line);
        }
        offset += line.len();
    }
    Ok((bindings, rest))
}

/// A formula file: `let <name> = <prop>` lines, `#` comments, and one
/// formula spread over the remaining lines.
pub fn parse_formula_file(text: &str) -> Result<QtlFormula, LogicError> {
    let (bindings, rest) = read_bindings(text)?;
    parse_formula_with(&rest, &bindings)
}

/// One propositional formula per non-blank line; `let` lines and `#`
/// comments are allowed.
pub fn parse_prop_list(text: &str) -> Result<Vec<PropFormula>, LogicError> {
    let (bindings, rest) = read_bindings(text)?;
    let mut out = Vec::new();
    let mut offset = 0;
    for line in rest.split_inclusive('\n') {
        if !line.trim().is_empty() {
            let f = parse_prop_with(line, &bindings).map_err(|e| match e {
                LogicError::Syntax { column, message, .. } => {
                    let (l, _) = position(&rest, offset);
                    LogicError::Syntax {
                        line: l,
                        column,
                        message,
                    }
                }
                other => other,
            })?;
            out.push(f);
        }
        offset += line.len();
    }
    Ok(out)
}
