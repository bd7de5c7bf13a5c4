//! Text formats for teams, tables and covers.
//!
//! Team: a header of symbol names, then one line per row with `0`, `1` or
//! `-` per column.
//!
//! ```text
//! p0 p1 p3
//! 1 1 -
//! 0 - 1
//! ```
//!
//! Table: blocks headed `U: <symbols>`, one `<bits> <p/q>` line per
//! assignment, blocks separated by a blank line.
//!
//! ```text
//! U: p0 p1
//! 11 1/2
//! 01 0
//! 10 0
//! 00 1/2
//! ```
//!
//! Blank lines and `#` comments are skipped on input. The writers emit the
//! canonical form, which reads back byte for byte.

use std::fmt;
use std::str::FromStr;

use super::{Cover, Distribution, ProbabilityTable, QuantumTeam, TeamError};
use crate::prop::{Assignment, Symbol, SymbolSet};
use crate::Rational;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_error(line: usize, message: impl Into<String>) -> TeamError {
    TeamError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_symbols<'a, I>(line: usize, tokens: I) -> Result<Vec<Symbol>, TeamError>
where
    I: Iterator<Item = &'a str>,
{
    let mut out: Vec<Symbol> = Vec::new();
    for tok in tokens {
        let sym: Symbol = tok.parse().map_err(|e: String| parse_error(line, e))?;
        if out.contains(&sym) {
            return Err(parse_error(line, format!("symbol {sym} repeated")));
        }
        out.push(sym);
    }
    if out.is_empty() {
        return Err(parse_error(line, "expected at least one symbol"));
    }
    Ok(out)
}

impl fmt::Display for QuantumTeam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let columns: Vec<Symbol> = self.domain().into_iter().collect();
        let header: Vec<String> = columns.iter().map(Symbol::to_string).collect();
        writeln!(f, "{}", header.join(" "))?;
        for row in self.rows() {
            let cells: Vec<&str> = columns
                .iter()
                .map(|s| match row.get(*s) {
                    Some(true) => "1",
                    Some(false) => "0",
                    None => "-",
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for QuantumTeam {
    type Err = TeamError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or_else(|| parse_error(1, "missing header"))?;
        let columns = parse_symbols(hline, header.split_whitespace())?;
        let mut rows = Vec::new();
        for (line, body) in lines {
            let cells: Vec<&str> = body.split_whitespace().collect();
            if cells.len() != columns.len() {
                return Err(parse_error(
                    line,
                    format!("expected {} cells, found {}", columns.len(), cells.len()),
                ));
            }
            let mut row = Assignment::new();
            for (sym, cell) in columns.iter().zip(cells) {
                match cell {
                    "1" => row.set(*sym, true),
                    "0" => row.set(*sym, false),
                    "-" => {}
                    other => return Err(parse_error(line, format!("bad cell `{other}`"))),
                }
            }
            if row.is_empty() {
                return Err(parse_error(line, "row has no determinate value"));
            }
            rows.push(row);
        }
        QuantumTeam::new(rows)
    }
}

impl fmt::Display for ProbabilityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.entries().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let names: Vec<String> = d.domain().iter().map(Symbol::to_string).collect();
            writeln!(f, "U: {}", names.join(" "))?;
            for (s, p) in d.iter() {
                writeln!(f, "{} {}", s.bit_string(), p)?;
            }
        }
        Ok(())
    }
}

impl FromStr for ProbabilityTable {
    type Err = TeamError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        struct Block {
            line: usize,
            symbols: Vec<Symbol>,
            probs: Vec<(Assignment, Rational)>,
        }
        let mut blocks: Vec<Block> = Vec::new();
        for (line, body) in content_lines(text) {
            if let Some(rest) = body.strip_prefix("U:") {
                blocks.push(Block {
                    line,
                    symbols: parse_symbols(line, rest.split_whitespace())?,
                    probs: Vec::new(),
                });
                continue;
            }
            let block = blocks
                .last_mut()
                .ok_or_else(|| parse_error(line, "expected a `U:` header"))?;
            let mut parts = body.split_whitespace();
            let (bits, value) = match (parts.next(), parts.next(), parts.next()) {
                (Some(b), Some(v), None) => (b, v),
                _ => return Err(parse_error(line, "expected `<bits> <probability>`")),
            };
            if bits.len() != block.symbols.len() {
                return Err(parse_error(
                    line,
                    format!("expected {} bits, found `{bits}`", block.symbols.len()),
                ));
            }
            let mut s = Assignment::new();
            for (sym, c) in block.symbols.iter().zip(bits.chars()) {
                match c {
                    '1' => s.set(*sym, true),
                    '0' => s.set(*sym, false),
                    _ => return Err(parse_error(line, format!("bad bit `{c}`"))),
                }
            }
            let p: Rational = value
                .parse()
                .map_err(|_| parse_error(line, format!("bad probability `{value}`")))?;
            block.probs.push((s, p));
        }
        if blocks.is_empty() {
            return Err(parse_error(1, "no `U:` blocks"));
        }
        let mut entries = Vec::with_capacity(blocks.len());
        for b in blocks {
            let domain: SymbolSet = b.symbols.iter().copied().collect();
            let d = Distribution::new(domain, b.probs).map_err(|e| match e {
                TeamError::InvalidDistribution { reason, .. } => parse_error(b.line, reason),
                other => other,
            })?;
            entries.push(d);
        }
        ProbabilityTable::new(entries)
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sets()
            .iter()
            .map(|s| {
                let names: Vec<String> = s.iter().map(Symbol::to_string).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// `{p0,p1};{p0,p3}`, whitespace-insensitive.
impl FromStr for Cover {
    type Err = TeamError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut sets = Vec::new();
        for part in compact.split(';').filter(|p| !p.is_empty()) {
            let inner = part
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .ok_or_else(|| parse_error(1, format!("cover set `{part}` must be braced")))?;
            let syms = parse_symbols(1, inner.split(',').filter(|t| !t.is_empty()))?;
            sets.push(syms.into_iter().collect());
        }
        if sets.is_empty() {
            return Err(parse_error(1, "empty cover"));
        }
        Cover::new(sets)
    }
}
