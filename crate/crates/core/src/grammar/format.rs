//! The line-oriented grammar file format.
//!
//! ```text
//! format: 1
//! brackets: a b c
//! axiom: S
//! S -> U c | _
//! U -> a U a' | _
//! ```
//!
//! Closers are written `a'`, the empty word `_`, alternatives separated by
//! `|`. Any token that appears on some left-hand side is a nonterminal;
//! every other token must be a bracket. Blank lines and `#` comments are
//! ignored. A missing `format:` line means version 1.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::brackets::Alphabet;

use super::{RawGrammar, RawItem, RawRule};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarParseError {
    #[error("unsupported format version `{0}`")]
    BadVersion(String),
    #[error("missing `brackets:` declaration")]
    MissingBrackets,
    #[error("missing `axiom:` declaration")]
    MissingAxiom,
    #[error("line {0}: expected `lhs -> body`")]
    BadRule(usize),
    #[error("invalid bracket declaration: {0}")]
    BadAlphabet(String),
    #[error("`{0}` is declared both as a bracket and as a nonterminal")]
    NameClash(String),
    #[error("line {line}: unknown symbol `{token}`")]
    UnknownSymbol { line: usize, token: String },
    #[error("axiom `{0}` has no rule")]
    UnknownAxiom(String),
}

pub fn parse_grammar(text: &str) -> Result<RawGrammar, GrammarParseError> {
    let mut brackets: Option<Vec<String>> = None;
    let mut axiom: Option<String> = None;
    let mut rule_lines: Vec<(usize, &str)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("format:") {
            let version = rest.trim();
            if version != "1" {
                return Err(GrammarParseError::BadVersion(version.to_string()));
            }
        } else if let Some(rest) = line.strip_prefix("brackets:") {
            brackets = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = line.strip_prefix("axiom:") {
            axiom = Some(rest.trim().to_string());
        } else {
            rule_lines.push((idx + 1, line));
        }
    }

    let brackets = brackets.ok_or(GrammarParseError::MissingBrackets)?;
    let axiom = axiom.ok_or(GrammarParseError::MissingAxiom)?;
    let alphabet = Alphabet::new(&brackets)
        .map_err(|e| GrammarParseError::BadAlphabet(e.to_string()))?;

    let mut lhs_names: BTreeSet<String> = BTreeSet::new();
    let mut split_rules: Vec<(usize, String, &str)> = Vec::new();
    for (line_no, line) in rule_lines {
        let Some((lhs, rhs)) = line.split_once("->") else {
            return Err(GrammarParseError::BadRule(line_no));
        };
        let lhs = lhs.trim();
        if lhs.split_whitespace().count() != 1 {
            return Err(GrammarParseError::BadRule(line_no));
        }
        if alphabet.lookup(lhs).is_some() {
            return Err(GrammarParseError::NameClash(lhs.to_string()));
        }
        lhs_names.insert(lhs.to_string());
        split_rules.push((line_no, lhs.to_string(), rhs.trim()));
    }

    let mut rules = Vec::new();
    for (line_no, lhs, rhs) in split_rules {
        for alternative in rhs.split('|') {
            let mut body = Vec::new();
            for token in alternative.split_whitespace() {
                if token == "_" {
                    continue;
                }
                if lhs_names.contains(token) {
                    body.push(RawItem::Nt(token.to_string()));
                } else if let Ok(b) = alphabet.parse_bracket(token) {
                    body.push(RawItem::Letter(b));
                } else {
                    return Err(GrammarParseError::UnknownSymbol {
                        line: line_no,
                        token: token.to_string(),
                    });
                }
            }
            rules.push(RawRule {
                lhs: lhs.clone(),
                body,
            });
        }
    }
    if !lhs_names.contains(&axiom) {
        return Err(GrammarParseError::UnknownAxiom(axiom));
    }
    Ok(RawGrammar {
        alphabet,
        axiom,
        rules,
    })
}

/// Renders a raw grammar in the file format, grouping alternatives per
/// left-hand side in first-appearance order.
pub fn render_raw_grammar(raw: &RawGrammar) -> String {
    let mut out = String::new();
    out.push_str("brackets:");
    for o in raw.alphabet.openers() {
        out.push(' ');
        out.push_str(raw.alphabet.name(o));
    }
    out.push('\n');
    out.push_str(&format!("axiom: {}\n", raw.axiom));

    let mut order: Vec<&str> = Vec::new();
    for rule in &raw.rules {
        if !order.contains(&rule.lhs.as_str()) {
            order.push(&rule.lhs);
        }
    }
    for lhs in order {
        let alts: Vec<String> = raw
            .rules
            .iter()
            .filter(|r| r.lhs == lhs)
            .map(|r| {
                if r.body.is_empty() {
                    "_".to_string()
                } else {
                    r.body
                        .iter()
                        .map(|item| match item {
                            RawItem::Nt(name) => name.clone(),
                            RawItem::Letter(b) => {
                                let mut s = raw.alphabet.name(b.base).to_string();
                                if b.close {
                                    s.push('\'');
                                }
                                s
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            })
            .collect();
        out.push_str(&format!("{} -> {}\n", lhs, alts.join(" | ")));
    }
    out
}
