//! The free involutive monoid over an alphabet of opening brackets.
//!
//! An alphabet declares opening brackets only; the matching closing brackets
//! are derived. Words over openers and closers support reduction (cancelling
//! adjacent matching pairs `a a'`), height, involution and the
//! well-formedness predicates. Reduction is one-sided: `a' a` never cancels.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Interned id of an opening bracket. Closers are never interned; they are
/// openers with the `close` polarity flag set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Opener(pub u32);

/// A single bracket: an opener id plus a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bracket {
    pub base: Opener,
    pub close: bool,
}

impl Bracket {
    pub fn open(base: Opener) -> Self {
        Bracket { base, close: false }
    }

    pub fn closing(base: Opener) -> Self {
        Bracket { base, close: true }
    }

    /// Same letter, opposite polarity.
    pub fn flipped(self) -> Self {
        Bracket {
            base: self.base,
            close: !self.close,
        }
    }
}

/// An alphabet of distinct opening brackets, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Opener>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must declare at least one opening bracket")]
    Empty,
    #[error("duplicate bracket `{0}`")]
    Duplicate(String),
    #[error("invalid bracket name `{0}`")]
    BadName(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("unknown bracket `{0}`")]
    UnknownLetter(String),
}

impl Alphabet {
    /// Builds an alphabet from opener names. Names must be nonempty, free of
    /// whitespace, not end in `'` (reserved for closers) and be distinct.
    pub fn new<S: AsRef<str>>(openers: impl IntoIterator<Item = S>) -> Result<Self, AlphabetError> {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        for name in openers {
            let name = name.as_ref();
            if name.is_empty()
                || name.ends_with('\'')
                || name == "_"
                || name.chars().any(char::is_whitespace)
            {
                return Err(AlphabetError::BadName(name.to_string()));
            }
            if index.contains_key(name) {
                return Err(AlphabetError::Duplicate(name.to_string()));
            }
            index.insert(name.to_string(), Opener(names.len() as u32));
            names.push(name.to_string());
        }
        if names.is_empty() {
            return Err(AlphabetError::Empty);
        }
        Ok(Alphabet { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn openers(&self) -> impl Iterator<Item = Opener> + '_ {
        (0..self.names.len() as u32).map(Opener)
    }

    pub fn name(&self, o: Opener) -> &str {
        &self.names[o.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<Opener> {
        self.index.get(name).copied()
    }

    /// Parses a token as a bracket: `a` is an opener, `a'` its closer.
    pub fn parse_bracket(&self, token: &str) -> Result<Bracket, WordParseError> {
        if let Some(stripped) = token.strip_suffix('\'') {
            if let Some(o) = self.lookup(stripped) {
                return Ok(Bracket::closing(o));
            }
        } else if let Some(o) = self.lookup(token) {
            return Ok(Bracket::open(o));
        }
        Err(WordParseError::UnknownLetter(token.to_string()))
    }

    /// Parses a whitespace-separated word literal; `_` denotes the empty word.
    pub fn parse_word(&self, input: &str) -> Result<Word, WordParseError> {
        let mut letters = Vec::new();
        for token in input.split_whitespace() {
            if token == "_" {
                continue;
            }
            letters.push(self.parse_bracket(token)?);
        }
        Ok(Word(letters))
    }
}

/// A word over opening and closing brackets.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Bracket>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// A word of openers only.
    pub fn from_openers(openers: &[Opener]) -> Self {
        Word(openers.iter().map(|&o| Bracket::open(o)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Number of openers minus number of closers.
    pub fn hd(&self) -> i64 {
        self.0
            .iter()
            .map(|b| if b.close { -1 } else { 1 })
            .sum()
    }

    /// Reverses the word and flips every polarity.
    pub fn involute(&self) -> Word {
        Word(self.0.iter().rev().map(|b| b.flipped()).collect())
    }

    /// Cancels all matching `a a'` pairs in a single left-to-right pass.
    ///
    /// The output stack never contains a factor `a a'`: when a closer arrives
    /// and the top of the stack is its opener, the two cancel; any cascade is
    /// handled by the next letters seeing the new top.
    pub fn reduce(&self) -> Reduced {
        let mut out: Vec<Bracket> = Vec::with_capacity(self.0.len());
        for &b in &self.0 {
            if b.close {
                if let Some(&top) = out.last() {
                    if !top.close && top.base == b.base {
                        out.pop();
                        continue;
                    }
                }
            }
            out.push(b);
        }
        Reduced::from_reduced_letters(out)
    }

    /// True iff every prefix has nonnegative height.
    pub fn is_nonnegative(&self) -> bool {
        let mut h: i64 = 0;
        for b in &self.0 {
            h += if b.close { -1 } else { 1 };
            if h < 0 {
                return false;
            }
        }
        true
    }

    /// True iff the reduced word lies in `A'* A*`.
    pub fn is_wwf(&self) -> bool {
        matches!(self.reduce(), Reduced::Wwf(_))
    }

    /// True iff the reduced word contains openers only.
    pub fn is_wf(&self) -> bool {
        match self.reduce() {
            Reduced::Wwf(w) => w.neg.is_empty(),
            Reduced::Other(_) => false,
        }
    }

    /// True iff the word reduces to the empty word.
    pub fn is_balanced(&self) -> bool {
        match self.reduce() {
            Reduced::Wwf(w) => w.neg.is_empty() && w.pos.is_empty(),
            Reduced::Other(_) => false,
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> DisplayWord<'a> {
        DisplayWord {
            word: self,
            alphabet,
        }
    }
}

/// The reduced form of a word.
///
/// A reduced word in `A'* A*` is kept as the pair of opener words `(u, v)`
/// denoting `u' v`; anything else is weakly ill-formed and kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Reduced {
    Wwf(WwfWord),
    Other(Word),
}

/// A weakly well-formed reduced word `u' v`, stored as the opener words
/// `u` (whose involution is the closer prefix) and `v`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WwfWord {
    pub neg: Vec<Opener>,
    pub pos: Vec<Opener>,
}

impl WwfWord {
    pub fn hd(&self) -> i64 {
        self.pos.len() as i64 - self.neg.len() as i64
    }

    /// Renders `u' v` as a word.
    pub fn to_word(&self) -> Word {
        let mut letters: Vec<Bracket> = self
            .neg
            .iter()
            .rev()
            .map(|&o| Bracket::closing(o))
            .collect();
        letters.extend(self.pos.iter().map(|&o| Bracket::open(o)));
        Word(letters)
    }
}

impl Reduced {
    fn from_reduced_letters(letters: Vec<Bracket>) -> Reduced {
        let split = letters.iter().take_while(|b| b.close).count();
        if letters[split..].iter().any(|b| b.close) {
            return Reduced::Other(Word(letters));
        }
        // closer block read left to right is the involution of `neg`
        let neg: Vec<Opener> = letters[..split].iter().rev().map(|b| b.base).collect();
        let pos: Vec<Opener> = letters[split..].iter().map(|b| b.base).collect();
        Reduced::Wwf(WwfWord { neg, pos })
    }

    pub fn to_word(&self) -> Word {
        match self {
            Reduced::Wwf(w) => w.to_word(),
            Reduced::Other(w) => w.clone(),
        }
    }

    pub fn is_wwf(&self) -> bool {
        matches!(self, Reduced::Wwf(_))
    }

    pub fn hd(&self) -> i64 {
        match self {
            Reduced::Wwf(w) => w.hd(),
            Reduced::Other(w) => w.hd(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Reduced::Wwf(w) => w.neg.len() + w.pos.len(),
            Reduced::Other(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Puts opener words in shortest-then-lexicographic order; this is the
/// canonical word order used for deterministic tie-breaking throughout.
pub fn by_len_lex(a: &[Opener], b: &[Opener]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub struct DisplayWord<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("_");
        }
        for (i, b) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.alphabet.name(b.base))?;
            if b.close {
                f.write_str("'")?;
            }
        }
        Ok(())
    }
}

/// Joins opener names, omitting separators when every name is a single
/// character (so `a b` prints as `ab`).
pub fn display_openers(word: &[Opener], alphabet: &Alphabet) -> String {
    if word.is_empty() {
        return "_".to_string();
    }
    let compact = alphabet.openers().all(|o| alphabet.name(o).chars().count() == 1);
    let names: Vec<&str> = word.iter().map(|&o| alphabet.name(o)).collect();
    if compact {
        names.concat()
    } else {
        names.join(" ")
    }
}
