//! Context-free grammars over bracket alphabets and the well-formedness
//! decision pipeline.
//!
//! Grammars are normalized to rules of the forms `X -> Y Z`, `X -> Y` and
//! `X -> γ` with `γ` a reduced constant word, and reduced to the productive
//! nonterminals reachable from the axiom. The analyses live in submodules:
//! [`nonneg`] (tropical nonnegativity check), [`descent`] (per-nonterminal
//! descent words as SLPs) and [`iterate`] (the height-bounded fixed point
//! and the decision procedures).

mod descent;
mod format;
mod iterate;
mod nonneg;

pub use descent::{compute_descent, DescentError, DescentInfo};
pub use format::{parse_grammar, render_raw_grammar};
pub use iterate::{
    decide_balanced_cfg, decide_well_formed, decide_well_formed_normalized, iterate_heights,
    BalanceVerdict, HeightTable, IterateError, Limits, NotWfEvidence, Violation, WfAnalysis,
    WfVerdict,
};
pub use nonneg::{check_nonnegative, min_heights, Negativity};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::brackets::{Alphabet, Bracket, Reduced, Word};

/// Interned nonterminal id within one grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NtId(pub u32);

/// A production body in normal form.
#[derive(Debug, Clone)]
pub enum Prod {
    Binary(NtId, NtId),
    Unit(NtId),
    Const(Reduced),
}

/// A normalized, reduced grammar.
#[derive(Debug, Clone)]
pub struct Grammar {
    pub alphabet: Alphabet,
    axiom: NtId,
    names: Vec<String>,
    prods: Vec<Vec<Prod>>,
}

/// One alternative of a raw rule: terminals and nonterminal references in
/// written order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawItem {
    Letter(Bracket),
    Nt(String),
}

#[derive(Debug, Clone)]
pub struct RawRule {
    pub lhs: String,
    pub body: Vec<RawItem>,
}

/// A grammar as written: arbitrary-length bodies, one `RawRule` per
/// alternative.
#[derive(Debug, Clone)]
pub struct RawGrammar {
    pub alphabet: Alphabet,
    pub axiom: String,
    pub rules: Vec<RawRule>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("grammar declares no rules")]
    Empty,
    #[error("axiom `{0}` has no rule")]
    UndefinedAxiom(String),
    #[error("undefined nonterminal `{0}` in a rule body")]
    UndefinedNonterminal(String),
}

impl Grammar {
    pub fn axiom(&self) -> NtId {
        self.axiom
    }

    pub fn nt_count(&self) -> usize {
        self.names.len()
    }

    pub fn nt_ids(&self) -> impl Iterator<Item = NtId> {
        (0..self.names.len() as u32).map(NtId)
    }

    pub fn name(&self, nt: NtId) -> &str {
        &self.names[nt.0 as usize]
    }

    pub fn prods(&self, nt: NtId) -> &[Prod] {
        &self.prods[nt.0 as usize]
    }

    /// True iff the axiom generates nothing (the grammar was reduced to an
    /// unproductive axiom).
    pub fn is_empty_language(&self) -> bool {
        self.prods.iter().all(|p| p.is_empty())
    }

    /// Renders a production for reports, e.g. `V -> U Bbar`.
    pub fn describe_prod(&self, lhs: NtId, prod: &Prod) -> String {
        match prod {
            Prod::Binary(y, z) => {
                format!("{} -> {} {}", self.name(lhs), self.name(*y), self.name(*z))
            }
            Prod::Unit(y) => format!("{} -> {}", self.name(lhs), self.name(*y)),
            Prod::Const(c) => format!(
                "{} -> {}",
                self.name(lhs),
                c.to_word().display(&self.alphabet)
            ),
        }
    }

    /// The grammar of the involuted language: constants are involuted and
    /// every body is reversed.
    pub fn involute(&self) -> Grammar {
        let prods = self
            .prods
            .iter()
            .map(|alts| {
                alts.iter()
                    .map(|p| match p {
                        Prod::Binary(y, z) => Prod::Binary(*z, *y),
                        Prod::Unit(y) => Prod::Unit(*y),
                        Prod::Const(c) => Prod::Const(c.to_word().involute().reduce()),
                    })
                    .collect()
            })
            .collect();
        Grammar {
            alphabet: self.alphabet.clone(),
            axiom: self.axiom,
            names: self.names.clone(),
            prods,
        }
    }
}

/// Binarizes a raw grammar into the three normal rule forms, reduces all
/// constants, and trims to the productive nonterminals reachable from the
/// axiom. Fresh chain and constant-carrier nonterminals are named `%k`.
pub fn normalize(raw: &RawGrammar) -> Result<Grammar, GrammarError> {
    if raw.rules.is_empty() {
        return Err(GrammarError::Empty);
    }
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, NtId> = BTreeMap::new();
    for rule in &raw.rules {
        if !index.contains_key(&rule.lhs) {
            index.insert(rule.lhs.clone(), NtId(names.len() as u32));
            names.push(rule.lhs.clone());
        }
    }
    let axiom = *index
        .get(&raw.axiom)
        .ok_or_else(|| GrammarError::UndefinedAxiom(raw.axiom.clone()))?;

    let mut prods: Vec<Vec<Prod>> = vec![Vec::new(); names.len()];
    let mut fresh_counter = 0usize;
    let mut const_carriers: BTreeMap<Word, NtId> = BTreeMap::new();

    // items of a body after grouping terminal runs into words
    enum Item {
        W(Word),
        N(NtId),
    }

    let mut fresh = |names: &mut Vec<String>, prods: &mut Vec<Vec<Prod>>| loop {
        let candidate = format!("%{fresh_counter}");
        fresh_counter += 1;
        if !names.contains(&candidate) {
            names.push(candidate);
            prods.push(Vec::new());
            return NtId(names.len() as u32 - 1);
        }
    };

    for rule in &raw.rules {
        let lhs = index[&rule.lhs];
        let mut items: Vec<Item> = Vec::new();
        for raw_item in &rule.body {
            match raw_item {
                RawItem::Letter(b) => {
                    if let Some(Item::W(w)) = items.last_mut() {
                        w.0.push(*b);
                    } else {
                        items.push(Item::W(Word(vec![*b])));
                    }
                }
                RawItem::Nt(name) => {
                    let id = *index
                        .get(name)
                        .ok_or_else(|| GrammarError::UndefinedNonterminal(name.clone()))?;
                    items.push(Item::N(id));
                }
            }
        }
        match items.len() {
            0 => prods[lhs.0 as usize].push(Prod::Const(Word::empty().reduce())),
            1 => match items.pop().unwrap() {
                Item::W(w) => prods[lhs.0 as usize].push(Prod::Const(w.reduce())),
                Item::N(y) => prods[lhs.0 as usize].push(Prod::Unit(y)),
            },
            _ => {
                // every item becomes a nonterminal, then a right-leaning chain
                let ids: Vec<NtId> = items
                    .into_iter()
                    .map(|item| match item {
                        Item::N(y) => y,
                        Item::W(w) => *const_carriers.entry(w.clone()).or_insert_with(|| {
                            let id = fresh(&mut names, &mut prods);
                            prods[id.0 as usize].push(Prod::Const(w.reduce()));
                            id
                        }),
                    })
                    .collect();
                let mut rhs = ids[ids.len() - 1];
                for &y in ids[1..ids.len() - 1].iter().rev() {
                    let chain = fresh(&mut names, &mut prods);
                    prods[chain.0 as usize].push(Prod::Binary(y, rhs));
                    rhs = chain;
                }
                prods[lhs.0 as usize].push(Prod::Binary(ids[0], rhs));
            }
        }
    }

    Ok(reduce_grammar(&Grammar {
        alphabet: raw.alphabet.clone(),
        axiom,
        names,
        prods,
    }))
}

/// Restricts a grammar to productive nonterminals reachable from the axiom.
/// An unproductive axiom is kept with no rules and generates nothing.
pub fn reduce_grammar(g: &Grammar) -> Grammar {
    let n = g.nt_count();
    let mut productive = vec![false; n];
    loop {
        let mut changed = false;
        for x in 0..n {
            if productive[x] {
                continue;
            }
            let ok = g.prods[x].iter().any(|p| match p {
                Prod::Const(_) => true,
                Prod::Unit(y) => productive[y.0 as usize],
                Prod::Binary(y, z) => productive[y.0 as usize] && productive[z.0 as usize],
            });
            if ok {
                productive[x] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let usable = |p: &Prod| match p {
        Prod::Const(_) => true,
        Prod::Unit(y) => productive[y.0 as usize],
        Prod::Binary(y, z) => productive[y.0 as usize] && productive[z.0 as usize],
    };
    let mut reachable = vec![false; n];
    let mut stack = vec![g.axiom];
    reachable[g.axiom.0 as usize] = true;
    while let Some(x) = stack.pop() {
        if !productive[x.0 as usize] {
            continue;
        }
        for p in g.prods[x.0 as usize].iter().filter(|p| usable(p)) {
            let mut push = |y: NtId| {
                if !reachable[y.0 as usize] {
                    reachable[y.0 as usize] = true;
                    stack.push(y);
                }
            };
            match p {
                Prod::Binary(y, z) => {
                    push(*y);
                    push(*z);
                }
                Prod::Unit(y) => push(*y),
                Prod::Const(_) => {}
            }
        }
    }
    let keep: Vec<usize> = (0..n)
        .filter(|&x| reachable[x] && (productive[x] || NtId(x as u32) == g.axiom))
        .collect();
    let remap: BTreeMap<usize, NtId> = keep
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, NtId(new as u32)))
        .collect();
    let names = keep.iter().map(|&x| g.names[x].clone()).collect();
    let prods = keep
        .iter()
        .map(|&x| {
            if !productive[x] {
                return Vec::new();
            }
            g.prods[x]
                .iter()
                .filter(|p| usable(p))
                .map(|p| match p {
                    Prod::Binary(y, z) => {
                        Prod::Binary(remap[&(y.0 as usize)], remap[&(z.0 as usize)])
                    }
                    Prod::Unit(y) => Prod::Unit(remap[&(y.0 as usize)]),
                    Prod::Const(c) => Prod::Const(c.clone()),
                })
                .collect()
        })
        .collect();
    Grammar {
        alphabet: g.alphabet.clone(),
        axiom: remap[&(g.axiom.0 as usize)],
        names,
        prods,
    }
}

/// The prefix-closure grammar: `L(axiom) ∪ {ε} = pfcl(L_X)`.
///
/// Every nonterminal `Y` gets a companion `Y%p` generating the nonempty
/// prefixes of `Y`'s words: a binary rule contributes a prefix of its left
/// part, a full left part with a prefix of the right, or the full body; a
/// constant contributes each of its nonempty prefixes.
pub fn prefix_closure(g: &Grammar, start: NtId) -> Grammar {
    let n = g.nt_count();
    let p = |x: NtId| NtId(x.0 + n as u32);
    let mut names = g.names.clone();
    names.extend(g.names.iter().map(|s| format!("{s}%p")));
    let mut prods = g.prods.clone();
    for x in g.nt_ids() {
        let mut alts = Vec::new();
        for prod in g.prods(x) {
            match prod {
                Prod::Binary(y, z) => {
                    alts.push(Prod::Unit(p(*y)));
                    alts.push(Prod::Binary(*y, p(*z)));
                    alts.push(Prod::Binary(*y, *z));
                }
                Prod::Unit(y) => {
                    alts.push(Prod::Unit(p(*y)));
                    alts.push(Prod::Unit(*y));
                }
                Prod::Const(c) => {
                    let word = c.to_word();
                    for cut in 1..=word.len() {
                        alts.push(Prod::Const(Word(word.0[..cut].to_vec()).reduce()));
                    }
                }
            }
        }
        prods.push(alts);
    }
    reduce_grammar(&Grammar {
        alphabet: g.alphabet.clone(),
        axiom: p(start),
        names,
        prods,
    })
}

/// Collects the reduced constants of reachable rules that already fall
/// outside `A'* A*`; any such constant is immediate not-wf evidence.
pub fn ill_formed_constants(g: &Grammar) -> Vec<(NtId, Word)> {
    let mut out = Vec::new();
    for x in g.nt_ids() {
        for p in g.prods(x) {
            if let Prod::Const(Reduced::Other(w)) = p {
                out.push((x, w.clone()));
            }
        }
    }
    out
}

/// Builds a raw grammar in memory; bodies use whitespace-separated tokens
/// with closers written `a'`, so tests can state grammars compactly.
pub fn raw_grammar_from_rules(openers: &[&str], axiom: &str, rules: &[(&str, &str)]) -> RawGrammar {
    let alphabet = Alphabet::new(openers.iter().copied()).expect("valid alphabet");
    let lhs_names: BTreeSet<&str> = rules.iter().map(|(lhs, _)| *lhs).collect();
    let mut raw_rules = Vec::new();
    for (lhs, alternatives) in rules {
        for alt in alternatives.split('|') {
            let mut body = Vec::new();
            for token in alt.split_whitespace() {
                if token == "_" {
                    continue;
                }
                if lhs_names.contains(token) {
                    body.push(RawItem::Nt(token.to_string()));
                } else {
                    let b = alphabet
                        .parse_bracket(token)
                        .unwrap_or_else(|_| panic!("unknown token `{token}`"));
                    body.push(RawItem::Letter(b));
                }
            }
            raw_rules.push(RawRule {
                lhs: lhs.to_string(),
                body,
            });
        }
    }
    RawGrammar {
        alphabet,
        axiom: axiom.to_string(),
        rules: raw_rules,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::enumerate_cfg;

    fn dyck() -> RawGrammar {
        raw_grammar_from_rules(&["a"], "S", &[("S", "_ | S S | a S a'")])
    }

    #[test]
    fn normalize_binarizes_long_bodies() {
        let raw = raw_grammar_from_rules(&["a"], "W3", &[("W3", "a W2 W2 a' | _"), ("W2", "a a")]);
        let g = normalize(&raw).unwrap();
        let binaries = g
            .nt_ids()
            .flat_map(|x| g.prods(x))
            .filter(|p| matches!(p, Prod::Binary(..)))
            .count();
        assert!(binaries >= 3);
    }

    #[test]
    fn normalize_reduces_constants() {
        let raw = raw_grammar_from_rules(&["a", "b"], "S", &[("S", "a a' b")]);
        let g = normalize(&raw).unwrap();
        match &g.prods(g.axiom())[0] {
            Prod::Const(c) => assert_eq!(c.to_word().display(&g.alphabet).to_string(), "b"),
            _ => panic!("expected constant"),
        }
    }

    #[test]
    fn normalize_drops_unreachable_and_unproductive() {
        let raw = raw_grammar_from_rules(&["a"], "S", &[("S", "a"), ("X", "a a"), ("Y", "Y a")]);
        let g = normalize(&raw).unwrap();
        assert_eq!(g.nt_count(), 1);
        assert_eq!(g.name(g.axiom()), "S");
    }

    #[test]
    fn normalize_errors() {
        let raw = RawGrammar {
            alphabet: Alphabet::new(["a"]).unwrap(),
            axiom: "S".into(),
            rules: vec![],
        };
        assert_eq!(normalize(&raw).unwrap_err(), GrammarError::Empty);

        let raw = RawGrammar {
            alphabet: Alphabet::new(["a"]).unwrap(),
            axiom: "S".into(),
            rules: vec![RawRule {
                lhs: "S".into(),
                body: vec![RawItem::Nt("missing".into())],
            }],
        };
        assert_eq!(
            normalize(&raw).unwrap_err(),
            GrammarError::UndefinedNonterminal("missing".into())
        );
    }

    #[test]
    fn empty_language_grammar() {
        let raw = raw_grammar_from_rules(&["a"], "S", &[("S", "S a")]);
        let g = normalize(&raw).unwrap();
        assert!(g.is_empty_language());
    }

    #[test]
    fn involute_flips_constants_and_reverses_bodies() {
        let raw = raw_grammar_from_rules(&["a", "b"], "S", &[("S", "a X"), ("X", "b'")]);
        let g = normalize(&raw).unwrap();
        let inv = g.involute();
        let mut consts: Vec<String> = Vec::new();
        for x in inv.nt_ids() {
            for p in inv.prods(x) {
                if let Prod::Const(c) = p {
                    consts.push(c.to_word().display(&inv.alphabet).to_string());
                }
            }
        }
        consts.sort();
        assert_eq!(consts, ["a'", "b"]);
    }

    #[test]
    fn prefix_closure_of_a_constant_rule() {
        // S -> ab: pfcl(L) = {ε, a, ab}; the closure grammar supplies the
        // nonempty prefixes
        let raw = raw_grammar_from_rules(&["a", "b"], "S", &[("S", "a b")]);
        let g = normalize(&raw).unwrap();
        let gp = prefix_closure(&g, g.axiom());
        let words = enumerate_cfg(&gp, 4, 1000);
        assert!(words.complete);
        let mut rendered: Vec<String> = words
            .words
            .iter()
            .map(|w| w.display(&g.alphabet).to_string())
            .collect();
        rendered.sort();
        assert_eq!(rendered, ["a", "a b"]);
    }

    #[test]
    fn prefix_closure_matches_enumerated_prefixes() {
        let g = normalize(&dyck()).unwrap();
        let gp = prefix_closure(&g, g.axiom());
        let h = 5;
        let base = enumerate_cfg(&g, h, 100_000);
        assert!(base.complete);
        let mut expected = BTreeSet::new();
        for w in &base.words {
            for cut in 1..=w.len() {
                expected.insert(Word(w.0[..cut].to_vec()));
            }
        }
        // closure words at matching height cover exactly those prefixes;
        // enumerate deep enough to see them all, then restrict
        let closed = enumerate_cfg(&gp, h + 2, 1_000_000);
        assert!(closed.complete);
        assert!(expected.is_subset(&closed.words));
        // idempotence at the language level: prefixes of prefixes add nothing
        let mut reclosed = BTreeSet::new();
        for w in &closed.words {
            for cut in 1..=w.len() {
                reclosed.insert(Word(w.0[..cut].to_vec()));
            }
        }
        assert!(reclosed.is_subset(&closed.words));
    }
}
