//! The height-bounded fixed point and the decision procedures.
//!
//! For every nonterminal the summary-normal-form of the reduced language
//! `rd(r_X L_X^{≤h})` is iterated height by height. Each binary rule pushes
//! the previous round's words through two bridge constants; a word that
//! cannot absorb the middle bridge witnesses that the grammar is not
//! well-formed. With `N` nonterminals the iteration runs to height `4N+1`:
//! a well-formed grammar must have converged by then, a grammar that is not
//! well-formed either fails earlier or fails to converge.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::brackets::{by_len_lex, Bracket, Opener, Word};
use crate::slp::{CombineError, Slp, WwfPair};
use crate::summary::{sig_of_finite, tsn, Summary};

use super::{
    check_nonnegative, compute_descent, ill_formed_constants, normalize, DescentError,
    DescentInfo, Grammar, GrammarError, Negativity, NtId, Prod, RawGrammar,
};

/// Resource bounds for the analyses.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Maximal number of letters any expanded word may take.
    pub cap: usize,
    /// Optional ceiling on the iteration height; the decision needs `4N+1`.
    pub max_height: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cap: 1_000_000,
            max_height: None,
        }
    }
}

/// A word set per nonterminal and height; `None` marks a language still
/// empty at that height.
#[derive(Debug, Clone)]
pub struct HeightTable {
    pub tables: Vec<Vec<Option<BTreeSet<Vec<Opener>>>>>,
    pub violation: Option<Violation>,
}

/// Evidence found while pushing a rule's words through its bridges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub nonterminal: String,
    pub rule: String,
    pub height: usize,
    pub witness: Option<Word>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IterateError {
    #[error("expansion for `{nonterminal}` exceeded the cap")]
    Overflow { nonterminal: String },
}

impl HeightTable {
    /// Words recorded for `x` at height `h` (1-based).
    pub fn entry(&self, h: usize, x: NtId) -> Option<&BTreeSet<Vec<Opener>>> {
        self.tables
            .get(h - 1)
            .and_then(|row| row[x.0 as usize].as_ref())
    }

    pub fn summary(&self, h: usize, x: NtId) -> Summary {
        match self.entry(h, x) {
            Some(words) => sig_of_finite(words),
            None => Summary::empty_language(),
        }
    }

    pub fn max_height(&self) -> usize {
        self.tables.len()
    }

    pub fn max_word_len(&self) -> usize {
        self.tables
            .iter()
            .flatten()
            .flatten()
            .flat_map(|set| set.iter().map(Vec::len))
            .max()
            .unwrap_or(0)
    }
}

/// The reduced bridge constant `rd(r_X r'_Y)`: an opener word when clean,
/// otherwise evidence that the grammar is not well-formed.
enum Bridge {
    Open(Vec<Opener>),
    Broken(Option<Word>),
}

struct BridgeCache<'a> {
    g: &'a Grammar,
    descent: &'a DescentInfo,
    cap: usize,
    fronts: BTreeMap<(u32, u32), Bridge>,
    r_words: BTreeMap<u32, Vec<Opener>>,
}

impl<'a> BridgeCache<'a> {
    fn new(g: &'a Grammar, descent: &'a DescentInfo, cap: usize) -> Self {
        BridgeCache {
            g,
            descent,
            cap,
            fronts: BTreeMap::new(),
            r_words: BTreeMap::new(),
        }
    }

    fn overflow(&self, x: NtId) -> IterateError {
        IterateError::Overflow {
            nonterminal: self.g.name(x).to_string(),
        }
    }

    fn front(&mut self, x: NtId, y: NtId) -> Result<&Bridge, IterateError> {
        if !self.fronts.contains_key(&(x.0, y.0)) {
            let rx = WwfPair::new(Slp::empty(), self.descent.r(x).clone());
            let ry = WwfPair::new(self.descent.r(y).clone(), Slp::empty());
            let bridge = match rx.combine(&ry, self.cap) {
                Ok(pair) if pair.neg.is_empty() => {
                    let word = pair.pos.expand(self.cap).map_err(|_| self.overflow(x))?;
                    Bridge::Open(word)
                }
                Ok(pair) => Bridge::Broken(pair.expand_word(self.cap).ok()),
                Err(CombineError::Mismatch) => {
                    let witness = match (
                        self.descent.r(x).expand(self.cap),
                        self.descent.r(y).expand(self.cap),
                    ) {
                        (Ok(wx), Ok(wy)) => Some(
                            Word::from_openers(&wx)
                                .concat(&Word::from_openers(&wy).involute())
                                .reduce()
                                .to_word(),
                        ),
                        _ => None,
                    };
                    Bridge::Broken(witness)
                }
                Err(CombineError::Overflow { .. }) => return Err(self.overflow(x)),
            };
            self.fronts.insert((x.0, y.0), bridge);
        }
        Ok(&self.fronts[&(x.0, y.0)])
    }

    fn r_word(&mut self, z: NtId) -> Result<&[Opener], IterateError> {
        if !self.r_words.contains_key(&z.0) {
            let word = self
                .descent
                .r(z)
                .expand(self.cap)
                .map_err(|_| self.overflow(z))?;
            self.r_words.insert(z.0, word);
        }
        Ok(&self.r_words[&z.0])
    }
}

fn sorted_words(set: &BTreeSet<Vec<Opener>>) -> Vec<&Vec<Opener>> {
    let mut words: Vec<&Vec<Opener>> = set.iter().collect();
    words.sort_by(|a, b| by_len_lex(a, b));
    words
}

/// Renders `bridge · w · r'` reduced, as violation evidence.
fn middle_witness(bridge: &[Opener], w: &[Opener], r: &[Opener]) -> Word {
    let mut letters: Vec<Bracket> = bridge.iter().map(|&o| Bracket::open(o)).collect();
    letters.extend(w.iter().map(|&o| Bracket::open(o)));
    letters.extend(r.iter().rev().map(|&o| Bracket::closing(o)));
    Word(letters).reduce().to_word()
}

/// Runs the fixed point up to `h_max`, recording a violation as a result
/// (not an error) and stopping at the first one.
pub fn iterate_heights(
    g: &Grammar,
    descent: &DescentInfo,
    h_max: usize,
    cap: usize,
) -> Result<HeightTable, IterateError> {
    let n = g.nt_count();
    let mut bridges = BridgeCache::new(g, descent, cap);
    let mut tables: Vec<Vec<Option<BTreeSet<Vec<Opener>>>>> = Vec::new();
    let mut violation: Option<Violation> = None;

    // height 1: reduced constants, fronted with r_X
    let mut row: Vec<Option<BTreeSet<Vec<Opener>>>> = vec![None; n];
    'level1: for x in g.nt_ids() {
        let mut words = BTreeSet::new();
        for p in g.prods(x) {
            let c = match p {
                Prod::Const(c) => c,
                _ => continue,
            };
            let rx = WwfPair::new(Slp::empty(), descent.r(x).clone());
            let word = c.to_word();
            let cpair = match word.reduce() {
                crate::brackets::Reduced::Wwf(w) => WwfPair::from_parts(&w.neg, &w.pos),
                crate::brackets::Reduced::Other(w) => {
                    violation = Some(Violation {
                        nonterminal: g.name(x).to_string(),
                        rule: g.describe_prod(x, p),
                        height: 1,
                        witness: Some(w),
                    });
                    break 'level1;
                }
            };
            match rx.combine(&cpair, cap) {
                Ok(pair) if pair.neg.is_empty() => {
                    let w = pair
                        .pos
                        .expand(cap)
                        .map_err(|_| bridges.overflow(x))?;
                    words.insert(w);
                }
                Ok(pair) => {
                    violation = Some(Violation {
                        nonterminal: g.name(x).to_string(),
                        rule: g.describe_prod(x, p),
                        height: 1,
                        witness: pair.expand_word(cap).ok(),
                    });
                    break 'level1;
                }
                Err(CombineError::Mismatch) => {
                    violation = Some(Violation {
                        nonterminal: g.name(x).to_string(),
                        rule: g.describe_prod(x, p),
                        height: 1,
                        witness: None,
                    });
                    break 'level1;
                }
                Err(CombineError::Overflow { .. }) => return Err(bridges.overflow(x)),
            }
        }
        if !words.is_empty() {
            row[x.0 as usize] = Some(tsn(&words));
        }
    }
    tables.push(row);
    if violation.is_some() {
        return Ok(HeightTable { tables, violation });
    }

    for target in 2..=h_max {
        let prev = tables.last().unwrap().clone();
        let mut row = prev.clone();
        'nts: for x in g.nt_ids() {
            let mut cands: BTreeSet<Vec<Opener>> =
                prev[x.0 as usize].clone().unwrap_or_default();
            for p in g.prods(x) {
                match p {
                    Prod::Const(_) => {}
                    Prod::Unit(y) => {
                        let Some(ty) = &prev[y.0 as usize] else { continue };
                        let bridge = match bridges.front(x, *y)? {
                            Bridge::Open(b) => b.clone(),
                            Bridge::Broken(w) => {
                                violation = Some(Violation {
                                    nonterminal: g.name(x).to_string(),
                                    rule: g.describe_prod(x, p),
                                    height: target,
                                    witness: w.clone(),
                                });
                                break 'nts;
                            }
                        };
                        for w in sorted_words(ty) {
                            let mut word = bridge.clone();
                            word.extend_from_slice(w);
                            if word.len() > cap {
                                return Err(bridges.overflow(x));
                            }
                            cands.insert(word);
                        }
                    }
                    Prod::Binary(y, z) => {
                        if prev[y.0 as usize].is_none() || prev[z.0 as usize].is_none() {
                            continue;
                        }
                        let bridge = match bridges.front(x, *y)? {
                            Bridge::Open(b) => b.clone(),
                            Bridge::Broken(w) => {
                                violation = Some(Violation {
                                    nonterminal: g.name(x).to_string(),
                                    rule: g.describe_prod(x, p),
                                    height: target,
                                    witness: w.clone(),
                                });
                                break 'nts;
                            }
                        };
                        let rz = bridges.r_word(*z)?.to_vec();
                        let ty = prev[y.0 as usize].as_ref().unwrap();
                        let tz = prev[z.0 as usize].as_ref().unwrap();
                        for wy in sorted_words(ty) {
                            // the middle bridge may eat into the front
                            // bridge, so check the whole opener stem
                            let mut stem = bridge.clone();
                            stem.extend_from_slice(wy);
                            if !stem.ends_with(&rz) {
                                violation = Some(Violation {
                                    nonterminal: g.name(x).to_string(),
                                    rule: g.describe_prod(x, p),
                                    height: target,
                                    witness: Some(middle_witness(&bridge, wy, &rz)),
                                });
                                break 'nts;
                            }
                            stem.truncate(stem.len() - rz.len());
                            for wz in sorted_words(tz) {
                                let mut word = stem.clone();
                                word.extend_from_slice(wz);
                                if word.len() > cap {
                                    return Err(bridges.overflow(x));
                                }
                                cands.insert(word);
                            }
                        }
                    }
                }
            }
            if !cands.is_empty() {
                row[x.0 as usize] = Some(tsn(&cands));
            }
        }
        tables.push(row);
        if violation.is_some() {
            break;
        }
    }
    Ok(HeightTable { tables, violation })
}

/// One analysis outcome with enough context for reports and tests.
#[derive(Debug, Clone)]
pub struct WfAnalysis {
    pub verdict: WfVerdict,
    pub nonterminals: usize,
    pub table: Option<HeightTable>,
    pub descent: Option<DescentInfo>,
}

#[derive(Debug, Clone)]
pub enum WfVerdict {
    Wf,
    NotWf(NotWfEvidence),
}

impl WfVerdict {
    pub fn is_wf(&self) -> bool {
        matches!(self, WfVerdict::Wf)
    }
}

#[derive(Debug, Clone)]
pub enum NotWfEvidence {
    /// A reachable constant already reduces outside `A'* A*`.
    IllFormedConstant { nonterminal: String, word: Word },
    /// Some prefix of a derivable word has negative height.
    Negative(Negativity),
    /// Two realizable closer prefixes of one nonterminal are incompatible.
    DescentConflict { nonterminal: String },
    /// The axiom itself needs a nonempty closer cancellation.
    AxiomDescent { d: u128 },
    /// A rule's bridge constants rejected a word of the fixed point.
    Violation(Violation),
    /// The summaries did not converge by height `4N+1`.
    NonConvergence { nonterminal: String },
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("resource limit: {0}")]
    Limit(String),
}

/// Decides well-formedness of a normalized grammar.
pub fn decide_well_formed_normalized(
    g: &Grammar,
    limits: &Limits,
) -> Result<WfAnalysis, AnalysisError> {
    let n = g.nt_count();
    if g.is_empty_language() {
        // every word of the empty language is a prefix of a balanced word
        return Ok(WfAnalysis {
            verdict: WfVerdict::Wf,
            nonterminals: n,
            table: None,
            descent: None,
        });
    }
    if let Some((x, word)) = ill_formed_constants(g).into_iter().next() {
        return Ok(WfAnalysis {
            verdict: WfVerdict::NotWf(NotWfEvidence::IllFormedConstant {
                nonterminal: g.name(x).to_string(),
                word,
            }),
            nonterminals: n,
            table: None,
            descent: None,
        });
    }
    if let Some(negativity) = check_nonnegative(g) {
        return Ok(WfAnalysis {
            verdict: WfVerdict::NotWf(NotWfEvidence::Negative(negativity)),
            nonterminals: n,
            table: None,
            descent: None,
        });
    }
    let descent = match compute_descent(g, limits.cap) {
        Ok(d) => d,
        Err(DescentError::Incompatible { nonterminal }) => {
            return Ok(WfAnalysis {
                verdict: WfVerdict::NotWf(NotWfEvidence::DescentConflict { nonterminal }),
                nonterminals: n,
                table: None,
                descent: None,
            })
        }
        Err(DescentError::Overflow { nonterminal }) => {
            return Err(AnalysisError::Limit(format!(
                "descent of `{nonterminal}` exceeded the expansion cap"
            )))
        }
    };
    if descent.d(g.axiom()) > 0 {
        return Ok(WfAnalysis {
            verdict: WfVerdict::NotWf(NotWfEvidence::AxiomDescent {
                d: descent.d(g.axiom()),
            }),
            nonterminals: n,
            table: None,
            descent: Some(descent),
        });
    }
    let needed = 4 * n + 1;
    let h_max = limits.max_height.map_or(needed, |m| m.min(needed));
    let table = iterate_heights(g, &descent, h_max, limits.cap)
        .map_err(|e| AnalysisError::Limit(e.to_string()))?;
    if let Some(v) = &table.violation {
        return Ok(WfAnalysis {
            verdict: WfVerdict::NotWf(NotWfEvidence::Violation(v.clone())),
            nonterminals: n,
            table: Some(table),
            descent: Some(descent),
        });
    }
    if h_max < needed {
        return Err(AnalysisError::Limit(format!(
            "height limit {h_max} below the required {needed}"
        )));
    }
    for x in g.nt_ids() {
        if table.summary(needed - 1, x) != table.summary(needed, x) {
            return Ok(WfAnalysis {
                verdict: WfVerdict::NotWf(NotWfEvidence::NonConvergence {
                    nonterminal: g.name(x).to_string(),
                }),
                nonterminals: n,
                table: Some(table),
                descent: Some(descent),
            });
        }
    }
    Ok(WfAnalysis {
        verdict: WfVerdict::Wf,
        nonterminals: n,
        table: Some(table),
        descent: Some(descent),
    })
}

/// Decides well-formedness of a raw grammar (normalization included).
pub fn decide_well_formed(raw: &RawGrammar, limits: &Limits) -> Result<WfAnalysis, AnalysisError> {
    let g = normalize(raw)?;
    decide_well_formed_normalized(&g, limits)
}

#[derive(Debug, Clone)]
pub enum BalanceVerdict {
    Balanced,
    /// The language or its involution is not well-formed; `involuted` tells
    /// which side broke.
    NotBalanced {
        involuted: bool,
        evidence: NotWfEvidence,
    },
}

impl BalanceVerdict {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceVerdict::Balanced)
    }
}

/// A language is balanced iff it and its involution are both well-formed.
pub fn decide_balanced_cfg(
    raw: &RawGrammar,
    limits: &Limits,
) -> Result<BalanceVerdict, AnalysisError> {
    let g = normalize(raw)?;
    let forward = decide_well_formed_normalized(&g, limits)?;
    if let WfVerdict::NotWf(evidence) = forward.verdict {
        return Ok(BalanceVerdict::NotBalanced {
            involuted: false,
            evidence,
        });
    }
    let backward = decide_well_formed_normalized(&g.involute(), limits)?;
    if let WfVerdict::NotWf(evidence) = backward.verdict {
        return Ok(BalanceVerdict::NotBalanced {
            involuted: true,
            evidence,
        });
    }
    Ok(BalanceVerdict::Balanced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::raw_grammar_from_rules;

    fn dyck() -> RawGrammar {
        raw_grammar_from_rules(&["a"], "S", &[("S", "_ | S S | a S a'")])
    }

    #[test]
    fn dyck_iterates_to_epsilon_only() {
        let g = normalize(&dyck()).unwrap();
        let descent = compute_descent(&g, 1000).unwrap();
        let table = iterate_heights(&g, &descent, 6, 1000).unwrap();
        assert!(table.violation.is_none());
        for h in 1..=6 {
            let words = table.entry(h, g.axiom()).unwrap();
            assert_eq!(words.len(), 1);
            assert!(words.contains(&Vec::new()));
        }
    }

    #[test]
    fn dyck_is_well_formed_and_balanced() {
        let analysis = decide_well_formed(&dyck(), &Limits::default()).unwrap();
        assert!(analysis.verdict.is_wf());
        let balance = decide_balanced_cfg(&dyck(), &Limits::default()).unwrap();
        assert!(balance.is_balanced());
    }

    #[test]
    fn epsilon_grammar_is_wf() {
        let raw = raw_grammar_from_rules(&["a"], "S", &[("S", "_")]);
        let analysis = decide_well_formed(&raw, &Limits::default()).unwrap();
        assert!(analysis.verdict.is_wf());
    }

    #[test]
    fn single_opener_is_wf_but_not_balanced() {
        let raw = raw_grammar_from_rules(&["a"], "S", &[("S", "a")]);
        assert!(decide_well_formed(&raw, &Limits::default())
            .unwrap()
            .verdict
            .is_wf());
        let balance = decide_balanced_cfg(&raw, &Limits::default()).unwrap();
        match balance {
            BalanceVerdict::NotBalanced { involuted, .. } => assert!(involuted),
            _ => panic!("a is not balanced"),
        }
    }

    #[test]
    fn empty_language_is_vacuously_wf() {
        let raw = raw_grammar_from_rules(&["a"], "S", &[("S", "S a")]);
        let analysis = decide_well_formed(&raw, &Limits::default()).unwrap();
        assert!(analysis.verdict.is_wf());
    }

    #[test]
    fn ill_formed_constant_is_rejected_early() {
        let raw = raw_grammar_from_rules(&["a", "b"], "S", &[("S", "a b'")]);
        let analysis = decide_well_formed(&raw, &Limits::default()).unwrap();
        assert!(matches!(
            analysis.verdict,
            WfVerdict::NotWf(NotWfEvidence::IllFormedConstant { .. })
        ));
    }

    #[test]
    fn negative_grammar_is_rejected() {
        let raw = raw_grammar_from_rules(&["a"], "S", &[("S", "a'")]);
        let analysis = decide_well_formed(&raw, &Limits::default()).unwrap();
        assert!(matches!(
            analysis.verdict,
            WfVerdict::NotWf(NotWfEvidence::Negative(_))
        ));
    }

    #[test]
    fn height_limit_yields_resource_error() {
        let limits = Limits {
            cap: 1_000_000,
            max_height: Some(2),
        };
        match decide_well_formed(&dyck(), &limits) {
            Err(AnalysisError::Limit(_)) => {}
            other => panic!("expected a limit error, got {other:?}"),
        }
    }
}
