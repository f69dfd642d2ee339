//! Descent words: for every nonterminal the shortest opener word `r_X`
//! whose prepending makes the generated language well-formed.
//!
//! `r_X` is read off the prefix-closure grammar of `X`: unfold it into
//! height-indexed copies, compute one weakly well-formed SLP pair per copy
//! bottom-up, and keep, per level, the deepest closer prefix togetherize
//! with the shortest normalized positive part. Every word entering the
//! computation is realizable as the reduct of an actual prefix, so the final
//! closer prefix is exactly the maximal descent.

use thiserror::Error;

use crate::brackets::Reduced;
use crate::slp::{CombineError, Slp, WwfPair};

use super::{prefix_closure, Grammar, NtId, Prod};

/// Per-nonterminal descent data: `d_X = |r_X|` and `r_X` as an SLP.
#[derive(Debug, Clone)]
pub struct DescentInfo {
    rs: Vec<Slp>,
}

impl DescentInfo {
    pub fn r(&self, x: NtId) -> &Slp {
        &self.rs[x.0 as usize]
    }

    pub fn d(&self, x: NtId) -> u128 {
        self.rs[x.0 as usize].len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DescentError {
    #[error("descent computation for `{nonterminal}` exceeded the expansion cap")]
    Overflow { nonterminal: String },
    #[error("prefixes of `{nonterminal}` require incompatible closer blocks")]
    Incompatible { nonterminal: String },
}

/// Normalizes a family of candidate pairs onto the deepest closer prefix
/// `u0`: each `u' v` is rewritten to `u0' rd(u0 u') v`, which requires `u`
/// to be a suffix of `u0`; the shortest rewritten positive part wins.
fn normalize_family(
    cands: Vec<WwfPair>,
    cap: usize,
    nonterminal: &str,
) -> Result<Option<WwfPair>, DescentError> {
    if cands.is_empty() {
        return Ok(None);
    }
    let deepest = cands
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.neg.len(), usize::MAX - i))
        .map(|(_, c)| c.neg.clone())
        .unwrap();
    let reference = WwfPair::new(Slp::empty(), deepest.clone());
    let mut best: Option<Slp> = None;
    for cand in &cands {
        let normalized = reference.combine(cand, cap).map_err(|e| match e {
            CombineError::Overflow { .. } => DescentError::Overflow {
                nonterminal: nonterminal.to_string(),
            },
            CombineError::Mismatch => DescentError::Incompatible {
                nonterminal: nonterminal.to_string(),
            },
        })?;
        debug_assert!(normalized.neg.is_empty());
        if best.as_ref().map_or(true, |b| normalized.pos.len() < b.len()) {
            best = Some(normalized.pos);
        }
    }
    Ok(Some(WwfPair::new(deepest, best.unwrap())))
}

/// Computes `d_X` and an SLP for `r_X` for every nonterminal.
pub fn compute_descent(g: &Grammar, cap: usize) -> Result<DescentInfo, DescentError> {
    let mut rs = Vec::with_capacity(g.nt_count());
    for x in g.nt_ids() {
        let gp = prefix_closure(g, x);
        if gp.is_empty_language() {
            rs.push(Slp::empty());
            continue;
        }
        let np = gp.nt_count();
        let name = g.name(x);
        // level 0: constants only
        let mut level: Vec<Option<WwfPair>> = Vec::with_capacity(np);
        for y in gp.nt_ids() {
            let consts: Vec<WwfPair> = gp
                .prods(y)
                .iter()
                .filter_map(|p| match p {
                    Prod::Const(Reduced::Wwf(w)) => Some(WwfPair::from_parts(&w.neg, &w.pos)),
                    _ => None,
                })
                .collect();
            level.push(normalize_family(consts, cap, name)?);
        }
        for _ in 0..np {
            let mut next: Vec<Option<WwfPair>> = Vec::with_capacity(np);
            for y in gp.nt_ids() {
                let mut cands: Vec<WwfPair> = Vec::new();
                if let Some(carry) = &level[y.0 as usize] {
                    cands.push(carry.clone());
                }
                for p in gp.prods(y) {
                    match p {
                        Prod::Unit(u) => {
                            if let Some(pu) = &level[u.0 as usize] {
                                cands.push(pu.clone());
                            }
                        }
                        Prod::Binary(u, v) => {
                            if let (Some(pu), Some(pv)) =
                                (&level[u.0 as usize], &level[v.0 as usize])
                            {
                                let combined = pu.combine(pv, cap).map_err(|e| match e {
                                    CombineError::Overflow { .. } => DescentError::Overflow {
                                        nonterminal: name.to_string(),
                                    },
                                    CombineError::Mismatch => DescentError::Incompatible {
                                        nonterminal: name.to_string(),
                                    },
                                })?;
                                cands.push(combined);
                            }
                        }
                        Prod::Const(_) => {}
                    }
                }
                next.push(normalize_family(cands, cap, name)?);
            }
            level = next;
        }
        let pair = level[gp.axiom().0 as usize]
            .as_ref()
            .expect("productive prefix axiom has a pair");
        rs.push(pair.neg.clone());
    }
    Ok(DescentInfo { rs })
}
