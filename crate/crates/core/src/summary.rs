//! Language summaries `sig(L) = (lcs(L), lcsext(L))` and their calculus.
//!
//! The summary of a language consists of its longest common suffix and the
//! maximal extension of that suffix achievable by prepending words. Equality
//! of summaries is a congruence for union and concatenation, so both
//! operations can be computed on summaries alone. Every finite language is
//! summary-equivalent to a sublanguage of at most three words (`tsn`).

use std::collections::BTreeSet;

use crate::brackets::{by_len_lex, Opener};
use crate::ulp::{lcs2, lcs_set, suffix_le, SuffixElem};

/// The `(lcs, lcsext)` summary of a language of opener words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Summary {
    pub lcs: SuffixElem,
    pub ext: SuffixElem,
}

impl Summary {
    /// Summary of the empty language.
    pub fn empty_language() -> Self {
        Summary {
            lcs: SuffixElem::Top,
            ext: SuffixElem::Top,
        }
    }
}

/// Strips the known suffix `r` from `w`; words of a language always end in
/// the language's lcs.
fn strip(w: &[Opener], r: &[Opener]) -> Vec<Opener> {
    debug_assert!(w.ends_with(r));
    w[..w.len() - r.len()].to_vec()
}

/// Computes `sig` of a concrete finite language directly from the
/// definitions: the lcs is the infimum of the words, the extension is the
/// infimum of `z^~w` over all `zR` in the language with `z` nonempty.
pub fn sig_of_finite(words: &BTreeSet<Vec<Opener>>) -> Summary {
    if words.is_empty() {
        return Summary::empty_language();
    }
    let finites: Vec<SuffixElem> = words
        .iter()
        .map(|w| SuffixElem::finite(w.clone()))
        .collect();
    let lcs = lcs_set(&finites);
    let r = lcs
        .as_finite()
        .expect("lcs of a nonempty finite language is finite");
    let tails: Vec<SuffixElem> = words
        .iter()
        .filter(|w| w.len() > r.len())
        .map(|w| SuffixElem::ulp(strip(w, r), vec![]))
        .collect();
    let ext = lcs_set(&tails);
    Summary { lcs, ext }
}

/// Summary of the union of two languages given their summaries.
pub fn sig_union(a: &Summary, b: &Summary) -> Summary {
    if a.lcs.is_top() {
        return b.clone();
    }
    if b.lcs.is_top() {
        return a.clone();
    }
    if suffix_le(&a.lcs, &b.lcs) {
        // b.lcs = δ·a.lcs; the shared suffix survives, and the second
        // language contributes tails of the form yδ, so its extension enters
        // as lcs(δ^~w, E')·δ — with E' = TOP (singleton) leaving δ^~w itself.
        let delta_elem = b
            .lcs
            .strip_finite_suffix(a.lcs.as_finite().unwrap())
            .unwrap();
        let delta = delta_elem.as_finite().unwrap().to_vec();
        let delta_power = SuffixElem::ulp(delta.clone(), vec![]);
        let inner = if b.ext.is_top() {
            delta_power
        } else {
            lcs2(&delta_power, &b.ext).append_finite(&delta)
        };
        Summary {
            lcs: a.lcs.clone(),
            ext: lcs2(&a.ext, &inner),
        }
    } else if suffix_le(&b.lcs, &a.lcs) {
        sig_union(b, a)
    } else {
        Summary {
            lcs: lcs2(&a.lcs, &b.lcs),
            ext: SuffixElem::empty(),
        }
    }
}

/// Summary of the concatenation `L L'` given the summaries of `L` and `L'`.
pub fn sig_concat(a: &Summary, b: &Summary) -> Summary {
    if a.lcs.is_top() || b.lcs.is_top() {
        return Summary::empty_language();
    }
    let r = a.lcs.as_finite().unwrap();
    let r2 = b.lcs.as_finite().unwrap();
    if b.ext.is_top() {
        // L' is the singleton {R'}
        let mut lcs = r.to_vec();
        lcs.extend_from_slice(r2);
        return Summary {
            lcs: SuffixElem::finite(lcs),
            ext: a.ext.clone(),
        };
    }
    if !suffix_le(&a.lcs, &b.ext) {
        // R cannot be pushed through L': the product lcs stops inside R
        Summary {
            lcs: lcs2(&a.lcs, &b.ext).append_finite(r2),
            ext: SuffixElem::empty(),
        }
    } else {
        let delta = b.ext.strip_finite_suffix(r).unwrap();
        let mut lcs = r.to_vec();
        lcs.extend_from_slice(r2);
        Summary {
            lcs: SuffixElem::finite(lcs),
            ext: lcs2(&a.ext, &delta),
        }
    }
}

/// A summary-equivalent sublanguage of at most three words.
///
/// Ties are broken deterministically: candidate words are scanned in
/// shortest-then-lexicographic order.
pub fn tsn(words: &BTreeSet<Vec<Opener>>) -> BTreeSet<Vec<Opener>> {
    if words.len() <= 2 {
        return words.clone();
    }
    let sig = sig_of_finite(words);
    let r = sig.lcs.as_finite().unwrap().to_vec();
    if words.contains(&r) {
        // keep R plus a pair witnessing the extension
        let mut tails: Vec<Vec<Opener>> = words
            .iter()
            .filter(|w| w.len() > r.len())
            .map(|w| strip(w, &r))
            .collect();
        tails.sort_by(|x, y| by_len_lex(x, y));
        for (i, x) in tails.iter().enumerate() {
            for y in &tails[i..] {
                let ext = lcs2(
                    &SuffixElem::ulp(x.clone(), vec![]),
                    &SuffixElem::ulp(y.clone(), vec![]),
                );
                if ext == sig.ext {
                    let mut out = BTreeSet::new();
                    out.insert(r.clone());
                    let mut xr = x.clone();
                    xr.extend_from_slice(&r);
                    out.insert(xr);
                    let mut yr = y.clone();
                    yr.extend_from_slice(&r);
                    out.insert(yr);
                    return out;
                }
            }
        }
        unreachable!("extension witness pair must exist");
    } else {
        // R outside the language: a pair realizing the lcs suffices
        let mut sorted: Vec<&Vec<Opener>> = words.iter().collect();
        sorted.sort_by(|x, y| by_len_lex(x, y));
        for (i, x) in sorted.iter().enumerate() {
            for y in &sorted[i + 1..] {
                if lcs2(
                    &SuffixElem::finite((*x).clone()),
                    &SuffixElem::finite((*y).clone()),
                ) == sig.lcs
                {
                    let mut out = BTreeSet::new();
                    out.insert((*x).clone());
                    out.insert((*y).clone());
                    return out;
                }
            }
        }
        unreachable!("lcs witness pair must exist");
    }
}
