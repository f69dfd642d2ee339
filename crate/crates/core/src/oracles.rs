//! Independent brute-force reference implementations.
//!
//! Everything here is deliberately naive and shares no algorithmic code with
//! the production modules; the oracles exist for truth, not speed. They back
//! the property-test suites and the CLI's `--oracle` mode.

use std::collections::BTreeSet;

use crate::brackets::{Opener, Word};
use crate::grammar::{Grammar, Prod};
use crate::ulp::SuffixElem;

/// Reduces a word by repeatedly cancelling a single randomly chosen matching
/// pair until none is left. The seed picks the cancellation order; all orders
/// reach the same normal form.
pub fn naive_reduce(word: &Word, seed: u64) -> Word {
    // xorshift is plenty for picking positions
    let mut state = seed | 1;
    let mut next = move |bound: usize| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % bound as u64) as usize
    };
    let mut letters = word.0.clone();
    loop {
        let mut sites = Vec::new();
        for i in 0..letters.len().saturating_sub(1) {
            if !letters[i].close && letters[i + 1].close && letters[i].base == letters[i + 1].base {
                sites.push(i);
            }
        }
        if sites.is_empty() {
            return Word(letters);
        }
        let at = sites[next(sites.len())];
        letters.drain(at..at + 2);
    }
}

/// Longest common suffix of finite opener words by pairwise scanning.
/// Returns `None` for the empty set (whose infimum is the top element).
pub fn naive_lcs_words(words: &[Vec<Opener>]) -> Option<Vec<Opener>> {
    let mut iter = words.iter();
    let mut acc = iter.next()?.clone();
    for word in iter {
        let keep = acc
            .iter()
            .rev()
            .zip(word.iter().rev())
            .take_while(|(x, y)| x == y)
            .count();
        acc = acc[acc.len() - keep..].to_vec();
    }
    Some(acc)
}

/// Primitive root by the doubling trick: the root length is the least
/// nonzero shift at which `w` occurs in `w w`.
fn naive_primitive_root(w: &[Opener]) -> Vec<Opener> {
    let doubled: Vec<Opener> = w.iter().chain(w.iter()).copied().collect();
    for shift in 1..w.len() {
        if doubled[shift..shift + w.len()] == *w {
            return w[..shift].to_vec();
        }
    }
    w.to_vec()
}

/// Maximal suffix extension straight from the definition: strip the lcs,
/// then take the common suffix of the left-infinite powers, unrolled far
/// enough that periodicity makes the comparison exact.
pub fn naive_lcsext(words: &BTreeSet<Vec<Opener>>) -> SuffixElem {
    let list: Vec<Vec<Opener>> = words.iter().cloned().collect();
    let r = match naive_lcs_words(&list) {
        None => return SuffixElem::Top,
        Some(r) => r,
    };
    let tails: Vec<Vec<Opener>> = list
        .iter()
        .filter(|w| w.len() > r.len())
        .map(|w| w[..w.len() - r.len()].to_vec())
        .collect();
    if tails.is_empty() {
        return SuffixElem::Top;
    }
    let commuting = tails.iter().enumerate().all(|(i, x)| {
        tails[i..].iter().all(|y| {
            let mut xy = x.clone();
            xy.extend_from_slice(y);
            let mut yx = y.clone();
            yx.extend_from_slice(x);
            xy == yx
        })
    });
    if commuting {
        return SuffixElem::Ulp {
            period: naive_primitive_root(&tails[0]),
            core: Vec::new(),
        };
    }
    let window = 2 * tails.iter().map(Vec::len).sum::<usize>() + 4;
    let expansions: Vec<Vec<Opener>> = tails
        .iter()
        .map(|z| {
            let mut e = Vec::with_capacity(window + z.len());
            while e.len() < window {
                e.extend_from_slice(z);
            }
            let start = e.len() - window;
            e[start..].to_vec()
        })
        .collect();
    SuffixElem::Finite(naive_lcs_words(&expansions).unwrap())
}

/// True iff every word is a prefix of a balanced word: all prefixes stay
/// nonnegative and the fully cancelled word keeps no closer.
pub fn naive_wf_language(words: &[Word]) -> bool {
    words.iter().all(naive_wf_word)
}

/// The single-word well-formedness check used by [`naive_wf_language`].
pub fn naive_wf_word(w: &Word) -> bool {
    let mut height: i64 = 0;
    for b in &w.0 {
        height += if b.close { -1 } else { 1 };
        if height < 0 {
            return false;
        }
    }
    naive_reduce(w, 7).0.iter().all(|b| !b.close)
}

/// A height-stratified enumeration of every nonterminal's language.
#[derive(Debug)]
pub struct HeightLanguages {
    /// `per_height[h-1][nt]` is the word set at derivation height `≤ h`.
    pub per_height: Vec<Vec<BTreeSet<Word>>>,
    /// False when some set was truncated at the word-count cap.
    pub complete: bool,
}

/// Exact height-stratified enumeration following the derivation recurrence:
/// height 1 holds the constants, height `h+1` adds every unit image and
/// every pairwise product of height-`h` sets.
pub fn enumerate_cfg_heights(g: &Grammar, h: usize, cap: usize) -> HeightLanguages {
    let n = g.nt_count();
    let mut complete = true;
    let mut per_height: Vec<Vec<BTreeSet<Word>>> = Vec::with_capacity(h);
    for level in 0..h {
        let mut row: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); n];
        for x in g.nt_ids() {
            let mut words: BTreeSet<Word> = match level {
                0 => BTreeSet::new(),
                _ => per_height[level - 1][x.0 as usize].clone(),
            };
            for p in g.prods(x) {
                match p {
                    Prod::Const(c) => {
                        words.insert(c.to_word());
                    }
                    Prod::Unit(y) => {
                        if level > 0 {
                            words.extend(per_height[level - 1][y.0 as usize].iter().cloned());
                        }
                    }
                    Prod::Binary(y, z) => {
                        if level > 0 {
                            for wy in &per_height[level - 1][y.0 as usize] {
                                for wz in &per_height[level - 1][z.0 as usize] {
                                    words.insert(wy.concat(wz));
                                    if words.len() > cap {
                                        break;
                                    }
                                }
                                if words.len() > cap {
                                    break;
                                }
                            }
                        }
                    }
                }
            }
            if words.len() > cap {
                complete = false;
                words = words.into_iter().take(cap).collect();
            }
            row[x.0 as usize] = words;
        }
        per_height.push(row);
    }
    HeightLanguages {
        per_height,
        complete,
    }
}

/// Bounded language of the axiom.
#[derive(Debug)]
pub struct BoundedLanguage {
    pub words: BTreeSet<Word>,
    pub height: usize,
    pub complete: bool,
}

/// Words of the axiom with derivation height at most `h`, capped by count.
pub fn enumerate_cfg(g: &Grammar, h: usize, cap: usize) -> BoundedLanguage {
    let langs = enumerate_cfg_heights(g, h, cap);
    let words = langs
        .per_height
        .last()
        .map(|row| row[g.axiom().0 as usize].clone())
        .unwrap_or_default();
    BoundedLanguage {
        words,
        height: h,
        complete: langs.complete,
    }
}
