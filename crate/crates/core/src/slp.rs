//! Straight-line programs: DAG-shaped word expressions with exact lengths.
//!
//! An `Slp` denotes exactly one opener word, possibly of exponential length.
//! Concatenation and slicing are constant-time node constructions; lengths
//! are cached. Expansion materializes the word only when it fits under a
//! caller-supplied cap, never partially.

use std::sync::Arc;

use thiserror::Error;

use crate::brackets::{display_openers, Alphabet, Bracket, Opener, Word};

#[derive(Debug, Clone)]
pub struct Slp(Arc<Node>);

#[derive(Debug)]
enum Node {
    Leaf(Vec<Opener>),
    Concat(Slp, Slp, u128),
    Slice(Slp, u128, u128),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SlpError {
    #[error("slice {start}..{end} out of range for word of length {len}")]
    SliceOutOfRange { start: u128, end: u128, len: u128 },
    #[error("expansion of {len} letters exceeds the cap of {cap}")]
    Overflow { len: u128, cap: usize },
}

impl Slp {
    pub fn leaf(word: impl Into<Vec<Opener>>) -> Slp {
        Slp(Arc::new(Node::Leaf(word.into())))
    }

    pub fn empty() -> Slp {
        Slp::leaf(Vec::new())
    }

    pub fn concat(left: &Slp, right: &Slp) -> Slp {
        if left.len() == 0 {
            return right.clone();
        }
        if right.len() == 0 {
            return left.clone();
        }
        let len = left.len() + right.len();
        Slp(Arc::new(Node::Concat(left.clone(), right.clone(), len)))
    }

    pub fn slice(of: &Slp, start: u128, end: u128) -> Result<Slp, SlpError> {
        if start > end || end > of.len() {
            return Err(SlpError::SliceOutOfRange {
                start,
                end,
                len: of.len(),
            });
        }
        if start == 0 && end == of.len() {
            return Ok(of.clone());
        }
        if start == end {
            return Ok(Slp::empty());
        }
        Ok(Slp(Arc::new(Node::Slice(of.clone(), start, end))))
    }

    pub fn len(&self) -> u128 {
        match &*self.0 {
            Node::Leaf(w) => w.len() as u128,
            Node::Concat(_, _, len) => *len,
            Node::Slice(_, start, end) => end - start,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The denoted word, provided it fits under `cap`.
    pub fn expand(&self, cap: usize) -> Result<Vec<Opener>, SlpError> {
        if self.len() > cap as u128 {
            return Err(SlpError::Overflow {
                len: self.len(),
                cap,
            });
        }
        let mut out = Vec::with_capacity(self.len() as usize);
        self.write_range(0, self.len(), &mut out);
        Ok(out)
    }

    fn write_range(&self, start: u128, end: u128, out: &mut Vec<Opener>) {
        if start == end {
            return;
        }
        match &*self.0 {
            Node::Leaf(w) => out.extend_from_slice(&w[start as usize..end as usize]),
            Node::Concat(left, right, _) => {
                let mid = left.len();
                if start < mid {
                    left.write_range(start, end.min(mid), out);
                }
                if end > mid {
                    right.write_range(start.max(mid) - mid, end - mid, out);
                }
            }
            Node::Slice(of, offset, _) => of.write_range(offset + start, offset + end, out),
        }
    }

    /// One node per line, children before parents:
    /// `<idx>: LEAF <tokens> | CAT <l> <r> | SLICE <c> <s> <e>`.
    pub fn dump(&self, alphabet: &Alphabet) -> String {
        fn visit(
            slp: &Slp,
            alphabet: &Alphabet,
            seen: &mut Vec<(*const Node, usize)>,
            lines: &mut Vec<String>,
        ) -> usize {
            let ptr = Arc::as_ptr(&slp.0);
            if let Some(&(_, idx)) = seen.iter().find(|(p, _)| *p == ptr) {
                return idx;
            }
            let line = match &*slp.0 {
                Node::Leaf(w) => format!("LEAF {}", display_openers(w, alphabet)),
                Node::Concat(l, r, _) => {
                    let li = visit(l, alphabet, seen, lines);
                    let ri = visit(r, alphabet, seen, lines);
                    format!("CAT {li} {ri}")
                }
                Node::Slice(c, s, e) => {
                    let ci = visit(c, alphabet, seen, lines);
                    format!("SLICE {ci} {s} {e}")
                }
            };
            let idx = lines.len();
            lines.push(format!("{idx}: {line}"));
            seen.push((ptr, idx));
            idx
        }
        let mut lines = Vec::new();
        visit(self, alphabet, &mut Vec::new(), &mut lines);
        lines.join("\n")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombineError {
    #[error("overlap of {len} letters exceeds the cap of {cap}")]
    Overflow { len: u128, cap: usize },
    #[error("cancellation mismatch: the product is not weakly well-formed")]
    Mismatch,
}

/// A weakly well-formed word `u' v` as a pair of opener-word SLPs.
#[derive(Debug, Clone)]
pub struct WwfPair {
    pub neg: Slp,
    pub pos: Slp,
}

impl WwfPair {
    pub fn new(neg: Slp, pos: Slp) -> Self {
        WwfPair { neg, pos }
    }

    pub fn from_parts(neg: &[Opener], pos: &[Opener]) -> Self {
        WwfPair {
            neg: Slp::leaf(neg.to_vec()),
            pos: Slp::leaf(pos.to_vec()),
        }
    }

    /// Descent of the word: the length of the closer prefix.
    pub fn descent(&self) -> u128 {
        self.neg.len()
    }

    /// The reduct of `self · other`, computed symbolically.
    ///
    /// Writing the pair words as `u' v` and `r' s`: the shorter of `v` and
    /// `r` must be a suffix of the longer, which is checked by expanding only
    /// the overlap slice under `cap`; the result is cut and concatenated via
    /// slices. A mismatching overlap means the product leaves `A'* A*`.
    pub fn combine(&self, other: &WwfPair, cap: usize) -> Result<WwfPair, CombineError> {
        let v = &self.pos;
        let r = &other.neg;
        let cut = v.len().min(r.len());
        if cut > 0 {
            if cut > cap as u128 {
                return Err(CombineError::Overflow { len: cut, cap });
            }
            let tail_v = Slp::slice(v, v.len() - cut, v.len()).expect("overlap in range");
            let tail_r = Slp::slice(r, r.len() - cut, r.len()).expect("overlap in range");
            let ev = tail_v.expand(cap).map_err(|_| CombineError::Overflow { len: cut, cap })?;
            let er = tail_r.expand(cap).map_err(|_| CombineError::Overflow { len: cut, cap })?;
            if ev != er {
                return Err(CombineError::Mismatch);
            }
        }
        if v.len() >= r.len() {
            let kept = Slp::slice(v, 0, v.len() - cut).expect("prefix in range");
            Ok(WwfPair {
                neg: self.neg.clone(),
                pos: Slp::concat(&kept, &other.pos),
            })
        } else {
            let kept = Slp::slice(r, 0, r.len() - cut).expect("prefix in range");
            Ok(WwfPair {
                neg: Slp::concat(&kept, &self.neg),
                pos: other.pos.clone(),
            })
        }
    }

    pub fn total_len(&self) -> u128 {
        self.neg.len() + self.pos.len()
    }

    /// Renders `u' v` as a bracket word, under the cap.
    pub fn expand_word(&self, cap: usize) -> Result<Word, SlpError> {
        let neg = self.neg.expand(cap)?;
        let pos = self.pos.expand(cap)?;
        let mut letters: Vec<Bracket> = neg.iter().rev().map(|&o| Bracket::closing(o)).collect();
        letters.extend(pos.iter().map(|&o| Bracket::open(o)));
        Ok(Word(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::Reduced;
    use proptest::prelude::*;

    fn word(s: &str) -> Vec<Opener> {
        s.bytes().map(|b| Opener((b - b'a') as u32)).collect()
    }

    fn squared(letter: &str, depth: usize) -> Slp {
        let mut slp = Slp::leaf(word(letter));
        for _ in 0..depth {
            slp = Slp::concat(&slp, &slp);
        }
        slp
    }

    #[test]
    fn concat_and_expand() {
        let bb = Slp::concat(&Slp::leaf(word("b")), &Slp::leaf(word("b")));
        assert_eq!(bb.len(), 2);
        assert_eq!(bb.expand(10).unwrap(), word("bb"));
    }

    #[test]
    fn iterated_squaring_lengths() {
        assert_eq!(squared("b", 10).len(), 1 << 10);
        assert_eq!(squared("b", 30).len(), 1u128 << 30);
        assert_eq!(squared("b", 40).len(), 1u128 << 40);
    }

    #[test]
    fn slice_examples() {
        let abc = Slp::leaf(word("abc"));
        assert_eq!(Slp::slice(&abc, 1, 3).unwrap().expand(10).unwrap(), word("bc"));
        assert!(matches!(
            Slp::slice(&abc, 2, 5),
            Err(SlpError::SliceOutOfRange { .. })
        ));
    }

    #[test]
    fn expansion_cap() {
        assert_eq!(squared("b", 3).expand(100).unwrap(), word("bbbbbbbb"));
        assert!(matches!(
            squared("b", 40).expand(1_000_000),
            Err(SlpError::Overflow { .. })
        ));
        assert_eq!(Slp::empty().expand(1).unwrap(), vec![]);
    }

    #[test]
    fn combine_without_cancellation() {
        let x = WwfPair::from_parts(&[], &word("ab"));
        let y = WwfPair::from_parts(&[], &word("c"));
        let z = x.combine(&y, 100).unwrap();
        assert_eq!(z.neg.len(), 0);
        assert_eq!(z.pos.expand(10).unwrap(), word("abc"));
    }

    #[test]
    fn combine_with_cut() {
        let x = WwfPair::from_parts(&[], &word("ab"));
        let y = WwfPair::from_parts(&word("b"), &[]);
        let z = x.combine(&y, 100).unwrap();
        assert_eq!(z.neg.len(), 0);
        assert_eq!(z.pos.expand(10).unwrap(), word("a"));
    }

    #[test]
    fn combine_mismatch() {
        // a' b · (ba)' c = a' b a' b' c, stuck at b a'
        let x = WwfPair::from_parts(&word("a"), &word("b"));
        let y = WwfPair::from_parts(&word("ba"), &word("c"));
        assert_eq!(x.combine(&y, 100).unwrap_err(), CombineError::Mismatch);
        // the oracle confirms the expanded product is not wwf
        let product = x
            .expand_word(100)
            .unwrap()
            .concat(&y.expand_word(100).unwrap());
        assert!(matches!(product.reduce(), Reduced::Other(_)));
    }

    #[test]
    fn combine_overlap_overflow() {
        let x = WwfPair::new(Slp::empty(), squared("b", 40));
        let y = WwfPair::new(squared("b", 40), Slp::empty());
        assert!(matches!(
            x.combine(&y, 1_000_000),
            Err(CombineError::Overflow { .. })
        ));
    }

    #[test]
    fn dump_format() {
        let alpha = Alphabet::new(["a", "b"]).unwrap();
        let leaf = Slp::leaf(word("ab"));
        let cat = Slp::concat(&leaf, &leaf);
        let sliced = Slp::slice(&cat, 1, 3).unwrap();
        assert_eq!(sliced.dump(&alpha), "0: LEAF ab\n1: CAT 0 0\n2: SLICE 1 1 3");
    }

    fn arb_openers(max: usize) -> impl Strategy<Value = Vec<Opener>> {
        prop::collection::vec((0u32..2).prop_map(Opener), 0..max)
    }

    /// Builds a non-leaf SLP shape over a concrete word.
    fn shaped(word: &[Opener], split_seed: usize) -> Slp {
        if word.len() < 2 {
            return Slp::leaf(word.to_vec());
        }
        let cut = 1 + split_seed % (word.len() - 1);
        Slp::concat(
            &Slp::leaf(word[..cut].to_vec()),
            &Slp::leaf(word[cut..].to_vec()),
        )
    }

    proptest! {
        #[test]
        fn expand_matches_naive_recursion(w in arb_openers(12), seed in any::<usize>()) {
            let slp = shaped(&w, seed);
            prop_assert_eq!(slp.expand(100).unwrap(), w);
        }

        #[test]
        fn combine_matches_expand_then_reduce(
            u in arb_openers(6), v in arb_openers(6),
            r in arb_openers(6), s in arb_openers(6),
            seed in any::<usize>(),
        ) {
            let x = WwfPair::new(shaped(&u, seed), shaped(&v, seed / 3));
            let y = WwfPair::new(shaped(&r, seed / 5), shaped(&s, seed / 7));
            let expected = x
                .expand_word(1000)
                .unwrap()
                .concat(&y.expand_word(1000).unwrap())
                .reduce();
            match x.combine(&y, 1000) {
                Ok(z) => {
                    let cut = v.len().min(r.len()) as u128;
                    prop_assert_eq!(z.total_len(), x.total_len() + y.total_len() - 2 * cut);
                    prop_assert_eq!(Reduced::Wwf(crate::brackets::WwfWord {
                        neg: z.neg.expand(1000).unwrap(),
                        pos: z.pos.expand(1000).unwrap(),
                    }), expected);
                }
                Err(CombineError::Mismatch) => {
                    prop_assert!(matches!(expected, Reduced::Other(_)));
                }
                Err(CombineError::Overflow { .. }) => prop_assert!(false, "unexpected overflow"),
            }
        }
    }
}
