//! The suffix lattice of finite and ultimately left-periodic words.
//!
//! Values are finite opener words, expressions `p^~w u` denoting the
//! left-infinite word `...ppp u`, and the greatest element `TOP`. The suffix
//! order compares reverses under the prefix order; every set has an infimum,
//! the longest common suffix.

use crate::brackets::{display_openers, Alphabet, Opener};

/// An element of the suffix lattice, kept in canonical form: the period is
/// primitive and the core does not start with the period's first letter
/// (leading period material is rotated away), so structural equality is
/// equality of the denoted words. `ε^~w` is identified with `Top`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SuffixElem {
    Top,
    Finite(Vec<Opener>),
    Ulp {
        period: Vec<Opener>,
        core: Vec<Opener>,
    },
}

impl SuffixElem {
    pub fn finite(word: impl Into<Vec<Opener>>) -> Self {
        SuffixElem::Finite(word.into())
    }

    pub fn empty() -> Self {
        SuffixElem::Finite(Vec::new())
    }

    /// Canonicalizes `period^~w core`.
    ///
    /// The period is replaced by its primitive root; while the core starts
    /// with the period's first letter, that letter is absorbed into the
    /// infinite part and the period rotates left (`p^~w (c u) = (qc)^~w u`
    /// for `p = cq`). An empty period yields `Top`.
    pub fn ulp(period: impl Into<Vec<Opener>>, core: impl Into<Vec<Opener>>) -> Self {
        let period: Vec<Opener> = period.into();
        let mut core: Vec<Opener> = core.into();
        if period.is_empty() {
            return SuffixElem::Top;
        }
        let root = primitive_root_len(&period);
        let mut period = period[..root].to_vec();
        let mut start = 0;
        while start < core.len() && core[start] == period[0] {
            period.rotate_left(1);
            start += 1;
        }
        core.drain(..start);
        SuffixElem::Ulp { period, core }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, SuffixElem::Top)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SuffixElem::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&[Opener]> {
        match self {
            SuffixElem::Finite(w) => Some(w),
            _ => None,
        }
    }

    /// The last `len` letters of the denoted word. For finite words shorter
    /// than `len` the whole word is returned.
    pub fn expand_suffix(&self, len: usize) -> Vec<Opener> {
        match self {
            SuffixElem::Top => panic!("TOP has no letters"),
            SuffixElem::Finite(w) => {
                let start = w.len().saturating_sub(len);
                w[start..].to_vec()
            }
            SuffixElem::Ulp { period, core } => {
                let mut tail = Vec::with_capacity(len + period.len());
                let missing = len.saturating_sub(core.len());
                let copies = missing.div_ceil(period.len());
                for _ in 0..copies {
                    tail.extend_from_slice(period);
                }
                tail.extend_from_slice(core);
                let start = tail.len().saturating_sub(len);
                tail[start..].to_vec()
            }
        }
    }

    /// Appends a finite word on the right.
    pub fn append_finite(&self, suffix: &[Opener]) -> SuffixElem {
        match self {
            SuffixElem::Top => SuffixElem::Top,
            SuffixElem::Finite(w) => {
                let mut w = w.clone();
                w.extend_from_slice(suffix);
                SuffixElem::Finite(w)
            }
            SuffixElem::Ulp { period, core } => {
                let mut core = core.clone();
                core.extend_from_slice(suffix);
                SuffixElem::ulp(period.clone(), core)
            }
        }
    }

    /// Splits off a known finite suffix: when `r ⊑ self`, returns the element
    /// δ with `self = δ r`. `Top` stays `Top`.
    pub fn strip_finite_suffix(&self, r: &[Opener]) -> Option<SuffixElem> {
        if !suffix_le(&SuffixElem::finite(r.to_vec()), self) {
            return None;
        }
        match self {
            SuffixElem::Top => Some(SuffixElem::Top),
            SuffixElem::Finite(w) => Some(SuffixElem::Finite(w[..w.len() - r.len()].to_vec())),
            SuffixElem::Ulp { period, core } => {
                let mut core = core.clone();
                while core.len() < r.len() {
                    let mut widened = period.clone();
                    widened.extend_from_slice(&core);
                    core = widened;
                }
                core.truncate(core.len() - r.len());
                Some(SuffixElem::ulp(period.clone(), core))
            }
        }
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        match self {
            SuffixElem::Top => "TOP".to_string(),
            SuffixElem::Finite(w) => display_openers(w, alphabet),
            SuffixElem::Ulp { period, core } => {
                let p = display_openers(period, alphabet);
                if core.is_empty() {
                    format!("({p})^~w")
                } else {
                    format!("({p})^~w {}", display_openers(core, alphabet))
                }
            }
        }
    }
}

/// Length, in letters, of the primitive root of `word`.
fn primitive_root_len(word: &[Opener]) -> usize {
    let n = word.len();
    'outer: for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        for i in d..n {
            if word[i] != word[i - d] {
                continue 'outer;
            }
        }
        return d;
    }
    n
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn common_suffix(a: &[Opener], b: &[Opener]) -> Vec<Opener> {
    let keep = a
        .iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    a[a.len() - keep..].to_vec()
}

/// The suffix order: `x ⊑ y` iff the reverse of `x` is a prefix of the
/// reverse of `y`. `Top` is the greatest element; two infinite words are
/// comparable only when equal.
pub fn suffix_le(x: &SuffixElem, y: &SuffixElem) -> bool {
    match (x, y) {
        (_, SuffixElem::Top) => true,
        (SuffixElem::Top, _) => false,
        (SuffixElem::Finite(u), SuffixElem::Finite(v)) => v.ends_with(u),
        (SuffixElem::Finite(u), SuffixElem::Ulp { .. }) => y.expand_suffix(u.len()) == *u,
        (SuffixElem::Ulp { .. }, SuffixElem::Finite(_)) => false,
        (SuffixElem::Ulp { .. }, SuffixElem::Ulp { .. }) => x == y,
    }
}

/// Longest common suffix of two lattice elements (their infimum).
pub fn lcs2(x: &SuffixElem, y: &SuffixElem) -> SuffixElem {
    match (x, y) {
        (SuffixElem::Top, _) => y.clone(),
        (_, SuffixElem::Top) => x.clone(),
        (SuffixElem::Finite(a), SuffixElem::Finite(b)) => SuffixElem::Finite(common_suffix(a, b)),
        (SuffixElem::Finite(a), SuffixElem::Ulp { .. }) => {
            SuffixElem::Finite(common_suffix(a, &y.expand_suffix(a.len())))
        }
        (SuffixElem::Ulp { .. }, SuffixElem::Finite(b)) => {
            SuffixElem::Finite(common_suffix(b, &x.expand_suffix(b.len())))
        }
        (
            SuffixElem::Ulp { period: p, core: u },
            SuffixElem::Ulp { period: q, core: v },
        ) => {
            if x == y {
                return x.clone();
            }
            // Two distinct left-periodic words must disagree within the
            // periodicity-safe window, so their common suffix is finite.
            let window = u.len().max(v.len()) + p.len() + q.len() + lcm(p.len(), q.len());
            let cs = common_suffix(&x.expand_suffix(window), &y.expand_suffix(window));
            debug_assert!(cs.len() < window);
            SuffixElem::Finite(cs)
        }
    }
}

/// Longest common suffix of a set; the empty set yields `Top`.
pub fn lcs_set<'a>(elems: impl IntoIterator<Item = &'a SuffixElem>) -> SuffixElem {
    elems
        .into_iter()
        .fold(SuffixElem::Top, |acc, e| lcs2(&acc, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(s: &str) -> Vec<Opener> {
        s.bytes().map(|b| Opener((b - b'a') as u32)).collect()
    }

    fn fin(s: &str) -> SuffixElem {
        SuffixElem::finite(word(s))
    }

    fn ulp(p: &str, u: &str) -> SuffixElem {
        SuffixElem::ulp(word(p), word(u))
    }

    #[test]
    fn canonical_primitive_root() {
        assert_eq!(ulp("abab", ""), ulp("ab", ""));
    }

    #[test]
    fn canonical_empty_period_is_top() {
        assert_eq!(SuffixElem::ulp(word(""), word("x")), SuffixElem::Top);
    }

    #[test]
    fn canonical_absorbs_leading_period_material() {
        // (ab)^~w abx and (ab)^~w x denote the same word
        assert_eq!(ulp("ab", "abx"), ulp("ab", "x"));
        let window = 11;
        assert_eq!(
            SuffixElem::Ulp {
                period: word("ab"),
                core: word("abx")
            }
            .expand_suffix(window),
            ulp("ab", "abx").expand_suffix(window)
        );
        // rotation: (ab)^~w a = (ba)^~w
        assert_eq!(ulp("ab", "a"), ulp("ba", ""));
    }

    #[test]
    fn suffix_le_examples() {
        assert!(suffix_le(&fin("a"), &ulp("ba", "")));
        assert!(!suffix_le(&fin("ab"), &ulp("ba", "")));
        for x in [fin(""), fin("ab"), ulp("ab", "x"), SuffixElem::Top] {
            assert!(suffix_le(&x, &SuffixElem::Top));
        }
    }

    #[test]
    fn lcs_goldens() {
        assert_eq!(lcs2(&ulp("bba", ""), &ulp("ba", "a")), fin("a"));
        assert_eq!(lcs2(&ulp("ab", ""), &ulp("ba", "b")), ulp("ab", ""));
        assert_eq!(lcs2(&ulp("ab", ""), &ulp("bab", "")), fin("bab"));
        assert_eq!(lcs2(&fin("abbab"), &ulp("ab", "")), fin("bab"));
    }

    #[test]
    fn lcs_set_examples() {
        assert_eq!(lcs_set([]), SuffixElem::Top);
        assert_eq!(lcs_set([&fin("ab"), &fin("cb")]), fin("b"));
        assert_eq!(lcs_set([&fin("a"), &fin("baa")]), fin("a"));
    }

    #[test]
    fn strip_and_append() {
        assert_eq!(fin("abc").strip_finite_suffix(&word("bc")), Some(fin("a")));
        assert_eq!(fin("abc").strip_finite_suffix(&word("ac")), None);
        // (ba)^~w = δ·a with δ = (ab)^~w
        assert_eq!(ulp("ba", "").strip_finite_suffix(&word("a")), Some(ulp("ab", "")));
        assert_eq!(ulp("ab", "").append_finite(&word("a")), ulp("ba", ""));
        assert_eq!(SuffixElem::Top.append_finite(&word("a")), SuffixElem::Top);
    }

    #[test]
    fn display_syntax() {
        let alpha = Alphabet::new(["a", "b", "c"]).unwrap();
        assert_eq!(SuffixElem::Top.display(&alpha), "TOP");
        assert_eq!(fin("").display(&alpha), "_");
        assert_eq!(fin("ab").display(&alpha), "ab");
        assert_eq!(ulp("ab", "c").display(&alpha), "(ab)^~w c");
        let alpha2 = Alphabet::new(["aa", "b"]).unwrap();
        assert_eq!(
            SuffixElem::finite(vec![Opener(0), Opener(1)]).display(&alpha2),
            "aa b"
        );
    }

    fn arb_fin(max: usize) -> impl Strategy<Value = Vec<Opener>> {
        prop::collection::vec((0u32..3).prop_map(Opener), 0..max)
    }

    fn arb_period(max: usize) -> impl Strategy<Value = Vec<Opener>> {
        prop::collection::vec((0u32..3).prop_map(Opener), 1..max)
    }

    fn arb_elem() -> impl Strategy<Value = SuffixElem> {
        prop_oneof![
            1 => Just(SuffixElem::Top),
            4 => arb_fin(6).prop_map(SuffixElem::Finite),
            4 => (arb_period(4), arb_fin(4)).prop_map(|(p, u)| SuffixElem::ulp(p, u)),
        ]
    }

    fn concat(a: &[Opener], b: &[Opener]) -> Vec<Opener> {
        let mut out = a.to_vec();
        out.extend_from_slice(b);
        out
    }

    fn repeat(x: &[Opener], k: usize) -> Vec<Opener> {
        let mut out = Vec::new();
        for _ in 0..k {
            out.extend_from_slice(x);
        }
        out
    }

    proptest! {
        #[test]
        fn lcs2_commutes(x in arb_elem(), y in arb_elem()) {
            prop_assert_eq!(lcs2(&x, &y), lcs2(&y, &x));
        }

        #[test]
        fn lcs2_is_infimum(x in arb_elem(), y in arb_elem()) {
            let m = lcs2(&x, &y);
            prop_assert!(suffix_le(&m, &x));
            prop_assert!(suffix_le(&m, &y));
            prop_assert_eq!(lcs2(&x, &x), x.clone());
            prop_assert_eq!(suffix_le(&x, &y), lcs2(&x, &y) == x);
        }

        #[test]
        fn lcs_set_folds(x in arb_elem(), y in arb_elem(), z in arb_elem()) {
            prop_assert_eq!(lcs2(&x, &lcs2(&y, &z)), lcs_set([&x, &y, &z]));
        }

        #[test]
        fn lcs_set_monotone_under_superset(x in arb_elem(), y in arb_elem(), z in arb_elem()) {
            let larger = lcs_set([&x, &y, &z]);
            let smaller = lcs_set([&x, &y]);
            prop_assert!(suffix_le(&larger, &smaller));
        }

        #[test]
        fn right_concatenation_law(x in arb_fin(6), y in arb_fin(6), s in arb_fin(4)) {
            // lcs(Ls) = lcs(L)s for finite words
            let lhs = lcs2(&SuffixElem::finite(concat(&x, &s)), &SuffixElem::finite(concat(&y, &s)));
            let rhs = lcs2(&SuffixElem::finite(x), &SuffixElem::finite(y)).append_finite(&s);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn extension_identity(x in arb_fin(6), y in arb_fin(5), k in 1usize..4) {
            // lcs(x, xy) = lcs(x, xy^k) = lcs(x, y^~w)
            let base = lcs2(&SuffixElem::finite(x.clone()), &SuffixElem::finite(concat(&x, &y)));
            let pumped = lcs2(
                &SuffixElem::finite(x.clone()),
                &SuffixElem::finite(concat(&x, &repeat(&y, k))),
            );
            let infinite = lcs2(&SuffixElem::finite(x), &SuffixElem::ulp(y, vec![]));
            prop_assert_eq!(&base, &pumped);
            prop_assert_eq!(&base, &infinite);
        }

        #[test]
        fn periodic_lcs_identity(x in arb_period(5), y in arb_period(5), k in 1usize..4, l in 1usize..4) {
            let lhs = lcs2(&SuffixElem::ulp(x.clone(), vec![]), &SuffixElem::ulp(y.clone(), vec![]));
            if concat(&x, &y) == concat(&y, &x) {
                prop_assert_eq!(lhs, SuffixElem::ulp(concat(&x, &y), vec![]));
            } else {
                let fin_pair = lcs2(
                    &SuffixElem::finite(concat(&x, &y)),
                    &SuffixElem::finite(concat(&y, &x)),
                );
                let pumped = lcs2(
                    &SuffixElem::finite(concat(&x, &repeat(&y, l))),
                    &SuffixElem::finite(concat(&y, &repeat(&x, k)))
                );
                prop_assert_eq!(&lhs, &fin_pair);
                prop_assert_eq!(&lhs, &pumped);
                // Fine and Wilf: the common suffix is short
                let len = match &lhs {
                    SuffixElem::Finite(w) => w.len(),
                    _ => unreachable!(),
                };
                prop_assert!(len < x.len() + y.len() - gcd(x.len(), y.len()));
            }
        }

        #[test]
        fn shifted_period_identities(u in arb_period(4), w in arb_period(4)) {
            let iu = SuffixElem::ulp(u.clone(), vec![]);
            let iw = SuffixElem::ulp(w.clone(), vec![]);
            let iwu = SuffixElem::ulp(concat(&w, &u), vec![]);
            // lcs(u^~w, (wu)^~w) = lcs(u^~w, w^~w)·u
            prop_assert_eq!(lcs2(&iu, &iwu), lcs2(&iu, &iw).append_finite(&u));
            // lcs{u^~w, w^~w, (wu)^~w} = lcs(u^~w, w^~w)
            prop_assert_eq!(lcs_set([&iu, &iw, &iwu]), lcs2(&iu, &iw));
        }

        #[test]
        fn ulp_lcs_matches_truncated_expansion(
            p in arb_period(4), u in arb_fin(4), q in arb_period(4), v in arb_fin(4)
        ) {
            let x = SuffixElem::ulp(p.clone(), u.clone());
            let y = SuffixElem::ulp(q.clone(), v.clone());
            let window = u.len() + v.len() + p.len() + q.len() + lcm(p.len(), q.len());
            if x == y {
                prop_assert_eq!(lcs2(&x, &y), x.clone());
            } else {
                let naive = common_suffix(&x.expand_suffix(window), &y.expand_suffix(window));
                prop_assert_eq!(lcs2(&x, &y), SuffixElem::Finite(naive));
            }
        }

        #[test]
        fn canonical_form_is_sound(p in arb_period(4), u in arb_fin(6), extra in 0usize..3) {
            // prepending more copies of the period never changes the value
            let mut padded = repeat(&p, extra);
            padded.extend_from_slice(&u);
            prop_assert_eq!(SuffixElem::ulp(p.clone(), padded), SuffixElem::ulp(p, u));
        }

        #[test]
        fn strip_inverts_append(e in arb_elem(), s in arb_fin(4)) {
            let appended = e.append_finite(&s);
            if !e.is_top() {
                prop_assert_eq!(appended.strip_finite_suffix(&s), Some(e));
            }
        }
    }
}
