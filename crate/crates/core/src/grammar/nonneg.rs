//! Nonnegativity of the prefix closure via the tropical semiring.
//!
//! Phase one runs Kleene iteration of the height operator for as many rounds
//! as there are nonterminals, computing the minimal height over all words
//! with bounded derivation height. Phase two turns binary rules into
//! weighted edges and searches for a negative pumping cycle; together the
//! phases decide whether any derivable word has a prefix of negative height.

use crate::brackets::Word;

use super::{prefix_closure, Grammar, NtId, Prod};

/// Evidence that the language has a word with a negative-height prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Negativity {
    /// A concrete word of the prefix closure with negative height.
    Word(Word),
    /// The minimal height at bounded derivation depth is negative but the
    /// witness was too large to materialize.
    Depth(i128),
    /// Nonterminals along a reachable pumping cycle of negative height.
    Cycle(Vec<String>),
}

/// Kleene iteration of the minimal word height, one table per round:
/// `result[h][X]` is the minimal height over words of `X` with derivation
/// height at most `h` (`None` while unproductive).
pub fn min_heights(g: &Grammar, rounds: usize) -> Vec<Vec<Option<i128>>> {
    let n = g.nt_count();
    let mut tables = vec![vec![None; n]];
    for _ in 0..rounds {
        let prev = tables.last().unwrap();
        let mut next = vec![None; n];
        for x in g.nt_ids() {
            let mut best: Option<i128> = None;
            let mut consider = |v: Option<i128>| {
                if let Some(v) = v {
                    best = Some(best.map_or(v, |b: i128| b.min(v)));
                }
            };
            for p in g.prods(x) {
                match p {
                    Prod::Const(c) => consider(Some(c.hd() as i128)),
                    Prod::Unit(y) => consider(prev[y.0 as usize]),
                    Prod::Binary(y, z) => {
                        if let (Some(a), Some(b)) = (prev[y.0 as usize], prev[z.0 as usize]) {
                            consider(Some(a.saturating_add(b)));
                        }
                    }
                }
            }
            next[x.0 as usize] = best;
        }
        tables.push(next);
    }
    tables
}

/// Rebuilds a word of `X` achieving the recorded minimum at round `h`.
fn min_word(
    g: &Grammar,
    tables: &[Vec<Option<i128>>],
    x: NtId,
    h: usize,
    budget: &mut isize,
) -> Option<Word> {
    let target = tables[h][x.0 as usize]?;
    for p in g.prods(x) {
        match p {
            Prod::Const(c) => {
                if c.hd() as i128 == target {
                    *budget -= c.len() as isize;
                    if *budget < 0 {
                        return None;
                    }
                    return Some(c.to_word());
                }
            }
            Prod::Unit(y) => {
                if h > 0 && tables[h - 1][y.0 as usize] == Some(target) {
                    return min_word(g, tables, *y, h - 1, budget);
                }
            }
            Prod::Binary(y, z) => {
                if h == 0 {
                    continue;
                }
                if let (Some(a), Some(b)) =
                    (tables[h - 1][y.0 as usize], tables[h - 1][z.0 as usize])
                {
                    if a.saturating_add(b) == target {
                        let left = min_word(g, tables, *y, h - 1, budget)?;
                        let right = min_word(g, tables, *z, h - 1, budget)?;
                        return Some(left.concat(&right));
                    }
                }
            }
        }
    }
    None
}

/// Decides nonnegativity of `pfcl(L(g))`. Returns `None` when nonnegative,
/// otherwise evidence.
pub fn check_nonnegative(g: &Grammar) -> Option<Negativity> {
    if g.is_empty_language() {
        return None;
    }
    let gp = prefix_closure(g, g.axiom());
    if gp.is_empty_language() {
        return None;
    }
    let n = gp.nt_count();
    let tables = min_heights(&gp, n);
    let axiom_min = tables[n][gp.axiom().0 as usize];
    if let Some(m) = axiom_min {
        if m < 0 {
            let mut budget: isize = 100_000;
            return Some(match min_word(&gp, &tables, gp.axiom(), n, &mut budget) {
                Some(w) => Negativity::Word(w),
                None => Negativity::Depth(m),
            });
        }
    }

    // pumping cycles: X -> Y Z induces X --min(Z)--> Y and X --min(Y)--> Z
    let last = &tables[n];
    let mut edges: Vec<(usize, usize, i128)> = Vec::new();
    for x in gp.nt_ids() {
        for p in gp.prods(x) {
            match p {
                Prod::Unit(y) => edges.push((x.0 as usize, y.0 as usize, 0)),
                Prod::Binary(y, z) => {
                    if let Some(wz) = last[z.0 as usize] {
                        edges.push((x.0 as usize, y.0 as usize, wz));
                    }
                    if let Some(wy) = last[y.0 as usize] {
                        edges.push((x.0 as usize, z.0 as usize, wy));
                    }
                }
                Prod::Const(_) => {}
            }
        }
    }
    // Bellman-Ford from a virtual source connected to every node with
    // weight 0; any relaxation after n rounds exposes a negative cycle.
    let mut dist = vec![0i128; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in &edges {
            if dist[u].saturating_add(w) < dist[v] {
                dist[v] = dist[u].saturating_add(w);
                pred[v] = Some(u);
                changed = true;
            }
        }
        if !changed {
            return None;
        }
    }
    for &(u, v, w) in &edges {
        if dist[u].saturating_add(w) < dist[v] {
            // walk predecessors n steps to land inside the cycle
            let mut node = u;
            for _ in 0..n {
                node = pred[node].expect("relaxed node has a predecessor");
            }
            let start = node;
            let mut cycle = vec![gp.name(NtId(start as u32)).to_string()];
            let mut cur = pred[start].expect("cycle node has a predecessor");
            while cur != start {
                cycle.push(gp.name(NtId(cur as u32)).to_string());
                cur = pred[cur].expect("cycle node has a predecessor");
            }
            cycle.reverse();
            return Some(Negativity::Cycle(cycle));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{normalize, raw_grammar_from_rules};
    use crate::oracles::enumerate_cfg_heights;

    #[test]
    fn dyck_is_nonnegative() {
        let g = normalize(&raw_grammar_from_rules(
            &["a"],
            "S",
            &[("S", "_ | S S | a S a'")],
        ))
        .unwrap();
        assert_eq!(check_nonnegative(&g), None);
    }

    #[test]
    fn lone_closer_is_negative() {
        let g = normalize(&raw_grammar_from_rules(&["a"], "S", &[("S", "a'")])).unwrap();
        match check_nonnegative(&g) {
            Some(Negativity::Word(w)) => assert_eq!(w.hd(), -1),
            other => panic!("expected a negative word, got {other:?}"),
        }
    }

    #[test]
    fn negativity_inside_a_constant_prefix() {
        // the word a' a has height 0 but its prefix a' dips below zero
        let g = normalize(&raw_grammar_from_rules(&["a"], "S", &[("S", "a' a")])).unwrap();
        match check_nonnegative(&g) {
            Some(Negativity::Word(w)) => assert!(w.hd() < 0),
            other => panic!("expected a negative word, got {other:?}"),
        }
    }

    #[test]
    fn deep_negative_cycle_needs_phase_two() {
        // bounded-height words stay positive thanks to the padding, but the
        // pump loses one unit per round
        let g = normalize(&raw_grammar_from_rules(
            &["b"],
            "S",
            &[
                ("S", "b b b b b b b b b b P"),
                ("P", "K P | _"),
                ("K", "b'"),
            ],
        ))
        .unwrap();
        let gp = prefix_closure(&g, g.axiom());
        let n = gp.nt_count();
        let tables = min_heights(&gp, n);
        assert!(tables[n][gp.axiom().0 as usize].unwrap() >= 0);
        assert!(matches!(
            check_nonnegative(&g),
            Some(Negativity::Cycle(_))
        ));
    }

    #[test]
    fn kleene_matches_enumerated_minimum() {
        let g = normalize(&raw_grammar_from_rules(
            &["a", "b"],
            "S",
            &[("S", "a S a' | T b"), ("T", "b' | a")],
        ))
        .unwrap();
        let n = g.nt_count();
        let tables = min_heights(&g, n);
        let langs = enumerate_cfg_heights(&g, n, 100_000);
        assert!(langs.complete);
        for h in 1..=n {
            for x in g.nt_ids() {
                let enumerated = langs.per_height[h - 1][x.0 as usize]
                    .iter()
                    .map(|w| w.hd() as i128)
                    .min();
                assert_eq!(tables[h][x.0 as usize], enumerated, "nt {} h {}", x.0, h);
            }
        }
    }
}
