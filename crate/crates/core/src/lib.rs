//! Analysis of languages over paired-bracket alphabets.
//!
//! The crate decides *well-formedness* (every word is a prefix of a balanced
//! bracket word) and *balancedness* (every word reduces to the empty word)
//! for context-free grammars over an alphabet of opening and closing
//! brackets, and for the output languages of 2-copy linear tree-to-word
//! transducers.
//!
//! The main building blocks:
//!
//! * [`brackets`] — the free involutive monoid: bracket words, reduction,
//!   height, involution and the (weak) well-formedness predicates.
//! * [`ulp`] — the suffix lattice of finite and ultimately left-periodic
//!   words with longest-common-suffix computation.
//! * [`summary`] — `(lcs, lcsext)` summaries of languages, union and
//!   concatenation on summaries, and the three-word normal form.
//! * [`slp`] — straight-line programs for words of exponential length.
//! * [`grammar`] — grammar normalization, nonnegativity, descent words,
//!   the height-bounded fixed point and the well-formedness decision.
//! * [`transducer`] — linear tree-to-word transducers, output grammars,
//!   inversion and the balancedness decision for the 2-copy class.
//! * [`oracles`] — independent brute-force reference implementations used
//!   by the test suites and the CLI's `--oracle` mode.

pub mod brackets;
pub mod grammar;
pub mod oracles;
pub mod slp;
pub mod summary;
pub mod transducer;
pub mod ulp;
