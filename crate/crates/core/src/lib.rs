//! Inclusion of regular and linear languages in group languages.
//!
//! A *group language* over a group `G` generated by `x_1 .. x_k` is the set
//! of words over `x_i^{±1}` that evaluate to the identity. This crate decides
//! whether the language of a finite automaton ([`Nfa`]) or of a linear
//! grammar ([`LinearGrammar`]) lies inside that set, by closing a matrix of
//! label sets over a semiring of group subsets. A failing check comes with a
//! concrete word from the language that is not the identity.
//!
//! ```
//! use grouplang::{check_regular_inclusion, CheckConfig, GroupBackend, Nfa};
//!
//! // x X* over Z3: every word is x X^k, which is not always the identity.
//! let nfa = Nfa::new(2, 1, [(1, 1, 2), (2, -1, 2)], [2]).unwrap();
//! let g = GroupBackend::cyclic(3).unwrap();
//! let out = check_regular_inclusion(&nfa, &g, &CheckConfig::default()).unwrap();
//! assert!(out.verdict.is_fails());
//! ```

pub mod corpus;
pub mod error;
pub mod format;
pub mod group;
pub mod linear;
pub mod matrix;
pub mod oracle;
pub mod regular;
pub mod semiring;
pub mod verdict;
pub mod word;

pub use error::{CheckError, FormatError, GroupError, LanguageError, OracleError, SemiringError};
pub use format::{parse_group, parse_language, Language};
pub use group::{free_reduce, CayleyTable, GroupBackend, GroupElement};
pub use linear::{check_linear_inclusion, nfa_to_right_linear, DiagramArc, LinearGrammar, Production};
pub use matrix::LabelMatrix;
pub use oracle::{
    brute_force_inclusion, counterexample_bound_linear, counterexample_bound_regular, enumerate_grammar_words,
    enumerate_nfa_words, search_grammar, search_nfa, EnumerationBound, OracleVerdict,
};
pub use regular::{check_regular_inclusion, Nfa, Transition};
pub use semiring::{GroupSet, PairSet, SetAlgebra, WordPair, DEFAULT_SET_CAP};
pub use verdict::{CheckConfig, CheckOutcome, InclusionVerdict, OpCounters, ViolationReason};
pub use word::{GeneratorAlphabet, Letter, Word};

/// Runs the check that matches the language kind.
pub fn check_inclusion(
    language: &Language,
    group: &GroupBackend,
    config: &CheckConfig,
) -> Result<CheckOutcome, CheckError> {
    match language {
        Language::Automaton(nfa) => check_regular_inclusion(nfa, group, config),
        Language::LinearGrammar(g) => check_linear_inclusion(g, group, config),
    }
}
