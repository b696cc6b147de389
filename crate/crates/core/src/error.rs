use thiserror::Error;

use crate::word::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("alphabet rank must be at least 1")]
    ZeroRank,
    #[error("letter {letter} is outside the alphabet of rank {rank}")]
    LetterOutOfRange { letter: Letter, rank: usize },
    #[error("element does not belong to this group backend: {0}")]
    BackendMismatch(String),
    #[error("invalid Cayley table: {0}")]
    InvalidCayley(String),
    #[error("invalid group specification: {0}")]
    InvalidSpec(String),
    #[error(
        "groups given by generators and relators are not supported (the word problem is undecidable in general); \
         use one of the kinds free, free_abelian, cyclic or cayley"
    )]
    UnsupportedPresentation,
    #[error("bad letter token `{0}` (expected x<i> or X<i>)")]
    BadToken(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("set grew to {cardinality} elements, beyond the configured cap")]
    CapExceeded { cardinality: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("automaton must have at least one state")]
    NoStates,
    #[error("grammar must have at least one nonterminal")]
    NoNonterminals,
    #[error("state {state} is out of range 1..={count}")]
    StateOutOfRange { state: usize, count: usize },
    #[error("nonterminal {index} is out of range 1..={count}")]
    NonterminalOutOfRange { index: usize, count: usize },
    #[error("the start {kind} must be 1, got {found}")]
    StartNotOne { kind: &'static str, found: usize },
    #[error("epsilon transitions (letter 0) are not supported")]
    EpsilonTransition,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Failures of an inclusion check that are not verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("language alphabet has rank {language} but the group has rank {group}")]
    RankMismatch { language: usize, group: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    /// A violation was detected but neither candidate word is a
    /// counterexample. Always an implementation bug.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration stopped after reaching the cap of {max_words} words")]
    BoundExceeded { max_words: usize },
    #[error("language alphabet has rank {language} but the group has rank {group}")]
    RankMismatch { language: usize, group: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error("{0}")]
    Invalid(String),
}
