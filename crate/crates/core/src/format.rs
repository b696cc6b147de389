//! JSON file formats for groups, automata and linear grammars.
//!
//! ```json
//! {"kind": "cyclic", "order": 3}
//! {"kind": "automaton", "states": 2, "alphabet_rank": 1,
//!  "transitions": [[1, 1, 2]], "start": 1, "finals": [2]}
//! {"kind": "linear_grammar", "nonterminals": 1, "alphabet_rank": 1,
//!  "productions": [{"lhs": 1, "alpha": [1], "rhs": 1, "beta": [-1]},
//!                  {"lhs": 1, "alpha": []}], "start": 1}
//! ```
//!
//! Letters are signed integers, `-i` for the inverse of generator `i`.
//! Unknown fields are rejected. The `kind` field of a language file is
//! optional; without it the kind is inferred from `states` or
//! `nonterminals`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{FormatError, GroupError, LanguageError};
use crate::group::{CayleyTable, GroupBackend};
use crate::linear::{LinearGrammar, Production};
use crate::regular::Nfa;
use crate::word::{Letter, Word};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator_images: Option<Vec<usize>>,
}

fn spec_error(msg: impl Into<String>) -> FormatError {
    FormatError::Group(GroupError::InvalidSpec(msg.into()))
}

fn require<T>(value: Option<T>, field: &str, kind: &str) -> Result<T, FormatError> {
    value.ok_or_else(|| spec_error(format!("kind \"{kind}\" requires field \"{field}\"")))
}

fn forbid<T>(value: &Option<T>, field: &str, kind: &str) -> Result<(), FormatError> {
    match value {
        Some(_) => Err(spec_error(format!("field \"{field}\" is not allowed for kind \"{kind}\""))),
        None => Ok(()),
    }
}

/// Parses a group specification file.
pub fn parse_group(text: &str) -> Result<GroupBackend, FormatError> {
    let raw: Value = serde_json::from_str(text)?;
    if let Some(obj) = raw.as_object() {
        let presentation_kind = matches!(
            obj.get("kind").and_then(Value::as_str),
            Some("presentation" | "finitely_presented" | "fp")
        );
        if presentation_kind || obj.contains_key("relators") || obj.contains_key("relations") {
            return Err(GroupError::UnsupportedPresentation.into());
        }
    }
    let file: GroupFile = serde_json::from_str(text)?;
    let kind = file.kind.as_str();
    match kind {
        "free" | "free_abelian" => {
            forbid(&file.order, "order", kind)?;
            forbid(&file.size, "size", kind)?;
            forbid(&file.identity, "identity", kind)?;
            forbid(&file.table, "table", kind)?;
            forbid(&file.generator_images, "generator_images", kind)?;
            let rank = require(file.rank, "rank", kind)?;
            Ok(if kind == "free" {
                GroupBackend::free(rank)?
            } else {
                GroupBackend::free_abelian(rank)?
            })
        }
        "cyclic" => {
            forbid(&file.size, "size", kind)?;
            forbid(&file.identity, "identity", kind)?;
            forbid(&file.table, "table", kind)?;
            forbid(&file.generator_images, "generator_images", kind)?;
            if file.rank.is_some_and(|r| r != 1) {
                return Err(spec_error("cyclic groups have rank 1"));
            }
            Ok(GroupBackend::cyclic(require(file.order, "order", kind)?)?)
        }
        "cayley" => {
            forbid(&file.rank, "rank", kind)?;
            forbid(&file.order, "order", kind)?;
            let size = require(file.size, "size", kind)?;
            let identity = require(file.identity, "identity", kind)?;
            let table = require(file.table, "table", kind)?;
            let images = require(file.generator_images, "generator_images", kind)?;
            if table.len() != size {
                return Err(spec_error(format!("size is {size} but the table has {} rows", table.len())));
            }
            Ok(GroupBackend::cayley(CayleyTable::new(identity, table, images)?))
        }
        other => Err(spec_error(format!(
            "unknown kind \"{other}\" (expected free, free_abelian, cyclic or cayley)"
        ))),
    }
}

/// Serializes a backend in the group file format.
pub fn group_to_json(group: &GroupBackend) -> Value {
    let file = match group {
        GroupBackend::Free { rank } => GroupFile {
            kind: "free".into(),
            rank: Some(*rank),
            ..empty_group_file()
        },
        GroupBackend::FreeAbelian { rank } => GroupFile {
            kind: "free_abelian".into(),
            rank: Some(*rank),
            ..empty_group_file()
        },
        GroupBackend::Cyclic { order } => GroupFile {
            kind: "cyclic".into(),
            order: Some(*order),
            ..empty_group_file()
        },
        GroupBackend::Cayley(t) => GroupFile {
            kind: "cayley".into(),
            size: Some(t.size()),
            identity: Some(t.identity()),
            table: Some(t.rows()),
            generator_images: Some(t.generator_images().to_vec()),
            ..empty_group_file()
        },
    };
    serde_json::to_value(file).expect("group file serializes")
}

fn empty_group_file() -> GroupFile {
    GroupFile {
        kind: String::new(),
        rank: None,
        order: None,
        size: None,
        identity: None,
        table: None,
        generator_images: None,
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    states: usize,
    alphabet_rank: usize,
    transitions: Vec<(usize, Letter, usize)>,
    #[serde(default = "one")]
    start: usize,
    finals: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductionFile {
    lhs: usize,
    alpha: Vec<Letter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rhs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<Vec<Letter>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GrammarFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    nonterminals: usize,
    alphabet_rank: usize,
    productions: Vec<ProductionFile>,
    #[serde(default = "one")]
    start: usize,
}

fn one() -> usize {
    1
}

/// A language description read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Language {
    Automaton(Nfa),
    LinearGrammar(LinearGrammar),
}

impl Language {
    pub fn rank(&self) -> usize {
        match self {
            Language::Automaton(a) => a.rank(),
            Language::LinearGrammar(g) => g.rank(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Language::Automaton(_) => "automaton",
            Language::LinearGrammar(_) => "linear_grammar",
        }
    }
}

/// Parses an automaton or linear grammar file.
pub fn parse_language(text: &str) -> Result<Language, FormatError> {
    let raw: Value = serde_json::from_str(text)?;
    let obj = raw
        .as_object()
        .ok_or_else(|| FormatError::Invalid("language file must be a JSON object".into()))?;
    let kind = match obj.get("kind") {
        Some(Value::String(k)) => k.clone(),
        Some(_) => return Err(FormatError::Invalid("\"kind\" must be a string".into())),
        None if obj.contains_key("states") => "automaton".into(),
        None if obj.contains_key("nonterminals") => "linear_grammar".into(),
        None => {
            return Err(FormatError::Invalid(
                "cannot tell the language kind: expected \"kind\", \"states\" or \"nonterminals\"".into(),
            ))
        }
    };
    match kind.as_str() {
        "automaton" => Ok(Language::Automaton(automaton_from_file(serde_json::from_str(text)?)?)),
        "linear_grammar" => Ok(Language::LinearGrammar(grammar_from_file(serde_json::from_str(text)?)?)),
        other => Err(FormatError::Invalid(format!(
            "unknown language kind \"{other}\" (expected automaton or linear_grammar)"
        ))),
    }
}

fn automaton_from_file(file: AutomatonFile) -> Result<Nfa, FormatError> {
    if file.start != 1 {
        return Err(LanguageError::StartNotOne {
            kind: "state",
            found: file.start,
        }
        .into());
    }
    Ok(Nfa::new(file.states, file.alphabet_rank, file.transitions, file.finals)?)
}

fn grammar_from_file(file: GrammarFile) -> Result<LinearGrammar, FormatError> {
    if file.start != 1 {
        return Err(LanguageError::StartNotOne {
            kind: "nonterminal",
            found: file.start,
        }
        .into());
    }
    let productions = file
        .productions
        .into_iter()
        .enumerate()
        .map(|(at, p)| match (p.rhs, p.beta) {
            (Some(rhs), beta) => Ok(Production::Chain {
                lhs: p.lhs,
                alpha: Word::from_letters(p.alpha),
                rhs,
                beta: Word::from_letters(beta.unwrap_or_default()),
            }),
            (None, None) => Ok(Production::Terminal {
                lhs: p.lhs,
                alpha: Word::from_letters(p.alpha),
            }),
            (None, Some(_)) => Err(FormatError::Invalid(format!(
                "production {at} has \"beta\" but no \"rhs\""
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LinearGrammar::new(file.nonterminals, file.alphabet_rank, productions)?)
}

pub fn nfa_to_json(nfa: &Nfa) -> Value {
    let file = AutomatonFile {
        kind: Some("automaton".into()),
        states: nfa.state_count(),
        alphabet_rank: nfa.rank(),
        transitions: nfa.transitions().iter().map(|t| (t.from, t.letter, t.to)).collect(),
        start: 1,
        finals: nfa.finals().iter().copied().collect(),
    };
    serde_json::to_value(file).expect("automaton file serializes")
}

pub fn grammar_to_json(grammar: &LinearGrammar) -> Value {
    let productions = grammar
        .productions()
        .iter()
        .map(|p| match p {
            Production::Chain { lhs, alpha, rhs, beta } => ProductionFile {
                lhs: *lhs,
                alpha: alpha.letters().to_vec(),
                rhs: Some(*rhs),
                beta: Some(beta.letters().to_vec()),
            },
            Production::Terminal { lhs, alpha } => ProductionFile {
                lhs: *lhs,
                alpha: alpha.letters().to_vec(),
                rhs: None,
                beta: None,
            },
        })
        .collect();
    let file = GrammarFile {
        kind: Some("linear_grammar".into()),
        nonterminals: grammar.nonterminal_count(),
        alphabet_rank: grammar.rank(),
        productions,
        start: 1,
    };
    serde_json::to_value(file).expect("grammar file serializes")
}

pub fn language_to_json(language: &Language) -> Value {
    match language {
        Language::Automaton(a) => nfa_to_json(a),
        Language::LinearGrammar(g) => grammar_to_json(g),
    }
}
