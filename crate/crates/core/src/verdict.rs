//! Verdicts, run configuration and operation counters shared by the
//! regular and linear checks.

use std::fmt;

use serde::Serialize;

use crate::semiring::DEFAULT_SET_CAP;
use crate::word::Word;

/// Why a language fails to be included in the group language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationReason {
    /// A label of a walk from the start to acceptance is not the identity.
    SimplePathViolation,
    /// A cycle at `state` is not neutralised by the context leading to it.
    ConjugateViolation { state: usize },
    /// Two walks between the same useful states carry distinct labels.
    /// Raised by the regular check when early termination is enabled.
    DistinctLabels { from: usize, to: usize },
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationReason::SimplePathViolation => f.write_str("simple path violation"),
            ViolationReason::ConjugateViolation { state } => {
                write!(f, "conjugate violation at {state}")
            }
            ViolationReason::DistinctLabels { from, to } => {
                write!(f, "distinct walk labels from {from} to {to}")
            }
        }
    }
}

/// Outcome of an inclusion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InclusionVerdict {
    Holds,
    /// `witness` is in the language and does not spell the identity.
    Fails { witness: Word, reason: ViolationReason },
    /// A label set outgrew the configured cap at `cell`.
    ResourceExceeded { cell: (usize, usize), cardinality: usize },
    /// Only produced with the literal triple formula: the formula reports a
    /// non-identity element at `state`, but no generated word confirms it.
    /// `element_witness` spells the offending element `x y z y⁻¹`.
    LiteralTripleViolation { state: usize, element_witness: Word },
}

impl InclusionVerdict {
    pub fn is_holds(&self) -> bool {
        matches!(self, InclusionVerdict::Holds)
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, InclusionVerdict::Fails { .. })
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            InclusionVerdict::Fails { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Knobs of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub set_cap: usize,
    /// Regular check only: stop as soon as a cell holds two elements.
    pub early_fail: bool,
    /// Linear check only: use the independent-projection triple.
    pub literal_omega10: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            set_cap: DEFAULT_SET_CAP,
            early_fail: true,
            literal_omega10: false,
        }
    }
}

/// Number of semiring operations performed by a check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounters {
    pub unions: u64,
    pub products: u64,
    pub stars: u64,
    pub diamonds: u64,
    pub triples: u64,
}

/// A verdict together with the counters of the run that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub verdict: InclusionVerdict,
    pub counters: OpCounters,
}
