//! Inclusion of a regular language `L(A)` in the group language of `G`.
//!
//! The automaton's transition diagram is relabelled by group elements and
//! the sets of walk labels `g[i][j]` are closed under the pivot recurrence
//! `g[i][j] ∪= g[i][k] · g[k][j]` for `k = 1..n`. Inclusion holds iff every
//! label from the start to a final state is `e` and, for every state `j`
//! on an accepting route, every start label `u` conjugates every cycle
//! label `v` at `j` to `e`.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{CheckError, LanguageError, SemiringError};
use crate::group::GroupBackend;
use crate::matrix::LabelMatrix;
use crate::semiring::{GroupSet, SetAlgebra};
use crate::verdict::{CheckConfig, CheckOutcome, InclusionVerdict, OpCounters, ViolationReason};
use crate::word::{GeneratorAlphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: usize,
    pub letter: Letter,
    pub to: usize,
}

/// A nondeterministic finite automaton without ε-moves. States are
/// numbered `1..=n`; state 1 is the start state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    states: usize,
    alphabet: GeneratorAlphabet,
    transitions: Vec<Transition>,
    finals: BTreeSet<usize>,
}

impl Nfa {
    pub fn new(
        states: usize,
        rank: usize,
        transitions: impl IntoIterator<Item = (usize, Letter, usize)>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Self, LanguageError> {
        if states == 0 {
            return Err(LanguageError::NoStates);
        }
        let alphabet = GeneratorAlphabet::new(rank)?;
        let in_range = |state: usize| {
            if (1..=states).contains(&state) {
                Ok(state)
            } else {
                Err(LanguageError::StateOutOfRange { state, count: states })
            }
        };
        let mut arcs = Vec::new();
        for (from, letter, to) in transitions {
            if letter == 0 {
                return Err(LanguageError::EpsilonTransition);
            }
            alphabet.check_word(&Word::single(letter))?;
            arcs.push(Transition {
                from: in_range(from)?,
                letter,
                to: in_range(to)?,
            });
        }
        arcs.sort();
        arcs.dedup();
        let finals = finals.into_iter().map(in_range).collect::<Result<_, _>>()?;
        Ok(Self {
            states,
            alphabet,
            transitions: arcs,
            finals,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn start(&self) -> usize {
        1
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn alphabet(&self) -> GeneratorAlphabet {
        self.alphabet
    }

    /// Transitions sorted by `(from, letter, to)`.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals.contains(&state)
    }

    /// Same automaton with states renamed by `perm` (`perm[s - 1]` is the new
    /// name of state `s`). The start state must stay 1.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, LanguageError> {
        assert_eq!(perm.len(), self.states);
        Nfa::new(
            self.states,
            self.rank(),
            self.transitions.iter().map(|t| (perm[t.from - 1], t.letter, perm[t.to - 1])),
            self.finals.iter().map(|&f| perm[f - 1]),
        )
    }
}

fn reach(n: usize, sources: impl IntoIterator<Item = usize>, edges: &[(usize, usize)]) -> BTreeSet<usize> {
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for s in sources {
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Vertices reachable from `start` that can also reach one of `targets`.
pub(crate) fn useful_vertices(
    vertex_count: usize,
    start: usize,
    targets: impl IntoIterator<Item = usize>,
    edges: &[(usize, usize)],
) -> BTreeSet<usize> {
    let forward = reach(vertex_count, [start], edges);
    let reversed: Vec<_> = edges.iter().map(|&(a, b)| (b, a)).collect();
    let backward = reach(vertex_count, targets, &reversed);
    forward.intersection(&backward).copied().collect()
}

/// States reachable from the start state and co-reachable to a final state.
pub fn useful_states(nfa: &Nfa) -> BTreeSet<usize> {
    let edges: Vec<_> = nfa.transitions.iter().map(|t| (t.from, t.to)).collect();
    useful_vertices(nfa.states, nfa.start(), nfa.finals.iter().copied(), &edges)
}

/// Shortlex-smallest word leading from `from` into `targets`, if any.
pub fn shortest_word(nfa: &Nfa, from: usize, targets: &BTreeSet<usize>) -> Option<Word> {
    let n = nfa.states;
    // distance of each state to the target set
    let mut dist = vec![usize::MAX; n + 1];
    let mut queue = VecDeque::new();
    for &t in targets {
        dist[t] = 0;
        queue.push_back(t);
    }
    let mut incoming = vec![Vec::new(); n + 1];
    for t in &nfa.transitions {
        incoming[t.to].push(t.from);
    }
    while let Some(v) = queue.pop_front() {
        for &u in &incoming[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    if dist[from] == usize::MAX {
        return None;
    }
    // greedy descent: the smallest letter that keeps us on a shortest route;
    // following every state reachable by the chosen prefix keeps it lex-minimal
    let mut word = Word::empty();
    let mut current: BTreeSet<usize> = [from].into();
    let mut remaining = dist[from];
    while remaining > 0 {
        let letter = nfa
            .transitions
            .iter()
            .filter(|t| current.contains(&t.from) && dist[t.to] == remaining - 1)
            .map(|t| t.letter)
            .min()
            .expect("a shortest route continues");
        current = nfa
            .transitions
            .iter()
            .filter(|t| current.contains(&t.from) && t.letter == letter && dist[t.to] == remaining - 1)
            .map(|t| t.to)
            .collect();
        word.push(letter);
        remaining -= 1;
    }
    Some(word)
}

/// Level-0 label matrix: cell `(i, j)` holds the images of the letters on
/// arcs `i → j`. Rows and columns of useless states stay empty.
pub fn build_initial_matrix(nfa: &Nfa, group: &GroupBackend) -> Result<LabelMatrix<GroupSet>, CheckError> {
    check_rank(nfa.rank(), group)?;
    let useful = useful_states(nfa);
    let n = nfa.states;
    let mut mat = LabelMatrix::<GroupSet>::new(n, n);
    for t in &nfa.transitions {
        if useful.contains(&t.from) && useful.contains(&t.to) {
            let letter = Word::single(t.letter);
            let value = group.canonicalize(&letter)?;
            mat.get_mut(t.from, t.to).insert(value, letter);
        }
    }
    Ok(mat)
}

pub(crate) fn check_rank(language: usize, group: &GroupBackend) -> Result<(), CheckError> {
    if language != group.rank() {
        return Err(CheckError::RankMismatch {
            language,
            group: group.rank(),
        });
    }
    Ok(())
}

/// Why [`closure`] stopped early.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureError {
    CapExceeded { cell: (usize, usize), cardinality: usize },
    /// Cell `(i, j)` holds two distinct elements spelled by `first` and
    /// `second`, the two smallest witnesses in the cell.
    SingletonViolation {
        i: usize,
        j: usize,
        first: Word,
        second: Word,
    },
    Check(CheckError),
}

impl ClosureError {
    fn at(cell: (usize, usize), err: SemiringError) -> Self {
        match err {
            SemiringError::CapExceeded { cardinality } => ClosureError::CapExceeded { cell, cardinality },
            SemiringError::Group(e) => ClosureError::Check(e.into()),
        }
    }
}

fn singleton_violation(i: usize, j: usize, cell: &GroupSet) -> ClosureError {
    let mut witnesses: Vec<&Word> = cell.iter().map(|(_, w)| w).collect();
    witnesses.sort();
    ClosureError::SingletonViolation {
        i,
        j,
        first: witnesses[0].clone(),
        second: witnesses[1].clone(),
    }
}

/// Applies pivots `k = 1..n` to a level-0 matrix. Each level reads only
/// the previous level. With `early_fail`, stops at the first cell holding
/// two or more elements.
pub fn closure(
    mut mat: LabelMatrix<GroupSet>,
    algebra: &SetAlgebra<'_>,
    early_fail: bool,
    counters: &mut OpCounters,
) -> Result<LabelMatrix<GroupSet>, ClosureError> {
    let n = mat.rows();
    assert_eq!(n, mat.cols(), "regular label matrix is square");
    assert_eq!(mat.level(), 0, "closure starts from level 0");
    if early_fail {
        if let Some(((i, j), cell)) = mat.iter().find(|(_, c)| c.len() >= 2) {
            return Err(singleton_violation(i, j, cell));
        }
    }
    for k in 1..=n {
        let prev = mat.clone();
        for i in 1..=n {
            let left = prev.get(i, k);
            if left.is_empty() {
                continue;
            }
            for j in 1..=n {
                let right = prev.get(k, j);
                if right.is_empty() {
                    continue;
                }
                let through = algebra.product(left, right).map_err(|e| ClosureError::at((i, j), e))?;
                counters.products += 1;
                let merged = algebra
                    .union(mat.get(i, j), &through)
                    .map_err(|e| ClosureError::at((i, j), e))?;
                counters.unions += 1;
                if early_fail && merged.len() >= 2 {
                    return Err(singleton_violation(i, j, &merged));
                }
                mat.set(i, j, merged);
            }
        }
        mat.set_level(k);
    }
    Ok(mat)
}

/// Returns the first candidate that is not in the group language.
pub(crate) fn first_counterexample(group: &GroupBackend, candidates: &[Word]) -> Result<Word, CheckError> {
    for c in candidates {
        if !group.word_in_group_language(c)? {
            return Ok(c.clone());
        }
    }
    Err(CheckError::InternalInconsistency(format!(
        "violation detected but every candidate word spells the identity: {}",
        candidates.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" | ")
    )))
}

/// Given a start path `u` to state `j`, a cycle `v` at `j` and a path `w`
/// from `j` to acceptance with `u v u⁻¹ ≠ e`, returns whichever of `u v w`
/// and `u w` does not spell the identity.
pub fn extract_witness(group: &GroupBackend, u: &Word, v: &Word, w: &Word) -> Result<Word, CheckError> {
    first_counterexample(group, &[Word::concat_all([u, v, w]), u.concat(w)])
}

/// Decides `L(nfa) ⊆ 𝔏(group)`.
pub fn check_regular_inclusion(
    nfa: &Nfa,
    group: &GroupBackend,
    config: &CheckConfig,
) -> Result<CheckOutcome, CheckError> {
    check_rank(nfa.rank(), group)?;
    let mut counters = OpCounters::default();
    let useful = useful_states(nfa);
    if !useful.contains(&nfa.start()) {
        return Ok(CheckOutcome {
            verdict: InclusionVerdict::Holds,
            counters,
        });
    }
    let useful_finals: BTreeSet<usize> = nfa.finals.intersection(&useful).copied().collect();
    let algebra = SetAlgebra::new(group, config.set_cap);
    let start_matrix = build_initial_matrix(nfa, group)?;

    let mat = match closure(start_matrix, &algebra, config.early_fail, &mut counters) {
        Ok(m) => m,
        Err(ClosureError::CapExceeded { cell, cardinality }) => {
            return Ok(CheckOutcome {
                verdict: InclusionVerdict::ResourceExceeded { cell, cardinality },
                counters,
            })
        }
        Err(ClosureError::SingletonViolation { i, j, first, second }) => {
            let u = if i == nfa.start() {
                Word::empty()
            } else {
                shortest_word(nfa, nfa.start(), &[i].into()).expect("useful state is reachable")
            };
            let w = shortest_word(nfa, j, &useful_finals).expect("useful state reaches acceptance");
            let witness = first_counterexample(
                group,
                &[Word::concat_all([&u, &first, &w]), Word::concat_all([&u, &second, &w])],
            )?;
            return Ok(CheckOutcome {
                verdict: InclusionVerdict::Fails {
                    witness,
                    reason: ViolationReason::DistinctLabels { from: i, to: j },
                },
                counters,
            });
        }
        Err(ClosureError::Check(e)) => return Err(e),
    };

    let start = nfa.start();
    for &t in &useful_finals {
        if let Some(bad) = mat.get(start, t).best_non_identity(group) {
            return Ok(CheckOutcome {
                verdict: InclusionVerdict::Fails {
                    witness: bad.witness,
                    reason: ViolationReason::SimplePathViolation,
                },
                counters,
            });
        }
    }

    for &j in &useful {
        let reaches_final = useful_finals.iter().any(|&t| !mat.get(j, t).is_empty());
        let to_j = mat.get(start, j);
        let cycles = mat.get(j, j);
        if !reaches_final || to_j.is_empty() || cycles.is_empty() {
            continue;
        }
        let conjugates = match algebra.star(to_j, cycles) {
            Ok(s) => s,
            Err(SemiringError::CapExceeded { cardinality }) => {
                return Ok(CheckOutcome {
                    verdict: InclusionVerdict::ResourceExceeded { cell: (j, j), cardinality },
                    counters,
                })
            }
            Err(SemiringError::Group(e)) => return Err(e.into()),
        };
        counters.stars += 1;
        if conjugates.is_unit(group) {
            continue;
        }
        let (u, v) = conjugate_violation(group, to_j, cycles)?;
        let w = shortest_word(nfa, j, &useful_finals).expect("useful state reaches acceptance");
        let witness = extract_witness(group, &u, &v, &w)?;
        return Ok(CheckOutcome {
            verdict: InclusionVerdict::Fails {
                witness,
                reason: ViolationReason::ConjugateViolation { state: j },
            },
            counters,
        });
    }

    Ok(CheckOutcome {
        verdict: InclusionVerdict::Holds,
        counters,
    })
}

/// The witness pair `(u, v)` with the smallest `u v u⁻¹ ≠ e`, ordered by
/// `(witness(u), witness(v))`.
fn conjugate_violation(group: &GroupBackend, to_j: &GroupSet, cycles: &GroupSet) -> Result<(Word, Word), CheckError> {
    let mut best: Option<(Word, Word)> = None;
    for (x, wx) in to_j.iter() {
        let x_inv = group.invert(x)?;
        for (y, wy) in cycles.iter() {
            let conj = group.multiply(&group.multiply(x, y)?, &x_inv)?;
            if group.is_identity(&conj) {
                continue;
            }
            let candidate = (wx.clone(), wy.clone());
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.ok_or_else(|| CheckError::InternalInconsistency("star reported a non-identity conjugate".into()))
}
