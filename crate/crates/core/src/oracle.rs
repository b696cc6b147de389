//! Brute-force ground truth for inclusion checks.
//!
//! Nothing here touches the semiring closure. Words are enumerated by
//! walking the automaton or grammar diagram directly; membership in the
//! language is decided by plain simulation (automata) or a span table
//! (grammars). The `search_*` functions explore the same walks but merge
//! walks that reach the same vertex with the same group image, which keeps
//! the search tractable at the lengths the acceptance runs need.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{GroupError, OracleError};
use crate::group::{GroupBackend, GroupElement};
use crate::linear::{LinearGrammar, Production};
use crate::regular::{useful_states, Nfa};
use crate::semiring::WordPair;
use crate::word::Word;

/// Limits of an enumeration run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBound {
    pub max_word_length: usize,
    /// Caps both emitted words and live search states.
    pub max_words: usize,
}

impl EnumerationBound {
    pub const DEFAULT_MAX_WORDS: usize = 1_000_000;

    /// Returns `None` unless both limits are positive.
    pub fn new(max_word_length: usize, max_words: usize) -> Option<Self> {
        (max_word_length > 0 && max_words > 0).then_some(Self {
            max_word_length,
            max_words,
        })
    }

    pub fn with_length(max_word_length: usize) -> Self {
        Self {
            max_word_length: max_word_length.max(1),
            max_words: Self::DEFAULT_MAX_WORDS,
        }
    }
}

/// Result of a brute-force run. `HoldsAtBound` is not a proof of inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    HoldsAtBound,
    Fails { witness: Word },
}

/// All accepted words of length at most the bound, in shortlex order.
pub fn enumerate_nfa_words(nfa: &Nfa, bound: EnumerationBound) -> Result<Vec<Word>, OracleError> {
    let live = useful_states(nfa);
    let mut out = Vec::new();
    if !live.contains(&nfa.start()) {
        return Ok(out);
    }
    // every live prefix of the current length, with the states it reaches
    let mut layer: BTreeMap<Word, BTreeSet<usize>> = BTreeMap::new();
    layer.insert(Word::empty(), [nfa.start()].into());
    for length in 0..=bound.max_word_length {
        for (word, states) in &layer {
            if states.iter().any(|&s| nfa.is_final(s)) {
                out.push(word.clone());
                if out.len() > bound.max_words {
                    return Err(OracleError::BoundExceeded {
                        max_words: bound.max_words,
                    });
                }
            }
        }
        if length == bound.max_word_length {
            break;
        }
        let mut next: BTreeMap<Word, BTreeSet<usize>> = BTreeMap::new();
        for (word, states) in &layer {
            for t in nfa.transitions() {
                if states.contains(&t.from) && live.contains(&t.to) {
                    let mut longer = word.clone();
                    longer.push(t.letter);
                    next.entry(longer).or_default().insert(t.to);
                }
            }
            if next.len() > bound.max_words {
                return Err(OracleError::BoundExceeded {
                    max_words: bound.max_words,
                });
            }
        }
        layer = next;
    }
    Ok(out)
}

/// All generated words of length at most the bound, in shortlex order.
///
/// Walks the grammar diagram from `A_1`; a walk reaching the sink with
/// pair label `(l, r)` emits `l · r`.
pub fn enumerate_grammar_words(grammar: &LinearGrammar, bound: EnumerationBound) -> Result<Vec<Word>, OracleError> {
    let arcs = grammar.diagram_arcs();
    let sink = grammar.sink();
    let mut seen: HashSet<(usize, WordPair)> = HashSet::new();
    let mut stack = vec![(1usize, WordPair::default())];
    seen.insert((1, WordPair::default()));
    let mut words = BTreeSet::new();
    while let Some((vertex, label)) = stack.pop() {
        if vertex == sink {
            words.insert(label.joined());
            if words.len() > bound.max_words {
                return Err(OracleError::BoundExceeded {
                    max_words: bound.max_words,
                });
            }
            continue;
        }
        for arc in arcs.iter().filter(|a| a.from == vertex) {
            if label.total_len() + arc.label.total_len() > bound.max_word_length {
                continue;
            }
            let next = WordPair::new(
                label.left.concat(&arc.label.left),
                arc.label.right.concat(&label.right),
            );
            if seen.insert((arc.to, next.clone())) {
                if seen.len() > bound.max_words {
                    return Err(OracleError::BoundExceeded {
                        max_words: bound.max_words,
                    });
                }
                stack.push((arc.to, next));
            }
        }
    }
    Ok(words.into_iter().collect())
}

/// The first word of `words` outside the group language, if any.
pub fn brute_force_inclusion(
    words: impl IntoIterator<Item = Word>,
    group: &GroupBackend,
) -> Result<OracleVerdict, GroupError> {
    for word in words {
        if !group.word_in_group_language(&word)? {
            return Ok(OracleVerdict::Fails { witness: word });
        }
    }
    Ok(OracleVerdict::HoldsAtBound)
}

/// If inclusion fails, some counterexample has length at most `3n`.
pub fn counterexample_bound_regular(nfa: &Nfa) -> usize {
    3 * nfa.state_count()
}

/// If inclusion fails, some counterexample has length at most
/// `(2n + 1) · L_max`, `L_max` the longest production body.
pub fn counterexample_bound_linear(grammar: &LinearGrammar) -> usize {
    (2 * grammar.nonterminal_count() + 1) * grammar.max_production_len()
}

fn check_rank(language: usize, group: &GroupBackend) -> Result<(), OracleError> {
    if language != group.rank() {
        return Err(OracleError::RankMismatch {
            language,
            group: group.rank(),
        });
    }
    Ok(())
}

/// Searches accepted words of length at most `bound.max_word_length` for
/// one outside the group language. Walks reaching the same state with the
/// same image are merged, keeping the shortlex-smallest word; the returned
/// witness is the shortlex-smallest counterexample.
pub fn search_nfa(nfa: &Nfa, group: &GroupBackend, bound: EnumerationBound) -> Result<OracleVerdict, OracleError> {
    check_rank(nfa.rank(), group)?;
    let live = useful_states(nfa);
    if !live.contains(&nfa.start()) {
        return Ok(OracleVerdict::HoldsAtBound);
    }
    let letters: Vec<(usize, GroupElement, usize)> = nfa
        .transitions()
        .iter()
        .filter(|t| live.contains(&t.from) && live.contains(&t.to))
        .map(|t| Ok((t.from, group.canonicalize(&Word::single(t.letter))?, t.to)))
        .collect::<Result<_, GroupError>>()?;
    let letter_of: Vec<_> = nfa
        .transitions()
        .iter()
        .filter(|t| live.contains(&t.from) && live.contains(&t.to))
        .map(|t| t.letter)
        .collect();

    let mut visited: HashSet<(usize, GroupElement)> = HashSet::new();
    let mut layer: BTreeMap<(usize, GroupElement), Word> = BTreeMap::new();
    layer.insert((nfa.start(), group.identity()), Word::empty());
    visited.insert((nfa.start(), group.identity()));
    for length in 0..=bound.max_word_length {
        let failing = layer
            .iter()
            .filter(|((state, image), _)| nfa.is_final(*state) && !group.is_identity(image))
            .map(|(_, w)| w)
            .min();
        if let Some(witness) = failing {
            return Ok(OracleVerdict::Fails {
                witness: witness.clone(),
            });
        }
        if length == bound.max_word_length {
            break;
        }
        let mut next: BTreeMap<(usize, GroupElement), Word> = BTreeMap::new();
        for ((state, image), word) in &layer {
            for ((from, letter_image, to), &letter) in letters.iter().zip(&letter_of) {
                if from != state {
                    continue;
                }
                let key = (*to, group.multiply(image, letter_image)?);
                if visited.contains(&key) {
                    continue;
                }
                let mut longer = word.clone();
                longer.push(letter);
                match next.get_mut(&key) {
                    Some(existing) if *existing <= longer => {}
                    Some(existing) => *existing = longer,
                    None => {
                        next.insert(key, longer);
                    }
                }
            }
        }
        visited.extend(next.keys().cloned());
        if visited.len() > bound.max_words {
            return Err(OracleError::BoundExceeded {
                max_words: bound.max_words,
            });
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ok(OracleVerdict::HoldsAtBound)
}

/// Searches generated words of length at most `bound.max_word_length` for
/// one outside the group language. Diagram walks that reach the same
/// vertex with the same pair of images and the same left length are
/// merged. Among those, the lexicographically smallest pair yields the
/// smaller word for every completion, so the returned witness is the
/// shortlex-smallest counterexample.
pub fn search_grammar(
    grammar: &LinearGrammar,
    group: &GroupBackend,
    bound: EnumerationBound,
) -> Result<OracleVerdict, OracleError> {
    check_rank(grammar.rank(), group)?;
    let sink = grammar.sink();
    let arcs: Vec<_> = grammar
        .diagram_arcs()
        .into_iter()
        .map(|a| {
            let l = group.canonicalize(&a.label.left)?;
            let r = group.canonicalize(&a.label.right)?;
            Ok((a, l, r))
        })
        .collect::<Result<_, GroupError>>()?;

    // (vertex, left image, right image, left length)
    type Config = (usize, GroupElement, GroupElement, usize);
    let max_len = bound.max_word_length;
    let mut best: HashMap<Config, (usize, WordPair)> = HashMap::new();
    let mut buckets: Vec<Vec<Config>> = vec![Vec::new(); max_len + 1];
    let origin = (1, group.identity(), group.identity(), 0);
    best.insert(origin.clone(), (0, WordPair::default()));
    buckets[0].push(origin);

    for length in 0..=max_len {
        let mut failing: Option<Word> = None;
        let mut cursor = 0;
        while cursor < buckets[length].len() {
            let config = buckets[length][cursor].clone();
            cursor += 1;
            let (vertex, left, right, _) = &config;
            // ε-arcs can still improve a config of this length, so read the
            // current representative rather than a copy taken at push time
            let label = match best.get(&config) {
                Some((len, label)) if *len == length => label.clone(),
                _ => continue,
            };
            if *vertex == sink {
                if !group.is_identity(&group.multiply(left, right)?) {
                    let word = label.joined();
                    if failing.as_ref().is_none_or(|f| word < *f) {
                        failing = Some(word);
                    }
                }
                continue;
            }
            for (arc, arc_left, arc_right) in arcs.iter().filter(|(a, _, _)| a.from == *vertex) {
                let next_len = length + arc.label.total_len();
                if next_len > max_len {
                    continue;
                }
                let next_label = WordPair::new(
                    label.left.concat(&arc.label.left),
                    arc.label.right.concat(&label.right),
                );
                let next = (
                    arc.to,
                    group.multiply(left, arc_left)?,
                    group.multiply(arc_right, right)?,
                    next_label.left.len(),
                );
                match best.get(&next) {
                    Some((len, _)) if *len < next_len => continue,
                    Some((len, existing)) if *len == next_len && *existing <= next_label => continue,
                    _ => {}
                }
                best.insert(next.clone(), (next_len, next_label));
                if best.len() > bound.max_words {
                    return Err(OracleError::BoundExceeded {
                        max_words: bound.max_words,
                    });
                }
                buckets[next_len].push(next);
            }
        }
        if let Some(witness) = failing {
            return Ok(OracleVerdict::Fails { witness });
        }
    }
    Ok(OracleVerdict::HoldsAtBound)
}

/// Does `nfa` accept `word`? Plain subset simulation.
pub fn nfa_accepts(nfa: &Nfa, word: &Word) -> bool {
    let mut current: BTreeSet<usize> = [nfa.start()].into();
    for &letter in word.letters() {
        current = nfa
            .transitions()
            .iter()
            .filter(|t| t.letter == letter && current.contains(&t.from))
            .map(|t| t.to)
            .collect();
        if current.is_empty() {
            return false;
        }
    }
    current.iter().any(|&s| nfa.is_final(s))
}

/// Does `grammar` generate `word`? Fills `derives[A][i][j]` (does `A`
/// derive `word[i..j]`) by increasing span, iterating each span to a fixed
/// point so that chains of productions without terminals are followed.
pub fn grammar_generates(grammar: &LinearGrammar, word: &Word) -> bool {
    let letters = word.letters();
    let len = letters.len();
    let n = grammar.nonterminal_count();
    // derives[a][i][j] for span word[i..j]
    let mut derives = vec![vec![vec![false; len + 1]; len + 1]; n + 1];
    for span in 0..=len {
        for start in 0..=len - span {
            let end = start + span;
            let piece = &letters[start..end];
            loop {
                let mut changed = false;
                for p in grammar.productions() {
                    let a = p.lhs();
                    if derives[a][start][end] {
                        continue;
                    }
                    let ok = match p {
                        Production::Terminal { alpha, .. } => alpha.letters() == piece,
                        Production::Chain { alpha, rhs, beta, .. } => {
                            let (al, bl) = (alpha.len(), beta.len());
                            al + bl <= span
                                && piece[..al] == *alpha.letters()
                                && piece[span - bl..] == *beta.letters()
                                && derives[*rhs][start + al][end - bl]
                        }
                    };
                    if ok {
                        derives[a][start][end] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
    derives[1][0][len]
}
