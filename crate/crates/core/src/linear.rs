//! Inclusion of a linear language `L(Γ)` in the group language of `G`.
//!
//! A production `A_i → α A_j β` becomes an arc `i → j` labelled by the pair
//! `(α, β)`, and `A_i → α` an arc into the sink `n + 1` labelled `(α, ε)`.
//! Along a walk the pair labels compose with `⋄`, so a walk from `A_1` to
//! the sink spells the generated word `left · right`. Pair label sets are
//! closed under `g[i][j] ∪= g[i][k] ⋄ g[k][j]`, pivots `k = 1..n`.

use std::collections::BTreeSet;

use crate::error::{CheckError, LanguageError, SemiringError};
use crate::group::GroupBackend;
use crate::matrix::LabelMatrix;
use crate::regular::{check_rank, first_counterexample, useful_vertices, ClosureError, Nfa};
use crate::semiring::{PairSet, SetAlgebra, WordPair};
use crate::verdict::{CheckConfig, CheckOutcome, InclusionVerdict, OpCounters, ViolationReason};
use crate::word::{GeneratorAlphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Production {
    /// `A_lhs → alpha A_rhs beta`
    Chain {
        lhs: usize,
        alpha: Word,
        rhs: usize,
        beta: Word,
    },
    /// `A_lhs → alpha`
    Terminal { lhs: usize, alpha: Word },
}

impl Production {
    pub fn lhs(&self) -> usize {
        match self {
            Production::Chain { lhs, .. } | Production::Terminal { lhs, .. } => *lhs,
        }
    }

    /// Number of terminal letters the production emits.
    pub fn emitted_len(&self) -> usize {
        match self {
            Production::Chain { alpha, beta, .. } => alpha.len() + beta.len(),
            Production::Terminal { alpha, .. } => alpha.len(),
        }
    }
}

/// A linear grammar with nonterminals `A_1..A_n`; `A_1` is the start symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearGrammar {
    nonterminals: usize,
    alphabet: GeneratorAlphabet,
    productions: Vec<Production>,
}

/// An arc of the grammar diagram; `to == n + 1` is the sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramArc {
    pub from: usize,
    pub to: usize,
    pub label: WordPair,
}

impl LinearGrammar {
    pub fn new(
        nonterminals: usize,
        rank: usize,
        productions: impl IntoIterator<Item = Production>,
    ) -> Result<Self, LanguageError> {
        if nonterminals == 0 {
            return Err(LanguageError::NoNonterminals);
        }
        let alphabet = GeneratorAlphabet::new(rank)?;
        let in_range = |index: usize| {
            if (1..=nonterminals).contains(&index) {
                Ok(())
            } else {
                Err(LanguageError::NonterminalOutOfRange {
                    index,
                    count: nonterminals,
                })
            }
        };
        let mut prods = Vec::new();
        for p in productions {
            match &p {
                Production::Chain { lhs, alpha, rhs, beta } => {
                    in_range(*lhs)?;
                    in_range(*rhs)?;
                    alphabet.check_word(alpha)?;
                    alphabet.check_word(beta)?;
                }
                Production::Terminal { lhs, alpha } => {
                    in_range(*lhs)?;
                    alphabet.check_word(alpha)?;
                }
            }
            prods.push(p);
        }
        prods.sort();
        prods.dedup();
        Ok(Self {
            nonterminals,
            alphabet,
            productions: prods,
        })
    }

    pub fn nonterminal_count(&self) -> usize {
        self.nonterminals
    }

    pub fn sink(&self) -> usize {
        self.nonterminals + 1
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn alphabet(&self) -> GeneratorAlphabet {
        self.alphabet
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Largest `|α| + |β|` over all productions (0 without productions).
    pub fn max_production_len(&self) -> usize {
        self.productions.iter().map(Production::emitted_len).max().unwrap_or(0)
    }

    /// Arcs of the grammar diagram, one per production.
    pub fn diagram_arcs(&self) -> Vec<DiagramArc> {
        self.productions
            .iter()
            .map(|p| match p {
                Production::Chain { lhs, alpha, rhs, beta } => DiagramArc {
                    from: *lhs,
                    to: *rhs,
                    label: WordPair::new(alpha.clone(), beta.clone()),
                },
                Production::Terminal { lhs, alpha } => DiagramArc {
                    from: *lhs,
                    to: self.sink(),
                    label: WordPair::new(alpha.clone(), Word::empty()),
                },
            })
            .collect()
    }
}

/// Nonterminals reachable from `A_1` in the diagram that can reach the sink.
pub fn useful_nonterminals(grammar: &LinearGrammar) -> BTreeSet<usize> {
    let edges: Vec<_> = grammar.diagram_arcs().iter().map(|a| (a.from, a.to)).collect();
    let mut useful = useful_vertices(grammar.sink(), 1, [grammar.sink()], &edges);
    useful.remove(&grammar.sink());
    useful
}

/// Level-0 pair matrix of size `n × (n + 1)`; column `n + 1` is the sink.
pub fn build_grammar_matrix(grammar: &LinearGrammar, group: &GroupBackend) -> Result<LabelMatrix<PairSet>, CheckError> {
    check_rank(grammar.rank(), group)?;
    let useful = useful_nonterminals(grammar);
    let n = grammar.nonterminal_count();
    let mut mat = LabelMatrix::<PairSet>::new(n, n + 1);
    for arc in grammar.diagram_arcs() {
        if !useful.contains(&arc.from) || !(arc.to == grammar.sink() || useful.contains(&arc.to)) {
            continue;
        }
        let left = group.canonicalize(&arc.label.left)?;
        let right = group.canonicalize(&arc.label.right)?;
        mat.get_mut(arc.from, arc.to).insert(left, right, arc.label);
    }
    Ok(mat)
}

/// Applies pivots `k = 1..n` (never the sink) under `∪` and `⋄`.
pub fn closure_pairs(
    mut mat: LabelMatrix<PairSet>,
    algebra: &SetAlgebra<'_>,
    counters: &mut OpCounters,
) -> Result<LabelMatrix<PairSet>, ClosureError> {
    let n = mat.rows();
    assert_eq!(mat.cols(), n + 1, "grammar matrix has a sink column");
    assert_eq!(mat.level(), 0, "closure starts from level 0");
    let at = |cell: (usize, usize)| {
        move |e: SemiringError| match e {
            SemiringError::CapExceeded { cardinality } => ClosureError::CapExceeded { cell, cardinality },
            SemiringError::Group(g) => ClosureError::Check(g.into()),
        }
    };
    for k in 1..=n {
        let prev = mat.clone();
        for i in 1..=n {
            let left = prev.get(i, k);
            if left.is_empty() {
                continue;
            }
            for j in 1..=n + 1 {
                let right = prev.get(k, j);
                if right.is_empty() {
                    continue;
                }
                let through = algebra.diamond(left, right).map_err(at((i, j)))?;
                counters.diamonds += 1;
                let merged = algebra.union_pairs(mat.get(i, j), &through).map_err(at((i, j)))?;
                counters.unions += 1;
                mat.set(i, j, merged);
            }
        }
        mat.set_level(k);
    }
    Ok(mat)
}

fn outcome(verdict: InclusionVerdict, counters: OpCounters) -> Result<CheckOutcome, CheckError> {
    Ok(CheckOutcome { verdict, counters })
}

/// Decides `L(grammar) ⊆ 𝔏(group)`.
///
/// The cycle test at each nonterminal `A_i` uses [`SetAlgebra::triple_paired`]:
/// the left and right parts of a cycle label are taken from the same pair.
/// With `config.literal_omega10` the independent-projection triple is used
/// instead; it can reject grammars whose language is included, in which
/// case the verdict is [`InclusionVerdict::LiteralTripleViolation`].
pub fn check_linear_inclusion(
    grammar: &LinearGrammar,
    group: &GroupBackend,
    config: &CheckConfig,
) -> Result<CheckOutcome, CheckError> {
    check_rank(grammar.rank(), group)?;
    let mut counters = OpCounters::default();
    let useful = useful_nonterminals(grammar);
    if !useful.contains(&1) {
        return outcome(InclusionVerdict::Holds, counters);
    }
    let algebra = SetAlgebra::new(group, config.set_cap);
    let sink = grammar.sink();
    let mat = match closure_pairs(build_grammar_matrix(grammar, group)?, &algebra, &mut counters) {
        Ok(m) => m,
        Err(ClosureError::CapExceeded { cell, cardinality }) => {
            return outcome(InclusionVerdict::ResourceExceeded { cell, cardinality }, counters)
        }
        Err(ClosureError::Check(e)) => return Err(e),
        Err(ClosureError::SingletonViolation { .. }) => unreachable!("pair closure never fails early"),
    };

    // routes from the start straight to the sink
    let finishing = mat.get(1, sink);
    let bad = finishing
        .iter()
        .filter(|(l, r, _)| group.multiply(l, r).map(|d| !group.is_identity(&d)).unwrap_or(true))
        .min_by(|a, b| a.2.cmp(b.2));
    if let Some((_, _, pair)) = bad {
        let witness = pair.joined();
        debug_assert!(!group.word_in_group_language(&witness)?);
        return outcome(
            InclusionVerdict::Fails {
                witness,
                reason: ViolationReason::SimplePathViolation,
            },
            counters,
        );
    }

    for &i in &useful {
        let entry = mat.get(1, i);
        let cycles = mat.get(i, i);
        let exits = mat.get(i, sink);
        if entry.is_empty() || cycles.is_empty() || exits.is_empty() {
            continue;
        }
        let exit_words = match algebra.proj_d(exits) {
            Ok(d) => d,
            Err(SemiringError::Group(e)) => return Err(e.into()),
            Err(SemiringError::CapExceeded { .. }) => unreachable!("projections never grow a set"),
        };
        let triple = if config.literal_omega10 {
            algebra.triple_literal(&algebra.proj_l(cycles), &exit_words, &algebra.proj_r(cycles))
        } else {
            algebra.triple_paired(cycles, &exit_words)
        };
        counters.triples += 1;
        let triple = match triple {
            Ok(t) => t,
            Err(SemiringError::CapExceeded { cardinality }) => {
                return outcome(InclusionVerdict::ResourceExceeded { cell: (i, i), cardinality }, counters)
            }
            Err(SemiringError::Group(e)) => return Err(e.into()),
        };
        if triple.is_unit(group) {
            continue;
        }
        // a genuine violation always has a paired witness
        if let Some((cycle, exit)) = paired_violation(group, cycles, exits)? {
            let prefix = if i == 1 {
                WordPair::default()
            } else {
                entry.best().expect("nonempty").witness
            };
            let with_cycle = Word::concat_all([&prefix.left, &cycle.left, &exit.left, &exit.right, &cycle.right, &prefix.right]);
            let without = Word::concat_all([&prefix.left, &exit.left, &exit.right, &prefix.right]);
            let witness = first_counterexample(group, &[with_cycle, without])?;
            return outcome(
                InclusionVerdict::Fails {
                    witness,
                    reason: ViolationReason::ConjugateViolation { state: i },
                },
                counters,
            );
        }
        debug_assert!(config.literal_omega10, "paired triple disagrees with its own witness search");
        let element_witness = triple
            .best_non_identity(group)
            .expect("triple is not {e}")
            .witness;
        return outcome(
            InclusionVerdict::LiteralTripleViolation { state: i, element_witness },
            counters,
        );
    }
    outcome(InclusionVerdict::Holds, counters)
}

/// The smallest `(cycle, exit)` witness pair with `u v w v⁻¹ ≠ e`, where
/// `(u, w)` is the cycle label and `v` the product of the exit label.
fn paired_violation(
    group: &GroupBackend,
    cycles: &PairSet,
    exits: &PairSet,
) -> Result<Option<(WordPair, WordPair)>, CheckError> {
    let mut best: Option<(WordPair, WordPair)> = None;
    for (el, er, ew) in exits.iter() {
        let v = group.multiply(el, er)?;
        let v_inv = group.invert(&v)?;
        for (u, w, cw) in cycles.iter() {
            let z = group.multiply(&group.multiply(&group.multiply(u, &v)?, w)?, &v_inv)?;
            if group.is_identity(&z) {
                continue;
            }
            let candidate = (cw.clone(), ew.clone());
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    Ok(best)
}

/// Right-linear grammar generating the language of `nfa`: `A_i → x A_j` per
/// transition and `A_i → ε` per final state.
pub fn nfa_to_right_linear(nfa: &Nfa) -> LinearGrammar {
    let chains = nfa.transitions().iter().map(|t| Production::Chain {
        lhs: t.from,
        alpha: Word::single(t.letter),
        rhs: t.to,
        beta: Word::empty(),
    });
    let terminals = nfa.finals().iter().map(|&f| Production::Terminal {
        lhs: f,
        alpha: Word::empty(),
    });
    LinearGrammar::new(nfa.state_count(), nfa.rank(), chains.chain(terminals).collect::<Vec<_>>())
        .expect("automaton is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::semiring::DEFAULT_SET_CAP;
    use crate::word::Letter;

    fn w(letters: &[Letter]) -> Word {
        Word::from_letters(letters.to_vec())
    }

    fn chain(lhs: usize, alpha: &[Letter], rhs: usize, beta: &[Letter]) -> Production {
        Production::Chain {
            lhs,
            alpha: w(alpha),
            rhs,
            beta: w(beta),
        }
    }

    fn term(lhs: usize, alpha: &[Letter]) -> Production {
        Production::Terminal { lhs, alpha: w(alpha) }
    }

    fn pair(g: &GroupBackend, l: &[Letter], r: &[Letter]) -> (GroupElement, GroupElement) {
        (g.canonicalize(&w(l)).unwrap(), g.canonicalize(&w(r)).unwrap())
    }

    fn cell_pairs(set: &PairSet) -> Vec<(GroupElement, GroupElement)> {
        set.iter().map(|(l, r, _)| (l.clone(), r.clone())).collect()
    }

    #[test]
    fn useful_nonterminal_examples() {
        let eps = LinearGrammar::new(1, 1, [term(1, &[])]).unwrap();
        assert_eq!(useful_nonterminals(&eps), [1].into());
        let two = LinearGrammar::new(2, 1, [chain(1, &[1], 2, &[]), term(2, &[])]).unwrap();
        assert_eq!(useful_nonterminals(&two), [1, 2].into());
        let dead = LinearGrammar::new(2, 1, [term(1, &[]), chain(2, &[1], 2, &[])]).unwrap();
        assert_eq!(useful_nonterminals(&dead), [1].into());
    }

    #[test]
    fn grammar_validation() {
        assert_eq!(LinearGrammar::new(0, 1, []), Err(LanguageError::NoNonterminals));
        assert!(LinearGrammar::new(1, 1, [chain(1, &[], 2, &[])]).is_err());
        assert!(LinearGrammar::new(1, 1, [term(1, &[2])]).is_err());
        assert!(LinearGrammar::new(1, 0, [term(1, &[])]).is_err());
    }

    #[test]
    fn grammar_matrix_examples() {
        let f1 = GroupBackend::free(1).unwrap();
        let g = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[-1]), term(1, &[])]).unwrap();
        let m = build_grammar_matrix(&g, &f1).unwrap();
        assert_eq!(cell_pairs(m.get(1, 1)), vec![pair(&f1, &[1], &[-1])]);
        assert_eq!(cell_pairs(m.get(1, 2)), vec![pair(&f1, &[], &[])]);
        assert_eq!(m.get(1, 2).best().unwrap().witness, WordPair::default());

        let g = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[-1]), chain(1, &[1, 1], 1, &[-1, -1])]).unwrap();
        // no terminal production: nothing is useful
        assert!(build_grammar_matrix(&g, &f1).unwrap().get(1, 1).is_empty());
        let g = LinearGrammar::new(
            1,
            1,
            [chain(1, &[1], 1, &[-1]), chain(1, &[1, 1], 1, &[-1, -1]), term(1, &[])],
        )
        .unwrap();
        let m = build_grammar_matrix(&g, &f1).unwrap();
        assert_eq!(m.get(1, 1).len(), 2);
    }

    #[test]
    fn closure_pairs_examples() {
        let f1 = GroupBackend::free(1).unwrap();
        let alg = SetAlgebra::new(&f1, DEFAULT_SET_CAP);
        let mut counters = OpCounters::default();

        let g = LinearGrammar::new(2, 1, [chain(1, &[1], 2, &[-1]), term(2, &[])]).unwrap();
        let m = closure_pairs(build_grammar_matrix(&g, &f1).unwrap(), &alg, &mut counters).unwrap();
        assert_eq!(cell_pairs(m.get(1, 3)), vec![pair(&f1, &[1], &[-1])]);

        // one application of the recurrence: {(x,X)} ∪ {(x,X)} ⋄ {(x,X)}
        let g = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[-1]), term(1, &[])]).unwrap();
        let m = closure_pairs(build_grammar_matrix(&g, &f1).unwrap(), &alg, &mut counters).unwrap();
        let mut expected = vec![pair(&f1, &[1], &[-1]), pair(&f1, &[1, 1], &[-1, -1])];
        expected.sort();
        assert_eq!(cell_pairs(m.get(1, 1)), expected);

        let empty = LabelMatrix::<PairSet>::new(2, 3);
        let before = counters;
        let m = closure_pairs(empty.clone(), &alg, &mut counters).unwrap();
        assert!(m.iter().all(|(_, c)| c.is_empty()));
        assert_eq!(counters, before);
    }

    fn check(g: &LinearGrammar, group: &GroupBackend) -> CheckOutcome {
        check_linear_inclusion(g, group, &CheckConfig::default()).unwrap()
    }

    #[test]
    fn check_examples() {
        let f1 = GroupBackend::free(1).unwrap();
        let balanced = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[-1]), term(1, &[])]).unwrap();
        assert_eq!(check(&balanced, &f1).verdict, InclusionVerdict::Holds);

        let squares = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[1]), term(1, &[])]).unwrap();
        assert_eq!(check(&squares, &GroupBackend::cyclic(2).unwrap()).verdict, InclusionVerdict::Holds);
        assert_eq!(
            check(&squares, &GroupBackend::cyclic(3).unwrap()).verdict,
            InclusionVerdict::Fails {
                witness: w(&[1, 1]),
                reason: ViolationReason::SimplePathViolation
            }
        );
    }

    #[test]
    fn paired_triple_accepts_what_literal_rejects() {
        let f1 = GroupBackend::free(1).unwrap();
        let g = LinearGrammar::new(
            1,
            1,
            [chain(1, &[1], 1, &[-1]), chain(1, &[1, 1], 1, &[-1, -1]), term(1, &[])],
        )
        .unwrap();
        assert_eq!(check(&g, &f1).verdict, InclusionVerdict::Holds);

        let literal = CheckConfig {
            literal_omega10: true,
            ..CheckConfig::default()
        };
        let out = check_linear_inclusion(&g, &f1, &literal).unwrap();
        assert!(
            matches!(out.verdict, InclusionVerdict::LiteralTripleViolation { state: 1, .. }),
            "{:?}",
            out.verdict
        );
    }

    #[test]
    fn simple_path_violation_witness() {
        let c3 = GroupBackend::cyclic(3).unwrap();
        let g = LinearGrammar::new(2, 1, [chain(1, &[1], 2, &[1]), term(2, &[]), term(1, &[])]).unwrap();
        assert_eq!(
            check(&g, &c3).verdict,
            InclusionVerdict::Fails {
                witness: w(&[1, 1]),
                reason: ViolationReason::SimplePathViolation
            }
        );
    }

    #[test]
    fn epsilon_only_and_empty_languages_hold() {
        let f2 = GroupBackend::free(2).unwrap();
        let eps = LinearGrammar::new(1, 2, [term(1, &[])]).unwrap();
        assert_eq!(check(&eps, &f2).verdict, InclusionVerdict::Holds);
        let none = LinearGrammar::new(1, 2, [chain(1, &[1], 1, &[])]).unwrap();
        let out = check(&none, &f2);
        assert_eq!(out.verdict, InclusionVerdict::Holds);
        assert_eq!(out.counters, OpCounters::default());
    }

    #[test]
    fn small_cap_reports_resource_exceeded() {
        let f1 = GroupBackend::free(1).unwrap();
        let g = LinearGrammar::new(
            1,
            1,
            [chain(1, &[1], 1, &[-1]), chain(1, &[1, 1], 1, &[-1, -1]), term(1, &[])],
        )
        .unwrap();
        let config = CheckConfig {
            set_cap: 2,
            ..CheckConfig::default()
        };
        let out = check_linear_inclusion(&g, &f1, &config).unwrap();
        // level 1: {(x,X),(x²,X²)} ∪ their ⋄-products (x²,X²),(x³,X³),(x⁴,X⁴)
        assert!(
            matches!(out.verdict, InclusionVerdict::ResourceExceeded { cell: (1, 1), .. }),
            "{:?}",
            out.verdict
        );
    }

    #[test]
    fn right_linear_conversion() {
        let chain_nfa = Nfa::new(2, 1, [(1, 1, 2)], [2]).unwrap();
        let g = nfa_to_right_linear(&chain_nfa);
        assert_eq!(g.productions(), &[chain(1, &[1], 2, &[]), term(2, &[])]);

        let eps = Nfa::new(1, 1, [], [1]).unwrap();
        assert_eq!(nfa_to_right_linear(&eps).productions(), &[term(1, &[])]);

        let lp = Nfa::new(1, 1, [(1, 1, 1)], [1]).unwrap();
        assert_eq!(nfa_to_right_linear(&lp).productions(), &[chain(1, &[1], 1, &[]), term(1, &[])]);
    }

    #[test]
    fn holds_with_multi_pair_cycle_cell() {
        let f1 = GroupBackend::free(1).unwrap();
        let g = LinearGrammar::new(
            1,
            1,
            [chain(1, &[1], 1, &[-1]), chain(1, &[1, 1], 1, &[-1, -1]), term(1, &[])],
        )
        .unwrap();
        let alg = SetAlgebra::new(&f1, DEFAULT_SET_CAP);
        let mut counters = OpCounters::default();
        let m = closure_pairs(build_grammar_matrix(&g, &f1).unwrap(), &alg, &mut counters).unwrap();
        assert!(m.get(1, 1).len() >= 2);
        assert_eq!(check(&g, &f1).verdict, InclusionVerdict::Holds);
    }
}
