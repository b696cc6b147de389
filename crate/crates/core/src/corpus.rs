//! Seeded random automata and grammars, plus a fixed set of backends used by
//! tests, benchmarks and the `gen-corpus` command.

use rand::Rng;

use crate::group::GroupBackend;
use crate::linear::{LinearGrammar, Production};
use crate::regular::Nfa;
use crate::word::{Letter, Word};

/// The backends exercised by the randomized corpus: F1, F2, Z², Z2, Z3, Z5, S3.
pub fn standard_backends() -> Vec<GroupBackend> {
    vec![
        GroupBackend::free(1).expect("rank 1"),
        GroupBackend::free(2).expect("rank 2"),
        GroupBackend::free_abelian(2).expect("rank 2"),
        GroupBackend::cyclic(2).expect("order 2"),
        GroupBackend::cyclic(3).expect("order 3"),
        GroupBackend::cyclic(5).expect("order 5"),
        GroupBackend::symmetric(3).expect("S3"),
    ]
}

fn random_letter<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Letter {
    let g = rng.gen_range(1..=rank) as Letter;
    if rng.gen_bool(0.5) {
        g
    } else {
        -g
    }
}

fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| random_letter(rng, rank)).collect::<Vec<_>>())
}

/// A random NFA with `states` states over `rank` generators.
///
/// Roughly `density * states` transitions are drawn, and at least one final
/// state is chosen.
pub fn random_nfa<R: Rng + ?Sized>(rng: &mut R, states: usize, rank: usize, density: f64) -> Nfa {
    let states = states.max(1);
    let count = ((states as f64) * density).round().max(1.0) as usize;
    let transitions: Vec<_> = (0..count)
        .map(|_| {
            (
                rng.gen_range(1..=states),
                random_letter(rng, rank),
                rng.gen_range(1..=states),
            )
        })
        .collect();
    let mut finals: Vec<usize> = (1..=states).filter(|_| rng.gen_bool(0.3)).collect();
    if finals.is_empty() {
        finals.push(rng.gen_range(1..=states));
    }
    Nfa::new(states, rank, transitions, finals).expect("generated automaton is valid")
}

/// A random linear grammar with `nonterminals` nonterminals. Every
/// production emits at most `max_body` letters, split at random between
/// its two sides.
pub fn random_grammar<R: Rng + ?Sized>(
    rng: &mut R,
    nonterminals: usize,
    rank: usize,
    max_body: usize,
) -> LinearGrammar {
    let n = nonterminals.max(1);
    let chains = rng.gen_range(n..=2 * n + 1);
    let mut productions: Vec<Production> = (0..chains)
        .map(|_| {
            let body = random_word(rng, rank, max_body);
            let cut = rng.gen_range(0..=body.len());
            let (alpha, beta) = body.letters().split_at(cut);
            Production::Chain {
                lhs: rng.gen_range(1..=n),
                alpha: Word::from_letters(alpha.to_vec()),
                rhs: rng.gen_range(1..=n),
                beta: Word::from_letters(beta.to_vec()),
            }
        })
        .collect();
    let terminals = rng.gen_range(1..=n);
    productions.extend((0..terminals).map(|_| Production::Terminal {
        lhs: rng.gen_range(1..=n),
        alpha: random_word(rng, rank, max_body),
    }));
    LinearGrammar::new(n, rank, productions).expect("generated grammar is valid")
}
