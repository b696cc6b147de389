//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grouplang::corpus::{random_grammar, random_nfa, standard_backends};
use grouplang::oracle::{grammar_generates, nfa_accepts};
use grouplang::{
    brute_force_inclusion, check_linear_inclusion, check_regular_inclusion, counterexample_bound_linear, counterexample_bound_regular,
    enumerate_grammar_words, enumerate_nfa_words, nfa_to_right_linear, search_grammar, search_nfa, CheckConfig,
    CheckError, EnumerationBound, GroupBackend, InclusionVerdict, LinearGrammar, Nfa, OpCounters, OracleError, OracleVerdict,
    Production, ViolationReason, Word,
};

const REGULAR_SEEDS: u64 = 1000;
const LINEAR_SEEDS: u64 = 500;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("criterion {id} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn w(letters: &[i32]) -> Word {
    Word::from_letters(letters.to_vec())
}

fn chain(lhs: usize, alpha: &[i32], rhs: usize, beta: &[i32]) -> Production {
    Production::Chain {
        lhs,
        alpha: w(alpha),
        rhs,
        beta: w(beta),
    }
}

fn term(lhs: usize, alpha: &[i32]) -> Production {
    Production::Terminal { lhs, alpha: w(alpha) }
}

fn backends() -> Vec<GroupBackend> {
    standard_backends()
}

fn is_finite(g: &GroupBackend) -> bool {
    g.order().is_some()
}

/// Two languages per seed, one per alphabet size, so that each seed meets
/// every backend.
fn regular_corpus() -> Vec<(Nfa, usize)> {
    let groups = backends();
    let mut out = Vec::new();
    for seed in 0..REGULAR_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0000 + seed);
        let n = rng.gen_range(1..=5);
        let density = rng.gen_range(0.5..3.0);
        let by_rank = [
            random_nfa(&mut rng, n, 1, density),
            random_nfa(&mut rng, n, 2, density),
        ];
        for (gi, g) in groups.iter().enumerate() {
            out.push((by_rank[g.rank() - 1].clone(), gi));
        }
    }
    out
}

fn linear_corpus() -> Vec<(LinearGrammar, usize)> {
    let groups = backends();
    let mut out = Vec::new();
    for seed in 0..LINEAR_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6EA0_0000 + seed);
        let n = rng.gen_range(1..=4);
        let body = rng.gen_range(1..=2);
        let by_rank = [
            random_grammar(&mut rng, n, 1, body),
            random_grammar(&mut rng, n, 2, body),
        ];
        for (gi, g) in groups.iter().enumerate() {
            out.push((by_rank[g.rank() - 1].clone(), gi));
        }
    }
    out
}

#[derive(Default)]
struct Tally {
    cases: usize,
    holds: usize,
    agree: usize,
    mismatches: Vec<String>,
    resource: usize,
    resource_finite: usize,
    finite_cases: usize,
    errors: Vec<String>,
    witnesses_checked: usize,
    bad_witnesses: Vec<String>,
    counter_violations: Vec<String>,
    /// Instances also decided by filtering the plain word enumeration.
    streamed: usize,
}

/// Word streams longer than this are left to the configuration search.
const STREAM_LIMIT: usize = 2_000;

fn same_oracle_verdict(a: &OracleVerdict, b: &OracleVerdict) -> bool {
    // both searches return the shortlex-first counterexample
    a == b
}

fn verdict_kind(v: &InclusionVerdict) -> &'static str {
    match v {
        InclusionVerdict::Holds => "holds",
        InclusionVerdict::Fails { .. } => "fails",
        InclusionVerdict::ResourceExceeded { .. } => "resource",
        InclusionVerdict::LiteralTripleViolation { .. } => "literal triple violation",
    }
}

fn agrees(check: &InclusionVerdict, oracle: &Result<OracleVerdict, OracleError>) -> bool {
    matches!(
        (check, oracle),
        (InclusionVerdict::Holds, Ok(OracleVerdict::HoldsAtBound)) | (InclusionVerdict::Fails { .. }, Ok(OracleVerdict::Fails { .. }))
    )
}

fn regular_counters_ok(n: u64, c: &OpCounters) -> bool {
    c.unions <= n * n * n && c.products <= n * n * n && c.stars <= n * n && c.diamonds == 0 && c.triples == 0
}

fn linear_counters_ok(n: u64, c: &OpCounters) -> bool {
    let cube = n * n * (n + 1);
    c.unions <= cube && c.diamonds <= cube && c.triples <= n && c.products == 0 && c.stars == 0
}

fn check_nfa_witness(tally: &mut Tally, label: &str, nfa: &Nfa, g: &GroupBackend, v: &InclusionVerdict) {
    if let InclusionVerdict::Fails { witness, .. } = v {
        tally.witnesses_checked += 1;
        let ok = nfa_accepts(nfa, witness) && !g.word_in_group_language(witness).unwrap_or(true);
        if !ok {
            tally.bad_witnesses.push(format!("{label}: {witness}"));
        }
    }
}

fn check_grammar_witness(tally: &mut Tally, label: &str, gr: &LinearGrammar, g: &GroupBackend, v: &InclusionVerdict) {
    if let InclusionVerdict::Fails { witness, .. } = v {
        tally.witnesses_checked += 1;
        let ok = grammar_generates(gr, witness) && !g.word_in_group_language(witness).unwrap_or(true);
        if !ok {
            tally.bad_witnesses.push(format!("{label}: {witness}"));
        }
    }
}

struct RegularRun {
    main: Tally,
    cross: Tally,
    /// Time spent in the closure checks and the oracle at 3n.
    elapsed: Duration,
}

fn run_regular() -> RegularRun {
    let groups = backends();
    let corpus = regular_corpus();
    let mut main = Tally::default();
    let mut cross = Tally::default();
    let mut elapsed = Duration::ZERO;
    for (idx, (nfa, gi)) in corpus.iter().enumerate() {
        let g = &groups[*gi];
        let label = format!("nfa #{idx} over {}", g.name());
        let started = Instant::now();
        let n = nfa.state_count() as u64;
        main.cases += 1;
        let outcome = match check_regular_inclusion(nfa, g, &CheckConfig::default()) {
            Ok(o) => o,
            Err(e) => {
                main.errors.push(format!("{label}: {e}"));
                continue;
            }
        };
        if !regular_counters_ok(n, &outcome.counters) {
            main.counter_violations.push(format!("{label}: {:?}", outcome.counters));
        }
        // the exhaustive closure sets the worst-case counts
        let full = CheckConfig {
            early_fail: false,
            ..CheckConfig::default()
        };
        match check_regular_inclusion(nfa, g, &full) {
            Ok(o) => {
                if !regular_counters_ok(n, &o.counters) {
                    main.counter_violations.push(format!("{label} (no early fail): {:?}", o.counters));
                }
                if o.verdict.is_holds() != outcome.verdict.is_holds() {
                    main.mismatches.push(format!("{label}: early fail changes the verdict"));
                }
                check_nfa_witness(&mut main, &label, nfa, g, &o.verdict);
            }
            Err(e) => main.errors.push(format!("{label} (no early fail): {e}")),
        }
        check_nfa_witness(&mut main, &label, nfa, g, &outcome.verdict);
        main.holds += usize::from(outcome.verdict.is_holds());
        if matches!(outcome.verdict, InclusionVerdict::ResourceExceeded { .. }) {
            main.resource += 1;
        }

        let length = counterexample_bound_regular(nfa);
        let oracle = search_nfa(nfa, g, EnumerationBound::with_length(length));
        elapsed += started.elapsed();
        if let Ok(words) = enumerate_nfa_words(nfa, EnumerationBound::new(length, STREAM_LIMIT).unwrap()) {
            main.streamed += 1;
            let streamed = brute_force_inclusion(words, g).expect("ranks match");
            if !oracle.as_ref().is_ok_and(|o| same_oracle_verdict(o, &streamed)) {
                main.mismatches.push(format!("{label}: search {oracle:?} vs word stream {streamed:?}"));
            }
        }
        let agree = agrees(&outcome.verdict, &oracle);
        if agree {
            main.agree += 1;
        } else {
            main.mismatches.push(format!(
                "{label}: check {} vs oracle {:?}",
                verdict_kind(&outcome.verdict),
                oracle
            ));
        }

        let grammar = nfa_to_right_linear(nfa);
        cross.cases += 1;
        match check_linear_inclusion(&grammar, g, &CheckConfig::default()) {
            Ok(lin) => {
                if !linear_counters_ok(grammar.nonterminal_count() as u64, &lin.counters) {
                    cross.counter_violations.push(format!("{label}: {:?}", lin.counters));
                }
                check_grammar_witness(&mut cross, &label, &grammar, g, &lin.verdict);
                if verdict_kind(&lin.verdict) == verdict_kind(&outcome.verdict) {
                    cross.agree += 1;
                } else {
                    cross.mismatches.push(format!(
                        "{label}: regular {} vs linear {}",
                        verdict_kind(&outcome.verdict),
                        verdict_kind(&lin.verdict)
                    ));
                }
            }
            Err(e) => cross.errors.push(format!("{label}: {e}")),
        }
    }
    RegularRun { main, cross, elapsed }
}

struct LinearRun {
    tally: Tally,
    /// Fails instances whose shortest counterexample exceeds the derived bound.
    beyond_bound: Vec<String>,
    longest_shortest: (usize, usize),
}

fn run_linear() -> LinearRun {
    let groups = backends();
    let corpus = linear_corpus();
    let mut t = Tally::default();
    let mut beyond_bound = Vec::new();
    let mut longest_shortest = (0, 0);
    for (idx, (gr, gi)) in corpus.iter().enumerate() {
        let g = &groups[*gi];
        let label = format!("grammar #{idx} over {}", g.name());
        t.cases += 1;
        if is_finite(g) {
            t.finite_cases += 1;
        }
        let outcome = match check_linear_inclusion(gr, g, &CheckConfig::default()) {
            Ok(o) => o,
            Err(e) => {
                t.errors.push(format!("{label}: {e}"));
                continue;
            }
        };
        if !linear_counters_ok(gr.nonterminal_count() as u64, &outcome.counters) {
            t.counter_violations.push(format!("{label}: {:?}", outcome.counters));
        }
        check_grammar_witness(&mut t, &label, gr, g, &outcome.verdict);
        t.holds += usize::from(outcome.verdict.is_holds());
        if matches!(outcome.verdict, InclusionVerdict::ResourceExceeded { .. }) {
            t.resource += 1;
            if is_finite(g) {
                t.resource_finite += 1;
            }
            continue;
        }
        let derived = counterexample_bound_linear(gr);
        let oracle = search_grammar(gr, g, EnumerationBound::with_length(derived));
        if let Ok(words) = enumerate_grammar_words(gr, EnumerationBound::new(derived.max(1), STREAM_LIMIT).unwrap()) {
            t.streamed += 1;
            let streamed = brute_force_inclusion(words, g).expect("ranks match");
            if !oracle.as_ref().is_ok_and(|o| same_oracle_verdict(o, &streamed)) {
                t.mismatches.push(format!("{label}: search {oracle:?} vs word stream {streamed:?}"));
            }
        }
        let agree = agrees(&outcome.verdict, &oracle);
        if agree {
            t.agree += 1;
        } else {
            t.mismatches.push(format!(
                "{label}: check {} vs oracle {:?} at bound {derived}",
                verdict_kind(&outcome.verdict),
                oracle
            ));
        }
        if let InclusionVerdict::Fails { witness, .. } = &outcome.verdict {
            // the shortest counterexample, searched well past the bound
            let wide = EnumerationBound::with_length(derived.max(witness.len()));
            if let Ok(OracleVerdict::Fails { witness: shortest }) = search_grammar(gr, g, wide) {
                if shortest.len() > longest_shortest.0 {
                    longest_shortest = (shortest.len(), derived);
                }
                if shortest.len() > derived {
                    beyond_bound.push(format!("{label}: shortest {} > bound {derived}", shortest.len()));
                }
            }
        }
    }
    LinearRun {
        tally: t,
        beyond_bound,
        longest_shortest,
    }
}

fn sample(list: &[String]) -> String {
    if list.is_empty() {
        String::new()
    } else {
        format!(" (first: {})", list[0])
    }
}

fn criterion_5(report: &mut Report) {
    let f1 = GroupBackend::free(1).unwrap();
    let grammar = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[-1]), chain(1, &[1, 1], 1, &[-1, -1]), term(1, &[])])
        .unwrap();
    let paired = check_linear_inclusion(&grammar, &f1, &CheckConfig::default()).map(|o| o.verdict);
    let literal = check_linear_inclusion(
        &grammar,
        &f1,
        &CheckConfig {
            literal_omega10: true,
            ..CheckConfig::default()
        },
    )
    .map(|o| o.verdict);
    let oracle = search_grammar(&grammar, &f1, EnumerationBound::with_length(12));
    let words = enumerate_grammar_words(&grammar, EnumerationBound::with_length(12));
    let ok = matches!(paired, Ok(InclusionVerdict::Holds))
        && matches!(literal, Ok(InclusionVerdict::LiteralTripleViolation { .. }))
        && matches!(oracle, Ok(OracleVerdict::HoldsAtBound))
        && words.as_ref().is_ok_and(|ws| ws.len() == 7 && ws.iter().all(|x| f1.word_in_group_language(x).unwrap()));
    let shown = |v: &Result<InclusionVerdict, CheckError>| match v {
        Ok(v) => verdict_kind(v).to_string(),
        Err(e) => format!("error ({e})"),
    };
    report.line(
        5,
        "literal triple regression",
        ok,
        format!(
            "paired: {}; literal: {}; oracle at 12: {}",
            shown(&paired),
            shown(&literal),
            match &oracle {
                Ok(OracleVerdict::HoldsAtBound) => "holds-at-bound".to_string(),
                other => format!("{other:?}"),
            }
        ),
    );
}

/// Named examples at the level of whole checks; the per-module examples
/// live in the unit tests.
fn criterion_7(report: &mut Report) {
    let f1 = GroupBackend::free(1).unwrap();
    let z2 = GroupBackend::cyclic(2).unwrap();
    let z3 = GroupBackend::cyclic(3).unwrap();
    let cfg = CheckConfig::default();
    let mut failed: Vec<String> = Vec::new();
    let mut total = 0;
    let mut expect = |name: &str, ok: bool| {
        total += 1;
        if !ok {
            failed.push(name.to_string());
        }
    };

    let x_inv = Nfa::new(3, 1, [(1, 1, 2), (2, -1, 3)], [3]).unwrap();
    let single = Nfa::new(2, 1, [(1, 1, 2)], [2]).unwrap();
    let star = Nfa::new(1, 1, [(1, 1, 1)], [1]).unwrap();
    let even = Nfa::new(2, 1, [(1, 1, 2), (2, 1, 1)], [1]).unwrap();
    let x_star_inv = Nfa::new(3, 1, [(1, 1, 2), (2, 1, 2), (2, -1, 3)], [3]).unwrap();
    let verdict = |a: &Nfa, g: &GroupBackend, c: &CheckConfig| check_regular_inclusion(a, g, c).map(|o| o.verdict);
    let fails_with = |v: Result<InclusionVerdict, CheckError>, word: &[i32]| {
        matches!(v, Ok(InclusionVerdict::Fails { ref witness, .. }) if witness == &w(word))
    };

    expect("x X over F1 holds", matches!(verdict(&x_inv, &f1, &cfg), Ok(InclusionVerdict::Holds)));
    expect("x over F1 fails with x", fails_with(verdict(&single, &f1, &cfg), &[1]));
    expect("x* over Z2 fails with x", fails_with(verdict(&star, &z2, &cfg), &[1]));
    expect("(xx)* over Z2 holds", matches!(verdict(&even, &z2, &cfg), Ok(InclusionVerdict::Holds)));
    let full = CheckConfig {
        early_fail: false,
        ..cfg
    };
    expect(
        "x x* X over Z3 conjugate witness",
        matches!(
            verdict(&x_star_inv, &z3, &full),
            Ok(InclusionVerdict::Fails { ref witness, reason: ViolationReason::ConjugateViolation { state: 2 } })
                if witness == &w(&[1, 1, -1])
        ),
    );

    let balanced = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[-1]), term(1, &[])]).unwrap();
    let squares = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[1]), term(1, &[])]).unwrap();
    let lin = |gr: &LinearGrammar, g: &GroupBackend| check_linear_inclusion(gr, g, &cfg).map(|o| o.verdict);
    expect("x A X | eps over F1 holds", matches!(lin(&balanced, &f1), Ok(InclusionVerdict::Holds)));
    expect("x A x | eps over Z2 holds", matches!(lin(&squares, &z2), Ok(InclusionVerdict::Holds)));
    expect("x A x | eps over Z3 fails with x x", fails_with(lin(&squares, &z3), &[1, 1]));
    let eps_only = LinearGrammar::new(1, 1, [term(1, &[])]).unwrap();
    expect("A -> eps holds over Z3", matches!(lin(&eps_only, &z3), Ok(InclusionVerdict::Holds)));
    let nested =
        LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[-1]), chain(1, &[1, 1], 1, &[-1, -1]), term(1, &[])]).unwrap();
    let capped = check_linear_inclusion(
        &nested,
        &f1,
        &CheckConfig {
            set_cap: 2,
            ..cfg
        },
    )
    .map(|o| o.verdict);
    expect(
        "cap 2 resource exceeded at (1,1)",
        matches!(capped, Ok(InclusionVerdict::ResourceExceeded { cell: (1, 1), .. })),
    );

    let b = |len| EnumerationBound::with_length(len);
    expect(
        "oracle x X over F1",
        matches!(search_nfa(&x_inv, &f1, b(9)), Ok(OracleVerdict::HoldsAtBound)),
    );
    expect(
        "oracle x* over Z2",
        matches!(search_nfa(&star, &z2, b(3)), Ok(OracleVerdict::Fails { ref witness }) if witness == &w(&[1])),
    );
    expect(
        "oracle (xx)* over Z2 at 12",
        matches!(search_nfa(&even, &z2, b(12)), Ok(OracleVerdict::HoldsAtBound)),
    );
    expect(
        "enumerate chain",
        enumerate_nfa_words(&single, b(3)).is_ok_and(|ws| ws == vec![w(&[1])]),
    );
    expect(
        "enumerate loop",
        enumerate_nfa_words(&star, b(2)).is_ok_and(|ws| ws == vec![w(&[]), w(&[1]), w(&[1, 1])]),
    );
    expect(
        "enumerate balanced",
        enumerate_grammar_words(&balanced, b(4)).is_ok_and(|ws| ws == vec![w(&[]), w(&[1, -1]), w(&[1, 1, -1, -1])]),
    );
    let no_term = LinearGrammar::new(1, 1, [chain(1, &[1], 1, &[])]).unwrap();
    expect(
        "enumerate no terminal",
        enumerate_grammar_words(&no_term, b(6)).is_ok_and(|ws| ws.is_empty()),
    );
    let three = Nfa::new(3, 1, [], [1]).unwrap();
    expect("bound 3n", counterexample_bound_regular(&three) == 9);
    expect("bound (2n+1)L", counterexample_bound_linear(&balanced) == 6);
    let s3 = GroupBackend::symmetric(3).unwrap();
    expect("S3 transposition squared", s3.word_in_group_language(&w(&[1, 1])).unwrap());

    report.line(
        7,
        "named examples",
        failed.is_empty(),
        format!("{}/{total} examples exact{}", total - failed.len(), sample(&failed)),
    );
}

fn main() -> ExitCode {
    let mut report = Report { failures: 0 };

    let regular = run_regular();
    let m = &regular.main;
    report.line(
        1,
        "regular check agrees with the oracle at 3n",
        m.agree == m.cases && m.resource == 0 && m.errors.is_empty() && m.mismatches.is_empty()
            && regular.elapsed < Duration::from_secs(60)
            && m.cases >= 1000,
        format!(
            "{}/{} agree ({} holds; {} also via the full word stream), {} resource exceeded, {} errors, {:.1}s{}{}",
            m.agree,
            m.cases,
            m.holds,
            m.streamed,
            m.resource,
            m.errors.len(),
            regular.elapsed.as_secs_f64(),
            sample(&m.mismatches),
            sample(&m.errors)
        ),
    );

    let linear = run_linear();
    let t = &linear.tally;
    let evaluated = t.cases - t.resource - t.errors.len();
    let finite_rate = t.resource_finite as f64 / t.finite_cases.max(1) as f64;
    report.line(
        2,
        "linear check agrees with the oracle at (2n+1)L",
        t.agree == evaluated && t.errors.is_empty() && finite_rate < 0.2 && t.resource_finite == 0 && t.cases >= 500,
        format!(
            "{}/{} agree ({} holds; {} also via the full word stream), resource exceeded {}/{} overall ({:.1}%), {}/{} on finite backends; \
             {} fails need words past the bound, longest shortest counterexample {} (bound {}){}{}",
            t.agree,
            evaluated,
            t.holds,
            t.streamed,
            t.resource,
            t.cases,
            100.0 * t.resource as f64 / t.cases.max(1) as f64,
            t.resource_finite,
            t.finite_cases,
            linear.beyond_bound.len(),
            linear.longest_shortest.0,
            linear.longest_shortest.1,
            sample(&t.mismatches),
            sample(&t.errors)
        ),
    );

    let c = &regular.cross;
    report.line(
        3,
        "right-linear conversion agrees with the regular check",
        c.agree == c.cases && c.errors.is_empty(),
        format!("{}/{} agree{}{}", c.agree, c.cases, sample(&c.mismatches), sample(&c.errors)),
    );

    let counter_violations: Vec<String> = m
        .counter_violations
        .iter()
        .chain(&c.counter_violations)
        .chain(&t.counter_violations)
        .cloned()
        .collect();
    report.line(
        4,
        "operation counts within n^3, n^2, n^2(n+1), n",
        counter_violations.is_empty(),
        format!(
            "{} runs checked, {} over{}",
            2 * m.cases + c.cases + t.cases,
            counter_violations.len(),
            sample(&counter_violations)
        ),
    );

    criterion_5(&mut report);

    let bad: Vec<String> = m
        .bad_witnesses
        .iter()
        .chain(&c.bad_witnesses)
        .chain(&t.bad_witnesses)
        .cloned()
        .collect();
    let errors: Vec<String> = m.errors.iter().chain(&c.errors).chain(&t.errors).cloned().collect();
    let checked = m.witnesses_checked + c.witnesses_checked + t.witnesses_checked;
    report.line(
        6,
        "witnesses are in the language and not the identity",
        bad.is_empty() && errors.is_empty() && checked > 0,
        format!(
            "{checked} witnesses checked, {} invalid, {} aborted checks{}",
            bad.len(),
            errors.len(),
            sample(&bad)
        ),
    );

    criterion_7(&mut report);

    if report.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", report.failures);
        ExitCode::FAILURE
    }
}
