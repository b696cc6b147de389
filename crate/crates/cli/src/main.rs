use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use grouplang::corpus::{random_grammar, random_nfa};
use grouplang::format::language_to_json;
use grouplang::linear::useful_nonterminals;
use grouplang::regular::useful_states;
use grouplang::{
    check_inclusion, counterexample_bound_linear, counterexample_bound_regular, enumerate_grammar_words,
    enumerate_nfa_words, parse_group, parse_language, search_grammar, search_nfa, CheckConfig, CheckOutcome,
    EnumerationBound, GroupBackend, InclusionVerdict, Language, OpCounters, OracleError, OracleVerdict, Word,
    DEFAULT_SET_CAP,
};

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_OTHER: u8 = 2;

const LITERAL_BANNER: &str = "warning: --literal-omega10 combines the two projections of each cycle \
independently. This can report violations for languages that are included; the default paired \
triple is the correct test.";

#[derive(Parser)]
#[command(name = "grouplang", version, about = "Decide inclusion of regular and linear languages in group languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the semiring-closure check. Exit 0 = holds, 1 = fails, 2 = resource or input error.
    Check(CheckArgs),
    /// Brute-force the language up to a length bound.
    Oracle(OracleArgs),
    /// List the words of a language in shortlex order.
    Enumerate(EnumerateArgs),
    /// Write seeded random automata or grammars.
    GenCorpus(GenArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    /// Group specification file.
    group: PathBuf,
    /// Automaton or linear grammar file.
    language: PathBuf,
    /// Maximum size of a label set before giving up.
    #[arg(long, default_value_t = DEFAULT_SET_CAP, value_parser = positive)]
    cap: usize,
    /// Keep closing after a cell holds two distinct elements (regular only).
    #[arg(long)]
    no_early_fail: bool,
    /// Use the independent-projection triple in the linear check.
    #[arg(long)]
    literal_omega10: bool,
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

#[derive(Args)]
struct OracleArgs {
    group: PathBuf,
    language: PathBuf,
    /// Word-length bound; defaults to the derived counterexample bound.
    #[arg(long, value_parser = positive)]
    bound: Option<usize>,
    #[arg(long, default_value_t = EnumerationBound::DEFAULT_MAX_WORDS, value_parser = positive)]
    max_words: usize,
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

#[derive(Args)]
struct EnumerateArgs {
    language: PathBuf,
    #[arg(long, value_parser = positive)]
    max_len: usize,
    #[arg(long, default_value_t = EnumerationBound::DEFAULT_MAX_WORDS, value_parser = positive)]
    max_words: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorpusKind {
    Automaton,
    LinearGrammar,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "automaton")]
    kind: CorpusKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    states: usize,
    #[arg(long, default_value_t = 3)]
    nonterminals: usize,
    #[arg(long, default_value_t = 2, value_parser = positive)]
    rank: usize,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Transitions per state (automata).
    #[arg(long, default_value_t = 1.5)]
    density: f64,
    /// Most letters emitted by one production (grammars).
    #[arg(long, default_value_t = 2)]
    max_body: usize,
    /// Directory to write one file per instance into; JSON lines on stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => cmd_check(&args),
        Command::Oracle(args) => cmd_oracle(&args),
        Command::Enumerate(args) => cmd_enumerate(&args),
        Command::GenCorpus(args) => cmd_gen(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_OTHER)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_group(path: &Path) -> Result<GroupBackend> {
    parse_group(&read(path)?).with_context(|| format!("invalid group file {}", path.display()))
}

fn load_language(path: &Path) -> Result<Language> {
    parse_language(&read(path)?).with_context(|| format!("invalid language file {}", path.display()))
}

fn load_pair(group: &Path, language: &Path) -> Result<(GroupBackend, Language)> {
    let g = load_group(group)?;
    let l = load_language(language)?;
    if g.rank() != l.rank() {
        bail!(
            "backend mismatch: the language uses {} generators but the group has rank {}",
            l.rank(),
            g.rank()
        );
    }
    Ok((g, l))
}

fn counters_json(c: &OpCounters) -> Value {
    serde_json::to_value(c).expect("counters serialize")
}

fn witness_fields(report: &mut Value, witness: &Word) {
    report["witness"] = json!(witness.letters());
    report["witness_tokens"] = json!(witness.to_tokens());
}

fn cmd_check(args: &CheckArgs) -> Result<u8> {
    let (group, language) = load_pair(&args.group, &args.language)?;
    let config = CheckConfig {
        set_cap: args.cap,
        early_fail: !args.no_early_fail,
        literal_omega10: args.literal_omega10,
    };
    if args.literal_omega10 {
        eprintln!("{LITERAL_BANNER}");
    }
    let started = Instant::now();
    let CheckOutcome { verdict, counters } = check_inclusion(&language, &group, &config)?;
    let elapsed_ms = started.elapsed().as_millis() as u64;

    let mut report = json!({
        "verdict": Value::Null,
        "witness": Value::Null,
        "witness_tokens": Value::Null,
        "reason": Value::Null,
        "counters": counters_json(&counters),
        "elapsed_ms": elapsed_ms,
    });
    let code = match &verdict {
        InclusionVerdict::Holds => {
            report["verdict"] = json!("holds");
            EXIT_HOLDS
        }
        InclusionVerdict::Fails { witness, reason } => {
            report["verdict"] = json!("fails");
            report["reason"] = json!(reason.to_string());
            report["reason_detail"] = serde_json::to_value(reason).expect("reason serializes");
            witness_fields(&mut report, witness);
            EXIT_FAILS
        }
        InclusionVerdict::ResourceExceeded { cell, cardinality } => {
            report["verdict"] = json!("resource_exceeded");
            report["reason"] = json!(format!(
                "label set at cell ({}, {}) reached {cardinality} elements, above the cap of {}",
                cell.0, cell.1, args.cap
            ));
            report["cell"] = json!([cell.0, cell.1]);
            EXIT_OTHER
        }
        InclusionVerdict::LiteralTripleViolation { state, element_witness } => {
            report["verdict"] = json!("literal_triple_violation");
            report["reason"] = json!(format!(
                "literal triple at nonterminal {state} contains a non-identity element; no generated word confirms it"
            ));
            report["element_witness"] = json!(element_witness.letters());
            report["element_witness_tokens"] = json!(element_witness.to_tokens());
            EXIT_FAILS
        }
    };

    match args.format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        OutputFormat::Text => {
            println!("group: {}", group.name());
            println!("language: {}", language.kind());
            println!("verdict: {}", report["verdict"].as_str().unwrap_or_default());
            if let Some(reason) = report["reason"].as_str() {
                println!("reason: {reason}");
            }
            if let Some(w) = verdict.witness() {
                println!("witness: {}", w.to_tokens());
                println!("witness letters: {:?}", w.letters());
            }
            if let InclusionVerdict::LiteralTripleViolation { element_witness, .. } = &verdict {
                println!("element: {}", element_witness.to_tokens());
            }
            println!(
                "counters: unions={} products={} stars={} diamonds={} triples={}",
                counters.unions, counters.products, counters.stars, counters.diamonds, counters.triples
            );
            println!("elapsed: {elapsed_ms} ms");
        }
    }
    Ok(code)
}

fn is_empty_language(language: &Language) -> bool {
    match language {
        Language::Automaton(a) => !useful_states(a).contains(&a.start()),
        Language::LinearGrammar(g) => !useful_nonterminals(g).contains(&1),
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<u8> {
    let (group, language) = load_pair(&args.group, &args.language)?;
    let derived = match &language {
        Language::Automaton(a) => counterexample_bound_regular(a),
        Language::LinearGrammar(g) => counterexample_bound_linear(g),
    };
    let length = args.bound.unwrap_or(derived).max(1);
    let bound = EnumerationBound::new(length, args.max_words).expect("both limits are positive");
    let started = Instant::now();
    let empty = is_empty_language(&language);
    let outcome = match &language {
        Language::Automaton(a) => search_nfa(a, &group, bound),
        Language::LinearGrammar(g) => search_grammar(g, &group, bound),
    };
    let elapsed_ms = started.elapsed().as_millis() as u64;
    let (verdict, code, witness) = match outcome {
        Ok(OracleVerdict::HoldsAtBound) => ("holds-at-bound", EXIT_HOLDS, None),
        Ok(OracleVerdict::Fails { witness }) => ("fails", EXIT_FAILS, Some(witness)),
        Err(OracleError::BoundExceeded { max_words }) => {
            let report = json!({
                "verdict": "bound_exceeded",
                "bound": length,
                "max_words": max_words,
                "elapsed_ms": elapsed_ms,
            });
            match args.format {
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                OutputFormat::Text => {
                    println!("bound exceeded: more than {max_words} search states below length {length}")
                }
            }
            return Ok(EXIT_OTHER);
        }
        Err(e) => return Err(e.into()),
    };

    match args.format {
        OutputFormat::Json => {
            let mut report = json!({
                "verdict": verdict,
                "bound": length,
                "empty_language": empty,
                "witness": Value::Null,
                "witness_tokens": Value::Null,
                "elapsed_ms": elapsed_ms,
            });
            if let Some(w) = &witness {
                witness_fields(&mut report, w);
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        OutputFormat::Text => match &witness {
            Some(w) => {
                println!("fails");
                println!("witness: {}", w.to_tokens());
                println!("witness letters: {:?}", w.letters());
            }
            None if empty => println!("holds-at-bound {length} (empty language)"),
            None => println!("holds-at-bound {length}"),
        },
    }
    Ok(code)
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<u8> {
    let language = load_language(&args.language)?;
    let bound = EnumerationBound::new(args.max_len, args.max_words).expect("both limits are positive");
    let words = match &language {
        Language::Automaton(a) => enumerate_nfa_words(a, bound),
        Language::LinearGrammar(g) => enumerate_grammar_words(g, bound),
    };
    match words {
        Ok(words) => {
            for w in words {
                println!("{w}");
            }
            Ok(EXIT_HOLDS)
        }
        Err(OracleError::BoundExceeded { max_words }) => {
            eprintln!("error: more than {max_words} words up to length {}", args.max_len);
            Ok(EXIT_OTHER)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    for i in 0..args.count {
        let language = match args.kind {
            CorpusKind::Automaton => Language::Automaton(random_nfa(&mut rng, args.states, args.rank, args.density)),
            CorpusKind::LinearGrammar => {
                Language::LinearGrammar(random_grammar(&mut rng, args.nonterminals, args.rank, args.max_body))
            }
        };
        let value = language_to_json(&language);
        match &args.out {
            Some(dir) => {
                let path = dir.join(format!("{}-{:04}.json", language.kind(), i));
                fs::write(&path, serde_json::to_string_pretty(&value)? + "\n")
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            None => println!("{value}"),
        }
    }
    Ok(EXIT_HOLDS)
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}
