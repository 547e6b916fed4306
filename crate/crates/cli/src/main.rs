use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use subcat::cart_std::{from_std, parse_std, to_std};
use subcat::coherence::{decide_equal, diagram_commutes};
use subcat::graphs::graph_of;
use subcat::normalize::{aff_normal_form_traced, rel_normal_form_traced, ProductTerm, Trace};
use subcat::oracle::{compare_with_decider, random_pairs, Budget};
use subcat::parse::{parse_term, ParseError};
use subcat::typing::infer_type;
use subcat::{Kind, MorTerm};

/// Terms of the free monoidal, symmetric monoidal, relevant, affine and
/// cartesian categories: typing, graphs, equality and normal forms.
///
/// Term arguments may be `@path` to read a file or `-` to read standard input.
#[derive(Parser)]
#[command(name = "subcat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct KindArg {
    /// mon, symon, rel, aff or cart
    #[arg(long, default_value = "cart")]
    kind: Kind,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalKind {
    Rel,
    Aff,
}

#[derive(Clone, Copy, ValueEnum)]
enum Language {
    Std,
    Structural,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print it fully bracketed.
    Parse {
        #[command(flatten)]
        kind: KindArg,
        term: String,
    },
    /// Print the type `DOM -> COD` of a term.
    Type {
        #[command(flatten)]
        kind: KindArg,
        term: String,
    },
    /// Print the graph of a term (one-based map from codomain to domain occurrences).
    Graph {
        #[command(flatten)]
        kind: KindArg,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
        term: String,
    },
    /// Decide whether two terms are equal; exit status 0 if equal, 1 if not.
    Eq {
        #[command(flatten)]
        kind: KindArg,
        left: String,
        right: String,
    },
    /// Decide whether two paths of arrows, separated by `;` and listed in
    /// the order they are traversed, compose to the same arrow.
    Commutes {
        #[command(flatten)]
        kind: KindArg,
        left: String,
        right: String,
    },
    /// Print the normal form of a relevant or affine term.
    Normalize {
        #[arg(long, value_enum)]
        kind: NormalKind,
        #[arg(long)]
        trace: bool,
        term: String,
    },
    /// Translate between structural terms and the projection/pairing language.
    Translate {
        #[arg(long, value_enum)]
        to: Language,
        term: String,
    },
    /// Compare the graph decider with bounded rewriting on random pairs.
    Fuzz {
        #[command(flatten)]
        kind: KindArg,
        #[arg(long, default_value_t = 6)]
        size: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = Budget::default().max_depth)]
        depth: usize,
        #[arg(long, default_value_t = Budget::default().max_states)]
        states: usize,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_input(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s.trim().to_string());
    }
    match arg.strip_prefix('@') {
        Some(path) => Ok(fs::read_to_string(path)
            .map_err(|e| Failure(format!("{path}: {e}")))?
            .trim()
            .to_string()),
        None => Ok(arg.to_string()),
    }
}

fn located(text: &str, e: ParseError) -> Failure {
    Failure(format!(
        "{e}\n  {text}\n  {}^",
        " ".repeat(e.position.min(text.len()))
    ))
}

fn term_arg(arg: &str, kind: Option<Kind>) -> Result<MorTerm, Failure> {
    let text = read_input(arg)?;
    let t = parse_term(&text).map_err(|e| located(&text, e))?;
    if let Some(kind) = kind {
        infer_type(&t, kind)?;
    }
    Ok(t)
}

fn path_arg(arg: &str) -> Result<Vec<MorTerm>, Failure> {
    read_input(arg)?
        .split(';')
        .map(|part| parse_term(part.trim()).map_err(|e| located(part.trim(), e)))
        .collect()
}

fn products(seq: &[ProductTerm]) -> String {
    seq.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" . ")
}

fn print_trace(trace: &Trace) {
    for step in &trace.steps {
        println!("{}: {}", step.label, products(&step.products));
    }
    for (letter, rounds) in &trace.diagonals {
        for r in rounds {
            println!("diagonals on {letter}: n_f = {} tree {}", r.n_f, r.tree);
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Parse { kind, term } => println!("{}", term_arg(&term, Some(kind.kind))?),
        Command::Type { kind, term } => {
            let t = term_arg(&term, None)?;
            println!("{}", infer_type(&t, kind.kind)?);
        }
        Command::Graph {
            kind, dot, term, ..
        } => {
            let t = term_arg(&term, None)?;
            let g = graph_of(&t, kind.kind)?;
            if dot {
                let ty = infer_type(&t, kind.kind)?;
                print!("{}", g.to_dot(Some(&ty.dom), Some(&ty.cod)));
            } else {
                println!("{}", g.to_json());
            }
        }
        Command::Eq { kind, left, right } => {
            let (f, g) = (term_arg(&left, None)?, term_arg(&right, None)?);
            let v = decide_equal(&f, &g, kind.kind)?;
            println!("{v}");
            return Ok(if v.equal {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::Commutes { kind, left, right } => {
            let (l, r) = (path_arg(&left)?, path_arg(&right)?);
            let v = diagram_commutes(&l, &r, kind.kind)?;
            println!("{v}");
            return Ok(if v.equal {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::Normalize { kind, trace, term } => {
            let t = term_arg(&term, None)?;
            let (nf, tr) = match kind {
                NormalKind::Rel => {
                    let (nf, tr) = rel_normal_form_traced(&t)?;
                    (nf.to_term(), tr)
                }
                NormalKind::Aff => {
                    let (nf, tr) = aff_normal_form_traced(&t)?;
                    (nf.to_term(), tr)
                }
            };
            println!("{nf}");
            if trace {
                print_trace(&tr);
            }
        }
        Command::Translate { to, term } => {
            let text = read_input(&term)?;
            match to {
                Language::Std => {
                    let t = parse_term(&text).map_err(|e| located(&text, e))?;
                    println!("{}", to_std(&t)?);
                }
                Language::Structural => {
                    let t = parse_std(&text).map_err(|e| located(&text, e))?;
                    println!("{}", from_std(&t)?);
                }
            }
        }
        Command::Fuzz {
            kind,
            size,
            pairs,
            seed,
            depth,
            states,
        } => {
            let budget = Budget {
                max_depth: depth,
                max_states: states,
            };
            let sample = random_pairs(kind.kind, size, pairs, seed);
            let r = compare_with_decider(&sample, kind.kind, budget)?;
            println!("kind: {}", kind.kind);
            println!("pairs: {}", r.pairs);
            println!("decider equal: {}", r.decider_equal);
            println!("decider not-equal: {}", r.decider_not_equal);
            println!("oracle confirmed: {}", r.confirmed);
            println!("budget exhausted: {}", r.budget_exhausted);
            println!("confirmation rate: {:.3}", r.confirmation_rate());
            println!("contradictions: {}", r.contradictions.len());
            for c in &r.contradictions {
                println!("  {c}");
            }
            if !r.contradictions.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
