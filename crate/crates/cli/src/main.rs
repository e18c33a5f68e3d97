use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use blocklogic::chain::{parse_model_text, update_model_traced, ChainError, CompletionTrace, ModelTextError};
use blocklogic::proofcheck::{check_derivation, parse_derivation, ProofParseError};
use blocklogic::reduction::{normalize_traced, translate_traced};
use blocklogic::semantics::{eval, find_countermodel, BoundedSearchSpace};
use blocklogic::sim::{knowledge_query, parse_blocks, parse_schedule, run_simulation, SimError, SimFileError};
use blocklogic::syntax::{parse_block, parse_formula, BcFormula, Printer, SyntaxError};
use blocklogic::validity::{decide, DecideError};
use clap::{Parser, Subcommand};

const GRAMMAR: &str = "\
Formula syntax, loosest to tightest binding:
  F <-> G          biconditional
  F -> G           implication (right associative)
  F | G            disjunction
  F & G            conjunction
  not F, box A, [i, A]F
  bot, top, P0 P1 ..., Q1 Q2 ...
Box bodies and block formulas must be classical (no Q, box or blocks).

Exit status: 0 positive answer, 1 negative answer, 2 usage error,
3 parse error, 4 input violates a precondition, 5 I/O error.";

#[derive(Parser)]
#[command(name = "blocklogic", version, about = "Evaluate, decide and check formulas about blockchain updates", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula in a model; prints true or false.
    Eval {
        model: PathBuf,
        formula: String,
        /// Run chain completion on the model file before evaluating.
        #[arg(long)]
        complete: bool,
    },
    /// Run chain completion on a model file.
    Complete { model: PathBuf },
    /// Apply one block, written `i A` or `[i, A]`, to a model.
    Update {
        model: PathBuf,
        block: String,
        #[arg(long)]
        trace: bool,
    },
    /// Rewrite a formula into normal form.
    Normalize {
        formula: String,
        /// Print the axiom instance used at each rewrite.
        #[arg(long)]
        trace: bool,
    },
    /// Translate a formula into the update-free fragment.
    Translate {
        formula: String,
        /// Normalise first, so that the result is equivalent.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        trace: bool,
    },
    /// Decide validity over initial models.
    Validity {
        formula: String,
        /// Report how many scenarios were examined.
        #[arg(long)]
        stats: bool,
    },
    /// Search a bounded space of initial models for a countermodel.
    Countermodel {
        formula: String,
        /// Longest chain tried; defaults to the largest index in the formula.
        #[arg(long)]
        max_chain_len: Option<usize>,
        /// Most background formulas combined.
        #[arg(long, default_value_t = 1)]
        max_background: usize,
    },
    /// Check a proof file.
    CheckProof { proof: PathBuf },
    /// Deliver blocks to several nodes and report what each ends up with.
    Simulate {
        schedule: PathBuf,
        blocks: PathBuf,
        /// Evaluate this formula at every node's final model.
        #[arg(long)]
        query: Vec<String>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn formula(text: &str) -> Result<BcFormula> {
    parse_formula(text).with_context(|| format!("cannot parse formula `{text}`"))
}

fn verdict(positive: bool) -> ExitCode {
    if positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_trace(trace: &CompletionTrace) {
    for b in &trace.accepted {
        println!("accepted {b}");
    }
    for b in &trace.rejected_inconsistent {
        println!("rejected {b}");
    }
    for b in &trace.discarded_stale {
        println!("discarded {b}");
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval { model, formula: text, complete } => {
            let spec = parse_model_text(&read(&model)?).with_context(|| model.display().to_string())?;
            let m = if complete { spec.into_completed_model()?.0 } else { spec.into_model()? };
            let value = eval(&m, &formula(&text)?);
            println!("{value}");
            Ok(verdict(value))
        }
        Command::Complete { model } => {
            let spec = parse_model_text(&read(&model)?).with_context(|| model.display().to_string())?;
            let (m, done) = spec.into_completed_model()?;
            print!("{m}");
            print_trace(&done.trace);
            Ok(ExitCode::SUCCESS)
        }
        Command::Update { model, block, trace } => {
            let spec = parse_model_text(&read(&model)?).with_context(|| model.display().to_string())?;
            let m = spec.into_model()?;
            let b = parse_block(&block).with_context(|| format!("cannot parse block `{block}`"))?;
            let (next, t) = update_model_traced(&m, &b);
            print!("{next}");
            if trace {
                print_trace(&t);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Normalize { formula: text, trace } => {
            let n = normalize_traced(&formula(&text)?);
            println!("{}", n.normal_form);
            if trace {
                for step in &n.trace {
                    println!("{}: {}", step.axiom, step.instance);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate { formula: text, normalize, trace } => {
            let mut f = formula(&text)?;
            if normalize {
                f = normalize_traced(&f).normal_form.to_formula();
            }
            let (out, steps) = translate_traced(&f);
            println!("{out}");
            if trace {
                for s in &steps {
                    println!("h {}: {} => {}", s.block, s.before, s.after);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validity { formula: text, stats } => {
            let v = decide(&formula(&text)?)?;
            if v.valid {
                println!("VALID");
            } else {
                println!("INVALID");
                print!("{}", v.countermodel.as_ref().expect("invalid verdicts carry a countermodel"));
            }
            if stats {
                let s = v.stats;
                eprintln!(
                    "length classes {}, box classes {}, realizable box sets {}, valuations {}, scenarios {}",
                    s.length_classes, s.box_classes, s.realizable_box_sets, s.valuations, s.scenarios
                );
            }
            Ok(verdict(v.valid))
        }
        Command::Countermodel { formula: text, max_chain_len, max_background } => {
            let f = formula(&text)?;
            let mut space = BoundedSearchSpace::for_formula(&f);
            if let Some(n) = max_chain_len {
                space.max_chain_len = n;
            }
            space.max_background_pick = max_background;
            match find_countermodel(&f, &space) {
                Some(m) => {
                    print!("{m}");
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("none found within bounds");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::CheckProof { proof } => {
            let d = parse_derivation(&read(&proof)?).with_context(|| proof.display().to_string())?;
            match check_derivation(&d) {
                Ok(()) => {
                    println!("OK");
                    if let Some(c) = d.conclusion() {
                        println!("{}", Printer::default().formula(c));
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("error: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Simulate { schedule, blocks, query } => {
            let cfg = parse_schedule(&read(&schedule)?).with_context(|| schedule.display().to_string())?;
            let bs = parse_blocks(&read(&blocks)?).with_context(|| blocks.display().to_string())?;
            let queries = query.iter().map(|q| formula(q)).collect::<Result<Vec<_>>>()?;
            let report = run_simulation(&cfg, &bs)?;
            print!("{report}");
            for node in &report.nodes {
                for (text, q) in query.iter().zip(&queries) {
                    println!("{}: {} = {}", node.name, text, knowledge_query(node.final_model(), q));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Maps an error to the exit status documented in `--help`.
fn exit_status(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<std::io::Error>() {
            return 5;
        }
        if cause.is::<SyntaxError>()
            || cause.is::<ModelTextError>()
            || cause.is::<ProofParseError>()
            || cause.is::<SimFileError>()
        {
            return 3;
        }
        if cause.is::<ChainError>() || cause.is::<SimError>() || cause.is::<DecideError>() {
            return 4;
        }
    }
    4
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            log::debug!("{err:?}");
            eprintln!("error: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}
