use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use semcas_core::cas::{parse_cas, ParseOptions};
use semcas_core::latex::parse_str;
use semcas_core::verify::{load_corpus, NumericConfig, RelationCase, System, Verifier};
use semcas_core::{BackwardIndex, Convention, InfoRecord, Lexicon, Target, Translator};

const OK: u8 = 0;
const TRANSLATION_ERROR: u8 = 1;
const VERIFICATION_FAILED: u8 = 2;
const CONFIG_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "semcas", version, about = "Translate between semantic LaTeX and CAS syntax")]
struct Cli {
    /// Lexicon file or directory of `*.json` files; replaces the bundled lexicon.
    #[arg(long, global = true)]
    lexicon: Vec<PathBuf>,
    /// Branch-cut convention used by numeric evaluation.
    #[arg(long, global = true, default_value = "maple")]
    convention: Convention,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Semantic LaTeX to Maple or Mathematica.
    Translate {
        #[arg(long, default_value = "maple")]
        to: Target,
        /// Write the info log as JSON lines to stderr.
        #[arg(long)]
        info: bool,
        /// Input; read from stdin when absent.
        input: Option<String>,
    },
    /// Maple to semantic LaTeX.
    Backtranslate {
        #[arg(long)]
        info: bool,
        input: Option<String>,
    },
    /// Alternate translations until a fixed point or the cycle limit.
    Roundtrip {
        #[arg(long, default_value = "latex")]
        start: System,
        #[arg(long, default_value_t = 3)]
        max_cycles: usize,
        input: Option<String>,
    },
    /// Verify one relation given as a JSON object.
    Verify {
        #[arg(long = "case")]
        case: PathBuf,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Verify every relation of a JSON-lines corpus.
    Corpus {
        file: PathBuf,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Validate lexicon files and the backward index built from them.
    LexiconCheck,
    /// Print the parse tree of an expression.
    DumpTree {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Input language.
        #[arg(long, default_value = "latex")]
        from: System,
        input: Option<String>,
    },
}

#[derive(clap::Args)]
struct NumericArgs {
    /// Relative tolerance per test point.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// An exit code with its diagnostic.
struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn config(e: impl std::fmt::Display) -> Failure {
    Failure(CONFIG_ERROR, e.to_string())
}

fn translation(e: impl std::fmt::Display) -> Failure {
    Failure(TRANSLATION_ERROR, e.to_string())
}

fn input_text(arg: Option<String>) -> Result<String, Failure> {
    match arg {
        Some(s) => Ok(s),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(config)?;
            Ok(s.trim_end_matches(['\n', '\r']).to_string())
        }
    }
}

fn lexicon_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<_> = std::fs::read_dir(p)
                .map_err(|e| config(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn lexicon(paths: &[PathBuf]) -> Result<Lexicon, Failure> {
    if paths.is_empty() {
        return Ok(Lexicon::bundled());
    }
    Lexicon::load(&lexicon_files(paths)?).map_err(config)
}

fn verifier(cli: &Cli) -> Result<Verifier, Failure> {
    Verifier::new(lexicon(&cli.lexicon)?).map_err(config)
}

fn numeric_config(args: &NumericArgs, convention: Convention) -> Result<NumericConfig, Failure> {
    if args.tol.is_nan() || args.tol <= 0.0 || args.points == 0 {
        return Err(config("--tol and --points must be positive"));
    }
    Ok(NumericConfig {
        tol: args.tol,
        points: args.points,
        seed: args.seed,
        convention,
    })
}

fn print_info(records: &[InfoRecord]) {
    for r in records {
        eprintln!("{}", serde_json::to_string(r).expect("serializable"));
    }
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Translate { to, info, input } => {
            let lex = lexicon(&cli.lexicon)?;
            let src = input_text(input.clone())?;
            let r = Translator::new(&lex, *to).translate_str(&src).map_err(translation)?;
            if *info {
                print_info(&r.info_log);
            }
            println!("{}", r.output);
            Ok(OK)
        }
        Command::Backtranslate { info, input } => {
            let lex = lexicon(&cli.lexicon)?;
            let idx = BackwardIndex::build(&lex).map_err(config)?;
            let r = idx.translate_str(&input_text(input.clone())?).map_err(translation)?;
            if *info {
                print_info(&r.info_log);
            }
            println!("{}", r.output);
            Ok(OK)
        }
        Command::Roundtrip { start, max_cycles, input } => {
            let v = verifier(&cli)?;
            let r = v.round_trip(&input_text(input.clone())?, *start, *max_cycles);
            print!("{}", r.table());
            match &r.error {
                Some(e) => Err(Failure(TRANSLATION_ERROR, format!("step {}: {}", e.step, e.message))),
                None => Ok(OK),
            }
        }
        Command::Verify { case, numeric } => {
            let cfg = numeric_config(numeric, cli.convention)?;
            let text = std::fs::read_to_string(case).map_err(|e| config(format!("{}: {e}", case.display())))?;
            let case: RelationCase =
                serde_json::from_str(&text).map_err(|e| config(format!("{}: {e}", case.display())))?;
            let v = verifier(&cli)?;
            let r = v.verify_case(&case, &cfg);
            println!("{}", serde_json::to_string(&r).expect("serializable"));
            if !r.translated {
                return Err(translation(r.error.unwrap_or_default()));
            }
            if r.verified() && r.sound() {
                Ok(OK)
            } else {
                eprintln!("{}: not verified", r.id);
                Ok(VERIFICATION_FAILED)
            }
        }
        Command::Corpus { file, numeric } => {
            let cfg = numeric_config(numeric, cli.convention)?;
            let cases = load_corpus(file).map_err(config)?;
            let v = verifier(&cli)?;
            let report = v.run_corpus(&cases, &cfg);
            print!("{}", report.to_jsonl());
            eprint!("{}", report.summary.text());
            let s = &report.summary;
            if s.translated < s.total {
                Ok(TRANSLATION_ERROR)
            } else if s.verified < s.total || s.unsound > 0 {
                Ok(VERIFICATION_FAILED)
            } else {
                Ok(OK)
            }
        }
        Command::LexiconCheck => {
            let files = lexicon_files(&cli.lexicon)?;
            let lex = lexicon(&cli.lexicon)?;
            let idx = BackwardIndex::build(&lex).map_err(config)?;
            let names: Vec<_> = files.iter().map(|f| f.display().to_string()).collect();
            let out = serde_json::json!({
                "files": if names.is_empty() { vec!["<bundled>".to_string()] } else { names },
                "entries": lex.len(),
                "backward_rules": idx.len(),
            });
            println!("{out}");
            Ok(OK)
        }
        Command::DumpTree { format, from, input } => {
            let src = input_text(input.clone())?;
            match from {
                System::Latex => {
                    let lex = lexicon(&cli.lexicon)?;
                    let tree = parse_str(&src, &lex).map_err(translation)?;
                    match format {
                        Format::Text => print!("{}", tree.to_text()),
                        Format::Json => println!("{}", tree.to_json()),
                    }
                }
                System::Maple => {
                    let tree = parse_cas(&src, ParseOptions { unevaluated: true }).map_err(translation)?;
                    match format {
                        Format::Text => println!("{tree:#?}"),
                        Format::Json => println!("{}", tree.to_json()),
                    }
                }
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { CONFIG_ERROR } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    #[test]
    fn directories_expand_to_sorted_json_files() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/lexicon");
        let files = lexicon_files(&[dir]).unwrap_or_else(|f| panic!("{}", f.1));
        assert!(files.len() >= 2);
        assert!(files.windows(2).all(|w| w[0] < w[1]));
        assert!(files.iter().all(|f| f.extension().unwrap() == "json"));
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["semcas", "--convention", "dlmf", "translate", "--to", "mathematica", "x"]).unwrap();
        assert_eq!(cli.convention, Convention::Dlmf);
        assert!(matches!(cli.command, Command::Translate { to: Target::Mathematica, .. }));
        assert!(Cli::try_parse_from(["semcas", "translate", "--to", "maxima", "x"]).is_err());
    }
}
