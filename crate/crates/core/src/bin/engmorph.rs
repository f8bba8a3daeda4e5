// SPDX-License-Identifier: Apache-2.0

use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use engmorph::db::{self, Database};
use engmorph::service::{self, AppState, ServiceConfig};
use engmorph::{generate, recognize, surface_of, LexicalForm, Lexicon, NONE_MARKER};

/// English inflectional morphology: recognize, generate and compile.
#[derive(Parser)]
#[command(name = "engmorph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Lexicon file; repeat to merge several in order.
    #[arg(long)]
    lexicon: Vec<PathBuf>,
    /// Compiled database.
    #[arg(long)]
    db: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print every analysis of each word.
    Recognize {
        #[command(flatten)]
        source: Source,
        /// Lowercase words before lookup.
        #[arg(long)]
        fold_case: bool,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Look words up in a compiled database.
    Lookup {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        fold_case: bool,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Print every form the lexicon generates: lexical form, surface, parse.
    Generate {
        #[arg(long, required = true)]
        lexicon: Vec<PathBuf>,
        /// Only entries with these lexical forms.
        words: Vec<String>,
    },
    /// Spell lexical forms such as `stop+ed`.
    Spell {
        #[arg(required = true)]
        forms: Vec<String>,
    },
    /// Compile lexicon files into a database.
    Compile {
        #[arg(long, required = true)]
        lexicon: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the flat text form of a database.
    Dump {
        #[arg(long)]
        db: PathBuf,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a database from its flat text form.
    Restore {
        #[arg(long)]
        flat: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print database statistics.
    Stats {
        #[arg(long)]
        db: PathBuf,
    },
    /// Interactive recognizer reading one word per line.
    Repl {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        fold_case: bool,
    },
    /// Run the HTTP maintenance service.
    Serve {
        #[arg(long, env = "ENGMORPH_LEXICON")]
        lexicon: PathBuf,
        #[arg(long, env = "ENGMORPH_DB")]
        db: PathBuf,
        #[arg(long, env = "ENGMORPH_FLAT")]
        flat: PathBuf,
        #[arg(long, env = "ENGMORPH_LISTEN", default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        /// Directory of browser client assets served at `/`.
        #[arg(long, env = "ENGMORPH_STATIC_DIR")]
        static_dir: Option<PathBuf>,
        #[arg(long, default_value_t = service::DEFAULT_QUEUE)]
        queue: usize,
    },
}

type CliResult = Result<(), String>;

fn load_lexicon(paths: &[PathBuf]) -> Result<Lexicon, String> {
    let mut lexicon = Lexicon::new();
    for path in paths {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        lexicon
            .extend_from_text(&text)
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(lexicon)
}

fn open_db(path: &Path) -> Result<Database, String> {
    Database::open(path).map_err(|e| format!("{}: {e}", path.display()))
}

enum Recognizer {
    Rules(Lexicon),
    Db(Database),
}

impl Recognizer {
    fn open(source: &Source) -> Result<Recognizer, String> {
        match &source.db {
            Some(path) => Ok(Recognizer::Db(open_db(path)?)),
            None => Ok(Recognizer::Rules(load_lexicon(&source.lexicon)?)),
        }
    }

    fn lines(&self, word: &str) -> Result<Vec<String>, String> {
        let lines: Vec<String> = match self {
            Recognizer::Rules(lex) => recognize(word, lex)
                .into_iter()
                .map(|a| format!("{}\t{}", a.lexical_form, a.parse))
                .collect(),
            Recognizer::Db(db) => db
                .lookup(word)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|p| p.content_text())
                .collect(),
        };
        if lines.is_empty() {
            Ok(vec![NONE_MARKER.to_owned()])
        } else {
            Ok(lines)
        }
    }
}

fn prepare(word: &str, fold_case: bool) -> String {
    if fold_case {
        word.to_lowercase()
    } else {
        word.to_owned()
    }
}

fn print_words(rec: &Recognizer, words: &[String], fold_case: bool) -> CliResult {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for word in words {
        if words.len() > 1 {
            writeln!(out, "# {word}").map_err(|e| e.to_string())?;
        }
        for line in rec.lines(&prepare(word, fold_case))? {
            writeln!(out, "{line}").map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn repl(rec: &Recognizer, fold_case: bool) -> CliResult {
    let stdin = io::stdin();
    let mut out = io::stdout();
    let io_err = |e: io::Error| e.to_string();
    write!(out, "recognizer>>").map_err(io_err)?;
    out.flush().map_err(io_err)?;
    for line in stdin.lock().lines() {
        let line = line.map_err(io_err)?;
        let word = line.trim();
        if !word.is_empty() {
            writeln!(out).map_err(io_err)?;
            for l in rec.lines(&prepare(word, fold_case))? {
                writeln!(out, "{l}").map_err(io_err)?;
            }
        }
        write!(out, "recognizer>>").map_err(io_err)?;
        out.flush().map_err(io_err)?;
    }
    writeln!(out).map_err(io_err)
}

fn write_out(path: &Path, bytes: &[u8]) -> CliResult {
    db::write_atomic(path, bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Recognize {
            source,
            fold_case,
            words,
        } => print_words(&Recognizer::open(&source)?, &words, fold_case),
        Command::Lookup {
            db,
            fold_case,
            words,
        } => print_words(&Recognizer::Db(open_db(&db)?), &words, fold_case),
        Command::Generate { lexicon, words } => {
            let lexicon = load_lexicon(&lexicon)?;
            let mut out = io::stdout().lock();
            for entry in lexicon.entries() {
                if !words.is_empty() && !words.contains(&entry.lexical) {
                    continue;
                }
                let forms = entry.expand().into_iter().zip(generate(entry));
                for ((lf, _), (surface, parse)) in forms {
                    writeln!(out, "{lf}\t{surface}\t{parse}").map_err(|e| e.to_string())?;
                }
            }
            Ok(())
        }
        Command::Spell { forms } => {
            for form in forms {
                let lf: LexicalForm = form.parse().map_err(|e| format!("{e}"))?;
                println!("{}", surface_of(&lf));
            }
            Ok(())
        }
        Command::Compile { lexicon, out } => {
            let lexicon = load_lexicon(&lexicon)?;
            let bytes = db::compile(&lexicon).map_err(|e| e.to_string())?;
            write_out(&out, &bytes)
        }
        Command::Dump { db, out } => {
            let flat =
                db::dump_flat(&open_db(&db)?).map_err(|e| format!("{}: {e}", db.display()))?;
            match out {
                Some(path) => write_out(&path, flat.as_bytes()),
                None => io::stdout()
                    .write_all(flat.as_bytes())
                    .map_err(|e| e.to_string()),
            }
        }
        Command::Restore { flat, out } => {
            let text =
                std::fs::read_to_string(&flat).map_err(|e| format!("{}: {e}", flat.display()))?;
            let bytes = db::restore_flat(&text).map_err(|e| format!("{}: {e}", flat.display()))?;
            write_out(&out, &bytes)
        }
        Command::Stats { db } => {
            let stats = open_db(&db)?
                .stats()
                .map_err(|e| format!("{}: {e}", db.display()))?;
            println!("{stats}");
            Ok(())
        }
        Command::Repl { source, fold_case } => repl(&Recognizer::open(&source)?, fold_case),
        Command::Serve {
            lexicon,
            db,
            flat,
            listen,
            static_dir,
            queue,
        } => {
            tracing_subscriber::fmt()
                .with_env_filter(
                    tracing_subscriber::EnvFilter::try_from_default_env()
                        .unwrap_or_else(|_| "info".into()),
                )
                .with_writer(io::stderr)
                .init();
            let config = ServiceConfig {
                lexicon,
                database: db,
                flat,
                queue_capacity: queue,
            };
            let state = Arc::new(AppState::load(config).map_err(|e| e.to_string())?);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            runtime
                .block_on(service::serve(listen, state, static_dir))
                .map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("engmorph: {msg}");
            ExitCode::from(2)
        }
    }
}
