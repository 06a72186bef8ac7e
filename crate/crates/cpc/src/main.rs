//! `cpc`: workbench for a pattern-matching process calculus. Parse terms,
//! run and explore them, unify patterns, compare behaviors, and translate
//! tuple-space or message-passing programs into the calculus.

use clap::{Parser, Subcommand, ValueEnum};
use cpc::cmd::{self, Dialect, Outcome};
use std::io::Read;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "cpc",
    version,
    about = "workbench for a pattern-matching process calculus"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum DialectArg {
    Cpc,
    Linda,
    Spi,
}

impl DialectArg {
    fn to_dialect(self) -> Dialect {
        match self {
            DialectArg::Cpc => Dialect::Cpc,
            DialectArg::Linda => Dialect::Linda,
            DialectArg::Spi => Dialect::Spi,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FromArg {
    Linda,
    Spi,
}

impl FromArg {
    fn to_dialect(self) -> Dialect {
        match self {
            FromArg::Linda => Dialect::Linda,
            FromArg::Spi => Dialect::Spi,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
    Interactive,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term and echo its canonical print
    Parse {
        /// Input file, or `-` for stdin
        file: PathBuf,
        /// Input language; inferred from the extension when omitted
        #[arg(long, value_enum)]
        dialect: Option<DialectArg>,
        /// Print with the calculus's own marks instead of ASCII
        #[arg(long)]
        unicode: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a process: exhaustive state graph, seeded trace, or prompt
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "random")]
        mode: ModeArg,
        /// Step bound; exhausting it is reported apart from deadlock
        #[arg(long, default_value_t = 16)]
        steps: usize,
        /// Seed for random mode; same seed, same trace
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        unicode: bool,
        #[arg(long)]
        json: bool,
    },
    /// Unify two patterns given as arguments
    Unify {
        left: String,
        right: String,
        #[arg(long)]
        unicode: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the barbs of a process
    Barbs {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Emit the labelled transition graph to a depth
    Lts {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        unicode: bool,
        #[arg(long)]
        json: bool,
    },
    /// Play the bounded bisimulation game between two processes
    Bisim {
        file_p: PathBuf,
        file_q: PathBuf,
        /// Rounds of the game
        #[arg(long)]
        depth: usize,
        /// Extra names the challenger may use, comma-separated
        #[arg(long, value_delimiter = ',')]
        pool: Vec<String>,
        /// Compound depth of challenge instantiations
        #[arg(long = "inst-depth", default_value_t = 1)]
        inst_depth: usize,
        /// Print the distinguishing trace when the game is lost
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        unicode: bool,
        #[arg(long)]
        json: bool,
    },
    /// Translate a tuple-space or message-passing program into the calculus
    Encode {
        #[arg(long, value_enum)]
        from: FromArg,
        file: PathBuf,
        /// Write here instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        unicode: bool,
    },
    /// Check a translation against its source, step for step
    CheckEncoding {
        #[arg(long, value_enum)]
        from: FromArg,
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportArg,
    },
    /// Run the bundled trade and equivalence suites
    Corpus {
        #[arg(long)]
        json: bool,
    },
}

/// Reads the input, with `-` standing for stdin. The label names the source
/// in error messages.
fn read_input(path: &Path) -> Result<(String, String), String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("<stdin>: {e}"))?;
        Ok(("<stdin>".into(), text))
    } else {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        Ok((path.display().to_string(), text))
    }
}

fn dispatch(cmd: Cmd) -> Result<Outcome, String> {
    match cmd {
        Cmd::Parse {
            file,
            dialect,
            unicode,
            json,
        } => {
            let (label, text) = read_input(&file)?;
            let d = dialect
                .map(DialectArg::to_dialect)
                .unwrap_or_else(|| Dialect::from_path(&label));
            cmd::parse_cmd(&label, d, &text, unicode, json)
        }
        Cmd::Run {
            file,
            mode,
            steps,
            seed,
            unicode,
            json,
        } => {
            let (label, text) = read_input(&file)?;
            match mode {
                ModeArg::Exhaustive => cmd::run_exhaustive(&label, &text, steps, unicode, json),
                ModeArg::Random => cmd::run_random(&label, &text, steps, seed, unicode, json),
                ModeArg::Interactive => {
                    let stdin = std::io::stdin();
                    let mut input = stdin.lock();
                    let mut out = std::io::stdout();
                    let code =
                        cmd::run_interactive(&label, &text, steps, unicode, &mut input, &mut out)?;
                    Ok(Outcome {
                        text: String::new(),
                        code,
                    })
                }
            }
        }
        Cmd::Unify {
            left,
            right,
            unicode,
            json,
        } => cmd::unify_cmd(&left, &right, unicode, json),
        Cmd::Barbs { file, json } => {
            let (label, text) = read_input(&file)?;
            cmd::barbs_cmd(&label, &text, json)
        }
        Cmd::Lts {
            file,
            depth,
            unicode,
            json,
        } => {
            let (label, text) = read_input(&file)?;
            cmd::lts_cmd(&label, &text, depth, unicode, json)
        }
        Cmd::Bisim {
            file_p,
            file_q,
            depth,
            pool,
            inst_depth,
            witness,
            unicode,
            json,
        } => {
            let (label_p, text_p) = read_input(&file_p)?;
            let (label_q, text_q) = read_input(&file_q)?;
            cmd::bisim_cmd(
                &label_p, &text_p, &label_q, &text_q, depth, &pool, inst_depth, witness,
                unicode, json,
            )
        }
        Cmd::Encode {
            from,
            file,
            out,
            unicode,
        } => {
            let (label, text) = read_input(&file)?;
            let o = cmd::encode_cmd(&label, from.to_dialect(), &text, unicode)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &o.text)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    Ok(Outcome {
                        text: String::new(),
                        code: o.code,
                    })
                }
                None => Ok(o),
            }
        }
        Cmd::CheckEncoding {
            from,
            file,
            steps,
            report,
        } => {
            let (label, text) = read_input(&file)?;
            let json = matches!(report, ReportArg::Json);
            cmd::check_encoding_cmd(&label, from.to_dialect(), &text, steps, json)
        }
        Cmd::Corpus { json } => cmd::corpus_cmd(json),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli.cmd) {
        Ok(o) => {
            print!("{}", o.text);
            o.code
        }
        Err(e) => {
            eprintln!("{e}");
            cmd::EXIT_USAGE
        }
    };
    std::process::exit(code);
}
