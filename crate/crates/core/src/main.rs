use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use grc_core::format::{self, GrammarFile};
use grc_core::hybrid::{run_hybrid, HybridConfig, Phase1Engine, ShrinkFactor};
use grc_core::recompress::{fast, scan, Options};
use grc_core::slp::{build_slp_bytes, expand_slp_to_writer};
use grc_core::stats::RunStats;
use grc_core::symbol::symbols_from_bytes;
use grc_core::text::{fast::repair_fast, naive::repair_naive};
use grc_core::{corpus, Error, RePairGrammar, Slp};

#[derive(Parser)]
#[command(name = "grc", version, about = "RePair grammar compression from texts and straight-line programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a corpus file.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// k for fib/thue-morse, length for random/unary, copies for file-copy-mutate.
        #[arg(long)]
        param: u64,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Base string for file-copy-mutate.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Emit the text, or (fib only) its recursive SLP.
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build an SLP of a text with the pairing builder.
    BuildSlp {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write the human-readable variant.
        #[arg(long)]
        text: bool,
    },
    /// RePair computed on an SLP without decompressing it.
    Recompress {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SlpEngine::Scan)]
        engine: SlpEngine,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long)]
        debug_verify: bool,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        text: bool,
    },
    /// RePair on a plain text.
    Repair {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = TextEngine::Fast)]
        engine: TextEngine,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        text: bool,
    },
    /// Recompress until the text shrinks by a factor t, then finish on the text.
    Hybrid {
        #[arg(short, long)]
        input: PathBuf,
        /// Shrink factor (positive integer, or `inf` to never switch).
        #[arg(short, value_parser = parse_shrink)]
        t: ShrinkFactor,
        #[arg(long, value_enum, default_value_t = SlpEngine::Scan)]
        phase1: SlpEngine,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        text: bool,
    },
    /// Expand an .slp or .rpg file.
    Decompress {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare the expansions of two files (grammars or plain texts).
    Verify {
        #[arg(short)]
        a: PathBuf,
        #[arg(short)]
        b: PathBuf,
    },
    /// Print aggregate statistics of an .slp (by recompressing it) or an .rpg.
    Stats {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SlpEngine::Fast)]
        engine: SlpEngine,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Fib,
    ThueMorse,
    Random,
    Unary,
    FileCopyMutate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Slp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SlpEngine {
    Scan,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextEngine {
    Naive,
    Fast,
}

fn parse_shrink(s: &str) -> Result<ShrinkFactor, String> {
    if s == "inf" {
        return Ok(ShrinkFactor::Never);
    }
    match s.parse::<u64>() {
        Ok(t) if t >= 1 => Ok(ShrinkFactor::Finite(t)),
        _ => Err(format!("expected a positive integer or `inf`, got {s:?}")),
    }
}

/// Failure of a command, mapped to an exit code.
enum Failure {
    Error(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.into())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path)
        .map_err(|e| Failure::Error(Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))))
}

fn read_slp(path: &Path) -> Result<Slp, Failure> {
    match format::read_grammar(&read(path)?)? {
        GrammarFile::Slp(slp) => Ok(slp),
        GrammarFile::RePair(_) => {
            Err(Error::Param(format!("{} is a RePair grammar, expected an SLP", path.display())).into())
        }
    }
}

fn write_slp(path: &Path, slp: &Slp, text: bool) -> Result<(), Failure> {
    let bytes = if text { format::slp_to_text(slp).into_bytes() } else { format::slp_to_bytes(slp)? };
    Ok(fs::write(path, bytes)?)
}

fn write_rpg(path: &Path, g: &RePairGrammar, text: bool) -> Result<(), Failure> {
    let bytes = if text { format::rpg_to_text(g).into_bytes() } else { format::rpg_to_bytes(g)? };
    Ok(fs::write(path, bytes)?)
}

fn write_stats(path: Option<&PathBuf>, stats: &RunStats, extra: Option<String>) -> Result<(), Failure> {
    if let Some(path) = path {
        let mut out = stats.to_json_lines();
        if let Some(line) = extra {
            out.push_str(&line);
            out.push('\n');
        }
        fs::write(path, out)?;
    }
    Ok(())
}

/// The expansion of a grammar file, or the raw bytes of anything else.
fn expansion(path: &Path) -> Result<Vec<u8>, Failure> {
    let bytes = read(path)?;
    match format::read_grammar(&bytes) {
        Ok(GrammarFile::Slp(slp)) => {
            let mut out = Vec::new();
            expand_slp_to_writer(&slp, &mut out)?;
            Ok(out)
        }
        Ok(GrammarFile::RePair(g)) => {
            let mut out = Vec::new();
            g.expand_to_writer(&mut out)?;
            Ok(out)
        }
        Err(Error::BadMagic) => Ok(bytes),
        Err(e) => Err(e.into()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { family, param, sigma, seed, base, emit, output } => {
            if emit == Emit::Slp {
                let Family::Fib = family else {
                    return Err(Error::Param("--emit slp is only available for fib".into()).into());
                };
                let k = u32::try_from(param).map_err(|_| Error::Param("fib k out of range".into()))?;
                return write_slp(&output, &corpus::fibonacci_slp(k)?, false);
            }
            let small = |p: u64| u32::try_from(p).map_err(|_| Error::Param("parameter out of range".into()));
            let text = match family {
                Family::Fib => corpus::fibonacci(small(param)?)?,
                Family::ThueMorse => corpus::thue_morse(small(param)?)?,
                Family::Random => corpus::random(param, sigma, seed)?,
                Family::Unary => corpus::unary(param)?,
                Family::FileCopyMutate => {
                    let base = base.as_deref().map(read).transpose()?;
                    corpus::copy_mutate(param, sigma, seed, base.as_deref())?
                }
            };
            fs::write(&output, text)?;
        }
        Command::BuildSlp { input, output, text } => {
            let slp = build_slp_bytes(&read(&input)?)?;
            write_slp(&output, &slp, text)?;
        }
        Command::Recompress { input, engine, stats, debug_verify, output, text } => {
            let slp = read_slp(&input)?;
            let opts = Options { debug_verify };
            let (g, run_stats) = match engine {
                SlpEngine::Scan => scan::run_with(&slp, opts)?,
                SlpEngine::Fast => fast::run_fast_with(&slp, opts)?,
            };
            write_rpg(&output, &g, text)?;
            write_stats(stats.as_ref(), &run_stats, None)?;
        }
        Command::Repair { input, engine, stats, output, text } => {
            let symbols = symbols_from_bytes(&read(&input)?);
            let (g, run_stats) = match engine {
                TextEngine::Naive => repair_naive(&symbols, 256)?,
                TextEngine::Fast => repair_fast(&symbols, 256)?,
            };
            write_rpg(&output, &g, text)?;
            write_stats(stats.as_ref(), &run_stats, None)?;
        }
        Command::Hybrid { input, t, phase1, stats, output, text } => {
            let slp = read_slp(&input)?;
            let phase1 = match phase1 {
                SlpEngine::Scan => Phase1Engine::Scan,
                SlpEngine::Fast => Phase1Engine::Fast,
            };
            let out = run_hybrid(&slp, HybridConfig { t, phase1, opts: Options::default() })?;
            write_rpg(&output, &out.grammar, text)?;
            let summary = serde_json::to_string(&out.summary).expect("summary serializes");
            write_stats(stats.as_ref(), &out.stats, Some(summary.clone()))?;
            println!("{summary}");
        }
        Command::Decompress { input, output } => {
            let mut out = std::io::BufWriter::new(fs::File::create(&output)?);
            match format::read_grammar(&read(&input)?)? {
                GrammarFile::Slp(slp) => expand_slp_to_writer(&slp, &mut out)?,
                GrammarFile::RePair(g) => g.expand_to_writer(&mut out)?,
            }
            std::io::Write::flush(&mut out)?;
        }
        Command::Verify { a, b } => {
            let (x, y) = (expansion(&a)?, expansion(&b)?);
            if let Some(offset) = first_divergence(&x, &y) {
                return Err(Failure::Mismatch(format!(
                    "mismatch at offset {offset} (lengths {} and {})",
                    x.len(),
                    y.len()
                )));
            }
            println!("identical ({} bytes)", x.len());
        }
        Command::Stats { input, engine } => match format::read_grammar(&read(&input)?)? {
            GrammarFile::Slp(slp) => {
                let (_, run_stats) = match engine {
                    SlpEngine::Scan => scan::run(&slp)?,
                    SlpEngine::Fast => fast::run_fast(&slp)?,
                };
                println!("{}", serde_json::to_string(&run_stats.aggregates()).expect("aggregates serialize"));
            }
            GrammarFile::RePair(g) => {
                let summary = serde_json::json!({
                    "sigma": g.sigma,
                    "m": g.m(),
                    "finalLen": g.final_seq.len(),
                    "textLen": g.text_len(),
                });
                println!("{summary}");
            }
        },
    }
    Ok(())
}

fn first_divergence(x: &[u8], y: &[u8]) -> Option<usize> {
    match x.iter().zip(y).position(|(a, b)| a != b) {
        Some(i) => Some(i),
        None if x.len() != y.len() => Some(x.len().min(y.len())),
        None => None,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("grc: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Error(e)) => {
            eprintln!("grc: {e}");
            ExitCode::from(if e.is_internal() {
                4
            } else if e.is_format() {
                2
            } else {
                1
            })
        }
    }
}
