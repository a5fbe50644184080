use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use glq_core::numeric::ReducedWord;
use glq_core::report::{classical_suite, embed_suite, verify_suite, EmbedMode, VerificationReport, VERIFY_CAP};
use serde_json::json;

#[derive(Parser)]
#[command(name = "glq", version, about = "Checks Gauss-Lusztig charts of GL_q(N) and their quantum torus embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Thm61,
    Full,
    Reduced,
    Minimal,
    Example64,
}

impl From<Mode> for EmbedMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Thm61 => EmbedMode::Thm61,
            Mode::Full => EmbedMode::Full,
            Mode::Reduced => EmbedMode::Reduced,
            Mode::Minimal => EmbedMode::Minimal,
            Mode::Example64 => EmbedMode::Example64,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Minor relations, cluster variables, coproduct and (with --word) a numeric word chart.
    Verify {
        #[arg(long)]
        n: usize,
        /// Reduced word of the longest element, e.g. 121 or 3,2,1,3,2,3.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = VERIFY_CAP)]
        max_n: usize,
        /// Clock/shift dimension for the word chart [default: 5, or 3 for N >= 4].
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Builds an embedding into quantum tori and checks it.
    Embed {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Parameter round trip, total positivity and Haar densities at q = 1.
    Classical {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let (report, extra): (VerificationReport, Option<(&str, serde_json::Value)>) = match &cli.command {
        Command::Verify { n, word, max_n, dim, seed } => {
            let word = word.as_deref().map(|w| ReducedWord::parse(w, Some(*n))).transpose()?;
            let d = dim.unwrap_or(if *n >= 4 { 3 } else { 5 });
            (verify_suite(*n, word.as_ref(), *max_n, d, *seed)?, None)
        }
        Command::Embed { n, mode } => {
            let (report, e) = embed_suite(*n, (*mode).into())?;
            (report, Some(("morphism", serde_json::to_value(e.morphism.to_json())?)))
        }
        Command::Classical { n, samples, seed } => {
            let (report, log) = classical_suite(*n, *samples, *seed)?;
            (report, Some(("samples", serde_json::to_value(log)?)))
        }
    };
    let text = match cli.format {
        Format::Json => {
            let mut v = json!({ "report": report });
            if let Some((key, value)) = extra {
                v[key] = value;
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Text => {
            let mut t = report.to_text();
            if let Some(("morphism", m)) = &extra {
                for img in m["images"].as_array().into_iter().flatten() {
                    t += &format!("  {} -> {}\n", img["generator"].as_str().unwrap_or("?"), img["rendered"].as_str().unwrap_or("?"));
                }
            }
            t
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
