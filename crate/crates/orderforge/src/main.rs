use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use orderforge::classes::ClassSpec;
use orderforge::cli::{self, Command, CommandConfig, OutputFormat, Verdict};

#[derive(Parser)]
#[command(
    name = "orderforge",
    version,
    about = "Exact finite order theory: dimension, product realizers, amalgamation, generic permutation stages, interval decompositions"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Exact dimension of a poset with one minimum realizer.
    Dim {
        /// Poset as a structure JSON file with a single binary relation `leq`.
        input: PathBuf,
        /// Write the Hasse diagram in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Emit the crown poset on 2k elements as JSON.
    Crown {
        k: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Exhaustive realizer-pair oracle for a product of two chains.
    LemmaA {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Point-count ceiling for the pair scan (default 9, env ORDERFORGE_MAX_N).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Classify every embedding between two chain products.
    LemmaB {
        /// Source factor sizes as `a,b`.
        #[arg(long, value_parser = parse_pair)]
        src: (usize, usize),
        /// Target factor sizes as `c,d`.
        #[arg(long, value_parser = parse_pair)]
        dst: (usize, usize),
    },
    /// Scan all spans of bounded size for amalgamation failures.
    ApCheck {
        #[arg(long, value_parser = parse_class)]
        class: ClassSpec,
        #[arg(long)]
        max_size: usize,
        /// Extra points allowed on top of the glued vertex set.
        #[arg(long, default_value_t = 0)]
        slack: usize,
    },
    /// Reproduce the built-in six-point amalgamation counterexample.
    CrownCounterexample,
    /// Search for a weak-amalgamation witness for a poset.
    Wap {
        input: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: ClassSpec,
        #[arg(long, default_value_t = 9)]
        size_abar: usize,
        #[arg(long, default_value_t = 5)]
        size_bc: usize,
    },
    /// Grow a generic permutation stage to a target extension level.
    Generic {
        #[arg(long)]
        ep: usize,
        #[arg(long, default_value_t = 500)]
        max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also emit the poset reduct of the stage.
        #[arg(long)]
        emit_reduct: bool,
    },
    /// Poset reduct of a stage given as rank-sequence JSON.
    Reduct {
        input: PathBuf,
        /// Emit the strict view (`lt` pairs) instead of the reflexive `leq`.
        #[arg(long)]
        strict: bool,
    },
    /// Isomorphism classes of induced substructures up to a size.
    Age {
        input: PathBuf,
        #[arg(short, long)]
        m: usize,
    },
    /// Count class members per size up to isomorphism.
    Profile {
        #[arg(long, value_parser = parse_class)]
        class: ClassSpec,
        #[arg(short = 'N', long)]
        n: usize,
        /// Write a static SVG of the profile curve.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Minimal monomorphic interval decomposition of an ordered structure.
    Decomp {
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Coherent decomposition branch through a tower of structures.
    Koenig {
        /// Manifest JSON: {"stages": [...], "subsets": [[...], ...]}.
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

fn parse_pair(text: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `a,b`, got {text:?}"));
    }
    let a = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let b = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn parse_class(text: &str) -> Result<ClassSpec, String> {
    ClassSpec::parse(text).map_err(|e| e.to_string())
}

impl From<CliCommand> for Command {
    fn from(c: CliCommand) -> Command {
        match c {
            CliCommand::Dim { input, dot } => Command::Dim { input, dot },
            CliCommand::Crown { k, dot } => Command::Crown { k, dot },
            CliCommand::LemmaA { a, b, bound } => Command::LemmaA { a, b, bound },
            CliCommand::LemmaB { src, dst } => Command::LemmaB { src, dst },
            CliCommand::ApCheck {
                class,
                max_size,
                slack,
            } => Command::ApCheck {
                class,
                max_size,
                slack,
            },
            CliCommand::CrownCounterexample => Command::CrownCounterexample,
            CliCommand::Wap {
                input,
                class,
                size_abar,
                size_bc,
            } => Command::Wap {
                input,
                class,
                size_abar,
                size_bc,
            },
            CliCommand::Generic {
                ep,
                max,
                seed,
                emit_reduct,
            } => Command::Generic {
                ep,
                max,
                seed,
                emit_reduct,
            },
            CliCommand::Reduct { input, strict } => Command::Reduct { input, strict },
            CliCommand::Age { input, m } => Command::Age { input, m },
            CliCommand::Profile { class, n, plot } => Command::Profile { class, n, plot },
            CliCommand::Decomp { input, k } => Command::Decomp { input, k },
            CliCommand::Koenig { input, k } => Command::Koenig { input, k },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = CommandConfig {
        format: match cli.format {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Json => OutputFormat::Json,
        },
        command: cli.command.into(),
    };
    match cli::run(&config) {
        Ok(output) => {
            print!("{}", output.text);
            match output.verdict {
                Verdict::Pass => ExitCode::SUCCESS,
                Verdict::Fail => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
