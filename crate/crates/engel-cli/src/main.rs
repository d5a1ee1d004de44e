use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use engel_core::verify::CheckKind;

use engel_cli::run::{self, Command as RunCommand, Options};

/// Engel element and radical/central series calculator for finite groups,
/// with a verification harness over a built-in catalog.
#[derive(Parser, Debug)]
#[command(name = "engel", version, about)]
struct Cli {
    /// Group definition file (one `group <name> = ...` statement per line);
    /// `-` reads from stdin
    #[arg(long, global = true, value_name = "FILE")]
    defs: Option<PathBuf>,

    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Override the enumeration and analysis caps (clamped to a hard ceiling)
    #[arg(long, global = true, value_name = "N")]
    max_order: Option<usize>,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the left/right (bounded) Engel elements of a finite group
    Engel { name: String },
    /// Compute central series, nilpotency class, and radicals
    Series { name: String },
    /// Run harness checks over one group or the whole catalog
    Verify {
        what: VerifyWhat,
        /// Group name, or `catalog` for every built-in group
        #[arg(default_value = "catalog")]
        target: String,
    },
    /// Verify the symbolic infinite-group truncation
    VerifyExample {
        /// Component primes, strictly increasing and odd
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u64, 5, 7])]
        primes: Vec<u64>,
        /// Component exponents, strictly increasing, first one > 1
        #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 3, 4])]
        exps: Vec<u32>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyWhat {
    Baer,
    Heineken,
    Rho,
    All,
}

impl From<VerifyWhat> for CheckKind {
    fn from(w: VerifyWhat) -> CheckKind {
        match w {
            VerifyWhat::Baer => CheckKind::Baer,
            VerifyWhat::Heineken => CheckKind::Heineken,
            VerifyWhat::Rho => CheckKind::Rho,
            VerifyWhat::All => CheckKind::All,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let defs_text = match &cli.defs {
        Some(path) if path.as_os_str() == "-" => {
            use std::io::Read;
            let mut text = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut text) {
                eprintln!("error: cannot read stdin: {e}");
                return ExitCode::from(run::EXIT_INPUT_ERROR as u8);
            }
            Some(text)
        }
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(run::EXIT_INPUT_ERROR as u8);
            }
        },
        None => None,
    };
    let opts = Options {
        defs_text,
        json: cli.json,
        max_order: cli.max_order,
    };
    let command = match cli.command {
        Command::Engel { name } => RunCommand::Engel { name },
        Command::Series { name } => RunCommand::Series { name },
        Command::Verify { what, target } => RunCommand::Verify {
            what: what.into(),
            target,
        },
        Command::VerifyExample { primes, exps } => RunCommand::VerifyExample { primes, exps },
    };

    let outcome = run::run(command, &opts);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(run::EXIT_INPUT_ERROR as u8);
            }
        }
        None => {
            if outcome.exit_code == run::EXIT_OK || outcome.exit_code == run::EXIT_CHECK_FAILED {
                print!("{}", outcome.output);
            } else {
                eprint!("{}", outcome.output);
            }
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
