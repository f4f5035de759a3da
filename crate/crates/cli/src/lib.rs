//! Library side of the `spapprox` binary. Argument definitions, the
//! constraint grammar, the report and command execution live here so tests
//! can drive commands in-process.
//!
//! ```
//! use clap::Parser;
//! use spapprox_cli::{execute, exit, Cli};
//!
//! let cli = Cli::try_parse_from(["spapprox", "gen", "--fixture", "table3"]).unwrap();
//! let out = execute(&cli);
//! assert_eq!(out.stdout, "X1,X2\n,1\n2,2\n");
//! assert_eq!(out.exit, exit::YES);
//! ```

pub mod grammar;
pub mod report;
mod run;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use run::{execute, Outcome};

/// Exit codes.
pub mod exit {
    /// The constraint holds, or the measure is within the bound.
    pub const YES: i32 = 0;
    pub const NO: i32 = 1;
    pub const ERROR: i32 = 2;
    pub const EXHAUSTED: i32 = 3;
}

#[derive(Parser, Debug)]
#[command(
    name = "spapprox",
    version,
    about = "Strongly possible keys and FDs over tables with NULLs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Also write the structured JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,

    /// Give up after this many search nodes (exit code 3).
    #[arg(long, global = true, value_name = "N")]
    pub node_cap: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Delimited table; `-` reads standard input.
    pub input: PathBuf,

    /// Cell text that stands for NULL.
    #[arg(long, default_value = "")]
    pub null_token: String,

    /// Field delimiter: one byte, or `tab`.
    #[arg(long, default_value = ",", value_parser = grammar::parse_delimiter)]
    pub delimiter: u8,

    /// The first line is data; attributes are named A1, A2, ...
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether the constraint holds in some strongly possible world.
    Check {
        #[command(flatten)]
        input: Input,
        /// `key=A,B`, `fd=A,B->C` or `keys=A,B;B,C`.
        constraint: String,
    },
    /// Compute g3 (rows to remove) or g5 (rows to add), as a fraction of the table.
    Measure {
        #[command(flatten)]
        input: Input,
        constraint: String,
        /// `g3` or `g5`.
        kind: String,
        /// Answer "is the measure at most p/q?" instead.
        #[arg(long, value_name = "P/Q")]
        bound: Option<String>,
    },
    /// Is g3 of a key system equal to the largest g3 of its keys?
    Maxg3 {
        #[command(flatten)]
        input: Input,
        /// Keys separated by `;`, e.g. `A,B;B,C`.
        keys: String,
    },
    /// Brute-force ground truth for small tables.
    Oracle {
        #[command(flatten)]
        input: Input,
        constraint: String,
        /// `g3` or `g5`; omitted for a satisfaction check.
        kind: Option<String>,
        #[arg(long, value_name = "P/Q")]
        bound: Option<String>,
    },
    /// Print a seeded random table, or a named example table.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        columns: usize,
        /// Symbols per column.
        #[arg(long, default_value_t = 3)]
        symbols: usize,
        #[arg(long, default_value_t = 0.2)]
        null_rate: f64,
        #[arg(long, default_value_t = 0.0)]
        duplicate_rate: f64,
        /// Print this example table instead: cars, table2, table3, table4, keysystem.
        #[arg(long, conflicts_with_all = ["seed", "rows", "columns", "symbols", "null_rate", "duplicate_rate"])]
        fixture: Option<String>,
        #[arg(long, default_value = "")]
        null_token: String,
        #[arg(long, default_value = ",", value_parser = grammar::parse_delimiter)]
        delimiter: u8,
    },
}
