//! `wreath`: every library operation behind one command.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 on domain errors.
//! `--format json` output is the stable interface; text is for people.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "wreath", version, about = "Exact computation in Z^n wr Z^m and the groups G_S")]
pub struct Cli {
    /// Rank of the top group A = Z^m.
    #[arg(short = 'm', long = "m", global = true, default_value_t = 1)]
    pub m: usize,
    /// Rank of the bottom group B = Z^n.
    #[arg(short = 'n', long = "n", global = true, default_value_t = 1)]
    pub n: usize,
    /// Seed for every random draw; echoed in the report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Ball radius (G_S commands).
    #[arg(short = 'r', long, global = true)]
    pub radius: Option<usize>,
    /// Search budget: evaluation box for refutations, shift range for the demo.
    #[arg(long, global = true)]
    pub budget: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Product of two elements, e.g. `mul "a1 | 1" "1 | a1 - 1"`.
    Mul {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    Inv {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    Pow {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
    /// `ν` code of a Laurent polynomial in `a1..am`.
    Encode {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Polynomial with the given `ν` code, or NotACode.
    Decode { code: String },
    /// Element to its integer tuple.
    G2z {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Integer tuple (separate arguments, one quoted string, or stdin) to element.
    Z2g {
        #[arg(allow_negative_numbers = true, num_args = 0..)]
        entries: Vec<String>,
    },
    /// Product of two quoted tuples.
    TupleMul {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Whether `g ∈ ⟨a⟩` for `a ∈ A`.
    Cyc {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Whether `a^ℓ` divides `a^k`, with the witness solving `[b_1, a^k] = [z, a^ℓ]`.
    Divides {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        /// Defaults to `a1`.
        #[arg(long)]
        base: Option<String>,
    },
    /// Whether `h = g^q`, with a refuting point when not.
    Act {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Whether `(c_1..c_m, u_1..u_n)` is a basis.
    BasisCheck {
        #[arg(long = "c", allow_hyphen_values = true)]
        top: Vec<String>,
        #[arg(long = "u", allow_hyphen_values = true)]
        bottom: Vec<String>,
    },
    /// `a^k ↦ d^k`, certified modulo `G_4`.
    IsoTransfer {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        d: String,
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
    LcsMember {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long)]
        level: usize,
    },
    LcsCoords {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long)]
        level: usize,
    },
    LcsRank {
        #[arg(long)]
        level: usize,
    },
    /// Normal form of a word over `a A b B t T c` in `G_S`.
    GsEval {
        #[arg(long = "set")]
        set: String,
        /// Empty for the identity.
        word: Option<String>,
    },
    GsFingerprint {
        #[arg(long = "set")]
        set: String,
    },
    /// For each radius up to `-r`, a shifted set with the same ball.
    GsDemo {
        #[arg(long = "set", default_value = "universal")]
        set: String,
    },
    /// Random `g2z`/`z2g` and coordinate-map roundtrips.
    Roundtrip {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// The property suite with pass counts.
    Selftest {
        /// Acceptance-sized samples instead of the quick ones.
        #[arg(long)]
        full: bool,
    },
}

impl Command {
    /// Commands whose output depends on `--seed`.
    pub fn is_seeded(&self) -> bool {
        matches!(self, Command::Roundtrip { .. } | Command::Selftest { .. })
    }
}

/// A failed command: usage problems exit 1, domain errors exit 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { kind: String, message: String },
}

impl CliError {
    /// Names a library error by its variant, looking through wrappers.
    pub fn domain<E: std::fmt::Debug + std::fmt::Display>(e: E) -> Self {
        CliError::Domain {
            kind: variant_name(&format!("{e:?}")),
            message: e.to_string(),
        }
    }
}

const WRAPPERS: [&str; 6] = ["Wreath", "Laurent", "Definable", "Encoding", "Interp", "Condensed"];

fn variant_name(debug: &str) -> String {
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
        let name = &rest[..end];
        if WRAPPERS.contains(&name) && rest[end..].starts_with('(') {
            rest = &rest[end + 1..];
        } else {
            return name.to_string();
        }
    }
}

/// What a command produced, in both output formats.
pub struct Report {
    pub text: String,
    pub json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::dispatch(&cli) {
        Ok(report) => {
            let out = match cli.format {
                // text keeps deterministic output pipeable; only seeded runs echo the seed
                Format::Text if cli.command.is_seeded() => format!("{}\nseed: {}", report.text, cli.seed),
                Format::Text => report.text,
                Format::Json => {
                    let mut out = json!({ "seed": cli.seed });
                    if let (Value::Object(o), Value::Object(r)) = (&mut out, report.json) {
                        o.extend(r);
                    }
                    out.to_string()
                }
            };
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Domain { kind, message }) => {
            match cli.format {
                Format::Text => eprintln!("error: {kind}: {message}"),
                Format::Json => println!("{}", json!({ "seed": cli.seed, "error": kind, "message": message })),
            }
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_names_look_through_wrappers() {
        assert_eq!(variant_name("NotACode(\"x\")"), "NotACode");
        assert_eq!(variant_name("Definable(Wreath(ContextMismatch))"), "ContextMismatch");
        assert_eq!(variant_name("RadiusTooLarge { radius: 7, cap: 6 }"), "RadiusTooLarge");
        assert_eq!(variant_name("Definable(BadParameter(\"ℓ\"))"), "BadParameter");
    }
}
