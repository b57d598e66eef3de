//! Command-line front end for the `pnfree` library.

mod args;
mod commands;
mod error;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{Caps, FieldSpec};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "pnfree", version, about = "Primitive normal elements and primitive rational-function images")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Factoring budget per cyclotomic piece, in milliseconds (default from PNFREE_BUDGET_MS).
    #[arg(long, global = true)]
    budget_ms: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor an integer.
    Factor { n: String },
    /// Moduli, generator and the factorizations of q^n − 1 and x^n − 1.
    FieldInfo {
        #[arg(long)]
        field: FieldSpec,
    },
    /// Is α e-free?
    Nfree {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        alpha: String,
        /// A divisor of q^n − 1 (default q^n − 1).
        #[arg(long)]
        e: Option<u64>,
    },
    /// Is β normal, or g-free for a divisor g of x^n − 1?
    Normal {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        g: Option<String>,
    },
    /// Number of primitive normal elements.
    CountPn {
        #[arg(long)]
        field: FieldSpec,
    },
    /// Membership of f1/f2 in Υ(m1, m2).
    UpsilonCheck {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "3,2")]
        m: Caps,
        /// Restrict coefficients to F_q.
        #[arg(long)]
        base_coefficients: bool,
    },
    /// Compare the character-sum indicators with the direct freeness tests.
    RhoKappaVerify {
        #[arg(long)]
        field: FieldSpec,
    },
    /// Check the Weil-type bounds on random instances.
    WeilVerify {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// N_f(e1, e2, g) by enumeration and by characters.
    NfCount {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "3,2")]
        m: Caps,
        #[arg(long)]
        e1: Option<u64>,
        #[arg(long)]
        e2: Option<u64>,
        /// `full`, `one` or a coefficient list over F_q.
        #[arg(long, default_value = "full")]
        g: String,
        #[arg(long, value_enum, default_value_t = commands::Method::Direct)]
        method: commands::Method,
    },
    /// Classify one pair (q, n).
    Certify {
        #[arg(long, required_unless_present = "replay")]
        field: Option<FieldSpec>,
        #[arg(long, default_value = "3,2")]
        m: Caps,
        /// ℓ recipe: full, gcdM, q-1 or an integer. Restricts to that sieve.
        #[arg(long)]
        ell: Option<String>,
        /// g recipe: one, linear, small-degree, full or a coefficient list.
        #[arg(long)]
        g: Option<String>,
        #[arg(long, value_enum, default_value_t = commands::StrategyName::Default)]
        strategy: commands::StrategyName,
        /// Allow the 𝔑-based membership rule outside characteristic 2.
        #[arg(long)]
        unproven_yesbb: bool,
        /// Re-check a report previously written by this command.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Classify a range of pairs.
    Scan {
        /// Range of q, e.g. 9239..=20000; non prime powers are skipped.
        #[arg(long)]
        q: String,
        /// n values, e.g. 6,7,8,9 or 3..=10.
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "3,2")]
        m: Caps,
        #[arg(long)]
        ell: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, value_enum, default_value_t = commands::StrategyName::Default)]
        strategy: commands::StrategyName,
        #[arg(long)]
        unproven_yesbb: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Record per-pair wall time (output is then not byte-stable).
        #[arg(long)]
        timings: bool,
    },
    /// Threshold tables: smallest q for given (t, n), or smallest n for given q.
    Threshold {
        #[arg(long)]
        t: String,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value = "3,2")]
        m: Caps,
        /// generic, q2, q3, q4, q5, wq34 or custom:a,b.
        #[arg(long, default_value = "generic")]
        regime: String,
    },
    /// Confirm that no primitive normal α has f(α) primitive.
    Counterexample {
        #[arg(long)]
        field: FieldSpec,
        /// Defaults to the built-in function for (2,6), (3,3) or (3,4).
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value = "3,2")]
        m: Caps,
    },
    /// Regenerate a published table or claim at desk scale.
    Reproduce {
        target: reproduce::Target,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        q_max: Option<u64>,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Exit status of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    Indeterminate,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let budget = args::budget(cli.budget_ms)?;
    use Command::*;
    match cli.command {
        Factor { n } => commands::factor(&n, budget),
        FieldInfo { field } => commands::field_info(field),
        Nfree { field, alpha, e } => commands::nfree(field, &alpha, e),
        Normal { field, beta, g } => commands::normal(field, &beta, g.as_deref()),
        CountPn { field } => commands::count_pn(field),
        UpsilonCheck { field, f, m, base_coefficients } => commands::upsilon_check(field, &f, m, base_coefficients),
        RhoKappaVerify { field } => commands::rho_kappa_verify(field),
        WeilVerify { field, instances, seed, max_degree } => commands::weil_verify(field, instances, seed, max_degree),
        NfCount { field, f, m, e1, e2, g, method } => commands::nf_count(field, &f, m, e1, e2, &g, method),
        Certify { field, m, ell, g, strategy, unproven_yesbb, replay } => {
            let strategy = commands::strategy(strategy, ell.as_deref(), g.as_deref(), unproven_yesbb)?;
            commands::certify(field, m, &strategy, replay.as_deref(), budget)
        }
        Scan { q, n, m, ell, g, strategy, unproven_yesbb, out, csv, timings } => {
            let strategy = commands::strategy(strategy, ell.as_deref(), g.as_deref(), unproven_yesbb)?;
            commands::scan(&q, &n, m, &strategy, out.as_deref(), csv.as_deref(), timings, budget)
        }
        Threshold { t, n, q, m, regime } => commands::threshold(&t, n.as_deref(), q.as_deref(), m, &regime),
        Counterexample { field, f, m } => commands::counterexample(field, f.as_deref(), m),
        Reproduce { target, t, q_max, n_max, out, csv } => {
            reproduce::run(target, &reproduce::Options { t, q_max, n_max, out, csv, budget })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", CliError::Usage(e.render().to_string().trim().to_string()).to_json());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Indeterminate) => ExitCode::from(2),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(1)
        }
    }
}
