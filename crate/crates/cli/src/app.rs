//! Argument surface and dispatch.  Exit codes: 0 success, 1 environment
//! failure, 2 invalid input (the message names the violated invariant),
//! 3 budget exceeded, 4 a proved bound measured violated.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{self, Ctx, Format};
use crate::formats::CliError;

const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "bun2",
    version,
    about = "Hyperelliptic class groups over small finite fields: zeta identities, \
             divisor-class enumeration, bundle-type measures, and intersection bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Seed for every randomized choice; identical seeds give identical bytes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Enumeration cost ceiling (group elements / sieve entries).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Worker threads; never changes output bytes, only wall time.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Report format; `text` picks each command's natural shape.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Zeta numerator, class number, and theta strata counts of a curve.
    Zeta {
        /// Curve spec file: {"p": .., "k": .., "f": [c0, c1, ..]}.
        #[arg(long)]
        curve: PathBuf,
        /// Extend the theta table to this stratum (default: genus).
        #[arg(long)]
        max_n: Option<u32>,
    },
    /// Draw a uniform monic squarefree curve of the given genus over F_q.
    Randcurve {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        genus: usize,
    },
    /// List divisor classes in canonical order, or just count them per degree.
    JacobianEnumerate {
        #[arg(long)]
        curve: PathBuf,
        /// Emit at most this many class literals.
        #[arg(long)]
        limit: Option<u64>,
        /// Only report per-degree totals (parallelizable).
        #[arg(long)]
        census: bool,
    },
    /// Empirical bundle-type distribution of one curve vs the natural law.
    EquidSingle {
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Field size for --genus-ladder runs.
        #[arg(long)]
        q: Option<u64>,
        /// LO:HI genus sweep; one random curve per rung, tv per genus.
        #[arg(long)]
        genus_ladder: Option<String>,
    },
    /// Joint distribution of (type L, type M-L) against the product law.
    EquidPair {
        #[arg(long)]
        curve: PathBuf,
        /// Auxiliary class M as a literal u=[..];v=[..].
        #[arg(long)]
        m: Option<String>,
        /// Declared twist degree of M (default 2g-2).
        #[arg(long)]
        m_deg: Option<i64>,
        /// Draw M uniformly from the class group instead.
        #[arg(long)]
        random_m: bool,
    },
    /// Proportion of classes in the (a, b)-shifted theta intersection.
    ThetaRatio {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Auxiliary class M as a literal (declared degree 2g-a-b).
        #[arg(long)]
        m: Option<String>,
        /// Draw M uniformly among classes of reduced degree g.
        #[arg(long)]
        random_m: bool,
    },
    /// Euler characteristic of the general addition-map fiber, with bound.
    Chi {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
    },
    /// Polar multiplicity coefficient c_{k,r,s}, with bound.
    Polar {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
    },
    /// Sweep chi and polar values against their proved bounds.
    Audit {
        /// Genus N or range LO:HI (1..=40).
        #[arg(long)]
        g: String,
    },
    /// Canonical seven-part decomposition of two effective divisors.
    Decompose {
        #[arg(long)]
        curve: PathBuf,
        /// Work over the degree-m extension field.
        #[arg(long, default_value_t = 1)]
        ext: u32,
        /// First divisor literal, e.g. 2,1;4,0;inf:1 (or 0 for empty).
        #[arg(long)]
        d1: String,
        /// Second divisor literal.
        #[arg(long)]
        d2: String,
    },
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let ctx = Ctx {
        seed: cli.seed,
        budget: cli.budget,
        workers: cli.workers.max(1),
        format: cli.format,
    };
    match &cli.cmd {
        Cmd::Zeta { curve, max_n } => commands::cmd_zeta(&ctx, curve, *max_n),
        Cmd::Randcurve { q, genus } => commands::cmd_randcurve(&ctx, *q, *genus),
        Cmd::JacobianEnumerate {
            curve,
            limit,
            census,
        } => commands::cmd_jacobian_enumerate(&ctx, curve, *census, *limit),
        Cmd::EquidSingle {
            curve,
            q,
            genus_ladder,
        } => commands::cmd_equid_single(&ctx, curve.as_deref(), *q, genus_ladder.as_deref()),
        Cmd::EquidPair {
            curve,
            m,
            m_deg,
            random_m,
        } => commands::cmd_equid_pair(&ctx, curve, m.as_deref(), *m_deg, *random_m),
        Cmd::ThetaRatio {
            curve,
            a,
            b,
            m,
            random_m,
        } => commands::cmd_theta_ratio(&ctx, curve, *a, *b, m.as_deref(), *random_m),
        Cmd::Chi { g, a, b } => commands::cmd_chi(&ctx, *g, *a, *b),
        Cmd::Polar { g, k, r, s } => commands::cmd_polar(&ctx, *g, *k, *r, *s),
        Cmd::Audit { g } => commands::cmd_audit(&ctx, g),
        Cmd::Decompose { curve, ext, d1, d2 } => {
            commands::cmd_decompose(&ctx, curve, *ext, d1, d2)
        }
    }
}

/// Full process entry: parse, run, deliver the report, map errors to codes.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            let delivered = match &cli.out {
                Some(path) => fs::write(path, report.as_bytes()).map_err(CliError::from),
                None => std::io::stdout()
                    .write_all(report.as_bytes())
                    .map_err(CliError::from),
            };
            match delivered {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {}", e.msg);
                    ExitCode::from(e.code as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code as u8)
        }
    }
}
