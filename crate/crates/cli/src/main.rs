mod commands;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zpgrowth::moore::GrowthParams;
use zpgrowth::selftest::SelftestConfig;
use zpgrowth::{Error, Limits};

use commands::{Ctx, Output};
use table::Format;

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Exact algebra over Z/p^s: free Lie algebras, their homology, Moore-space
/// combinatorics and growth certificates.
#[derive(Parser)]
#[command(name = "zpgrowth", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "ZPGROWTH_FORMAT", default_value = "json")]
    format: Format,

    /// Disable every resource guard.
    #[arg(long, global = true)]
    unsafe_limits: bool,

    /// Largest number of tensor words allowed in one weight.
    #[arg(long, global = true)]
    max_words: Option<u64>,

    /// Largest weight p^k·wt(x) allowed for τ/σ.
    #[arg(long, global = true)]
    max_tau_sigma_weight: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Witt numbers W_n(k) for k = 1..K.
    Witt {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        max_k: u64,
    },
    /// Basic products on n generators per weight, checked against W_n(k).
    Hall {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_k: usize,
        /// Print the products themselves.
        #[arg(long)]
        list: bool,
    },
    /// Summand decomposition of L(V) ⊗ Z/p^s per weight and degree.
    LieDims {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Coefficient exponent s ≤ r (defaults to r).
        #[arg(long)]
        s: Option<u32>,
        /// Comma-separated generator degrees, e.g. 2,1.
        #[arg(long)]
        degrees: String,
        #[arg(long)]
        max_weight: usize,
    },
    /// Homology of L(x, dx) ⊗ F_p per weight: dims of cycles, boundaries, homology.
    Homology {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        deg_x: u32,
        #[arg(long)]
        max_weight: usize,
    },
    /// The cycles τ_k(x), σ_k(x) in L(x, dx).
    TauSigma {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 2)]
        deg_x: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Weighted-dimension inequalities for L(x, dx) ⊗ F_p, k = 1..K.
    Ineq {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        deg_x: u32,
        #[arg(long)]
        max_k: usize,
    },
    /// Cumulative boundary dimensions of L(x, dx) ⊗ F_p and their lower bound.
    BoundaryGrowth {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        deg_x: u32,
        #[arg(long)]
        max_k: usize,
    },
    /// Split P^n(ℓ) into prime-power Moore spaces.
    MooreSplit {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
    },
    /// P^n(p^r)^{∧k1} ∧ P^m(p^r)^{∧k2}, checked against the iterated smash.
    MooreSmash {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Hilton–Milnor factors of ΩΣ(P^n ∨ P^m) through weight K.
    MooreHm {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long = "K")]
        max_k: u32,
    },
    /// Lower-bound certificate for torsion summands, with growth analysis.
    ///
    /// The stable offset j has no default; it must come from the literature
    /// for the chosen n, m, p.
    MooreGrowth {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        j: u32,
        #[arg(long = "K")]
        max_k: u32,
        #[arg(long, default_value_t = zpgrowth::growth::DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, default_value_t = zpgrowth::growth::DEFAULT_WINDOW)]
        window: f64,
    },
    /// Classify a sequence as exponential or subexponential.
    GrowthAnalyze {
        /// Comma-separated non-negative integers a_start, a_start+1, …
        #[arg(long)]
        values: String,
        #[arg(long, default_value_t = 1)]
        start: i64,
        #[arg(long, default_value_t = zpgrowth::growth::DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, default_value_t = zpgrowth::growth::DEFAULT_WINDOW)]
        window: f64,
    },
    /// Exhaustive and randomized self-checks of the algebra kernels.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        exhaustive_s: u32,
        #[arg(long, default_value_t = 4)]
        random_s: u32,
        #[arg(long, default_value_t = 1000)]
        runs: u64,
    },
}

fn run(cli: Cli) -> zpgrowth::Result<Output> {
    let mut limits = Limits {
        unsafe_limits: cli.unsafe_limits,
        tau_sigma_weight: cli.max_tau_sigma_weight,
        ..Limits::default()
    };
    if let Some(w) = cli.max_words {
        limits.max_words = w;
    }
    let ctx = Ctx {
        format: cli.format,
        limits,
    };
    use Command::*;
    match cli.command {
        Witt { n, max_k } => commands::witt_table(&ctx, n, max_k),
        Hall { n, max_k, list } => commands::hall(&ctx, n, max_k, list),
        LieDims {
            p,
            r,
            s,
            degrees,
            max_weight,
        } => commands::lie_dims(&ctx, p, r, s, &commands::parse_degrees(&degrees)?, max_weight),
        Homology { p, deg_x, max_weight } => commands::homology_table(&ctx, p, deg_x, max_weight),
        TauSigma { p, r, deg_x, k } => commands::tau_sigma(&ctx, p, r, deg_x, k),
        Ineq { p, deg_x, max_k } => commands::ineq(&ctx, p, deg_x, max_k),
        BoundaryGrowth { p, deg_x, max_k } => commands::boundary(&ctx, p, deg_x, max_k),
        MooreSplit { n, ell } => commands::moore_split(&ctx, n, ell),
        MooreSmash { n, m, k1, k2, p, r } => commands::moore_smash(&ctx, n, m, k1, k2, p, r),
        MooreHm { n, m, p, r, max_k } => commands::moore_hm(&ctx, n, m, p, r, max_k),
        MooreGrowth {
            n,
            m,
            p,
            r,
            s,
            j,
            max_k,
            eps,
            window,
        } => commands::moore_growth(
            &ctx,
            &GrowthParams {
                n,
                m,
                p,
                r,
                s,
                j,
                max_k,
            },
            eps,
            window,
        ),
        GrowthAnalyze {
            values,
            start,
            eps,
            window,
        } => commands::growth_analyze(&ctx, &values, start, eps, window),
        Selftest {
            seed,
            p,
            exhaustive_s,
            random_s,
            runs,
        } => commands::selftest(
            &ctx,
            &SelftestConfig {
                seed,
                p,
                exhaustive_s,
                random_s,
                random_runs: runs,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::FAILURE;
            }
            match out.violation {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("zpgrowth: self-check failed: {msg}");
                    ExitCode::from(EXIT_VIOLATION)
                }
            }
        }
        Err(e) => {
            eprintln!("zpgrowth: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => EXIT_RESOURCE,
                _ => EXIT_INPUT,
            })
        }
    }
}
