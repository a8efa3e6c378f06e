use clap::{Args, Parser, Subcommand};

use crate::render::Format;

const SEQ_HELP: &str = "\
Sequence literal:
  seq  := \"per(\" word \")\"
        | \"l:per(\" word \")\" [ \"mid(\" mid \")\" ] \"r:per(\" word \")\"
  mid  := word | word \"|\" word
  word := { \"1\" | \"2\" }
Position 0 is the first digit after the bar, or the first digit of mid without a bar.";

const NUM_HELP: &str = "\
Numbers are exact: integers, decimals, p/q, b^e or b^-e (e may be a product such as 3*68),
sqrt(n), and sums of these, e.g. 3+6^-204 or sqrt(12).";

#[derive(Parser, Debug)]
#[command(
    name = "spectra",
    version,
    about = "Exact Markov and Lagrange spectrum computations near 3"
)]
#[command(after_help = NUM_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "SPECTRA_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Digits in decimal shadows of exact values.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..=1000))]
    pub digits: u64,
    /// Extension depth limit for refutations.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_depth: u64,
    /// Node limit per refutation search.
    #[arg(long, global = true, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: u64,
    /// Re-check results through independent code paths.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Markov value of an eventually periodic sequence, or the value of a finite continued fraction.
    #[command(after_help = SEQ_HELP)]
    Eval {
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        seq: Option<String>,
        /// λ at this position instead of the Markov value.
        #[arg(long, requires = "seq", allow_hyphen_values = true)]
        at: Option<i64>,
        /// Finite word w: prints [0; w].
        #[arg(long)]
        word: Option<String>,
    },
    /// Cylinder I(w), its length and r(w).
    Interval {
        #[arg(long)]
        word: String,
    },
    /// Ordered alphabets of the tree up to a depth.
    Alphabets {
        #[arg(long)]
        n: usize,
    },
    /// Words of the Farey sequence F_n.
    Farey {
        #[arg(long)]
        n: usize,
    },
    /// Alphabet of a word of length 3n through the renormalization chain.
    Renorm {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: Option<usize>,
        /// Decompose over this alphabet, given by its U/V witness, instead of searching.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// The language Σ(t, n), or the membership of one word.
    Sigma {
        #[arg(long)]
        t: String,
        #[arg(long, required_unless_present = "word")]
        n: Option<usize>,
        #[arg(long, conflicts_with = "n")]
        word: Option<String>,
        /// List factors of Markov periods instead (t must be 3).
        #[arg(long)]
        oracle: bool,
    },
    /// Good/bad classification of a cut L|R (digits or a/b letters).
    Cuts {
        #[arg(long)]
        cut: String,
        #[arg(long, default_value_t = spectra_core::lang::cuts::CUT_SEARCH_DEPTH)]
        depth: usize,
    },
    /// Image of a cut under a substitution word.
    Pushcut {
        #[arg(long)]
        subst: String,
        #[arg(long)]
        cut: String,
        /// good-symmetric, good-asymmetric, bad-symmetric or bad-asymmetric.
        #[arg(long)]
        kind: String,
    },
    /// Connecting sequence through the Farey words and its Markov value.
    Connect {
        /// ab, ba, a-to-αβ or αβ-to-b.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// U/V witness of the alphabet for the αβ kinds.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Dimension brackets: d(t) upper bound from Σ(t, m), or a free block system.
    Dim {
        #[arg(long, required_unless_present_any = ["blocks", "sweep"])]
        t: Option<String>,
        #[arg(long, default_value_t = 12)]
        m: usize,
        /// Comma-separated blocks of equal length.
        #[arg(long, conflicts_with_all = ["t", "sweep"])]
        blocks: Option<String>,
        /// Concatenate the blocks this many times before bracketing.
        #[arg(long, default_value_t = 1, requires = "blocks")]
        level: usize,
        /// Also decide whether every concatenation of the blocks stays at most this value.
        #[arg(long, requires = "blocks")]
        certify: Option<String>,
        /// Grid t = 3+6^-3n for n in a range such as 2..6.
        #[arg(long, conflicts_with = "t")]
        sweep: Option<String>,
        /// uniform or per-block.
        #[arg(long, default_value = "per-block")]
        distortion: String,
        /// Add elapsed wall time (the output then depends on the machine).
        #[arg(long)]
        timing: bool,
    },
    /// Main term of d(3+ρ) from the Lambert function.
    Asym {
        /// One or more values of ρ, e.g. 6^-18 or e^-100.
        #[arg(long, num_args = 1.., required = true, allow_hyphen_values = true)]
        rho: Vec<String>,
    },
    /// The dimension bound (log|log ρ| − log log|log ρ| + C)/|log ρ|.
    Bound {
        #[arg(long, num_args = 1.., required = true, allow_hyphen_values = true)]
        rho: Vec<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c: f64,
    },
    /// Built-in property suites, one pass/fail line each.
    VerifySuite {
        /// Smaller instances.
        #[arg(long)]
        quick: bool,
    },
}
