//! The command tree.

use std::path::PathBuf;

use bvlab_core::gadgets::{InjectiveMap, StagedSet};
use bvlab_core::{DyadicString, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cmd;
use crate::error::CliError;
use crate::inputs::{dyadic, injective_map, rational, rational_list, staged_set, string_list};
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "bvlab", version, about = "Exact experiments on functions of bounded variation")]
pub struct Cli {
    /// Write the experiment's CSV sidecar here.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and check the sawtooth gadgets.
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Jordan tree search, presentation extraction and the range decoders.
    #[command(subcommand)]
    Jordan(JordanCmd),
    /// Tree measures, prefix-free sets, powers and open-set codes.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Pseudo-slopes, slope witnesses, slope trees and alternation chains.
    #[command(subcommand)]
    Deriv(DerivCmd),
    /// Rational presentations: evaluation, validation and vertical shifts.
    #[command(subcommand)]
    Present(PresentCmd),
}

/// Depth cap shared by tree-based commands.
#[derive(Debug, Args)]
pub struct DepthArg {
    /// Depth cap for materialized trees.
    #[arg(long, env = "BVLAB_DEPTH_DEFAULT", default_value_t = 12)]
    pub depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum GadgetCmd {
    /// Range encoding: one sawtooth block with variation 2^{1-h(k)} per active k.
    Aca {
        /// The injective map as "k:n,k:n".
        #[arg(long, value_parser = injective_map)]
        h: InjectiveMap,
        #[arg(long, default_value_t = 12)]
        stage: usize,
        /// Report one variation row per block.
        #[arg(long)]
        check_variation: bool,
        /// Write stage `stage` as a polyfun file.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// Tree encoding: blocks on the boundary strings of a tree.
    Wkl {
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        depth: DepthArg,
        /// Offset between dead-string order and block index.
        #[arg(long, default_value_t = 3)]
        delay: u64,
        #[arg(long, default_value_t = 12)]
        stage: usize,
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// The shipped tree family: block bounds, variation sums, continuity modulus.
    Wwkl {
        /// Largest family index N.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        stage: usize,
        /// Target for the continuity modulus.
        #[arg(long, default_value = "1/2", value_parser = rational)]
        epsilon: Rational,
        /// Sample the partial sum on the grid of spacing 2^-r for the sidecar.
        #[arg(long, default_value_t = 10)]
        resolution: u32,
    },
    /// The jump function f(p) = Σ_{q_i < p} 2^-i and its slope witness.
    Jump {
        #[arg(long, value_parser = rational)]
        x: Rational,
        /// Partial-sum precision n (terms i <= n + 1).
        #[arg(long, default_value_t = 20)]
        n: u32,
        #[arg(long = "K", value_parser = rational)]
        k: Rational,
    },
    /// Separation: nodes at 2^-e pushed below or above the diagonal.
    Sep {
        /// Staged set A as "e:t,e:t".
        #[arg(long, value_parser = staged_set, default_value = "")]
        a: StagedSet,
        #[arg(long, value_parser = staged_set, default_value = "")]
        b: StagedSet,
        #[arg(long, default_value_t = 15)]
        max: u64,
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Auto,
}

#[derive(Debug, Subcommand)]
pub enum JordanCmd {
    /// Checks whether a string is in the Jordan tree of f with bound m.
    TreeMember {
        #[arg(long)]
        f: String,
        #[arg(long, value_parser = rational)]
        m: Rational,
        #[arg(long, value_parser = dyadic)]
        tau: DyadicString,
        #[arg(long, default_value_t = 24)]
        precision: u32,
    },
    /// The variation branch through the Jordan tree, to length k.
    Branch {
        #[arg(long)]
        f: String,
        #[arg(long, value_parser = rational)]
        m: Rational,
        #[arg(long, default_value_t = 200)]
        k: usize,
    },
    /// Extracts a presentation of a non-decreasing dominating function.
    Extract {
        #[arg(long)]
        f: String,
        #[arg(long, value_parser = rational)]
        m: Rational,
        #[arg(long, default_value_t = 200)]
        k: usize,
        /// Highest index checked among decided pairs.
        #[arg(long, default_value_t = 50)]
        limit: usize,
        #[arg(long, default_value_t = 24)]
        precision: u32,
        /// Write the decided pairs as a ratpres file.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// Recovers rng(h) from the running variation of the range gadget.
    DecodeAca {
        #[arg(long, value_parser = injective_map)]
        h: InjectiveMap,
        #[arg(long, default_value_t = 12)]
        stage: usize,
        /// Decode n in [0, bound).
        #[arg(long, default_value_t = 8)]
        bound: u64,
        #[arg(long, default_value_t = 100_000)]
        max_code: u64,
    },
    /// Finds a path through a tree from a dominating function.
    DecodeWkl {
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        depth: DepthArg,
        #[arg(long, value_enum, default_value = "auto")]
        case: CaseArg,
        /// Dominating function; defaults to the running variation of the tree gadget.
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = 3)]
        delay: u64,
        /// Jump scale: jumps of at least 2^-M select the jump case.
        #[arg(long = "M", default_value_t = 1)]
        m: u32,
        /// Variation bound K for the width argument.
        #[arg(long = "K", default_value_t = 1)]
        k: u64,
        /// Length of the reported path; defaults to the depth.
        #[arg(long)]
        path_len: Option<usize>,
        /// Codes searched by the first decoder.
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MeasureCmd {
    /// Level measures μ_d(T) for d <= depth.
    Level {
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Largest prefix-free subset, and a bounded-width path when K is given.
    PrefixFree {
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        depth: DepthArg,
        /// Width bound: every prefix-free subset has fewer than K members.
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long)]
        len: Option<usize>,
    },
    /// Certifies μ_d(T^n) >= 1 - q^n.
    Compose {
        #[arg(long)]
        tree: String,
        #[arg(long, value_parser = rational)]
        q: Rational,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Rewrites an open-set code in canonical form.
    Canonicalize {
        /// Code strings as "σ,τ".
        #[arg(long, value_parser = string_list)]
        code: std::vec::Vec<DyadicString>,
        #[arg(long, default_value_t = 1, conflicts_with = "point")]
        padding: usize,
        /// Canonicalize for the dyadic point 0.σ000...
        #[arg(long, value_parser = dyadic)]
        point: Option<DyadicString>,
        #[arg(long, default_value_t = 4)]
        i: usize,
    },
    /// Splits a member of T^n into blocks and returns the tail.
    Tail {
        #[arg(long, value_parser = dyadic)]
        z: DyadicString,
        #[arg(long)]
        tree: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        depth: DepthArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum DerivCmd {
    /// Upper and lower pseudo-slopes at x for shrinking h.
    Bounds {
        #[arg(long)]
        f: String,
        #[arg(long, value_parser = rational)]
        x: Rational,
        /// Scales h as "1/4,1/8"; defaults to 2^-1..2^-8.
        #[arg(long, value_parser = rational_list)]
        h: Option<std::vec::Vec<Rational>>,
        /// Grid points x ± h j / 2^r for every scale h, plus breakpoints and jumps.
        #[arg(long, default_value_t = 5)]
        resolution: u32,
    },
    /// Points a < x < b with |slope| > K on the shipped family's sum.
    Witness {
        /// Slope targets as "3,10,100".
        #[arg(long = "K", value_parser = rational_list)]
        k: std::vec::Vec<Rational>,
        #[arg(long, value_parser = rational)]
        delta: Rational,
        #[arg(long, value_parser = rational)]
        x: Rational,
        #[arg(long = "N", default_value_t = 4)]
        big_n: usize,
        #[arg(long, default_value_t = 64)]
        stage: usize,
    },
    /// The tree of strings avoiding slopes above 2^m, with its measure certificate.
    SlopeTree {
        #[arg(long)]
        f: String,
        #[arg(long)]
        m: u32,
        /// Extra levels: the tree is built to length m + k.
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
    /// Nested L-intervals with alternating slopes and their union measure.
    Alternation {
        /// Function; defaults to the staircase with its parameters.
        #[arg(long, default_value = "staircase:12")]
        f: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Starting points as "0,1/2".
        #[arg(long, value_parser = rational_list, default_value = "0,1/2")]
        x: std::vec::Vec<Rational>,
        /// Deepest L-interval level searched.
        #[arg(long, default_value_t = 16)]
        depth: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Points,
    Pairs,
}

#[derive(Debug, Subcommand)]
pub enum PresentCmd {
    /// Approximates g_Z(p) to within 2^-n.
    Eval {
        /// A ratpres file, or a function spec presented exactly.
        #[arg(long)]
        z: String,
        #[arg(long, value_parser = rational)]
        p: Rational,
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
    /// Checks the presentation clauses on a sample.
    Validate {
        #[arg(long)]
        z: String,
        #[arg(long, value_parser = rational_list, default_value = "0,1/4,1/2,3/4,1")]
        points: std::vec::Vec<Rational>,
        #[arg(long, value_parser = rational_list, default_value = "-1,0,1/4,1/2,3/4,1,2")]
        thresholds: std::vec::Vec<Rational>,
    },
    /// Builds a vertical shift keeping f + a away from rational values.
    Shift {
        #[arg(long)]
        f: String,
        #[arg(long, value_enum, default_value = "pairs")]
        mode: ModeArg,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

/// Parses `args`, runs the command, writes any sidecar, and returns the
/// report.
pub fn run<I, T>(args: I) -> Result<Report, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Clap(Box::new(e)))?;
    let report = match cli.command {
        Command::Gadget(c) => cmd::gadget::run(c)?,
        Command::Jordan(c) => cmd::jordan::run(c)?,
        Command::Measure(c) => cmd::measure::run(c)?,
        Command::Deriv(c) => cmd::deriv::run(c)?,
        Command::Present(c) => cmd::present::run(c)?,
    };
    if let Some(path) = &cli.csv {
        report.write_csv(path)?;
    }
    Ok(report)
}
