// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use branch_hecke::spectral::DEFAULT_SEED;
use branch_hecke::tree::DEFAULT_POINT_CAP;
use branch_hecke::verify::DEFAULT_CASES;
use clap::{Args, Parser, Subcommand};

pub const CACHE_ENV: &str = "BRANCH_HECKE_CACHE";

#[derive(Debug, Parser)]
#[command(
    name = "branch-hecke",
    version,
    about = "Suborbits, orbital schemes and Gelfand-pair decompositions for self-similar groups"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for the generic combinations and randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Directory for cached schemes and spectra.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GroupSource {
    /// Builtin group key (see `catalog list`).
    #[arg(long)]
    pub group: Option<String>,

    /// Presentation file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LevelArgs {
    #[command(flatten)]
    pub source: GroupSource,

    #[arg(long, short = 'n')]
    pub level: usize,

    /// `dinf`, a periodic digit string, or `HEAD(TAIL)`; defaults to the all-d ray.
    #[arg(long)]
    pub ray: Option<String>,

    /// Largest level size accepted.
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Builtin groups.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Image of a vertex under a word.
    Act {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        word: String,
        #[arg(long)]
        vertex: String,
    },
    /// Section of a word at a vertex.
    Section {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        word: String,
        #[arg(long)]
        vertex: String,
    },
    /// Order of a word acting on one level.
    Order {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        word: String,
        #[arg(long, short = 'n')]
        level: usize,
        #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
        cap: usize,
    },
    /// Root permutations of the sections of a word.
    Portrait {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Suborbits of the parabolic stabilizer.
    Orbits(LevelArgs),
    /// Orbital scheme and intersection numbers.
    Scheme {
        #[command(flatten)]
        level: LevelArgs,
        /// Emit the orbital graph as Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Degrees of the irreducible components.
    Decompose {
        #[command(flatten)]
        level: LevelArgs,
        /// Cross-check with the dense N×N computation.
        #[arg(long)]
        oracle: bool,
    },
    /// Randomized invariant suites.
    Verify {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Keys, degrees and generator counts.
    List,
    /// Presentation text of one group.
    Show { key: String },
}
