// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `tts`: build, check and embed twofold triple systems.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "tts",
    version,
    about = "Twofold triple systems and their 2-block-intersection graphs"
)]
pub struct Cli {
    /// worker threads for parallel searches (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// node-expansion budget for Hamilton cycle searches
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub budget: u64,
    /// random seed for randomized searches
    #[arg(long, global = true, default_value_t = 15)]
    pub seed: u64,
    /// write outputs and a manifest here instead of printing to stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a configuration, a cyclic family or an embedding half-pair
    Construct {
        #[command(subcommand)]
        what: ConstructKind,
    },
    /// Run checks on a design file and print a JSON report;
    /// `verify config <name>` certifies a named configuration instead
    Verify {
        file: PathBuf,
        /// configuration name, when `file` is the word `config`
        config: Option<String>,
        /// comma-separated: valid, complete, simple, blockcount, bipartite,
        /// connected, hamiltonian, 3connected, contains-f
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "valid,simple,blockcount,bipartite,connected"
        )]
        checks: Vec<String>,
        /// expected number of blocks for the blockcount check
        #[arg(long)]
        expect_blocks: Option<usize>,
    },
    /// Write the i-block-intersection graph of a design as an edge list
    Big {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        i: usize,
    },
    /// Certify the forced-edge property of a named configuration
    Prove {
        /// T, X, P, PP, XP, F or all
        name: String,
        /// largest configuration also enumerated directly
        #[arg(long, default_value_t = 200)]
        direct_limit: usize,
    },
    /// Embed a seed twofold system of order u into one of order v
    Embed {
        #[arg(long = "seed-file")]
        seed_file: PathBuf,
        #[arg(long)]
        v: u32,
        /// only report the parameters and the construction meta data
        #[arg(long)]
        dry_run: bool,
    },
    /// 1-factorize Circ(w, diffs)
    Factorize {
        #[arg(long)]
        w: u32,
        #[arg(long, value_delimiter = ',')]
        diffs: Vec<u32>,
        /// put the two parity matchings of this difference first
        #[arg(long)]
        ham: Option<u32>,
    },
    /// Exhaustive or sampled searches over small systems
    Search {
        #[command(subcommand)]
        what: SearchKind,
    },
    /// Run every check in sequence and print one line per check
    Reproduce,
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// T, X, P, PP, XP or F
    Config { name: String },
    /// one of the four cyclic difference families
    Family {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: u32,
    },
    /// the two partial Steiner systems used by the embedding
    Halves {
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum SearchKind {
    /// Hamiltonicity of every decomposable TTS(v) with connected 2-BIG
    Census {
        #[arg(long)]
        v: usize,
        /// sample this many random systems instead of enumerating
        #[arg(long)]
        sample: Option<usize>,
    },
    /// a random decomposable TTS(v) with connected 2-BIG
    Pair {
        #[arg(long)]
        v: usize,
        /// maximum number of disjoint pairs to draw
        #[arg(long, default_value_t = 1000)]
        attempts: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match commands::run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
