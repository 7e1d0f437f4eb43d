//! Thin command-line wrapper; all logic lives in the library.

use clap::{Args, Parser, Subcommand, ValueEnum};

use abshift::cli::{
    self, CheckSpecConfig, CommandConfig, DimensionConfig, EntropyConfig, ExpandConfig,
    OutputFormat, RunConfig, ScanConfig, USpec,
};
use abshift::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "abshift",
    about = "Digit expansions, specification checks, parameter scans and attractor dimensions \
             for intermediate beta-transformations x -> beta*x + alpha mod 1",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    JsonLines,
    Csv,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Working precision in binary digits.
    #[arg(long, default_value_t = 256, global = true)]
    precision_bits: u32,
    /// Output format.
    #[arg(long, value_enum, default_value = "json-lines", global = true)]
    format: Format,
    /// Write records to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Clone)]
struct UOpts {
    /// Preperiod digits of the expansion of 0 (comma separated).
    #[arg(long, value_delimiter = ',')]
    u_preperiod: Vec<u64>,
    /// Period digits of the expansion of 0 (comma separated).
    #[arg(long, value_delimiter = ',')]
    u_period: Vec<u64>,
    /// Named expansion-of-0 family: beta-shift, period2, period3, k3.
    #[arg(long)]
    seed_preset: Option<String>,
}

impl UOpts {
    fn to_uspec(&self) -> Result<USpec> {
        if let Some(name) = &self.seed_preset {
            if !self.u_preperiod.is_empty() || !self.u_period.is_empty() {
                return Err(Error::Precondition(
                    "give either --seed-preset or explicit --u words, not both".into(),
                ));
            }
            return USpec::preset(name);
        }
        Ok(USpec {
            preperiod: self.u_preperiod.clone(),
            period: self.u_period.clone(),
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Digit expansions of 0 and 1 with reconstruction residuals.
    Expand {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        u: UOpts,
        /// Offset parameter (decimal or p/q rational).
        #[arg(long)]
        alpha: Option<String>,
        /// Slope parameter (decimal or p/q rational).
        #[arg(long)]
        beta: Option<String>,
        /// Expansion-of-1 word: first digit, then the repeating tail.
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<u64>>,
        /// Alphabet size when solving from digit words.
        #[arg(long = "N")]
        n: Option<u64>,
        /// Number of digits to emit.
        #[arg(long, default_value_t = 32)]
        depth: usize,
    },
    /// Overlap sets of the endpoint expansions and the specification
    /// verdict.
    CheckSpec {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        u: UOpts,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<u64>>,
        #[arg(long = "N")]
        n: Option<u64>,
        /// Digits computed per endpoint when starting from parameters.
        #[arg(long, default_value_t = 128)]
        depth: usize,
        /// Largest prefix length searched.
        #[arg(long, default_value_t = 200)]
        depth_n: usize,
        /// Largest occurrence offset searched.
        #[arg(long, default_value_t = 400)]
        depth_j: usize,
    },
    /// Scan the parameter window (N-2, N]: grid membership probes plus
    /// exactly solved periodic members, with a Lipschitz trailer.
    Scan {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        u: UOpts,
        #[arg(long = "N")]
        n: u64,
        /// Uniform grid points over the window.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Period length of the solved expansion-of-1 words.
        #[arg(long, default_value_t = 1)]
        vlen: usize,
        /// Digits per membership probe / witness record.
        #[arg(long, default_value_t = 64)]
        depth: usize,
        /// Worker threads for the grid and the solved family.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Similarity dimension against a box-count estimate.
    Dimension {
        #[command(flatten)]
        common: CommonOpts,
        /// Alphabet size of the band family (x+i)/N, i = 1..N-2.
        #[arg(long = "N")]
        n: Option<u64>,
        /// Named system instead of --N: cantor.
        #[arg(long)]
        seed_preset: Option<String>,
        /// Composition depth of the attractor sample.
        #[arg(long, default_value_t = 7)]
        depth: usize,
    },
    /// Word counts and the entropy slope of a subshift.
    Entropy {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        u: UOpts,
        /// Named spec: golden, full2, fixed. Overrides digit words.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<u64>>,
        #[arg(long = "N")]
        n: Option<u64>,
        /// Longest word length counted.
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
}

fn build_config(cli: Cli) -> Result<RunConfig> {
    let (common, command) = match cli.command {
        Cmd::Expand { common, u, alpha, beta, v, n, depth } => (
            common,
            CommandConfig::Expand(ExpandConfig {
                alpha,
                beta,
                u: u.to_uspec()?,
                v,
                n_alphabet: n,
                depth,
            }),
        ),
        Cmd::CheckSpec { common, u, alpha, beta, v, n, depth, depth_n, depth_j } => (
            common,
            CommandConfig::CheckSpec(CheckSpecConfig {
                alpha,
                beta,
                u: u.to_uspec()?,
                v,
                n_alphabet: n,
                depth,
                depth_n,
                depth_j,
            }),
        ),
        Cmd::Scan { common, u, n, grid, vlen, depth, workers } => (
            common,
            CommandConfig::Scan(ScanConfig {
                u: u.to_uspec()?,
                n_alphabet: n,
                grid,
                vlen,
                depth,
                workers,
            }),
        ),
        Cmd::Dimension { common, n, seed_preset, depth } => (
            common,
            CommandConfig::Dimension(DimensionConfig { n_alphabet: n, preset: seed_preset, depth }),
        ),
        Cmd::Entropy { common, u, preset, v, n, depth } => {
            let uspec = if preset.is_some() { None } else { Some(u.to_uspec()?) };
            (
                common,
                CommandConfig::Entropy(EntropyConfig {
                    preset,
                    u: uspec,
                    v,
                    n_alphabet: n,
                    max_len: depth,
                    budget: cli::DEFAULT_BUDGET,
                }),
            )
        }
    };
    Ok(RunConfig {
        command,
        precision_bits: common.precision_bits,
        format: match common.format {
            Format::JsonLines => OutputFormat::JsonLines,
            Format::Csv => OutputFormat::Csv,
        },
        out: common.out,
    })
}

fn main() {
    let cli = Cli::parse();
    let config = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("abshift: {e}");
            std::process::exit(e.exit_code());
        }
    };
    match cli::run(&config).and_then(|records| cli::write_records(&config, &records)) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("abshift: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
