use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use triplex::config::{parse_config_file, parse_eps_list, parse_family_list, parse_m_list, parse_q_list};
use triplex::quadspace::Sign;
use triplex::srg::Family;
use triplex::verifier::{default_suite, Instance, DEFAULT_MAX_Q, DEFAULT_SEED};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "triplex", version, about = "Certify triple transitivity of strongly regular graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify instances and write one JSON report per instance
    Verify(RunArgs),
    /// Check the named stabiliser orbits and dump the partitions as CSV
    Orbits(RunArgs),
    /// Write graph6, DIMACS, vertex-label and algebra-basis files
    Export(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    QMinus,
    Vo,
    Reference,
    All,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Instance kind
    #[arg(value_enum)]
    pub kind: Kind,
    /// Field orders for q-minus, comma separated (2..=5; 5 needs --allow-large) [default: 2,3,4]
    #[arg(long, value_parser = |s: &str| parse_q_list(s).map(List))]
    pub q: Option<List<u64>>,
    /// Half dimensions for vo, comma separated (2..=4) [default: 2,3,4]
    #[arg(long, value_parser = |s: &str| parse_m_list(s).map(List))]
    pub m: Option<List<usize>>,
    /// Form types for vo, comma separated (-1, +1) [default: -1,+1]
    #[arg(long, value_parser = |s: &str| parse_eps_list(s).map(List), allow_hyphen_values = true)]
    pub eps: Option<List<Sign>>,
    /// Reference families, e.g. cycle5, grid(3), paley9, complete_multipartite(3,3), paley13, petersen
    #[arg(long, value_parser = |s: &str| parse_family_list(s).map(List))]
    pub family: Option<List<Family>>,
    /// Directory for JSON reports and CSV dumps [default: reports]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for extra random generators [default: 20250]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads [default: all cores]
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Allow Q-(5,5)
    #[arg(long)]
    pub allow_large: bool,
    /// Directory for graph and matrix files
    #[arg(long)]
    pub export: Option<PathBuf>,
    /// key=value file supplying defaults for the flags above
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Include wall-clock timings in the reports
    #[arg(long)]
    pub timings: bool,
}

/// A comma-separated flag value.
#[derive(Debug, Clone)]
pub struct List<T>(pub Vec<T>);

/// Flags merged over the config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub instances: Vec<Instance>,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: Option<usize>,
    pub allow_large: bool,
    pub export: Option<PathBuf>,
    pub timings: bool,
}

impl RunConfig {
    pub fn from_args(args: RunArgs) -> Result<RunConfig, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                parse_config_file(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => Default::default(),
        };
        let allow_large = args.allow_large || file.allow_large.unwrap_or(false);
        let q = args.q.map(|l| l.0).or(file.q).unwrap_or_else(|| (2..=DEFAULT_MAX_Q).collect());
        let m = args.m.map(|l| l.0).or(file.m).unwrap_or_else(|| vec![2, 3, 4]);
        let eps = args.eps.map(|l| l.0).or(file.eps).unwrap_or_else(|| vec![Sign::Minus, Sign::Plus]);
        let families = args.family.map(|l| l.0).or(file.family);
        if !allow_large && matches!(args.kind, Kind::QMinus) {
            if let Some(q) = q.iter().find(|&&q| q > DEFAULT_MAX_Q) {
                return Err(CliError::Usage(format!("q = {q} needs --allow-large")));
            }
        }
        let instances = match args.kind {
            Kind::QMinus => q.into_iter().map(|q| Instance::QMinus { q }).collect(),
            Kind::Vo => m
                .iter()
                .flat_map(|&m| eps.iter().map(move |&eps| Instance::Vo { m, eps }))
                .collect(),
            Kind::Reference => families
                .unwrap_or_else(|| {
                    vec![
                        Family::Cycle5,
                        Family::Grid(3),
                        Family::Grid(4),
                        Family::Paley(9),
                        Family::CompleteMultipartite { parts: 3, size: 3 },
                    ]
                })
                .into_iter()
                .map(|f| if f.is_listed() { Instance::Reference(f) } else { Instance::Control(f) })
                .collect(),
            Kind::All => default_suite(allow_large),
        };
        Ok(RunConfig {
            instances,
            out: args.out.or(file.out).unwrap_or_else(|| PathBuf::from("reports")),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            threads: args.threads.map(usize::from).or(file.threads),
            allow_large,
            export: args.export.or(file.export),
            timings: args.timings || file.timings.unwrap_or(false),
        })
    }
}
