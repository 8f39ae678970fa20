use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "smithcube",
    version,
    about = "Smith group of the n-cube graph: closed form, structured reduction and generic elimination"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smith group of the n-cube adjacency matrix.
    SmithGroup {
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Largest n for generic elimination (overrides SMITHCUBE_CAP).
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the structural checks.
    Verify {
        #[arg(value_enum)]
        target: Target,
        n: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a matrix in the sparse triple format.
    Matrix {
        #[arg(value_enum)]
        kind: Kind,
        /// Parameters: `n` and, depending on the kind, `t k` or `k`.
        #[arg(required = true)]
        params: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Oracle,
    Reduction,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Bier,
    Conjecture,
    Half,
    Conjugacy,
    Laplacian,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `n`: vertex-basis adjacency
    Adjacency,
    /// `n`: monomial-basis adjacency
    Monomial,
    /// `n`: basis change from monomials to vertices
    Zeta,
    /// `n`: `nI - A`
    Laplacian,
    /// `n` (even): upper block of the monomial matrix
    #[value(name = "M")]
    M,
    /// `n` (even): lower block of the monomial matrix
    #[value(name = "N")]
    N,
    /// `n t k`: inclusion matrix, colex orders
    #[value(name = "W")]
    W,
    /// `n k`: canonical basis `E_k`
    #[value(name = "E")]
    E,
    /// `n k`: `diag(E_0, ..., E_k)`
    #[value(name = "E-block")]
    EBlock,
    /// `n t k`: Wilson diagonal form
    #[value(name = "D")]
    D,
    /// `n` (even): `E(m-1) M E(m)^-1`
    #[value(name = "B")]
    B,
    /// `n` (even): `B` with its diagonal zeroed
    #[value(name = "B-prime")]
    BPrime,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Oracle => "oracle",
            Method::Reduction => "reduction",
            Method::All => "all",
        }
    }
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Bier => "bier",
            Target::Conjecture => "conjecture",
            Target::Half => "half",
            Target::Conjugacy => "conjugacy",
            Target::Laplacian => "laplacian",
        }
    }
}
